#pragma once

// Certificate exchange format: a text block of exact rational multipliers,
// optional carrier selection weights, and the normal-cone element. A block
// with kind = dual (or any block with an anchor point) doubles as a dual
// point. Emitted and re-ingested by the CLI.
//
//   certificate "q1_sec3"
//   kind = primal
//   point = (0, 0)
//   xi = [1/2, 3/2]
//   tau = [1/4]
//   rho = [3/4, 1/4]
//   eta = 2/3
//   z = (-7/4, -1)
//   weights varphi1 = [1]        # optional, defaults to [1] per carrier

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "certify.hpp"
#include "parse.hpp"

namespace fracbil {

struct CertificateFile {
  std::string problem;
  bool dual = false;
  std::optional<QVec> point;
  Certificate certificate;
  std::map<std::string, std::vector<Rational>> weights;  // by target label
};

namespace detail {

inline std::vector<Rational> parse_rational_list(TokenCursor& cur) {
  cur.expect_punct("[");
  std::vector<Rational> out;
  out.push_back(cur.expect_number());
  while (cur.accept_punct(",")) out.push_back(cur.expect_number());
  cur.expect_punct("]");
  return out;
}

}  // namespace detail

inline CertificateFile parse_certificate(const std::string& source) {
  using detail::Token;
  using detail::TokenCursor;
  CertificateFile file;
  bool have_header = false;

  for (const auto& toks : detail::tokenize(source)) {
    TokenCursor cur(toks);
    const Token head = cur.peek();
    if (cur.accept_keyword("certificate") || cur.accept_keyword("dualpoint")) {
      if (cur.peek().kind != Token::Kind::String) cur.fail("expected a quoted problem name");
      file.problem = cur.next().text;
      if (head.text == "dualpoint") file.dual = true;
      have_header = true;
    } else if (cur.accept_keyword("kind")) {
      cur.expect_punct("=");
      std::string k = cur.expect_ident();
      if (k == "dual")
        file.dual = true;
      else if (k != "primal")
        cur.fail("expected primal or dual");
    } else if (cur.accept_keyword("point")) {
      cur.expect_punct("=");
      file.point = cur.expect_point_tuple();
    } else if (cur.accept_keyword("xi")) {
      cur.expect_punct("=");
      file.certificate.xi = detail::parse_rational_list(cur);
    } else if (cur.accept_keyword("tau")) {
      cur.expect_punct("=");
      file.certificate.tau = detail::parse_rational_list(cur);
    } else if (cur.accept_keyword("rho")) {
      cur.expect_punct("=");
      file.certificate.rho = detail::parse_rational_list(cur);
    } else if (cur.accept_keyword("eta")) {
      cur.expect_punct("=");
      file.certificate.eta = cur.expect_number();
    } else if (cur.accept_keyword("z")) {
      cur.expect_punct("=");
      QVec z = cur.expect_point_tuple();
      file.certificate.z.assign(z.begin(), z.end());
    } else if (cur.accept_keyword("weights")) {
      std::string target = cur.expect_ident();
      cur.expect_punct("=");
      file.weights[target] = detail::parse_rational_list(cur);
    } else {
      cur.fail("unknown certificate declaration");
    }
    if (!cur.at_end()) cur.fail("trailing input after declaration");
  }
  if (!have_header) throw ParseError("missing 'certificate \"<name>\"' header", 1, 1);
  if (file.certificate.xi.empty()) throw ParseError("certificate has no xi block", 1, 1);
  return file;
}

inline CertificateFile parse_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open certificate file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_certificate(buf.str());
}

// Distributes weight blocks onto the certificate using the stationarity
// data's carrier layout.
inline void attach_weights(const CertificateFile& file, const StationaryData& data,
                           Certificate& cert) {
  auto lookup = [&](const std::string& label) -> std::optional<std::vector<Rational>> {
    auto it = file.weights.find(label);
    if (it == file.weights.end()) return std::nullopt;
    return it->second;
  };
  cert.objective_weights.assign(data.objective_carriers.size(), {});
  for (std::size_t k = 0; k < data.objective_carriers.size(); ++k)
    if (auto w = lookup("varphi" + std::to_string(k + 1))) cert.objective_weights[k] = *w;
  cert.upper_weights.assign(data.upper_active.size(), {});
  for (std::size_t a = 0; a < data.upper_active.size(); ++a)
    if (auto w = lookup("H" + std::to_string(data.upper_active[a].index)))
      cert.upper_weights[a] = *w;
  cert.lower_weights.assign(data.lower_active.size(), {});
  for (std::size_t a = 0; a < data.lower_active.size(); ++a)
    if (auto w = lookup("phi" + std::to_string(data.lower_active[a].index)))
      cert.lower_weights[a] = *w;
  if (auto w = lookup("Psi")) cert.psi_weights = *w;
}

inline std::string format_rational_list(const std::vector<Rational>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_rational(v[i]);
  }
  return s + "]";
}

inline std::string print_certificate(const std::string& problem, const Certificate& cert,
                                     bool dual, const std::optional<QVec>& point) {
  std::ostringstream out;
  out << "certificate \"" << problem << "\"\n";
  out << "kind = " << (dual ? "dual" : "primal") << "\n";
  if (point) out << "point = " << format_vec(*point) << "\n";
  out << "xi = " << format_rational_list(cert.xi) << "\n";
  if (!cert.tau.empty()) out << "tau = " << format_rational_list(cert.tau) << "\n";
  if (!cert.rho.empty()) out << "rho = " << format_rational_list(cert.rho) << "\n";
  out << "eta = " << format_rational(cert.eta) << "\n";
  QVec z(cert.z.begin(), cert.z.end());
  out << "z = " << format_vec(z) << "\n";
  auto emit_weights = [&](const std::string& label, const std::vector<Rational>& w) {
    if (w.size() > 1) out << "weights " << label << " = " << format_rational_list(w) << "\n";
  };
  for (std::size_t k = 0; k < cert.objective_weights.size(); ++k)
    emit_weights("varphi" + std::to_string(k + 1), cert.objective_weights[k]);
  return out.str();
}

}  // namespace fracbil
