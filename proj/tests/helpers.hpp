#pragma once

#include <string>

#include "fracbil/fracbil.hpp"

namespace fracbil::testing {

inline std::string corpus_path(const std::string& name) {
  return std::string(FRACBIL_CORPUS_DIR) + "/" + name;
}

inline BilevelProblem load_problem(const std::string& name) {
  return parse_problem_file(corpus_path(name));
}

inline CertificateFile load_certificate(const std::string& name) {
  return parse_certificate_file(corpus_path(name));
}

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

// Paper certificate attached to its problem's stationarity data.
inline Certificate corpus_certificate(const BilevelProblem& prob, const StationaryData& data,
                                      const std::string& cert_name) {
  CertificateFile file = load_certificate(cert_name);
  Certificate cert = file.certificate;
  attach_weights(file, data, cert);
  (void)prob;
  return cert;
}

}  // namespace fracbil::testing
