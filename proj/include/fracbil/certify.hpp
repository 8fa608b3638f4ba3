#pragma once

// Optimality-condition engine: active sets, the zero-membership core,
// stationarity certificate search and verification, the Abadie-type
// constraint qualification check, and generalized convexity testing.
//
// Certificate arithmetic is exact: carriers and multipliers are rationals,
// and the search is a pure LP after the substitution that folds each
// multiplier into its carrier's convex weights. A float instantiation of
// the same code path exists for quick checks.

#include <optional>
#include <string>
#include <vector>

#include "dini.hpp"
#include "linprog.hpp"
#include "single_level.hpp"
#include "tangent.hpp"

namespace fracbil {

namespace detail {

template <class S>
S to_scalar(const Rational& r);
template <>
inline Rational to_scalar<Rational>(const Rational& r) { return r; }
template <>
inline double to_scalar<double>(const Rational& r) { return to_double(r); }

template <class S>
std::vector<S> to_scalar_vec(const QVec& v) {
  std::vector<S> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_scalar<S>(v[i]);
  return out;
}

}  // namespace detail

// 1-based active index sets at a point.
struct ActiveSets {
  std::vector<int> upper_active, upper_inactive;  // H_j == 0 vs != 0
  std::vector<int> lower_active, lower_inactive;  // phi_s == 0 vs != 0
};

inline ActiveSets active_sets(const BilevelProblem& prob, const QVec& point,
                              const Rational& tol = Rational(1, 1000000000)) {
  ActiveSets sets;
  Vec point_d = to_vec(point);
  auto is_active = [&](const PiecewiseFn& fn) {
    try {
      Rational v = fn.eval_exact_at(point);
      return abs(v) <= tol;
    } catch (const NotExactError&) {
      return std::fabs(fn.eval_at(point_d)) <= to_double(tol);
    }
  };
  for (int j = 1; j <= prob.num_upper_constraints(); ++j)
    (is_active(prob.upper_constraints[j - 1]) ? sets.upper_active : sets.upper_inactive)
        .push_back(j);
  for (int s = 1; s <= prob.num_lower_constraints(); ++s)
    (is_active(prob.lower_constraints[s - 1]) ? sets.lower_active : sets.lower_inactive)
        .push_back(s);
  return sets;
}

struct ActiveCarrier {
  int index = 0;  // 1-based constraint index
  std::vector<QVec> points;
};

// Everything the stationarity inclusion needs at one point: the scalarized
// objective carriers, carriers of the active constraints and of the
// auxiliary function, the normal-cone generators, and the constraint values
// for complementarity.
struct StationaryData {
  int dim = 0;
  std::vector<std::vector<QVec>> objective_carriers;
  std::vector<ActiveCarrier> upper_active;
  std::vector<ActiveCarrier> lower_active;
  std::vector<QVec> psi_carrier;
  std::vector<QVec> normal_generators;
  int num_upper = 0, num_lower = 0;
  std::vector<Rational> upper_values;  // H_j at the point, all j
  std::vector<Rational> lower_values;  // phi_s at the point, all s
};

template <class S>
struct CertificateT {
  std::vector<S> xi;
  std::vector<S> tau;
  std::vector<S> rho;
  S eta{0};
  // Convex weights selecting one element of each carrier's hull. Empty
  // weight vectors default to [1] for singleton carriers.
  std::vector<std::vector<S>> objective_weights;
  std::vector<std::vector<S>> upper_weights;
  std::vector<std::vector<S>> lower_weights;
  std::vector<S> psi_weights;
  std::vector<S> z;
};
using Certificate = CertificateT<Rational>;
using FloatCertificate = CertificateT<double>;

template <class S>
struct MembershipWitness {
  bool member = false;
  std::vector<std::vector<S>> part_weights;
  std::vector<S> cone_coefficients;
};

// Is 0 in sum_i conv(part_i) + pos(cone_gens)? Decided by LP feasibility;
// the witness carries convex weights per part and cone coefficients.
template <class S>
MembershipWitness<S> membership_zero(const std::vector<std::vector<QVec>>& parts,
                                     const std::vector<QVec>& cone_gens, int dim) {
  std::size_t cols = cone_gens.size();
  for (const auto& p : parts) {
    if (p.empty()) throw std::invalid_argument("membership_zero: empty part");
    cols += p.size();
  }
  const std::size_t rows = dim + parts.size();
  std::vector<std::vector<S>> A(rows, std::vector<S>(cols, S(0)));
  std::vector<S> b(rows, S(0));

  std::size_t col = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& v : parts[i]) {
      for (int r = 0; r < dim; ++r) A[r][col] = detail::to_scalar<S>(v[r]);
      A[dim + i][col] = S(1);  // weights of part i sum to one
      ++col;
    }
    b[dim + i] = S(1);
  }
  for (const auto& g : cone_gens) {
    for (int r = 0; r < dim; ++r) A[r][col] = detail::to_scalar<S>(g[r]);
    ++col;
  }

  LpResult<S> lp = solve_equality_feasibility<S>(std::move(A), std::move(b));
  MembershipWitness<S> w;
  w.member = lp.feasible;
  if (!lp.feasible) return w;
  col = 0;
  for (const auto& p : parts) {
    std::vector<S> weights;
    for (std::size_t m = 0; m < p.size(); ++m) weights.push_back(lp.x[col++]);
    w.part_weights.push_back(std::move(weights));
  }
  for (std::size_t g = 0; g < cone_gens.size(); ++g) w.cone_coefficients.push_back(lp.x[col++]);
  return w;
}

template <class S>
struct CertificateSearch {
  bool feasible = false;
  CertificateT<S> certificate;
};

// Searches for nonnegative multipliers (xi, tau, rho, eta), carrier
// selections, and a normal-cone element summing to zero, with the xi block
// normalized to total one. The bilinear multiplier-times-weight products
// are linearized by letting each carrier's raw weights sum to its
// multiplier, which makes the whole search one LP feasibility problem.
// Complementarity is structural: only active constraints enter.
template <class S>
CertificateSearch<S> find_certificate(const StationaryData& data) {
  struct Block {
    const std::vector<QVec>* carrier;
    std::size_t col0;
  };
  std::vector<Block> blocks;
  std::size_t cols = 0;
  auto add_block = [&](const std::vector<QVec>& carrier) {
    if (carrier.empty()) throw std::invalid_argument("find_certificate: empty carrier");
    blocks.push_back({&carrier, cols});
    cols += carrier.size();
  };
  for (const auto& c : data.objective_carriers) add_block(c);
  const std::size_t n_obj = data.objective_carriers.size();
  for (const auto& c : data.upper_active) add_block(c.points);
  for (const auto& c : data.lower_active) add_block(c.points);
  bool has_psi = !data.psi_carrier.empty();
  if (has_psi) add_block(data.psi_carrier);
  std::size_t cone_col0 = cols;
  cols += data.normal_generators.size();

  const std::size_t rows = data.dim + 1;
  std::vector<std::vector<S>> A(rows, std::vector<S>(cols, S(0)));
  std::vector<S> b(rows, S(0));
  for (const auto& blk : blocks) {
    std::size_t c = blk.col0;
    for (const auto& v : *blk.carrier) {
      for (int r = 0; r < data.dim; ++r) A[r][c] = detail::to_scalar<S>(v[r]);
      ++c;
    }
  }
  std::size_t c = cone_col0;
  for (const auto& g : data.normal_generators) {
    for (int r = 0; r < data.dim; ++r) A[r][c] = detail::to_scalar<S>(g[r]);
    ++c;
  }
  // Normalization row: the objective multipliers sum to one.
  for (std::size_t k = 0; k < n_obj; ++k) {
    const Block& blk = blocks[k];
    for (std::size_t m = 0; m < blk.carrier->size(); ++m) A[data.dim][blk.col0 + m] = S(1);
  }
  b[data.dim] = S(1);

  LpResult<S> lp = solve_equality_feasibility<S>(std::move(A), std::move(b));
  CertificateSearch<S> out;
  if (!lp.feasible) return out;
  out.feasible = true;

  CertificateT<S>& cert = out.certificate;
  auto extract = [&](const Block& blk, S& multiplier, std::vector<S>& weights) {
    multiplier = S(0);
    std::vector<S> raw;
    for (std::size_t m = 0; m < blk.carrier->size(); ++m) {
      raw.push_back(lp.x[blk.col0 + m]);
      multiplier += raw.back();
    }
    weights.assign(raw.size(), S(0));
    if (multiplier > S(0))
      for (std::size_t m = 0; m < raw.size(); ++m) weights[m] = raw[m] / multiplier;
  };

  std::size_t bi = 0;
  cert.xi.resize(n_obj);
  cert.objective_weights.resize(n_obj);
  for (std::size_t k = 0; k < n_obj; ++k) extract(blocks[bi++], cert.xi[k], cert.objective_weights[k]);
  cert.tau.assign(data.num_upper, S(0));
  cert.upper_weights.resize(data.upper_active.size());
  for (std::size_t a = 0; a < data.upper_active.size(); ++a)
    extract(blocks[bi++], cert.tau[data.upper_active[a].index - 1], cert.upper_weights[a]);
  cert.rho.assign(data.num_lower, S(0));
  cert.lower_weights.resize(data.lower_active.size());
  for (std::size_t a = 0; a < data.lower_active.size(); ++a)
    extract(blocks[bi++], cert.rho[data.lower_active[a].index - 1], cert.lower_weights[a]);
  if (has_psi) extract(blocks[bi++], cert.eta, cert.psi_weights);
  cert.z.assign(data.dim, S(0));
  for (std::size_t g = 0; g < data.normal_generators.size(); ++g) {
    S coeff = lp.x[cone_col0 + g];
    for (int r = 0; r < data.dim; ++r)
      cert.z[r] += coeff * detail::to_scalar<S>(data.normal_generators[g][r]);
  }
  return out;
}

template <class S>
struct VerifyReport {
  std::vector<S> residual;
  std::vector<S> complementarity_upper;
  std::vector<S> complementarity_lower;
  bool residual_zero = false;
  bool complementarity_zero = false;
  bool signs_ok = true;
  bool xi_nonzero = true;
  bool weights_ok = true;
  bool z_in_normal_cone = true;
  bool pass = false;
  std::vector<std::string> failures;
};

// Recomputes the stationarity sum with the certificate's own multipliers
// and selections and reports every defect: residual coordinates,
// complementarity products, sign violations, weight defects, and the
// normal-cone membership of z. Exact zeros are demanded in rational mode.
template <class S>
VerifyReport<S> verify_certificate(const StationaryData& data, const CertificateT<S>& cert,
                                   const S& tol = ScalarTraits<S>::tol()) {
  VerifyReport<S> report;
  auto fail = [&](const std::string& why) { report.failures.push_back(why); };

  if (cert.xi.size() != data.objective_carriers.size() ||
      static_cast<int>(cert.tau.size()) != data.num_upper ||
      static_cast<int>(cert.rho.size()) != data.num_lower ||
      static_cast<int>(cert.z.size()) != data.dim)
    throw std::invalid_argument("verify_certificate: mismatched carriers");

  auto select = [&](const std::vector<QVec>& carrier, const std::vector<S>& weights,
                    const S& multiplier, const std::string& label) {
    std::vector<S> w = weights;
    if (w.empty()) {
      if (carrier.size() != 1)
        throw std::invalid_argument("verify_certificate: " + label +
                                    " needs selection weights for a multi-element carrier");
      w.assign(1, S(1));
    }
    if (w.size() != carrier.size())
      throw std::invalid_argument("verify_certificate: mismatched carriers for " + label);
    S sum(0);
    std::vector<S> sel(data.dim, S(0));
    for (std::size_t m = 0; m < w.size(); ++m) {
      if (w[m] < -tol) {
        report.weights_ok = false;
        fail(label + ": negative selection weight");
      }
      sum += w[m];
      for (int r = 0; r < data.dim; ++r) sel[r] += w[m] * detail::to_scalar<S>(carrier[m][r]);
    }
    S defect = sum - S(1);
    if (multiplier > tol && !(defect <= tol && -defect <= tol)) {
      report.weights_ok = false;
      fail(label + ": selection weights do not sum to one");
    }
    return sel;
  };

  std::vector<S> residual(data.dim, S(0));
  auto accumulate = [&](const S& multiplier, const std::vector<S>& sel) {
    for (int r = 0; r < data.dim; ++r) residual[r] += multiplier * sel[r];
  };

  for (std::size_t k = 0; k < cert.xi.size(); ++k) {
    std::vector<S> w =
        k < cert.objective_weights.size() ? cert.objective_weights[k] : std::vector<S>{};
    accumulate(cert.xi[k],
               select(data.objective_carriers[k], w, cert.xi[k], "objective " + std::to_string(k + 1)));
  }
  for (std::size_t a = 0; a < data.upper_active.size(); ++a) {
    const ActiveCarrier& ac = data.upper_active[a];
    std::vector<S> w = a < cert.upper_weights.size() ? cert.upper_weights[a] : std::vector<S>{};
    accumulate(cert.tau[ac.index - 1],
               select(ac.points, w, cert.tau[ac.index - 1], "H" + std::to_string(ac.index)));
  }
  for (std::size_t a = 0; a < data.lower_active.size(); ++a) {
    const ActiveCarrier& ac = data.lower_active[a];
    std::vector<S> w = a < cert.lower_weights.size() ? cert.lower_weights[a] : std::vector<S>{};
    accumulate(cert.rho[ac.index - 1],
               select(ac.points, w, cert.rho[ac.index - 1], "phi" + std::to_string(ac.index)));
  }
  if (!data.psi_carrier.empty())
    accumulate(cert.eta, select(data.psi_carrier, cert.psi_weights, cert.eta, "Psi"));
  for (int r = 0; r < data.dim; ++r) residual[r] += cert.z[r];
  report.residual = residual;
  report.residual_zero = true;
  for (const S& v : residual)
    if (!(v <= tol && -v <= tol)) report.residual_zero = false;
  if (!report.residual_zero) fail("stationarity residual is not zero");

  // Complementary slackness over the full index sets.
  report.complementarity_zero = true;
  for (int j = 0; j < data.num_upper; ++j) {
    S prod = cert.tau[j] * detail::to_scalar<S>(data.upper_values[j]);
    report.complementarity_upper.push_back(prod);
    if (!(prod <= tol && -prod <= tol)) report.complementarity_zero = false;
  }
  for (int s = 0; s < data.num_lower; ++s) {
    S prod = cert.rho[s] * detail::to_scalar<S>(data.lower_values[s]);
    report.complementarity_lower.push_back(prod);
    if (!(prod <= tol && -prod <= tol)) report.complementarity_zero = false;
  }
  if (!report.complementarity_zero) fail("complementary slackness violated");

  for (const S& v : cert.xi)
    if (v < -tol) report.signs_ok = false;
  for (const S& v : cert.tau)
    if (v < -tol) report.signs_ok = false;
  for (const S& v : cert.rho)
    if (v < -tol) report.signs_ok = false;
  if (cert.eta < -tol) report.signs_ok = false;
  if (!report.signs_ok) fail("negative multiplier");

  report.xi_nonzero = false;
  for (const S& v : cert.xi)
    if (v > tol) report.xi_nonzero = true;
  if (!report.xi_nonzero) fail("objective multipliers are all zero");

  if (data.normal_generators.empty()) {
    for (const S& v : cert.z)
      if (!(v <= tol && -v <= tol)) report.z_in_normal_cone = false;
  } else {
    std::vector<std::vector<S>> gens;
    for (const auto& g : data.normal_generators) gens.push_back(detail::to_scalar_vec<S>(g));
    report.z_in_normal_cone = in_positive_span<S>(gens, cert.z);
  }
  if (!report.z_in_normal_cone) fail("z is not in the normal cone");

  report.pass = report.residual_zero && report.complementarity_zero && report.signs_ok &&
                report.xi_nonzero && report.weights_ok && report.z_in_normal_cone;
  return report;
}

// ----- data assembly from a problem instance -----

inline std::vector<QVec> carrier_for(const BilevelProblem& prob, const TargetRef& target,
                                     const QVec& anchor) {
  if (const ConvexificatorDecl* d = prob.find_convexificator(target, anchor)) return d->points;
  throw MissingDeclarationError("no convexificator declared for " + target.label() + " at " +
                                format_vec(anchor));
}

// Scalarized-objective carrier at the anchor: a declared varphi carrier if
// present, otherwise the elementwise sum of the F carrier and ratio-scaled
// negG carrier.
inline std::vector<QVec> objective_carrier_for(const BilevelProblem& prob, int k,
                                               const QVec& anchor) {
  TargetRef direct{TargetRef::Family::Varphi, k};
  if (const ConvexificatorDecl* d = prob.find_convexificator(direct, anchor)) return d->points;
  TargetRef fref{TargetRef::Family::F, k};
  TargetRef gref{TargetRef::Family::NegG, k};
  const ConvexificatorDecl* fd = prob.find_convexificator(fref, anchor);
  const ConvexificatorDecl* gd = prob.find_convexificator(gref, anchor);
  if (!fd || !gd)
    throw MissingDeclarationError("no convexificator declared for varphi" + std::to_string(k) +
                                  " (or the F" + std::to_string(k) + "/negG" + std::to_string(k) +
                                  " pair) at " + format_vec(anchor));
  Rational ratio = objective_ratio_exact(prob, k, anchor);
  std::vector<QVec> out;
  for (const auto& a : fd->points)
    for (const auto& b : gd->points) {
      QVec v(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i] + ratio * b[i];
      out.push_back(std::move(v));
    }
  return out;
}

inline std::vector<QVec> normal_cone_generators(const BilevelProblem& prob) {
  if (!prob.continuity_cone)
    throw MissingDeclarationError("no continuity cone D declared");
  Cone n = normal_cone_at_origin(*prob.continuity_cone);
  std::vector<QVec> gens;
  for (const auto& g : ensure_generators(n)) gens.push_back(to_qvec(g));
  return gens;
}

inline StationaryData build_stationary_data(const BilevelProblem& prob, const QVec& point,
                                            const Rational& active_tol = Rational(1, 1000000000)) {
  StationaryData data;
  data.dim = prob.dim();
  data.num_upper = prob.num_upper_constraints();
  data.num_lower = prob.num_lower_constraints();

  ActiveSets sets = active_sets(prob, point, active_tol);
  for (int k = 1; k <= prob.num_objectives; ++k)
    data.objective_carriers.push_back(objective_carrier_for(prob, k, point));
  for (int j : sets.upper_active)
    data.upper_active.push_back({j, carrier_for(prob, {TargetRef::Family::H, j}, point)});
  for (int s : sets.lower_active)
    data.lower_active.push_back({s, carrier_for(prob, {TargetRef::Family::Phi, s}, point)});
  data.psi_carrier = carrier_for(prob, {TargetRef::Family::Psi, 0}, point);
  data.normal_generators = normal_cone_generators(prob);

  Vec point_d = to_vec(point);
  auto value_of = [&](const PiecewiseFn& fn) -> Rational {
    try {
      return fn.eval_exact_at(point);
    } catch (const NotExactError&) {
      return Rational(fn.eval_at(point_d));
    }
  };
  for (int j = 1; j <= data.num_upper; ++j)
    data.upper_values.push_back(value_of(prob.upper_constraints[j - 1]));
  for (int s = 1; s <= data.num_lower; ++s)
    data.lower_values.push_back(value_of(prob.lower_constraints[s - 1]));
  return data;
}

inline StationaryData scale_carriers(const StationaryData& data, const Rational& factor) {
  StationaryData out = data;
  auto scale = [&](std::vector<QVec>& carrier) {
    for (auto& v : carrier)
      for (auto& c : v) c *= factor;
  };
  for (auto& c : out.objective_carriers) scale(c);
  for (auto& c : out.upper_active) scale(c.points);
  for (auto& c : out.lower_active) scale(c.points);
  scale(out.psi_carrier);
  return out;
}

// ----- constraint qualification -----

struct AcqConfig {
  int samples = 50;
  double feas_tol = 1e-9;
  double membership_tol = 1e-9;
  TangentConfig tangent;
  std::uint64_t seed = 7;
};

struct AcqReport {
  enum class Verdict { Supported, Violated } verdict = Verdict::Supported;
  Cone polar_cone;                      // polar of the union set
  std::vector<Vec> tested_directions;
  std::optional<Vec> witness;
};

// Builds the union of the active-constraint carriers, the auxiliary-function
// carrier, and the normal-cone generators; polars it; and checks that every
// sampled polar member is a sampled tangent direction of the reformulated
// feasible set intersected with D.
inline AcqReport check_ACQ(const BilevelProblem& prob, const QVec& point,
                           const AcqConfig& cfg = {}) {
  const int dim = prob.dim();
  if (dim > 4) throw std::invalid_argument("ACQ check requires dimension <= 4");
  AcqReport report;

  ActiveSets sets = active_sets(prob, point);
  std::vector<Vec> union_points;
  auto add_carrier = [&](const std::vector<QVec>& pts) {
    for (const auto& p : pts) union_points.push_back(to_vec(p));
  };
  for (int j : sets.upper_active) add_carrier(carrier_for(prob, {TargetRef::Family::H, j}, point));
  for (int s : sets.lower_active)
    add_carrier(carrier_for(prob, {TargetRef::Family::Phi, s}, point));
  add_carrier(carrier_for(prob, {TargetRef::Family::Psi, 0}, point));
  for (const auto& g : normal_cone_generators(prob)) union_points.push_back(to_vec(g));

  report.polar_cone = polar_of_points(union_points, dim);
  const std::vector<Vec>& gens = *report.polar_cone.generators;

  std::vector<Vec> dirs;
  for (const auto& g : gens) {
    Vec u = normalized(g);
    if (!is_zero(u)) dirs.push_back(u);
  }
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.samples && !gens.empty(); ++i) {
    Vec u(dim, 0.0);
    for (const auto& g : gens) {
      double c = uniform01(rng);
      for (int r = 0; r < dim; ++r) u[r] += c * g[r];
    }
    Vec un = normalized(u);
    if (!is_zero(un)) dirs.push_back(un);
  }
  report.tested_directions = dirs;

  Cone D = prob.continuity_cone ? *prob.continuity_cone : Cone::full_space(dim);
  MembershipOracle in_E = [&](const Vec& p) {
    return is_in_E(prob, prob.x_part(p), prob.y_part(p), cfg.feas_tol);
  };
  Vec base = to_vec(point);
  for (const auto& d : dirs) {
    bool in_D = cone_membership(D, d, cfg.membership_tol);
    bool in_T = tangent_direction_test(in_E, base, d, cfg.tangent) == DirectionVerdict::In;
    if (!(in_D && in_T)) {
      report.verdict = AcqReport::Verdict::Violated;
      report.witness = d;
      return report;
    }
  }
  return report;
}

// ----- generalized convexity -----

enum class GenConvexKind { Convex, Quasi, Pseudo };

inline std::string to_string(GenConvexKind k) {
  switch (k) {
    case GenConvexKind::Convex: return "convex";
    case GenConvexKind::Quasi: return "quasiconvex";
    case GenConvexKind::Pseudo: return "pseudoconvex";
  }
  return "?";
}

struct ConvexityConfig {
  int samples = 500;
  std::uint64_t seed = 11;
  double hypothesis_tol = 1e-9;
  double membership_tol = 1e-12;
};

struct ConvexityCounterexample {
  Vec point;
  double fn_value = 0;
  Vec carrier_element;
  double inner = 0;
};

struct ConvexityReport {
  GenConvexKind kind = GenConvexKind::Quasi;
  bool supported = true;
  int tested = 0;
  std::vector<ConvexityCounterexample> counterexamples;
};

// Samples points whose offset from the reference lies in D and checks the
// defining implication for every carrier element. Violations are
// conclusive; SUPPORTED is sampled evidence.
inline ConvexityReport check_generalized_convexity(const ScalarFn& h,
                                                   const std::vector<QVec>& carrier,
                                                   const QVec& ref, GenConvexKind kind,
                                                   const Cone& D, const Box& sample_box,
                                                   const ConvexityConfig& cfg = {}) {
  ConvexityReport report;
  report.kind = kind;
  Vec ref_d = to_vec(ref);
  double h_ref = h(ref_d);
  std::mt19937_64 rng(cfg.seed);
  const std::uint64_t grid_total = sample_box.total_points();
  const int max_attempts = cfg.samples * 200;
  int accepted = 0;
  for (int attempt = 0; attempt < max_attempts && accepted < cfg.samples; ++attempt) {
    Vec p(sample_box.dim());
    if (attempt % 2 == 0) {
      p = sample_box.point(rng() % grid_total);
    } else {
      for (int i = 0; i < sample_box.dim(); ++i)
        p[i] = uniform_in(rng, sample_box.axes[i].lo_d, sample_box.axes[i].hi_d);
    }
    Vec diff = p - ref_d;
    if (!cone_membership(D, diff, cfg.membership_tol)) continue;
    if (kind == GenConvexKind::Pseudo && is_zero(diff, 0)) continue;
    ++accepted;

    double hp;
    try {
      hp = h(p);
    } catch (const EvalError&) {
      continue;
    }
    for (const auto& xq : carrier) {
      Vec xstar = to_vec(xq);
      double inner = dot(xstar, diff);
      bool ok = true;
      switch (kind) {
        case GenConvexKind::Convex:
          ok = hp - h_ref >= inner - cfg.hypothesis_tol;
          break;
        case GenConvexKind::Quasi:
          ok = !(hp <= h_ref + cfg.hypothesis_tol) || inner <= cfg.hypothesis_tol;
          break;
        case GenConvexKind::Pseudo:
          ok = !(hp < h_ref - cfg.hypothesis_tol) || inner < 0;
          break;
      }
      if (!ok) {
        report.supported = false;
        report.counterexamples.push_back({p, hp, xstar, inner});
        if (report.counterexamples.size() >= 5) {
          report.tested = accepted;
          return report;
        }
      }
    }
  }
  if (accepted < cfg.samples)
    throw InsufficientSamplesError("convexity check: found only " + std::to_string(accepted) +
                                   " of " + std::to_string(cfg.samples) +
                                   " sample points with offset in D");
  report.tested = accepted;
  return report;
}

inline Box joint_box(const BilevelProblem& prob) {
  Box b = prob.x_box;
  b.axes.insert(b.axes.end(), prob.y_box.axes.begin(), prob.y_box.axes.end());
  return b;
}

// The hypothesis battery for the sufficiency theorem at a point:
// pseudoconvexity of every scalarized objective, quasiconvexity of every
// active constraint and of the auxiliary function.
inline std::vector<std::pair<std::string, ConvexityReport>> sufficiency_hypotheses(
    const BilevelProblem& prob, const QVec& point, const ConvexityConfig& cfg = {}) {
  std::vector<std::pair<std::string, ConvexityReport>> out;
  Cone D = prob.continuity_cone ? *prob.continuity_cone : Cone::full_space(prob.dim());
  Box box = joint_box(prob);
  ActiveSets sets = active_sets(prob, point);

  for (int k = 1; k <= prob.num_objectives; ++k) {
    ScalarizedObjective s = make_scalarization(prob, k, point);
    PiecewiseFn fn = s.fn;
    auto carrier = objective_carrier_for(prob, k, point);
    ScalarFn h = [fn](const Vec& p) { return fn.eval_at(p); };
    out.emplace_back("varphi" + std::to_string(k) + " pseudoconvex",
                     check_generalized_convexity(h, carrier, point, GenConvexKind::Pseudo, D, box,
                                                 cfg));
  }
  for (int j : sets.upper_active) {
    const PiecewiseFn& fn = prob.upper_constraints[j - 1];
    auto carrier = carrier_for(prob, {TargetRef::Family::H, j}, point);
    out.emplace_back("H" + std::to_string(j) + " quasiconvex",
                     check_generalized_convexity(as_scalar_fn(fn), carrier, point,
                                                 GenConvexKind::Quasi, D, box, cfg));
  }
  for (int s : sets.lower_active) {
    const PiecewiseFn& fn = prob.lower_constraints[s - 1];
    auto carrier = carrier_for(prob, {TargetRef::Family::Phi, s}, point);
    out.emplace_back("phi" + std::to_string(s) + " quasiconvex",
                     check_generalized_convexity(as_scalar_fn(fn), carrier, point,
                                                 GenConvexKind::Quasi, D, box, cfg));
  }
  {
    auto carrier = carrier_for(prob, {TargetRef::Family::Psi, 0}, point);
    ScalarFn h = [&prob](const Vec& p) {
      return capital_psi(prob, prob.x_part(p), prob.y_part(p));
    };
    out.emplace_back("Psi quasiconvex",
                     check_generalized_convexity(h, carrier, point, GenConvexKind::Quasi, D, box,
                                                 cfg));
  }
  return out;
}

// ----- sufficiency verdict -----

struct SufficiencyClaim {
  bool certified = false;
  std::vector<std::string> failed_hypotheses;
  std::optional<bool> oracle_weak_pareto;  // unset when the oracle was skipped
  bool anomaly = false;                    // certified but the oracle disagrees
};

inline SufficiencyClaim sufficiency_verdict(
    bool certificate_pass,
    const std::vector<std::pair<std::string, ConvexityReport>>& hypotheses,
    const std::optional<bool>& oracle_weak_pareto) {
  SufficiencyClaim claim;
  claim.certified = certificate_pass;
  if (!certificate_pass) claim.failed_hypotheses.push_back("stationarity certificate");
  for (const auto& [label, rep] : hypotheses)
    if (!rep.supported) {
      claim.certified = false;
      claim.failed_hypotheses.push_back(label);
    }
  claim.oracle_weak_pareto = oracle_weak_pareto;
  if (claim.certified && oracle_weak_pareto && !*oracle_weak_pareto) claim.anomaly = true;
  return claim;
}

}  // namespace fracbil
