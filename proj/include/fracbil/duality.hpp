#pragma once

// The dual side: dual feasibility of an anchored multiplier vector,
// weak-duality scanning of primal feasible samples against dual points, and
// strong-duality construction from a certified primal point.

#include <optional>
#include <string>
#include <vector>

#include "certify.hpp"

namespace fracbil {

// A dual candidate: anchor (v, w) plus the multiplier vector, carrier
// selections and normal-cone element of a stationarity certificate at the
// anchor.
struct DualPoint {
  QVec anchor;
  Certificate certificate;
};

struct DualFeasibility {
  VerifyReport<Rational> inclusion;
  std::vector<Rational> upper_sign_products;  // tau_j * H_j(v, w)
  std::vector<Rational> lower_sign_products;  // rho_s * phi_s(v, w)
  double psi_sign_product = 0;                // eta * Psi(v, w), grid value
  bool signs_ok = true;
  bool pass = false;
  std::vector<std::string> failures;
};

// Builds the stationarity data at the anchor (constraint values included for
// the dual sign conditions rather than complementarity). All constraints
// count as "active" here: the dual inclusion ranges over the full index
// sets.
inline StationaryData build_dual_stationary_data(const BilevelProblem& prob, const QVec& anchor) {
  StationaryData data;
  data.dim = prob.dim();
  data.num_upper = prob.num_upper_constraints();
  data.num_lower = prob.num_lower_constraints();
  for (int k = 1; k <= prob.num_objectives; ++k)
    data.objective_carriers.push_back(objective_carrier_for(prob, k, anchor));
  for (int j = 1; j <= data.num_upper; ++j)
    data.upper_active.push_back({j, carrier_for(prob, {TargetRef::Family::H, j}, anchor)});
  for (int s = 1; s <= data.num_lower; ++s)
    data.lower_active.push_back({s, carrier_for(prob, {TargetRef::Family::Phi, s}, anchor)});
  data.psi_carrier = carrier_for(prob, {TargetRef::Family::Psi, 0}, anchor);
  data.normal_generators = normal_cone_generators(prob);

  Vec anchor_d = to_vec(anchor);
  auto value_of = [&](const PiecewiseFn& fn) -> Rational {
    try {
      return fn.eval_exact_at(anchor);
    } catch (const NotExactError&) {
      return Rational(fn.eval_at(anchor_d));
    }
  };
  for (int j = 1; j <= data.num_upper; ++j)
    data.upper_values.push_back(value_of(prob.upper_constraints[j - 1]));
  for (int s = 1; s <= data.num_lower; ++s)
    data.lower_values.push_back(value_of(prob.lower_constraints[s - 1]));
  return data;
}

// Dual feasibility: (i) the stationarity inclusion at the anchor with the
// anchor's own objective ratios, (ii) sign conditions tau_j H_j >= 0,
// rho_s phi_s >= 0, eta Psi >= 0, (iii) all multipliers nonnegative with the
// objective block nonzero.
inline DualFeasibility dual_feasible(const BilevelProblem& prob, const DualPoint& dp,
                                     double psi_tol = 1e-7) {
  DualFeasibility result;
  StationaryData data = build_dual_stationary_data(prob, dp.anchor);

  // The inclusion residual; complementarity does not apply on the dual side,
  // so only the residual/sign/weight parts of the report are consulted.
  result.inclusion = verify_certificate<Rational>(data, dp.certificate);
  bool inclusion_ok = result.inclusion.residual_zero && result.inclusion.signs_ok &&
                      result.inclusion.xi_nonzero && result.inclusion.weights_ok &&
                      result.inclusion.z_in_normal_cone;
  if (!inclusion_ok)
    for (const auto& f : result.inclusion.failures)
      if (f.find("complementary") == std::string::npos) result.failures.push_back(f);

  for (int j = 0; j < data.num_upper; ++j) {
    Rational prod = dp.certificate.tau[j] * data.upper_values[j];
    result.upper_sign_products.push_back(prod);
    if (prod < 0) {
      result.signs_ok = false;
      result.failures.push_back("tau_" + std::to_string(j + 1) + " * H_" + std::to_string(j + 1) +
                                "(v,w) < 0");
    }
  }
  for (int s = 0; s < data.num_lower; ++s) {
    Rational prod = dp.certificate.rho[s] * data.lower_values[s];
    result.lower_sign_products.push_back(prod);
    if (prod < 0) {
      result.signs_ok = false;
      result.failures.push_back("rho_" + std::to_string(s + 1) + " * phi_" +
                                std::to_string(s + 1) + "(v,w) < 0");
    }
  }
  Vec anchor_d = to_vec(dp.anchor);
  double psi_value = capital_psi(prob, prob.x_part(anchor_d), prob.y_part(anchor_d));
  result.psi_sign_product = to_double(dp.certificate.eta) * psi_value;
  if (result.psi_sign_product < -psi_tol) {
    result.signs_ok = false;
    result.failures.push_back("eta * Psi(v,w) < 0");
  }

  result.pass = inclusion_ok && result.signs_ok;
  return result;
}

struct DualityViolation {
  Vec primal_point;
  QVec dual_anchor;
  Vec primal_objectives;
  Vec dual_objectives;
};

// Weak-duality scan: no primal feasible sample may strictly dominate a dual
// point's objective vector. Violations come back as pairs; the expected
// result under the convexity hypotheses is an empty list.
inline std::vector<DualityViolation> weak_duality_scan(const BilevelProblem& prob,
                                                       int primal_samples,
                                                       const std::vector<DualPoint>& dual_points,
                                                       double dominance_tol = 1e-7,
                                                       const OracleConfig& cfg = {},
                                                       std::uint64_t seed = 3) {
  std::vector<FeasiblePoint> feasible = enumerate_feasible(prob, cfg);
  if (feasible.empty()) throw std::runtime_error("weak-duality scan: no feasible primal samples");

  // Seeded subsample without replacement when the grid is larger than asked.
  std::vector<FeasiblePoint> samples;
  if (static_cast<int>(feasible.size()) <= primal_samples) {
    samples = feasible;
  } else {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(feasible.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int i = 0; i < primal_samples; ++i) {
      std::size_t j = i + rng() % (idx.size() - i);
      std::swap(idx[i], idx[j]);
      samples.push_back(feasible[idx[i]]);
    }
  }

  std::vector<DualityViolation> violations;
  for (const auto& dp : dual_points) {
    Vec dual_obj = objective_values(prob, to_vec(dp.anchor));
    for (const auto& fp : samples)
      if (strictly_dominates(fp.objectives, dual_obj, dominance_tol))
        violations.push_back({fp.point, dp.anchor, fp.objectives, dual_obj});
  }
  return violations;
}

struct StrongDualityResult {
  DualPoint dual_point;
  DualFeasibility feasibility;
  bool weak_pareto_of_dual = false;  // set when the convexity battery is SUPPORTED
  std::vector<std::string> unsupported_hypotheses;
};

struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Packages a certified weak-Pareto primal point as a dual point. Requires a
// SUPPORTED constraint-qualification report; a failed certificate search at
// a point satisfying the hypotheses is flagged as an anomaly.
inline StrongDualityResult strong_duality_construct(const BilevelProblem& prob, const QVec& point,
                                                    const AcqReport& acq,
                                                    const ConvexityConfig& convexity_cfg = {}) {
  if (acq.verdict != AcqReport::Verdict::Supported)
    throw HypothesisError("strong duality needs a SUPPORTED constraint-qualification report");

  StationaryData data = build_stationary_data(prob, point);
  CertificateSearch<Rational> search = find_certificate<Rational>(data);
  if (!search.feasible)
    throw HypothesisError(
        "anomaly: certificate search infeasible at a point satisfying the hypotheses");

  StrongDualityResult result;
  result.dual_point = DualPoint{point, search.certificate};
  result.feasibility = dual_feasible(prob, result.dual_point);

  auto hypotheses = sufficiency_hypotheses(prob, point, convexity_cfg);
  result.weak_pareto_of_dual = true;
  for (const auto& [label, rep] : hypotheses)
    if (!rep.supported) {
      result.weak_pareto_of_dual = false;
      result.unsupported_hypotheses.push_back(label);
    }
  return result;
}

}  // namespace fracbil
