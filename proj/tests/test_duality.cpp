#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fracbil;
using fracbil::testing::load_certificate;
using fracbil::testing::load_problem;
using fracbil::testing::q;

namespace {

DualPoint corpus_dual_point(const BilevelProblem& mq) {
  CertificateFile file = load_certificate("mq_dual.cert");
  DualPoint dp{*file.point, file.certificate};
  StationaryData data = build_dual_stationary_data(mq, dp.anchor);
  attach_weights(file, data, dp.certificate);
  return dp;
}

}  // namespace

TEST_CASE("the bundled dual point is feasible") {
  BilevelProblem mq = load_problem("mq_sec5.blp");
  DualPoint dp = corpus_dual_point(mq);
  auto rep = dual_feasible(mq, dp);
  CHECK(rep.pass);
  CHECK(rep.inclusion.residual_zero);
  for (const auto& r : rep.inclusion.residual) CHECK(r == 0);
  REQUIRE(rep.upper_sign_products.size() == 2);
  CHECK(rep.upper_sign_products[0] == q(1, 4));  // tau_1 * H_1(-1,0)
  CHECK(rep.upper_sign_products[1] == 0);
  CHECK(rep.lower_sign_products[0] == 0);
  CHECK(rep.psi_sign_product == 0.0);
}

TEST_CASE("sign violations make the dual point infeasible") {
  BilevelProblem mq = load_problem("mq_sec5.blp");
  DualPoint dp = corpus_dual_point(mq);
  dp.certificate.eta = q(-1, 6);
  auto rep = dual_feasible(mq, dp);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("dropping the normal-cone element breaks the inclusion") {
  BilevelProblem mq = load_problem("mq_sec5.blp");
  DualPoint dp = corpus_dual_point(mq);
  dp.certificate.z = {q(0), q(0)};
  auto rep = dual_feasible(mq, dp);
  CHECK_FALSE(rep.pass);
  CHECK(rep.inclusion.residual[0] == q(13, 4));
  CHECK(rep.inclusion.residual[1] == q(11, 4));
}

TEST_CASE("weak duality scan is clean on the corpus") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  BilevelProblem mq = load_problem("mq_sec5.blp");
  DualPoint dp = corpus_dual_point(mq);
  OracleConfig cfg;
  cfg.step_override = q(1, 20);
  auto violations = weak_duality_scan(p4, 200, {dp}, 1e-7, cfg);
  CHECK(violations.empty());
}

TEST_CASE("a weak-Pareto primal point cannot be dominated as a dual point") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  AcqReport acq = check_ACQ(p4, *p4.refpoint);
  REQUIRE(acq.verdict == AcqReport::Verdict::Supported);
  ConvexityConfig ccfg;
  ccfg.samples = 150;
  auto sd = strong_duality_construct(p4, *p4.refpoint, acq, ccfg);
  OracleConfig cfg;
  cfg.step_override = q(1, 20);
  auto violations = weak_duality_scan(p4, 100, {sd.dual_point}, 1e-7, cfg);
  CHECK(violations.empty());
}

TEST_CASE("scan reports violations for a dominated anchor") {
  // On the first corpus problem both objective ratios increase along the
  // feasible ray, so an anchor at x = 1 is strictly dominated by the origin.
  BilevelProblem p3 = load_problem("q1_sec3.blp");
  Certificate junk;
  junk.xi = {q(1), q(0)};
  junk.tau = {q(0)};
  junk.rho = {q(0), q(0)};
  junk.eta = q(0);
  junk.z = {q(0), q(0)};
  DualPoint corrupted{{q(1), q(0)}, junk};
  OracleConfig cfg;
  cfg.step_override = q(1, 20);
  auto violations = weak_duality_scan(p3, 200, {corrupted}, 1e-7, cfg);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().dual_anchor == QVec{q(1), q(0)});
}

TEST_CASE("strong duality packages a certified point") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  AcqReport acq = check_ACQ(p4, *p4.refpoint);
  REQUIRE(acq.verdict == AcqReport::Verdict::Supported);
  ConvexityConfig ccfg;
  ccfg.samples = 150;
  auto sd = strong_duality_construct(p4, *p4.refpoint, acq, ccfg);
  CHECK(sd.feasibility.pass);
  CHECK(sd.feasibility.inclusion.residual_zero);
  for (const auto& r : sd.feasibility.inclusion.residual) CHECK(r == 0);
  CHECK(sd.weak_pareto_of_dual);
  CHECK(sd.unsupported_hypotheses.empty());

  BilevelProblem p3 = load_problem("q1_sec3.blp");
  AcqReport acq3 = check_ACQ(p3, *p3.refpoint);
  REQUIRE(acq3.verdict == AcqReport::Verdict::Supported);
  auto sd3 = strong_duality_construct(p3, *p3.refpoint, acq3, ccfg);
  CHECK(sd3.feasibility.pass);
}

TEST_CASE("strong duality refuses without the qualification") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  AcqReport failed;
  failed.verdict = AcqReport::Verdict::Violated;
  CHECK_THROWS_AS(strong_duality_construct(p4, *p4.refpoint, failed), HypothesisError);
}

TEST_CASE("dual objectives at a primal anchor equal the primal objectives") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  Vec point{0.35, 0.0};
  Vec primal = objective_values(p4, point);
  Vec dual = objective_values(p4, point);  // same functions, same point
  CHECK(primal == dual);

  // And the anchored ratios used by the dual inclusion match them exactly.
  QVec anchor{q(7, 20), q(0)};
  for (int k = 1; k <= 2; ++k) {
    Rational ratio = objective_ratio_exact(p4, k, anchor);
    CHECK(to_double(ratio) == Catch::Approx(primal[k - 1]).epsilon(1e-12));
  }
}

TEST_CASE("missing anchored carriers are a declaration error") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");  // carriers only at (0, 0)
  CHECK_THROWS_AS(build_dual_stationary_data(p4, {q(-1), q(0)}), MissingDeclarationError);
}
