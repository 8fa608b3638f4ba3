// Acceptance suite: every criterion prints one PASS/FAIL line. Expected
// values come from the bundled corpus certificates and from independent
// oracles computed inside the tests (grid nearest-point distance, fine
// one-dimensional scans, brute-force dominance checks).

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>

#include "helpers.hpp"

using namespace fracbil;
using fracbil::testing::corpus_certificate;
using fracbil::testing::load_certificate;
using fracbil::testing::load_problem;
using fracbil::testing::q;

namespace {

void criterion(int number, const char* label, bool ok) {
  std::printf("ACCEPTANCE %02d %s - %s\n", number, ok ? "PASS" : "FAIL", label);
  std::fflush(stdout);
  REQUIRE(ok);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool exact_zero_residual(const VerifyReport<Rational>& rep) {
  if (!rep.pass) return false;
  for (const auto& r : rep.residual)
    if (r != 0) return false;
  for (const auto& r : rep.complementarity_upper)
    if (r != 0) return false;
  for (const auto& r : rep.complementarity_lower)
    if (r != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("criterion 1: first bundled certificate verifies exactly") {
  BilevelProblem p3 = load_problem("q1_sec3.blp");
  StationaryData data = build_stationary_data(p3, *p3.refpoint);
  Certificate cert = corpus_certificate(p3, data, "q1_sec3.cert");
  auto t0 = std::chrono::steady_clock::now();
  auto rep = verify_certificate<Rational>(data, cert);
  double elapsed = seconds_since(t0);
  criterion(1, "exact certificate verification on the first corpus problem",
            exact_zero_residual(rep) && elapsed < 0.1);
}

TEST_CASE("criterion 2: second bundled certificate verifies exactly") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  StationaryData data = build_stationary_data(p4, *p4.refpoint);
  Certificate cert = corpus_certificate(p4, data, "q1_sec4.cert");
  auto rep = verify_certificate<Rational>(data, cert);
  criterion(2, "exact certificate verification on the second corpus problem",
            exact_zero_residual(rep));
}

TEST_CASE("criterion 3: dual certificate verifies exactly and is feasible") {
  BilevelProblem mq = load_problem("mq_sec5.blp");
  CertificateFile file = load_certificate("mq_dual.cert");
  DualPoint dp{*file.point, file.certificate};
  StationaryData data = build_dual_stationary_data(mq, dp.anchor);
  attach_weights(file, data, dp.certificate);

  auto rep = verify_certificate<Rational>(data, dp.certificate);
  bool residual_exact = rep.residual_zero;
  for (const auto& r : rep.residual) residual_exact = residual_exact && r == 0;

  auto feas = dual_feasible(mq, dp);
  bool sign_ok = feas.pass && feas.upper_sign_products[0] == q(1, 4) &&
                 feas.upper_sign_products[0] >= 0 && feas.upper_sign_products[1] == 0 &&
                 feas.lower_sign_products[0] == 0 && feas.psi_sign_product >= 0;
  criterion(3, "dual-side certificate: exact residual and sign conditions",
            residual_exact && sign_ok);
}

TEST_CASE("criterion 4: certificate search succeeds on all corpus data") {
  BilevelProblem p3 = load_problem("q1_sec3.blp");
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  BilevelProblem mq = load_problem("mq_sec5.blp");
  std::vector<StationaryData> datasets{
      build_stationary_data(p3, *p3.refpoint),
      build_stationary_data(p4, *p4.refpoint),
      build_dual_stationary_data(mq, {q(-1), q(0)}),
  };
  bool ok = true;
  for (const auto& data : datasets) {
    auto t0 = std::chrono::steady_clock::now();
    auto rational = find_certificate<Rational>(data);
    auto floating = find_certificate<double>(data);
    double elapsed = seconds_since(t0);
    ok = ok && rational.feasible && floating.feasible && elapsed < 1.0;
    if (!ok) break;
    // The dual-side instance has inactive constraints entering the
    // inclusion, so only the residual/sign/cone parts apply here;
    // complementarity is covered by criteria 1-3.
    auto rrep = verify_certificate<Rational>(data, rational.certificate);
    ok = ok && rrep.residual_zero && rrep.signs_ok && rrep.xi_nonzero && rrep.z_in_normal_cone;
    for (const auto& r : rrep.residual) ok = ok && r == 0;
    auto frep = verify_certificate<double>(data, floating.certificate);
    for (const auto& r : frep.residual) ok = ok && std::fabs(r) <= 1e-9;
  }
  criterion(4, "search feasible with float residual <= 1e-9 and exact rational residual", ok);
}

TEST_CASE("criterion 5: constraint qualification on the first corpus problem") {
  BilevelProblem p3 = load_problem("q1_sec3.blp");
  auto t0 = std::chrono::steady_clock::now();

  ActiveSets sets = active_sets(p3, *p3.refpoint);
  std::vector<Vec> union_points;
  for (int j : sets.upper_active)
    for (const auto& p : carrier_for(p3, {TargetRef::Family::H, j}, *p3.refpoint))
      union_points.push_back(to_vec(p));
  for (int s : sets.lower_active)
    for (const auto& p : carrier_for(p3, {TargetRef::Family::Phi, s}, *p3.refpoint))
      union_points.push_back(to_vec(p));
  for (const auto& p : carrier_for(p3, {TargetRef::Family::Psi, 0}, *p3.refpoint))
    union_points.push_back(to_vec(p));
  for (const auto& g : normal_cone_generators(p3)) union_points.push_back(to_vec(g));
  Cone polar_cone = polar_of_points(union_points, 2);

  // Membership must agree with the nonnegative x-ray on 500 samples.
  std::mt19937_64 rng(2025);
  bool agreement = true;
  for (int i = 0; i < 500; ++i) {
    Vec u;
    if (i % 2 == 0) {
      u = {uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)};
    } else {
      u = {uniform_in(rng, 0, 1), 0.0};  // structured on-set samples
    }
    bool closed_form = u[0] >= -1e-9 && std::fabs(u[1]) <= 1e-9;
    agreement = agreement && cone_membership(polar_cone, u, 1e-9) == closed_form;
  }

  AcqConfig cfg;
  cfg.samples = 50;
  auto rep = check_ACQ(p3, *p3.refpoint, cfg);
  double elapsed = seconds_since(t0);
  criterion(5, "polar equals the nonnegative x-ray and the qualification is SUPPORTED",
            agreement && rep.verdict == AcqReport::Verdict::Supported && elapsed < 5.0);
}

TEST_CASE("criterion 6: signed distance property suite") {
  std::mt19937_64 rng(31);
  bool ok = true;

  // Sign trichotomy on 300 classified points.
  for (int i = 0; i < 100; ++i) {
    Vec interior{uniform_in(rng, -2, -1e-3), uniform_in(rng, -2, -1e-3)};
    ok = ok && signed_distance_orthant(interior) < 0;
    Vec exterior{uniform_in(rng, 1e-3, 2), uniform_in(rng, -2, 2)};
    ok = ok && signed_distance_orthant(exterior) > 0;
    Vec boundary{0.0, uniform_in(rng, -2, 0)};
    ok = ok && std::fabs(signed_distance_orthant(boundary)) <= 1e-12;
  }

  // 1-Lipschitz on 1000 pairs.
  for (int i = 0; i < 1000; ++i) {
    Vec u{uniform_in(rng, -2, 2), uniform_in(rng, -2, 2)};
    Vec v{uniform_in(rng, -2, 2), uniform_in(rng, -2, 2)};
    ok = ok &&
         std::fabs(signed_distance_orthant(u) - signed_distance_orthant(v)) <= norm(u - v) + 1e-12;
  }

  // Positive homogeneity.
  for (int i = 0; i < 200; ++i) {
    Vec u{uniform_in(rng, -2, 2), uniform_in(rng, -2, 2)};
    for (double t : {0.5, 2.0, 10.0})
      ok = ok && std::fabs(signed_distance_orthant(t * u) - t * signed_distance_orthant(u)) <= 1e-9;
  }

  // 400 x 400 grid nearest-point oracle on [-2, 2]^2.
  const int n = 400;
  const double lo = -2.0, hi = 2.0;
  const double step = (hi - lo) / (n - 1);
  auto grid_oracle = [&](const Vec& u) {
    bool inside = u[0] <= 0 && u[1] <= 0;
    double best = 1e300;
    for (int i = 0; i < n; ++i) {
      double gx = lo + i * step;
      for (int j = 0; j < n; ++j) {
        double gy = lo + j * step;
        bool gin = gx <= 0 && gy <= 0;
        if (gin == inside) continue;
        double dx = u[0] - gx, dy = u[1] - gy;
        double d = std::sqrt(dx * dx + dy * dy);
        if (d < best) best = d;
      }
    }
    return inside ? -best : best;
  };
  for (int i = 0; i < 100 && ok; ++i) {
    Vec u{uniform_in(rng, -1.5, 1.5), uniform_in(rng, -1.5, 1.5)};
    ok = ok && std::fabs(signed_distance_orthant(u) - grid_oracle(u)) <= 2.0 * step;
  }
  criterion(6, "signed distance: trichotomy, Lipschitz, homogeneity, grid oracle", ok);
}

TEST_CASE("criterion 7: lower-level solution maps recovered") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  bool ok = true;
  for (double xval : {0.0, 0.5, 1.0, 2.0}) {
    auto r = lower_level_solutions(p4, {xval}, 1e-6, 1e-9, q(1, 100));
    ok = ok && !r.empty_feasible;
    bool has0 = false, has1 = false;
    for (const auto& y : r.solutions) {
      double d = std::min(std::fabs(y[0]), std::fabs(y[0] - 1.0));
      ok = ok && d <= 0.01 + 1e-12;
      has0 = has0 || std::fabs(y[0]) <= 0.01 + 1e-12;
      has1 = has1 || std::fabs(y[0] - 1.0) <= 0.01 + 1e-12;
      ok = ok && p4.lower_objective.eval_at({xval, y[0]}) - r.min_value <= 1e-6;
    }
    ok = ok && has0 && has1;
  }

  BilevelProblem p3 = load_problem("q1_sec3.blp");
  for (double xval : {0.0, 0.5, 1.0}) {
    auto r = lower_level_solutions(p3, {xval}, 1e-6, 1e-9, q(1, 100));
    ok = ok && !r.empty_feasible;
    bool has0 = false;
    for (const auto& y : r.solutions) {
      ok = ok && std::fabs(y[0]) <= 0.01 + 1e-12;
      has0 = has0 || y[0] == 0.0;
    }
    ok = ok && has0;
  }
  criterion(7, "lower-level solution sets within one grid step", ok);
}

TEST_CASE("criterion 8: weak-Pareto verdict at the reference point") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  OracleConfig cfg;
  cfg.step_override = q(1, 20);
  cfg.jobs = 1;
  auto t0 = std::chrono::steady_clock::now();
  auto res = weak_pareto_oracle(p4, Vec{0, 0}, cfg);
  double elapsed = seconds_since(t0);
  criterion(8, "brute-force oracle confirms the reference point",
            res.weak_pareto && res.feasible_count > 0 && elapsed < 30.0);
}

TEST_CASE("criterion 9: generalized convexity battery") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  ConvexityConfig cfg;
  cfg.samples = 500;
  auto hyps = sufficiency_hypotheses(p4, *p4.refpoint, cfg);
  bool ok = hyps.size() == 6;
  for (const auto& [label, rep] : hyps)
    ok = ok && rep.supported && rep.counterexamples.empty() && rep.tested >= 500;

  ScalarFn concave = [](const Vec& p) { return -p[0] * p[0]; };
  Box box;
  box.axes.push_back(AxisSpec(q(-1), q(1), q(1, 10)));
  box.axes.push_back(AxisSpec(q(-1), q(1), q(1, 10)));
  auto planted = check_generalized_convexity(concave, {{q(0), q(0)}}, {q(0), q(0)},
                                             GenConvexKind::Pseudo, Cone::full_space(2), box,
                                             {500, 2});
  ok = ok && !planted.supported && !planted.counterexamples.empty();
  criterion(9, "six hypothesis checks SUPPORTED; planted concave VIOLATED with witness", ok);
}

TEST_CASE("criterion 10: weak-duality scan is violation-free") {
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  BilevelProblem mq = load_problem("mq_sec5.blp");
  CertificateFile file = load_certificate("mq_dual.cert");
  DualPoint dp{*file.point, file.certificate};
  StationaryData data = build_dual_stationary_data(mq, dp.anchor);
  attach_weights(file, data, dp.certificate);
  OracleConfig cfg;
  cfg.step_override = q(1, 20);
  auto violations = weak_duality_scan(p4, 200, {dp}, 1e-7, cfg);
  criterion(10, "200 primal samples never dominate the dual point", violations.empty());
}

TEST_CASE("criterion 11: property suite") {
  bool ok = true;

  // Double polar membership agreement: 50 random cones, d <= 3, 200 dirs.
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50 && ok; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 2);
    std::vector<Vec> gens;
    int count = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < count; ++i) gens.push_back(random_unit_vector(rng, dim));
    Cone c = pos_hull(gens, dim);
    Cone cpp = polar(polar(c));
    for (int i = 0; i < 200 && ok; ++i) {
      Vec u(dim);
      for (auto& v : u) v = uniform_in(rng, -1, 1);
      ok = cone_membership(c, u, 1e-9) == cone_membership(cpp, u, 1e-9);
    }
  }

  // Semi-regular validation implies upper validation on 20 random pairs.
  std::vector<Vec> dirs = unit_directions(2, 12);
  for (int trial = 0; trial < 20 && ok; ++trial) {
    double a = uniform_in(rng, -2, 2), b = uniform_in(rng, -2, 2), c = uniform_in(rng, -2, 2);
    ScalarFn h = [=](const Vec& p) {
      return a * p[0] * p[0] + b * std::fabs(p[1]) + c * p[0];
    };
    Vec at{uniform_in(rng, -0.5, 0.5), 0.0};
    std::vector<QVec> carrier;
    int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i)
      carrier.push_back({Rational(uniform_in(rng, -3, 3)), Rational(uniform_in(rng, -3, 3))});
    auto semi = validate_convexificator(h, {carrier, ConvexificatorKind::SemiRegular}, at, dirs);
    auto upper = validate_convexificator(h, {carrier, ConvexificatorKind::Upper}, at, dirs);
    for (std::size_t i = 0; i < semi.checks.size() && ok; ++i)
      if (semi.checks[i].pass) ok = upper.checks[i].pass;
  }

  // Carrier scaling invariance on 20 perturbed corpus instances.
  BilevelProblem p3 = load_problem("q1_sec3.blp");
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  BilevelProblem mq = load_problem("mq_sec5.blp");
  std::vector<StationaryData> datasets{
      build_stationary_data(p3, *p3.refpoint),
      build_stationary_data(p4, *p4.refpoint),
      build_dual_stationary_data(mq, {q(-1), q(0)}),
  };
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const StationaryData& base = datasets[trial % datasets.size()];
    Rational factor = q(1 + static_cast<long>(rng() % 11), 1 + static_cast<long>(rng() % 7));
    bool was = find_certificate<Rational>(base).feasible;
    bool now = find_certificate<Rational>(scale_carriers(base, factor)).feasible;
    ok = was == now;
  }

  // Full-space continuity cone reduces to the system without the normal term.
  for (const auto& data : datasets) {
    StationaryData zero_gen = data;
    zero_gen.normal_generators = {{q(0), q(0)}};
    StationaryData omitted = data;
    omitted.normal_generators.clear();
    ok = ok && find_certificate<Rational>(zero_gen).feasible ==
                   find_certificate<Rational>(omitted).feasible;
  }
  criterion(11, "double polar, validation ordering, scaling invariance, full-space reduction", ok);
}

TEST_CASE("criterion 12: derivative estimates against closed forms") {
  BilevelProblem p3 = load_problem("q1_sec3.blp");
  BilevelProblem p4 = load_problem("q1_sec4.blp");
  ScalarizedObjective s3_1 = make_scalarization(p3, 1, *p3.refpoint);
  ScalarizedObjective s3_2 = make_scalarization(p3, 2, *p3.refpoint);
  ScalarizedObjective s4_1 = make_scalarization(p4, 1, *p4.refpoint);

  auto fn = [](const char* text) {
    ExprPtr e = parse_expression(text, 1, 1);
    return ScalarFn([e](const Vec& p) { return eval(*e, p); });
  };
  auto pw = [](const PiecewiseFn& f) {
    return ScalarFn([&f](const Vec& p) { return f.eval_at(p); });
  };

  struct Case {
    ScalarFn h;
    Vec at;
    Vec dir;
    double expected;
  };
  std::vector<Case> cases{
      {fn("abs(x)"), {0, 0}, {1, 0}, 1.0},
      {fn("abs(x)"), {0, 0}, {-1, 0}, 1.0},
      {fn("x^2"), {0, 0}, {1, 0}, 0.0},
      {fn("x^2"), {1, 0}, {1, 0}, 2.0},
      {fn("x^3"), {1, 0}, {-1, 0}, -3.0},
      {fn("min(x, 2*x)"), {0, 0}, {1, 0}, 1.0},
      {fn("max(x, 2*x)"), {0, 0}, {1, 0}, 2.0},
      {pw(s4_1.fn), {0, 0}, {1, 0}, 1.0},    // branch x^2 + x + 2y
      {pw(s4_1.fn), {0, 0}, {0, 1}, 2.0},
      {pw(s3_2.fn), {0, 0}, {1, 1}, 2.0},    // branch x + y
      {pw(s3_1.fn), {0, 0}, {0, 1}, -2.0},   // x - 2y
      {pw(p3.upper_numerators[1]), {0, 0}, {1, 0}, 3.0},  // branch 3x + y/2 + 1
  };
  bool ok = cases.size() == 12;
  for (const auto& c : cases) {
    auto est = dini(c.h, c.at, c.dir);
    ok = ok && std::fabs(est.lower - c.expected) <= 1e-4 &&
         std::fabs(est.upper - c.expected) <= 1e-4;
  }
  criterion(12, "twelve one-sided derivative cases within 1e-4", ok);
}
