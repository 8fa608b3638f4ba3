// Command-line front end: stationarity checks, sufficiency checks, duality
// runs, the brute-force oracle, and carrier validation over problem files.
//
// Exit codes: 0 success, 1 verdict failure, 2 parse/IO error, 3 missing
// declarations.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracbil/fracbil.hpp"

using namespace fracbil;

namespace {

std::chrono::steady_clock::time_point run_started;

struct Options {
  std::string problem_path;
  std::string point_text;
  std::string mode = "rational";
  std::string step_text;
  int samples = 0;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool skip_oracle = false;
  std::string report_path;
  std::string emit_cert_path;
  std::string dual_cert_path;
  std::string from_primal_text;
  std::string certificate_path;
};

QVec parse_point_text(const std::string& text) {
  QVec p;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string piece = text.substr(start, comma == std::string::npos ? comma : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.erase(piece.begin());
    while (!piece.empty() && piece.back() == ' ') piece.pop_back();
    auto r = parse_rational(piece);
    if (!r) throw std::runtime_error("malformed point coordinate '" + piece + "'");
    p.push_back(*r);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

QVec resolve_point(const BilevelProblem& prob, const Options& opt) {
  if (!opt.point_text.empty()) {
    QVec p = parse_point_text(opt.point_text);
    if (static_cast<int>(p.size()) != prob.dim())
      throw std::runtime_error("--point needs " + std::to_string(prob.dim()) + " coordinates");
    return p;
  }
  if (prob.refpoint) return *prob.refpoint;
  throw MissingDeclarationError("no --point given and no refpoint declared");
}

std::optional<Rational> step_override(const Options& opt) {
  if (opt.step_text.empty()) return std::nullopt;
  auto r = parse_rational(opt.step_text);
  if (!r || *r <= 0) throw std::runtime_error("--step must be a positive number");
  return r;
}

void stamp_common(RunReport& report, const BilevelProblem& prob, const Options& opt,
                  const std::string& command) {
  report.problem = prob.name;
  report.command = command;
  report.mode = opt.mode;
  report.seed = opt.seed;
}

void stamp_assumptions(RunReport& report, const BilevelProblem& prob) {
  report.assume("usc_of_convexificator_maps");
  if (prob.assert_pos_xi_closed && *prob.assert_pos_xi_closed)
    report.kv("asserted.pos_xi_closed", true);
  else
    report.assume("pos_xi_closed");
  if (!(prob.assert_star_shaped && *prob.assert_star_shaped)) report.assume("star_shaped");
}

void stamp_grids(RunReport& report, const BilevelProblem& prob,
                 const std::optional<Rational>& step) {
  auto axis_step = [&](const AxisSpec& a) { return step ? to_double(*step) : a.step_d; };
  report.kv("grid.x_step", axis_step(prob.x_box.axes[0]));
  report.kv("grid.y_step", axis_step(prob.y_box.axes[0]));
  report.kv("grid.theta_step", prob.theta().axes[0].step_d);
  if (step) report.note("note: verdicts are resolution-limited at step override " +
                        format_rational(*step));
}

void emit(RunReport& report, const Options& opt) {
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - run_started).count();
  report.write_human(std::cout);
  if (!opt.report_path.empty()) {
    if (!report.write_machine_file(opt.report_path))
      std::cerr << "warning: cannot write report file " << opt.report_path << "\n";
  } else {
    std::cout << "-- machine summary --\n";
    report.write_machine(std::cout);
  }
}

std::string verdict_text(bool ok, const char* yes, const char* no) { return ok ? yes : no; }

// Validation of every declared carrier at its anchor; shared by
// check-necessary and the validate subcommand.
bool run_validations(const BilevelProblem& prob, const Options& opt, RunReport& report) {
  int dir_count = opt.samples > 0 ? opt.samples : 64;
  Cone D = prob.continuity_cone ? *prob.continuity_cone : Cone::full_space(prob.dim());
  std::vector<Vec> dirs = default_directions(D, dir_count, opt.seed);
  bool all_pass = true;
  for (const auto& decl : prob.convexificators) {
    QVec anchor = decl.anchor ? *decl.anchor : (prob.refpoint ? *prob.refpoint : QVec{});
    if (anchor.empty()) throw MissingDeclarationError("carrier without anchor or refpoint");
    ScalarFn h;
    switch (decl.target.family) {
      case TargetRef::Family::Psi:
        h = [&prob](const Vec& p) { return capital_psi(prob, prob.x_part(p), prob.y_part(p)); };
        break;
      case TargetRef::Family::Varphi: {
        ScalarizedObjective s = make_scalarization(prob, decl.target.index, anchor);
        PiecewiseFn fn = s.fn;
        h = [fn](const Vec& p) { return fn.eval_at(p); };
        break;
      }
      case TargetRef::Family::NegG: {
        const PiecewiseFn& fn = prob.target_function(decl.target);
        h = [&fn](const Vec& p) { return -fn.eval_at(p); };
        break;
      }
      default:
        h = as_scalar_fn(prob.target_function(decl.target));
    }
    CarrierValidation v = validate_convexificator(h, from_decl(decl), to_vec(anchor), dirs);
    std::string key = "validate." + decl.target.label() + "@" + format_vec(anchor);
    report.kv(key + ".pass", v.all_pass);
    report.kv(key + ".directions", static_cast<int>(v.checks.size()));
    if (!v.all_pass) {
      all_pass = false;
      report.kv(key + ".violations", static_cast<int>(v.violations.size()));
      report.note("carrier " + decl.target.label() + " at " + format_vec(anchor) +
                  " VIOLATED: worst margin " +
                  std::to_string(v.violations.front().margin) + " along " +
                  format_vec(v.violations.front().dir));
    }
  }
  report.note(std::string("carrier validation: ") + verdict_text(all_pass, "PASS", "FAIL"));
  return all_pass;
}

void report_certificate(RunReport& report, const std::string& prefix, const Certificate& cert) {
  report.kv(prefix + ".xi", format_rational_list(cert.xi));
  if (!cert.tau.empty()) report.kv(prefix + ".tau", format_rational_list(cert.tau));
  if (!cert.rho.empty()) report.kv(prefix + ".rho", format_rational_list(cert.rho));
  report.kv(prefix + ".eta", format_rational(cert.eta));
  QVec z(cert.z.begin(), cert.z.end());
  report.kv(prefix + ".z", format_vec(z));
}

int cmd_check_necessary(const Options& opt) {
  BilevelProblem prob = parse_problem_file(opt.problem_path);
  QVec point = resolve_point(prob, opt);
  RunReport report;
  stamp_common(report, prob, opt, "check-necessary");
  stamp_assumptions(report, prob);
  stamp_grids(report, prob, step_override(opt));
  report.kv("point", format_vec(point));

  bool validations_pass = run_validations(prob, opt, report);

  AcqConfig acq_cfg;
  acq_cfg.seed = opt.seed;
  if (opt.samples > 0) acq_cfg.samples = opt.samples;
  AcqReport acq = check_ACQ(prob, point, acq_cfg);
  bool acq_ok = acq.verdict == AcqReport::Verdict::Supported;
  report.kv("acq.verdict", std::string(acq_ok ? "SUPPORTED" : "VIOLATED"));
  report.note(std::string("constraint qualification: ") + (acq_ok ? "SUPPORTED" : "VIOLATED"));
  if (acq.witness) report.kv("acq.witness", format_vec(*acq.witness));

  // Chord checks run against a z-refined membership so that stray
  // boundary points of the coarse grid do not produce false witnesses.
  MembershipOracle in_E = [&](const Vec& p) {
    return is_in_E(prob, prob.x_part(p), prob.y_part(p), 1e-9, 5);
  };
  StarShapedReport star = star_shaped_sample(in_E, to_vec(point), joint_box(prob), 20, opt.seed);
  bool star_ok = star.verdict == StarShapedReport::Verdict::Supported;
  report.kv("star_shaped.verdict", std::string(star_ok ? "SUPPORTED" : "VIOLATED"));
  report.note(std::string("local star-shapedness (sampled): ") +
              (star_ok ? "SUPPORTED" : "VIOLATED"));

  StationaryData data = build_stationary_data(prob, point);
  bool found = false, verify_ok = false;
  Certificate cert;
  if (opt.mode == "float") {
    auto search = find_certificate<double>(data);
    found = search.feasible;
    if (found) {
      auto vr = verify_certificate<double>(data, search.certificate);
      verify_ok = vr.pass;
    }
  } else {
    auto search = find_certificate<Rational>(data);
    found = search.feasible;
    if (found) {
      cert = search.certificate;
      auto vr = verify_certificate<Rational>(data, cert);
      verify_ok = vr.pass;
      report_certificate(report, "certificate", cert);
    }
  }
  report.kv("certificate.found", found);
  report.kv("certificate.verify_pass", verify_ok);
  report.note(std::string("stationarity certificate: ") +
              (found ? (verify_ok ? "FOUND, verified" : "FOUND, verification FAILED")
                     : "INFEASIBLE"));
  if (found && opt.mode != "float" && !opt.emit_cert_path.empty()) {
    std::ofstream out(opt.emit_cert_path);
    out << print_certificate(prob.name, cert, false, point);
    report.note("certificate written to " + opt.emit_cert_path);
  }

  emit(report, opt);
  return (found && verify_ok && acq_ok && star_ok && validations_pass) ? 0 : 1;
}

int cmd_check_sufficient(const Options& opt) {
  BilevelProblem prob = parse_problem_file(opt.problem_path);
  QVec point = resolve_point(prob, opt);
  RunReport report;
  stamp_common(report, prob, opt, "check-sufficient");
  stamp_assumptions(report, prob);
  auto step = step_override(opt);
  stamp_grids(report, prob, step);
  report.kv("point", format_vec(point));

  StationaryData data = build_stationary_data(prob, point);
  Certificate cert;
  if (!opt.certificate_path.empty()) {
    CertificateFile file = parse_certificate_file(opt.certificate_path);
    cert = file.certificate;
    attach_weights(file, data, cert);
    report.kv("certificate.source", std::string("file"));
  } else {
    auto search = find_certificate<Rational>(data);
    if (!search.feasible) {
      report.kv("certificate.found", false);
      report.note("stationarity certificate: INFEASIBLE");
      emit(report, opt);
      return 1;
    }
    cert = search.certificate;
    report.kv("certificate.source", std::string("search"));
  }
  auto vr = verify_certificate<Rational>(data, cert);
  report.kv("certificate.verify_pass", vr.pass);
  for (const auto& f : vr.failures) report.note("certificate check: " + f);
  report_certificate(report, "certificate", cert);

  ConvexityConfig ccfg;
  ccfg.seed = opt.seed;
  if (opt.samples > 0) ccfg.samples = opt.samples;
  auto hypotheses = sufficiency_hypotheses(prob, point, ccfg);
  for (const auto& [label, rep] : hypotheses) {
    std::string key = "convexity." + label.substr(0, label.find(' '));
    report.kv(key, std::string(rep.supported ? "SUPPORTED" : "VIOLATED"));
    report.note(label + ": " + (rep.supported ? "SUPPORTED" : "VIOLATED"));
  }

  std::optional<bool> oracle_verdict;
  if (!opt.skip_oracle) {
    OracleConfig ocfg;
    ocfg.step_override = step;
    ocfg.jobs = opt.jobs;
    OracleResult res = weak_pareto_oracle(prob, to_vec(point), ocfg);
    oracle_verdict = res.weak_pareto;
    report.kv("oracle.verdict", std::string(res.weak_pareto ? "WEAK-PARETO" : "NOT-WEAK-PARETO"));
    report.kv("oracle.feasible_count", static_cast<std::uint64_t>(res.feasible_count));
  } else {
    report.kv("oracle.verdict", std::string("SKIPPED"));
    report.note("oracle cross-check: SKIPPED");
  }

  SufficiencyClaim claim = sufficiency_verdict(vr.pass, hypotheses, oracle_verdict);
  report.kv("sufficiency.certified", claim.certified);
  report.kv("sufficiency.anomaly", claim.anomaly);
  report.note(std::string("sufficiency: ") +
              (claim.certified ? "WEAK-PARETO-CERTIFIED" : "NOT-CERTIFIED"));
  if (claim.anomaly)
    report.note("ANOMALY: certified point rejected by the grid oracle; manual review needed");
  for (const auto& f : claim.failed_hypotheses) report.note("missing hypothesis: " + f);

  emit(report, opt);
  bool ok = claim.certified && !claim.anomaly;
  return ok ? 0 : 1;
}

int cmd_duality(const Options& opt) {
  BilevelProblem prob = parse_problem_file(opt.problem_path);
  RunReport report;
  stamp_common(report, prob, opt, "duality");
  stamp_assumptions(report, prob);
  auto step = step_override(opt);
  stamp_grids(report, prob, step);

  int primal_samples = opt.samples > 0 ? opt.samples : 200;
  OracleConfig ocfg;
  ocfg.step_override = step;
  ocfg.jobs = opt.jobs;

  std::vector<DualPoint> dual_points;
  if (!opt.from_primal_text.empty()) {
    QVec point = parse_point_text(opt.from_primal_text);
    AcqConfig acq_cfg;
    acq_cfg.seed = opt.seed;
    AcqReport acq = check_ACQ(prob, point, acq_cfg);
    report.kv("acq.verdict", std::string(acq.verdict == AcqReport::Verdict::Supported
                                             ? "SUPPORTED"
                                             : "VIOLATED"));
    if (!opt.skip_oracle) {
      OracleResult res = weak_pareto_oracle(prob, to_vec(point), ocfg);
      report.kv("primal.oracle", std::string(res.weak_pareto ? "WEAK-PARETO" : "NOT-WEAK-PARETO"));
      if (!res.weak_pareto) {
        report.note("given primal point is not weak Pareto on the grid");
        emit(report, opt);
        return 1;
      }
    }
    ConvexityConfig ccfg;
    ccfg.seed = opt.seed;
    StrongDualityResult sd = strong_duality_construct(prob, point, acq, ccfg);
    report.kv("strong.dual_feasible", sd.feasibility.pass);
    report.kv("strong.weak_pareto_of_dual", sd.weak_pareto_of_dual);
    report_certificate(report, "strong.certificate", sd.dual_point.certificate);
    report.note(std::string("constructed dual point at ") + format_vec(sd.dual_point.anchor) +
                ": " + (sd.feasibility.pass ? "feasible" : "INFEASIBLE"));
    if (!opt.emit_cert_path.empty()) {
      std::ofstream out(opt.emit_cert_path);
      out << print_certificate(prob.name, sd.dual_point.certificate, true, point);
    }
    dual_points.push_back(sd.dual_point);
    if (!sd.feasibility.pass) {
      emit(report, opt);
      return 1;
    }
  }
  if (!opt.dual_cert_path.empty()) {
    CertificateFile file = parse_certificate_file(opt.dual_cert_path);
    if (!file.point) throw std::runtime_error("dual certificate file lacks a 'point =' line");
    DualPoint dp{*file.point, file.certificate};
    StationaryData dd = build_dual_stationary_data(prob, dp.anchor);
    attach_weights(file, dd, dp.certificate);
    DualFeasibility feas = dual_feasible(prob, dp);
    report.kv("dual.anchor", format_vec(dp.anchor));
    report.kv("dual.feasible", feas.pass);
    for (std::size_t j = 0; j < feas.upper_sign_products.size(); ++j)
      report.kv("dual.sign.tau" + std::to_string(j + 1) + "_H",
                format_rational(feas.upper_sign_products[j]));
    for (std::size_t s = 0; s < feas.lower_sign_products.size(); ++s)
      report.kv("dual.sign.rho" + std::to_string(s + 1) + "_phi",
                format_rational(feas.lower_sign_products[s]));
    report.kv("dual.sign.eta_Psi", feas.psi_sign_product);
    report.note(std::string("dual point ") + format_vec(dp.anchor) + ": " +
                (feas.pass ? "feasible" : "INFEASIBLE"));
    for (const auto& f : feas.failures) report.note("dual feasibility: " + f);
    if (!feas.pass) {
      emit(report, opt);
      return 1;
    }
    dual_points.push_back(dp);
  }
  if (dual_points.empty())
    throw std::runtime_error("duality needs --dual <cert> and/or --from-primal <point>");

  auto violations = weak_duality_scan(prob, primal_samples, dual_points, 1e-7, ocfg, opt.seed);
  report.kv("weak_duality.primal_samples", primal_samples);
  report.kv("weak_duality.violations", static_cast<int>(violations.size()));
  report.note("weak-duality scan: " + std::to_string(violations.size()) + " violation(s)");
  report.note("note: the duality theorem's quasiconvexity hypotheses range over each primal "
              "sample's own active constraints at the dual anchor; a clean scan is evidence "
              "for the hypothesis battery, not a proof of it");
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i)
    report.note("  violating primal " + format_vec(violations[i].primal_point) + " vs dual " +
                format_vec(violations[i].dual_anchor));

  emit(report, opt);
  return violations.empty() ? 0 : 1;
}

int cmd_oracle(const Options& opt) {
  BilevelProblem prob = parse_problem_file(opt.problem_path);
  RunReport report;
  stamp_common(report, prob, opt, "oracle");
  auto step = step_override(opt);
  stamp_grids(report, prob, step);

  OracleConfig ocfg;
  ocfg.step_override = step;
  ocfg.jobs = opt.jobs;

  if (!opt.point_text.empty()) {
    QVec point = parse_point_text(opt.point_text);
    Vec point_d = to_vec(point);
    OracleResult res = weak_pareto_oracle(prob, point_d, ocfg);
    report.kv("point", format_vec(point));
    report.kv("oracle.verdict", std::string(res.weak_pareto ? "WEAK-PARETO" : "NOT-WEAK-PARETO"));
    report.kv("oracle.feasible_count", static_cast<std::uint64_t>(res.feasible_count));
    report.note(std::string("verdict: ") + (res.weak_pareto ? "WEAK-PARETO" : "NOT-WEAK-PARETO"));
    if (res.dominator)
      report.note("dominated by " + format_vec(res.dominator->point) + " with objectives " +
                  format_vec(res.dominator->objectives));
    LowerLevelResult lower =
        lower_level_solutions(prob, prob.x_part(point_d), 1e-6, 1e-9, step);
    std::string ys = "{";
    for (std::size_t i = 0; i < lower.solutions.size(); ++i) {
      if (i) ys += ", ";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", lower.solutions[i][0]);
      ys += buf;
    }
    ys += "}";
    report.kv("lower_level.solutions", ys);
    report.kv("lower_level.empty_feasible", lower.empty_feasible);
    report.note("lower-level solution set at x-part: " + ys);
    emit(report, opt);
    return res.weak_pareto ? 0 : 1;
  }

  OracleResult res = weak_pareto_oracle(prob, std::nullopt, ocfg);
  report.kv("oracle.feasible_count", static_cast<std::uint64_t>(res.feasible_count));
  report.kv("oracle.pareto_count", static_cast<std::uint64_t>(res.pareto_points.size()));
  report.note("feasible grid points: " + std::to_string(res.feasible_count));
  report.note("weak-Pareto points: " + std::to_string(res.pareto_points.size()));
  report.note("tabular dump (point / objectives):");
  for (const auto& fp : res.pareto_points)
    report.note("  " + format_vec(fp.point) + "  " + format_vec(fp.objectives));
  emit(report, opt);
  return 0;
}

int cmd_validate(const Options& opt) {
  BilevelProblem prob = parse_problem_file(opt.problem_path);
  RunReport report;
  stamp_common(report, prob, opt, "validate");
  stamp_assumptions(report, prob);
  bool pass = run_validations(prob, opt, report);
  report.kv("validate.all_pass", pass);
  emit(report, opt);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for nonsmooth multiobjective fractional bilevel programs"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("problem", opt.problem_path, "problem file (.blp)")->required();
    cmd->add_option("--point", opt.point_text, "point as comma-separated rationals, e.g. 0,0");
    cmd->add_option("--mode", opt.mode, "float|rational (default rational)")
        ->check(CLI::IsMember({"float", "rational"}));
    cmd->add_option("--step", opt.step_text, "grid step override for x/y boxes");
    cmd->add_option("--samples", opt.samples, "sample count for the subcommand's main check");
    cmd->add_option("--seed", opt.seed, "RNG seed (default 1)");
    cmd->add_option("--jobs", opt.jobs, "worker cap for grid scans");
    cmd->add_flag("--skip-oracle", opt.skip_oracle, "skip the weak-Pareto oracle cross-check");
    cmd->add_option("--report", opt.report_path, "write the machine-readable summary here");
    cmd->add_option("--emit-cert", opt.emit_cert_path, "write any found certificate here");
  };

  CLI::App* necessary = app.add_subcommand("check-necessary", "stationarity + CQ checks");
  add_common(necessary);
  CLI::App* sufficient = app.add_subcommand("check-sufficient", "convexity + sufficiency checks");
  add_common(sufficient);
  sufficient->add_option("--certificate", opt.certificate_path, "verify this certificate file");
  CLI::App* duality = app.add_subcommand("duality", "dual feasibility and duality scans");
  add_common(duality);
  duality->add_option("--dual", opt.dual_cert_path, "dual point certificate file");
  duality->add_option("--from-primal", opt.from_primal_text, "construct a dual point here");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force weak-Pareto oracle");
  add_common(oracle);
  CLI::App* validate = app.add_subcommand("validate", "validate declared convexificators");
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  run_started = std::chrono::steady_clock::now();
  try {
    if (app.got_subcommand(necessary)) return cmd_check_necessary(opt);
    if (app.got_subcommand(sufficient)) return cmd_check_sufficient(opt);
    if (app.got_subcommand(duality)) return cmd_duality(opt);
    if (app.got_subcommand(oracle)) return cmd_oracle(opt);
    if (app.got_subcommand(validate)) return cmd_validate(opt);
    return 2;
  } catch (const MissingDeclarationError& e) {
    std::cerr << "missing declaration: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
