#pragma once

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stharm/errors.hpp"
#include "stharm/experiments.hpp"
#include "stharm/identities.hpp"
#include "stharm/io.hpp"

namespace stharm::cli {

// exit-code contract
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kHypothesisRejected = 2;
inline constexpr int kFalsified = 3;

// discretization allowance slack >= -K h^2 for the integral inequalities,
// calibrated on the catalog equality families and frozen
inline constexpr double kSlackAllowanceK = 256.0;

struct RunConfig {
  std::string command;
  std::string metric_arg, potential_arg = "zero";
  int grid = 1000;
  double tol = 1e-8;
  std::string out, csv, svg;
  bool print_json = false, quiet = false, timing = false;
  std::optional<std::pair<double, double>> interval;
  double c_minus = -1.0, c_plus = 1.0;
  std::optional<int> chi;
  int dimension = 3;
};

namespace cli_detail {

inline MetricSpec resolve_metric(const std::string& arg, int dimension) {
  if (arg.empty()) throw std::invalid_argument("missing --metric");
  if (arg == "flat") return MetricSpec::flat_product();
  if (arg == "round-sphere") return MetricSpec::round_sphere(1.0, dimension);
  if (arg == "round-band") return MetricSpec::round_band(kPi / 4, kPi / 4, dimension);
  if (arg == "torus-extremal") return MetricSpec::torus_extremal(kPi / 3);
  if (arg == "counterexample") return MetricSpec::counterexample(0.0);
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') text = read_file(arg.substr(1));
  return metric_from_json(parse_json_or_die(text, "--metric"));
}

inline Potential resolve_potential(const std::string& arg) {
  if (arg.empty() || arg == "zero") return Potential::zero();
  std::string text = arg;
  if (arg[0] == '@') text = read_file(arg.substr(1));
  return potential_from_json(parse_json_or_die(text, "--potential"));
}

inline Json config_json(const RunConfig& cfg, const MetricSpec* m, const Potential* p) {
  Json j = Json::object();
  if (m) j.set("metric", metric_to_json(*m));
  if (p) j.set("potential", potential_to_json(*p));
  j.set("grid", Json::integer(cfg.grid));
  j.set("tol", Json::num(cfg.tol));
  if (cfg.interval) {
    Json iv = Json::array();
    iv.push(Json::num(cfg.interval->first)).push(Json::num(cfg.interval->second));
    j.set("interval", std::move(iv));
  }
  return j;
}

struct Emitter {
  const RunConfig& cfg;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  int emit(Json report, const std::string& verdict, int code) {
    report.set("version", Json::str(kVersion));
    if (cfg.timing) {
      const auto dt = std::chrono::steady_clock::now() - t0;
      report.set("runtime_ms", Json::integer(
          std::chrono::duration_cast<std::chrono::milliseconds>(dt).count()));
    }
    const std::string text = report.dump() + "\n";
    if (!cfg.out.empty()) write_file(cfg.out, text);
    if (cfg.print_json || cfg.out.empty()) std::cout << text;
    if (!cfg.quiet) std::cerr << "verdict: " << verdict << "\n";
    return code;
  }
};

inline Json report_skeleton(const RunConfig& cfg, const MetricSpec* m, const Potential* p,
                            const std::string& verdict) {
  Json j = Json::object();
  j.set("command", Json::str(cfg.command));
  j.set("config", config_json(cfg, m, p));
  j.set("verdict", Json::str(verdict));
  return j;
}

inline BandProblem make_problem(const RunConfig& cfg, const MetricSpec& m, const Potential& p,
                                std::optional<double> origin = std::nullopt) {
  Interval iv = m.default_interval();
  if (cfg.interval) iv = {cfg.interval->first, cfg.interval->second};
  const int chi = cfg.chi.value_or(m.default_fiber_chi());
  return BandProblem(m, iv, p, cfg.c_minus, cfg.c_plus, chi, origin);
}

}  // namespace cli_detail

inline int run(const std::vector<std::string>& argv_in) {
  using namespace cli_detail;
  CLI::App app{"spacetime-harmonic band toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string theorem = "ricci", which = "lemma23", mode = "scan", eps_list_s = "0.1,0.05,0.01";
  std::string dims_s, method = "1d";
  double R0 = 6.0, b2 = 0.0, delta = 0.0, eps = 0.01, mass = 0.0;
  double rmin = 1e-3, rmax = 1e3, r0 = 0.5, lambda = 0.0, center = 0.0, radius = 0.5;
  std::optional<double> C0;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--metric", cfg.metric_arg, "metric spec: inline JSON, @file, or shorthand");
    c->add_option("--potential", cfg.potential_arg, "potential spec: inline JSON, @file, or 'zero'");
    c->add_option("--grid", cfg.grid, "profile grid cells")->check(CLI::PositiveNumber);
    c->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
    c->add_option("--out", cfg.out, "write the JSON report here");
    c->add_option("--csv", cfg.csv, "write profile CSV here");
    c->add_option("--svg", cfg.svg, "write profile SVG here");
    c->add_flag("--json", cfg.print_json, "print the JSON report to stdout");
    c->add_flag("--quiet", cfg.quiet, "suppress the stderr verdict line");
    c->add_flag("--timing", cfg.timing, "include runtime_ms in the report");
    c->add_option("--interval", [&cfg](const std::vector<std::string>& v) {
        double a, b;
        if (std::sscanf(v[0].c_str(), "%lf,%lf", &a, &b) != 2) return false;
        cfg.interval = {a, b};
        return true;
      }, "band interval lo,hi (default: the family's natural band)");
    c->add_option("--cminus", cfg.c_minus, "lower Dirichlet value");
    c->add_option("--cplus", cfg.c_plus, "upper Dirichlet value");
    c->add_option("--chi", [&cfg](const std::vector<std::string>& v) {
        cfg.chi = std::stoi(v[0]);
        return true;
      }, "fiber Euler characteristic (default per metric family)");
    c->add_option("--dimension", cfg.dimension, "dimension for shorthand metrics");
  };

  CLI::App* c_catalog = app.add_subcommand("catalog", "list metric families and potential kinds");
  CLI::App* c_curv = app.add_subcommand("curvature", "curvature scan of a metric");
  CLI::App* c_solve = app.add_subcommand("solve", "solve the spacetime harmonic Dirichlet problem");
  c_solve->add_option("--method", method, "1d (closed form) or grid (fixed point)");
  c_solve->add_option("--dims", dims_s, "grid dims nr,nx,ny for --method grid");
  CLI::App* c_ident = app.add_subcommand("identity", "evaluate an integral identity");
  c_ident->add_option("--which", which, "lemma23 | lemma33 | lemma71 | af | llarull");
  CLI::App* c_width = app.add_subcommand("width", "band-width bound verdict");
  c_width->add_option("--theorem", theorem, "ricci | torus | tworicci");
  CLI::App* c_bm = app.add_subcommand("bonnet-myers", "punctured diameter comparison");
  c_bm->add_option("--eps", eps, "puncture sphere radius");
  CLI::App* c_waist = app.add_subcommand("waist", "average level-set area bound");
  c_waist->add_option("--R0", R0, "scalar curvature lower bound");
  c_waist->add_option("--b2", b2, "second Betti number (supplied)");
  CLI::App* c_dice = app.add_subcommand("dice", "band decomposition with small cuts");
  c_dice->add_option("--R0", R0, "scalar curvature lower bound");
  CLI::App* c_ctr = app.add_subcommand("counterexample", "audit the 2-Ricci >= 4 family");
  c_ctr->add_option("--delta", delta, "family parameter in [0, 1]");
  CLI::App* c_af = app.add_subcommand("af", "Green's-function identity on an AF metric");
  c_af->add_option("--mass", mass, "isotropic mass (0 = Euclidean)");
  c_af->add_option("--rmin", rmin, "inner radius");
  c_af->add_option("--rmax", rmax, "outer radius");
  CLI::App* c_ll = app.add_subcommand("llarull", "round-comparison scalar curvature scan");
  c_ll->add_option("--mode", mode, "scan | quant");
  c_ll->add_option("--lambda", lambda, "shorthand for the lambda*sin warped metric");
  CLI::App* c_bar = app.add_subcommand("barrier", "puncture barrier and boundary-gradient audit");
  c_bar->add_option("--r0", r0, "barrier radius");
  c_bar->add_option("--eps-list", eps_list_s, "comma-separated puncture radii");
  CLI::App* c_ge = app.add_subcommand("gradest", "interior gradient estimate audit");
  c_ge->add_option("--center", center, "ball center (profile coordinate)");
  c_ge->add_option("--radius", radius, "ball radius");
  c_ge->add_option("--C0", [&C0](const std::vector<std::string>& v) {
      C0 = std::stod(v[0]);
      return true;
    }, "potential constant (default: measured from the potential)");

  for (CLI::App* c : {c_catalog, c_curv, c_solve, c_ident, c_width, c_bm, c_waist, c_dice, c_ctr,
                      c_af, c_ll, c_bar, c_ge})
    add_common(c);

  std::vector<std::string> args(argv_in.rbegin(), argv_in.rend());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return kOk;
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  Emitter em{cfg};
  try {
    if (c_catalog->parsed()) {
      cfg.command = "catalog";
      Json j = report_skeleton(cfg, nullptr, nullptr, "ok");
      Json fams = Json::array();
      for (const char* f : {"RoundBand", "GUpsilon", "TorusExtremal", "Counterexample",
                            "RicciWarped", "AFSymmetric", "FlatProduct", "CustomDoublyWarped",
                            "RoundSphere", "Capsule", "LlarullSin", "LlarullSinCubic", "SechBand"})
        fams.push(Json::str(f));
      j.set("families", std::move(fams));
      Json kinds = Json::array();
      for (const char* k : {"Zero", "RicciBand", "TorusBand", "TwoRicciBand", "Waist", "Llarull",
                            "LipschitzFamily"})
        kinds.push(Json::str(k));
      j.set("potentials", std::move(kinds));
      return em.emit(std::move(j), "ok", kOk);
    }

    if (c_curv->parsed()) {
      cfg.command = "curvature";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      Interval iv = cfg.interval ? Interval{cfg.interval->first, cfg.interval->second}
                                 : m.default_interval();
      const Grid1D g(iv.lo, iv.hi, cfg.grid);
      double rmin_s = 1e300, rmax_s = -1e300, two_min = 1e300, eig_min = 1e300;
      std::string table = "rho,eig0,eig1,eig2,scalar,two_ricci,mean_curv\n";
      std::vector<double> xs, ys;
      char buf[240];
      for (int i = 0; i < g.n_cells; ++i) {
        const double t = g.midpoint(i);
        const CurvatureSample s = m.curvature_at(t);
        rmin_s = std::min(rmin_s, s.scalar);
        rmax_s = std::max(rmax_s, s.scalar);
        two_min = std::min(two_min, s.two_ricci);
        eig_min = std::min(eig_min, s.ricci_eigs[0]);
        if (!cfg.csv.empty()) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t,
                        s.ricci_eigs[0], s.ricci_eigs[1], s.ricci_eigs[2], s.scalar, s.two_ricci,
                        s.mean_curv);
          table += buf;
        }
        xs.push_back(t);
        ys.push_back(s.scalar);
      }
      if (!cfg.csv.empty()) write_file(cfg.csv, table);
      if (!cfg.svg.empty()) write_file(cfg.svg, profile_to_svg(xs, ys, "scalar curvature"));
      Json j = report_skeleton(cfg, &m, nullptr, "ok");
      Json nums = Json::object();
      nums.set("scalar_min", Json::num(rmin_s)).set("scalar_max", Json::num(rmax_s));
      nums.set("two_ricci_min", Json::num(two_min)).set("ricci_eig_min", Json::num(eig_min));
      j.set("numbers", std::move(nums));
      return em.emit(std::move(j), "ok", kOk);
    }

    if (c_solve->parsed()) {
      cfg.command = "solve";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      const Potential p = resolve_potential(cfg.potential_arg);
      BandProblem prob = make_problem(cfg, m, p);
      SolveProfile sol;
      if (method == "grid") {
        GridDims dims{cfg.grid, 1, 1};
        if (!dims_s.empty() &&
            std::sscanf(dims_s.c_str(), "%d,%d,%d", &dims.nr, &dims.nx, &dims.ny) != 3)
          throw std::invalid_argument("--dims expects nr,nx,ny");
        sol = solve_band_grid(prob, dims, cfg.tol);
      } else if (method == "1d") {
        sol = solve_band_1d(prob, cfg.grid, cfg.tol);
      } else {
        throw std::invalid_argument("--method must be 1d or grid");
      }
      if (!cfg.csv.empty()) write_file(cfg.csv, profile_to_csv(sol, prob));
      if (!cfg.svg.empty()) {
        std::vector<double> xs(sol.grid.n_nodes());
        for (int i = 0; i < sol.grid.n_nodes(); ++i) xs[i] = sol.grid.node(i);
        write_file(cfg.svg, profile_to_svg(xs, sol.u, "solution profile"));
      }
      Json j = report_skeleton(cfg, &m, &p, "ok");
      Json nums = Json::object();
      nums.set("residual_sup", Json::num(sol.residual_sup));
      nums.set("residual_tol", Json::num(sol.residual_tol));
      nums.set("u_mid", Json::num(sol.u[sol.grid.n_nodes() / 2]));
      j.set("numbers", std::move(nums));
      j.set("h", Json::num(sol.grid.spacing()));
      return em.emit(std::move(j), "ok", kOk);
    }

    if (c_ident->parsed()) {
      cfg.command = "identity";
      if (which == "af") {
        const MetricSpec m = MetricSpec::af_symmetric(mass, cfg.dimension);
        AFProfile p = solve_green_af(m, {rmin, rmax}, cfg.grid);
        AFIdentityReport rep = eval_af_identity(p, m);
        Json j = report_skeleton(cfg, &m, nullptr, "holds");
        Json nums = Json::object();
        nums.set("hessian_term", Json::num(rep.bulk_hessian_term));
        nums.set("ricci_term", Json::num(rep.bulk_curvature_term));
        nums.set("truncation_estimate", Json::num(rep.truncation_estimate));
        nums.set("asymptote_err", Json::num(p.asymptote_err));
        j.set("numbers", std::move(nums));
        j.set("slack", Json::num(rep.slack));
        j.set("h", Json::num(rep.h));
        return em.emit(std::move(j), "holds", kOk);
      }
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      if (which == "llarull") {
        LlarullReport rep = eval_llarull(m, LlarullMode::Quant, cfg.grid);
        Json j = report_skeleton(cfg, &m, nullptr, "holds");
        Json nums = Json::object();
        nums.set("min_R", Json::num(rep.min_R));
        nums.set("lhs", Json::num(rep.quant.bulk_curvature_term));
        nums.set("rhs", Json::num(rep.quant.bulk_hessian_term));
        j.set("numbers", std::move(nums));
        j.set("slack", Json::num(rep.quant.slack));
        j.set("h", Json::num(rep.quant.h));
        const double allow = kSlackAllowanceK * rep.quant.h * rep.quant.h;
        if (rep.quant.slack < -allow) {
          j.set("verdict", Json::str("falsified"));
          return em.emit(std::move(j), "falsified", kFalsified);
        }
        return em.emit(std::move(j), "holds", kOk);
      }
      const Potential p = resolve_potential(cfg.potential_arg);
      BandProblem prob = make_problem(cfg, m, p);
      SolveProfile sol = solve_band_1d(prob, cfg.grid, cfg.tol);
      IdentityReport rep;
      if (which == "lemma23") rep = eval_lemma23(sol, prob);
      else if (which == "lemma33") rep = eval_lemma33(sol, prob);
      else if (which == "lemma71") rep = eval_lemma71(sol, prob);
      else throw std::invalid_argument("--which must be lemma23, lemma33, lemma71, af, or llarull");
      Json j = report_skeleton(cfg, &m, &p, "holds");
      Json nums = Json::object();
      nums.set("boundary_term", Json::num(rep.boundary_term));
      nums.set("topological_term", Json::num(rep.topological_term));
      nums.set("bulk_hessian_term", Json::num(rep.bulk_hessian_term));
      nums.set("bulk_curvature_term", Json::num(rep.bulk_curvature_term));
      j.set("numbers", std::move(nums));
      j.set("slack", Json::num(rep.slack));
      j.set("h", Json::num(rep.h));
      const double allow = kSlackAllowanceK * rep.h * rep.h;
      if (rep.slack < -allow) {
        j.set("verdict", Json::str("falsified"));
        return em.emit(std::move(j), "falsified", kFalsified);
      }
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_width->parsed()) {
      cfg.command = "width";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      BandProblem prob = make_problem(cfg, m, Potential::zero());
      WidthTheorem thm;
      if (theorem == "ricci") thm = WidthTheorem::Ricci;
      else if (theorem == "torus") thm = WidthTheorem::Torus;
      else if (theorem == "tworicci") thm = WidthTheorem::TwoRicci;
      else throw std::invalid_argument("--theorem must be ricci, torus, or tworicci");
      WidthVerdict v = width_bound(prob, thm, cfg.grid);
      Json j = report_skeleton(cfg, &m, nullptr, v.saturated ? "saturated" : "holds");
      Json nums = Json::object();
      nums.set("width", Json::num(v.width)).set("bound", Json::num(v.bound));
      nums.set("H_minus", Json::num(v.H_minus)).set("H_plus", Json::num(v.H_plus));
      nums.set("H0", Json::num(v.H0)).set("hyp_min", Json::num(v.hyp_min));
      j.set("numbers", std::move(nums));
      j.set("saturated", Json::boolean(v.saturated));
      j.set("slack", Json::num(v.bound - v.width));
      return em.emit(std::move(j), v.saturated ? "saturated" : "holds", kOk);
    }

    if (c_bm->parsed()) {
      cfg.command = "bonnet-myers";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      BonnetMyersReport r = bonnet_myers(m, eps, cfg.grid);
      Json j = report_skeleton(cfg, &m, nullptr, r.saturated ? "saturated" : "holds");
      Json nums = Json::object();
      nums.set("d_minus", Json::num(r.d_minus)).set("d_plus", Json::num(r.d_plus));
      nums.set("sum", Json::num(r.sum)).set("bound", Json::num(r.bound));
      nums.set("ric_min", Json::num(r.ric_min));
      j.set("numbers", std::move(nums));
      j.set("saturated", Json::boolean(r.saturated));
      j.set("slack", Json::num(r.bound - r.sum));
      return em.emit(std::move(j), r.saturated ? "saturated" : "holds", kOk);
    }

    if (c_waist->parsed()) {
      cfg.command = "waist";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      WaistReport r = waist_average(m, R0, b2, std::max(cfg.grid, 2000));
      Json j = report_skeleton(cfg, &m, nullptr, "holds");
      Json nums = Json::object();
      nums.set("avg_area", Json::num(r.avg_area)).set("bound", Json::num(r.bound));
      nums.set("diam", Json::num(r.diam)).set("w0", Json::num(r.w0));
      nums.set("scal_min", Json::num(r.scal_min));
      j.set("numbers", std::move(nums));
      j.set("slack", Json::num(r.bound - r.avg_area));
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_dice->parsed()) {
      cfg.command = "dice";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      DiceDecomposition d = dice(m, R0, std::max(cfg.grid, 1000));
      Json j = report_skeleton(cfg, &m, nullptr, "holds");
      Json nums = Json::object();
      nums.set("regions", Json::integer(d.region_count));
      nums.set("w0", Json::num(d.w0)).set("diam", Json::num(d.diam));
      Json cuts = Json::array(), areas = Json::array();
      for (double c : d.cut_rho) cuts.push(Json::num(c));
      for (double a : d.interface_area) areas.push(Json::num(a));
      nums.set("cut_rho", std::move(cuts));
      nums.set("interface_area", std::move(areas));
      nums.set("dh_first", Json::num(d.dh_first)).set("dh_last", Json::num(d.dh_last));
      j.set("numbers", std::move(nums));
      Json props = Json::object();
      props.set("count", Json::boolean(d.count_ok)).set("smooth", Json::boolean(d.smooth_ok));
      props.set("adjacency", Json::boolean(d.adjacency_ok)).set("area", Json::boolean(d.area_ok));
      props.set("distance", Json::boolean(d.dist_ok));
      j.set("properties", std::move(props));
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_ctr->parsed()) {
      cfg.command = "counterexample";
      CounterexampleReport r = counterexample_audit(delta, cfg.grid);
      const MetricSpec m = MetricSpec::counterexample(delta);
      Json j = report_skeleton(cfg, &m, nullptr, "holds");
      Json nums = Json::object();
      nums.set("two_ricci_min", Json::num(r.two_ric_min));
      nums.set("ricci_eig_min", Json::num(r.ric_min));
      nums.set("d_center_core", Json::num(r.d_center_core));
      nums.set("d_core_core", Json::num(r.d_core_core));
      j.set("numbers", std::move(nums));
      j.set("closure_ok", Json::boolean(r.closure_ok));
      j.set("slack", Json::num(r.two_ric_min - 4.0));
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_af->parsed()) {
      cfg.command = "af";
      const MetricSpec m = MetricSpec::af_symmetric(mass, cfg.dimension);
      AFProfile p = solve_green_af(m, {rmin, rmax}, cfg.grid);
      AFIdentityReport rep = eval_af_identity(p, m);
      if (!cfg.csv.empty()) {
        std::string table = "r,v,u,du\n";
        char buf[160];
        for (std::size_t i = 0; i < p.r.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.r[i], p.v[i], p.u[i],
                        p.du[i]);
          table += buf;
        }
        write_file(cfg.csv, table);
      }
      Json j = report_skeleton(cfg, &m, nullptr, "holds");
      Json nums = Json::object();
      nums.set("hessian_term", Json::num(rep.bulk_hessian_term));
      nums.set("ricci_term", Json::num(rep.bulk_curvature_term));
      nums.set("truncation_estimate", Json::num(rep.truncation_estimate));
      nums.set("asymptote_err", Json::num(p.asymptote_err));
      j.set("numbers", std::move(nums));
      j.set("slack", Json::num(rep.slack));
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_ll->parsed()) {
      cfg.command = "llarull";
      MetricSpec m = lambda > 0.0 ? MetricSpec::lambda_sin(lambda)
                                  : resolve_metric(cfg.metric_arg, cfg.dimension);
      const LlarullMode md = (mode == "quant") ? LlarullMode::Quant : LlarullMode::Scan;
      LlarullReport r = eval_llarull(m, md, cfg.grid);
      Json j = report_skeleton(cfg, &m, nullptr, "holds");
      Json nums = Json::object();
      nums.set("min_R", Json::num(r.min_R));
      nums.set("argmin_theta", Json::num(r.argmin_theta));
      nums.set("strict_somewhere", Json::boolean(r.strict_somewhere));
      if (md == LlarullMode::Quant) {
        nums.set("quant_lhs", Json::num(r.quant.bulk_curvature_term));
        nums.set("quant_rhs", Json::num(r.quant.bulk_hessian_term));
        j.set("slack", Json::num(r.quant.slack));
        j.set("h", Json::num(r.quant.h));
      } else {
        j.set("slack", Json::num(6.0 - r.min_R));
      }
      j.set("numbers", std::move(nums));
      if (!r.conclusion_holds) {
        j.set("verdict", Json::str("falsified"));
        return em.emit(std::move(j), "falsified", kFalsified);
      }
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_bar->parsed()) {
      cfg.command = "barrier";
      MetricSpec m = cfg.metric_arg.empty() ? MetricSpec::round_sphere(1.0)
                                            : resolve_metric(cfg.metric_arg, cfg.dimension);
      Potential p = (cfg.potential_arg == "zero")
                        ? make_potential(PotentialKind::Waist, {{"w", m.profile_domain().length()}})
                        : resolve_potential(cfg.potential_arg);
      std::vector<double> eps_list;
      std::stringstream ss(eps_list_s);
      for (std::string tok; std::getline(ss, tok, ',');) eps_list.push_back(std::stod(tok));
      BarrierReport r = barrier_check(m, p, eps_list, r0, std::max(cfg.grid, 1000));
      if (!r.hypothesis_ok) {
        Json j = report_skeleton(cfg, &m, &p, "hypothesis rejected");
        j.set("C_measured", Json::num(r.C_measured));
        return em.emit(std::move(j), "hypothesis rejected", kHypothesisRejected);
      }
      Json j = report_skeleton(cfg, &m, &p, "holds");
      Json nums = Json::object();
      nums.set("C_measured", Json::num(r.C_measured));
      nums.set("b", Json::num(r.b)).set("r0", Json::num(r.r0));
      Json grads = Json::array();
      for (double gv : r.boundary_grads) grads.push(Json::num(gv));
      nums.set("boundary_grads", std::move(grads));
      nums.set("sup_boundary_grad", Json::num(r.sup_boundary_grad));
      j.set("numbers", std::move(nums));
      j.set("barrier_below", Json::boolean(r.barrier_below));
      j.set("barrier_r0_below", Json::boolean(r.barrier_r0_below));
      j.set("slack", Json::num(r.b - r.sup_boundary_grad));
      const bool ok = r.barrier_below && r.dirichlet_match && r.sup_boundary_grad <= r.b + 1e-9;
      if (!ok) {
        j.set("verdict", Json::str("falsified"));
        return em.emit(std::move(j), "falsified", kFalsified);
      }
      return em.emit(std::move(j), "holds", kOk);
    }

    if (c_ge->parsed()) {
      cfg.command = "gradest";
      const MetricSpec m = resolve_metric(cfg.metric_arg, cfg.dimension);
      const Potential p = resolve_potential(cfg.potential_arg);
      BandProblem prob = make_problem(cfg, m, p);
      SolveProfile sol = solve_band_1d(prob, cfg.grid, cfg.tol);
      const double c0 = C0 ? *C0
                           : measure_gradest_c0(p, {std::max(prob.interval.lo, center - radius) -
                                                        prob.tau_origin,
                                                    std::min(prob.interval.hi, center + radius) -
                                                        prob.tau_origin});
      GradEstimateReport r = gradient_estimate_check(sol, prob, center, radius, c0);
      Json j = report_skeleton(cfg, &m, &p, r.holds ? "holds" : "falsified");
      Json nums = Json::object();
      nums.set("F_max", Json::num(r.F_max)).set("r_at_max", Json::num(r.r_at_max));
      nums.set("C0", Json::num(r.C0)).set("C1", Json::num(r.C1));
      nums.set("Lambda", Json::num(r.Lambda)).set("poly", Json::num(r.poly));
      j.set("numbers", std::move(nums));
      j.set("slack", Json::num(r.slack));
      return em.emit(std::move(j), r.holds ? "holds" : "falsified", r.holds ? kOk : kFalsified);
    }
  } catch (const hypothesis_error& e) {
    std::cerr << "hypothesis rejected: " << e.what() << "\n";
    return kHypothesisRejected;
  } catch (const falsified_error& e) {
    std::cerr << "FALSIFIED: " << e.what() << "\n";
    return kFalsified;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace stharm::cli
