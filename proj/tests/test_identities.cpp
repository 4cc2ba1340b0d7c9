#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "stharm/experiments.hpp"
#include "stharm/identities.hpp"

using namespace stharm;
using Catch::Approx;

namespace {

BandProblem flat_problem() {
  return BandProblem(MetricSpec::flat_product(), {-0.5, 0.5}, Potential::zero());
}

BandProblem torus_extremal_problem(double w = kPi / 3) {
  return BandProblem(MetricSpec::torus_extremal(w), {-w / 2, w / 2},
                     make_potential(PotentialKind::TorusBand, {{"w0", w}}));
}

BandProblem round_band_problem() {
  return BandProblem(MetricSpec::round_band(kPi / 4, kPi / 4), {-kPi / 4, kPi / 4},
                     make_potential(PotentialKind::RicciBand, {{"n", 3}, {"Hminus", 2}, {"Hplus", 2}}));
}

BandProblem g_upsilon_problem(double ups, double rho0) {
  return BandProblem(MetricSpec::g_upsilon(ups), {-rho0, rho0},
                     make_potential(PotentialKind::TwoRicciBand,
                                    {{"H0", 2.0 * std::tan(2.0 * rho0)}}));
}

}  // namespace

TEST_CASE("flat band: every term of every identity vanishes") {
  const BandProblem prob = flat_problem();
  const SolveProfile sol = solve_band_1d(prob, 200);
  for (auto eval : {eval_lemma23, eval_lemma33, eval_lemma71}) {
    const IdentityReport r = eval(sol, prob);
    CHECK(std::abs(r.boundary_term) <= 1e-13);
    CHECK(std::abs(r.topological_term) <= 1e-13);
    CHECK(std::abs(r.bulk_hessian_term) <= 1e-13);
    CHECK(std::abs(r.bulk_curvature_term) <= 1e-13);
    CHECK(std::abs(r.slack) <= 1e-13);
  }
}

TEST_CASE("term bookkeeping reconstructs the slack") {
  const BandProblem prob = round_band_problem();
  const SolveProfile sol = solve_band_1d(prob, 400);
  for (auto eval : {eval_lemma23, eval_lemma33, eval_lemma71}) {
    const IdentityReport r = eval(sol, prob);
    CHECK(r.slack == Approx(r.slack_from_terms()).margin(1e-12));
  }
}

TEST_CASE("scalar-curvature identity on the extremal torus band") {
  // closed-form profile: everything cancels pointwise
  const BandProblem prob = torus_extremal_problem();
  const SolveProfile sol = solve_band_1d(prob, 1000, 1e-12);
  const IdentityReport r = eval_lemma23(sol, prob);
  CHECK(std::abs(r.slack) <= 1e-10);

  // fixed-point profiles carry O(h^2) error; the slack must shrink at
  // order >= 1.5 under refinement
  std::vector<double> hs, errs;
  for (int N : {250, 500, 1000, 2000}) {
    const SolveProfile g = solve_band_grid(prob, {N, 1, 1}, 1e-12);
    const IdentityReport rg = eval_lemma23(g, prob);
    hs.push_back(g.grid.spacing());
    errs.push_back(std::abs(rg.slack));
  }
  CHECK(convergence_order(hs, errs) >= 1.5);
}

TEST_CASE("Ricci identity on the round band") {
  const BandProblem prob = round_band_problem();
  const SolveProfile sol = solve_band_1d(prob, 1000, 1e-12);
  const IdentityReport r = eval_lemma33(sol, prob);
  CHECK(std::abs(r.slack) <= 1e-10);

  std::vector<double> hs, errs;
  for (int N : {250, 500, 1000, 2000}) {
    const SolveProfile g = solve_band_grid(prob, {N, 1, 1}, 1e-12);
    const IdentityReport rg = eval_lemma33(g, prob);
    hs.push_back(g.grid.spacing());
    errs.push_back(std::abs(rg.slack));
  }
  CHECK(convergence_order(hs, errs) >= 1.5);

  // Zero potential on the same band: the harmonic configuration is itself
  // tight (the band splits as a warped product), so the slack is another
  // equality up to discretization; exact bookkeeping: bulk = boundary.
  const BandProblem prob0(MetricSpec::round_band(kPi / 4, kPi / 4), {-kPi / 4, kPi / 4},
                          Potential::zero());
  const SolveProfile sol0 = solve_band_1d(prob0, 1000, 1e-12);
  const IdentityReport r0 = eval_lemma33(sol0, prob0);
  CHECK(std::abs(r0.slack) <= 256.0 * r0.h * r0.h);
  CHECK(r0.boundary_term > 1.0);  // both sides are genuinely nonzero
}

TEST_CASE("round band with sphere fibers and zero potential: topological term") {
  // Exact balance: boundary 32 pi c + topological 16 pi = bulk 48 pi c at
  // c = 1, the annular rigidity configuration.
  const BandProblem prob(MetricSpec::round_band(kPi / 4, kPi / 4), {-kPi / 4, kPi / 4},
                         Potential::zero());
  const SolveProfile sol = solve_band_1d(prob, 800, 1e-12);
  const IdentityReport r = eval_lemma23(sol, prob);
  CHECK(r.topological_term == Approx(8.0 * kPi * (prob.c_plus - prob.c_minus)).margin(1e-12));
  CHECK(r.topological_term > 0.0);
  CHECK(r.boundary_term == Approx(32.0 * kPi).epsilon(1e-6));
  CHECK(r.bulk_hessian_term + r.bulk_curvature_term == Approx(48.0 * kPi).epsilon(1e-5));
  CHECK(std::abs(r.slack) <= 256.0 * r.h * r.h);
}

TEST_CASE("2-Ricci identity on the rigidity family") {
  for (double ups : {0.0, 0.5, 1.0}) {
    const BandProblem prob = g_upsilon_problem(ups, kPi / 8);
    const SolveProfile sol = solve_band_1d(prob, 1000, 1e-12);
    const IdentityReport r = eval_lemma71(sol, prob);
    CAPTURE(ups);
    CHECK(std::abs(r.slack) <= 1e-10);
    CHECK(r.bulk_hessian_term >= -1e-15);  // pointwise nonnegative integrand
  }
  // grid route drives the slack below 1e-3 at 2000 cells
  const BandProblem prob = g_upsilon_problem(0.5, 3 * kPi / 16);
  const SolveProfile g = solve_band_grid(prob, {2000, 1, 1}, 1e-12);
  const IdentityReport rg = eval_lemma71(g, prob);
  CHECK(std::abs(rg.slack) <= 1e-3);
  CHECK(std::abs(rg.slack) <= 256.0 * rg.h * rg.h);
}

TEST_CASE("2-Ricci identity: flat band and pointwise curvature consistency") {
  const BandProblem prob = flat_problem();
  const SolveProfile sol = solve_band_1d(prob, 300);
  const IdentityReport r = eval_lemma71(sol, prob);
  CHECK(std::abs(r.slack) <= 1e-13);

  // truncated nonround family: R - Ric(nu, nu) >= 4, matching the
  // eigenvalue pair from the curvature module pointwise
  const MetricSpec ctr = MetricSpec::counterexample(1.0);
  const Interval band{-kPi / 4 + 0.1, kPi / 4 - 0.1};
  for (double t : {band.lo, -0.3, 0.0, 0.42, band.hi}) {
    const CurvatureSample s = ctr.curvature_at(t);
    const double transverse = s.scalar - ctr.ricci_radial(t);
    const auto raw = ctr.raw_eigs(t);
    CHECK(transverse == Approx(raw[1] + raw[2]).margin(1e-9));
    CHECK(transverse >= 4.0 - 1e-9);
  }
}

TEST_CASE("identities reject profiles with vanishing gradient or bad residual") {
  const BandProblem prob = flat_problem();
  SolveProfile sol = solve_band_1d(prob, 200);
  SolveProfile broken = sol;
  broken.du[50] = 0.0;
  CHECK_THROWS_AS(eval_lemma23(broken, prob), std::domain_error);
  SolveProfile noisy = sol;
  noisy.residual_sup = 1.0;
  CHECK_THROWS_AS(eval_lemma23(noisy, prob), std::invalid_argument);
}

TEST_CASE("weighted identity on asymptotically flat metrics") {
  // Euclidean: both terms vanish to machine precision
  const MetricSpec euc = MetricSpec::af_symmetric(0.0);
  const AFProfile pe = solve_green_af(euc, {1e-3, 1e3}, 1000);
  const AFIdentityReport re = eval_af_identity(pe, euc);
  CHECK(std::abs(re.bulk_hessian_term) <= 1e-12);
  CHECK(std::abs(re.bulk_curvature_term) <= 1e-12);
  CHECK(std::abs(re.slack) <= 1e-12);

  // Mass 1, in closed form (v = 1/(r + 1/2), u = r + 1/2): the weighted
  // Hessian term integrates to 6 pi m^2 int dr/(r^3 p^5) = 2 pi via the Beta
  // integral B(2,3) = 1/12, and the Ricci term to -8 pi m int dr/(r^2 p^5)
  // = -4 pi [1 - (1 + m/2r)^{-4}]/2 evaluated between the truncation radii.
  // Their sum equals the two boundary fluxes: the r -> 0 side is a second
  // asymptotically flat end (not a Green's-function pole), and contributes
  // -2 pi; the outer flux is +8 pi m / r_max + O(r_max^{-2}).
  const MetricSpec sch = MetricSpec::af_symmetric(1.0);
  const AFProfile ps = solve_green_af(sch, {1e-3, 1e3}, 4000);
  CHECK(ps.asymptote_err <= 1e-3);
  const AFIdentityReport rs = eval_af_identity(ps, sch);
  const double s_lo = 0.5 / 1e3, s_hi = 0.5 / 1e-3;
  const double ric_expect =
      -4.0 * kPi * (std::pow(1.0 + s_lo, -4.0) - std::pow(1.0 + s_hi, -4.0));
  CHECK(rs.bulk_hessian_term == Approx(2.0 * kPi).epsilon(1e-3));
  CHECK(rs.bulk_curvature_term == Approx(ric_expect).epsilon(1e-3));
  // divergence-theorem closure: bulk = outer flux + inner flux
  CHECK(rs.slack ==
        Approx(rs.outer_flux + rs.inner_flux).margin(2e-3 * std::abs(rs.slack) + 1e-6));
  CHECK(rs.inner_flux == Approx(-2.0 * kPi).epsilon(1e-3));
  CHECK(rs.outer_flux == Approx(8.0 * kPi / 1e3).epsilon(2e-2));
  CHECK(rs.truncation_estimate >= 0.0);
}

TEST_CASE("round-comparison scan") {
  // the round profile itself: constant R = 6 and zero quantitative slack
  const MetricSpec round = MetricSpec::sin_cubic(0.0);
  const LlarullReport r0 = eval_llarull(round, LlarullMode::Quant, 4000);
  CHECK(r0.hypothesis_ok);
  CHECK(r0.min_R == Approx(6.0).margin(1e-9));
  CHECK(std::abs(r0.quant.slack) <= 1e-8);

  // stretched fibers: min R = 4 + 2/lambda^2 at the equator
  for (double lam : {1.05, 1.2, 1.5}) {
    const MetricSpec m = MetricSpec::lambda_sin(lam);
    const LlarullReport r = eval_llarull(m, LlarullMode::Scan, 10000);
    CAPTURE(lam);
    CHECK(r.hypothesis_ok);
    CHECK(r.strict_somewhere);
    CHECK(r.min_R == Approx(4.0 + 2.0 / (lam * lam)).margin(1e-8));
    CHECK(r.min_R < 6.0);
    CHECK(r.argmin_theta == Approx(kPi / 2).margin(1e-5));
    CHECK(r.conclusion_holds);
  }

  // a smooth closed deformation also reports a sub-round value
  const MetricSpec cub = MetricSpec::sin_cubic(0.1);
  const LlarullReport rc = eval_llarull(cub, LlarullMode::Scan, 10000);
  CHECK(rc.min_R < 6.0);
  CHECK(rc.conclusion_holds);

  // hypothesis gate: w < sin theta somewhere is flagged
  const MetricSpec shrunk = MetricSpec::lambda_sin(0.9);
  CHECK_THROWS_AS(eval_llarull(shrunk, LlarullMode::Scan, 2000), std::domain_error);
}

TEST_CASE("catalog slack sign: every identity is nonnegative up to O(h^2)") {
  struct Entry {
    BandProblem prob;
    IdentityReport (*eval)(const SolveProfile&, const BandProblem&);
  };
  std::vector<Entry> entries;
  entries.push_back({flat_problem(), eval_lemma23});
  entries.push_back({torus_extremal_problem(), eval_lemma23});
  entries.push_back({round_band_problem(), eval_lemma33});
  entries.push_back({g_upsilon_problem(0.25, kPi / 8), eval_lemma71});
  entries.push_back({BandProblem(MetricSpec::round_band(kPi / 4, kPi / 4),
                                 {-kPi / 4, kPi / 4}, Potential::zero()),
                     eval_lemma23});
  for (auto& e : entries) {
    const SolveProfile sol = solve_band_grid(e.prob, {500, 1, 1}, 1e-12);
    const IdentityReport r = e.eval(sol, e.prob);
    REQUIRE(r.slack >= -256.0 * r.h * r.h);
  }
}
