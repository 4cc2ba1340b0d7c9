#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "stharm/geometry.hpp"
#include "stharm/io.hpp"

using namespace stharm;
using Catch::Approx;

namespace {

// interior sample points, away from domain ends where warps may vanish
std::vector<double> interior_points(const MetricSpec& m, int count, unsigned seed) {
  Interval dom = m.profile_domain();
  double lo = dom.lo, hi = dom.hi;
  if (!std::isfinite(lo)) lo = -1.0;
  if (!std::isfinite(hi)) hi = 1.0;
  const double inset = 0.02 * (hi - lo);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo + inset, hi - inset);
  std::vector<double> pts(count);
  for (double& p : pts) p = dist(rng);
  return pts;
}

}  // namespace

TEST_CASE("counterexample family matches its closed forms") {
  const MetricSpec m0 = MetricSpec::counterexample(0.0);
  // delta = 0: phi = cos(t + pi/4), psi = sin(t + pi/4)
  for (double t : {-0.5, -0.1, 0.0, 0.3, 0.7}) {
    CHECK(m0.phi(t).w == Approx(std::cos(t + kPi / 4)).margin(1e-15));
    CHECK(m0.psi(t).w == Approx(std::sin(t + kPi / 4)).margin(1e-15));
  }
  CurvatureSample s0 = m0.curvature_at(0.0);
  CHECK(s0.ricci_eigs[0] == Approx(2.0).margin(1e-12));
  CHECK(s0.ricci_eigs[2] == Approx(2.0).margin(1e-12));
  CHECK(s0.scalar == Approx(6.0).margin(1e-12));

  // delta = 1 next to the closing circle: eigenvalues (-2, 6, 6)
  const MetricSpec m1 = MetricSpec::counterexample(1.0);
  CurvatureSample s1 = m1.curvature_at(kPi / 4 - 1e-9);
  CHECK(s1.ricci_eigs[0] == Approx(-2.0).margin(1e-6));
  CHECK(s1.ricci_eigs[1] == Approx(6.0).margin(1e-6));
  CHECK(s1.ricci_eigs[2] == Approx(6.0).margin(1e-6));
  CHECK(s1.two_ricci == Approx(4.0).margin(1e-6));
}

TEST_CASE("counterexample symmetry, closure, and 2-Ricci floor") {
  for (double delta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const MetricSpec m = MetricSpec::counterexample(delta);
    for (double t : {-0.6, -0.2, 0.15, 0.45}) {
      CHECK(m.phi(t).w == Approx(m.psi(-t).w).margin(1e-12));
      const auto a = m.curvature_at(t).ricci_eigs, b = m.curvature_at(-t).ricci_eigs;
      for (int k = 0; k < 3; ++k) CHECK(a[k] == Approx(b[k]).margin(1e-12));
    }
    // smooth closing: the vanishing warp has |derivative| 1
    CHECK(std::abs(m.phi(kPi / 4).w) < 1e-15);
    CHECK(std::abs(std::abs(m.phi(kPi / 4).dw) - 1.0) < 1e-9);
    CHECK(std::abs(m.psi(-kPi / 4).w) < 1e-15);
    CHECK(std::abs(std::abs(m.psi(-kPi / 4).dw) - 1.0) < 1e-9);

    double two_min = 1e300;
    const Grid1D g(-kPi / 4, kPi / 4, 10000);
    for (int i = 0; i < g.n_cells; ++i)
      two_min = std::min(two_min, m.curvature_at(g.midpoint(i)).two_ricci);
    CHECK(two_min >= 4.0 - 1e-9);
  }
}

TEST_CASE("extremal torus band has constant scalar curvature 6") {
  const MetricSpec m = MetricSpec::torus_extremal(kPi / 3);
  CurvatureSample s = m.curvature_at(0.0);
  CHECK(s.ricci_eigs[0] == Approx(1.5).margin(1e-12));
  CHECK(s.ricci_eigs[1] == Approx(1.5).margin(1e-12));
  CHECK(s.ricci_eigs[2] == Approx(3.0).margin(1e-12));
  CHECK(s.scalar == Approx(6.0).margin(1e-12));
  CHECK(s.mean_curv == Approx(0.0).margin(1e-12));
  const Grid1D g(-kPi / 6, kPi / 6, 10000);
  for (int i = 0; i < g.n_cells; ++i)
    REQUIRE(std::abs(m.curvature_at(g.midpoint(i)).scalar - 6.0) <= 1e-9);
}

TEST_CASE("g_Upsilon family invariants") {
  for (double ups : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const MetricSpec m = MetricSpec::g_upsilon(ups);
    const Grid1D g(-kPi / 4 + 0.02, kPi / 4 - 0.02, 500);
    for (int i = 0; i < g.n_cells; ++i) {
      const double t = g.midpoint(i);
      const CurvatureSample s = m.curvature_at(t);
      CHECK(s.mean_curv == Approx(-2.0 * std::tan(2 * t)).margin(1e-10));
      CHECK(s.scalar - m.ricci_radial(t) == Approx(4.0).margin(1e-9));
      // phi psi = cos(2 rho)
      CHECK(m.phi(t).w * m.psi(t).w == Approx(std::cos(2 * t)).margin(1e-12));
    }
  }
  // evaluated samples
  const MetricSpec half = MetricSpec::g_upsilon(0.5);
  CHECK(half.curvature_at(0.0).scalar == Approx(7.5).margin(1e-12));
  CHECK(half.ricci_radial(0.0) == Approx(3.5).margin(1e-12));
  const MetricSpec zero = MetricSpec::g_upsilon(0.0);
  CHECK(zero.phi(0.0).w == Approx(1.0).margin(1e-14));
  CHECK(zero.psi(0.0).w == Approx(1.0).margin(1e-14));
}

TEST_CASE("analytic derivatives agree with five-point differences") {
  struct Case {
    MetricSpec m;
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({MetricSpec::g_upsilon(0.3), "g_upsilon"});
  cases.push_back({MetricSpec::torus_extremal(1.2), "torus_extremal"});
  cases.push_back({MetricSpec::counterexample(0.7), "counterexample"});
  cases.push_back({MetricSpec::round_band(kPi / 3, kPi / 3), "round_band"});
  cases.push_back({MetricSpec::round_sphere(0.8), "round_sphere"});
  cases.push_back({MetricSpec::capsule(2.0), "capsule"});
  cases.push_back({MetricSpec::lambda_sin(1.2), "lambda_sin"});
  cases.push_back({MetricSpec::sin_cubic(0.1), "sin_cubic"});
  cases.push_back({MetricSpec::sech_band(), "sech_band"});

  unsigned seed = 12345;
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto pts = interior_points(c.m, 1000, seed++);
    for (double t : pts) {
      auto check_warp = [&](const std::function<WarpData(double)>& wf) {
        const WarpData d = wf(t);
        auto f = [&](double x) { return wf(x).w; };
        const double h = 1e-4;
        CHECK(oracle::d1_five_point(f, t, h) ==
              Approx(d.dw).epsilon(1e-6).margin(1e-8));
        CHECK(oracle::d2_five_point(f, t, h) ==
              Approx(d.ddw).epsilon(1e-6).margin(1e-6));
      };
      if (c.m.is_doubly_warped()) {
        check_warp([&](double x) { return c.m.phi(x); });
        check_warp([&](double x) { return c.m.psi(x); });
      } else {
        check_warp([&](double x) { return c.m.warp(x); });
      }
    }
  }
}

TEST_CASE("closed-form curvature agrees with the generic warped formulas") {
  // doubly warped families against the raw diagonal
  for (const MetricSpec& m : {MetricSpec::g_upsilon(0.4), MetricSpec::torus_extremal(1.0),
                              MetricSpec::counterexample(0.6)}) {
    for (double t : interior_points(m, 200, 777)) {
      const auto e = oracle::doubly_warped_ricci(m.phi(t), m.psi(t));
      std::array<double, 3> sorted = e;
      std::sort(sorted.begin(), sorted.end());
      const auto s = m.curvature_at(t);
      for (int k = 0; k < 3; ++k) CHECK(s.ricci_eigs[k] == Approx(sorted[k]).margin(1e-7));
      CHECK(s.scalar == Approx(e[0] + e[1] + e[2]).margin(1e-7));
    }
  }
  // single warped families against the generic radial/fiber pair
  for (const MetricSpec& m :
       {MetricSpec::round_band(kPi / 3, kPi / 3), MetricSpec::round_sphere(1.3),
        MetricSpec::lambda_sin(1.5), MetricSpec::sin_cubic(0.1), MetricSpec::sech_band()}) {
    for (double t : interior_points(m, 200, 4242)) {
      const auto e = oracle::single_warped_ricci(m.warp(t), m.fiber_kappa(), m.dimension());
      CHECK(m.ricci_radial(t) == Approx(e[0]).margin(1e-7));
      const auto s = m.curvature_at(t);
      CHECK(s.scalar == Approx(e[0] + 2 * e[1]).margin(1e-7));
    }
  }
}

TEST_CASE("trace consistency and sorted eigenvalues") {
  for (const MetricSpec& m :
       {MetricSpec::g_upsilon(0.8), MetricSpec::counterexample(0.9), MetricSpec::flat_product(),
        MetricSpec::torus_extremal(0.9), MetricSpec::round_sphere(1.0)}) {
    for (double t : interior_points(m, 300, 99)) {
      const CurvatureSample s = m.curvature_at(t);
      CHECK(s.scalar ==
            Approx(s.ricci_eigs[0] + s.ricci_eigs[1] + s.ricci_eigs[2]).margin(1e-10));
      CHECK(s.ricci_eigs[0] <= s.ricci_eigs[1]);
      CHECK(s.ricci_eigs[1] <= s.ricci_eigs[2]);
      CHECK(s.two_ricci == s.ricci_eigs[0] + s.ricci_eigs[1]);
    }
  }
}

TEST_CASE("boundary mean curvature conventions") {
  const MetricSpec rb = MetricSpec::round_band(kPi / 4, kPi / 4, 3);
  const Interval band{-kPi / 4, kPi / 4};
  CHECK(rb.mean_curvature_boundary(band, +1) == Approx(-2.0).margin(1e-12));
  CHECK(rb.mean_curvature_boundary(band, -1) == Approx(-2.0).margin(1e-12));

  const MetricSpec te = MetricSpec::torus_extremal(kPi / 3);
  const Interval tband{-kPi / 6, kPi / 6};
  CHECK(te.mean_curvature_boundary(tband, +1) == Approx(-2.0).margin(1e-12));
  CHECK(te.mean_curvature_boundary(tband, -1) == Approx(-2.0).margin(1e-12));

  const MetricSpec fp = MetricSpec::flat_product();
  CHECK(fp.mean_curvature_boundary({0.0, 1.0}, +1) == 0.0);
  CHECK(fp.mean_curvature_boundary({0.0, 1.0}, -1) == 0.0);

  // closed metrics and AF metrics have no boundary leaf to report
  const MetricSpec ctr = MetricSpec::counterexample(0.5);
  CHECK_THROWS(ctr.mean_curvature_boundary(ctr.profile_domain(), +1));
  const MetricSpec af = MetricSpec::af_symmetric(1.0);
  CHECK_THROWS(af.mean_curvature_boundary({1.0, 2.0}, +1));
}

TEST_CASE("round sphere and sech band gates") {
  const MetricSpec s9 = MetricSpec::round_sphere(0.9);
  CHECK(s9.profile_domain().length() == Approx(0.9 * kPi));
  for (double t : interior_points(s9, 100, 5))
    CHECK(s9.curvature_at(t).ricci_eigs[0] == Approx(2.0 / 0.81).margin(1e-10));

  const MetricSpec sb = MetricSpec::sech_band();
  const Interval dom = sb.profile_domain();
  CHECK(sb.is_closed_manifold());
  CHECK(std::abs(sb.warp(dom.hi).w) < 1e-12);
  CHECK(std::abs(std::abs(sb.warp(dom.hi).dw) - 1.0) < 1e-10);
  const Grid1D g(dom.lo, dom.hi, 10000);
  for (int i = 0; i < g.n_cells; ++i) {
    const double t = g.midpoint(i);
    const WarpData w = sb.warp(t);
    // defining relation of the profile
    CHECK(w.ddw + w.w == Approx(-2.0 * (1.0 - std::tanh(t) * std::tanh(t)) * w.w).margin(1e-12));
    REQUIRE(sb.curvature_at(t).ricci_eigs[0] >= 2.0 - 1e-9);
  }
}

TEST_CASE("asymptotically flat data") {
  const MetricSpec euc = MetricSpec::af_symmetric(0.0);
  const AFData e = euc.af_at(2.5);
  CHECK(e.alpha == 1.0);
  CHECK(e.beta == 2.5);
  CHECK(euc.curvature_at(3.0).scalar == Approx(0.0).margin(1e-14));

  const MetricSpec sch = MetricSpec::af_symmetric(1.0);
  for (double r : {0.7, 1.3, 4.0, 25.0}) {
    const AFData d = sch.af_at(r);
    auto beta_f = [&](double x) { return sch.af_at(x).beta; };
    CHECK(oracle::d1_five_point(beta_f, r, 1e-4 * r) == Approx(d.dbeta).epsilon(1e-8));
    // the five-point second difference loses ~9 digits to cancellation on the
    // near-linear tail; compare with an absolute floor at that scale
    CHECK(oracle::d2_five_point(beta_f, r, 1e-4 * r) ==
          Approx(d.ddbeta).epsilon(1e-4).margin(2e-8));
    // time-symmetric vacuum slice: scalar curvature vanishes
    CHECK(sch.curvature_at(r).scalar == Approx(0.0).margin(1e-10));
    CHECK(sch.ricci_radial(r) < 0.0);
  }
}

TEST_CASE("custom doubly warped splines") {
  // spline through cosh samples; derivatives must track the smooth profile
  const int nk = 41;
  std::vector<double> phi(nk), psi(nk);
  for (int i = 0; i < nk; ++i) {
    const double t = -1.0 + 2.0 * i / (nk - 1);
    phi[i] = std::cosh(0.5 * t);
    psi[i] = 1.0 + 0.1 * t * t;
  }
  const MetricSpec m = MetricSpec::custom_doubly_warped(-1.0, 1.0, phi, psi);
  for (double t : {-0.6, -0.2, 0.1, 0.55}) {
    CHECK(m.phi(t).w == Approx(std::cosh(0.5 * t)).margin(1e-6));
    CHECK(m.phi(t).dw == Approx(0.5 * std::sinh(0.5 * t)).margin(1e-4));
    auto f = [&](double x) { return m.phi(x).w; };
    CHECK(oracle::d1_five_point(f, t, 1e-4) == Approx(m.phi(t).dw).margin(1e-7));
  }
  const CurvatureSample s = m.curvature_at(0.2);
  const auto e = oracle::doubly_warped_ricci(m.phi(0.2), m.psi(0.2));
  CHECK(s.scalar == Approx(e[0] + e[1] + e[2]).margin(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MetricSpec::g_upsilon(1.5), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::g_upsilon(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::counterexample(1.2), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::torus_extremal(2.2), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::torus_extremal(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::round_sphere(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::round_band(1.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::sin_cubic(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(MetricSpec::af_symmetric(-1.0), std::invalid_argument);
  // non-positive warping on the interior
  std::vector<double> bad = {1.0, 0.5, -0.2, 0.5, 1.0};
  std::vector<double> good = {1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(MetricSpec::custom_doubly_warped(0.0, 1.0, bad, good), std::domain_error);
}

TEST_CASE("metric JSON round trip") {
  for (const MetricSpec& m :
       {MetricSpec::torus_extremal(1.0), MetricSpec::g_upsilon(0.25),
        MetricSpec::round_sphere(2.0), MetricSpec::capsule(5.0), MetricSpec::af_symmetric(1.0)}) {
    const std::string text = metric_to_json(m).dump();
    const MetricSpec back = metric_from_json(nlohmann::json::parse(text));
    CHECK(back.family() == m.family());
    CHECK(back.dimension() == m.dimension());
    const double t = 0.5 * (m.default_interval().lo + m.default_interval().hi);
    if (!m.is_af())
      CHECK(back.curvature_at(t).scalar == Approx(m.curvature_at(t).scalar).margin(1e-14));
  }
  // aliases resolve to the canonical single-warped family
  const MetricSpec s = metric_from_json(
      nlohmann::json::parse(R"({"family":"RoundSphere","params":{"radius":1.5}})"));
  CHECK(s.family() == Family::RicciWarped);
  CHECK(s.profile_domain().length() == Approx(1.5 * kPi));
}
