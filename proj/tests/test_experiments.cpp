#include <catch2/catch_amalgamated.hpp>

#include "stharm/experiments.hpp"

using namespace stharm;
using Catch::Approx;

TEST_CASE("width bound: Ricci band saturation") {
  const BandProblem prob(MetricSpec::round_band(kPi / 4, kPi / 4), {-kPi / 4, kPi / 4},
                         Potential::zero());
  const WidthVerdict v = width_bound(prob, WidthTheorem::Ricci);
  CHECK(v.width == Approx(kPi / 2).margin(1e-12));
  CHECK(v.bound == Approx(std::atan(1.0) + std::atan(1.0)).margin(1e-12));
  CHECK(v.saturated);
  CHECK(v.H_minus == Approx(2.0).margin(1e-12));

  // asymmetric band: arctan(H-/2) + arctan(H+/2)
  const BandProblem asym(MetricSpec::round_band(kPi / 6, kPi / 3), {-kPi / 6, kPi / 3},
                         Potential::zero());
  const WidthVerdict va = width_bound(asym, WidthTheorem::Ricci);
  CHECK(va.saturated);
}

TEST_CASE("width bound: torus band saturation") {
  const double w = kPi / 3;
  const BandProblem prob(MetricSpec::torus_extremal(w), {-w / 2, w / 2}, Potential::zero());
  const WidthVerdict v = width_bound(prob, WidthTheorem::Torus);
  CHECK(v.H0 == Approx(2.0).margin(1e-12));
  CHECK(v.bound == Approx((4.0 / 3.0) * std::atan(1.0)).margin(1e-12));
  CHECK(v.saturated);

  // narrower bands are strict
  const BandProblem narrow(MetricSpec::torus_extremal(w), {-w / 4, w / 4}, Potential::zero());
  const WidthVerdict vn = width_bound(narrow, WidthTheorem::Torus);
  CHECK(vn.holds);
  CHECK_FALSE(vn.saturated);
}

TEST_CASE("width bound: 2-Ricci bands across the rigidity family") {
  for (double ups : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (double rho0 : {kPi / 16, kPi / 8, 3 * kPi / 16}) {
      const BandProblem prob(MetricSpec::g_upsilon(ups), {-rho0, rho0}, Potential::zero());
      const WidthVerdict v = width_bound(prob, WidthTheorem::TwoRicci);
      CAPTURE(ups, rho0);
      CHECK(v.H0 == Approx(2.0 * std::tan(2.0 * rho0)).margin(1e-10));
      CHECK(std::abs(v.width - v.bound) <= 1e-8);
      CHECK(v.saturated);
    }
  }
  // the nonround family saturates too (2-Ricci gate, not Ricci)
  const double a = kPi / 8;
  const BandProblem ctr(MetricSpec::counterexample(1.0), {-a, a}, Potential::zero());
  const WidthVerdict vc = width_bound(ctr, WidthTheorem::TwoRicci);
  CHECK(vc.saturated);
}

TEST_CASE("bound ordering at H0 = 2: 2-Ricci sharper than the torus bound") {
  CHECK(std::atan(1.0) < (4.0 / 3.0) * std::atan(1.0));
  const double w = kPi / 3;
  const BandProblem t(MetricSpec::torus_extremal(w), {-w / 2, w / 2}, Potential::zero());
  const BandProblem g(MetricSpec::g_upsilon(0.0), {-kPi / 8, kPi / 8}, Potential::zero());
  const double torus_bound = width_bound(t, WidthTheorem::Torus).bound;
  const double tworicci_bound = width_bound(g, WidthTheorem::TwoRicci).bound;
  CHECK(tworicci_bound == Approx(kPi / 4).margin(1e-12));
  CHECK(torus_bound == Approx(kPi / 3).margin(1e-12));
  CHECK(tworicci_bound < torus_bound);
}

TEST_CASE("width bound: hypothesis gates reject inadmissible metrics") {
  const BandProblem flat(MetricSpec::flat_product(), {-0.5, 0.5}, Potential::zero());
  CHECK_THROWS_AS(width_bound(flat, WidthTheorem::Ricci), hypothesis_error);
  CHECK_THROWS_AS(width_bound(flat, WidthTheorem::Torus), hypothesis_error);
  // the nonround family fails the Ricci gate for delta > 0 but not the 2-Ricci gate
  const double a = kPi / 8;
  const BandProblem ctr(MetricSpec::counterexample(0.5), {-a, a}, Potential::zero());
  CHECK_THROWS_AS(width_bound(ctr, WidthTheorem::Ricci), hypothesis_error);
}

TEST_CASE("punctured diameter comparison") {
  const BonnetMyersReport unit = bonnet_myers(MetricSpec::round_sphere(1.0), 0.01);
  CHECK(unit.d_minus == Approx(0.01));
  CHECK(unit.d_plus == Approx(kPi - 0.01));
  CHECK(unit.sum == Approx(kPi).margin(1e-12));
  CHECK(unit.saturated);

  const BonnetMyersReport small = bonnet_myers(MetricSpec::round_sphere(0.9), 0.01);
  CHECK(small.sum == Approx(0.9 * kPi).margin(1e-12));
  CHECK_FALSE(small.saturated);
  CHECK(small.ric_min >= 2.0 / 0.81 - 1e-9);

  // nonround closed profile passing the Ricci gate
  const BonnetMyersReport sech = bonnet_myers(MetricSpec::sech_band(), 0.01);
  CHECK(sech.holds);
  CHECK(sech.sum < kPi);

  // gate rejection: a sphere of radius > 1 has Ric < 2g
  CHECK_THROWS_AS(bonnet_myers(MetricSpec::round_sphere(1.5), 0.01), hypothesis_error);
}

TEST_CASE("waist average-area bound") {
  const WaistReport unit = waist_average(MetricSpec::round_sphere(1.0), 6.0);
  CHECK(unit.avg_area == Approx(2.0 * kPi).margin(1e-6));
  CHECK(unit.bound == Approx(16.0 * kPi / 6.0).margin(1e-12));
  CHECK(unit.bound == Approx(8.0 * kPi / 3.0).margin(1e-12));
  CHECK(unit.holds);

  // radius-2 sphere at R0 = 1.5: diam 2 pi >= 4 pi / sqrt(4.5)
  const WaistReport big = waist_average(MetricSpec::round_sphere(2.0), 1.5);
  CHECK(big.avg_area == Approx(8.0 * kPi).margin(1e-5));
  CHECK(big.holds);

  // diameter hypothesis failure reported as such
  CHECK_THROWS_AS(waist_average(MetricSpec::round_sphere(0.5), 20.0), hypothesis_error);
  // curvature gate
  CHECK_THROWS_AS(waist_average(MetricSpec::round_sphere(1.0), 7.0), hypothesis_error);
}

TEST_CASE("dice decomposition") {
  // unit round sphere at R0 = 6: 2 w0 exceeds the diameter, single region
  const DiceDecomposition one = dice(MetricSpec::round_sphere(1.0), 6.0);
  CHECK(one.region_count == 1);
  CHECK(one.count_ok);
  CHECK(one.all_ok);

  // degenerate: diam < w0 still a single region
  const DiceDecomposition deg = dice(MetricSpec::round_sphere(1.0), 1.0);
  CHECK(deg.region_count == 1);

  // capsule of length 20 at R0 = 2: several regions, all properties
  const DiceDecomposition cap = dice(MetricSpec::capsule(20.0), 2.0);
  CHECK(cap.region_count >= 2);
  CHECK(cap.count_ok);
  CHECK(cap.region_count - 1 <= std::sqrt(6.0) / (4.0 * kPi) * cap.diam + 1e-9);
  for (double a : cap.interface_area) CHECK(a <= 8.0 * kPi + 1e-6);
  CHECK(cap.adjacency_ok);
  CHECK(cap.area_ok);
  CHECK(cap.dist_ok);
  CHECK(cap.all_ok);
  // region union covers the profile: cuts strictly inside
  for (double c : cap.cut_rho) {
    CHECK(c > cap.w0 * 0.1);
    CHECK(c < cap.diam);
  }
}

TEST_CASE("nonround family audit") {
  for (double delta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const CounterexampleReport r = counterexample_audit(delta);
    CAPTURE(delta);
    CHECK(r.two_ric_min >= 4.0 - 1e-9);
    CHECK(r.d_center_core == Approx(kPi / 4));
    CHECK(r.d_core_core == Approx(kPi / 2));
    CHECK(r.closure_ok);
    CHECK(r.holds);
    if (delta == 0.0) {
      CHECK(r.ric_min == Approx(2.0).margin(1e-9));
      CHECK_FALSE(r.ric_below_two);
    } else {
      CHECK(r.ric_below_two);
    }
  }
  CHECK(counterexample_audit(1.0).ric_min == Approx(-2.0).margin(1e-3));
  CHECK_THROWS_AS(counterexample_audit(1.5), std::invalid_argument);
}
