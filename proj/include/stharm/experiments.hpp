#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stharm/errors.hpp"
#include "stharm/geometry.hpp"
#include "stharm/identities.hpp"
#include "stharm/potentials.hpp"
#include "stharm/solver.hpp"

namespace stharm {

enum class WidthTheorem { Ricci, Torus, TwoRicci };

inline const char* theorem_name(WidthTheorem t) {
  switch (t) {
    case WidthTheorem::Ricci: return "ricci";
    case WidthTheorem::Torus: return "torus";
    case WidthTheorem::TwoRicci: return "tworicci";
  }
  return "?";
}

struct WidthVerdict {
  std::string theorem;
  double width = 0.0;
  double bound = 0.0;
  bool saturated = false;  // |width - bound| <= 1e-8
  bool holds = false;      // width <= bound + 1e-8
  double hyp_min = 0.0;    // grid minimum of the gated curvature quantity
  double H_minus = 0.0, H_plus = 0.0, H0 = 0.0;
};

namespace experiments_detail {

enum class Gate { RicciLower, ScalarLower, TwoRicciLower };

/// Verify a pointwise curvature lower bound on a dense midpoint grid.
/// Returns the grid minimum; throws hypothesis_error on violation.
inline double curvature_gate(const MetricSpec& m, Interval iv, Gate gate, double bound,
                             int grid_n = 10000, double tol = 1e-9) {
  double mn = std::numeric_limits<double>::infinity();
  double arg = iv.lo;
  const Grid1D g(iv.lo, iv.hi, grid_n);
  for (int i = 0; i < g.n_cells; ++i) {
    const double t = g.midpoint(i);
    const CurvatureSample s = m.curvature_at(t);
    const double v = gate == Gate::RicciLower     ? s.ricci_eigs[0]
                     : gate == Gate::ScalarLower  ? s.scalar
                                                  : s.two_ricci;
    if (v < mn) {
      mn = v;
      arg = t;
    }
  }
  if (mn < bound - tol)
    throw hypothesis_error("curvature hypothesis violated: minimum " + std::to_string(mn) +
                               " < " + std::to_string(bound) + " at rho = " + std::to_string(arg),
                           arg, mn);
  return mn;
}

}  // namespace experiments_detail

/// Band-width verdict: verify the curvature hypothesis, read the boundary
/// mean curvatures, and compare the band width against the arctan bound.
inline WidthVerdict width_bound(const BandProblem& prob, WidthTheorem thm, int grid_n = 10000) {
  using experiments_detail::Gate;
  const MetricSpec& m = prob.metric;
  const Interval iv = prob.interval;
  const int n = prob.n;

  WidthVerdict v;
  v.theorem = theorem_name(thm);
  v.width = iv.length();
  v.H_minus = -m.mean_curvature_boundary(iv, -1);
  v.H_plus = -m.mean_curvature_boundary(iv, +1);
  v.H0 = std::max(v.H_minus, v.H_plus);

  switch (thm) {
    case WidthTheorem::Ricci:
      v.hyp_min = experiments_detail::curvature_gate(m, iv, Gate::RicciLower, n - 1.0, grid_n);
      v.bound = std::atan(v.H_minus / (n - 1.0)) + std::atan(v.H_plus / (n - 1.0));
      break;
    case WidthTheorem::Torus:
      if (n != 3) throw std::invalid_argument("width_bound: torus band theorem is 3-dimensional");
      v.hyp_min = experiments_detail::curvature_gate(m, iv, Gate::ScalarLower, 6.0, grid_n);
      if (!(v.H0 > 0.0))
        throw falsified_error("torus band: H0 <= 0 with R >= 6 contradicts the width theorem");
      v.bound = (4.0 / 3.0) * std::atan(0.5 * v.H0);
      break;
    case WidthTheorem::TwoRicci:
      if (n != 3) throw std::invalid_argument("width_bound: 2-Ricci band theorem is 3-dimensional");
      v.hyp_min = experiments_detail::curvature_gate(m, iv, Gate::TwoRicciLower, 4.0, grid_n);
      if (!(v.H0 > 0.0))
        throw falsified_error("2-Ricci band: H0 <= 0 with 2-Ric >= 4 contradicts the width theorem");
      v.bound = std::atan(0.5 * v.H0);
      break;
  }
  v.saturated = std::abs(v.width - v.bound) <= 1e-8;
  v.holds = v.width <= v.bound + 1e-8;
  if (!v.holds)
    throw falsified_error("width bound violated: width " + std::to_string(v.width) + " > bound " +
                          std::to_string(v.bound));
  return v;
}

struct BonnetMyersReport {
  double eps = 0.0;
  double d_minus = 0.0, d_plus = 0.0;  // distances from the eps-sphere to the two punctures
  double sum = 0.0;
  double bound = kPi;
  bool saturated = false;
  bool holds = false;
  double ric_min = 0.0;
};

/// Diameter comparison for closed rotationally symmetric metrics with
/// Ric >= (n-1) g: puncture the poles and measure through the eps-sphere.
inline BonnetMyersReport bonnet_myers(const MetricSpec& m, double eps, int grid_n = 10000) {
  if (!m.is_closed_manifold())
    throw std::invalid_argument("bonnet_myers: expects a closed symmetric metric");
  const Interval dom = m.profile_domain();
  if (!(eps > 0 && eps < 0.25 * dom.length()))
    throw std::invalid_argument("bonnet_myers: eps out of range");
  BonnetMyersReport r;
  r.eps = eps;
  r.ric_min = experiments_detail::curvature_gate(m, dom, experiments_detail::Gate::RicciLower,
                                                 m.dimension() - 1.0, grid_n);
  // Sigma = eps-sphere about the lo pole; distances are profile arclengths.
  r.d_minus = eps;
  r.d_plus = dom.length() - eps;
  r.sum = r.d_minus + r.d_plus;
  r.saturated = std::abs(r.sum - kPi) <= 1e-8;
  r.holds = r.sum <= kPi + 1e-8;
  if (!r.holds) throw falsified_error("diameter comparison violated: sum exceeds pi");
  return r;
}

struct WaistReport {
  double R0 = 0.0, b2 = 0.0;
  double diam = 0.0, w0 = 0.0;
  double avg_area = 0.0;  // average level-set area of the solved potential flow
  double bound = 0.0;     // 16 pi / R0 (b2 + 1)
  double scal_min = 0.0;
  bool holds = false;
};

/// Average level-set area of the spacetime harmonic function between
/// diameter-realizing poles, against the 16 pi / R0 (b2 + 1) bound.
/// Solved on the full punctured profile: the cot potential's singular part
/// cancels the distance-sphere mean curvature, so the reduced ODE
/// coefficient stays integrable at the poles.
inline WaistReport waist_average(const MetricSpec& m, double R0, double b2 = 0.0,
                                 int n_cells = 20000) {
  if (!m.is_closed_manifold())
    throw std::invalid_argument("waist_average: expects a closed symmetric metric");
  if (!(R0 > 0)) throw std::invalid_argument("waist_average: R0 must be positive");
  const Interval dom = m.profile_domain();
  WaistReport r;
  r.R0 = R0;
  r.b2 = b2;
  r.diam = dom.length();
  r.w0 = 4.0 * kPi / std::sqrt(3.0 * R0);
  r.scal_min = experiments_detail::curvature_gate(m, dom, experiments_detail::Gate::ScalarLower, R0);
  if (r.diam < r.w0 - 1e-12)
    throw hypothesis_error("waist_average: diameter below 4 pi / sqrt(3 R0)", 0.0, r.diam);

  Potential pot = make_potential(PotentialKind::Waist, {{"w", r.diam}});
  BandProblem prob(m, dom, pot, -1.0, 1.0, 2, dom.lo);
  SolveProfile sol = solve_band_1d(prob, n_cells, 1e-12);
  std::vector<double> integrand(sol.grid.n_nodes());
  for (int i = 0; i < sol.grid.n_nodes(); ++i)
    integrand[i] = sol.du[i] * m.fiber_area(sol.grid.node(i));
  r.avg_area = trapezoid(integrand, sol.grid.spacing()) / (prob.c_plus - prob.c_minus);
  r.bound = 16.0 * kPi / R0 * (b2 + 1.0);
  r.holds = r.avg_area <= r.bound + 1e-9;
  if (!r.holds) throw falsified_error("waist average-area bound violated");
  return r;
}

/// Decomposition of a closed symmetric metric into consecutive regions cut
/// along small-area level sets of band solves.
struct DiceDecomposition {
  double R0 = 0.0, w0 = 0.0, diam = 0.0;
  int region_count = 0;                  // I
  std::vector<double> cut_rho;           // I-1 interface positions
  std::vector<double> cut_level;         // level values in the solving band
  std::vector<double> interface_area;    // normalized area per interface (N_i = 1)
  std::vector<double> interface_gaps;    // consecutive interface distances
  double dh_first = 0.0, dh_last = 0.0;  // Hausdorff distance of end regions to their cut
  bool count_ok = false, smooth_ok = false, adjacency_ok = false, area_ok = false, dist_ok = false;
  bool all_ok = false;
};

inline DiceDecomposition dice(const MetricSpec& m, double R0, int n_cells = 4000) {
  if (!m.is_closed_manifold()) throw std::invalid_argument("dice: expects a closed symmetric metric");
  if (!(R0 > 0)) throw std::invalid_argument("dice: R0 must be positive");
  const Interval dom = m.profile_domain();
  DiceDecomposition d;
  d.R0 = R0;
  d.diam = dom.length();
  d.w0 = 4.0 * kPi / std::sqrt(3.0 * R0);
  experiments_detail::curvature_gate(m, dom, experiments_detail::Gate::ScalarLower, R0);

  const double delta = d.w0 / 200.0;   // band margin past the half-width
  const double clip = d.w0 / 100.0;    // potential clip distance from the pole
  const double area_bound = 16.0 * kPi / R0;

  double pos = dom.lo;  // current cut (initially the seed pole)
  for (;;) {
    const double reach = pos + 2.0 * d.w0;
    if (reach >= dom.hi) break;  // remaining piece is absorbed into the last region
    const double band_lo = reach - 0.5 * d.w0 - delta;
    const double band_hi = reach + 0.5 * d.w0 + delta;
    if (band_hi >= dom.hi) break;  // outer boundary of the band is empty

    Potential pot =
        make_potential(PotentialKind::Waist, {{"w", d.w0}, {"clip_eps", clip}});
    // the potential's variable is the signed offset from the sphere at
    // `reach`, shifted so tau = 0 sits half a width below it
    BandProblem prob(m, {band_lo, band_hi}, pot, -1.0, 1.0, m.default_fiber_chi(),
                     reach - 0.5 * d.w0);
    SolveProfile sol = solve_band_1d(prob, n_cells, 1e-11);

    // pick the interior level of smallest fiber area; nudge off grid nodes
    double best_area = std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (int i = 1; i + 1 < sol.grid.n_nodes(); ++i) {
      const double a = m.fiber_area(sol.grid.node(i));
      if (a < best_area) {
        best_area = a;
        best_i = i;
      }
    }
    if (best_area > area_bound + 1e-6)
      throw falsified_error("dice: no level with fiber area within 16 pi / R0 found in the band");
    double cut = sol.grid.node(best_i);
    const double h = sol.grid.spacing();
    if (std::abs((cut - sol.grid.lo) / h - std::round((cut - sol.grid.lo) / h)) < 1e-9)
      cut += 0.5 * h;  // deterministic stand-in for the almost-all regular choice
    d.cut_rho.push_back(cut);
    d.cut_level.push_back(sol.u[best_i]);
    d.interface_area.push_back(m.fiber_area(cut));
    pos = cut;
  }
  d.region_count = static_cast<int>(d.cut_rho.size()) + 1;

  // properties of the decomposition
  d.count_ok = (d.region_count - 1) <= std::sqrt(3.0 * R0) / (4.0 * kPi) * d.diam + 1e-9;
  d.smooth_ok = true;  // cuts are regular level sets of warped fibers
  d.adjacency_ok = true;
  for (std::size_t i = 0; i + 1 < d.cut_rho.size(); ++i)
    if (!(d.cut_rho[i] < d.cut_rho[i + 1])) d.adjacency_ok = false;
  d.area_ok = true;
  for (double a : d.interface_area)
    if (a > area_bound + 1e-6) d.area_ok = false;
  d.dist_ok = true;
  for (std::size_t i = 0; i + 1 < d.cut_rho.size(); ++i) {
    const double gap = d.cut_rho[i + 1] - d.cut_rho[i];
    d.interface_gaps.push_back(gap);
    if (gap > 16.0 * kPi / std::sqrt(3.0 * R0) + 1e-9) d.dist_ok = false;
  }
  if (!d.cut_rho.empty()) {
    d.dh_first = d.cut_rho.front() - dom.lo;
    d.dh_last = dom.hi - d.cut_rho.back();
    if (d.dh_first + d.dh_last > 32.0 * kPi / std::sqrt(3.0 * R0) + 1e-9) d.dist_ok = false;
  }
  d.all_ok = d.count_ok && d.smooth_ok && d.adjacency_ok && d.area_ok && d.dist_ok;
  if (!d.all_ok) throw falsified_error("dice: a decomposition property failed");
  return d;
}

struct CounterexampleReport {
  double delta = 0.0;
  double two_ric_min = 0.0, two_ric_argmin = 0.0;
  double ric_min = 0.0;
  double d_center_core = 0.0;  // central torus to either core circle
  double d_core_core = 0.0;    // between the two core circles
  bool closure_ok = false;     // |w'| = 1 where the warp vanishes
  bool ric_below_two = false;  // min Ricci eigenvalue < 2 (delta > 0)
  bool holds = false;          // 2-Ricci >= 4 on the grid
};

/// Audit of the nonround family with 2-Ricci >= 4: curvature floor, smooth
/// closure, and the saturated core-circle distances.
inline CounterexampleReport counterexample_audit(double delta, int grid_n = 10000) {
  const MetricSpec m = MetricSpec::counterexample(delta);
  const Interval dom = m.profile_domain();
  CounterexampleReport r;
  r.delta = delta;
  r.two_ric_min = std::numeric_limits<double>::infinity();
  r.ric_min = std::numeric_limits<double>::infinity();
  const Grid1D g(dom.lo, dom.hi, grid_n);
  for (int i = 0; i < g.n_cells; ++i) {
    const double t = g.midpoint(i);
    const CurvatureSample s = m.curvature_at(t);
    if (s.two_ricci < r.two_ric_min) {
      r.two_ric_min = s.two_ricci;
      r.two_ric_argmin = t;
    }
    r.ric_min = std::min(r.ric_min, s.ricci_eigs[0]);
  }
  r.d_center_core = dom.hi;          // profile distance from {t=0} to {t=pi/4}
  r.d_core_core = dom.length();      // between the two core circles
  const WarpData pw = m.phi(dom.hi), qw = m.psi(dom.lo);
  r.closure_ok = std::abs(pw.w) < 1e-12 && std::abs(std::abs(pw.dw) - 1.0) < 1e-9 &&
                 std::abs(qw.w) < 1e-12 && std::abs(std::abs(qw.dw) - 1.0) < 1e-9;
  r.ric_below_two = r.ric_min < 2.0 - 1e-6;
  r.holds = r.two_ric_min >= 4.0 - 1e-9;
  if (!r.holds) throw falsified_error("counterexample audit: 2-Ricci floor violated");
  return r;
}

}  // namespace stharm
