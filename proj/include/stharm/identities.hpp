#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stharm/geometry.hpp"
#include "stharm/numerics.hpp"
#include "stharm/potentials.hpp"
#include "stharm/solver.hpp"

namespace stharm {

enum class IdentityKind { Lemma23, Lemma33, Lemma71, AFIdentity, LlarullQuant };

inline const char* identity_name(IdentityKind k) {
  switch (k) {
    case IdentityKind::Lemma23: return "lemma23";
    case IdentityKind::Lemma33: return "lemma33";
    case IdentityKind::Lemma71: return "lemma71";
    case IdentityKind::AFIdentity: return "af";
    case IdentityKind::LlarullQuant: return "llarull_quant";
  }
  return "?";
}

/// Per-term breakdown of one integral identity. slack is the inequality's
/// left side minus its right side; the combination of the four terms that
/// reconstructs it depends on the identity and is exposed for bookkeeping.
struct IdentityReport {
  IdentityKind identity = IdentityKind::Lemma23;
  double boundary_term = 0.0;
  double topological_term = 0.0;
  double bulk_hessian_term = 0.0;
  double bulk_curvature_term = 0.0;
  double slack = 0.0;
  double h = 0.0;

  double slack_from_terms() const {
    switch (identity) {
      case IdentityKind::Lemma23:
      case IdentityKind::Lemma71:
        return boundary_term + topological_term - bulk_hessian_term - bulk_curvature_term;
      case IdentityKind::Lemma33:
        return boundary_term - bulk_hessian_term - bulk_curvature_term;
      case IdentityKind::AFIdentity:
        return bulk_hessian_term + bulk_curvature_term;
      case IdentityKind::LlarullQuant:
        return bulk_curvature_term - bulk_hessian_term;
    }
    return 0.0;
  }
};

namespace identities_detail {

struct NodeData {
  double rho, A, H, f, df, gu;  // fiber area, level mean curvature, potential, |grad u|
  double upp;                   // u''
  std::vector<double> tang;     // tangential warp log-derivatives
  CurvatureSample curv;
  double ric_rad;
};

/// Pointwise data along the profile; u'' from a second-order stencil on du
/// (independent of the solve path that produced the profile).
inline std::vector<NodeData> collect(const SolveProfile& sol, const BandProblem& prob,
                                     double residual_gate = 1e-6) {
  if (sol.residual_sup > std::max(residual_gate, sol.residual_tol))
    throw std::invalid_argument("identity: profile residual exceeds the evaluation gate");
  const Grid1D& g = sol.grid;
  std::vector<double> upp = fd_derivative(sol.du, g.spacing());
  std::vector<NodeData> out(g.n_nodes());
  for (int i = 0; i < g.n_nodes(); ++i) {
    NodeData& d = out[i];
    d.rho = g.node(i);
    d.gu = sol.du[i];
    if (!(std::abs(d.gu) > 1e-14)) throw std::domain_error("identity: |grad u| vanishes on the profile");
    d.A = prob.metric.fiber_area(d.rho);
    d.H = prob.metric.mean_curv_profile(d.rho);
    d.f = prob.f_at(d.rho);
    d.df = prob.df_at(d.rho);
    d.upp = upp[i];
    d.tang = prob.metric.tangential_log_derivs(d.rho);
    d.curv = prob.metric.curvature_at(d.rho);
    d.ric_rad = prob.metric.ricci_radial(d.rho);
  }
  return out;
}

inline double spacetime_hessian_sq(const NodeData& d) {
  const double rad = d.upp + d.f * d.gu;
  double s = rad * rad;
  for (double L : d.tang) {
    const double e = d.gu * L + d.f * d.gu;
    s += e * e;
  }
  return s;
}

}  // namespace identities_detail

/// Scalar-curvature integral inequality on 3-dimensional bands:
/// boundary + 4 pi chi >= bulk Hessian + bulk curvature terms.
inline IdentityReport eval_lemma23(const SolveProfile& sol, const BandProblem& prob) {
  if (prob.n != 3) throw std::invalid_argument("eval_lemma23: 3-dimensional bands only");
  using identities_detail::collect;
  const auto data = collect(sol, prob);
  const double hsp = sol.grid.spacing();

  std::vector<double> hess(data.size()), curv(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    hess[i] = identities_detail::spacetime_hessian_sq(d) / d.gu * d.A;
    curv[i] = ((d.curv.scalar + 6.0 * d.f * d.f) * d.gu - 4.0 * d.df * d.gu) * d.A;
  }

  IdentityReport r;
  r.identity = IdentityKind::Lemma23;
  r.h = hsp;
  const auto& lo = data.front();
  const auto& hi = data.back();
  r.boundary_term = 2.0 * lo.gu * (2.0 * lo.f - (-lo.H)) * lo.A -
                    2.0 * hi.gu * (2.0 * hi.f + hi.H) * hi.A;
  r.topological_term = 4.0 * kPi * prob.fiber_euler_char * (prob.c_plus - prob.c_minus);
  r.bulk_hessian_term = trapezoid(hess, hsp);
  r.bulk_curvature_term = trapezoid(curv, hsp);
  r.slack = r.slack_from_terms();
  return r;
}

/// Ricci-weighted integral inequality in dimension n >= 3 with the
/// |grad u|^{-n/(n-1)} bulk weight.
inline IdentityReport eval_lemma33(const SolveProfile& sol, const BandProblem& prob) {
  const double n = prob.n;
  if (!(n >= 3)) throw std::invalid_argument("eval_lemma33: need n >= 3");
  using identities_detail::collect;
  const auto data = collect(sol, prob);
  const double hsp = sol.grid.spacing();
  const double bexp = 2.0 - n / (n - 1.0), wexp = -n / (n - 1.0);

  std::vector<double> hess(data.size()), curv(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    const double w = std::pow(d.gu, wexp);
    const double grad_part = d.upp + d.f * d.gu;  // |grad|grad u| + f grad u|
    hess[i] = w * (identities_detail::spacetime_hessian_sq(d) -
                   n / (n - 1.0) * grad_part * grad_part) * d.A;
    curv[i] = w *
              (n * n * (n - 2.0) * (n - 2.0) / (n - 1.0) * d.f * d.f * d.gu * d.gu +
               d.ric_rad * d.gu * d.gu - n * (n - 2.0) * d.gu * d.df * d.gu) *
              d.A;
  }

  IdentityReport r;
  r.identity = IdentityKind::Lemma33;
  r.h = hsp;
  const auto& lo = data.front();
  const auto& hi = data.back();
  r.boundary_term = std::pow(lo.gu, bexp) * (n * (n - 2.0) * lo.f - (-lo.H)) * lo.A -
                    std::pow(hi.gu, bexp) * (n * (n - 2.0) * hi.f + hi.H) * hi.A;
  r.bulk_hessian_term = trapezoid(hess, hsp);
  r.bulk_curvature_term = trapezoid(curv, hsp);
  r.slack = r.slack_from_terms();
  return r;
}

/// 2-Ricci coarea inequality on 3-dimensional bands; the level-set integrals
/// reduce to fiber area x |grad u| on symmetric profiles.
inline IdentityReport eval_lemma71(const SolveProfile& sol, const BandProblem& prob) {
  if (prob.n != 3) throw std::invalid_argument("eval_lemma71: 3-dimensional bands only");
  using identities_detail::collect;
  const auto data = collect(sol, prob);
  const double hsp = sol.grid.spacing();

  std::vector<double> hess(data.size()), curv(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    const double nn = d.upp + 1.5 * d.f * d.gu;  // grad_Sigma |grad u| = 0 by symmetry
    hess[i] = (nn * nn) / (d.gu * d.gu) * d.A * d.gu;
    curv[i] = (d.curv.scalar - d.ric_rad + 2.25 * d.f * d.f - 1.5 * d.df) * d.A * d.gu;
  }

  IdentityReport r;
  r.identity = IdentityKind::Lemma71;
  r.h = hsp;
  const auto& lo = data.front();
  const auto& hi = data.back();
  r.boundary_term = lo.gu * (1.5 * lo.f - (-lo.H)) * lo.A - hi.gu * (1.5 * hi.f + hi.H) * hi.A;
  r.topological_term = 4.0 * kPi * prob.fiber_euler_char * (prob.c_plus - prob.c_minus);
  r.bulk_hessian_term = trapezoid(hess, hsp);
  r.bulk_curvature_term = trapezoid(curv, hsp);
  r.slack = r.slack_from_terms();
  return r;
}

struct AFIdentityReport : IdentityReport {
  double truncation_estimate = 0.0;  // outer boundary flux magnitude
  double outer_flux = 0.0;           // signed, outward normal
  double inner_flux = 0.0;           // signed, outward normal (-d/dr side)
};

/// Weighted Bochner identity on asymptotically flat symmetric metrics:
/// int u^{2-n} (|T|^2 + Ric(grad u, grad u)) dV = 0 up to truncation flux,
/// where T is the conformal-Hessian defect of the comparison radius u.
inline AFIdentityReport eval_af_identity(const AFProfile& p, const MetricSpec& m) {
  if (!m.is_af()) throw std::invalid_argument("eval_af_identity: AFSymmetric metric required");
  const int n = m.dimension();
  const double area = detail::unit_sphere_area(n - 1);

  const std::size_t N = p.r.size();
  std::vector<double> hess(N), ric(N), dV(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = p.r[i];
    const AFData d = m.af_at(r);
    const double dens = d.alpha / std::pow(d.beta, n - 1);
    const double ddens = d.dalpha / std::pow(d.beta, n - 1) -
                         (n - 1) * d.alpha * d.dbeta / std::pow(d.beta, n);
    const double expo = 1.0 / (2.0 - n);
    const double v = p.v[i], vp = -dens, vpp = -ddens;
    const double up = p.du[i];
    const double upp = expo * (vpp * std::pow(v, expo - 1.0) +
                               (expo - 1.0) * vp * vp * std::pow(v, expo - 2.0));
    const double gu = up / d.alpha;  // |grad u|
    const double u = p.u[i];
    const double T_rad = upp / (d.alpha * d.alpha) - up * d.dalpha / std::pow(d.alpha, 3);
    const double T_tan = up * d.dbeta / (d.alpha * d.alpha * d.beta) - gu * gu / u;
    const double T2 = T_rad * T_rad + (n - 1) * T_tan * T_tan;
    const double ric_rad = m.ricci_radial(r);
    const double weight = std::pow(u, 2.0 - n);
    const double vol = d.alpha * std::pow(d.beta, n - 1) * area;  // dV/dr
    hess[i] = weight * T2 * vol;
    ric[i] = weight * ric_rad * gu * gu * vol;
    dV[i] = vol;
  }

  AFIdentityReport rep;
  rep.identity = IdentityKind::AFIdentity;
  auto integrate_nonuniform = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) s += 0.5 * (f[i] + f[i + 1]) * (p.r[i + 1] - p.r[i]);
    return s;
  };
  rep.bulk_hessian_term = integrate_nonuniform(hess);
  rep.bulk_curvature_term = integrate_nonuniform(ric);
  rep.slack = rep.slack_from_terms();
  rep.h = p.r[1] - p.r[0];

  // boundary fluxes that close the identity on the truncated domain:
  // flux = int_S (u^{2-n} |grad u| d_n|grad u| + (2-n)/2 u^{1-n}(|grad u|^2 - 1) d_n u) dA
  auto flux_at = [&](std::size_t i, std::size_t j, double normal_sign) {
    const double r = p.r[i];
    const AFData d = m.af_at(r);
    const double gu = p.du[i] / d.alpha;
    const double guj = p.du[j] / m.af_at(p.r[j]).alpha;
    const double dgu_ds = (gu - guj) / ((p.r[i] - p.r[j]) * d.alpha);
    const double u = p.u[i];
    const double dn_gu = normal_sign * dgu_ds;
    const double dn_u = normal_sign * gu;
    const double A = area * std::pow(d.beta, n - 1);
    return (std::pow(u, 2.0 - n) * gu * dn_gu +
            0.5 * (2.0 - n) * std::pow(u, 1.0 - n) * (gu * gu - 1.0) * dn_u) * A;
  };
  rep.outer_flux = flux_at(N - 1, N - 2, +1.0);
  rep.inner_flux = flux_at(0, 1, -1.0);
  rep.truncation_estimate = std::abs(rep.outer_flux);
  return rep;
}

enum class LlarullMode { Scan, Quant };

/// Round-comparison scan/quantitative check for warped metrics
/// dtheta^2 + w(theta)^2 g_{S^2} with w >= sin(theta).
struct LlarullReport {
  bool hypothesis_ok = false;     // w >= sin(theta) on the profile
  bool strict_somewhere = false;  // w > sin(theta) at some sample
  double min_R = 0.0;             // minimum over interior stationary values of R
  double argmin_theta = 0.0;
  bool conclusion_holds = false;  // min_R <= 6 (+tol)
  IdentityReport quant;           // filled in Quant mode
};

inline LlarullReport eval_llarull(const MetricSpec& m, LlarullMode mode, int grid_n = 10000,
                                  double band_eps = 1e-3) {
  if (m.is_doubly_warped() || m.is_af())
    throw std::invalid_argument("eval_llarull: expects a single-warped sphere-fiber metric");
  const Interval dom = m.profile_domain();
  if (std::abs(dom.lo) > 1e-12 || std::abs(dom.hi - kPi) > 1e-12)
    throw std::invalid_argument("eval_llarull: profile domain must be (0, pi)");

  LlarullReport rep;
  rep.hypothesis_ok = true;
  const Grid1D g(0.0, kPi, grid_n);
  std::vector<double> R(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const double t = g.midpoint(i);
    const double w = m.warp(t).w;
    if (w < std::sin(t) - 1e-12) rep.hypothesis_ok = false;
    if (w > std::sin(t) + 1e-9) rep.strict_somewhere = true;
    R[i] = m.curvature_at(t).scalar;
  }
  if (!rep.hypothesis_ok)
    throw std::domain_error("eval_llarull: hypothesis w >= sin(theta) fails on the profile");

  // Scan statistic: minimum of R over its interior stationary points (the
  // conical ends of incomplete profiles drive R to -inf; a stationary value
  // is attained at a genuine point and still certifies min R <= 6).
  double scale = 0.0;
  for (double v : R) scale = std::max(scale, std::abs(v));
  double vmin = R[0], vmax = R[0];
  for (double v : R) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  auto Rf = [&](double t) { return m.curvature_at(t).scalar; };
  if (vmax - vmin <= 1e-11 * std::max(1.0, scale)) {
    rep.min_R = Rf(kPi / 2);
    rep.argmin_theta = kPi / 2;
  } else {
    bool found = false;
    double best = std::numeric_limits<double>::infinity(), best_t = 0.0;
    // poles of a closed profile are smooth points where R is stationary by
    // symmetry; conical ends of incomplete profiles are not and stay excluded
    for (int side : {-1, +1}) {
      if (!m.closes_at(side)) continue;
      const double t = side < 0 ? g.midpoint(0) : g.midpoint(grid_n - 1);
      const double val = Rf(t);
      if (val < best) {
        best = val;
        best_t = t;
      }
      found = true;
    }
    for (int i = 1; i + 1 < grid_n; ++i) {
      const double dl = R[i] - R[i - 1], dr = R[i + 1] - R[i];
      if (dl == 0.0 && dr == 0.0) continue;
      if ((dl >= 0.0 && dr <= 0.0) || (dl <= 0.0 && dr >= 0.0)) {
        const bool is_max = dl >= 0.0;
        const double a = g.midpoint(i - 1), b = g.midpoint(i + 1);
        const double t =
            is_max ? golden_max(Rf, a, b) : golden_max([&](double x) { return -Rf(x); }, a, b);
        const double val = Rf(t);
        if (val < best) {
          best = val;
          best_t = t;
        }
        found = true;
      }
    }
    if (!found) {  // monotone profile: fall back to the grid minimum
      for (int i = 0; i < grid_n; ++i)
        if (R[i] < best) {
          best = R[i];
          best_t = g.midpoint(i);
        }
    }
    rep.min_R = best;
    rep.argmin_theta = best_t;
  }
  rep.conclusion_holds = rep.min_R <= 6.0 + 1e-9;

  if (mode == LlarullMode::Quant) {
    Potential pot = make_potential(PotentialKind::Llarull, {{"eps", 0.0}, {"delta", 0.0}});
    BandProblem prob(m, {band_eps, kPi - band_eps}, pot, -1.0, 1.0, 2, 0.0);
    SolveProfile sol = solve_band_1d(prob, 4000, 1e-11);
    const auto data = identities_detail::collect(sol, prob);
    std::vector<double> lhs(data.size()), rhs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& d = data[i];
      lhs[i] = (6.0 - d.curv.scalar) * d.gu * d.A;
      rhs[i] = identities_detail::spacetime_hessian_sq(d) / d.gu * d.A;
    }
    rep.quant.identity = IdentityKind::LlarullQuant;
    rep.quant.h = sol.grid.spacing();
    rep.quant.bulk_curvature_term = trapezoid(lhs, rep.quant.h);
    rep.quant.bulk_hessian_term = trapezoid(rhs, rep.quant.h);
    rep.quant.slack = rep.quant.slack_from_terms();
  }
  return rep;
}

}  // namespace stharm
