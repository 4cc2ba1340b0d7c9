#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "stharm/numerics.hpp"

namespace stharm {

enum class PotentialKind { Zero, RicciBand, TorusBand, TwoRicciBand, Waist, Llarull, LipschitzFamily };

/// Differential inequalities a potential can be checked against.
enum class OdeKind { TildeF, Torus, TwoRicci, WaistBound, Lemma24 };

struct SlackReport {
  double min_slack = 0.0;
  double argmin = 0.0;
  std::vector<double> piece_minima;
};

namespace potentials_detail {
// smooth cutoff on [0,1]: sigma(0)=0, sigma(1)=1, sigma'(0)=sigma'(1)=0, 0<=sigma'<=1.5
inline double smoothstep(double x) { return x * x * (3.0 - 2.0 * x); }
inline double smoothstep_d(double x) { return 6.0 * x * (1.0 - x); }
}  // namespace potentials_detail

/// Cap regularizer for cot-type potentials: quadratic cap of height delta/2
/// near 0 and pi, identity in between. Keeps cot(psi_delta) bounded.
inline double psi_delta(double theta, double delta) {
  if (theta <= delta) return theta * theta / (2.0 * delta) + 0.5 * delta;
  if (theta >= kPi - delta) {
    const double s = kPi - theta;
    return kPi - (s * s / (2.0 * delta) + 0.5 * delta);
  }
  return theta;
}

/// Polar reparametrization that advances the cot pole by eps: theta - eps on
/// [eps, r0], a smooth blend on [r0, r1], identity in the middle, mirrored on
/// the other cap. Its derivative satisfies 1 <= d/dtheta <= 1 + 2 eps/(r1-r0).
inline double psi_eps0(double theta, double eps, double r0, double r1) {
  using potentials_detail::smoothstep;
  if (theta <= r0) return theta - eps;
  if (theta <= r1) return theta - eps + eps * smoothstep((theta - r0) / (r1 - r0));
  if (theta <= kPi - r1) return theta;
  if (theta <= kPi - r0) return theta + eps * smoothstep((theta - kPi + r1) / (r1 - r0));
  return theta + eps;
}

inline double psi_eps0_d(double theta, double eps, double r0, double r1) {
  using potentials_detail::smoothstep_d;
  if (theta <= r0) return 1.0;
  if (theta <= r1) return 1.0 + eps * smoothstep_d((theta - r0) / (r1 - r0)) / (r1 - r0);
  if (theta <= kPi - r1) return 1.0;
  if (theta <= kPi - r0) return 1.0 + eps * smoothstep_d((theta - kPi + r1) / (r1 - r0)) / (r1 - r0);
  return 1.0;
}

/// One closed-form piece of a potential on [lo, hi].
struct PotentialPiece {
  double lo = 0.0, hi = 0.0;
  std::function<double(double)> f, df;
  bool c1_at_hi = false;  // splice at hi is a differentiable continuation
};

/// Piecewise-analytic one-variable potential f(tau), tau measured from the
/// lower boundary. Immutable; evaluation is pure.
class Potential {
 public:
  using Params = std::map<std::string, double>;

  PotentialKind kind() const { return kind_; }
  const Params& params() const { return params_; }
  double param(const std::string& k) const { return params_.at(k); }
  double param_or(const std::string& k, double def) const {
    auto it = params_.find(k);
    return it == params_.end() ? def : it->second;
  }
  const std::vector<PotentialPiece>& pieces() const { return pieces_; }

  Interval domain() const { return {pieces_.front().lo, pieces_.back().hi}; }
  bool pole_at_lo() const { return pole_lo_; }
  bool pole_at_hi() const { return pole_hi_; }

  double eval(double tau) const { return piece_at(tau).f(tau); }
  /// One-sided derivative: the owning piece's closed form (left piece at
  /// interior splice points by the half-open convention).
  double deriv(double tau) const { return piece_at(tau).df(tau); }

  /// Supremum of |f'| over an interval, sampled on piece-respecting midpoint
  /// grids plus piece endpoints (derivatives of every piece are monotone).
  double lipschitz_on(const Interval& iv, int samples_per_piece = 64) const {
    double sup = 0.0;
    for (const auto& p : pieces_) {
      const double a = std::max(p.lo, iv.lo), b = std::min(p.hi, iv.hi);
      if (!(b > a)) continue;
      const Grid1D g(a, b, samples_per_piece);
      for (int i = 0; i < g.n_cells; ++i) sup = std::max(sup, std::abs(p.df(g.midpoint(i))));
      sup = std::max({sup, std::abs(p.df(a + 1e-12 * (b - a))), std::abs(p.df(b - 1e-12 * (b - a)))});
    }
    return sup;
  }

  /// Lipschitz constant over the natural domain; +inf when the potential has
  /// a pole at a domain end.
  double lipschitz_const() const {
    if (pole_lo_ || pole_hi_ || !std::isfinite(domain().lo) || !std::isfinite(domain().hi))
      return lipschitz_hint_;
    return lipschitz_on(domain());
  }

  static Potential zero() {
    Potential p;
    p.kind_ = PotentialKind::Zero;
    const double inf = std::numeric_limits<double>::infinity();
    p.pieces_.push_back({-inf, inf, [](double) { return 0.0; }, [](double) { return 0.0; }, false});
    p.lipschitz_hint_ = 0.0;
    return p;
  }

  friend Potential make_potential(PotentialKind, const Potential::Params&);
  friend Potential make_lemma24_potential(double, double, double, double, double);

 private:
  const PotentialPiece& piece_at(double tau) const {
    const double tol = 1e-12 * (1.0 + std::abs(tau));
    if (tau < pieces_.front().lo - tol || tau > pieces_.back().hi + tol)
      throw std::domain_error("potential: tau outside domain");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
      if (tau < pieces_[i].hi) return pieces_[i];
    return pieces_.back();
  }

  PotentialKind kind_ = PotentialKind::Zero;
  Params params_;
  std::vector<PotentialPiece> pieces_;
  bool pole_lo_ = false, pole_hi_ = false;
  double lipschitz_hint_ = std::numeric_limits<double>::infinity();
};

inline Potential make_lemma24_potential(double a, double b, double eps, double C, double w);

inline Potential make_potential(PotentialKind kind, const Potential::Params& params) {
  Potential p;
  p.kind_ = kind;
  p.params_ = params;
  const double inf = std::numeric_limits<double>::infinity();
  auto get = [&](const char* k) {
    auto it = params.find(k);
    if (it == params.end())
      throw std::invalid_argument(std::string("make_potential: missing parameter '") + k + "'");
    return it->second;
  };
  auto get_or = [&](const char* k, double def) {
    auto it = params.find(k);
    return it == params.end() ? def : it->second;
  };

  switch (kind) {
    case PotentialKind::Zero:
      return Potential::zero();

    case PotentialKind::RicciBand: {
      const double n = get_or("n", 3.0), Hm = get("Hminus"), Hp = get_or("Hplus", get("Hminus"));
      if (!(n >= 3) || !std::isfinite(Hm) || !std::isfinite(Hp))
        throw std::invalid_argument("RicciBand potential: need n >= 3 and finite H-, H+");
      const double c = (n - 1.0) / (n * (n - 2.0));
      const double am = std::atan(Hm / (n - 1.0)), ap = std::atan(Hp / (n - 1.0));
      const double splice = std::max(ap + am, kPi / 4.0 + 0.5 * am);
      const double lo_pole = am - kPi / 2.0;
      auto tanf = [c, am](double t) { return c * std::tan(t - am); };
      auto tand = [c, am](double t) { const double s = std::cos(t - am); return c / (s * s); };
      const double fs = tanf(splice), ds = tand(splice);
      p.pieces_.push_back({lo_pole, splice, tanf, tand, true});
      p.pieces_.push_back({splice, inf, [fs, ds, splice](double t) { return fs + ds * (t - splice); },
                           [ds](double) { return ds; }, false});
      p.pole_lo_ = true;
      return p;
    }

    case PotentialKind::TorusBand: {
      const double w0 = get("w0");
      if (!(w0 > 0.0 && w0 < 2.0 * kPi / 3.0))
        throw std::invalid_argument("TorusBand potential: w0 must lie in (0, 2pi/3)");
      auto tanf = [w0](double t) { return std::tan(1.5 * (t - 0.5 * w0)); };
      auto tand = [w0](double t) { const double s = std::cos(1.5 * (t - 0.5 * w0)); return 1.5 / (s * s); };
      const double fs = tanf(w0), ds = tand(w0);
      p.pieces_.push_back({0.5 * w0 - kPi / 3.0, w0, tanf, tand, true});
      p.pieces_.push_back({w0, inf, [fs, ds, w0](double t) { return fs + ds * (t - w0); },
                           [ds](double) { return ds; }, false});
      p.pole_lo_ = true;
      return p;
    }

    case PotentialKind::TwoRicciBand: {
      const double H0 = get("H0");
      if (!std::isfinite(H0)) throw std::invalid_argument("TwoRicciBand potential: need finite H0");
      const double a0 = std::atan(0.5 * H0);
      auto tanf = [a0](double t) { return (4.0 / 3.0) * std::tan(2.0 * t - a0); };
      auto tand = [a0](double t) { const double s = std::cos(2.0 * t - a0); return (8.0 / 3.0) / (s * s); };
      const double fs = tanf(a0), ds = tand(a0);
      p.pieces_.push_back({0.5 * (a0 - kPi / 2.0), a0, tanf, tand, true});
      p.pieces_.push_back({a0, inf, [fs, ds, a0](double t) { return fs + ds * (t - a0); },
                           [ds](double) { return ds; }, false});
      p.pole_lo_ = true;
      return p;
    }

    case PotentialKind::Waist: {
      const double w = get("w"), eps = get_or("clip_eps", 0.0);
      if (!(w > 0.0)) throw std::invalid_argument("Waist potential: w must be positive");
      if (!(eps >= 0.0 && eps < 0.5 * w))
        throw std::invalid_argument("Waist potential: clip_eps must lie in [0, w/2)");
      const double k = 2.0 * kPi / (3.0 * w), q = kPi / w;
      auto cotf = [k, q](double t) { return -k / std::tan(q * t); };
      auto cotd = [k, q](double t) { const double s = std::sin(q * t); return k * q / (s * s); };
      if (eps == 0.0) {
        p.pieces_.push_back({0.0, w, cotf, cotd, false});
        p.pole_lo_ = p.pole_hi_ = true;
      } else {
        const double clip = cotf(eps);
        p.pieces_.push_back({-inf, eps, [clip](double) { return clip; }, [](double) { return 0.0; }, false});
        p.pieces_.push_back({eps, w - eps, cotf, cotd, false});
        p.pieces_.push_back({w - eps, inf, [clip](double) { return -clip; }, [](double) { return 0.0; }, false});
      }
      return p;
    }

    case PotentialKind::Llarull: {
      const double eps = get_or("eps", 0.0), delta = get_or("delta", 0.0);
      const double r0 = get_or("r0", 0.5), r1 = get_or("r1", 1.0);
      if (!(delta >= 0.0 && delta <= eps && eps < r0 && r0 < r1 && r1 <= kPi / 2))
        throw std::invalid_argument("Llarull potential: need 0 <= delta <= eps < r0 < r1 <= pi/2");
      auto f = [eps, r0, r1](double t) { return -1.0 / std::tan(psi_eps0(t, eps, r0, r1)); };
      auto df = [eps, r0, r1](double t) {
        const double s = std::sin(psi_eps0(t, eps, r0, r1));
        return psi_eps0_d(t, eps, r0, r1) / (s * s);
      };
      // piece boundaries at the reparametrization joints
      const double knots[] = {eps, r0, r1, kPi - r1, kPi - r0, kPi - eps};
      for (int i = 0; i + 1 < 6; ++i) p.pieces_.push_back({knots[i], knots[i + 1], f, df, true});
      if (eps == 0.0) {
        p.pieces_.front().lo = 0.0;
        p.pieces_.back().hi = kPi;
      }
      p.pole_lo_ = p.pole_hi_ = true;
      return p;
    }

    case PotentialKind::LipschitzFamily:
      return make_lemma24_potential(get("a"), get("b"), get("eps"), get("C"), get("w"));
  }
  throw std::invalid_argument("make_potential: unknown kind");
}

/// Lipschitz band potential with prescribed boundary size C, built from the
/// reparametrized tangent: f = (1/a) tan((a/b) phi_eps(tau - w/2)) with the
/// unique linear continuation beyond tau = w.
inline Potential make_lemma24_potential(double a, double b, double eps, double C, double w) {
  if (!(a > 0 && b > 0 && eps > 0)) throw std::invalid_argument("lemma24: need a, b, eps > 0");
  if (!(C > std::tan(kPi / (2.0 * (1.0 + eps))) / a))
    throw std::invalid_argument("lemma24: C below its lower bound (1/a) tan(pi / (2(1+eps)))");
  if (std::abs(w - b * kPi / (a * (1.0 + eps))) > 1e-9 * w)
    throw std::invalid_argument("lemma24: parameter inconsistency, need w = b pi / (a (1+eps))");
  const double c = (b / (10.0 * eps * a)) * (std::atan(a * C) - w * a / (2.0 * b));
  if (!(c > 0.0 && c < w / 20.0))
    throw std::invalid_argument("lemma24: derived kink offset c outside (0, w/20)");

  Potential p;
  p.kind_ = PotentialKind::LipschitzFamily;
  p.params_ = {{"a", a}, {"b", b}, {"eps", eps}, {"C", C}, {"w", w}, {"c", c}};
  const double inf = std::numeric_limits<double>::infinity();
  const double k = a / b, mid = 0.5 * w, shift = 10.0 * eps * c;

  auto tan_outer = [a, k, mid](double shift_) {
    return [a, k, mid, shift_](double t) { return std::tan(k * (t - mid + shift_)) / a; };
  };
  auto dtan_outer = [a, k, mid](double shift_) {
    return [a, k, mid, shift_](double t) {
      const double s = std::cos(k * (t - mid + shift_));
      return k / (a * s * s);
    };
  };
  auto tan_inner = [a, k, mid, eps](double t) { return std::tan(k * (1.0 + 10.0 * eps) * (t - mid)) / a; };
  auto dtan_inner = [a, k, mid, eps](double t) {
    const double s = std::cos(k * (1.0 + 10.0 * eps) * (t - mid));
    return k * (1.0 + 10.0 * eps) / (a * s * s);
  };

  const double lo_pole = mid - shift - 0.5 * kPi / k;
  p.pieces_.push_back({lo_pole, mid - c, tan_outer(-shift), dtan_outer(-shift), false});
  p.pieces_.push_back({mid - c, mid + c, tan_inner, dtan_inner, false});
  p.pieces_.push_back({mid + c, w, tan_outer(shift), dtan_outer(shift), true});
  const double fw = tan_outer(shift)(w), dw = dtan_outer(shift)(w);
  p.pieces_.push_back({w, inf, [fw, dw, w](double t) { return fw + dw * (t - w); },
                       [dw](double) { return dw; }, false});
  p.pole_lo_ = true;
  return p;
}

/// Evaluate the selected differential inequality's slack (left minus right
/// side) on a midpoint grid that avoids non-differentiable points; returns
/// the minimum, its location, and per-piece minima.
inline SlackReport check_ode(const Potential& pot, OdeKind ode, Interval iv, int n_samples) {
  if (n_samples < 100) throw std::invalid_argument("check_ode: n_samples must be >= 100");
  double nn = 3.0, a = 0.0, b = 0.0, w = 0.0;
  switch (ode) {
    case OdeKind::TildeF:
      nn = pot.param_or("n", 3.0);
      break;
    case OdeKind::Lemma24:
      if (!pot.params().count("a") || !pot.params().count("b"))
        throw std::invalid_argument("check_ode: Lemma24 form needs a Lipschitz-family potential");
      a = pot.param("a");
      b = pot.param("b");
      break;
    case OdeKind::WaistBound:
      if (!pot.params().count("w"))
        throw std::invalid_argument("check_ode: waist form needs a waist potential");
      w = pot.param("w");
      break;
    default:
      break;
  }
  auto slack = [&](double f, double df) {
    switch (ode) {
      case OdeKind::TildeF:
        return nn * nn * (nn - 2) * (nn - 2) / (nn - 1) * f * f - nn * (nn - 2) * df + (nn - 1);
      case OdeKind::Torus:
        return 6.0 + 6.0 * f * f - 4.0 * df;
      case OdeKind::TwoRicci:
        return 4.0 + 2.25 * f * f - 1.5 * std::abs(df);
      case OdeKind::WaistBound:
        return 6.0 * f * f - 4.0 * std::abs(df) + 8.0 * kPi * kPi / (3.0 * w * w);
      case OdeKind::Lemma24:
        return a * a * f * f - b * std::abs(df) + 1.0;
    }
    return 0.0;
  };

  SlackReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  const Grid1D g(iv.lo, iv.hi, n_samples);
  std::size_t cur_piece = 0;
  double piece_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_cells; ++i) {
    const double t = g.midpoint(i);
    // track per-piece minima as the sweep crosses piece boundaries
    std::size_t pi = 0;
    while (pi + 1 < pot.pieces().size() && t >= pot.pieces()[pi].hi) ++pi;
    if (pi != cur_piece) {
      if (std::isfinite(piece_min)) rep.piece_minima.push_back(piece_min);
      piece_min = std::numeric_limits<double>::infinity();
      cur_piece = pi;
    }
    const double s = slack(pot.eval(t), pot.deriv(t));
    piece_min = std::min(piece_min, s);
    if (s < rep.min_slack) {
      rep.min_slack = s;
      rep.argmin = t;
    }
  }
  if (std::isfinite(piece_min)) rep.piece_minima.push_back(piece_min);
  return rep;
}

}  // namespace stharm
