#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stharm/numerics.hpp"

namespace stharm {

enum class Family {
  RoundBand,
  GUpsilon,
  TorusExtremal,
  Counterexample,
  RicciWarped,
  AFSymmetric,
  FlatProduct,
  CustomDoublyWarped,
};

/// Closed-form warp profiles available under the RicciWarped family
/// (dtheta^2 + w(theta)^2 g_Sigma with an Einstein fiber).
enum class WarpShape : int {
  CosBand = 0,    // w = cos(theta), abstract Einstein fiber of constant kappa
  Sphere = 1,     // w = a sin(theta/a), round sphere of radius a
  Capsule = 2,    // unit hemispherical caps joined by a cylinder of given length
  LambdaSin = 3,  // w = lambda sin(theta), conical at both ends for lambda != 1
  SinCubic = 4,   // w = sin(theta) + c sin^3(theta), smooth closed deformation
  SechBand = 5,   // w = c0 (cos t - sin t tanh t); nonround, closed, Ric >= 2g
};

/// Warping factor with its first two derivatives at one profile point.
struct WarpData {
  double w = 0.0, dw = 0.0, ddw = 0.0;
};

/// alpha(r)^2 dr^2 + beta(r)^2 g_{S^{n-1}} data for asymptotically flat metrics.
struct AFData {
  double alpha = 0.0, dalpha = 0.0, beta = 0.0, dbeta = 0.0, ddbeta = 0.0;
};

/// Pointwise curvature of a warped metric at one profile coordinate.
/// Eigenvalues are sorted ascending; two_ricci is the sum of the two
/// smallest; mean_curv is H of the level set with respect to +d/drho.
struct CurvatureSample {
  double rho = 0.0;
  std::array<double, 3> ricci_eigs{};
  double scalar = 0.0;
  double two_ricci = 0.0;
  double mean_curv = 0.0;
};

namespace detail {

inline double unit_sphere_area(int dim) {
  // dim-dimensional round unit sphere: 2 pi^{(dim+1)/2} / Gamma((dim+1)/2)
  return 2.0 * std::pow(kPi, 0.5 * (dim + 1)) / std::tgamma(0.5 * (dim + 1));
}

/// Natural cubic spline with exact piecewise-polynomial derivatives.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(double lo, double hi, std::vector<double> y) : lo_(lo), hi_(hi), y_(std::move(y)) {
    const std::size_t n = y_.size();
    if (n < 3 || !(hi > lo)) throw std::invalid_argument("CubicSpline: need >= 3 knots, hi > lo");
    h_ = (hi_ - lo_) / static_cast<double>(n - 1);
    std::vector<double> sub(n, 0), diag(n, 0), sup(n, 0), rhs(n, 0);
    diag[0] = diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      sub[i] = h_ / 6.0;
      diag[i] = 2.0 * h_ / 3.0;
      sup[i] = h_ / 6.0;
      rhs[i] = (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / h_;
    }
    m_ = solve_tridiagonal(sub, diag, sup, rhs);
  }

  WarpData eval(double x) const {
    const std::size_t n = y_.size();
    int i = static_cast<int>((x - lo_) / h_);
    i = std::clamp(i, 0, static_cast<int>(n) - 2);
    const double a = lo_ + i * h_;
    const double t = x - a, s = h_ - t;
    WarpData d;
    d.w = (m_[i] * s * s * s + m_[i + 1] * t * t * t) / (6.0 * h_) +
          (y_[i] / h_ - m_[i] * h_ / 6.0) * s + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0) * t;
    d.dw = (-m_[i] * s * s + m_[i + 1] * t * t) / (2.0 * h_) +
           (y_[i + 1] - y_[i]) / h_ - (m_[i + 1] - m_[i]) * h_ / 6.0;
    d.ddw = (m_[i] * s + m_[i + 1] * t) / h_;
    return d;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& knots() const { return y_; }

 private:
  double lo_ = 0, hi_ = 1, h_ = 1;
  std::vector<double> y_, m_;
};

}  // namespace detail

/// A named analytic metric family with parameters and exact warping-function
/// derivatives. Immutable after construction; all member calls are pure.
class MetricSpec {
 public:
  using Params = std::map<std::string, double>;

  static MetricSpec make(Family family, const Params& params, int dimension = 3);

  static MetricSpec round_band(double theta1, double theta2, int n = 3) {
    return make(Family::RoundBand, {{"theta1", theta1}, {"theta2", theta2}}, n);
  }
  static MetricSpec g_upsilon(double upsilon) {
    return make(Family::GUpsilon, {{"upsilon", upsilon}}, 3);
  }
  static MetricSpec torus_extremal(double w) { return make(Family::TorusExtremal, {{"w", w}}, 3); }
  static MetricSpec counterexample(double delta) {
    return make(Family::Counterexample, {{"delta", delta}}, 3);
  }
  static MetricSpec ricci_cos_band(double theta1, double theta2, double kappa, int n = 3) {
    return make(Family::RicciWarped,
                {{"shape", 0.0}, {"theta1", theta1}, {"theta2", theta2}, {"kappa", kappa}}, n);
  }
  static MetricSpec round_sphere(double radius, int n = 3) {
    return make(Family::RicciWarped, {{"shape", 1.0}, {"radius", radius}}, n);
  }
  static MetricSpec capsule(double length) {
    return make(Family::RicciWarped, {{"shape", 2.0}, {"length", length}}, 3);
  }
  static MetricSpec lambda_sin(double lambda) {
    return make(Family::RicciWarped, {{"shape", 3.0}, {"lambda", lambda}}, 3);
  }
  static MetricSpec sin_cubic(double c) {
    return make(Family::RicciWarped, {{"shape", 4.0}, {"c", c}}, 3);
  }
  static MetricSpec sech_band() { return make(Family::RicciWarped, {{"shape", 5.0}}, 3); }
  static MetricSpec af_symmetric(double mass, int n = 3) {
    return make(Family::AFSymmetric, {{"mass", mass}}, n);
  }
  static MetricSpec flat_product() { return make(Family::FlatProduct, {}, 3); }
  static MetricSpec custom_doubly_warped(double lo, double hi, const std::vector<double>& phi_knots,
                                         const std::vector<double>& psi_knots);

  Family family() const { return family_; }
  int dimension() const { return dim_; }
  const Params& params() const { return params_; }
  double param(const std::string& key) const { return params_.at(key); }

  /// Open (or closed, where warps vanish smoothly) interval of profile validity.
  Interval profile_domain() const { return domain_; }
  /// Natural band for drivers that do not specify one.
  Interval default_interval() const { return default_interval_; }

  bool is_doubly_warped() const {
    return family_ == Family::GUpsilon || family_ == Family::TorusExtremal ||
           family_ == Family::Counterexample || family_ == Family::FlatProduct ||
           family_ == Family::CustomDoublyWarped;
  }
  bool is_af() const { return family_ == Family::AFSymmetric; }
  bool is_single_warped() const { return family_ == Family::RoundBand || family_ == Family::RicciWarped; }
  /// True when the warp vanishes smoothly at the given domain endpoint
  /// (side -1 = lo, +1 = hi), i.e. the metric closes up there.
  bool closes_at(int side) const { return side < 0 ? closes_lo_ : closes_hi_; }
  bool is_closed_manifold() const { return closes_lo_ && closes_hi_; }

  WarpData phi(double t) const;   // doubly warped: first torus factor
  WarpData psi(double t) const;   // doubly warped: second torus factor
  WarpData warp(double t) const;  // single warped factor
  AFData af_at(double r) const;

  /// Einstein constant of the fiber (Ric_Sigma = kappa g_Sigma).
  double fiber_kappa() const { return kappa_; }
  /// Euler characteristic of the generic level set (0 torus, 2 sphere in 3d).
  int default_fiber_chi() const;
  /// Area of the rho-level set. Torus fibers use a fixed fundamental domain
  /// (2pi periods for Counterexample, unit square otherwise); constants cancel
  /// in every identity slack.
  double fiber_area(double rho) const;
  /// H of the rho-level set with respect to +d/drho (sum of warp log-derivatives).
  double mean_curv_profile(double rho) const;
  /// The (n-1) tangential warp log-derivatives, for Hessian assembly.
  std::vector<double> tangential_log_derivs(double rho) const;

  CurvatureSample curvature_at(double rho) const;
  /// Radial Ricci eigenvalue Ric(nu, nu), nu the unit profile direction.
  double ricci_radial(double rho) const { return raw_eigs(rho)[0]; }
  /// Unsorted eigenvalues {radial, tangential...} (two tangential entries;
  /// equal for single-warped families).
  std::array<double, 3> raw_eigs(double rho) const;

  /// Boundary mean curvature of a band w.r.t. the outward normal:
  /// +H_rho at rho = hi (side +1), -H_rho at rho = lo (side -1).
  double mean_curvature_boundary(const Interval& band, int side) const;

  WarpShape warp_shape() const { return shape_; }

 private:
  MetricSpec() = default;
  void validate_positive_warp() const;

  Family family_ = Family::FlatProduct;
  int dim_ = 3;
  Params params_;
  Interval domain_{};
  Interval default_interval_{};
  bool closes_lo_ = false, closes_hi_ = false;
  double kappa_ = 0.0;
  WarpShape shape_ = WarpShape::CosBand;
  // cached family parameters
  double upsilon_ = 0.0, c0_ = 0.0, delta_ = 0.0, wband_ = 0.0, mass_ = 0.0;
  double theta1_ = 0.0, theta2_ = 0.0, radius_ = 1.0, length_ = 1.0, lambda_ = 1.0, ccubic_ = 0.0;
  double sech_theta_star_ = 0.0, sech_c0_ = 0.0;
  std::shared_ptr<const detail::CubicSpline> phi_spline_, psi_spline_;

  friend struct CurvatureSampleBuilder;
};

namespace detail {
inline CurvatureSample make_sample(double rho, double rad, double e1, double e2, double H) {
  CurvatureSample s;
  s.rho = rho;
  s.ricci_eigs = {rad, e1, e2};
  std::sort(s.ricci_eigs.begin(), s.ricci_eigs.end());
  s.scalar = rad + e1 + e2;
  s.two_ricci = s.ricci_eigs[0] + s.ricci_eigs[1];
  s.mean_curv = H;
  return s;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// implementation

inline MetricSpec MetricSpec::make(Family family, const Params& params, int dimension) {
  MetricSpec m;
  m.family_ = family;
  m.params_ = params;
  m.dim_ = dimension;
  auto get = [&](const char* k, std::optional<double> def = std::nullopt) {
    auto it = params.find(k);
    if (it != params.end()) return it->second;
    if (def) return *def;
    throw std::invalid_argument(std::string("make_metric: missing parameter '") + k + "'");
  };
  const double inf = std::numeric_limits<double>::infinity();
  switch (family) {
    case Family::RoundBand: {
      if (dimension < 2) throw std::invalid_argument("RoundBand: dimension must be >= 2");
      m.theta1_ = get("theta1");
      m.theta2_ = get("theta2");
      if (!(m.theta1_ >= 0 && m.theta2_ >= 0 && m.theta1_ < kPi / 2 && m.theta2_ < kPi / 2))
        throw std::invalid_argument("RoundBand: need 0 <= theta1, theta2 < pi/2");
      m.kappa_ = dimension - 2;
      m.domain_ = {-kPi / 2, kPi / 2};
      m.default_interval_ = {-m.theta1_, m.theta2_};
      break;
    }
    case Family::GUpsilon: {
      m.upsilon_ = get("upsilon");
      if (!(m.upsilon_ >= 0.0 && m.upsilon_ <= 1.0))
        throw std::invalid_argument("GUpsilon: upsilon must lie in [0, 1]");
      m.dim_ = 3;
      m.c0_ = 2.0 * (1.0 - (1.0 - m.upsilon_) * (1.0 - m.upsilon_));
      m.domain_ = {-kPi / 4, kPi / 4};
      m.default_interval_ = {-kPi / 8, kPi / 8};
      break;
    }
    case Family::TorusExtremal: {
      m.wband_ = get("w");
      if (!(m.wband_ > 0.0 && m.wband_ < 2.0 * kPi / 3.0))
        throw std::invalid_argument("TorusExtremal: w must lie in (0, 2pi/3)");
      m.dim_ = 3;
      m.domain_ = {-kPi / 3, kPi / 3};
      m.default_interval_ = {-m.wband_ / 2, m.wband_ / 2};
      break;
    }
    case Family::Counterexample: {
      m.delta_ = get("delta");
      if (!(m.delta_ >= 0.0 && m.delta_ <= 1.0))
        throw std::invalid_argument("Counterexample: delta must lie in [0, 1]");
      m.dim_ = 3;
      m.domain_ = {-kPi / 4, kPi / 4};
      m.default_interval_ = m.domain_;
      m.closes_lo_ = m.closes_hi_ = true;
      break;
    }
    case Family::RicciWarped: {
      if (dimension < 3) throw std::invalid_argument("RicciWarped: dimension must be >= 3");
      const int shape = static_cast<int>(get("shape", 0.0));
      m.shape_ = static_cast<WarpShape>(shape);
      switch (m.shape_) {
        case WarpShape::CosBand:
          m.theta1_ = get("theta1");
          m.theta2_ = get("theta2");
          m.kappa_ = get("kappa", static_cast<double>(dimension - 2));
          if (!(m.theta1_ >= 0 && m.theta2_ >= 0 && m.theta1_ < kPi / 2 && m.theta2_ < kPi / 2))
            throw std::invalid_argument("RicciWarped cos band: need 0 <= theta1, theta2 < pi/2");
          m.domain_ = {-kPi / 2, kPi / 2};
          m.default_interval_ = {-m.theta1_, m.theta2_};
          break;
        case WarpShape::Sphere:
          m.radius_ = get("radius", 1.0);
          if (!(m.radius_ > 0)) throw std::invalid_argument("round sphere: radius must be positive");
          m.kappa_ = dimension - 2;
          m.domain_ = {0.0, m.radius_ * kPi};
          m.default_interval_ = m.domain_;
          m.closes_lo_ = m.closes_hi_ = true;
          break;
        case WarpShape::Capsule:
          m.length_ = get("length");
          if (!(m.length_ > 0)) throw std::invalid_argument("capsule: length must be positive");
          m.dim_ = dimension = 3;
          m.kappa_ = 1.0;
          m.domain_ = {0.0, kPi + m.length_};
          m.default_interval_ = m.domain_;
          m.closes_lo_ = m.closes_hi_ = true;
          break;
        case WarpShape::LambdaSin:
          m.lambda_ = get("lambda");
          if (!(m.lambda_ > 0)) throw std::invalid_argument("lambda sin: lambda must be positive");
          m.dim_ = dimension = 3;
          m.kappa_ = 1.0;
          m.domain_ = {0.0, kPi};
          m.default_interval_ = m.domain_;
          break;
        case WarpShape::SinCubic:
          m.ccubic_ = get("c");
          if (!(m.ccubic_ > -0.25 && m.ccubic_ <= 1.0))
            throw std::invalid_argument("sin cubic: c must lie in (-1/4, 1]");
          m.dim_ = dimension = 3;
          m.kappa_ = 1.0;
          m.domain_ = {0.0, kPi};
          m.default_interval_ = m.domain_;
          m.closes_lo_ = m.closes_hi_ = true;
          break;
        case WarpShape::SechBand: {
          m.dim_ = dimension = 3;
          m.kappa_ = 1.0;
          // theta* solves cot(t) = tanh(t); the warp both vanishes and has
          // |w'| = 1 there once scaled by c0 = 1/(2 sin theta*).
          m.sech_theta_star_ =
              bisect([](double t) { return std::cos(t) - std::sin(t) * std::tanh(t); }, 0.5, 1.5);
          m.sech_c0_ = 1.0 / (2.0 * std::sin(m.sech_theta_star_));
          m.domain_ = {-m.sech_theta_star_, m.sech_theta_star_};
          m.default_interval_ = m.domain_;
          m.closes_lo_ = m.closes_hi_ = true;
          break;
        }
        default:
          throw std::invalid_argument("RicciWarped: unknown shape code");
      }
      break;
    }
    case Family::AFSymmetric: {
      if (dimension < 3) throw std::invalid_argument("AFSymmetric: dimension must be >= 3");
      m.mass_ = get("mass", 0.0);
      if (m.mass_ < 0) throw std::invalid_argument("AFSymmetric: mass must be >= 0");
      m.kappa_ = dimension - 2;
      m.domain_ = {0.0, inf};
      m.default_interval_ = {1e-3, 1e3};
      break;
    }
    case Family::FlatProduct: {
      m.dim_ = 3;
      m.domain_ = {-inf, inf};
      m.default_interval_ = {-0.5, 0.5};
      break;
    }
    case Family::CustomDoublyWarped:
      throw std::invalid_argument("CustomDoublyWarped: use custom_doubly_warped(...)");
  }
  if (!m.is_af()) m.validate_positive_warp();
  return m;
}

inline MetricSpec MetricSpec::custom_doubly_warped(double lo, double hi,
                                                   const std::vector<double>& phi_knots,
                                                   const std::vector<double>& psi_knots) {
  MetricSpec m;
  m.family_ = Family::CustomDoublyWarped;
  m.dim_ = 3;
  m.domain_ = {lo, hi};
  m.default_interval_ = {lo, hi};
  m.phi_spline_ = std::make_shared<detail::CubicSpline>(lo, hi, phi_knots);
  m.psi_spline_ = std::make_shared<detail::CubicSpline>(lo, hi, psi_knots);
  m.params_["lo"] = lo;
  m.params_["hi"] = hi;
  m.params_["n_knots"] = static_cast<double>(phi_knots.size());
  for (std::size_t i = 0; i < phi_knots.size(); ++i)
    m.params_["phi" + std::to_string(i)] = phi_knots[i];
  for (std::size_t i = 0; i < psi_knots.size(); ++i)
    m.params_["psi" + std::to_string(i)] = psi_knots[i];
  m.validate_positive_warp();
  return m;
}

inline void MetricSpec::validate_positive_warp() const {
  Interval dom = domain_;
  if (!std::isfinite(dom.lo) || !std::isfinite(dom.hi)) return;
  const Grid1D g(dom.lo, dom.hi, 257);
  for (int i = 0; i < g.n_cells; ++i) {
    const double t = g.midpoint(i);
    const double w = is_doubly_warped() ? std::min(phi(t).w, psi(t).w) : warp(t).w;
    if (!(w > 0.0)) throw std::domain_error("metric: non-positive warping factor on the interior");
  }
}

inline WarpData MetricSpec::phi(double t) const {
  WarpData d;
  switch (family_) {
    case Family::GUpsilon: {
      const double u = upsilon_;
      const double A = std::cos(t + kPi / 4), B = std::cos(2 * t);
      d.w = std::pow(2.0, 0.5 * (1 - u)) * std::pow(A, 1 - u) * std::pow(B, 0.5 * u);
      const double L = -(1 - u) * std::tan(t + kPi / 4) - u * std::tan(2 * t);
      const double dL = -(1 - u) / (A * A) - 2 * u / (B * B);
      d.dw = d.w * L;
      d.ddw = d.w * (dL + L * L);
      return d;
    }
    case Family::TorusExtremal: {
      const double c = std::cos(1.5 * t), s = std::sin(1.5 * t);
      d.w = std::pow(c, 2.0 / 3.0);
      d.dw = -s * std::pow(c, -1.0 / 3.0);
      // w''/w = -3/2 - tan^2(3t/2)/2
      d.ddw = d.w * (-1.5 - 0.5 * (s * s) / (c * c));
      return d;
    }
    case Family::Counterexample: {
      // phi = exp((delta/2)(sin 2t - 1)) cos(t + pi/4); stable at both endpoints.
      const double E = std::exp(0.5 * delta_ * (std::sin(2 * t) - 1.0));
      const double C = std::cos(t + kPi / 4), S = std::sin(t + kPi / 4);
      const double c2 = std::cos(2 * t), s2 = std::sin(2 * t);
      d.w = E * C;
      d.dw = E * (delta_ * c2 * C - S);
      d.ddw = E * (delta_ * delta_ * c2 * c2 * C - 2 * delta_ * c2 * S - 2 * delta_ * s2 * C - C);
      return d;
    }
    case Family::FlatProduct:
      return {1.0, 0.0, 0.0};
    case Family::CustomDoublyWarped:
      return phi_spline_->eval(t);
    default:
      throw std::domain_error("phi(): metric is not doubly warped");
  }
}

inline WarpData MetricSpec::psi(double t) const {
  switch (family_) {
    case Family::GUpsilon: {
      const double u = upsilon_;
      const double S = std::sin(t + kPi / 4), B = std::cos(2 * t);
      WarpData d;
      d.w = std::pow(2.0, 0.5 * (1 - u)) * std::pow(S, 1 - u) * std::pow(B, 0.5 * u);
      const double L = (1 - u) / std::tan(t + kPi / 4) - u * std::tan(2 * t);
      const double dL = -(1 - u) / (S * S) - 2 * u / (B * B);
      d.dw = d.w * L;
      d.ddw = d.w * (dL + L * L);
      return d;
    }
    case Family::TorusExtremal:
    case Family::FlatProduct:
      return phi(t);
    case Family::Counterexample: {
      // psi(t) = phi(-t) exactly; the mirror keeps the symmetry bit-true.
      WarpData d = phi(-t);
      d.dw = -d.dw;
      return d;
    }
    case Family::CustomDoublyWarped:
      return psi_spline_->eval(t);
    default:
      throw std::domain_error("psi(): metric is not doubly warped");
  }
}

inline WarpData MetricSpec::warp(double t) const {
  WarpData d;
  switch (family_ == Family::RoundBand ? WarpShape::CosBand : shape_) {
    case WarpShape::CosBand:
      if (family_ != Family::RoundBand && family_ != Family::RicciWarped) break;
      return {std::cos(t), -std::sin(t), -std::cos(t)};
    case WarpShape::Sphere:
      return {radius_ * std::sin(t / radius_), std::cos(t / radius_),
              -std::sin(t / radius_) / radius_};
    case WarpShape::Capsule: {
      if (t <= kPi / 2) return {std::sin(t), std::cos(t), -std::sin(t)};
      if (t >= kPi / 2 + length_) {
        const double s = t - length_;
        return {std::sin(s), std::cos(s), -std::sin(s)};
      }
      return {1.0, 0.0, 0.0};
    }
    case WarpShape::LambdaSin:
      return {lambda_ * std::sin(t), lambda_ * std::cos(t), -lambda_ * std::sin(t)};
    case WarpShape::SinCubic: {
      const double s = std::sin(t), c = std::cos(t);
      d.w = s + ccubic_ * s * s * s;
      d.dw = c + 3.0 * ccubic_ * s * s * c;
      d.ddw = -s + 3.0 * ccubic_ * (2.0 * s * c * c - s * s * s);
      return d;
    }
    case WarpShape::SechBand: {
      const double c = std::cos(t), s = std::sin(t), th = std::tanh(t);
      const double sech2 = 1.0 - th * th;
      d.w = sech_c0_ * (c - s * th);
      d.dw = sech_c0_ * (-s - c * th - s * sech2);
      d.ddw = -(1.0 + 2.0 * sech2) * d.w;  // w'' + w = -2 sech^2 w
      return d;
    }
  }
  throw std::domain_error("warp(): metric is not single warped");
}

inline AFData MetricSpec::af_at(double r) const {
  if (!is_af()) throw std::domain_error("af_at(): metric is not asymptotically flat symmetric");
  if (!(r > 0)) throw std::domain_error("af_at(): r must be positive");
  AFData d;
  if (mass_ == 0.0) {
    d.alpha = 1.0;
    d.dalpha = 0.0;
    d.beta = r;
    d.dbeta = 1.0;
    d.ddbeta = 0.0;
    return d;
  }
  if (dim_ != 3) throw std::domain_error("AFSymmetric: nonzero mass implemented for n = 3");
  const double p = 1.0 + mass_ / (2.0 * r), dp = -mass_ / (2.0 * r * r);
  d.alpha = p * p;
  d.dalpha = 2.0 * p * dp;
  d.beta = r * p * p;
  d.dbeta = p * (1.0 - mass_ / (2.0 * r));
  d.ddbeta = mass_ * mass_ / (2.0 * r * r * r);
  return d;
}

inline int MetricSpec::default_fiber_chi() const {
  if (is_doubly_warped()) return 0;  // torus fibers
  if (family_ == Family::RicciWarped && shape_ == WarpShape::CosBand &&
      kappa_ != static_cast<double>(dim_ - 2))
    return 0;  // abstract Einstein fiber: supplied by the caller, default flat-like
  // S^{n-1} fiber
  return (dim_ % 2 == 1) ? 2 : 0;
}

inline double MetricSpec::fiber_area(double rho) const {
  if (is_doubly_warped()) {
    const double scale = (family_ == Family::Counterexample) ? 4.0 * kPi * kPi : 1.0;
    return scale * phi(rho).w * psi(rho).w;
  }
  if (is_af()) {
    const AFData d = af_at(rho);
    return detail::unit_sphere_area(dim_ - 1) * std::pow(d.beta, dim_ - 1);
  }
  const double scale = (family_ == Family::RicciWarped && shape_ == WarpShape::CosBand &&
                        kappa_ != static_cast<double>(dim_ - 2))
                           ? 1.0
                           : detail::unit_sphere_area(dim_ - 1);
  return scale * std::pow(warp(rho).w, dim_ - 1);
}

inline double MetricSpec::mean_curv_profile(double rho) const {
  if (is_doubly_warped()) {
    const WarpData f = phi(rho), g = psi(rho);
    return f.dw / f.w + g.dw / g.w;
  }
  if (is_af()) {
    const AFData d = af_at(rho);
    return (dim_ - 1) * d.dbeta / (d.alpha * d.beta);
  }
  const WarpData w = warp(rho);
  return (dim_ - 1) * w.dw / w.w;
}

inline std::vector<double> MetricSpec::tangential_log_derivs(double rho) const {
  if (is_doubly_warped()) {
    const WarpData f = phi(rho), g = psi(rho);
    return {f.dw / f.w, g.dw / g.w};
  }
  const WarpData w = warp(rho);
  return std::vector<double>(dim_ - 1, w.dw / w.w);
}

inline std::array<double, 3> MetricSpec::raw_eigs(double rho) const {
  switch (family_) {
    case Family::GUpsilon: {
      const double sec2 = 1.0 / std::cos(2 * rho);
      return {2.0 + c0_ * sec2 * sec2, 2.0, 2.0};
    }
    case Family::TorusExtremal: {
      const double t2 = std::tan(1.5 * rho) * std::tan(1.5 * rho);
      return {3.0 + t2, 1.5 - 0.5 * t2, 1.5 - 0.5 * t2};
    }
    case Family::Counterexample: {
      const double s2 = std::sin(2 * rho), c2 = std::cos(2 * rho);
      return {2.0 + 4.0 * delta_ - 2.0 * delta_ * delta_ * c2 * c2, 2.0 + 4.0 * delta_ * s2,
              2.0 - 4.0 * delta_ * s2};
    }
    case Family::FlatProduct:
      return {0.0, 0.0, 0.0};
    case Family::CustomDoublyWarped: {
      const WarpData f = phi(rho), g = psi(rho);
      const double cross = (f.dw / f.w) * (g.dw / g.w);
      return {-f.ddw / f.w - g.ddw / g.w, -f.ddw / f.w - cross, -g.ddw / g.w - cross};
    }
    case Family::AFSymmetric: {
      const AFData d = af_at(rho);
      const double beta_ss =
          d.ddbeta / (d.alpha * d.alpha) - d.dbeta * d.dalpha / (d.alpha * d.alpha * d.alpha);
      const double rad = -(dim_ - 1) * beta_ss / d.beta;
      const double gp = d.dbeta / d.alpha;  // |grad beta|
      const double fib = (dim_ - 2) * (1.0 - gp * gp) / (d.beta * d.beta) - beta_ss / d.beta;
      return {rad, fib, fib};
    }
    default: {  // single warped families
      double rad, fib;
      const WarpData w = warp(rho);
      const WarpShape sh = (family_ == Family::RoundBand) ? WarpShape::CosBand : shape_;
      switch (sh) {
        case WarpShape::CosBand: {
          const double sec2 = 1.0 / (std::cos(rho) * std::cos(rho));
          rad = dim_ - 1;
          fib = (dim_ - 1) + (kappa_ - (dim_ - 2)) * sec2;
          break;
        }
        case WarpShape::Sphere:
          rad = fib = (dim_ - 1) / (radius_ * radius_);
          break;
        case WarpShape::Capsule:
          if (rho <= kPi / 2 || rho >= kPi / 2 + length_) {
            rad = fib = 2.0;
          } else {
            rad = 0.0;
            fib = 1.0;
          }
          break;
        case WarpShape::LambdaSin: {
          const double s = std::sin(rho), c = std::cos(rho);
          rad = 2.0;
          fib = 1.0 + (1.0 / (lambda_ * lambda_) - c * c) / (s * s);
          break;
        }
        case WarpShape::SechBand: {
          const double th = std::tanh(rho), sech2 = 1.0 - th * th;
          rad = 2.0 + 4.0 * sech2;
          fib = (1.0 - w.dw * w.dw) / (w.w * w.w) + 1.0 + 2.0 * sech2;
          break;
        }
        default:  // SinCubic and any generic single warp
          rad = -(dim_ - 1) * w.ddw / w.w;
          fib = kappa_ / (w.w * w.w) - w.ddw / w.w - (dim_ - 2) * (w.dw / w.w) * (w.dw / w.w);
          break;
      }
      return {rad, fib, fib};
    }
  }
}

inline CurvatureSample MetricSpec::curvature_at(double rho) const {
  const std::array<double, 3> e = raw_eigs(rho);
  CurvatureSample s = detail::make_sample(rho, e[0], e[1], e[2], mean_curv_profile(rho));
  if (!is_doubly_warped() && dim_ != 3) s.scalar = e[0] + (dim_ - 1) * e[1];  // full trace
  return s;
}

inline double MetricSpec::mean_curvature_boundary(const Interval& band, int side) const {
  if (is_af() || (is_closed_manifold() && band.lo <= domain_.lo && band.hi >= domain_.hi))
    throw std::domain_error("mean_curvature_boundary: metric has no boundary leaf on this side");
  if (side > 0) return mean_curv_profile(band.hi);
  return -mean_curv_profile(band.lo);
}

}  // namespace stharm
