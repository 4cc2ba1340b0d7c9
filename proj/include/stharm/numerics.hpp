#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace stharm {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Uniform 1-D grid on [lo, hi] with n_cells cells (n_cells + 1 nodes).
struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  int n_cells = 1;

  Grid1D() = default;
  Grid1D(double lo_, double hi_, int n_cells_) : lo(lo_), hi(hi_), n_cells(n_cells_) {
    if (!(hi > lo) || n_cells < 1) throw std::invalid_argument("Grid1D: need hi > lo and n_cells >= 1");
  }

  int n_nodes() const { return n_cells + 1; }
  double spacing() const { return (hi - lo) / n_cells; }
  // Endpoints are hit exactly.
  double node(int i) const { return lo + (hi - lo) * (static_cast<double>(i) / n_cells); }
  // Cell midpoints; stays clear of the endpoints and piece kinks placed on nodes.
  double midpoint(int i) const { return lo + (hi - lo) * ((i + 0.5) / n_cells); }
};

namespace detail {
// 7-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 7> kGL7X = {
    -0.9491079123427585245261897, -0.7415311855993944398638648, -0.4058451513773971669066064,
    0.0,
    0.4058451513773971669066064, 0.7415311855993944398638648, 0.9491079123427585245261897};
inline constexpr std::array<double, 7> kGL7W = {
    0.1294849661688696932706114, 0.2797053914892766679014678, 0.3818300505051189449503698,
    0.4179591836734693877551020,
    0.3818300505051189449503698, 0.2797053914892766679014678, 0.1294849661688696932706114};
}  // namespace detail

/// 7-point Gauss-Legendre quadrature of f on [a, b]. Nodes are interior,
/// so integrable endpoint singularities are never evaluated.
template <class F>
double gauss7(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 7; ++k) s += detail::kGL7W[k] * f(c + h * detail::kGL7X[k]);
  return s * h;
}

/// Composite Gauss quadrature over a uniform subdivision.
template <class F>
double integrate(const F& f, double a, double b, int cells) {
  double s = 0.0;
  const Grid1D g(a, b, cells);
  for (int i = 0; i < cells; ++i) s += gauss7(f, g.node(i), g.node(i + 1));
  return s;
}

/// Antiderivative table Q(x) = int_lo^x q on a uniform grid, evaluable at
/// arbitrary interior points (per-cell Gauss on the partial cell).
class CumulativeIntegral {
 public:
  template <class F>
  CumulativeIntegral(const F& q, Grid1D grid) : grid_(grid), q_(q) {
    nodes_.resize(grid_.n_nodes());
    nodes_[0] = 0.0;
    for (int i = 0; i < grid_.n_cells; ++i)
      nodes_[i + 1] = nodes_[i] + gauss7(q_, grid_.node(i), grid_.node(i + 1));
  }

  double at_node(int i) const { return nodes_[i]; }
  double total() const { return nodes_.back(); }

  double operator()(double x) const {
    if (x <= grid_.lo) return 0.0;
    if (x >= grid_.hi) return total();
    int i = static_cast<int>((x - grid_.lo) / (grid_.hi - grid_.lo) * grid_.n_cells);
    i = std::clamp(i, 0, grid_.n_cells - 1);
    return nodes_[i] + gauss7(q_, grid_.node(i), x);
  }

 private:
  Grid1D grid_;
  std::function<double(double)> q_;
  std::vector<double> nodes_;
};

/// Thomas algorithm for a tridiagonal system; diag/rhs are overwritten.
/// sub[0] and sup[n-1] are ignored.
inline std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                             std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || sup.size() != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

/// Second-order centered first derivative of samples on a uniform grid,
/// one-sided (still second order) at the ends.
inline std::vector<double> fd_derivative(const std::vector<double>& u, double h) {
  const std::size_t n = u.size();
  if (n < 3) throw std::invalid_argument("fd_derivative: need >= 3 samples");
  std::vector<double> d(n);
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

/// Trapezoid rule for samples on a uniform grid.
inline double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

/// Bisection for a sign change of f on [a, b]; assumes f(a)*f(b) <= 0.
template <class F>
double bisect(const F& f, double a, double b, double xtol = 1e-14, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("bisect: no sign change");
  for (int k = 0; k < max_iter && (b - a) > xtol; ++k) {
    const double m = 0.5 * (a + b), fm = f(m);
    if (fm == 0.0) return m;
    (fa * fm < 0.0 ? b : a) = m;
    (fa * fm < 0.0 ? fb : fa) = fm;
  }
  return 0.5 * (a + b);
}

/// Golden-section maximizer of f on [a, b].
template <class F>
double golden_max(const F& f, double a, double b, double xtol = 1e-12) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Least-squares slope of log|err| against log h; the measured convergence
/// order of a refinement sequence. Values below `floor` count as converged
/// and are excluded; if everything is at the floor the order is +inf.
inline double convergence_order(const std::vector<double>& h, const std::vector<double>& err,
                                double floor = 1e-13) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (std::abs(err[i]) > floor) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(std::abs(err[i])));
    }
  }
  if (x.size() < 2) return std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace stharm
