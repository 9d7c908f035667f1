#pragma once

// Continuous piecewise-linear functions on a uniform mesh of [0, pi_p] and
// the integral terms the variational problems are built from. The gradient
// term int |u'|^p is exact on this space (slopes are cellwise constant);
// int |u|^p uses 5-point Gauss-Legendre per cell.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "plyap/detail/numeric.hpp"
#include "plyap/errors.hpp"
#include "plyap/ptrig.hpp"

namespace plyap {

class Mesh {
 public:
  Mesh(const ExponentContext& ctx, std::size_t cells) : Mesh(ctx.pi_p(), cells) {}

  Mesh(double length, std::size_t cells) : length_(length), h_(length / cells), nodes_(cells + 1) {
    if (cells < 2) throw domain_error("Mesh: need at least 2 cells");
    if (!(length > 0.0) || !std::isfinite(length)) throw domain_error("Mesh: bad interval length");
    for (std::size_t i = 0; i <= cells; ++i) nodes_[i] = length * static_cast<double>(i) / cells;
    nodes_.back() = length;
  }

  std::size_t cells() const { return nodes_.size() - 1; }
  std::size_t size() const { return nodes_.size(); }
  double h() const { return h_; }
  double length() const { return length_; }
  double node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }

  std::size_t nearest_node(double x) const {
    const double r = std::round(x / h_);
    if (r <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(r), cells());
  }

  /// Cell index containing x, clamped to [0, cells-1].
  std::size_t cell_of(double x) const {
    const double r = std::floor(x / h_);
    if (r <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(r), cells() - 1);
  }

 private:
  double length_;
  double h_;
  std::vector<double> nodes_;
};

/// Element of the discrete W^{1,p}_0: nodal values with zero end values.
class DiscreteFunction {
 public:
  DiscreteFunction(Mesh mesh, std::vector<double> values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_.size()) {
      throw domain_error("DiscreteFunction: expected " + std::to_string(mesh_.size()) +
                         " values, got " + std::to_string(values_.size()));
    }
    if (values_.front() != 0.0 || values_.back() != 0.0) {
      throw domain_error("DiscreteFunction: boundary values must be zero");
    }
  }

  static DiscreteFunction zero(const Mesh& mesh) {
    return DiscreteFunction(mesh, std::vector<double>(mesh.size(), 0.0));
  }

  /// Nodal interpolant of f; the end values are forced to zero.
  template <class F>
  static DiscreteFunction interpolate(const Mesh& mesh, F&& f) {
    std::vector<double> v(mesh.size());
    for (std::size_t i = 1; i + 1 < mesh.size(); ++i) v[i] = f(mesh.node(i));
    v.front() = 0.0;
    v.back() = 0.0;
    return DiscreteFunction(mesh, std::move(v));
  }

  const Mesh& mesh() const { return mesh_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Piecewise-linear evaluation.
  double operator()(double x) const {
    const std::size_t k = mesh_.cell_of(x);
    const double t = (x - mesh_.node(k)) / mesh_.h();
    return (1.0 - t) * values_[k] + t * values_[k + 1];
  }

  std::size_t argmax_abs() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (std::abs(values_[i]) > std::abs(values_[best])) best = i;
    }
    return best;
  }
  double max_abs() const { return std::abs(values_[argmax_abs()]); }

  DiscreteFunction scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return DiscreteFunction(mesh_, std::move(v));
  }

 private:
  Mesh mesh_;
  std::vector<double> values_;
};

/// Triangular bump r_delta of unit integral: height 1/delta on [c - delta, c + delta].
class TentProfile {
 public:
  TentProfile(const ExponentContext& ctx, double center, double delta)
      : center_(center), delta_(delta) {
    if (!(delta > 0.0) || !(center - delta > 0.0) || !(center + delta < ctx.pi_p())) {
      throw domain_error("TentProfile: need delta > 0 and [c - delta, c + delta] inside (0, pi_p)");
    }
  }

  double center() const { return center_; }
  double delta() const { return delta_; }
  double left() const { return center_ - delta_; }
  double right() const { return center_ + delta_; }

  double operator()(double x) const {
    const double d = std::abs(x - center_);
    if (d >= delta_) return 0.0;
    return (delta_ - d) / (delta_ * delta_);
  }

 private:
  double center_;
  double delta_;
};

namespace detail {

struct GaussRule01 {
  std::array<double, 5> x;
  std::array<double, 5> w;
};

inline const GaussRule01& gauss5() {
  static const GaussRule01 rule = [] {
    using G = boost::math::quadrature::gauss<double, 5>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    GaussRule01 r{};
    // abscissa() holds {0, x1, x2}; mirror to five points on [0, 1].
    const std::array<double, 5> xs{-a[2], -a[1], a[0], a[1], a[2]};
    const std::array<double, 5> ws{wt[2], wt[1], wt[0], wt[1], wt[2]};
    for (std::size_t i = 0; i < 5; ++i) {
      r.x[i] = 0.5 * (1.0 + xs[i]);
      r.w[i] = 0.5 * ws[i];
    }
    return r;
  }();
  return rule;
}

// Second-derivative weight of t -> |t|^p used by the preconditioners. For
// p >= 2 it is the exact p (p-1) |t|^(p-2). For p < 2 the exact curvature is
// unbounded at t = 0 and Newton steps flip sign there indefinitely; the
// majorant weight p |t|^(p-2) (floored) bounds |t|^p from above by a quadratic
// and gives monotone steps instead.
inline constexpr double kCurvatureFloor = 1e-6;

inline double curvature_weight(double p, double t) {
  const double a = std::abs(t);
  if (p < 2.0) return p * std::pow(std::max(a, kCurvatureFloor), p - 2.0);
  return p == 2.0 ? 2.0 : p * (p - 1.0) * std::pow(a, p - 2.0);
}

}  // namespace detail

/// int_0^L |u'|^p dx, exact for piecewise-linear u.
inline double gradient_energy(double p, const Mesh& mesh, std::span<const double> u) {
  const double h = mesh.h();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) s += detail::abs_pow((u[k + 1] - u[k]) / h, p);
  return s * h;
}

/// int_0^L |u|^p dx by 5-point Gauss per cell.
inline double power_integral(double p, const Mesh& mesh, std::span<const double> u) {
  const auto& g = detail::gauss5();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    if (u[k] == 0.0 && u[k + 1] == 0.0) continue;
    for (std::size_t j = 0; j < 5; ++j) {
      s += g.w[j] * detail::abs_pow((1.0 - g.x[j]) * u[k] + g.x[j] * u[k + 1], p);
    }
  }
  return s * mesh.h();
}

/// Accumulates scale * d/du of gradient_energy into out.
inline void add_gradient_energy_gradient(double p, const Mesh& mesh, std::span<const double> u,
                                         double scale, std::span<double> out) {
  const double h = mesh.h();
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double flux = scale * p * detail::signed_pow((u[k + 1] - u[k]) / h, p - 1.0);
    out[k] -= flux;
    out[k + 1] += flux;
  }
}

/// Accumulates scale * d/du of power_integral into out.
inline void add_power_integral_gradient(double p, const Mesh& mesh, std::span<const double> u,
                                        double scale, std::span<double> out) {
  const auto& g = detail::gauss5();
  const double c = scale * p * mesh.h();
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    if (u[k] == 0.0 && u[k + 1] == 0.0) continue;
    for (std::size_t j = 0; j < 5; ++j) {
      const double v = (1.0 - g.x[j]) * u[k] + g.x[j] * u[k + 1];
      const double f = c * g.w[j] * detail::signed_pow(v, p - 1.0);
      out[k] += f * (1.0 - g.x[j]);
      out[k + 1] += f * g.x[j];
    }
  }
}

/// Accumulates scale * (tridiagonal Hessian of gradient_energy), majorant weights for p < 2.
inline void add_gradient_energy_hessian(double p, const Mesh& mesh, std::span<const double> u,
                                        double scale, detail::Tridiagonal& out) {
  const double h = mesh.h();
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const double c = scale * detail::curvature_weight(p, (u[k + 1] - u[k]) / h) / h;
    out.diag[k] += c;
    out.diag[k + 1] += c;
    out.off[k] -= c;
  }
}

/// Accumulates scale * (tridiagonal Hessian of power_integral), majorant weights for p < 2.
inline void add_power_integral_hessian(double p, const Mesh& mesh, std::span<const double> u,
                                       double scale, detail::Tridiagonal& out) {
  const auto& g = detail::gauss5();
  const double c = scale * mesh.h();
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    for (std::size_t j = 0; j < 5; ++j) {
      const double a = 1.0 - g.x[j];
      const double b = g.x[j];
      const double wgt = c * g.w[j] * detail::curvature_weight(p, a * u[k] + b * u[k + 1]);
      out.diag[k] += wgt * a * a;
      out.diag[k + 1] += wgt * b * b;
      out.off[k] += wgt * a * b;
    }
  }
}

namespace detail {

// Visits the pieces of each cell on which the tent is linear:
// visit(cell, t0, t1) with local coordinates 0 <= t0 < t1 <= 1.
template <class Visit>
void for_each_tent_piece(const Mesh& mesh, const TentProfile& tent, Visit&& visit) {
  const double h = mesh.h();
  const std::size_t first = mesh.cell_of(tent.left());
  const std::size_t last = mesh.cell_of(tent.right());
  const std::array<double, 3> breaks{tent.left(), tent.center(), tent.right()};
  for (std::size_t k = first; k <= last; ++k) {
    const double x0 = mesh.node(k);
    const double x1 = mesh.node(k + 1);
    std::array<double, 5> cuts{};
    std::size_t m = 0;
    cuts[m++] = x0;
    for (double b : breaks) {
      if (b > x0 && b < x1) cuts[m++] = b;
    }
    cuts[m++] = x1;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double a = std::max(cuts[i], tent.left());
      const double b = std::min(cuts[i + 1], tent.right());
      if (b > a) visit(k, (a - x0) / h, (b - x0) / h);
    }
  }
}

}  // namespace detail

/// int r_delta |u|^p dx. The tent is linear on every Gauss piece.
inline double weighted_power_integral(double p, const Mesh& mesh, std::span<const double> u,
                                      const TentProfile& tent) {
  const auto& g = detail::gauss5();
  const double h = mesh.h();
  double s = 0.0;
  detail::for_each_tent_piece(mesh, tent, [&](std::size_t k, double t0, double t1) {
    const double len = (t1 - t0) * h;
    for (std::size_t j = 0; j < 5; ++j) {
      const double t = t0 + (t1 - t0) * g.x[j];
      const double v = (1.0 - t) * u[k] + t * u[k + 1];
      s += len * g.w[j] * tent(mesh.node(k) + t * h) * detail::abs_pow(v, p);
    }
  });
  return s;
}

inline void add_weighted_power_integral_gradient(double p, const Mesh& mesh,
                                                 std::span<const double> u,
                                                 const TentProfile& tent, double scale,
                                                 std::span<double> out) {
  const auto& g = detail::gauss5();
  const double h = mesh.h();
  detail::for_each_tent_piece(mesh, tent, [&](std::size_t k, double t0, double t1) {
    const double len = (t1 - t0) * h;
    for (std::size_t j = 0; j < 5; ++j) {
      const double t = t0 + (t1 - t0) * g.x[j];
      const double v = (1.0 - t) * u[k] + t * u[k + 1];
      const double f =
          scale * p * len * g.w[j] * tent(mesh.node(k) + t * h) * detail::signed_pow(v, p - 1.0);
      out[k] += f * (1.0 - t);
      out[k + 1] += f * t;
    }
  });
}

/// J(u) = int |u'|^p - lambda int |u|^p on the discrete space.
inline double energy(double p, double lambda, const Mesh& mesh, std::span<const double> u) {
  const double grad = gradient_energy(p, mesh, u);
  return lambda == 0.0 ? grad : grad - lambda * power_integral(p, mesh, u);
}

}  // namespace plyap
