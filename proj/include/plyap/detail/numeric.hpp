#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace plyap::detail {

/// sign(x) * |x|^e, with 0 mapped to 0 for every e > 0.
inline double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  const double m = std::pow(std::abs(x), e);
  return x < 0.0 ? -m : m;
}

inline double abs_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  return std::pow(std::abs(x), e);
}

/// Symmetric tridiagonal matrix stored by diagonal and first off-diagonal.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  explicit Tridiagonal(std::size_t n = 0) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}
  std::size_t size() const { return diag.size(); }
};

/// Solves T x = rhs in place by LDL^T. Returns false if a pivot is not
/// strictly positive, leaving rhs in an unspecified state.
inline bool solve_spd(const Tridiagonal& t, std::span<double> rhs) {
  const std::size_t n = t.size();
  if (n == 0) return true;
  std::vector<double> d(n);
  std::vector<double> l(n, 0.0);
  d[0] = t.diag[0];
  if (!(d[0] > 0.0)) return false;
  for (std::size_t i = 1; i < n; ++i) {
    l[i] = t.off[i - 1] / d[i - 1];
    d[i] = t.diag[i] - l[i] * t.off[i - 1];
    if (!(d[i] > 0.0) || !std::isfinite(d[i])) return false;
  }
  for (std::size_t i = 1; i < n; ++i) rhs[i] -= l[i] * rhs[i - 1];
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= d[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= l[i + 1] * rhs[i + 1];
  return true;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace plyap::detail
