#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwg {

/// State and control vectors. Dimensions in this library are small
/// (1-3), so a plain vector beats a fixed-size template zoo.
using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) {
  return std::sqrt(dot(a, a));
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

/// y <- y + h*dx
inline void axpy(double h, const Vec& dx, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * dx[i];
}

/// Axis-aligned box, one [lo, hi] interval per coordinate.
struct Box {
  Vec lo;
  Vec hi;

  std::size_t dim() const { return lo.size(); }

  bool empty() const {
    if (lo.size() != hi.size() || lo.empty()) return true;
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] <= hi[i])) return true;
    return false;
  }

  bool contains(std::span<const double> x, double slack = 0.0) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
  }

  /// Euclidean diameter of the box (corner to corner).
  double diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const double d = hi[i] - lo[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  Box inflated(double r) const {
    Box b = *this;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      b.lo[i] -= r;
      b.hi[i] += r;
    }
    return b;
  }
};

/// Configuration or input documents that cannot be used as requested.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A stable-motion lookup failed: the table has no successor carrying the
/// requested payoff pair. Only reachable on corrupted or edited tables.
struct NoWitnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cwg
