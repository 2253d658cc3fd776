#pragma once

// Random generators and small oracles shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qla/qmatrix.hpp"

namespace qla::testing {

using Gen = std::mt19937_64;

inline double uniform(Gen& g, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Quaternion random_quaternion(Gen& g, double scale = 1.0) {
  return Quaternion{uniform(g), uniform(g), uniform(g), uniform(g)} * scale;
}

inline Quaternion random_unit(Gen& g) {
  std::normal_distribution<double> nd;
  Quaternion q{nd(g), nd(g), nd(g), nd(g)};
  return q / norm(q);
}

inline Quaternion random_pure_unit(Gen& g) {
  std::normal_distribution<double> nd;
  Quaternion q{0.0, nd(g), nd(g), nd(g)};
  return q / norm(q);
}

inline QVector random_vector(Gen& g, std::size_t n) {
  QVector v(n);
  for (auto& q : v) q = random_quaternion(g);
  return v;
}

inline QMatrix random_matrix(Gen& g, std::size_t rows, std::size_t cols, double scale = 1.0) {
  QMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_quaternion(g, scale);
  }
  return m;
}

inline QMatrix random_hermitian(Gen& g, std::size_t n, double scale = 1.0) {
  QMatrix s(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    s(r, r) = Quaternion(uniform(g) * scale);
    for (std::size_t c = r + 1; c < n; ++c) {
      s(r, c) = random_quaternion(g, scale);
      s(c, r) = conj(s(r, c));
    }
  }
  return s;
}

/// Product of Givens-like factors [[c, -s conj(u)], [s u, c]] on random
/// coordinate pairs, then a diagonal of unit phases.
inline QMatrix random_symplectic(Gen& g, std::size_t n, int factors = 0) {
  if (factors <= 0) factors = static_cast<int>(3 * n * n);
  QMatrix a = QMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int f = 0; f < factors && n > 1; ++f) {
    std::size_t p = pick(g), q = pick(g);
    if (p == q) continue;
    const double theta = uniform(g, 0.0, 2.0 * std::numbers::pi);
    const Quaternion u = random_unit(g);
    QMatrix giv = QMatrix::identity(n);
    giv(p, p) = std::cos(theta);
    giv(q, q) = std::cos(theta);
    giv(p, q) = -std::sin(theta) * conj(u);
    giv(q, p) = std::sin(theta) * u;
    a = giv * a;
  }
  std::vector<Quaternion> phases(n);
  for (auto& ph : phases) ph = random_unit(g);
  return QMatrix::diagonal(phases) * a;
}

inline double max_diff(const QVector& a, const QVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm(a[i] - b[i]));
  return m;
}

/// |M v - lambda v| over v ranging through the columns of a basis.
inline double left_residual(const QMatrix& m, const Quaternion& lambda, const QVector& v) {
  return norm((m * v) - (lambda * v));
}

}  // namespace qla::testing
