#pragma once

// Real quaternions q = w + xi + yj + zk with i^2 = j^2 = k^2 = ijk = -1.

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "qla/error.hpp"

namespace qla {

using Complex = std::complex<double>;

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double real) : w(real) {}  // NOLINT: reals embed implicitly
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  constexpr bool operator==(const Quaternion&) const = default;

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }
  constexpr Quaternion& operator/=(double s) {
    w /= s; x /= s; y /= s; z /= s;
    return *this;
  }
};

inline constexpr Quaternion kOne{1, 0, 0, 0};
inline constexpr Quaternion kI{0, 1, 0, 0};
inline constexpr Quaternion kJ{0, 0, 1, 0};
inline constexpr Quaternion kK{0, 0, 0, 1};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator*(Quaternion p, double s) { return p *= s; }
constexpr Quaternion operator*(double s, Quaternion p) { return p *= s; }
constexpr Quaternion operator/(Quaternion p, double s) { return p /= s; }

// Hamilton product. Not commutative.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion mul(const Quaternion& p, const Quaternion& q) { return p * q; }

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double real(const Quaternion& q) { return q.w; }
constexpr Quaternion imag(const Quaternion& q) { return {0.0, q.x, q.y, q.z}; }
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double norm(const Quaternion& q) { return std::hypot(std::hypot(q.w, q.x), std::hypot(q.y, q.z)); }
inline double imag_norm(const Quaternion& q) { return std::hypot(q.x, std::hypot(q.y, q.z)); }

/// q^-1 = conj(q) / |q|^2. Throws ZeroQuaternion when |q| <= zero_threshold.
Quaternion inverse(const Quaternion& q, double zero_threshold = 0.0);

/// Similar quaternions share norm and real part.
bool is_similar(const Quaternion& p, const Quaternion& q, double tol);

/// Canonical member t + s i (s >= 0) of the similarity class of q.
Complex complex_representative(const Quaternion& q);

/// r q r^-1.
Quaternion conjugate_by(const Quaternion& q, const Quaternion& r);

constexpr Quaternion from_complex(Complex c) { return {c.real(), c.imag(), 0.0, 0.0}; }

/// Parses "a+bi+cj+dk" with any subset of terms in any order ("1-2k", "i", "-0.5j+3").
/// Throws ParseError.
Quaternion parse_quaternion(std::string_view text);

/// Shortest round-trip rendering in the same syntax; zero terms are omitted.
std::string to_string(const Quaternion& q);

}  // namespace qla
