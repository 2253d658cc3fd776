#pragma once

// Left eigenvalues: lambda such that M - lambda I is singular, i.e.
// M v = lambda v for some v != 0. The eigenvectors of a left eigenvalue form
// a right H-subspace V(lambda).
//
// For 2x2 M = [[a, b], [c, d]] with bc != 0 the left eigenvalues are
// lambda = a + b x over the roots of x^2 + a1 x + a0 = 0, a1 = b^-1 (a - d),
// a0 = -b^-1 c. When a1 and a0 are real and a1^2 - 4 a0 < 0 there is a
// whole 2-sphere of them.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qla/ceig.hpp"
#include "qla/qmatrix.hpp"

namespace qla {

/// lambda = base + coeff * xi over pure xi with |xi| = radius.
struct LeftFamily {
  Quaternion base;
  Quaternion coeff;
  double radius = 1.0;

  /// Member for a pure unit direction omega.
  Quaternion member(const Quaternion& omega) const { return base + coeff * (omega * radius); }
  /// Members at family_sample_directions().
  std::vector<Quaternion> samples() const;
};

/// The 16 deterministic pure unit directions used to probe a family:
/// +-i, +-j, +-k and 10 Fibonacci-lattice points on the unit 2-sphere.
const std::vector<Quaternion>& family_sample_directions();

struct LeftSpectrum {
  enum class Kind { Finite, Infinite };
  Kind kind = Kind::Finite;
  std::vector<Quaternion> finite_values;
  std::optional<LeftFamily> family;
  /// a0, a1 were classified real-or-not close to the threshold.
  bool near_infinite = false;
};

LeftSpectrum left_eigs_2x2(const QMatrix& m);

/// Distinct roots of x^2 + a1 x + a0 = 0 by damped Newton on R^4 from 81
/// deterministic starts, deduplicated at 1e-6 and certified to residual
/// <= 1e-9 (scaled by max(1, s^2), s = 1 + |a1| + sqrt|a0|). Sorted
/// lexicographically by (w, x, y, z). The real-coefficient case with
/// negative discriminant has a sphere of roots; callers handle that one in
/// closed form. Throws RootSolverFailure when no start converges.
std::vector<Quaternion> quaternion_quadratic_roots(const Quaternion& a1, const Quaternion& a0);

struct Hermitian2x2Classification {
  std::array<double, 2> real_eigs{};      // ascending roots of (s-t)(s'-t) - |b|^2
  std::optional<LeftFamily> nonreal;      // lambda = s + b omega when Re b = 0 and s = s'
};

Hermitian2x2Classification hermitian_2x2_classify(const QMatrix& s, double tol = 1e-10);

struct RotationForm {
  Quaternion r;  // unit
  double theta = 0.0;  // in (0, pi)
};

/// Recognises A = r [[cos t, -sin t], [sin t, cos t]] with |r| = 1 and
/// sin t != 0. Throws NotSymplectic / NotTwoByTwo.
std::optional<RotationForm> symplectic_2x2_detect(const QMatrix& a, double tol = 1e-9);

struct Symplectic2x2Spectra {
  std::array<SimilarityClass, 2> right{};
  LeftFamily left_family;
  /// r = +-1: rho is undetermined, right classes came from the eigensolver.
  bool ambiguous_rho = false;
  /// Formula classes agree with right_eigen_classes of the assembled matrix.
  bool cross_check_ok = false;
};

Symplectic2x2Spectra symplectic_2x2_spectra(const Quaternion& r, double theta);

/// r [[cos t, -sin t], [sin t, cos t]].
QMatrix rotation_form_matrix(const Quaternion& r, double theta);

struct LeftMembership {
  bool is_left = false;
  Subspace eigenspace;
  double max_residual = 0.0;  // max |M v - lambda v| over the basis
};

LeftMembership left_membership(const QMatrix& m, const Quaternion& lambda, double tol = 1e-10);

struct BoundReport {
  Quaternion lambda;
  std::size_t eig_dim = 0;
  double lower = 0.0;
  double upper = 0.0;
  double real_part = 0.0;
  bool holds = false;
  double max_rayleigh_deviation = 0.0;  // max |R(v) - Re(lambda)| over V(lambda)
  bool rayleigh_constant = false;       // that deviation <= 1e-9
  double norm_bound = 0.0;  // Hermitian: max |t_i|; symplectic: 1
  bool norm_ok = false;     // Hermitian: |lambda| <= max|t_i|; symplectic: |lambda| = 1
  bool hermitian_part_agrees = true;  // symplectic only: h_A = h_S on random vectors

  bool all_hold() const { return holds && rayleigh_constant && norm_ok && hermitian_part_agrees; }
};

/// t_k <= Re(lambda) <= t_{n-k+1} with k = dim V(lambda). Throws
/// NotHermitian / NotLeftEigenvalue.
BoundReport hermitian_bound_check(const QMatrix& s, const Quaternion& lambda, double tol = 1e-8);

struct MultiplicityReport {
  std::size_t eig_dim = 0;
  std::size_t n = 0;
  bool precondition_met = false;  // k > ceil(n/2)
  double real_part = 0.0;
  std::size_t multiplicity = 0;  // multiplicity of Re(lambda) among t_1..t_n
  bool holds = true;             // meaningful only when precondition_met
};

MultiplicityReport multiplicity_corollary_check(const QMatrix& s, const Quaternion& lambda, double tol = 1e-8);

/// Re(q_k) <= Re(lambda) <= Re(q_{n-k+1}) with the right classes of A sorted
/// by real part, |lambda| = 1, and h_A = h_S for S = (A + A*)/2.
BoundReport symplectic_bound_check(const QMatrix& a, const Quaternion& lambda, double tol = 1e-8,
                                   std::uint64_t seed = 7);

struct HermitianPartReport {
  std::vector<double> eigenvalues;  // of S = (A + A*)/2, ascending
  std::vector<double> real_parts;   // of the right classes of A, ascending
  bool agree = false;
};

HermitianPartReport hermitian_part_classes(const QMatrix& a, double tol = 1e-8);

nlohmann::json to_json(const LeftFamily& f);
nlohmann::json to_json(const LeftSpectrum& s);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const SimilarityClass& c);

}  // namespace qla
