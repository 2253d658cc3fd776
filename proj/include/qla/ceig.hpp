#pragma once

// Complex eigensolvers and right eigenvalues of quaternionic matrices.
//
// The right eigenvalues of an n x n quaternionic M form n similarity classes
// [z_1], ..., [z_n]; the 2n eigenvalues of c(M) are z_1, conj(z_1), ...,
// z_n, conj(z_n). Hermitian input has a real spectrum and an orthonormal
// quaternionic eigenbasis, recovered from the eigenvectors of c(S).

#include <cstddef>
#include <vector>

#include "qla/qmatrix.hpp"

namespace qla {

struct ComplexHermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // unitary, column j pairs with values[j]
};

/// Cyclic complex Jacobi. Stops when the off-diagonal Frobenius mass is at
/// most 1e-13 * |H|_F. Throws NotHermitian or NoConvergence.
ComplexHermitianEigen hermitian_complex_eigen(const CMatrix& h, int max_sweeps = 64);

/// Eigenvalues of a general complex matrix: unitary Hessenberg reduction and
/// Wilkinson-shifted QR with deflation. max_iterations <= 0 means 100 * dim.
std::vector<Complex> general_complex_eigenvalues(const CMatrix& c, int max_iterations = 0);

struct SimilarityClass {
  double real_part = 0.0;
  double imag_norm = 0.0;  // >= 0
  int multiplicity = 1;    // number of classes (of the n) equal to this one

  Complex representative() const { return {real_part, imag_norm}; }
  double norm() const;
};

/// One class per conjugate pair of eigenvalues of c(M): n entries, sorted by
/// real part then imag_norm. Pairs are matched greedily by nearest conjugate;
/// a partner farther than pairing_tol raises PairingFailure.
std::vector<SimilarityClass> right_eigen_classes(const QMatrix& m, double pairing_tol = 1e-6);

struct HermitianEigen {
  std::vector<double> values;       // t_1 <= ... <= t_n
  Subspace basis;                   // u_1..u_n with S u_j = u_j t_j
  std::vector<double> distinct;     // distinct eigenvalues, ascending
  std::vector<int> multiplicities;  // l_i for each distinct value

  /// Symplectic U with columns u_j, so that S = U diag(t) U*.
  QMatrix eigenvector_matrix() const { return basis.basis_matrix(); }
  /// Position of values[j] in `distinct`.
  std::size_t cluster_of(std::size_t j) const;
};

HermitianEigen hermitian_right_eigen(const QMatrix& s);

/// Groups ascending values into runs whose neighbours differ by at most
/// rel_gap * (1 + |t|). Returns run lengths.
std::vector<int> cluster_sizes(const std::vector<double>& ascending, double rel_gap = 1e-7);

}  // namespace qla
