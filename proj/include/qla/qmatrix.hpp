#pragma once

// Dense quaternionic vectors and matrices. H^n is a right H-vector space:
// scalars multiply vectors from the right, matrices act from the left.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qla/quaternion.hpp"

namespace qla {

class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : data_(n) {}
  QVector(std::initializer_list<Quaternion> init) : data_(init) {}
  explicit QVector(std::vector<Quaternion> data) : data_(std::move(data)) {}

  static QVector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return data_.size(); }
  Quaternion& operator[](std::size_t i) { return data_[i]; }
  const Quaternion& operator[](std::size_t i) const { return data_[i]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<const Quaternion> entries() const noexcept { return data_; }

  bool operator==(const QVector&) const = default;

 private:
  std::vector<Quaternion> data_;
};

QVector operator+(const QVector& u, const QVector& v);
QVector operator-(const QVector& u, const QVector& v);
/// Right scalar multiplication u q.
QVector operator*(const QVector& u, const Quaternion& q);
/// Left scalar multiplication q u (used only for the left-eigenvalue side).
QVector operator*(const Quaternion& q, const QVector& u);

/// <u, v> = u* v = sum conj(u_i) v_i.
Quaternion hermitian_product(const QVector& u, const QVector& v);
/// Euclidean scalar product in R^{4n}: Re <u, v>.
double scalar_product(const QVector& u, const QVector& v);
double norm2(const QVector& v);
double norm(const QVector& v);
QVector normalized(const QVector& v);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> row_major);
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix diagonal(std::span<const Quaternion> d);
  static QMatrix from_columns(std::span<const QVector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Quaternion& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Quaternion& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  QVector column(std::size_t c) const;
  std::span<const Quaternion> entries() const noexcept { return data_; }

  bool operator==(const QMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Quaternion> data_;
};

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const Quaternion& q, const QMatrix& m);
QMatrix operator*(const QMatrix& m, const Quaternion& q);
QMatrix matmul(const QMatrix& a, const QMatrix& b);
inline QMatrix operator*(const QMatrix& a, const QMatrix& b) { return matmul(a, b); }
/// M* = conj(M)^T.
QMatrix adjoint(const QMatrix& m);
QVector apply(const QMatrix& m, const QVector& v);
inline QVector operator*(const QMatrix& m, const QVector& v) { return apply(m, v); }

/// M - lambda I, lambda acting from the left on the diagonal.
QMatrix shift(const QMatrix& m, const Quaternion& lambda);

double max_entry_norm(const QMatrix& m);
double frobenius_norm(const QMatrix& m);
/// max |M_ij - conj(M_ji)|.
double hermitian_deviation(const QMatrix& m);
/// max entry deviation of A*A and AA* from I.
double symplectic_deviation(const QMatrix& m);
bool is_hermitian(const QMatrix& m, double tol);
bool is_symplectic(const QMatrix& m, double tol);

/// Block-diagonal A (+) B.
QMatrix direct_sum(const QMatrix& a, const QMatrix& b);

// Complex matrices: target of the adjoint embedding and the eigensolvers.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Complex> column(std::size_t c) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& m);
double max_abs_difference(const CMatrix& a, const CMatrix& b);
double frobenius_norm(const CMatrix& m);

/// c(M) = [[U, -conj(V)], [V, conj(U)]] where M = U + jV entrywise
/// (q = u + j v with u = w + xi, v = y - zi).
CMatrix complex_adjoint(const QMatrix& m);

/// Inverse of the embedding on one column: (a; b) of length 2n maps to the
/// quaternion vector with entries a_k + j b_k. A c(M)-eigenvector for the
/// complex eigenvalue z maps to u with M u = u z.
QVector quaternion_vector_from_complex(std::span<const Complex> column);

struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<QVector> basis;  // orthonormal under the Hermitian product

  std::size_t dim() const noexcept { return basis.size(); }
  /// n x k matrix whose columns are the basis vectors.
  QMatrix basis_matrix() const;
};

/// Orthonormal basis of the right span of `vectors`. Vectors whose residual
/// after projection is below tol * max(1, largest input norm) are dropped.
Subspace gram_schmidt(std::span<const QVector> vectors, double tol = 1e-10);
Subspace gram_schmidt(std::size_t ambient_dim, std::span<const QVector> vectors, double tol = 1e-10);

/// Orthonormal basis of {v : M v = 0}, via elimination with left row
/// operations and partial pivoting on quaternion norm. Entries below
/// tol * max(1, max_entry_norm(M)) count as zero.
Subspace null_space(const QMatrix& m, double tol = 1e-10);

}  // namespace qla
