#include "qla/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qla {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(Errc::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void require_square(const QMatrix& m, const char* what) {
  if (!m.square()) {
    throw Error(Errc::NotSquare, std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
  }
}

}  // namespace

// ---------------------------------------------------------------- QVector

QVector QVector::unit(std::size_t n, std::size_t i) {
  QVector v(n);
  v[i] = kOne;
  return v;
}

QVector operator+(const QVector& u, const QVector& v) {
  require_same_size(u.size(), v.size(), "vector sum");
  QVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] + v[i];
  return r;
}

QVector operator-(const QVector& u, const QVector& v) {
  require_same_size(u.size(), v.size(), "vector difference");
  QVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - v[i];
  return r;
}

QVector operator*(const QVector& u, const Quaternion& q) {
  QVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] * q;
  return r;
}

QVector operator*(const Quaternion& q, const QVector& u) {
  QVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = q * u[i];
  return r;
}

Quaternion hermitian_product(const QVector& u, const QVector& v) {
  require_same_size(u.size(), v.size(), "hermitian product");
  Quaternion s;
  for (std::size_t i = 0; i < u.size(); ++i) s += conj(u[i]) * v[i];
  return s;
}

double scalar_product(const QVector& u, const QVector& v) {
  require_same_size(u.size(), v.size(), "scalar product");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += u[i].w * v[i].w + u[i].x * v[i].x + u[i].y * v[i].y + u[i].z * v[i].z;
  }
  return s;
}

double norm2(const QVector& v) {
  double s = 0.0;
  for (const auto& q : v) s += norm2(q);
  return s;
}

double norm(const QVector& v) { return std::sqrt(norm2(v)); }

QVector normalized(const QVector& v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw Error(Errc::ZeroVector, "cannot normalize the zero vector");
  return v * Quaternion(1.0 / n);
}

// ---------------------------------------------------------------- QMatrix

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_same_size(data_.size(), rows * cols, "matrix entries");
}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    require_same_size(row.size(), cols_, "matrix row length");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = kOne;
  return m;
}

QMatrix QMatrix::diagonal(std::span<const Quaternion> d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

QMatrix QMatrix::from_columns(std::span<const QVector> columns) {
  if (columns.empty()) return {};
  const std::size_t n = columns.front().size();
  QMatrix m(n, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    require_same_size(columns[c].size(), n, "column length");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

QVector QMatrix::column(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.rows(), b.rows(), "matrix sum rows");
  require_same_size(a.cols(), b.cols(), "matrix sum cols");
  QMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.rows(), b.rows(), "matrix difference rows");
  require_same_size(a.cols(), b.cols(), "matrix difference cols");
  QMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

QMatrix operator*(const Quaternion& q, const QMatrix& m) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = q * m(i, j);
  return r;
}

QMatrix operator*(const QMatrix& m, const Quaternion& q) {
  QMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j) * q;
  return r;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.cols(), b.rows(), "matmul");
  QMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Quaternion s;
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      r(i, j) = s;
    }
  return r;
}

QMatrix adjoint(const QMatrix& m) {
  QMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = conj(m(i, j));
  return r;
}

QVector apply(const QMatrix& m, const QVector& v) {
  require_same_size(m.cols(), v.size(), "matrix-vector product");
  QVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Quaternion s;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

QMatrix shift(const QMatrix& m, const Quaternion& lambda) {
  require_square(m, "shift");
  QMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i) r(i, i) -= lambda;
  return r;
}

double max_entry_norm(const QMatrix& m) {
  double s = 0.0;
  for (const auto& q : m.entries()) s = std::max(s, norm(q));
  return s;
}

double frobenius_norm(const QMatrix& m) {
  double s = 0.0;
  for (const auto& q : m.entries()) s += norm2(q);
  return std::sqrt(s);
}

double hermitian_deviation(const QMatrix& m) {
  require_square(m, "hermitian check");
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) dev = std::max(dev, norm(m(i, j) - conj(m(j, i))));
  return dev;
}

double symplectic_deviation(const QMatrix& m) {
  require_square(m, "symplectic check");
  const QMatrix id = QMatrix::identity(m.rows());
  const QMatrix a = adjoint(m);
  return std::max(max_entry_norm(a * m - id), max_entry_norm(m * a - id));
}

bool is_hermitian(const QMatrix& m, double tol) { return hermitian_deviation(m) <= tol; }
bool is_symplectic(const QMatrix& m, double tol) { return symplectic_deviation(m) <= tol; }

QMatrix direct_sum(const QMatrix& a, const QMatrix& b) {
  require_square(a, "direct sum");
  require_square(b, "direct sum");
  const std::size_t n = a.rows(), m = b.rows();
  QMatrix r(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r(n + i, n + j) = b(i, j);
  return r;
}

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    require_same_size(row.size(), cols_, "matrix row length");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<Complex> CMatrix::column(std::size_t c) const {
  std::vector<Complex> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require_same_size(a.cols(), b.rows(), "complex matmul");
  CMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Complex ail = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += ail * b(l, j);
    }
  return r;
}

CMatrix adjoint(const CMatrix& m) {
  CMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
  return r;
}

double max_abs_difference(const CMatrix& a, const CMatrix& b) {
  require_same_size(a.rows(), b.rows(), "complex difference rows");
  require_same_size(a.cols(), b.cols(), "complex difference cols");
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

CMatrix complex_adjoint(const QMatrix& m) {
  require_square(m, "complex adjoint");
  const std::size_t n = m.rows();
  CMatrix c(2 * n, 2 * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      const Quaternion& q = m(r, s);
      const Complex u{q.w, q.x};
      const Complex v{q.y, -q.z};
      c(r, s) = u;
      c(r, n + s) = -std::conj(v);
      c(n + r, s) = v;
      c(n + r, n + s) = std::conj(u);
    }
  return c;
}

QVector quaternion_vector_from_complex(std::span<const Complex> column) {
  if (column.size() % 2 != 0) {
    throw Error(Errc::DimensionMismatch, "complex column length must be even");
  }
  const std::size_t n = column.size() / 2;
  QVector v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = column[k];
    const Complex b = column[n + k];
    v[k] = Quaternion{a.real(), a.imag(), b.real(), -b.imag()};
  }
  return v;
}

// ---------------------------------------------------------------- subspaces

QMatrix Subspace::basis_matrix() const {
  if (basis.empty()) return QMatrix(ambient_dim, 0);
  return QMatrix::from_columns(basis);
}

Subspace gram_schmidt(std::size_t ambient_dim, std::span<const QVector> vectors, double tol) {
  Subspace out{ambient_dim, {}};
  double scale = 1.0;
  for (const auto& v : vectors) {
    require_same_size(v.size(), ambient_dim, "gram_schmidt ambient dimension");
    scale = std::max(scale, norm(v));
  }
  const double threshold = tol * scale;
  for (const auto& v : vectors) {
    QVector r = v;
    // Two passes of modified Gram-Schmidt keep the basis orthonormal to
    // working precision even for nearly dependent input.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : out.basis) r = r - b * hermitian_product(b, r);
    }
    const double len = norm(r);
    if (len > threshold) out.basis.push_back(r * Quaternion(1.0 / len));
  }
  return out;
}

Subspace gram_schmidt(std::span<const QVector> vectors, double tol) {
  const std::size_t n = vectors.empty() ? 0 : vectors.front().size();
  return gram_schmidt(n, vectors, tol);
}

Subspace null_space(const QMatrix& m, double tol) {
  require_square(m, "null_space");
  const std::size_t n = m.rows();
  const double threshold = tol * std::max(1.0, max_entry_norm(m));

  QMatrix work = m;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = row;
    double best_norm = -1.0;
    for (std::size_t r = row; r < n; ++r) {
      const double v = norm(work(r, col));
      if (v > best_norm) {
        best_norm = v;
        best = r;
      }
    }
    if (row >= n || best_norm <= threshold) {
      free_cols.push_back(col);
      continue;
    }
    if (best != row) {
      for (std::size_t c = 0; c < n; ++c) std::swap(work(row, c), work(best, c));
    }
    // Left-multiplying a row by a scalar keeps the right solution space.
    const Quaternion inv = inverse(work(row, col));
    for (std::size_t c = 0; c < n; ++c) work(row, c) = inv * work(row, c);
    work(row, col) = kOne;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      const Quaternion factor = work(r, col);
      if (factor == Quaternion{}) continue;
      for (std::size_t c = 0; c < n; ++c) work(r, c) -= factor * work(row, c);
      work(r, col) = Quaternion{};
    }
    pivot_cols.push_back(col);
    ++row;
  }

  // Each free column f gives the solution v_f = 1, v_p = -R(p, f).
  std::vector<QVector> raw;
  raw.reserve(free_cols.size());
  for (std::size_t f : free_cols) {
    QVector v(n);
    v[f] = kOne;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) v[pivot_cols[p]] = -work(p, f);
    raw.push_back(std::move(v));
  }
  return gram_schmidt(n, raw, 1e-12);
}

}  // namespace qla
