#include <doctest.h>

#include <cmath>

#include "qla/matrix_io.hpp"
#include "qla/qmatrix.hpp"
#include "support.hpp"

using namespace qla;
using qla::testing::Gen;

namespace {

double max_diff(const QMatrix& a, const QMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, norm(a.entries()[i] - b.entries()[i]));
  return m;
}

double max_diff(const CMatrix& a, const std::vector<std::vector<Complex>>& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b[r][c]));
  }
  return m;
}

// Distance from v (unit) to the right span of an orthonormal basis.
double distance_to_subspace(const QVector& v, const Subspace& e) {
  QVector r = v;
  for (const auto& b : e.basis) r = r - b * hermitian_product(b, v);
  return norm(r);
}

}  // namespace

TEST_CASE("Hermitian product") {
  CHECK(hermitian_product(QVector::unit(2, 0), QVector::unit(2, 0)) == kOne);
  CHECK(hermitian_product(QVector{kI, 0.0}, QVector{0.0, kJ}) == Quaternion{});
  // (-i)(j) + (-j)(k) = -k - i
  CHECK(norm(hermitian_product(QVector{kI, kJ}, QVector{kJ, kK}) - (conj(kI) * kJ + conj(kJ) * kK)) == 0.0);
  CHECK(hermitian_product(QVector{kI, kJ}, QVector{kJ, kK}) == Quaternion{0, -1, 0, -1});
  CHECK_THROWS_AS(hermitian_product(QVector(2), QVector(3)), Error);

  Gen g(3);
  for (int t = 0; t < 100; ++t) {
    const QVector u = testing::random_vector(g, 4);
    const QVector v = testing::random_vector(g, 4);
    const Quaternion q = testing::random_quaternion(g);
    CHECK(norm(hermitian_product(u, v * q) - hermitian_product(u, v) * q) <= 1e-12);
    CHECK(norm(hermitian_product(u * q, v) - conj(q) * hermitian_product(u, v)) <= 1e-12);
    CHECK(norm(hermitian_product(u, v) - conj(hermitian_product(v, u))) <= 1e-12);
    CHECK(std::abs(norm2(u) - hermitian_product(u, u).w) <= 1e-12 * norm2(u));
  }
}

TEST_CASE("matmul, adjoint and apply") {
  Gen g(4);
  const QMatrix m = testing::random_matrix(g, 3, 3);
  CHECK(QMatrix::identity(3) * m == m);
  CHECK(adjoint(adjoint(m)) == m);
  const QMatrix s{{0.0, kI}, {-kI, 0.0}};
  CHECK(adjoint(s) == s);
  const QMatrix mj{{0.0, kJ}, {kI, 0.0}};
  CHECK(mj * QVector{1.0, 0.0} == QVector{0.0, kI});
  for (int t = 0; t < 50; ++t) {
    const QMatrix a = testing::random_matrix(g, 3, 4);
    const QMatrix b = testing::random_matrix(g, 4, 2);
    CHECK(max_diff(adjoint(a * b), adjoint(b) * adjoint(a)) <= 1e-12);
  }
  CHECK_THROWS_AS(testing::random_matrix(g, 2, 3) * testing::random_matrix(g, 2, 3), Error);
}

TEST_CASE("structure predicates") {
  const std::vector<Quaternion> d{1.0, 2.0};
  CHECK(is_hermitian(QMatrix::diagonal(d), 1e-12));
  const double h = std::sqrt(2.0) / 2.0;
  const QMatrix a = QMatrix{{1.0, -1.0}, {1.0, 1.0}} * Quaternion(h);
  CHECK(is_symplectic(kJ * a, 1e-12));
  CHECK_FALSE(is_hermitian(QMatrix{{0.0, Quaternion{1, 1, 0, 0}}, {Quaternion{1, 1, 0, 0}, 0.0}}, 1e-12));
  CHECK_THROWS_AS(is_hermitian(QMatrix(2, 3), 1e-12), Error);
  Gen g(12);
  for (int t = 0; t < 20; ++t) {
    CHECK(is_symplectic(testing::random_symplectic(g, 4), 1e-12));
    CHECK(is_hermitian(testing::random_hermitian(g, 4), 0.0));
  }
}

TEST_CASE("complex adjoint") {
  const CMatrix c2 = complex_adjoint(QMatrix::identity(2));
  CHECK(max_abs_difference(c2, CMatrix::identity(4)) == 0.0);

  const QMatrix m{{0.0, kJ}, {kI, 0.0}};
  const Complex I(0, 1);
  const std::vector<std::vector<Complex>> expected{
      {0.0, 0.0, 0.0, -1.0}, {I, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, -I, 0.0}};
  CHECK(max_diff(complex_adjoint(m), expected) == 0.0);
  CHECK(max_abs_difference(complex_adjoint(m * m), complex_adjoint(m) * complex_adjoint(m)) <= 1e-15);
  CHECK_THROWS_AS(complex_adjoint(QMatrix(2, 3)), Error);

  Gen g(6);
  for (int t = 0; t < 50; ++t) {
    const QMatrix a = testing::random_matrix(g, 3, 3);
    const QMatrix b = testing::random_matrix(g, 3, 3);
    CHECK(max_abs_difference(complex_adjoint(adjoint(a)), adjoint(complex_adjoint(a))) <= 1e-12);
    CHECK(max_abs_difference(complex_adjoint(a * b), complex_adjoint(a) * complex_adjoint(b)) <= 1e-12);
    // Injective: a nonzero difference survives the embedding.
    CHECK(max_abs_difference(complex_adjoint(a), complex_adjoint(b)) > 0.0);
    QMatrix a2 = a;
    a2(1, 2) += Quaternion{0, 0, 0, 1e-6};
    CHECK(max_abs_difference(complex_adjoint(a), complex_adjoint(a2)) >= 1e-6 * 0.999);
  }
}

TEST_CASE("eigenvector embedding convention round trip") {
  // c(M) x = x z for a complex eigenpair must map to M u = u z.
  Gen g(14);
  for (int t = 0; t < 30; ++t) {
    const double theta = testing::uniform(g, 0.1, 3.0);
    const std::vector<Quaternion> diag{Quaternion{std::cos(theta), std::sin(theta), 0, 0}, Quaternion(2.0)};
    const QMatrix p = testing::random_symplectic(g, 2);
    const QMatrix m = p * QMatrix::diagonal(diag) * adjoint(p);
    // Planted eigenvector: p e_1 with complex eigenvalue e^{i theta}.
    const QVector u = p * QVector::unit(2, 0);
    const CMatrix c = complex_adjoint(m);
    std::vector<Complex> col(4);
    // Forward map of u: a_k = w + x i, b_k = y - z i.
    for (std::size_t k = 0; k < 2; ++k) {
      col[k] = Complex(u[k].w, u[k].x);
      col[k + 2] = Complex(u[k].y, -u[k].z);
    }
    const Complex z(std::cos(theta), std::sin(theta));
    double res = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < 4; ++j) acc += c(i, j) * col[j];
      res = std::max(res, std::abs(acc - col[i] * z));
    }
    CHECK(res <= 1e-12);
    const QVector back = quaternion_vector_from_complex(col);
    CHECK(testing::max_diff(back, u) <= 1e-15);
    CHECK(norm((m * back) - back * from_complex(z)) <= 1e-12);
  }
}

TEST_CASE("Gram-Schmidt") {
  const QVector e1 = QVector::unit(2, 0);
  const std::vector<QVector> dependent{e1, e1 * kI};
  CHECK(gram_schmidt(dependent).dim() == 1);
  const std::vector<QVector> basis{QVector::unit(2, 0), QVector::unit(2, 1)};
  const Subspace s = gram_schmidt(basis);
  REQUIRE(s.dim() == 2);
  CHECK(testing::max_diff(s.basis[0], basis[0]) <= 1e-15);
  CHECK(testing::max_diff(s.basis[1], basis[1]) <= 1e-15);

  Gen g(9);
  for (int t = 0; t < 50; ++t) {
    std::vector<QVector> vs;
    for (int i = 0; i < 3; ++i) vs.push_back(testing::random_vector(g, 5));
    vs.push_back(vs[0] * testing::random_quaternion(g) + vs[2] * testing::random_quaternion(g));
    const Subspace e = gram_schmidt(vs);
    REQUIRE(e.dim() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const Quaternion ip = hermitian_product(e.basis[i], e.basis[j]);
        CHECK(norm(ip - Quaternion(i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    }
    for (const auto& v : vs) CHECK(distance_to_subspace(normalized(v), e) <= 1e-10);
  }
}

TEST_CASE("null space") {
  CHECK(null_space(QMatrix(2, 2)).dim() == 2);
  const QMatrix s{{0.0, kI}, {-kI, 0.0}};
  const Subspace v = null_space(shift(s, kJ));
  CHECK(v.dim() >= 1);
  for (const auto& b : v.basis) CHECK(norm(s * b - kJ * b) <= 1e-12);

  const QMatrix m{{0.0, kJ}, {kI, 0.0}};
  const Quaternion q = Quaternion{1, 1, 0, 0} / std::sqrt(2.0);
  CHECK(null_space(shift(m, q)).dim() == 0);

  Gen g(10);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 4;
    CHECK(null_space(testing::random_matrix(g, n, n)).dim() == 0);

    // Plant v in the kernel by making one column a right combination of others.
    QMatrix planted = testing::random_matrix(g, n, n);
    QVector x = testing::random_vector(g, n);
    x[n - 1] = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      Quaternion acc;
      for (std::size_t c = 0; c + 1 < n; ++c) acc += planted(r, c) * x[c];
      planted(r, n - 1) = -acc;
    }
    const Subspace k = null_space(planted);
    REQUIRE(k.dim() >= 1);
    CHECK(distance_to_subspace(normalized(x), k) <= 1e-8);
    for (const auto& b : k.basis) CHECK(norm(planted * b) <= 1e-10 * (1.0 + frobenius_norm(planted)));
  }
}

TEST_CASE("direct sum") {
  const std::vector<Quaternion> one{1.0}, two{2.0}, both{1.0, 2.0};
  CHECK(direct_sum(QMatrix::diagonal(one), QMatrix::diagonal(two)) == QMatrix::diagonal(both));
  const QMatrix s{{0.0, kI}, {-kI, 0.0}};
  CHECK(null_space(shift(direct_sum(s, s), kJ)).dim() == 2);

  Gen g(13);
  for (int t = 0; t < 50; ++t) {
    const QMatrix a = testing::random_hermitian(g, 2);
    const QMatrix b = testing::random_hermitian(g, 3);
    CHECK(is_hermitian(direct_sum(a, b), 0.0));
    // Pick lambda that is a left eigenvalue of one block (a real right
    // eigenvalue, or a sampled family member) or a random quaternion.
    Quaternion lambda;
    switch (t % 3) {
      case 0: lambda = testing::random_quaternion(g); break;
      case 1:
        // Largest real eigenvalue of the 2x2 Hermitian block.
        lambda = 0.5 * (a(0, 0).w + a(1, 1).w) + std::hypot(0.5 * (a(0, 0).w - a(1, 1).w), norm(a(0, 1)));
        break;
      default: lambda = s(0, 1) * testing::random_pure_unit(g); break;
    }
    const QMatrix blk = t % 3 == 2 ? s : a;
    const std::size_t lhs = null_space(shift(direct_sum(blk, b), lambda)).dim();
    const std::size_t rhs = null_space(shift(blk, lambda)).dim() + null_space(shift(b, lambda)).dim();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("matrix files") {
  const QMatrix m = parse_matrix("2 2\n0 j\ni 0\n");
  CHECK(m == QMatrix{{0.0, kJ}, {kI, 0.0}});
  const QMatrix back = matrix_from_json(to_json(m));
  CHECK(back == m);
  CHECK(parse_matrix(to_json(m).dump()) == m);
  CHECK_THROWS_AS(parse_matrix("2 2\n1 2\n3\n"), Error);
  CHECK_THROWS_AS(parse_matrix("2 2\n1 2 3 4 5\n"), Error);
  CHECK_THROWS_AS(parse_matrix("{\"rows\": 1}"), Error);
  CHECK(parse_vector("1,i,0.5-j") == QVector{1.0, kI, Quaternion{0.5, 0, -1, 0}});
}
