#include "qla/ceig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qla {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double offdiag_mass(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double max_abs(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s = std::max(s, std::abs(a(i, j)));
  return s;
}

// Zeroes a(p,q) with the unitary G = D R, D = diag(1, conj(phase)),
// R the real rotation of the resulting real symmetric 2x2 block.
void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const Complex phase = apq / g;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double zeta = (aqq - app) / (2.0 * g);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {  // A <- A G
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {  // A <- G* A
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (std::size_t k = 0; k < n; ++k) {  // V <- V G
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

// Eigenvalues of [[a, b], [c, d]], larger-magnitude root first to avoid
// cancellation in the second.
std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c, Complex d) {
  const Complex mean = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = std::abs(mean + disc) >= std::abs(mean - disc) ? mean + disc : mean - disc;
  const Complex det = a * d - b * c;
  const Complex l2 = std::abs(l1) > 0.0 ? det / l1 : mean - disc;
  return {l1, l2};
}

void hessenberg_reduce(CMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<Complex> v(n - k - 1);
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i - k - 1] = h(i, k);
      xnorm += std::norm(h(i, k));
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const Complex x0 = v[0];
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0, 0.0};
    v[0] += phase * xnorm;  // v = x + e^{i arg x0} |x| e1
    double vnorm = 0.0;
    for (const auto& e : v) vnorm += std::norm(e);
    vnorm = std::sqrt(vnorm);
    for (auto& e : v) e /= vnorm;

    // H <- (I - 2 v v*) H
    for (std::size_t j = 0; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i - k - 1]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i - k - 1] * dot;
    }
    // H <- H (I - 2 v v*)
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j - k - 1];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j - k - 1]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

}  // namespace

ComplexHermitianEigen hermitian_complex_eigen(const CMatrix& h, int max_sweeps) {
  if (h.rows() != h.cols()) throw Error(Errc::NotSquare, "hermitian_complex_eigen needs a square matrix");
  const std::size_t n = h.rows();
  const double scale = std::max(1.0, max_abs(h));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(h(i, j) - std::conj(h(j, i))) > 1e-10 * scale) {
        throw Error(Errc::NotHermitian, "complex matrix is not Hermitian within 1e-10");
      }

  CMatrix a = h;
  // Symmetrize so rounding in the input does not leak into the rotations.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  CMatrix v = CMatrix::identity(n);
  const double target = 1e-13 * frobenius_norm(h);

  int sweep = 0;
  while (offdiag_mass(a) > target) {
    if (sweep++ >= max_sweeps) {
      throw Error(Errc::NoConvergence, "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        // Skip entries already negligible against both diagonals.
        if (g <= kEps * 1e-3 * (std::abs(a(p, p)) + std::abs(a(q, q)))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        jacobi_rotate(a, v, p, q);
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  ComplexHermitianEigen out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

std::vector<Complex> general_complex_eigenvalues(const CMatrix& c, int max_iterations) {
  if (c.rows() != c.cols()) throw Error(Errc::NotSquare, "general_complex_eigenvalues needs a square matrix");
  const std::size_t n = c.rows();
  std::vector<Complex> eig(n);
  if (n == 0) return eig;
  const int cap = max_iterations > 0 ? max_iterations : static_cast<int>(100 * n);

  CMatrix h = c;
  hessenberg_reduce(h);
  const double hnorm = frobenius_norm(h);

  std::size_t hi = n - 1;
  int total = 0;
  int since_deflation = 0;
  while (true) {
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double ref = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (ref == 0.0) ref = hnorm;
      if (sub <= kEps * ref || sub <= kEps * kEps * hnorm) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (lo + 1 == hi) {
      auto [l1, l2] = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      eig[lo] = l1;
      eig[hi] = l2;
      if (lo == 0) break;
      hi = lo - 1;
      since_deflation = 0;
      continue;
    }
    if (++total > cap) {
      throw Error(Errc::NoConvergence, "shifted QR exceeded " + std::to_string(cap) + " iterations");
    }
    ++since_deflation;

    Complex mu;
    if (since_deflation % 11 == 10) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));  // exceptional shift
    } else {
      auto [l1, l2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      mu = std::abs(l1 - h(hi, hi)) < std::abs(l2 - h(hi, hi)) ? l1 : l2;
    }

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    std::vector<double> cs(hi - lo);
    std::vector<Complex> sn(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Complex a = h(k, k);
      const Complex b = h(k + 1, k);
      const double r = std::hypot(std::abs(a), std::abs(b));
      double cv;
      Complex sv;
      if (r == 0.0) {
        cv = 1.0;
        sv = 0.0;
      } else if (std::abs(a) == 0.0) {
        cv = 0.0;
        sv = 1.0;
      } else {
        cv = std::abs(a) / r;
        sv = (a / std::abs(a)) * std::conj(b) / r;
      }
      cs[k - lo] = cv;
      sn[k - lo] = sv;
      for (std::size_t j = k; j <= hi; ++j) {  // rows k, k+1 <- G [row k; row k+1]
        const Complex x = h(k, j), y = h(k + 1, j);
        h(k, j) = cv * x + sv * y;
        h(k + 1, j) = -std::conj(sv) * x + cv * y;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {  // columns k, k+1 <- [col k, col k+1] G*
      const double cv = cs[k - lo];
      const Complex sv = sn[k - lo];
      const std::size_t last = std::min(k + 2, hi);
      for (std::size_t i = lo; i <= last; ++i) {
        const Complex x = h(i, k), y = h(i, k + 1);
        h(i, k) = x * cv + y * std::conj(sv);
        h(i, k + 1) = -x * sv + y * cv;
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }
  return eig;
}

double SimilarityClass::norm() const { return std::hypot(real_part, imag_norm); }

std::vector<SimilarityClass> right_eigen_classes(const QMatrix& m, double pairing_tol) {
  if (!m.square()) throw Error(Errc::NotSquare, "right_eigen_classes needs a square matrix");
  std::vector<Complex> pool = general_complex_eigenvalues(complex_adjoint(m));

  // Largest imaginary part first: the partner of z is the nearest conj(z).
  std::sort(pool.begin(), pool.end(), [](const Complex& a, const Complex& b) { return a.imag() > b.imag(); });
  std::vector<bool> used(pool.size(), false);
  std::vector<SimilarityClass> classes;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex target = std::conj(pool[i]);
    std::size_t best = pool.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(pool[j] - target);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == pool.size() || best_dist > pairing_tol) {
      throw Error(Errc::PairingFailure, "no conjugate partner within " + std::to_string(pairing_tol) +
                                            " for eigenvalue (" + std::to_string(pool[i].real()) + ", " +
                                            std::to_string(pool[i].imag()) + ")");
    }
    used[best] = true;
    const Complex z = pool[i], w = pool[best];
    classes.push_back({0.5 * (z.real() + w.real()), 0.5 * (std::abs(z.imag()) + std::abs(w.imag())), 1});
  }
  std::sort(classes.begin(), classes.end(), [](const SimilarityClass& a, const SimilarityClass& b) {
    return a.real_part != b.real_part ? a.real_part < b.real_part : a.imag_norm < b.imag_norm;
  });
  for (auto& c : classes) {
    int count = 0;
    for (const auto& o : classes) {
      if (std::abs(o.real_part - c.real_part) <= 1e-7 * (1.0 + std::abs(c.real_part)) &&
          std::abs(o.imag_norm - c.imag_norm) <= 1e-7 * (1.0 + c.imag_norm)) {
        ++count;
      }
    }
    c.multiplicity = count;
  }
  return classes;
}

std::vector<int> cluster_sizes(const std::vector<double>& ascending, double rel_gap) {
  std::vector<int> sizes;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    if (i > 0 && ascending[i] - ascending[i - 1] <= rel_gap * (1.0 + std::abs(ascending[i]))) {
      ++sizes.back();
    } else {
      sizes.push_back(1);
    }
  }
  return sizes;
}

std::size_t HermitianEigen::cluster_of(std::size_t j) const {
  if (j >= values.size()) throw Error(Errc::IndexOutOfRange, "eigen index " + std::to_string(j));
  std::size_t start = 0;
  for (std::size_t c = 0; c < multiplicities.size(); ++c) {
    start += static_cast<std::size_t>(multiplicities[c]);
    if (j < start) return c;
  }
  return multiplicities.size() - 1;
}

HermitianEigen hermitian_right_eigen(const QMatrix& s) {
  if (!s.square()) throw Error(Errc::NotSquare, "hermitian_right_eigen needs a square matrix");
  const double scale = std::max(1.0, max_entry_norm(s));
  if (hermitian_deviation(s) > 1e-10 * scale) {
    throw Error(Errc::NotHermitian, "matrix is not Hermitian within 1e-10");
  }
  const std::size_t n = s.rows();
  const ComplexHermitianEigen ce = hermitian_complex_eigen(complex_adjoint(s));

  // The 2n complex eigenvalues come in equal pairs; each run of 2l equal
  // values spans an l-dimensional right H-subspace.
  const std::vector<int> runs = cluster_sizes(ce.values);
  HermitianEigen out;
  out.basis.ambient_dim = n;
  std::size_t offset = 0;
  for (int run : runs) {
    if (run % 2 != 0) {
      throw Error(Errc::ReconstructionFailure, "complex eigenvalue cluster of odd size " + std::to_string(run));
    }
    const auto run_size = static_cast<std::size_t>(run);
    std::vector<QVector> candidates;
    for (std::size_t c = offset; c < offset + run_size; ++c) {
      const auto col = ce.vectors.column(c);
      candidates.push_back(quaternion_vector_from_complex(col));
    }
    // Pivoted Gram-Schmidt: always accept the candidate with the largest
    // residual against what is already in the basis.
    for (std::size_t pick = 0; pick < run_size / 2; ++pick) {
      std::size_t best = 0;
      double best_len = -1.0;
      QVector best_vec;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        QVector r = candidates[c];
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& b : out.basis.basis) r = r - b * hermitian_product(b, r);
        const double len = norm(r);
        if (len > best_len) {
          best_len = len;
          best = c;
          best_vec = std::move(r);
        }
      }
      if (best_len < 0.1) {
        throw Error(Errc::ReconstructionFailure, "complex eigenvectors do not span enough quaternionic directions");
      }
      out.basis.basis.push_back(best_vec * Quaternion(1.0 / best_len));
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    }
    for (std::size_t c = offset; c < offset + run_size; c += 2) {
      out.values.push_back(0.5 * (ce.values[c] + ce.values[c + 1]));
    }
    offset += run_size;
  }

  const double snorm = std::max(1.0, frobenius_norm(s));
  for (std::size_t j = 0; j < n; ++j) {
    const QVector& u = out.basis.basis[j];
    const double residual = norm(s * u - u * Quaternion(out.values[j]));
    if (residual > 1e-9 * snorm) {
      throw Error(Errc::ReconstructionFailure,
                  "eigenvector " + std::to_string(j) + " residual " + std::to_string(residual));
    }
  }

  const std::vector<int> mult = cluster_sizes(out.values);
  std::size_t at = 0;
  for (int l : mult) {
    double sum = 0.0;
    for (int r = 0; r < l; ++r) sum += out.values[at + static_cast<std::size_t>(r)];
    out.distinct.push_back(sum / l);
    out.multiplicities.push_back(l);
    at += static_cast<std::size_t>(l);
  }
  return out;
}

}  // namespace qla
