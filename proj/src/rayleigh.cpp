#include "qla/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>
#include <thread>

#include "qla/matrix_io.hpp"

namespace qla {

namespace {

void require_hermitian(const QMatrix& s) {
  if (!s.square()) throw Error(Errc::NotSquare, "Rayleigh quotient needs a square matrix");
  if (hermitian_deviation(s) > 1e-10 * std::max(1.0, max_entry_norm(s))) {
    throw Error(Errc::NotHermitian, "Rayleigh quotient needs a Hermitian matrix");
  }
}

void require_nonzero(const QVector& v) {
  if (!(norm2(v) > 0.0)) throw Error(Errc::ZeroVector, "vector must be nonzero");
}

// v* S v without the Hermitian checks.
Quaternion quadratic_form(const QMatrix& s, const QVector& v) {
  Quaternion acc;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    Quaternion row;
    for (std::size_t j = 0; j < s.cols(); ++j) row += s(i, j) * v[j];
    acc += conj(v[i]) * row;
  }
  return acc;
}

double criticality_threshold(const QMatrix& s) { return 1e-8 * (1.0 + frobenius_norm(s)); }

struct Welford {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  void merge(const Welford& o) {
    if (o.count == 0) return;
    const std::size_t total = count + o.count;
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / static_cast<double>(total);
    count = total;
  }
  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double rayleigh_quotient(const QMatrix& s, const QVector& v) {
  require_hermitian(s);
  if (v.size() != s.cols()) throw Error(Errc::DimensionMismatch, "vector length does not match matrix");
  require_nonzero(v);
  const double len2 = norm2(v);
  const Quaternion q = quadratic_form(s, v);
  const double allowed =
      (1e-12 * frobenius_norm(s) + static_cast<double>(s.rows()) * hermitian_deviation(s)) * len2;
  if (imag_norm(q) > allowed) {
    throw Error(Errc::NotHermitian, "v* S v has imaginary part " + std::to_string(imag_norm(q)));
  }
  return q.w / len2;
}

double weighted_mean_oracle(const std::vector<double>& t, const std::vector<Quaternion>& x) {
  if (t.size() != x.size()) throw Error(Errc::DimensionMismatch, "weights and values differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    num += t[j] * norm2(x[j]);
    den += norm2(x[j]);
  }
  if (!(den > 0.0)) throw Error(Errc::ZeroVector, "all coordinates are zero");
  return num / den;
}

QVector gradient(const QMatrix& s, const QVector& v) {
  const double r = rayleigh_quotient(s, v);
  const double scale = 2.0 / norm2(v);
  return (s * v - v * Quaternion(r)) * Quaternion(scale);
}

QVector hessian_apply(const QMatrix& s, const QVector& v, const QVector& w) {
  const QVector g = gradient(s, v);
  if (norm(g) > criticality_threshold(s)) {
    throw Error(Errc::NotCritical, "gradient norm " + std::to_string(norm(g)) + " at v");
  }
  if (w.size() != v.size()) throw Error(Errc::DimensionMismatch, "tangent vector length");
  if (std::abs(scalar_product(v, w)) > 1e-10 * std::max(1.0, norm(v) * norm(w))) {
    throw Error(Errc::NotTangent, "w is not tangent to the sphere at v");
  }
  const double t = rayleigh_quotient(s, v);
  return (s * w - w * Quaternion(t)) * Quaternion(2.0 / norm2(v));
}

std::vector<QVector> tangent_basis(const QVector& v) {
  require_nonzero(v);
  const std::size_t n = v.size();
  const std::size_t dim = 4 * n;
  std::vector<double> u(dim);
  const double len = norm(v);
  for (std::size_t i = 0; i < n; ++i) {
    u[4 * i] = v[i].w / len;
    u[4 * i + 1] = v[i].x / len;
    u[4 * i + 2] = v[i].y / len;
    u[4 * i + 3] = v[i].z / len;
  }
  // Householder reflection H = I - 2 w w^T with H u = +-e_1; its remaining
  // columns span the orthogonal complement of u.
  std::vector<double> w = u;
  const double sign = u[0] >= 0.0 ? 1.0 : -1.0;
  w[0] += sign;
  double wn = 0.0;
  for (double x : w) wn += x * x;
  wn = std::sqrt(wn);
  for (double& x : w) x /= wn;

  std::vector<QVector> basis;
  basis.reserve(dim - 1);
  for (std::size_t c = 1; c < dim; ++c) {
    QVector b(n);
    for (std::size_t r = 0; r < dim; ++r) {
      const double h = (r == c ? 1.0 : 0.0) - 2.0 * w[r] * w[c];
      Quaternion& q = b[r / 4];
      switch (r % 4) {
        case 0: q.w = h; break;
        case 1: q.x = h; break;
        case 2: q.y = h; break;
        default: q.z = h; break;
      }
    }
    basis.push_back(std::move(b));
  }
  return basis;
}

CriticalIndex critical_index(const QMatrix& s, std::size_t j) {
  const HermitianEigen eig = hermitian_right_eigen(s);
  if (j >= eig.values.size()) {
    throw Error(Errc::IndexOutOfRange, "eigen index " + std::to_string(j) + " out of range");
  }
  const std::size_t cluster = eig.cluster_of(j);
  CriticalIndex idx;
  for (std::size_t c = 0; c < cluster; ++c) idx.quaternionic += eig.multiplicities[c];
  idx.real = 4 * idx.quaternionic;
  return idx;
}

CriticalReport critical_report(const QMatrix& s, const QVector& v) {
  CriticalReport rep;
  rep.point = normalized(v);
  rep.value = rayleigh_quotient(s, rep.point);
  rep.gradient_norm = norm(gradient(s, rep.point));
  rep.critical = rep.gradient_norm <= criticality_threshold(s);
  if (!rep.critical) return rep;

  const std::vector<QVector> basis = tangent_basis(rep.point);
  const std::size_t m = basis.size();
  std::vector<QVector> images;
  images.reserve(m);
  for (const auto& b : basis) images.push_back(hessian_apply(s, rep.point, b));
  CMatrix h(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) h(a, b) = scalar_product(basis[a], images[b]);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double sym = 0.5 * (h(a, b).real() + h(b, a).real());
      h(a, b) = sym;
      h(b, a) = sym;
    }
  rep.hessian_eigs = hermitian_complex_eigen(h).values;
  const double zero = 1e-9 * (1.0 + frobenius_norm(s));
  rep.index = static_cast<int>(
      std::count_if(rep.hessian_eigs.begin(), rep.hessian_eigs.end(), [&](double mu) { return mu < -zero; }));
  rep.index_quaternionic = rep.index / 4;
  return rep;
}

SubspaceExtremes subspace_extremes(const QMatrix& s, const Subspace& e) {
  if (e.dim() == 0) throw Error(Errc::EmptySubspace, "subspace has dimension 0");
  require_hermitian(s);
  const QMatrix b = e.basis_matrix();
  QMatrix t = adjoint(b) * s * b;
  t = (t + adjoint(t)) * Quaternion(0.5);
  const auto values = hermitian_complex_eigen(complex_adjoint(t)).values;
  return {values.front(), values.back()};
}

MinMaxReport minmax_verify(const QMatrix& s, std::size_t k, std::size_t trials, std::uint64_t seed, double tol,
                           double attain_tol) {
  const HermitianEigen eig = hermitian_right_eigen(s);
  const std::size_t n = eig.values.size();
  if (k < 1 || k > n) throw Error(Errc::IndexOutOfRange, "k must lie in [1, n]");

  MinMaxReport rep;
  rep.k = k;
  rep.trials = trials;
  rep.tol = tol;
  rep.t_k = eig.values[k - 1];
  rep.t_upper = eig.values[n - k];
  rep.min_max_value = std::numeric_limits<double>::infinity();
  rep.max_min_value = -std::numeric_limits<double>::infinity();

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Subspace e;
    do {
      std::vector<QVector> vs(k, QVector(n));
      for (auto& v : vs)
        for (auto& q : v) q = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
      e = gram_schmidt(n, vs);
    } while (e.dim() < k);
    const SubspaceExtremes x = subspace_extremes(s, e);
    rep.min_max_value = std::min(rep.min_max_value, x.max);
    rep.max_min_value = std::max(rep.max_min_value, x.min);
    if (x.max < rep.t_k - tol || x.min > rep.t_upper + tol) ++rep.violations;
  }

  const auto& u = eig.basis.basis;
  const Subspace low{n, std::vector<QVector>(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k))};
  const Subspace high{n, std::vector<QVector>(u.end() - static_cast<std::ptrdiff_t>(k), u.end())};
  rep.attained_max = subspace_extremes(s, low).max;
  rep.attained_min = subspace_extremes(s, high).min;
  rep.attained = std::abs(rep.attained_max - rep.t_k) <= attain_tol &&
                 std::abs(rep.attained_min - rep.t_upper) <= attain_tol;
  return rep;
}

QVector sphere_sample(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss;
  QVector v(n);
  double len2 = 0.0;
  do {
    for (auto& q : v) q = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    len2 = norm2(v);
  } while (!(len2 > 0.0));
  return v * Quaternion(1.0 / std::sqrt(len2));
}

bool MomentReport::within(double sigmas) const {
  return std::abs(mean_estimate - exact_mean) <= sigmas * stderr_mean &&
         std::abs(second_central_estimate - exact_second_central) <= sigmas * stderr_second_central;
}

MomentReport moments(const QMatrix& s, std::size_t samples, std::uint64_t seed, unsigned workers) {
  require_hermitian(s);
  const std::size_t n = s.rows();
  const HermitianEigen eig = hermitian_right_eigen(s);

  MomentReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  double mu = 0.0;
  for (double t : eig.values) mu += t;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double t : eig.values) var += (t - mu) * (t - mu);
  var /= static_cast<double>(n);
  rep.exact_mean = mu;
  rep.exact_second_central = var / static_cast<double>(2 * n + 1);

  // Samples are centred on Trace(S)/n from the diagonal, independent of the
  // eigen-decomposition used for the exact targets.
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += s(i, i).w;
  const double centre = trace / static_cast<double>(n);

  constexpr std::size_t kShards = 16;
  std::vector<Welford> h_acc(kShards), d_acc(kShards);
  auto run_shard = [&](std::size_t shard) {
    const std::size_t count = samples / kShards + (shard < samples % kShards ? 1 : 0);
    Rng rng = make_rng(seed, shard + 1);
    for (std::size_t i = 0; i < count; ++i) {
      const QVector v = sphere_sample(n, rng);
      const double h = quadratic_form(s, v).w;
      h_acc[shard].add(h);
      d_acc[shard].add((h - centre) * (h - centre));
    }
  };
  unsigned threads = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, kShards);
  if (threads <= 1) {
    for (std::size_t shard = 0; shard < kShards; ++shard) run_shard(shard);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t shard = t; shard < kShards; shard += threads) run_shard(shard);
      });
    }
    for (auto& th : pool) th.join();
  }

  Welford h_all, d_all;
  for (std::size_t shard = 0; shard < kShards; ++shard) {
    h_all.merge(h_acc[shard]);
    d_all.merge(d_acc[shard]);
  }
  rep.mean_estimate = h_all.mean;
  rep.stderr_mean = h_all.stderr_of_mean();
  rep.second_central_estimate = d_all.mean;
  rep.stderr_second_central = d_all.stderr_of_mean();
  return rep;
}

SphereCoordinateMoments sphere_coordinate_moments(std::size_t n, std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  Welford sq, fourth, cross;
  for (std::size_t i = 0; i < samples; ++i) {
    const QVector v = sphere_sample(n, rng);
    const double a = v[0].w, b = v[0].x;
    sq.add(a * a);
    fourth.add(a * a * a * a);
    cross.add(a * a * b * b);
  }
  return {4 * n,        samples,      sq.mean,    sq.stderr_of_mean(), fourth.mean, fourth.stderr_of_mean(),
          cross.mean,   cross.stderr_of_mean()};
}

nlohmann::json to_json(const CriticalReport& r) {
  return {{"point", to_json(r.point)},
          {"value", r.value},
          {"gradient_norm", r.gradient_norm},
          {"critical", r.critical},
          {"index", r.index},
          {"index_quaternionic", r.index_quaternionic},
          {"hessian_eigs", r.hessian_eigs}};
}

nlohmann::json to_json(const MomentReport& r) {
  return {{"n", r.n},
          {"samples", r.samples},
          {"seed", r.seed},
          {"mean_estimate", r.mean_estimate},
          {"second_central_estimate", r.second_central_estimate},
          {"exact_mean", r.exact_mean},
          {"exact_second_central", r.exact_second_central},
          {"stderr_mean", r.stderr_mean},
          {"stderr_second_central", r.stderr_second_central}};
}

nlohmann::json to_json(const MinMaxReport& r) {
  return {{"k", r.k},
          {"trials", r.trials},
          {"tol", r.tol},
          {"t_k", r.t_k},
          {"t_n_minus_k_plus_1", r.t_upper},
          {"min_of_max", r.min_max_value},
          {"max_of_min", r.max_min_value},
          {"attained_max", r.attained_max},
          {"attained_min", r.attained_min},
          {"violations", r.violations},
          {"attained", r.attained}};
}

}  // namespace qla
