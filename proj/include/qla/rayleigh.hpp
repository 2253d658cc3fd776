#pragma once

// Rayleigh quotient R(S, v) = Re(v* S v) / |v|^2 of a Hermitian quaternionic
// matrix, its gradient and Hessian on the sphere S^{4n-1}, the subspace
// min-max characterisation of the eigenvalues, and sphere moments.
//
// Random numbers: std::mt19937_64 seeded through std::seed_seq, Gaussians from
// std::normal_distribution. Streams are reproducible within one standard
// library build, not across toolchains; statistical checks never depend on
// exact sample values.

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "qla/ceig.hpp"
#include "qla/qmatrix.hpp"

namespace qla {

using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double rayleigh_quotient(const QMatrix& s, const QVector& v);

/// sum t_j |x_j|^2 / sum |x_j|^2.
double weighted_mean_oracle(const std::vector<double>& t, const std::vector<Quaternion>& x);

/// G_v = (2/|v|^2) (S v - v R(S, v)).
QVector gradient(const QMatrix& s, const QVector& v);

/// H_v(w) = (2/|v|^2) (S - tI) w at a critical point v, tangent w.
/// Throws NotCritical when |G_v| > 1e-8 (1 + |S|), NotTangent when
/// |Re<v, w>| > 1e-10 |v||w|.
QVector hessian_apply(const QMatrix& s, const QVector& v, const QVector& w);

/// Orthonormal basis (real scalar product) of the tangent space to the
/// sphere at v, as 4n-1 vectors of H^n.
std::vector<QVector> tangent_basis(const QVector& v);

struct CriticalIndex {
  int quaternionic = 0;  // sum_{i<j} l_i
  int real = 0;          // negative Hessian eigenvalues on the real tangent space = 4 sum l_i
};

/// Index of t_j (j is 0-based into the ascending eigenvalue list).
CriticalIndex critical_index(const QMatrix& s, std::size_t j);

struct CriticalReport {
  QVector point;  // unit
  double value = 0.0;
  double gradient_norm = 0.0;
  bool critical = false;
  int index = 0;               // negative tangent Hessian eigenvalues (real count)
  int index_quaternionic = 0;  // index / 4, the count in quaternionic dimensions
  std::vector<double> hessian_eigs;  // ascending, 4n-1 values; empty when not critical
};

/// Evaluates R, |G| and, at critical points, the tangent-space Hessian.
CriticalReport critical_report(const QMatrix& s, const QVector& v);

struct SubspaceExtremes {
  double min = 0.0;  // m_E
  double max = 0.0;  // M_E
};

/// Exact min / max of R over E via the compression B* S B.
SubspaceExtremes subspace_extremes(const QMatrix& s, const Subspace& e);

struct MinMaxReport {
  std::size_t k = 0;
  std::size_t trials = 0;
  double tol = 0.0;
  double t_k = 0.0;          // lower bound for every M_E
  double t_upper = 0.0;      // t_{n-k+1}, upper bound for every m_E
  double min_max_value = 0.0;  // smallest observed M_E
  double max_min_value = 0.0;  // largest observed m_E
  double attained_max = 0.0;   // M_E at span(u_1..u_k)
  double attained_min = 0.0;   // m_E at span(u_{n-k+1}..u_n)
  std::size_t violations = 0;
  bool attained = false;  // both equalities within tol

  bool ok() const { return violations == 0 && attained; }
};

/// Samples `trials` random k-dimensional subspaces and checks
/// M_E >= t_k - tol and m_E <= t_{n-k+1} + tol; the eigenbasis subspaces
/// must attain both bounds within attain_tol.
MinMaxReport minmax_verify(const QMatrix& s, std::size_t k, std::size_t trials, std::uint64_t seed,
                           double tol = 1e-8, double attain_tol = 1e-9);

/// Uniform point of S^{4n-1}.
QVector sphere_sample(std::size_t n, Rng& rng);

struct MomentReport {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double mean_estimate = 0.0;
  double second_central_estimate = 0.0;
  double exact_mean = 0.0;
  double exact_second_central = 0.0;
  double stderr_mean = 0.0;
  double stderr_second_central = 0.0;

  bool within(double sigmas) const;
};

/// Monte-Carlo mean and second central moment of v* S v on the sphere.
/// Samples are split into a fixed number of shards with sub-seeds derived
/// from (seed, shard); shards run on up to `workers` threads and merge in
/// shard order, so the result does not depend on the worker count.
MomentReport moments(const QMatrix& s, std::size_t samples, std::uint64_t seed, unsigned workers = 0);

struct SphereCoordinateMoments {
  std::size_t dim = 0;  // N = 4n
  std::size_t samples = 0;
  double u1_sq = 0.0, u1_sq_stderr = 0.0;
  double u1_4 = 0.0, u1_4_stderr = 0.0;
  double u1u2_sq = 0.0, u1u2_sq_stderr = 0.0;
};

/// Raw coordinate moments <u_1^2>, <u_1^4>, <u_1^2 u_2^2> on S^{4n-1}.
SphereCoordinateMoments sphere_coordinate_moments(std::size_t n, std::size_t samples, std::uint64_t seed);

nlohmann::json to_json(const CriticalReport& r);
nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const MinMaxReport& r);

}  // namespace qla
