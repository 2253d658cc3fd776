// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "qla/ceig.hpp"
#include "qla/lefteig.hpp"
#include "qla/rayleigh.hpp"
#include "support.hpp"

using namespace qla;
using qla::testing::Gen;

namespace {

// Pinned tolerances.
constexpr double kExampleTol = 1e-8;
constexpr double kRuntimeLimit1 = 1.0;         // seconds
constexpr double kMomentSigmas = 3.0;
constexpr std::size_t kMomentSamples = 1'000'000;
constexpr double kRuntimeLimit4 = 120.0;       // seconds
constexpr double kGradientRelTol = 1e-6;
constexpr double kFdStep = 1e-5;
constexpr double kHessianTol = 1e-7;
constexpr double kMinMaxTol = 1e-8;
constexpr double kAttainTol = 1e-9;
constexpr std::size_t kMinMaxTrials = 200;
constexpr double kUnitNormTol = 1e-9;
constexpr double kMorphismTol = 1e-12;
constexpr double kConjugateTol = 1e-6;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_singular_with_residual(const QMatrix& m, const Quaternion& lambda, double tol) {
  const LeftMembership mem = left_membership(m, lambda);
  return mem.is_left && mem.eigenspace.dim() >= 1 && mem.max_residual <= tol;
}

QMatrix example_symplectic() {
  const double h = std::sqrt(2.0) / 2.0;
  return kJ * (QMatrix{{1.0, -1.0}, {1.0, 1.0}} * Quaternion(h));
}

void criterion_1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const QMatrix m{{0.0, kJ}, {kI, 0.0}};
  const auto cls = right_eigen_classes(m);
  const double elapsed = seconds_since(t0);
  const double h = 1.0 / std::sqrt(2.0);
  o.require(cls.size() == 2, "exactly two classes");
  if (cls.size() == 2) {
    o.require(std::abs(cls[0].real_part + h) <= kExampleTol, "Re = -1/sqrt2");
    o.require(std::abs(cls[1].real_part - h) <= kExampleTol, "Re = +1/sqrt2");
    for (const auto& c : cls) o.require(std::abs(c.norm() - 1.0) <= kExampleTol, "|q| = 1");
    o.detail << "Re " << cls[0].real_part << ", " << cls[1].real_part << "; |q| " << cls[0].norm() << ", "
             << cls[1].norm() << "; ";
  }
  o.require(elapsed < kRuntimeLimit1, "runtime < 1 s");
  o.detail << "runtime " << elapsed << " s";
}

void criterion_2(Outcome& o) {
  const QMatrix m{{0.0, Quaternion{1, 1, 0, 0}}, {Quaternion{1, -1, 0, 0}, 0.0}};
  const LeftSpectrum s = left_eigs_2x2(m);
  o.require(s.kind == LeftSpectrum::Kind::Finite && !s.family, "no infinite family");
  o.require(s.finite_values.size() == 2, "exactly two values");
  const double r2 = std::sqrt(2.0);
  std::vector<double> targets{-r2, r2};
  for (const auto& v : s.finite_values) {
    o.detail << to_string(v) << " ";
    const bool hit = std::any_of(targets.begin(), targets.end(),
                                 [&](double t) { return norm(v - Quaternion(t)) <= kExampleTol; });
    o.require(hit, "value equals +-sqrt2");
  }
  if (s.finite_values.size() == 2) {
    o.require(norm(s.finite_values[0] - s.finite_values[1]) > 1.0, "values distinct");
  }
}

void criterion_3(Outcome& o) {
  const QMatrix m{{0.0, kI}, {-kI, 0.0}};
  const auto cls = hermitian_2x2_classify(m);
  o.require(std::abs(cls.real_eigs[0] + 1.0) <= kExampleTol && std::abs(cls.real_eigs[1] - 1.0) <= kExampleTol,
            "real eigenvalues +-1");
  const LeftSpectrum s = left_eigs_2x2(m);
  o.require(s.kind == LeftSpectrum::Kind::Infinite && s.family.has_value(), "infinite family");
  o.require(cls.nonreal.has_value(), "classification finds the family");
  if (!s.family) return;
  std::size_t checked = 0;
  for (const Quaternion& omega : family_sample_directions()) {
    const Quaternion lambda = kI * omega;
    const Quaternion member = s.family->member(omega);
    o.require(std::abs(member.x) <= 1e-12 && std::abs(norm(member) - 1.0) <= 1e-12,
              "solver family member lies on t^2+y^2+z^2=1");
    o.require(is_singular_with_residual(m, lambda, kExampleTol), "dim V(i w) >= 1 with residual <= 1e-8");
    o.require(lambda.w >= -1.0 - kExampleTol && lambda.w <= 1.0 + kExampleTol, "Re(lambda) in [-1, 1]");
    o.require(std::abs(norm(lambda) - 1.0) <= kExampleTol, "|lambda| = 1");
    ++checked;
  }
  o.detail << "real eigs " << cls.real_eigs[0] << ", " << cls.real_eigs[1] << "; " << checked
           << " sampled members lambda = i w verified";
}

void criterion_4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(4004);
  std::size_t within = 0;
  double worst_sigma = 0.0;
  for (int m = 0; m < 10; ++m) {
    const std::size_t n = 2 + static_cast<std::size_t>(m % 3);
    const QMatrix s = testing::random_hermitian(g, n);
    const MomentReport rep = moments(s, kMomentSamples, 5000 + static_cast<std::uint64_t>(m));
    const double z_mean = std::abs(rep.mean_estimate - rep.exact_mean) / rep.stderr_mean;
    const double z_var = std::abs(rep.second_central_estimate - rep.exact_second_central) / rep.stderr_second_central;
    worst_sigma = std::max({worst_sigma, z_mean, z_var});
    const bool ok = rep.within(kMomentSigmas);
    o.require(ok, "matrix " + std::to_string(m) + " moments within 3 stderr");
    within += ok ? 1 : 0;
  }
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto c = sphere_coordinate_moments(n, kMomentSamples, 6000 + n);
    const double nn = static_cast<double>(c.dim);
    const double z4 = std::abs(c.u1_4 - 3.0 / (nn * (nn + 2.0))) / c.u1_4_stderr;
    const double zc = std::abs(c.u1u2_sq - 1.0 / (nn * (nn + 2.0))) / c.u1u2_sq_stderr;
    worst_sigma = std::max({worst_sigma, z4, zc});
    o.require(z4 <= kMomentSigmas, "u1^4 moment, n=" + std::to_string(n));
    o.require(zc <= kMomentSigmas, "u1^2 u2^2 moment, n=" + std::to_string(n));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kRuntimeLimit4, "runtime < 2 min");
  o.detail << within << "/10 matrices within 3 stderr; worst deviation " << worst_sigma << " stderr; runtime "
           << elapsed << " s";
}

void criterion_5(Outcome& o) {
  Gen g(5005);
  double worst_grad = 0.0, worst_hess = 0.0;
  std::size_t index_checks = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    QMatrix s = testing::random_hermitian(g, n);
    if (t % 10 == 9) {
      // Repeated eigenvalues exercise the multiplicity count.
      const std::vector<Quaternion> d{2.0, -1.0, 2.0, -1.0};
      const QMatrix p = testing::random_symplectic(g, n);
      s = p * QMatrix::diagonal(std::span<const Quaternion>(d.data(), n)) * adjoint(p);
    }
    const QVector v = normalized(testing::random_vector(g, n));
    const QVector grad = gradient(s, v);
    // Reassemble the gradient from sphere-restricted central differences.
    QVector fd(n);
    for (const auto& e : tangent_basis(v)) {
      const double fp = rayleigh_quotient(s, normalized(v + e * Quaternion(kFdStep)));
      const double fm = rayleigh_quotient(s, normalized(v - e * Quaternion(kFdStep)));
      fd = fd + e * Quaternion((fp - fm) / (2.0 * kFdStep));
    }
    const double rel = norm(fd - grad) / std::max(norm(grad), 1e-300);
    worst_grad = std::max(worst_grad, rel);
    o.require(rel <= kGradientRelTol, "gradient finite difference");

    const HermitianEigen e = hermitian_right_eigen(s);
    for (std::size_t j = 0; j < n; ++j) {
      const CriticalReport rep = critical_report(s, e.basis.basis[j]);
      o.require(rep.critical, "eigenvector is critical");
      std::vector<double> oracle;
      for (double tk : e.values) {
        for (int c = 0; c < 4; ++c) oracle.push_back(2.0 * (tk - e.values[j]));
      }
      // One zero belongs to the normal direction v itself.
      oracle.erase(std::min_element(oracle.begin(), oracle.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); }));
      std::sort(oracle.begin(), oracle.end());
      o.require(rep.hessian_eigs.size() == oracle.size(), "4n-1 Hessian eigenvalues");
      if (rep.hessian_eigs.size() == oracle.size()) {
        for (std::size_t i = 0; i < oracle.size(); ++i) {
          worst_hess = std::max(worst_hess, std::abs(rep.hessian_eigs[i] - oracle[i]));
        }
      }
      int below = 0;
      for (std::size_t c = 0; c < e.distinct.size(); ++c) {
        if (c < e.cluster_of(j)) below += e.multiplicities[c];
      }
      o.require(rep.index_quaternionic == below, "quaternionic index = sum of l_i below");
      o.require(rep.index == 4 * below, "real index = 4 sum of l_i below");
      ++index_checks;
    }
  }
  o.require(worst_hess <= kHessianTol, "Hessian eigenvalues within 1e-7");
  o.detail << "max gradient rel err " << worst_grad << "; max Hessian eig err " << worst_hess << "; " << index_checks
           << " critical points indexed (quaternionic and real units)";
}

void criterion_6(Outcome& o) {
  Gen g(6006);
  const QMatrix s = testing::random_hermitian(g, 4);
  std::size_t violations = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    const MinMaxReport rep = minmax_verify(s, k, kMinMaxTrials, 7000 + k, kMinMaxTol, kAttainTol);
    violations += rep.violations;
    o.require(rep.violations == 0, "k=" + std::to_string(k) + " zero violations");
    o.require(rep.attained, "k=" + std::to_string(k) + " bounds attained at eigenbasis subspaces");
    o.detail << "k=" << k << ": min M_E - t_k = " << rep.min_max_value - rep.t_k
             << ", t_{n-k+1} - max m_E = " << rep.t_upper - rep.max_min_value << "; ";
  }
  o.detail << violations << " violations over " << 4 * kMinMaxTrials << " subspaces";
}

void criterion_7(Outcome& o) {
  const QMatrix blk{{0.0, kI}, {-kI, 0.0}};
  const QMatrix s = direct_sum(blk, blk);
  const BoundReport rep = hermitian_bound_check(s, kJ);
  o.require(rep.eig_dim == 2, "dim V(j) = 2");
  const HermitianEigen e = hermitian_right_eigen(s);
  const std::vector<double> expected{-1.0, -1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i) o.require(std::abs(e.values[i] - expected[i]) <= kExampleTol, "t = (-1,-1,1,1)");
  o.require(std::abs(rep.lower - e.values[1]) <= 1e-12 && std::abs(rep.upper - e.values[2]) <= 1e-12,
            "bounds are t_2, t_3");
  o.require(rep.real_part == 0.0 && rep.all_hold(), "t_2 <= 0 <= t_3");
  const LeftSpectrum fam = left_eigs_2x2(blk);
  std::size_t passed = 0;
  for (const auto& lambda : fam.family->samples()) {
    const BoundReport r = hermitian_bound_check(s, lambda);
    o.require(r.all_hold(), "family member passes BoundReport");
    passed += r.all_hold() ? 1 : 0;
  }
  o.detail << "dim V(j) = " << rep.eig_dim << ", t_2 = " << rep.lower << " <= 0 <= t_3 = " << rep.upper << "; "
           << passed << "/16 family members pass";
}

void criterion_8(Outcome& o) {
  const QMatrix a = example_symplectic();
  const auto rot = symplectic_2x2_detect(a);
  o.require(rot.has_value(), "rotation form detected");
  if (!rot) return;
  o.require(norm(rot->r - kJ) <= kExampleTol && std::abs(rot->theta - std::numbers::pi / 4.0) <= kExampleTol,
            "(r, theta) = (j, pi/4)");
  const auto cls = right_eigen_classes(a);
  const double h = std::sqrt(2.0) / 2.0;
  o.require(cls.size() == 2 && std::abs(cls[0].real_part + h) <= kExampleTol &&
                std::abs(cls[1].real_part - h) <= kExampleTol,
            "right real parts +-sqrt2/2");
  o.require(hermitian_part_classes(a).agree, "hermitian_part_classes agree");
  const auto sp = symplectic_2x2_spectra(rot->r, rot->theta);
  o.require(sp.cross_check_ok, "formula classes match the eigensolver");
  const QMatrix herm = (a + adjoint(a)) * Quaternion(0.5);
  std::size_t passed = 0, not_left_of_s = 0;
  for (const auto& lambda : sp.left_family.samples()) {
    const BoundReport r = symplectic_bound_check(a, lambda);
    const bool ok = r.all_hold() && std::abs(norm(lambda) - 1.0) <= kUnitNormTol;
    o.require(ok, "family member passes symplectic_bound_check with |lambda| = 1");
    passed += ok ? 1 : 0;
    if (!left_membership(herm, lambda).is_left) ++not_left_of_s;
  }
  o.require(not_left_of_s >= 1, "some lambda is not a left eigenvalue of (A+A*)/2");
  o.detail << "r = " << to_string(rot->r) << ", theta = " << rot->theta << "; " << passed << "/16 members pass; "
           << not_left_of_s << "/16 are not left eigenvalues of (A+A*)/2";
}

void criterion_9(Outcome& o) {
  Gen g(9009);
  double worst_mul = 0.0, worst_adj = 0.0, worst_conj = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 5);
    const QMatrix m = testing::random_matrix(g, n, n);
    const QMatrix p = testing::random_matrix(g, n, n);
    worst_mul = std::max(worst_mul, max_abs_difference(complex_adjoint(m * p), complex_adjoint(m) * complex_adjoint(p)));
    worst_adj = std::max(worst_adj, max_abs_difference(complex_adjoint(adjoint(m)), adjoint(complex_adjoint(m))));
    const auto eig = general_complex_eigenvalues(complex_adjoint(m));
    for (const auto& z : eig) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& w : eig) best = std::min(best, std::abs(w - std::conj(z)));
      worst_conj = std::max(worst_conj, best);
    }
  }
  o.require(worst_mul <= kMorphismTol, "c(MN) = c(M)c(N)");
  o.require(worst_adj <= kMorphismTol, "c(M*) = c(M)*");
  o.require(worst_conj <= kConjugateTol, "conjugate-closed spectrum");
  o.detail << "max |c(MN)-c(M)c(N)| " << worst_mul << ", max |c(M*)-c(M)*| " << worst_adj
           << ", max conjugate distance " << worst_conj;
}

int exit_status(const std::string& command) {
  const int raw = std::system(command.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

void criterion_10(Outcome& o) {
  const std::string cli = QLA_CLI_PATH;
  const std::string dir = QLA_FIXTURE_DIR;
  auto check = [&](const std::string& fixture, int expected) {
    const int code = exit_status("\"" + cli + "\" check \"" + dir + "/" + fixture + "\" > /dev/null 2>&1");
    o.detail << fixture << " -> " << code << "; ";
    o.require(code == expected, fixture + " exits " + std::to_string(expected));
  };
  check("right_example.txt", 0);
  check("finite_left.txt", 0);
  check("left_family.txt", 0);
  check("symplectic_rotation.txt", 0);
  check("corrupted_hermitian.txt", 1);
  check("malformed.txt", 2);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"1 right-eigenvalue example", criterion_1},
      {"2 finite left spectrum", criterion_2},
      {"3 infinite left family", criterion_3},
      {"4 sphere moments", criterion_4},
      {"5 gradient and Hessian", criterion_5},
      {"6 min-max", criterion_6},
      {"7 left-right bound at n=4", criterion_7},
      {"8 symplectic suite", criterion_8},
      {"9 algebra morphism", criterion_9},
      {"10 CLI contract", criterion_10},
  };
  std::size_t failures = 0;
  for (const auto& [name, body] : criteria) {
    Outcome o;
    o.detail.precision(6);
    try {
      body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria pass" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
