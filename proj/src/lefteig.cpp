#include "qla/lefteig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qla/matrix_io.hpp"
#include "qla/rayleigh.hpp"

namespace qla {

namespace {

void require_2x2(const QMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw Error(Errc::NotTwoByTwo, "expected a 2x2 matrix, got " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()));
  }
}

bool nearly_real(const Quaternion& q, double rel) { return imag_norm(q) <= rel * (1.0 + norm(q)); }

using Vec4 = std::array<double, 4>;

Vec4 as_array(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
Quaternion from_array(const Vec4& a) { return {a[0], a[1], a[2], a[3]}; }

// Solves the 4x4 system a x = b in place; false if singular.
bool solve4(std::array<Vec4, 4> a, Vec4 b, Vec4& x) {
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = 4; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return true;
}

Quaternion quadratic_residual(const Quaternion& x, const Quaternion& a1, const Quaternion& a0) {
  return x * x + a1 * x + a0;
}

// Damped Newton from one start; returns the final iterate.
Quaternion newton(Quaternion x, const Quaternion& a1, const Quaternion& a0, double stop) {
  Quaternion f = quadratic_residual(x, a1, a0);
  for (int iter = 0; iter < 200 && norm(f) > stop; ++iter) {
    // Derivative of x^2 + a1 x along h is x h + h x + a1 h.
    std::array<Vec4, 4> jac{};
    const std::array<Quaternion, 4> units{kOne, kI, kJ, kK};
    for (std::size_t c = 0; c < 4; ++c) {
      const Vec4 col = as_array(x * units[c] + units[c] * x + a1 * units[c]);
      for (std::size_t r = 0; r < 4; ++r) jac[r][c] = col[r];
    }
    Vec4 step{};
    if (!solve4(jac, as_array(-f), step)) break;
    const Quaternion delta = from_array(step);
    double alpha = 1.0;
    Quaternion trial = x + delta;
    Quaternion ftrial = quadratic_residual(trial, a1, a0);
    while (norm(ftrial) >= norm(f) && alpha > 1e-6) {
      alpha *= 0.5;
      trial = x + delta * alpha;
      ftrial = quadratic_residual(trial, a1, a0);
    }
    if (norm(ftrial) >= norm(f)) break;
    x = trial;
    f = ftrial;
  }
  return x;
}

nlohmann::json quaternion_list(const std::vector<Quaternion>& qs) {
  auto out = nlohmann::json::array();
  for (const auto& q : qs) out.push_back(to_string(q));
  return out;
}

}  // namespace

const std::vector<Quaternion>& family_sample_directions() {
  static const std::vector<Quaternion> dirs = [] {
    std::vector<Quaternion> d{kI, -kI, kJ, -kJ, kK, -kK};
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    constexpr int kLattice = 10;
    for (int m = 0; m < kLattice; ++m) {
      const double z = 1.0 - (2.0 * m + 1.0) / kLattice;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * m;
      d.push_back({0.0, r * std::cos(phi), r * std::sin(phi), z});
    }
    return d;
  }();
  return dirs;
}

std::vector<Quaternion> LeftFamily::samples() const {
  std::vector<Quaternion> out;
  for (const auto& omega : family_sample_directions()) out.push_back(member(omega));
  return out;
}

std::vector<Quaternion> quaternion_quadratic_roots(const Quaternion& a1, const Quaternion& a0) {
  const double scale = 1.0 + norm(a1) + std::sqrt(norm(a0));
  const double certify = 1e-9 * std::max(1.0, scale * scale);
  const double stop = 1e-15 * std::max(1.0, scale * scale);

  struct Found {
    Quaternion x;
    double residual;
  };
  std::vector<Found> found;
  const std::array<double, 3> grid{-2.0, 0.0, 2.0};
  for (double w : grid)
    for (double x : grid)
      for (double y : grid)
        for (double z : grid) {
          const Quaternion root = newton(Quaternion{w, x, y, z} * scale, a1, a0, stop);
          const double res = norm(quadratic_residual(root, a1, a0));
          if (res > certify) continue;
          auto same = std::find_if(found.begin(), found.end(),
                                   [&](const Found& f) { return norm(f.x - root) <= 1e-6; });
          if (same == found.end()) {
            found.push_back({root, res});
          } else if (res < same->residual) {
            *same = {root, res};
          }
        }
  if (found.empty()) {
    throw Error(Errc::RootSolverFailure, "no certified root of x^2 + a1 x + a0 from any start");
  }
  std::vector<Quaternion> roots;
  for (const auto& f : found) roots.push_back(f.x);
  std::sort(roots.begin(), roots.end(), [](const Quaternion& p, const Quaternion& q) {
    return as_array(p) < as_array(q);
  });
  return roots;
}

LeftSpectrum left_eigs_2x2(const QMatrix& m) {
  require_2x2(m);
  const Quaternion a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double scale = std::max(1.0, max_entry_norm(m));
  LeftSpectrum out;
  if (norm(b) <= 1e-12 * scale || norm(c) <= 1e-12 * scale) {
    out.finite_values = {a, d};
    return out;
  }
  const Quaternion binv = inverse(b);
  const Quaternion a1 = binv * (a - d);
  const Quaternion a0 = -(binv * c);
  const bool real1 = nearly_real(a1, 1e-10);
  const bool real0 = nearly_real(a0, 1e-10);
  out.near_infinite = (!real1 || !real0) && nearly_real(a1, 1e-6) && nearly_real(a0, 1e-6);

  if (real1 && real0) {
    const double p = a1.w, q = a0.w;
    const double disc = p * p - 4.0 * q;
    if (disc < 0.0) {
      out.kind = LeftSpectrum::Kind::Infinite;
      out.family = LeftFamily{(a + d) * 0.5, b * 0.5, std::sqrt(-disc)};
      return out;
    }
    const double root = std::sqrt(disc);
    const double x1 = 0.5 * (-p - root), x2 = 0.5 * (-p + root);
    out.finite_values.push_back(a + b * x1);
    if (x2 != x1) out.finite_values.push_back(a + b * x2);
    return out;
  }
  for (const auto& x : quaternion_quadratic_roots(a1, a0)) out.finite_values.push_back(a + b * x);
  return out;
}

Hermitian2x2Classification hermitian_2x2_classify(const QMatrix& s, double tol) {
  require_2x2(s);
  const double scale = std::max(1.0, max_entry_norm(s));
  if (hermitian_deviation(s) > 1e-10 * scale) throw Error(Errc::NotHermitian, "2x2 matrix is not Hermitian");
  const double s1 = s(0, 0).w, s2 = s(1, 1).w;
  const Quaternion b = s(0, 1);
  const double mean = 0.5 * (s1 + s2);
  const double rad = std::hypot(0.5 * (s1 - s2), norm(b));
  Hermitian2x2Classification out;
  out.real_eigs = {mean - rad, mean + rad};
  const double thr = tol * scale;
  if (norm(b) > thr && std::abs(b.w) <= thr && std::abs(s1 - s2) <= thr) {
    out.nonreal = LeftFamily{Quaternion(mean), b, 1.0};
  }
  return out;
}

QMatrix rotation_form_matrix(const Quaternion& r, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{r * c, r * (-s)}, {r * s, r * c}};
}

std::optional<RotationForm> symplectic_2x2_detect(const QMatrix& a, double tol) {
  require_2x2(a);
  if (symplectic_deviation(a) > tol) throw Error(Errc::NotSymplectic, "2x2 matrix is not symplectic");
  if (norm(a(0, 0) - a(1, 1)) > tol || norm(a(1, 0) + a(0, 1)) > tol) return std::nullopt;
  const double sin_abs = norm(a(1, 0));
  if (sin_abs <= tol) return std::nullopt;
  const Quaternion r = a(1, 0) / sin_abs;
  const double cos_t = (conj(r) * a(0, 0)).w;
  if (norm(a(0, 0) - r * cos_t) > tol) return std::nullopt;
  return RotationForm{r, std::atan2(sin_abs, cos_t)};
}

Symplectic2x2Spectra symplectic_2x2_spectra(const Quaternion& r, double theta) {
  if (std::abs(norm(r) - 1.0) > 1e-9) throw Error(Errc::PreconditionNotMet, "r must be a unit quaternion");
  const double c = std::cos(theta), s = std::sin(theta);
  if (std::abs(s) <= 1e-12) throw Error(Errc::PreconditionNotMet, "sin(theta) must be nonzero");

  Symplectic2x2Spectra out;
  out.left_family = LeftFamily{r * c, r * s, 1.0};
  const auto solver = right_eigen_classes(rotation_form_matrix(r, theta));
  const double im = imag_norm(r);
  if (im <= 1e-12) {
    out.ambiguous_rho = true;
    out.right = {solver[0], solver[1]};
    out.cross_check_ok = true;
    return out;
  }
  const Quaternion rho = imag(r) / im;
  std::array<SimilarityClass, 2> cls{};
  for (int sign = 0; sign < 2; ++sign) {
    const Quaternion q = r * (Quaternion(c) + rho * (sign == 0 ? -s : s));
    cls[static_cast<std::size_t>(sign)] = {q.w, imag_norm(q), 1};
  }
  std::sort(cls.begin(), cls.end(), [](const SimilarityClass& x, const SimilarityClass& y) {
    return x.real_part != y.real_part ? x.real_part < y.real_part : x.imag_norm < y.imag_norm;
  });
  if (std::abs(cls[0].real_part - cls[1].real_part) <= 1e-7 && std::abs(cls[0].imag_norm - cls[1].imag_norm) <= 1e-7) {
    cls[0].multiplicity = cls[1].multiplicity = 2;
  }
  out.right = cls;
  out.cross_check_ok = true;
  for (std::size_t i = 0; i < 2; ++i) {
    if (std::abs(cls[i].real_part - solver[i].real_part) > 1e-8 ||
        std::abs(cls[i].imag_norm - solver[i].imag_norm) > 1e-8) {
      out.cross_check_ok = false;
    }
  }
  return out;
}

LeftMembership left_membership(const QMatrix& m, const Quaternion& lambda, double tol) {
  LeftMembership out;
  out.eigenspace = null_space(shift(m, lambda), tol);
  out.is_left = out.eigenspace.dim() >= 1;
  for (const auto& v : out.eigenspace.basis) {
    out.max_residual = std::max(out.max_residual, norm(m * v - lambda * v));
  }
  return out;
}

BoundReport hermitian_bound_check(const QMatrix& s, const Quaternion& lambda, double tol) {
  const double scale = std::max(1.0, max_entry_norm(s));
  if (!s.square() || hermitian_deviation(s) > 1e-10 * scale) {
    throw Error(Errc::NotHermitian, "bound check needs a Hermitian matrix");
  }
  const LeftMembership mem = left_membership(s, lambda);
  if (!mem.is_left) throw Error(Errc::NotLeftEigenvalue, to_string(lambda) + " is not a left eigenvalue");
  const HermitianEigen eig = hermitian_right_eigen(s);
  const std::size_t n = eig.values.size();
  const std::size_t k = mem.eigenspace.dim();

  BoundReport rep;
  rep.lambda = lambda;
  rep.eig_dim = k;
  rep.lower = eig.values[k - 1];
  rep.upper = eig.values[n - k];
  rep.real_part = lambda.w;
  rep.holds = rep.lower - tol <= rep.real_part && rep.real_part <= rep.upper + tol;
  for (const auto& v : mem.eigenspace.basis) {
    rep.max_rayleigh_deviation = std::max(rep.max_rayleigh_deviation, std::abs(rayleigh_quotient(s, v) - lambda.w));
  }
  rep.rayleigh_constant = rep.max_rayleigh_deviation <= 1e-9 * scale;
  for (double t : eig.values) rep.norm_bound = std::max(rep.norm_bound, std::abs(t));
  rep.norm_ok = norm(lambda) <= rep.norm_bound + tol;
  return rep;
}

MultiplicityReport multiplicity_corollary_check(const QMatrix& s, const Quaternion& lambda, double tol) {
  const BoundReport bound = hermitian_bound_check(s, lambda, tol);
  const HermitianEigen eig = hermitian_right_eigen(s);
  MultiplicityReport rep;
  rep.n = eig.values.size();
  rep.eig_dim = bound.eig_dim;
  rep.real_part = lambda.w;
  rep.precondition_met = 2 * rep.eig_dim > rep.n + 1;  // k > ceil(n/2)
  rep.multiplicity = static_cast<std::size_t>(std::count_if(
      eig.values.begin(), eig.values.end(), [&](double t) { return std::abs(t - lambda.w) <= tol; }));
  if (!rep.precondition_met) return rep;
  const std::size_t k = rep.eig_dim;
  for (std::size_t j = rep.n - k; j < k; ++j) {  // t_{n-k+1} .. t_k, 0-based
    if (std::abs(eig.values[j] - lambda.w) > tol) rep.holds = false;
  }
  if (rep.multiplicity < 2 * k - rep.n) rep.holds = false;
  return rep;
}

BoundReport symplectic_bound_check(const QMatrix& a, const Quaternion& lambda, double tol, std::uint64_t seed) {
  if (!a.square() || symplectic_deviation(a) > 1e-8) {
    throw Error(Errc::NotSymplectic, "bound check needs a symplectic matrix");
  }
  const LeftMembership mem = left_membership(a, lambda);
  if (!mem.is_left) throw Error(Errc::NotLeftEigenvalue, to_string(lambda) + " is not a left eigenvalue");
  const auto classes = right_eigen_classes(a);
  const std::size_t n = classes.size();
  const std::size_t k = mem.eigenspace.dim();

  BoundReport rep;
  rep.lambda = lambda;
  rep.eig_dim = k;
  rep.lower = classes[k - 1].real_part;
  rep.upper = classes[n - k].real_part;
  rep.real_part = lambda.w;
  rep.holds = rep.lower - tol <= rep.real_part && rep.real_part <= rep.upper + tol;
  for (const auto& v : mem.eigenspace.basis) {
    const double h = hermitian_product(v, a * v).w / norm2(v);
    rep.max_rayleigh_deviation = std::max(rep.max_rayleigh_deviation, std::abs(h - lambda.w));
  }
  rep.rayleigh_constant = rep.max_rayleigh_deviation <= 1e-9;
  rep.norm_bound = 1.0;
  rep.norm_ok = std::abs(norm(lambda) - 1.0) <= tol;

  const QMatrix herm = (a + adjoint(a)) * Quaternion(0.5);
  Rng rng = make_rng(seed);
  for (int trial = 0; trial < 8; ++trial) {
    const QVector v = sphere_sample(a.rows(), rng);
    const double ha = hermitian_product(v, a * v).w;
    const double hs = rayleigh_quotient(herm, v);
    if (std::abs(ha - hs) > 1e-10) rep.hermitian_part_agrees = false;
  }
  return rep;
}

HermitianPartReport hermitian_part_classes(const QMatrix& a, double tol) {
  if (!a.square() || symplectic_deviation(a) > 1e-8) {
    throw Error(Errc::NotSymplectic, "hermitian_part_classes needs a symplectic matrix");
  }
  const QMatrix herm = (a + adjoint(a)) * Quaternion(0.5);
  HermitianPartReport rep;
  rep.eigenvalues = hermitian_right_eigen(herm).values;
  for (const auto& c : right_eigen_classes(a)) rep.real_parts.push_back(c.real_part);
  std::sort(rep.real_parts.begin(), rep.real_parts.end());
  rep.agree = rep.eigenvalues.size() == rep.real_parts.size();
  for (std::size_t i = 0; rep.agree && i < rep.eigenvalues.size(); ++i) {
    rep.agree = std::abs(rep.eigenvalues[i] - rep.real_parts[i]) <= tol;
  }
  return rep;
}

nlohmann::json to_json(const LeftFamily& f) {
  return {{"base", to_string(f.base)},
          {"coeff", to_string(f.coeff)},
          {"radius", f.radius},
          {"samples", quaternion_list(f.samples())}};
}

nlohmann::json to_json(const LeftSpectrum& s) {
  nlohmann::json out{{"kind", s.kind == LeftSpectrum::Kind::Finite ? "finite" : "infinite"},
                     {"near_infinite", s.near_infinite}};
  if (s.kind == LeftSpectrum::Kind::Finite) {
    out["values"] = quaternion_list(s.finite_values);
  } else {
    out["family"] = to_json(*s.family);
  }
  return out;
}

nlohmann::json to_json(const BoundReport& r) {
  return {{"lambda", to_string(r.lambda)},
          {"eig_dim", r.eig_dim},
          {"lower", r.lower},
          {"upper", r.upper},
          {"real_part", r.real_part},
          {"holds", r.holds},
          {"max_rayleigh_deviation", r.max_rayleigh_deviation},
          {"rayleigh_constant", r.rayleigh_constant},
          {"norm_bound", r.norm_bound},
          {"norm_ok", r.norm_ok},
          {"hermitian_part_agrees", r.hermitian_part_agrees}};
}

nlohmann::json to_json(const SimilarityClass& c) {
  return {{"real_part", c.real_part}, {"imag_norm", c.imag_norm}, {"norm", c.norm()}, {"multiplicity", c.multiplicity}};
}

}  // namespace qla
