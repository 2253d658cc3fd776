#include "qla/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qla/ceig.hpp"
#include "qla/lefteig.hpp"
#include "qla/matrix_io.hpp"
#include "qla/rayleigh.hpp"

namespace qla::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr std::size_t kMinMaxTrials = 200;

std::string command_name(Command c) {
  switch (c) {
    case Command::RightEigs: return "right-eigs";
    case Command::LeftEigs: return "left-eigs";
    case Command::Rayleigh: return "rayleigh";
    case Command::Moments: return "moments";
    case Command::MinMax: return "minmax";
    case Command::Check: return "check";
  }
  return "unknown";
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ParseError: return kParseError;
    case Errc::NoConvergence:
    case Errc::PairingFailure:
    case Errc::ReconstructionFailure:
    case Errc::RootSolverFailure: return kFalsified;
    default: return kPrecondition;
  }
}

/// Collects one command's result as a JSON document and as human lines.
class Report {
 public:
  explicit Report(Command c) : doc_{{"schema_version", kSchemaVersion}, {"command", command_name(c)}} {}

  json& doc() { return doc_; }
  void line(const std::string& text) { lines_.push_back(text); }

  void emit(std::ostream& out, Output mode) const {
    if (mode == Output::Structured) {
      out << doc_.dump(2) << '\n';
    } else {
      for (const auto& l : lines_) out << l << '\n';
    }
  }

 private:
  json doc_;
  std::vector<std::string> lines_;
};

// ---------------------------------------------------------------- check

struct CheckItem {
  std::string name;
  bool holds = true;
  std::string detail;
  bool informational = false;
};

class CheckSuite {
 public:
  void add(std::string name, bool holds, std::string detail, bool informational = false) {
    items_.push_back({std::move(name), holds, std::move(detail), informational});
  }

  /// Runs `body`; a library error inside it becomes a failed item.
  template <typename F>
  void guarded(const std::string& name, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      add(name, false, e.what());
    }
  }

  bool all_hold() const {
    return std::all_of(items_.begin(), items_.end(), [](const CheckItem& i) { return i.informational || i.holds; });
  }
  const std::vector<CheckItem>& items() const { return items_; }

 private:
  std::vector<CheckItem> items_;
};

void check_common(const QMatrix& m, CheckSuite& suite) {
  const double scale = std::max(1.0, max_entry_norm(m));
  const CMatrix cm = complex_adjoint(m);
  const double adj_err = max_abs_difference(complex_adjoint(adjoint(m)), adjoint(cm));
  const double mul_err = max_abs_difference(complex_adjoint(m * m), cm * cm);
  suite.add("complex-adjoint-morphism", adj_err <= 1e-12 * scale && mul_err <= 1e-12 * scale * scale,
            "c(M*) = c(M)* err " + fmt(adj_err) + ", c(M^2) = c(M)^2 err " + fmt(mul_err));

  suite.guarded("right-spectrum-conjugate-closed", [&] {
    const auto eig = general_complex_eigenvalues(cm);
    double worst = 0.0;
    for (const auto& z : eig) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& w : eig) best = std::min(best, std::abs(w - std::conj(z)));
      worst = std::max(worst, best);
    }
    suite.add("right-spectrum-conjugate-closed", worst <= 1e-6, "max distance to a conjugate " + fmt(worst));
  });

  suite.guarded("right-eigen-classes", [&] {
    const auto classes = right_eigen_classes(m);
    std::string detail;
    for (const auto& c : classes) {
      detail += "[Re " + fmt(c.real_part) + ", |q| " + fmt(c.norm()) + "] ";
    }
    suite.add("right-eigen-classes", classes.size() == m.rows(), std::to_string(classes.size()) + " classes " + detail);
  });
}

// Every emitted left eigenvalue must make M - lambda I singular.
void check_left_values(const QMatrix& m, const std::vector<Quaternion>& values, const std::string& what,
                       CheckSuite& suite) {
  std::size_t failures = 0;
  double worst = 0.0;
  for (const auto& lambda : values) {
    const auto mem = left_membership(m, lambda);
    worst = std::max(worst, mem.max_residual);
    if (!mem.is_left || mem.max_residual > 1e-8) ++failures;
  }
  suite.add("left-eigenvalues-singular(" + what + ")", failures == 0,
            std::to_string(values.size()) + " values, " + std::to_string(failures) + " not singular, max residual " +
                fmt(worst));
}

void check_hermitian(const QMatrix& s, const RunConfig& cfg, CheckSuite& suite) {
  const std::size_t n = s.rows();
  HermitianEigen eig;
  try {
    eig = hermitian_right_eigen(s);
  } catch (const Error& e) {
    suite.add("hermitian-diagonalization", false, e.what());
    return;
  }
  std::string spectrum;
  for (double t : eig.values) spectrum += fmt(t) + " ";
  suite.add("hermitian-real-spectrum", true, "t = " + spectrum);

  const QMatrix u = eig.eigenvector_matrix();
  std::vector<Quaternion> diag(eig.values.begin(), eig.values.end());
  const double recon = max_entry_norm(u * QMatrix::diagonal(diag) * adjoint(u) - s);
  const double unitary = symplectic_deviation(u);
  suite.add("hermitian-diagonalization", recon <= 1e-8 && unitary <= 1e-8,
            "S = U diag(t) U* err " + fmt(recon) + ", U symplectic err " + fmt(unitary));

  double eig_dev = 0.0;
  double grad_at_eig = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    eig_dev = std::max(eig_dev, std::abs(rayleigh_quotient(s, eig.basis.basis[j]) - eig.values[j]));
    grad_at_eig = std::max(grad_at_eig, norm(gradient(s, eig.basis.basis[j])));
  }
  suite.add("rayleigh-at-eigenvectors", eig_dev <= 1e-9, "max |R(S,u_j) - t_j| " + fmt(eig_dev));
  suite.add("gradient-zero-at-eigenvectors", grad_at_eig <= 1e-8 * (1.0 + frobenius_norm(s)),
            "max |G(u_j)| " + fmt(grad_at_eig));

  Rng rng = make_rng(cfg.seed, 101);
  double range_violation = 0.0, weighted_err = 0.0, tangency = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const QVector v = sphere_sample(n, rng);
    const double r = rayleigh_quotient(s, v);
    range_violation = std::max({range_violation, eig.values.front() - r, r - eig.values.back()});
    tangency = std::max(tangency, std::abs(scalar_product(v, gradient(s, v))));
    std::vector<Quaternion> coords;
    for (const auto& b : eig.basis.basis) coords.push_back(hermitian_product(b, v));
    weighted_err = std::max(weighted_err, std::abs(weighted_mean_oracle(eig.values, coords) - r));
  }
  suite.add("rayleigh-range", range_violation <= 1e-9, "t_1 <= R <= t_n on 1000 samples, worst excess " +
                                                           fmt(std::max(0.0, range_violation)));
  suite.add("rayleigh-weighted-mean", weighted_err <= 1e-10, "max deviation " + fmt(weighted_err));
  suite.add("gradient-tangent", tangency <= 1e-10, "max |Re<v,G>| " + fmt(tangency));

  suite.guarded("critical-index", [&] {
    bool ok = true;
    std::string detail;
    for (std::size_t j = 0; j < n; ++j) {
      const CriticalReport rep = critical_report(s, eig.basis.basis[j]);
      const CriticalIndex idx = critical_index(s, j);
      ok = ok && rep.critical && rep.index == idx.real && rep.index_quaternionic == idx.quaternionic;
      detail += "t_" + std::to_string(j + 1) + ": " + std::to_string(rep.index) + " real / " +
                std::to_string(rep.index_quaternionic) + " quaternionic; ";
    }
    suite.add("critical-index", ok, detail);
  });

  for (std::size_t k = 1; k <= n; ++k) {
    const std::string name = "minmax(k=" + std::to_string(k) + ")";
    suite.guarded(name, [&] {
      const MinMaxReport rep = minmax_verify(s, k, 50, cfg.seed + k);
      suite.add(name, rep.ok(),
                "min M_E " + fmt(rep.min_max_value) + " >= t_k " + fmt(rep.t_k) + ", max m_E " +
                    fmt(rep.max_min_value) + " <= t_{n-k+1} " + fmt(rep.t_upper) + ", violations " +
                    std::to_string(rep.violations));
    });
  }

  suite.guarded("sphere-moments", [&] {
    const MomentReport rep = moments(s, std::max<std::size_t>(cfg.samples, 1000), cfg.seed);
    suite.add("sphere-moments", rep.within(3.0),
              "mean " + fmt(rep.mean_estimate) + " vs Trace/n " + fmt(rep.exact_mean) + " (se " +
                  fmt(rep.stderr_mean) + "), second central " + fmt(rep.second_central_estimate) + " vs " +
                  fmt(rep.exact_second_central) + " (se " + fmt(rep.stderr_second_central) + ")");
  });

  std::vector<Quaternion> lefts;
  if (n == 2) {
    suite.guarded("left-spectrum-2x2", [&] {
      const auto cls = hermitian_2x2_classify(s);
      const auto spec = left_eigs_2x2(s);
      const bool real_match = std::abs(cls.real_eigs[0] - eig.values[0]) <= 1e-8 &&
                              std::abs(cls.real_eigs[1] - eig.values[1]) <= 1e-8;
      suite.add("hermitian-2x2-real-roots", real_match,
                "roots of (s-t)(s'-t)-|b|^2: " + fmt(cls.real_eigs[0]) + ", " + fmt(cls.real_eigs[1]));
      const bool fam = cls.nonreal.has_value();
      suite.add("hermitian-2x2-family-criterion", fam == (spec.kind == LeftSpectrum::Kind::Infinite),
                fam ? "Re(b) = 0 and s = s': infinite family lambda = s + b omega"
                    : "no non-real left eigenvalues");
      lefts.push_back(Quaternion(cls.real_eigs[0]));
      lefts.push_back(Quaternion(cls.real_eigs[1]));
      if (fam) {
        const auto samples = cls.nonreal->samples();
        lefts.insert(lefts.end(), samples.begin(), samples.end());
        const Quaternion b = s(0, 1);
        const Quaternion plus = cls.nonreal->member(b / norm(b));
        const Quaternion minus = cls.nonreal->member(-b / norm(b));
        suite.add("hermitian-2x2-real-members", norm(plus - cls.real_eigs[0]) <= 1e-9 &&
                                                     norm(minus - cls.real_eigs[1]) <= 1e-9,
                  "omega = +-b/|b| give s -+ |b|");
      } else {
        lefts.insert(lefts.end(), spec.finite_values.begin(), spec.finite_values.end());
      }
    });
  }
  if (cfg.lambda) lefts.push_back(parse_quaternion(*cfg.lambda));
  if (!lefts.empty()) {
    check_left_values(s, lefts, "hermitian", suite);
    std::size_t failures = 0, corollary_failures = 0, met = 0;
    for (const auto& lambda : lefts) {
      try {
        const BoundReport rep = hermitian_bound_check(s, lambda);
        if (!rep.all_hold()) ++failures;
        const MultiplicityReport mult = multiplicity_corollary_check(s, lambda);
        if (mult.precondition_met) {
          ++met;
          if (!mult.holds) ++corollary_failures;
        }
      } catch (const Error&) {
        ++failures;
      }
    }
    suite.add("left-right-bounds", failures == 0,
              "t_k <= Re(lambda) <= t_{n-k+1}, R = Re(lambda) on V(lambda), |lambda| <= max|t|: " +
                  std::to_string(lefts.size()) + " values, " + std::to_string(failures) + " failures");
    suite.add("eigenspace-multiplicity", corollary_failures == 0,
              std::to_string(met) + " values with dim V > ceil(n/2), " + std::to_string(corollary_failures) +
                  " failures");
  }
}

void check_symplectic(const QMatrix& a, const RunConfig& cfg, CheckSuite& suite) {
  const std::size_t n = a.rows();
  suite.guarded("symplectic-right-norm-one", [&] {
    double worst = 0.0;
    for (const auto& c : right_eigen_classes(a)) worst = std::max(worst, std::abs(c.norm() - 1.0));
    suite.add("symplectic-right-norm-one", worst <= 1e-8, "max ||q| - 1| " + fmt(worst));
  });
  suite.guarded("hermitian-part-classes", [&] {
    const auto rep = hermitian_part_classes(a);
    std::string detail;
    for (double t : rep.eigenvalues) detail += fmt(t) + " ";
    suite.add("hermitian-part-classes", rep.agree, "eig((A+A*)/2) = Re(q_j): " + detail);
  });

  std::vector<Quaternion> lefts;
  if (n == 2) {
    suite.guarded("symplectic-2x2", [&] {
      const auto rot = symplectic_2x2_detect(a);
      const auto spec = left_eigs_2x2(a);
      if (rot) {
        const auto sp = symplectic_2x2_spectra(rot->r, rot->theta);
        suite.add("symplectic-rotation-form", spec.kind == LeftSpectrum::Kind::Infinite,
                  "r = " + to_string(rot->r) + ", theta = " + fmt(rot->theta) + ", infinite left family");
        suite.add("symplectic-2x2-right-classes", sp.cross_check_ok,
                  "r(cos t +- sin t rho): Re " + fmt(sp.right[0].real_part) + ", " + fmt(sp.right[1].real_part) +
                      (sp.ambiguous_rho ? " (rho ambiguous, solver classes)" : ""));
        const auto samples = sp.left_family.samples();
        lefts.insert(lefts.end(), samples.begin(), samples.end());

        const QMatrix herm = (a + adjoint(a)) * Quaternion(0.5);
        std::size_t not_left = 0;
        for (const auto& lambda : samples) {
          if (!left_membership(herm, lambda).is_left) ++not_left;
        }
        suite.add("hermitian-part-left-spectrum-differs", true,
                  std::to_string(not_left) + " of " + std::to_string(samples.size()) +
                      " sampled left eigenvalues of A are not left eigenvalues of (A+A*)/2",
                  true);
      } else {
        suite.add("symplectic-rotation-form", spec.kind == LeftSpectrum::Kind::Finite,
                  "not of rotation form: finitely many left eigenvalues");
        if (spec.kind == LeftSpectrum::Kind::Finite) {
          lefts.insert(lefts.end(), spec.finite_values.begin(), spec.finite_values.end());
        } else {
          const auto samples = spec.family->samples();
          lefts.insert(lefts.end(), samples.begin(), samples.end());
        }
      }
    });
  }
  if (cfg.lambda) lefts.push_back(parse_quaternion(*cfg.lambda));
  if (!lefts.empty()) {
    check_left_values(a, lefts, "symplectic", suite);
    std::size_t failures = 0;
    for (const auto& lambda : lefts) {
      try {
        if (!symplectic_bound_check(a, lambda, 1e-8, cfg.seed).all_hold()) ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
    suite.add("symplectic-left-bounds", failures == 0,
              "Re(q_k) <= Re(lambda) <= Re(q_{n-k+1}), |lambda| = 1, h_A = h_S: " + std::to_string(lefts.size()) +
                  " values, " + std::to_string(failures) + " failures");
  }
}

void check_general(const QMatrix& m, const RunConfig& cfg, CheckSuite& suite) {
  std::vector<Quaternion> lefts;
  if (m.rows() == 2) {
    suite.guarded("left-spectrum-2x2", [&] {
      const auto spec = left_eigs_2x2(m);
      if (spec.kind == LeftSpectrum::Kind::Finite) {
        lefts = spec.finite_values;
      } else {
        lefts = spec.family->samples();
      }
    });
  }
  if (cfg.lambda) lefts.push_back(parse_quaternion(*cfg.lambda));
  if (!lefts.empty()) check_left_values(m, lefts, "general", suite);
}

int run_check(const QMatrix& m, const RunConfig& cfg, Report& report) {
  if (!m.square()) throw Error(Errc::NotSquare, "check needs a square matrix");
  const double scale = std::max(1.0, max_entry_norm(m));
  const double herm_dev = hermitian_deviation(m);
  const double sympl_dev = symplectic_deviation(m);
  const double threshold = cfg.tol * scale;
  // A matrix this close to a structure is taken to be meant as one.
  const double near = 0.1 * scale;

  CheckSuite suite;
  std::string structure = "general";
  if (herm_dev <= threshold) {
    structure = "hermitian";
  } else if (sympl_dev <= threshold) {
    structure = "symplectic";
  } else if (herm_dev <= near) {
    structure = "near-hermitian";
    suite.add("hermitian-structure", false, "S = S* violated by " + fmt(herm_dev));
  } else if (sympl_dev <= near) {
    structure = "near-symplectic";
    suite.add("symplectic-structure", false, "A*A = I violated by " + fmt(sympl_dev));
  }
  check_common(m, suite);
  if (structure == "hermitian") check_hermitian(m, cfg, suite);
  if (structure == "symplectic") check_symplectic(m, cfg, suite);
  if (structure == "general") check_general(m, cfg, suite);

  report.doc()["structure"] = structure;
  report.doc()["n"] = m.rows();
  auto items = json::array();
  report.line("check: " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix, structure " +
              structure);
  for (const auto& item : suite.items()) {
    items.push_back({{"name", item.name},
                     {"holds", item.holds},
                     {"detail", item.detail},
                     {"informational", item.informational}});
    const char* tag = item.informational ? "INFO" : (item.holds ? "PASS" : "FAIL");
    report.line(std::string(tag) + "  " + item.name + ": " + item.detail);
  }
  report.doc()["checks"] = std::move(items);
  const bool ok = suite.all_hold();
  report.doc()["all_hold"] = ok;
  report.line(ok ? "all checks hold" : "FALSIFIED");
  return ok ? kOk : kFalsified;
}

// ---------------------------------------------------------------- other commands

int run_right(const QMatrix& m, Report& report) {
  const auto classes = right_eigen_classes(m);
  auto arr = json::array();
  for (const auto& c : classes) {
    arr.push_back(to_json(c));
    report.line("class  Re(q) = " + fmt(c.real_part) + "  |Im(q)| = " + fmt(c.imag_norm) + "  |q| = " +
                fmt(c.norm()) + "  representative " + to_string(from_complex(c.representative())) +
                "  multiplicity " + std::to_string(c.multiplicity));
  }
  report.doc()["n"] = m.rows();
  report.doc()["classes"] = std::move(arr);
  return kOk;
}

int run_left(const QMatrix& m, const RunConfig& cfg, Report& report) {
  if (!m.square()) throw Error(Errc::NotSquare, "left-eigs needs a square matrix");
  bool ok = true;
  if (m.rows() == 2) {
    const LeftSpectrum spec = left_eigs_2x2(m);
    report.doc()["spectrum"] = to_json(spec);
    const std::vector<Quaternion> probe =
        spec.kind == LeftSpectrum::Kind::Finite ? spec.finite_values : spec.family->samples();
    if (spec.kind == LeftSpectrum::Kind::Finite) {
      for (const auto& v : spec.finite_values) report.line("left eigenvalue  " + to_string(v));
    } else {
      const auto& f = *spec.family;
      report.line("infinite family  lambda = (" + to_string(f.base) + ") + (" + to_string(f.coeff) +
                  ") xi,  Re(xi) = 0, |xi| = " + fmt(f.radius));
      for (const auto& v : probe) report.line("  sample  " + to_string(v));
    }
    if (spec.near_infinite) report.line("note: coefficients are close to the infinite-family regime");
    double worst = 0.0;
    for (const auto& v : probe) {
      const auto mem = left_membership(m, v);
      ok = ok && mem.is_left;
      worst = std::max(worst, mem.max_residual);
    }
    ok = ok && worst <= 1e-8;
    report.doc()["verified"] = ok;
    report.doc()["max_residual"] = worst;
    report.line(std::string("verified singular: ") + (ok ? "yes" : "NO") + " (max residual " + fmt(worst) + ")");
  } else if (!cfg.lambda) {
    throw Error(Errc::PreconditionNotMet, "left-eigs for n > 2 requires --lambda");
  }
  if (cfg.lambda) {
    const Quaternion lambda = parse_quaternion(*cfg.lambda);
    const LeftMembership mem = left_membership(m, lambda, 1e-10);
    json basis = json::array();
    for (const auto& b : mem.eigenspace.basis) basis.push_back(to_json(b));
    report.doc()["membership"] = {{"lambda", to_string(lambda)},
                                  {"is_left", mem.is_left},
                                  {"eigenspace_dim", mem.eigenspace.dim()},
                                  {"eigenspace", std::move(basis)},
                                  {"max_residual", mem.max_residual}};
    report.line("lambda = " + to_string(lambda) + ": " + (mem.is_left ? "left eigenvalue" : "not a left eigenvalue") +
                ", dim V(lambda) = " + std::to_string(mem.eigenspace.dim()));
    ok = ok && mem.max_residual <= 1e-8;
  }
  return ok ? kOk : kFalsified;
}

int run_rayleigh(const QMatrix& s, const RunConfig& cfg, Report& report) {
  if (!cfg.vector) throw Error(Errc::PreconditionNotMet, "rayleigh requires --vector");
  const QVector v = parse_vector(*cfg.vector);
  const CriticalReport rep = critical_report(s, v);
  report.doc()["report"] = to_json(rep);
  report.line("R(S, v) = " + fmt(rep.value));
  report.line("|gradient| = " + fmt(rep.gradient_norm));
  if (rep.critical) {
    report.line("critical point: index " + std::to_string(rep.index) + " (real tangent directions), " +
                std::to_string(rep.index_quaternionic) + " in quaternionic dimensions");
    std::string eigs;
    for (double mu : rep.hessian_eigs) eigs += fmt(mu) + " ";
    report.line("Hessian eigenvalues: " + eigs);
  } else {
    report.line("not a critical point");
  }
  return kOk;
}

int run_moments(const QMatrix& s, const RunConfig& cfg, Report& report) {
  if (cfg.samples < 1000) throw Error(Errc::PreconditionNotMet, "moments needs --samples >= 1000");
  const MomentReport rep = moments(s, cfg.samples, cfg.seed);
  report.doc()["report"] = to_json(rep);
  report.doc()["within_3_stderr"] = rep.within(3.0);
  report.line("samples " + std::to_string(rep.samples) + ", seed " + std::to_string(rep.seed));
  report.line("mean            " + fmt(rep.mean_estimate) + "  (Trace/n = " + fmt(rep.exact_mean) + ", stderr " +
              fmt(rep.stderr_mean) + ")");
  report.line("second central  " + fmt(rep.second_central_estimate) + "  (sigma^2/(2n+1) = " +
              fmt(rep.exact_second_central) + ", stderr " + fmt(rep.stderr_second_central) + ")");
  return kOk;
}

int run_minmax(const QMatrix& s, const RunConfig& cfg, Report& report) {
  const std::size_t n = s.rows();
  if (cfg.k && (*cfg.k < 1 || *cfg.k > n)) throw Error(Errc::IndexOutOfRange, "--k must lie in [1, n]");
  std::vector<std::size_t> ks;
  if (cfg.k) {
    ks.push_back(*cfg.k);
  } else {
    for (std::size_t k = 1; k <= n; ++k) ks.push_back(k);
  }
  bool ok = true;
  auto arr = json::array();
  for (std::size_t k : ks) {
    const MinMaxReport rep = minmax_verify(s, k, kMinMaxTrials, cfg.seed + k);
    ok = ok && rep.ok();
    arr.push_back(to_json(rep));
    report.line("k = " + std::to_string(k) + ": min M_E = " + fmt(rep.min_max_value) + " >= t_k = " +
                fmt(rep.t_k) + ", max m_E = " + fmt(rep.max_min_value) + " <= t_{n-k+1} = " + fmt(rep.t_upper) +
                ", violations " + std::to_string(rep.violations) + (rep.attained ? ", bounds attained" : ", NOT attained"));
  }
  report.doc()["reports"] = std::move(arr);
  report.doc()["all_hold"] = ok;
  return ok ? kOk : kFalsified;
}

void emit_error(Command cmd, Output mode, const std::string& code, const std::string& message, std::ostream& out,
                std::ostream& err) {
  err << "error: " << message << '\n';
  if (mode == Output::Structured) {
    const json doc{{"schema_version", kSchemaVersion},
                   {"command", command_name(cmd)},
                   {"error", {{"code", code}, {"message", message}}}};
    out << doc.dump(2) << '\n';
  } else {
    out << "error: " << message << '\n';
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  QMatrix m;
  try {
    m = read_matrix_file(cfg.input_path);
  } catch (const Error& e) {
    emit_error(cfg.command, cfg.output, std::string(to_string(e.code())), e.what(), out, err);
    return kParseError;
  }
  Report report(cfg.command);
  report.doc()["input"] = to_json(m);
  try {
    if (!m.square()) throw Error(Errc::NotSquare, "input matrix must be square");
    // Literals are validated up front so a bad flag is a parse error.
    if (cfg.vector) parse_vector(*cfg.vector);
    if (cfg.lambda) parse_quaternion(*cfg.lambda);
    int code = kOk;
    switch (cfg.command) {
      case Command::RightEigs: code = run_right(m, report); break;
      case Command::LeftEigs: code = run_left(m, cfg, report); break;
      case Command::Rayleigh: code = run_rayleigh(m, cfg, report); break;
      case Command::Moments: code = run_moments(m, cfg, report); break;
      case Command::MinMax: code = run_minmax(m, cfg, report); break;
      case Command::Check: code = run_check(m, cfg, report); break;
    }
    report.doc()["exit_code"] = code;
    report.emit(out, cfg.output);
    return code;
  } catch (const Error& e) {
    emit_error(cfg.command, cfg.output, std::string(to_string(e.code())), e.what(), out, err);
    return exit_code_for(e.code());
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternionic eigenvalue toolkit: right/left eigenvalues, Rayleigh quotient, min-max and moments",
               "qla"};
  RunConfig cfg;
  std::string command;
  std::string output = "human";
  const std::map<std::string, Command> commands{{"right-eigs", Command::RightEigs}, {"left-eigs", Command::LeftEigs},
                                                {"rayleigh", Command::Rayleigh},     {"moments", Command::Moments},
                                                {"minmax", Command::MinMax},         {"check", Command::Check}};
  app.add_option("command", command, "right-eigs | left-eigs | rayleigh | moments | minmax | check")
      ->required()
      ->check(CLI::IsMember({"right-eigs", "left-eigs", "rayleigh", "moments", "minmax", "check"}));
  app.add_option("input", cfg.input_path, "matrix file (text or JSON)")->required();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte-Carlo samples for moments")->capture_default_str();
  app.add_option("--tol", cfg.tol, "structure tolerance")->capture_default_str();
  app.add_option("--vector", cfg.vector, "vector literal \"q1,q2,...\"");
  app.add_option("--lambda", cfg.lambda, "quaternion literal \"a+bi+cj+dk\"");
  app.add_option("--k", cfg.k, "subspace dimension for minmax");
  app.add_option("--output", output, "human | structured")
      ->check(CLI::IsMember({"human", "structured"}))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  cfg.command = commands.at(command);
  cfg.output = output == "structured" ? Output::Structured : Output::Human;
  return run(cfg, out, err);
}

}  // namespace qla::cli
