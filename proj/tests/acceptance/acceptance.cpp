// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cansys/error.hpp"
#include "cansys/gauge.hpp"
#include "cansys/jalg.hpp"
#include "cansys/nodes.hpp"
#include "cansys/spectral.hpp"
#include "cansys/transfer.hpp"
#include "support.hpp"

using namespace cansys;
using testsupport::Named;

namespace {

constexpr cplx kI{0.0, 1.0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("violated: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Trapezoid rule on [lo, hi]; spectrally accurate for the raised-cosine bump,
// whose integrand is smooth and flat at both ends.
double trapezoid(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = 0.5 * (f(lo) + f(hi));
  for (int k = 1; k < n; ++k) s += f(lo + k * h);
  return s * h;
}

// Right side of the sum rule from the definitions, independent of the library.
double oracle_rhs(const std::string& name) {
  if (name == "step_b" || name == "step_c") return testsupport::rhs_pieces({{1.0, 1.0, 0.6, 0.0}});
  if (name == "two_step") {
    return testsupport::rhs_pieces({{0.5, 1.0, 0.3, 0.4}, {0.5, 1.0, 0.5, 0.4}, {0.5, 1.0, 0.5, -0.2}});
  }
  const auto f = [](double t) {
    const double b = 0.8 * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t));
    return 2.0 * (1.0 - std::sqrt(1.0 - b * b));
  };
  return trapezoid(f, 0.0, 1.0, 4096);
}

Matrix2 expm_oracle(const Matrix2& g) {
  Eigen::Matrix2cd m;
  m << g.e11, g.e12, g.e21, g.e22;
  const Eigen::Matrix2cd e = m.exp();
  return {e(0, 0), e(0, 1), e(1, 0), e(1, 1)};
}

// 1. Sum-rule battery.
Outcome sum_rule_battery() {
  Outcome o;
  SumRuleOptions opts;
  opts.entropy.min_nodes = 2048;
  opts.entropy.max_nodes = 2048;
  opts.schur.transfer.step = 1e-3;
  for (const Named& n : testsupport::battery()) {
    const auto t0 = std::chrono::steady_clock::now();
    const SumRuleReport r = sumrule(n.profile, opts);
    const double secs = seconds_since(t0);
    const double rhs = oracle_rhs(n.name);
    const double diff = std::abs(r.lhs_entropy - rhs);
    o.require(std::abs(r.rhs_coefficient_integral - rhs) <= 1e-10, n.name + " rhs matches oracle");
    o.require(diff <= 1e-3 || diff <= 1e-2 * rhs, n.name + " |lhs - rhs| within tolerance");
    o.require(secs < 60.0, n.name + " runs under 60 s");
    o.note(n.name + ": lhs=" + sci(r.lhs_entropy) + " rhs=" + sci(rhs) + " diff=" + sci(diff) + " t=" +
           sci(secs) + "s");
  }
  return o;
}

// 2. Zero perturbation.
Outcome trivial_case() {
  Outcome o;
  const SumRuleReport r = sumrule(ArovProfile::free(1.0));
  o.require(std::abs(r.lhs_entropy) <= 1e-10, "|lhs| <= 1e-10");
  o.require(r.rhs_coefficient_integral == 0.0, "rhs = 0");
  o.note("lhs=" + sci(r.lhs_entropy) + " rhs=" + sci(r.rhs_coefficient_integral));
  return o;
}

// 3. Constant coefficients against exp((-izA + B) jay T).
Outcome constant_oracle() {
  Outcome o;
  const std::vector<std::array<double, 3>> coeffs{{1.0, 0.6, 0.0}, {1.0, 0.0, 0.6}, {2.0, -0.7, 1.1}, {0.5, 0.3, -0.4}};
  const std::vector<cplx> zs{0.0, 1.0, -3.0, cplx(0.5, 0.5), cplx(0.0, 2.0), cplx(7.0, 0.25)};
  double worst = 0.0;
  for (const auto& [a, b, c] : coeffs) {
    const ArovProfile p(Coefficient::constant(a), Coefficient::step(b, 0.0, 1.0), Coefficient::step(c, 0.0, 1.0),
                        1.0, 1.0);
    for (cplx z : zs) {
      const Matrix2 A{a, cplx(b, c), cplx(b, -c), a};
      const Matrix2 B{0.0, cplx(b, c), cplx(-b, c), 0.0};
      const Matrix2 ref = expm_oracle((A * (-kI * z) + B) * jalg::kJay);
      for (bool shortcut : {false, true}) {
        for (Scheme s : {Scheme::magnus4, Scheme::rk4}) {
          TransferOptions t;
          t.exploit_constant_pieces = shortcut;
          t.scheme = s;
          worst = std::max(worst, max_abs(transfer(p, z, 1.0, t).matrix - ref));
        }
      }
    }
  }
  o.require(worst <= 1e-8, "entrywise error <= 1e-8");
  o.note("max entry error " + sci(worst));
  return o;
}

// 4. lambda(T) = exp(int a) and the vanishing (2,1) entry at z = i.
Outcome lambda_identity() {
  Outcome o;
  for (const Named& n : testsupport::battery()) {
    TransferOptions t;
    t.exploit_constant_pieces = false;
    const Matrix2 m = transfer(n.profile, kI, n.profile.t0(), t).matrix;
    const double expected = std::exp(n.profile.t0());  // a = 1 throughout the battery
    const double rel = std::abs(m.e22 - expected) / expected;
    o.require(rel <= 1e-6, n.name + " relative error <= 1e-6");
    o.require(std::abs(m.e21) <= 1e-7, n.name + " |a21| <= 1e-7");
    o.note(n.name + ": rel=" + sci(rel) + " |a21|=" + sci(std::abs(m.e21)));
  }
  return o;
}

ArovProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = 0.5 + 1.5 * u(rng);
  const double T0 = 0.5 + 2.0 * u(rng);
  switch (static_cast<int>(3 * u(rng))) {
    case 0: {
      const double r = a * u(rng), phi = 2.0 * std::numbers::pi * u(rng);
      return {Coefficient::constant(a), Coefficient::step(r * std::cos(phi), 0.0, T0),
              Coefficient::step(r * std::sin(phi), 0.0, T0), T0, 0.5 + u(rng)};
    }
    case 1: {
      const double mid = T0 * (0.2 + 0.6 * u(rng));
      const double r1 = a * u(rng), r2 = a * u(rng);
      return {Coefficient::constant(a), Coefficient(StepCoef{{0.0, mid, T0}, {r1 * 0.6, -r2 * 0.8}}),
              Coefficient(StepCoef{{0.0, mid, T0}, {r1 * 0.8, r2 * 0.6}}), T0, 0.5 + u(rng)};
    }
    default:
      return {Coefficient::constant(a), Coefficient::bump(a * u(rng), 0.0, T0), Coefficient::constant(0.0), T0,
              0.5 + u(rng)};
  }
}

// 5. Structural invariants on random triples.
Outcome structural_invariants() {
  Outcome o;
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double det = 0.0, unit = 0.0, expand = 0.0;
  int mono_fail = 0, mono_runs = 0;
  for (int k = 0; k < 500; ++k) {
    const ArovProfile p = random_profile(rng);
    const double T = 5.0 * u(rng);
    const cplx z(10.0 * u(rng) - 5.0, k % 2 == 0 ? 0.0 : u(rng));
    const TransferResult r = transfer(p, z, T);
    det = std::max(det, r.diagnostics.det_defect);
    if (z.imag() == 0.0) {
      unit = std::max(unit, r.diagnostics.unitarity_defect);
    } else {
      expand = std::min(expand, r.diagnostics.expansion_min_eig);
      std::vector<double> grid(100);
      for (int j = 0; j < 100; ++j) grid[j] = T * j / 99.0;
      ++mono_runs;
      if (!monotonicity_check(p, z, grid)) ++mono_fail;
    }
  }
  o.require(det <= 1e-8, "|det - 1| <= 1e-8");
  o.require(unit <= 1e-8, "real-axis defect <= 1e-8");
  o.require(expand >= -1e-8, "upper half-plane eigenvalues >= -1e-8");
  o.require(mono_fail == 0, "monotonicity on 100-point grids");
  o.note("det " + sci(det) + ", j-unitarity " + sci(unit) + ", min eig " + sci(expand) + ", monotone " +
         std::to_string(mono_runs - mono_fail) + "/" + std::to_string(mono_runs));
  return o;
}

// 6. Mean-log identity under node doubling.
Outcome mean_log() {
  Outcome o;
  for (const Named& n : testsupport::battery()) {
    const double r2048 = mean_log_a22_check(n.profile, n.profile.t0(), 2048).residual;
    const double r4096 = mean_log_a22_check(n.profile, n.profile.t0(), 4096).residual;
    o.require(r2048 <= 1e-4, n.name + " residual <= 1e-4 at 2048 nodes");
    o.require(r4096 <= r2048, n.name + " residual decreases 2048 -> 4096");
    o.note(n.name + ": " + sci(r2048) + " -> " + sci(r4096));
  }
  return o;
}

// 7. Herglotz identity for c = 0 profiles.
Outcome herglotz() {
  Outcome o;
  for (const Named& n : testsupport::battery()) {
    if (!n.c_zero) continue;
    const HerglotzCheck h = herglotz_identity_check(n.profile, 4096);
    o.require(h.w_at_i.real() > 0.0, n.name + " w(i) > 0");
    o.require(h.residual <= 1e-3, n.name + " residual <= 1e-3");
    o.note(n.name + ": residual " + sci(h.residual) + ", w(i)=" + sci(h.w_at_i.real()));
  }
  return o;
}

// 8. Orlov modulus and polar form.
Outcome orlov_suite() {
  Outcome o;
  using jalg::kJay;
  std::mt19937_64 rng(8);
  double sq = 0.0, un = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Matrix2 w = testsupport::random_j_contractive(rng);
    const jalg::Polar p = jalg::polar_ju(w);
    sq = std::max(sq, max_abs(kJay * p.modulus * p.modulus - w.adjoint() * kJay * w));
    un = std::max(un, max_abs(p.unitary.adjoint() * kJay * p.unitary - kJay));
  }
  const jalg::Polar d = jalg::polar_ju(Matrix2::diag(2.0, 0.5));
  const double fixed = std::max(max_abs(d.modulus - Matrix2::diag(2.0, 0.5)), max_abs(d.unitary - Matrix2::identity()));
  o.require(sq <= 1e-10, "||jay R^2 - W* jay W|| <= 1e-10");
  o.require(un <= 1e-8, "||U* jay U - jay|| <= 1e-8");
  o.require(fixed <= 1e-12, "diag(2, 1/2) reproduced");
  o.note("square " + sci(sq) + ", unitarity " + sci(un) + ", fixed example " + sci(fixed));
  return o;
}

// 9. Triangular normalization.
Outcome arov_normalization() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double round = 0.0, unique = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto t1 = testsupport::random_triangular(rng, 0.8);
    const auto t2 = testsupport::random_triangular(rng, 0.8);
    const Matrix2 u0 = testsupport::random_su11(rng);
    const Matrix2 tri = t1.matrix() * t2.matrix();
    const Matrix2 b = tri * u0;
    const jalg::ArovSplit s = jalg::arov_normalize(b);
    round = std::max(round, max_abs(s.factor.matrix() * s.unitary - b) / std::max(1.0, max_abs(b)));
    unique = std::max({unique, max_abs(s.factor.matrix() - tri), max_abs(s.unitary - u0)});
  }
  int agree = 0, drawn = 0;
  while (drawn < 1000) {
    const double lambda = std::exp(1.5 * u(rng));
    const double bound = lambda - 1.0 / lambda;
    const double radius = 2.0 * bound * u(rng) + 0.1 * u(rng);
    if (std::abs(radius - bound) <= 1e-6) continue;  // stay off the boundary
    ++drawn;
    const jalg::TriangularFactor t{lambda, std::polar(radius, 2.0 * std::numbers::pi * u(rng))};
    const jalg::JClass c = jalg::classify(t.matrix());
    const bool by_eigen = c == jalg::JClass::j_expanding || c == jalg::JClass::j_unitary;
    if (by_eigen == jalg::triangular_expanding_check(t)) ++agree;
  }
  o.require(round <= 1e-10, "round trip <= 1e-10");
  o.require(unique <= 1e-10, "uniqueness <= 1e-10");
  o.require(agree == drawn, "criterion agrees with classification");
  o.note("round trip " + sci(round) + ", uniqueness " + sci(unique) + ", agreement " + std::to_string(agree) + "/" +
         std::to_string(drawn));
  return o;
}

// 10. Product convergence probes.
Outcome convergence_probes() {
  Outcome o;
  using jalg::TriangularFactor;
  std::vector<TriangularFactor> trivial(64, TriangularFactor{1.0, 0.0});
  std::vector<TriangularFactor> geometric, harmonic;
  for (int k = 1; k <= 64; ++k) {
    const double l = std::exp(std::ldexp(1.0, -k));
    geometric.push_back({l, l - 1.0 / l});
  }
  for (int k = 1; k <= 2000; ++k) harmonic.push_back({std::exp(1.0 / k), 0.0});

  struct Case {
    const char* name;
    const std::vector<TriangularFactor>* seq;
    bool converges;
  };
  for (const Case& c : {Case{"trivial", &trivial, true}, Case{"geometric", &geometric, true},
                        Case{"harmonic", &harmonic, false}}) {
    const auto full = jalg::product_convergence_probe(*c.seq);
    o.require(full.converges == c.converges, std::string(c.name) + " classification");
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= c.seq->size(); ++n) {
      const auto p = jalg::product_convergence_probe(std::span(c.seq->data(), n));
      if (!p.equivalence_holds) ++bad;
    }
    o.require(bad == 0, std::string(c.name) + " equivalence on every prefix");
    o.note(std::string(c.name) + (full.converges ? " converges" : " diverges") + ", prefixes violating " +
           std::to_string(bad));
  }
  return o;
}

// 11. Unitary nodes, Redheffer and Potapov-Ginzburg.
Outcome node_pipeline() {
  Outcome o;
  using namespace cansys::nodes;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double pg = 0.0, s_zero = 0.0, norm = 0.0;
  int evaluations = 0;
  for (int k = 0; k < 10; ++k) {
    const Index nK = 1 + k % 3, nE = 1 + k % 2;
    const IsometrySpec v = random_isometry(nK, nE, nE, nK, rng);
    const AGNode a = ag_extension(v);
    s_zero = std::max(s_zero, ag_blocks(a, 0.0).s.cwiseAbs().maxCoeff());
    for (int j = 0; j < 5; ++j) {
      for (cplx zeta : {cplx(0.0), cplx(0.3), cplx(0.0, 0.7)}) {
        const AGBlocks b = ag_blocks(a, zeta);
        const Mat E = random_contraction(b.s.cols(), b.s.rows(), rng);
        pg = std::max(pg, pg_consistency(b, E));
        norm = std::max({norm, spectral_norm(char_function(a.node, zeta)), spectral_norm(redheffer(b, E))});
        ++evaluations;
      }
    }
  }
  for (int k = 0; k < 100; ++k) {
    const UnitaryNode n = random_node(1 + k % 4, 1 + k % 3, rng);
    for (int j = 0; j < 10; ++j) {
      const cplx zeta = std::polar(0.99 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
      norm = std::max(norm, spectral_norm(char_function(n, zeta)));
    }
  }
  o.require(evaluations == 150, "150 evaluations");
  o.require(pg <= 1e-10, "pg_consistency <= 1e-10");
  o.require(s_zero <= 1e-12, "s(0) = 0");
  o.require(norm <= 1.0 + 1e-10, "characteristic function norms <= 1 + 1e-10");
  o.note("pg " + sci(pg) + ", |s(0)| " + sci(s_zero) + ", max norm - 1 = " + sci(norm - 1.0));
  return o;
}

// 12. Schur function from both gauges and det H = det A.
Outcome gauge_invariance() {
  Outcome o;
  for (const Named& n : testsupport::battery()) {
    const PdBHamiltonian h = to_pdb(n.profile, n.profile.t0());
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double x = std::tan(std::numbers::pi * ((k + 0.5) / 20.0 - 0.5));
      worst = std::max(worst, std::abs(schur_at_pdb(h, x) - schur_at(n.profile, x)));
    }
    const double det = det_consistency(n.profile, h);
    o.require(worst <= 1e-4, n.name + " Schur agreement <= 1e-4");
    o.require(det <= 1e-8, n.name + " det H = det A");
    o.note(n.name + ": " + sci(worst) + ", det " + sci(det));
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {1, "sum-rule battery", sum_rule_battery},
      {2, "zero perturbation", trivial_case},
      {3, "constant-coefficient oracle", constant_oracle},
      {4, "lambda identity at z = i", lambda_identity},
      {5, "structural invariants", structural_invariants},
      {6, "mean-log identity", mean_log},
      {7, "Herglotz identity", herglotz},
      {8, "Orlov / polar suite", orlov_suite},
      {9, "triangular normalization", arov_normalization},
      {10, "product convergence probes", convergence_probes},
      {11, "unitary node pipeline", node_pipeline},
      {12, "gauge invariance", gauge_invariance},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
  return failed == 0 ? 0 : 1;
}
