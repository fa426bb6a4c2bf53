#pragma once

// Shared fixtures: the battery of A-gauge profiles and small random helpers.

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cansys/jalg.hpp"
#include "cansys/matrix2.hpp"
#include "cansys/profile.hpp"

namespace testsupport {

using cansys::ArovProfile;
using cansys::Coefficient;
using cansys::cplx;
using cansys::Matrix2;

inline constexpr double kBeta = 0.6;

/// a = 1, b = 0.6 on [0, 1], c = 0.
inline ArovProfile step_b() {
  return {Coefficient::constant(1.0), Coefficient::step(kBeta, 0.0, 1.0), Coefficient::constant(0.0), 1.0, 1.0};
}

/// a = 1, b = 0, c = 0.6 on [0, 1].
inline ArovProfile step_c() {
  return {Coefficient::constant(1.0), Coefficient::constant(0.0), Coefficient::step(kBeta, 0.0, 1.0), 1.0, 1.0};
}

/// a = 1, b = raised-cosine bump of height 0.8 on [0, 1], c = 0.
inline ArovProfile bump_b() {
  return {Coefficient::constant(1.0), Coefficient::bump(0.8, 0.0, 1.0), Coefficient::constant(0.0), 1.0, 1.0};
}

/// Two steps in both b and c over [0, 1.5].
inline ArovProfile two_step() {
  return {Coefficient::constant(1.0), Coefficient(cansys::StepCoef{{0.0, 0.5, 1.5}, {0.3, 0.5}}),
          Coefficient(cansys::StepCoef{{0.0, 1.0, 1.5}, {0.4, -0.2}}), 1.5, 1.0};
}

inline ArovProfile zero_profile() { return ArovProfile::free(1.0); }

struct Named {
  std::string name;
  ArovProfile profile;
  bool c_zero;
};

inline std::vector<Named> battery() {
  return {{"step_b", step_b(), true}, {"step_c", step_c(), false}, {"bump_b", bump_b(), true},
          {"two_step", two_step(), false}};
}

/// Closed-form right side for the piecewise-constant profiles:
/// 2 * sum len * (a - sqrt(a^2 - b^2 - c^2)).
inline double rhs_pieces(const std::vector<std::array<double, 4>>& pieces) {
  double s = 0.0;
  for (const auto& [len, a, b, c] : pieces) s += 2.0 * len * (a - std::sqrt(a * a - b * b - c * c));
  return s;
}

inline cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  const double re = g(rng);
  return {re, g(rng)};
}

inline Matrix2 random_matrix(std::mt19937_64& rng, double scale = 1.0) {
  const cplx a = random_cplx(rng, scale), b = random_cplx(rng, scale), c = random_cplx(rng, scale),
             d = random_cplx(rng, scale);
  return {a, b, c, d};
}

/// Random element of SU(1,1): [[alpha, beta], [conj beta, conj alpha]], |alpha|^2 - |beta|^2 = 1.
inline Matrix2 random_su11(std::mt19937_64& rng, double max_rapidity = 2.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = max_rapidity * u(rng);
  const double p1 = 2.0 * std::numbers::pi * u(rng);
  const double p2 = 2.0 * std::numbers::pi * u(rng);
  const cplx alpha = std::polar(std::cosh(r), p1);
  const cplx beta = std::polar(std::sinh(r), p2);
  return {alpha, beta, std::conj(beta), std::conj(alpha)};
}

/// Random strictly j-contractive matrix: U diag(k, 1/k) V, k > 1, U, V in SU(1,1),
/// times a unimodular phase.
inline Matrix2 random_j_contractive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double k = 1.0 + 3.0 * u(rng);
  const Matrix2 core = Matrix2::diag(k, 1.0 / k);
  return random_su11(rng, 1.5) * core * random_su11(rng, 1.5) * std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
}

/// Random j-expanding triangular factor with |h| inside the admissible disk.
inline cansys::jalg::TriangularFactor random_triangular(std::mt19937_64& rng, double max_log_lambda = 1.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double lambda = std::exp(max_log_lambda * u(rng));
  const double radius = (lambda - 1.0 / lambda) * std::sqrt(u(rng));
  return {lambda, std::polar(radius, 2.0 * std::numbers::pi * u(rng))};
}

}  // namespace testsupport
