#pragma once

// Fixed-step integrator shared by the A-gauge and PdB chains.
//
// A Model provides
//   std::vector<std::pair<double,double>> pieces(double T) const;
//   bool constant_between(double lo, double hi) const;
//   std::pair<Matrix2, Matrix2> coefficients(double t, Side) const;   // (A, B)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "cansys/error.hpp"
#include "cansys/matrix2.hpp"
#include "cansys/transfer.hpp"

namespace cansys::detail {

inline constexpr double kGaussLo = 0.5 - std::numbers::sqrt3 / 6.0;
inline constexpr double kGaussHi = 0.5 + std::numbers::sqrt3 / 6.0;

// Above |z| h = 1 the commutator term of the Magnus step grows like (|z| h)^2
// and stops being a correction; it is dropped there.
inline constexpr double kOscillatoryLimit = 1.0;

inline Matrix2 times_jay(const Matrix2& m) { return {-m.e11, m.e12, -m.e21, m.e22}; }

template <class Model>
Matrix2 generator(const Model& model, cplx z, double t, Side side = Side::right) {
  const auto [A, B] = model.coefficients(t, side);
  return times_jay(A * (cplx(0.0, -1.0) * z) + B);
}

template <class Model>
Matrix2 magnus_step(const Model& model, cplx z, double t, double h) {
  const Matrix2 g1 = generator(model, z, t + kGaussLo * h);
  const Matrix2 g2 = generator(model, z, t + kGaussHi * h);
  Matrix2 omega = (g1 + g2) * (0.5 * h);
  if (std::abs(z) * std::abs(h) <= kOscillatoryLimit) {
    // Right-multiplied chain: the commutator enters as [G1, G2].
    omega += commutator(g1, g2) * (std::numbers::sqrt3 / 12.0 * h * h);
  }
  return expm(omega);
}

template <class Model>
Matrix2 rk4_step(const Model& model, cplx z, double t, double h) {
  const Matrix2 g0 = generator(model, z, t);
  const Matrix2 gm = generator(model, z, t + 0.5 * h);
  // Left limit: t + h may be the end of a piece.
  const Matrix2 g1 = generator(model, z, t + h, Side::left);
  const Matrix2 I = Matrix2::identity();
  const Matrix2 k1 = g0;
  const Matrix2 k2 = (I + k1 * (0.5 * h)) * gm;
  const Matrix2 k3 = (I + k2 * (0.5 * h)) * gm;
  const Matrix2 k4 = (I + k3 * h) * g1;
  return I + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

struct PathSettings {
  double step = 1e-3;
  Scheme scheme = Scheme::magnus4;
  bool exploit_constant = true;
};

/// Chain values at each nondecreasing time in `times`.
template <class Model>
std::vector<Matrix2> integrate_path(const Model& model, cplx z, std::span<const double> times,
                                    const PathSettings& s, std::size_t* step_count = nullptr) {
  if (!(s.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  std::vector<Matrix2> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "output times must be nondecreasing and >= 0");
    }
  }

  Matrix2 y = Matrix2::identity();
  std::size_t next = 0;
  std::size_t steps = 0;
  auto emit_until = [&](double t) {
    while (next < times.size() && times[next] <= t) {
      out.push_back(y);
      ++next;
    }
  };
  emit_until(0.0);

  auto advance = [&](double lo, double hi, bool constant) {
    const double len = hi - lo;
    if (len <= 0.0) return;
    if (constant && s.exploit_constant && s.scheme == Scheme::magnus4) {
      y = y * magnus_step(model, z, lo, len);
      ++steps;
      return;
    }
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / s.step - 1e-9)));
    const double h = len / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = lo + static_cast<double>(k) * h;
      y = y * (s.scheme == Scheme::magnus4 ? magnus_step(model, z, t, h) : rk4_step(model, z, t, h));
    }
    steps += n;
  };

  for (const auto& [lo, hi] : model.pieces(times.back())) {
    const bool constant = model.constant_between(lo, hi);
    double cursor = lo;
    while (next < times.size() && times[next] < hi) {
      if (times[next] > cursor) {
        advance(cursor, times[next], constant);
        cursor = times[next];
      }
      emit_until(cursor);
    }
    advance(cursor, hi, constant);
    emit_until(hi);
  }
  // Anything left sits at the final time (no pieces when T = 0).
  while (out.size() < times.size()) out.push_back(y);
  if (step_count) *step_count = steps;
  return out;
}

/// Solve to T at step and step/2; returns the finer solution.
template <class Model>
TransferResult solve_with_estimate(const Model& model, cplx z, double T, const TransferOptions& opts,
                                   Gauge gauge) {
  if (!(T >= 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be >= 0");
  if (!(opts.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  const double t_end[1] = {T};
  PathSettings s{opts.step, opts.scheme, opts.exploit_constant_pieces};
  TransferResult r;
  r.z = z;
  r.T = T;
  r.gauge = gauge;
  std::size_t steps = 0;
  if (!opts.estimate_error) {
    r.matrix = integrate_path(model, z, t_end, s, &steps).front();
    r.diagnostics.step_used = opts.step;
  } else {
    const Matrix2 coarse = integrate_path(model, z, t_end, s, &steps).front();
    s.step = 0.5 * opts.step;
    r.matrix = integrate_path(model, z, t_end, s, &steps).front();
    r.diagnostics.step_used = s.step;
    r.diagnostics.error_estimate =
        frobenius_norm(coarse - r.matrix) / (15.0 * std::max(1.0, frobenius_norm(r.matrix)));
    if (r.diagnostics.error_estimate > opts.error_tol) {
      throw Error(ErrorCode::StepTooLarge,
                  "step-doubling estimate " + std::to_string(r.diagnostics.error_estimate) + " exceeds tolerance");
    }
  }
  r.diagnostics.steps = steps;
  fill_defects(r.diagnostics, r.matrix, z);
  return r;
}

}  // namespace cansys::detail
