#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cansys/matrix2.hpp"
#include "cansys/profile.hpp"

namespace cansys {

enum class Scheme {
  magnus4,  ///< two-point Gauss Magnus step with the closed-form 2x2 exponential
  rk4,      ///< classical Runge-Kutta, kept as an independent cross-check
};

enum class Gauge { arov, pdb };

const char* to_string(Gauge g);
const char* to_string(Scheme s);

struct TransferOptions {
  double step = 1e-3;
  Scheme scheme = Scheme::magnus4;
  /// Repeat the solve at step/2 and report the difference.
  bool estimate_error = true;
  /// StepTooLarge is raised when the relative step-doubling estimate exceeds this.
  double error_tol = 1e-6;
  /// Integrate constant pieces in a single exact step (Magnus only).
  bool exploit_constant_pieces = true;
};

struct TransferDiagnostics {
  double step_used = 0.0;
  std::size_t steps = 0;
  /// Relative step-doubling estimate; negative when not computed.
  double error_estimate = -1.0;
  double det_defect = 0.0;
  /// max |M* jay M - jay| (reported for real z).
  double unitarity_defect = 0.0;
  /// Smallest eigenvalue of M jay M* - jay (reported for Im z > 0).
  double expansion_min_eig = 0.0;
};

/// Transfer matrix M(z, T) of d/dt M jay = M (-i z A + B) with M(z, 0) = I.
struct TransferResult {
  Matrix2 matrix;
  cplx z;
  double T = 0.0;
  Gauge gauge = Gauge::arov;
  TransferDiagnostics diagnostics;
};

/// Fills the defect fields of d from the matrix and z.
void fill_defects(TransferDiagnostics& d, const Matrix2& m, cplx z);

TransferResult transfer(const ArovProfile& p, cplx z, double T, const TransferOptions& opts = {});

/// M(z, t) at each of the nondecreasing times (no error estimate).
std::vector<Matrix2> transfer_path(const ArovProfile& p, cplx z, std::span<const double> times,
                                   const TransferOptions& opts = {});

/// Transfer matrix at z = i, which is upper triangular in the A-gauge.
struct TransferAtI {
  TransferResult result;
  double lambda = 1.0;
  cplx h{};
  /// exp of the integral of a over [0, T].
  double lambda_expected = 1.0;
  double lambda_rel_error = 0.0;
};

/// Throws GaugeViolation when |m21(i, T)| > gauge_tol.
TransferAtI transfer_at_i(const ArovProfile& p, double T, const TransferOptions& opts = {},
                          double gauge_tol = 1e-7);

/// True when M jay M* - jay does not decrease between consecutive grid points
/// (Im z > 0 only). tol is relative to the size of the later term.
bool monotonicity_check(const ArovProfile& p, cplx z, std::span<const double> grid,
                        const TransferOptions& opts = {}, double tol = 1e-8);

}  // namespace cansys
