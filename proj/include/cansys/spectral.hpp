#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cansys/gauge.hpp"
#include "cansys/kernels.hpp"
#include "cansys/matrix2.hpp"
#include "cansys/profile.hpp"
#include "cansys/transfer.hpp"

namespace cansys {

struct SchurOptions {
  // Grid evaluation runs without step doubling by default: at large |x| the
  // relative estimate tracks phase error of a w that is already tiny.
  TransferOptions transfer{.step = 1e-3, .estimate_error = false};
  /// Cauchy tolerance for the tail iteration used when E != 0.
  double e_tol = 1e-8;
  /// Largest T tried by the tail iteration.
  double t_cap = 1e6;
  Exec exec = Exec::parallel;
};

/// Schur function w(z) = lim M(z,T)<E> (Mobius action). For E = 0 this is
/// m12/m22 at T0, exact because the free tail only rescales both entries.
/// Otherwise T = T0 + s doubles until successive values agree to e_tol;
/// throws NoConvergence past t_cap (always for real z unless E = 0).
cplx schur_at(const ArovProfile& p, cplx z, cplx E = 0.0, const SchurOptions& opts = {});

/// Same function from the PdB chain; needs a Hamiltonian with a tail.
cplx schur_at_pdb(const PdBHamiltonian& H, cplx z, const TransferOptions& opts = {});

struct SchurGrid {
  std::vector<double> theta;
  std::vector<double> x;
  /// Quadrature weights of dx / (pi (1 + x^2)); they sum to 1.
  std::vector<double> weights;
  std::vector<cplx> w;
  cplx w_at_i{};
  cplx E{};
};

SchurGrid schur_grid(const ArovProfile& p, std::size_t n_nodes, const SchurOptions& opts = {});

/// Grid of a given function of x (test and CLI helper); w_at_i from w_at_i_value.
SchurGrid synthetic_grid(std::size_t n_nodes, const std::function<cplx(double)>& w, cplx w_at_i_value = 0.0);

struct EntropyOptions {
  std::size_t min_nodes = 64;
  std::size_t max_nodes = 16384;
  double tol = 1e-6;
  double floor = 1e-15;
};

struct EntropySample {
  std::size_t nodes = 0;
  double estimate = 0.0;
  std::size_t clamps = 0;
};

struct EntropyReport {
  double value = 0.0;
  /// Estimates kept growing at the node cap while clamps accumulated.
  bool infinite = false;
  bool converged = false;
  std::vector<EntropySample> history;
};

/// (1/pi) int log(1/(1-|w|^2)) dx/(1+x^2) on a fixed grid; values of
/// 1-|w|^2 below floor are clamped and counted.
double entropy_estimate(const SchurGrid& g, double floor = 1e-15, std::size_t* clamps = nullptr);

/// Node doubling from min_nodes until successive estimates differ by < tol or
/// max_nodes is reached. grid_at(n) must return an n-node grid.
EntropyReport entropy(const std::function<SchurGrid(std::size_t)>& grid_at, const EntropyOptions& opts = {});

EntropyReport entropy(const ArovProfile& p, const EntropyOptions& opts = {}, const SchurOptions& sopts = {});

/// Exponential type: integral of sqrt(a^2 - b^2 - c^2) over [0, T].
double sigma_type(const ArovProfile& p, double T);

struct MeanLogCheck {
  double lhs = 0.0;  ///< (1/pi) int log|m22(x,T)| dx/(1+x^2)
  double rhs = 0.0;  ///< log m22(i,T) - sigma_T
  double residual = 0.0;
};

MeanLogCheck mean_log_a22_check(const ArovProfile& p, double T, std::size_t n_nodes,
                                const SchurOptions& opts = {});

struct SigmaPoint {
  double T = 0.0;
  double integral_a = 0.0;
  double sigma = 0.0;
  /// 2 (int a - sigma_T); constant once T >= T0.
  double gap = 0.0;
};

struct SumRuleOptions {
  EntropyOptions entropy{.min_nodes = 64, .max_nodes = 2048};
  SchurOptions schur;
  /// |lhs - rhs| <= max(abs_tol, rel_tol * rhs) counts as agreement.
  double abs_tol = 1e-3;
  double rel_tol = 1e-2;
  std::size_t sigma_points = 8;
};

struct SumRuleReport {
  double lhs_entropy = 0.0;
  double rhs_coefficient_integral = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  bool agrees = false;
  EntropyReport entropy;
  std::vector<SigmaPoint> sigma_series;
  cplx w_at_i{};
};

SumRuleReport sumrule(const ArovProfile& p, const SumRuleOptions& opts = {});

/// Density (1 - |w|^2) / |1 + w|^2 of the absolutely continuous measure.
double herglotz_density(cplx w);

struct HerglotzCheck {
  double lhs = 0.0;  ///< -(1/pi) int log mu'(x) dx/(1+x^2)
  double rhs = 0.0;  ///< entropy + 2 log(1 + w(i))
  double residual = 0.0;
  cplx w_at_i{};
};

/// Needs w(i) real (|Im w(i)| <= imag_tol) and > -1; throws ComplexWAtI.
HerglotzCheck herglotz_identity_check(const ArovProfile& p, std::size_t n_nodes, const SchurOptions& opts = {},
                                      double imag_tol = 1e-8);

}  // namespace cansys
