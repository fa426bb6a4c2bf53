#include "cansys/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cansys/error.hpp"
#include "cansys/jalg.hpp"
#include "chain.hpp"

namespace cansys {

namespace {

struct ArovModel {
  const ArovProfile& p;

  std::vector<std::pair<double, double>> pieces(double T) const { return p.pieces(T); }
  bool constant_between(double lo, double hi) const { return p.constant_between(lo, hi); }
  std::pair<Matrix2, Matrix2> coefficients(double t, Side side) const { return coeff_matrices(p, t, side); }
};

void require_upper_half_plane(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.imag() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "z must be finite with Im z >= 0");
  }
}

}  // namespace

const char* to_string(Gauge g) { return g == Gauge::arov ? "arov" : "pdb"; }
const char* to_string(Scheme s) { return s == Scheme::magnus4 ? "magnus4" : "rk4"; }

void fill_defects(TransferDiagnostics& d, const Matrix2& m, cplx z) {
  d.det_defect = std::abs(m.det() - 1.0);
  d.unitarity_defect = max_abs(jalg::j_defect(m));
  const Matrix2 expansion = m * jalg::kJay * m.adjoint() - jalg::kJay;
  d.expansion_min_eig = z.imag() > 0.0 ? hermitian_eigenvalues(expansion)[0] : 0.0;
}

TransferResult transfer(const ArovProfile& p, cplx z, double T, const TransferOptions& opts) {
  require_upper_half_plane(z);
  return detail::solve_with_estimate(ArovModel{p}, z, T, opts, Gauge::arov);
}

std::vector<Matrix2> transfer_path(const ArovProfile& p, cplx z, std::span<const double> times,
                                   const TransferOptions& opts) {
  require_upper_half_plane(z);
  return detail::integrate_path(ArovModel{p}, z, times,
                                {opts.step, opts.scheme, opts.exploit_constant_pieces});
}

TransferAtI transfer_at_i(const ArovProfile& p, double T, const TransferOptions& opts, double gauge_tol) {
  TransferAtI out;
  out.result = transfer(p, cplx(0.0, 1.0), T, opts);
  const Matrix2& m = out.result.matrix;
  if (std::abs(m.e21) > gauge_tol) {
    throw Error(ErrorCode::GaugeViolation, "|m21(i, T)| = " + std::to_string(std::abs(m.e21)));
  }
  out.lambda = m.e22.real();
  out.h = m.e12;
  out.lambda_expected = std::exp(integral_a(p, T));
  out.lambda_rel_error = std::abs(m.e22 - out.lambda_expected) / out.lambda_expected;
  return out;
}

bool monotonicity_check(const ArovProfile& p, cplx z, std::span<const double> grid, const TransferOptions& opts,
                        double tol) {
  if (!(z.imag() > 0.0)) throw Error(ErrorCode::InvalidArgument, "monotonicity needs Im z > 0");
  const auto path = transfer_path(p, z, grid, opts);
  auto defect = [](const Matrix2& m) { return m * jalg::kJay * m.adjoint(); };
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Matrix2 later = defect(path[k]);
    const Matrix2 diff = later - defect(path[k - 1]);
    if (hermitian_eigenvalues(diff)[0] < -tol * std::max(1.0, max_abs(later))) return false;
  }
  return true;
}

}  // namespace cansys
