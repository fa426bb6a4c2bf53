#include "cansys/matrix2.hpp"

#include <algorithm>

#include "cansys/error.hpp"

namespace cansys {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// sinh(mu)/mu, even in mu, so the branch of the square root does not matter.
cplx sinhc(cplx mu) {
  if (std::abs(mu) < 1e-4) {
    const cplx m2 = mu * mu;
    return 1.0 + m2 / 6.0 * (1.0 + m2 / 20.0 * (1.0 + m2 / 42.0));
  }
  return std::sinh(mu) / mu;
}

}  // namespace

Matrix2 Matrix2::checked(cplx a11, cplx a12, cplx a21, cplx a22) {
  Matrix2 m{a11, a12, a21, a22};
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "matrix entry is not finite");
  return m;
}

bool Matrix2::is_finite() const { return finite(e11) && finite(e12) && finite(e21) && finite(e22); }

Matrix2 Matrix2::inverse() const {
  const cplx d = det();
  if (d == cplx(0.0)) throw Error(ErrorCode::SingularModulus, "inverse of a singular 2x2 matrix");
  return Matrix2{e22, -e12, -e21, e11} * (1.0 / d);
}

double frobenius_norm(const Matrix2& m) {
  return std::sqrt(std::norm(m.e11) + std::norm(m.e12) + std::norm(m.e21) + std::norm(m.e22));
}

double max_abs(const Matrix2& m) {
  return std::max({std::abs(m.e11), std::abs(m.e12), std::abs(m.e21), std::abs(m.e22)});
}

double spectral_norm(const Matrix2& m) {
  // Largest eigenvalue of m* m.
  const auto ev = hermitian_eigenvalues(m.adjoint() * m);
  return std::sqrt(std::max(ev[1], 0.0));
}

std::array<double, 2> hermitian_eigenvalues(const Matrix2& m) {
  const double a = m.e11.real();
  const double d = m.e22.real();
  const cplx b = 0.5 * (m.e12 + std::conj(m.e21));
  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(b));
  return {mean - half_gap, mean + half_gap};
}

double hermitian_defect(const Matrix2& m) { return max_abs(m - m.adjoint()); }

Matrix2 expm(const Matrix2& m) {
  const cplx half_tr = 0.5 * m.trace();
  const Matrix2 traceless = m - Matrix2::identity() * half_tr;
  const cplx mu = std::sqrt(-traceless.det());
  Matrix2 out = Matrix2::identity() * std::cosh(mu) + traceless * sinhc(mu);
  if (half_tr != cplx(0.0)) out *= std::exp(half_tr);
  return out;
}

}  // namespace cansys
