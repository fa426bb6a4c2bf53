#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace cansys {

using cplx = std::complex<double>;

/// Dense 2x2 complex matrix stored row-major as four named entries.
///
/// Value type used for every 2x2 object in the library: transfer matrices,
/// coefficient matrices, j-unitary gauge factors and j-moduli.
struct Matrix2 {
  cplx e11{}, e12{}, e21{}, e22{};

  constexpr Matrix2() = default;
  constexpr Matrix2(cplx a11, cplx a12, cplx a21, cplx a22) : e11(a11), e12(a12), e21(a21), e22(a22) {}

  /// Same as the entry constructor but throws InvalidArgument on NaN/Inf.
  static Matrix2 checked(cplx a11, cplx a12, cplx a21, cplx a22);

  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Matrix2 zero() { return {}; }
  static constexpr Matrix2 diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

  cplx trace() const { return e11 + e22; }
  cplx det() const { return e11 * e22 - e12 * e21; }
  Matrix2 adjoint() const { return {std::conj(e11), std::conj(e21), std::conj(e12), std::conj(e22)}; }
  Matrix2 conj() const { return {std::conj(e11), std::conj(e12), std::conj(e21), std::conj(e22)}; }
  Matrix2 transpose() const { return {e11, e21, e12, e22}; }

  /// Inverse by the adjugate formula; throws SingularModulus if det == 0.
  Matrix2 inverse() const;

  bool is_finite() const;

  Matrix2& operator+=(const Matrix2& o) {
    e11 += o.e11; e12 += o.e12; e21 += o.e21; e22 += o.e22;
    return *this;
  }
  Matrix2& operator-=(const Matrix2& o) {
    e11 -= o.e11; e12 -= o.e12; e21 -= o.e21; e22 -= o.e22;
    return *this;
  }
  Matrix2& operator*=(cplx s) {
    e11 *= s; e12 *= s; e21 *= s; e22 *= s;
    return *this;
  }
  Matrix2& operator*=(const Matrix2& o) { return *this = multiply(*this, o); }

  static Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
    return {a.e11 * b.e11 + a.e12 * b.e21, a.e11 * b.e12 + a.e12 * b.e22,
            a.e21 * b.e11 + a.e22 * b.e21, a.e21 * b.e12 + a.e22 * b.e22};
  }
};

inline Matrix2 operator+(Matrix2 a, const Matrix2& b) { return a += b; }
inline Matrix2 operator-(Matrix2 a, const Matrix2& b) { return a -= b; }
inline Matrix2 operator-(const Matrix2& a) { return {-a.e11, -a.e12, -a.e21, -a.e22}; }
inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) { return Matrix2::multiply(a, b); }
inline Matrix2 operator*(Matrix2 a, cplx s) { return a *= s; }
inline Matrix2 operator*(cplx s, Matrix2 a) { return a *= s; }
inline Matrix2 operator*(Matrix2 a, double s) { return a *= cplx(s); }
inline Matrix2 operator*(double s, Matrix2 a) { return a *= cplx(s); }

inline Matrix2 commutator(const Matrix2& a, const Matrix2& b) { return a * b - b * a; }

double frobenius_norm(const Matrix2& m);
double max_abs(const Matrix2& m);
double spectral_norm(const Matrix2& m);

/// Eigenvalues of the Hermitian part (m + m*)/2, ascending.
std::array<double, 2> hermitian_eigenvalues(const Matrix2& m);

/// max |m - m*| over entries.
double hermitian_defect(const Matrix2& m);

/// exp(m) in closed form: e^{tr/2} (cosh(mu) I + sinh(mu)/mu (m - tr/2 I)), mu^2 = -det(m - tr/2 I).
Matrix2 expm(const Matrix2& m);

}  // namespace cansys
