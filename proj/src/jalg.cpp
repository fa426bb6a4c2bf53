#include "cansys/jalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cansys/error.hpp"

namespace cansys::jalg {

Matrix2 signature_matrix(Signature sig) { return sig == Signature::jay ? kJay : kCalJ; }

Matrix2 j_defect(const Matrix2& m, Signature sig) {
  const Matrix2 s = signature_matrix(sig);
  Matrix2 d = m.adjoint() * s * m - s;
  if (sig == Signature::jay) {
    // Force exact Hermitian symmetry; rounding in the product can break it.
    d.e11 = d.e11.real();
    d.e22 = d.e22.real();
    d.e21 = std::conj(d.e12);
  }
  return d;
}

const char* to_string(JClass c) {
  switch (c) {
    case JClass::j_unitary: return "j_unitary";
    case JClass::j_expanding: return "j_expanding";
    case JClass::j_contractive: return "j_contractive";
    case JClass::none: return "none";
  }
  return "none";
}

JClass classify(const Matrix2& m, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "classify needs tol > 0");
  const Matrix2 d = j_defect(m);
  if (max_abs(d) <= tol) return JClass::j_unitary;
  const auto ev = hermitian_eigenvalues(d);
  if (ev[0] >= -tol) return JClass::j_expanding;
  if (ev[1] <= tol) return JClass::j_contractive;
  return JClass::none;
}

Matrix2 psd_sqrt2(const Matrix2& m, double tol) {
  const auto ev = hermitian_eigenvalues(m);
  if (ev[0] < -tol) {
    throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(ev[0]) + " below -tol");
  }
  // Work with the Hermitian part so rounding asymmetry does not leak through.
  Matrix2 h{m.e11.real(), 0.5 * (m.e12 + std::conj(m.e21)), 0.0, m.e22.real()};
  h.e21 = std::conj(h.e12);
  if (ev[0] < 0.0) {
    // Clamp the small negative eigenvalue to zero: h <- h - ev0 * P0.
    const double lo = ev[0];
    const double hi = std::max(ev[1], 0.0);
    if (hi == lo) return Matrix2::zero();
    // Projector onto the top eigenvector is (h - lo I)/(hi - lo); the clamped
    // matrix is hi P with root sqrt(hi) P.
    return (h - Matrix2::identity() * lo) * (std::sqrt(hi) / (hi - lo));
  }
  const double det = std::max(0.0, (h.e11.real() * h.e22.real()) - std::norm(h.e12));
  const double s = std::sqrt(det);
  const double tr = h.e11.real() + h.e22.real();
  const double t = std::sqrt(std::max(0.0, tr + 2.0 * s));
  if (t == 0.0) return Matrix2::zero();
  return (h + Matrix2::identity() * s) * (1.0 / t);
}

Matrix2 orlov_modulus(const Matrix2& w, double tol) {
  if (std::abs(w.det()) <= tol * std::max(1.0, frobenius_norm(w) * frobenius_norm(w))) {
    throw Error(ErrorCode::NotContractive, "j-modulus needs an invertible matrix");
  }
  const Matrix2 gamma = -j_defect(w);
  const auto ev = hermitian_eigenvalues(gamma);
  if (ev[0] < -tol) {
    throw Error(ErrorCode::NotContractive,
                "jay - W* jay W has eigenvalue " + std::to_string(ev[0]) +
                    "; for a j-expanding W with det 1 use the inverse (polar_ju_expanding)");
  }
  const Matrix2 g = psd_sqrt2(gamma, tol);
  const Matrix2 inner = Matrix2::identity() - g * kJay * g;
  const Matrix2 root = psd_sqrt2(inner, tol);
  const Matrix2 mid = (Matrix2::identity() + root).inverse();
  return Matrix2::identity() - kJay * g * mid * g;
}

Polar polar_ju(const Matrix2& w, double tol) {
  const Matrix2 r = orlov_modulus(w, tol);
  if (std::abs(r.det()) <= 1e-14 * std::max(1.0, frobenius_norm(r) * frobenius_norm(r))) {
    throw Error(ErrorCode::SingularModulus, "j-modulus is numerically singular");
  }
  return {w * r.inverse(), r};
}

Polar polar_ju_expanding(const Matrix2& w, double tol) {
  if (std::abs(w.det() - 1.0) > kClassifyTol) {
    throw Error(ErrorCode::NotUnimodular, "inversion route needs det W = 1");
  }
  const Polar inv = polar_ju(w.inverse(), tol);
  return {inv.unitary.inverse(), inv.modulus.inverse()};
}

ArovSplit arov_normalize(const Matrix2& b, double tol) {
  if (std::abs(b.det() - 1.0) > tol) {
    throw Error(ErrorCode::NotUnimodular, "det B = " + std::to_string(std::abs(b.det())));
  }
  const double m21 = std::abs(b.e21);
  const double m22 = std::abs(b.e22);
  if (!(m21 < m22)) {
    throw Error(ErrorCode::HyperbolicOverflow, "|b21| >= |b22|, no hyperbolic rotation clears b21");
  }

  // Diagonal phase giving b21 and b22 a common argument.
  const double phi1 = 0.5 * (std::arg(b.e22) - std::arg(b.e21));
  const Matrix2 u1 = Matrix2::diag(std::polar(1.0, phi1), std::polar(1.0, -phi1));

  // Hyperbolic rotation annihilating the (2,1) entry: tanh(phi2) = -|b21|/|b22|.
  const double r = m21 / m22;
  const double ch = 1.0 / std::sqrt((1.0 - r) * (1.0 + r));
  const double sh = -r * ch;
  const Matrix2 u2{ch, sh, sh, ch};

  const Matrix2 b2 = b * u1 * u2;

  // Diagonal phase making the diagonal positive.
  const double psi = std::arg(b2.e22);
  const Matrix2 u3 = Matrix2::diag(std::polar(1.0, psi), std::polar(1.0, -psi));
  const Matrix2 b3 = b2 * u3;

  const double lambda = std::sqrt((m22 - m21) * (m22 + m21));
  if (lambda < 1.0 - tol) {
    throw Error(ErrorCode::NotExpanding,
                "triangular part has lambda = " + std::to_string(lambda) + " < 1 (B is not j-expanding)");
  }

  const Matrix2 p = u1 * u2 * u3;
  // SU(1,1) inverse: jay P* jay.
  const Matrix2 u = kJay * p.adjoint() * kJay;
  return {{lambda, b3.e12}, u};
}

bool triangular_expanding_check(const TriangularFactor& t, double tol) {
  const double l = t.lambda;
  const double bound = l - 1.0 / l;
  return std::abs(t.h) <= bound + tol;
}

cplx mobius(const Matrix2& m, cplx w, double tol) {
  const cplx a = m.e21 * w;
  const cplx den = a + m.e22;
  const double scale = std::max(std::abs(a), std::abs(m.e22));
  if (std::abs(den) <= tol * scale || den == cplx(0.0)) {
    throw Error(ErrorCode::PoleHit, "Mobius denominator vanishes");
  }
  return (m.e11 * w + m.e12) / den;
}

Matrix2 signature_conjugator() {
  const double s = 1.0 / std::sqrt(2.0);
  return Matrix2{1.0, cplx(0.0, -1.0), 1.0, cplx(0.0, 1.0)} * s;
}

namespace {

template <class T, class Dist>
bool cauchy_tail(const std::vector<T>& seq, double tol, Dist dist) {
  if (seq.size() < 2) return true;
  const auto& last = seq.back();
  for (std::size_t n = seq.size() / 2; n < seq.size(); ++n) {
    if (dist(seq[n], last) > tol) return false;
  }
  return true;
}

}  // namespace

ProductProbe product_convergence_probe(std::span<const TriangularFactor> factors, double tol) {
  ProductProbe probe;
  probe.partial_products.reserve(factors.size());
  probe.lambda_products.reserve(factors.size());
  Matrix2 acc = Matrix2::identity();
  double lam = 1.0;
  for (const auto& f : factors) {
    if (f.lambda < 1.0 || !triangular_expanding_check(f, 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "factor is not j-expanding");
    }
    acc = acc * f.matrix();
    lam *= f.lambda;
    probe.partial_products.push_back(acc);
    probe.lambda_products.push_back(lam);
  }
  probe.products_cauchy = cauchy_tail(probe.partial_products, tol,
                                      [](const Matrix2& a, const Matrix2& b) { return frobenius_norm(a - b); });
  probe.lambdas_cauchy =
      cauchy_tail(probe.lambda_products, tol, [](double a, double b) { return std::abs(a - b); });
  probe.converges = probe.products_cauchy && probe.lambdas_cauchy;
  probe.equivalence_holds = probe.products_cauchy == probe.lambdas_cauchy;
  return probe;
}

bool in_su11(const Matrix2& u, double tol) {
  return max_abs(j_defect(u)) <= tol && std::abs(u.det() - 1.0) <= tol;
}

}  // namespace cansys::jalg
