#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cansys/matrix2.hpp"

/// 2x2 linear algebra in the indefinite metric jay = diag(-1, 1).
namespace cansys::jalg {

enum class Signature {
  jay,   ///< diag(-1, 1)
  calj,  ///< [[0, 1], [-1, 0]]
};

Matrix2 signature_matrix(Signature sig);

inline constexpr Matrix2 kJay = Matrix2::diag(-1.0, 1.0);
inline constexpr Matrix2 kCalJ{0.0, 1.0, -1.0, 0.0};

inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kClassifyTol = 1e-8;

/// M* sig M - sig. Hermitian for sig = jay.
Matrix2 j_defect(const Matrix2& m, Signature sig = Signature::jay);

enum class JClass { j_unitary, j_expanding, j_contractive, none };

const char* to_string(JClass c);

/// Classifies by the eigenvalues of j_defect(m, jay).
JClass classify(const Matrix2& m, double tol = kClassifyTol);

/// Unique PSD square root of a Hermitian PSD matrix.
/// Eigenvalues in [-tol, 0) are treated as zero; below -tol throws NotPSD.
Matrix2 psd_sqrt2(const Matrix2& m, double tol = kIdentityTol);

/// j-modulus R of a j-contractive W (explicit formula of Orlov):
///   R = I - jay G (I + (I - G jay G)^{1/2})^{-1} G,  G = (jay - W* jay W)^{1/2}.
Matrix2 orlov_modulus(const Matrix2& w, double tol = kIdentityTol);

struct Polar {
  Matrix2 unitary;  ///< j-unitary factor
  Matrix2 modulus;  ///< j-hermitian factor
};

/// W = U R with R = orlov_modulus(W).
Polar polar_ju(const Matrix2& w, double tol = kIdentityTol);

/// Left polar form of a j-expanding W with det W = 1: W = L V where
/// W^{-1} = U R, L = R^{-1} (j-hermitian) and V = U^{-1} (j-unitary).
/// Returned as {unitary = V, modulus = L}; note the order W = modulus * unitary.
Polar polar_ju_expanding(const Matrix2& w, double tol = kIdentityTol);

struct TriangularFactor {
  double lambda = 1.0;
  cplx h{};

  /// [[1/lambda, h], [0, lambda]]
  Matrix2 matrix() const { return {1.0 / lambda, h, 0.0, lambda}; }
};

struct ArovSplit {
  TriangularFactor factor;
  Matrix2 unitary;  ///< in SU(1,1)
};

/// B = [[1/lambda, h], [0, lambda]] U with lambda >= 1, U in SU(1,1).
/// Requires det B = 1 and |b21| < |b22|; throws NotUnimodular,
/// HyperbolicOverflow, or NotExpanding when lambda < 1.
ArovSplit arov_normalize(const Matrix2& b, double tol = kClassifyTol);

/// |h| <= lambda - 1/lambda, i.e. det(A* jay A - jay) >= 0 for the triangular A.
bool triangular_expanding_check(const TriangularFactor& t, double tol = 0.0);

/// (m11 w + m12) / (m21 w + m22); throws PoleHit when the denominator is
/// below tol relative to the size of its two terms.
cplx mobius(const Matrix2& m, cplx w, double tol = 1e-14);

/// Fixed unitary U with i U calj U* = jay.
Matrix2 signature_conjugator();

struct ProductProbe {
  bool converges = false;
  bool products_cauchy = false;
  bool lambdas_cauchy = false;
  bool equivalence_holds = false;
  std::vector<Matrix2> partial_products;
  std::vector<double> lambda_products;
};

/// Partial products B_n = A_1 ... A_n of triangular j-expanding factors and
/// Lambda_n = prod lambda_k. A sequence counts as Cauchy on the prefix when
/// every term of the second half lies within tol of the last term.
ProductProbe product_convergence_probe(std::span<const TriangularFactor> factors, double tol = 1e-8);

/// SU(1,1) membership: U* jay U = jay and det U = 1 within tol.
bool in_su11(const Matrix2& u, double tol = kClassifyTol);

}  // namespace cansys::jalg
