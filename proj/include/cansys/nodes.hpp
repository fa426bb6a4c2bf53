#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace cansys::nodes {

using Mat = Eigen::MatrixXcd;
using Index = Eigen::Index;
using cplx = std::complex<double>;

/// Unitary U on H (+) E, state block first.
struct UnitaryNode {
  Mat U;
  Index nH = 0;
  Index nE = 1;
};

/// Validates shape and U*U = I to tol; throws InvalidArgument.
UnitaryNode make_node(Mat U, Index nH, double tol = 1e-12);

/// w(zeta) = P_E (I - zeta U P_H)^{-1} U |_E, by a dense solve.
/// Throws SingularResolvent when the system is numerically singular.
Mat char_function(const UnitaryNode& n, cplx zeta);

/// Isometry V from d_V in K (+) E1 into K (+) E2, given by an orthonormal
/// basis of d_V (columns of `domain`) and the images of those columns.
struct IsometrySpec {
  Mat domain;  ///< (nK + nE1) x r
  Mat image;   ///< (nK + nE2) x r
  Index nK = 0;
  Index nE1 = 1;
  Index nE2 = 1;
};

struct DefectDims {
  Index nK = 0, nE1 = 0, nE2 = 0;
  Index n1 = 0;  ///< dim of (K + E1) minus d_V
  Index n2 = 0;  ///< dim of (K + E2) minus the range of V
};

/// Arov-Grossman node A : K + E1 + N2 -> K + N1 + E2 with A = V on d_V,
/// the orthogonal projection onto N1 on its complement, and the embedding of
/// N2 into K + E2.
struct AGNode {
  UnitaryNode node;  ///< nH = nK, coefficient space E1 + N2 -> N1 + E2
  DefectDims dims;
  Mat n1_basis;  ///< orthonormal basis of N1 inside K + E1
  Mat n2_basis;  ///< orthonormal basis of N2 inside K + E2
};

DefectDims defect_dims(const IsometrySpec& v);

/// Throws DefectMismatch for inconsistent dimensions or a non-isometric V.
AGNode ag_extension(const IsometrySpec& v, double tol = 1e-12);

/// S(zeta) = [[s1, s], [s0, s2]] : E1 + N2 -> N1 + E2.
struct AGBlocks {
  Mat s1;  ///< N1 <- E1
  Mat s;   ///< N1 <- N2
  Mat s0;  ///< E2 <- E1
  Mat s2;  ///< E2 <- N2

  Mat assembled() const;
};

AGBlocks ag_blocks(const AGNode& a, cplx zeta);

/// w = s0 + s2 E (I - s E)^{-1} s1 for E : N1 -> N2 with ||E|| <= 1.
/// Throws IllConditioned when cond(I - s E) > 1e12.
Mat redheffer(const AGBlocks& s, const Mat& E);

/// W = [[I, -s0], [0, -s1]]^{-1} [[s2, 0], [s, -I]] : N2 + N1 -> E2 + E1.
/// Needs square invertible s1 (n1 = nE1); throws SingularS1.
struct PGTransform {
  Mat W;
  Index rows_top = 0;  ///< dim E2
  Index cols_left = 0; ///< dim N2

  Mat W11() const { return W.topLeftCorner(rows_top, cols_left); }
  Mat W12() const { return W.topRightCorner(rows_top, W.cols() - cols_left); }
  Mat W21() const { return W.bottomLeftCorner(W.rows() - rows_top, cols_left); }
  Mat W22() const { return W.bottomRightCorner(W.rows() - rows_top, W.cols() - cols_left); }
};

PGTransform potapov_ginzburg(const AGBlocks& s);

/// (W11 E + W12)(W21 E + W22)^{-1}.
Mat pg_apply(const PGTransform& w, const Mat& E);

/// Spectral norm of redheffer(s, E) - pg_apply(potapov_ginzburg(s), E).
double pg_consistency(const AGBlocks& s, const Mat& E);

/// Unitary extension of V pairing the defects by a unitary phi : N1 -> N2
/// (needs n1 = n2 and nE1 = nE2).
UnitaryNode unitary_completion(const AGNode& a, const IsometrySpec& v, const Mat& phi);

struct BallMembership {
  bool member = false;
  double residual = 0.0;    ///< || s0 + s2 E s1 - w || for the fitted E
  double param_norm = 0.0;  ///< ||E||
};

/// Is w = s0 + s2 E s1 for some contraction E? (zeta = 0 blocks, s = 0.)
BallMembership ball_membership(const AGBlocks& s_at_zero, const Mat& w, double tol = 1e-10);

double spectral_norm(const Mat& m);

// Random test objects; every draw comes from the supplied engine.
Mat random_gaussian(Index rows, Index cols, std::mt19937_64& rng);
Mat random_unitary(Index n, std::mt19937_64& rng);
/// Contraction with spectral norm drawn uniformly from [0, max_norm].
Mat random_contraction(Index rows, Index cols, std::mt19937_64& rng, double max_norm = 1.0);
UnitaryNode random_node(Index nH, Index nE, std::mt19937_64& rng);
/// Random isometry with an r-dimensional domain.
IsometrySpec random_isometry(Index nK, Index nE1, Index nE2, Index r, std::mt19937_64& rng);

}  // namespace cansys::nodes
