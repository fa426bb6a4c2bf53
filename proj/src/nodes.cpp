#include "cansys/nodes.hpp"

#include <string>

#include "cansys/error.hpp"

namespace cansys::nodes {

namespace {

[[noreturn]] void fail(ErrorCode c, const std::string& what) { throw Error(c, what); }

// Orthonormal basis of the orthogonal complement of the span of q's columns.
Mat complement(const Mat& q, Index n) {
  if (q.cols() == 0) return Mat::Identity(n, n);
  const Mat full = q.householderQr().householderQ() * Mat::Identity(n, n);
  return full.rightCols(n - q.cols());
}

}  // namespace

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

UnitaryNode make_node(Mat U, Index nH, double tol) {
  if (U.rows() != U.cols()) fail(ErrorCode::InvalidArgument, "node operator must be square");
  if (nH < 0 || nH >= U.rows()) fail(ErrorCode::InvalidArgument, "node needs 0 <= nH < size");
  const Index n = U.rows();
  const double defect = (U.adjoint() * U - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol) fail(ErrorCode::InvalidArgument, "node operator is not unitary (defect " + std::to_string(defect) + ")");
  return {std::move(U), nH, n - nH};
}

Mat char_function(const UnitaryNode& node, cplx zeta) {
  const Index n = node.U.rows();
  Mat up = node.U;
  up.rightCols(node.nE).setZero();  // U P_H
  const Mat lhs = Mat::Identity(n, n) - zeta * up;
  const Eigen::PartialPivLU<Mat> lu(lhs);
  if (lu.rcond() < 1e-14) fail(ErrorCode::SingularResolvent, "I - zeta U P_H is singular");
  const Mat x = lu.solve(node.U.rightCols(node.nE));
  return x.bottomRows(node.nE);
}

DefectDims defect_dims(const IsometrySpec& v) {
  const Index r = v.domain.cols();
  return {v.nK, v.nE1, v.nE2, v.nK + v.nE1 - r, v.nK + v.nE2 - r};
}

AGNode ag_extension(const IsometrySpec& v, double tol) {
  if (v.nK < 0 || v.nE1 < 1 || v.nE2 < 1) fail(ErrorCode::DefectMismatch, "need nK >= 0 and nE1, nE2 >= 1");
  if (v.domain.rows() != v.nK + v.nE1 || v.image.rows() != v.nK + v.nE2) {
    fail(ErrorCode::DefectMismatch, "basis row counts do not match K + E1 / K + E2");
  }
  if (v.domain.cols() != v.image.cols()) fail(ErrorCode::DefectMismatch, "domain and image ranks differ");
  const Index r = v.domain.cols();
  if (r > v.nK + v.nE1 || r > v.nK + v.nE2) fail(ErrorCode::DefectMismatch, "rank exceeds the space dimension");
  const Mat I_r = Mat::Identity(r, r);
  if (r > 0 && ((v.domain.adjoint() * v.domain - I_r).cwiseAbs().maxCoeff() > tol ||
                (v.image.adjoint() * v.image - I_r).cwiseAbs().maxCoeff() > tol)) {
    fail(ErrorCode::DefectMismatch, "domain basis or its image is not orthonormal");
  }

  AGNode a;
  a.dims = defect_dims(v);
  const auto& d = a.dims;
  a.n1_basis = complement(v.domain, d.nK + d.nE1);
  a.n2_basis = complement(v.image, d.nK + d.nE2);

  // Columns [K; E1; N2], rows [K; N1; E2].
  const Index n = d.nK + d.nE1 + d.n2;
  Mat A = Mat::Zero(n, n);
  const Mat V = v.image * v.domain.adjoint();  // (K+E2) x (K+E1)
  A.topLeftCorner(d.nK, d.nK + d.nE1) = V.topRows(d.nK);
  A.bottomLeftCorner(d.nE2, d.nK + d.nE1) = V.bottomRows(d.nE2);
  A.block(d.nK, 0, d.n1, d.nK + d.nE1) = a.n1_basis.adjoint();
  A.topRightCorner(d.nK, d.n2) = a.n2_basis.topRows(d.nK);
  A.bottomRightCorner(d.nE2, d.n2) = a.n2_basis.bottomRows(d.nE2);

  a.node = make_node(std::move(A), d.nK, std::max(tol, 1e-12));
  return a;
}

Mat AGBlocks::assembled() const {
  Mat out(s1.rows() + s0.rows(), s1.cols() + s.cols());
  out << s1, s, s0, s2;
  return out;
}

AGBlocks ag_blocks(const AGNode& a, cplx zeta) {
  const Mat S = char_function(a.node, zeta);
  const auto& d = a.dims;
  return {S.topLeftCorner(d.n1, d.nE1), S.topRightCorner(d.n1, d.n2), S.bottomLeftCorner(d.nE2, d.nE1),
          S.bottomRightCorner(d.nE2, d.n2)};
}

Mat redheffer(const AGBlocks& b, const Mat& E) {
  if (E.rows() != b.s.cols() || E.cols() != b.s.rows()) {
    fail(ErrorCode::InvalidArgument, "parameter must map N1 to N2");
  }
  if (spectral_norm(E) > 1.0 + 1e-12) fail(ErrorCode::InvalidArgument, "parameter must be a contraction");
  const Index n1 = b.s.rows();
  if (n1 == 0) return b.s0;
  const Mat M = Mat::Identity(n1, n1) - b.s * E;
  const auto sv = Eigen::JacobiSVD<Mat>(M).singularValues();
  if (sv(sv.size() - 1) * 1e12 < sv(0)) fail(ErrorCode::IllConditioned, "I - s E is ill conditioned");
  return b.s0 + b.s2 * E * M.partialPivLu().solve(b.s1);
}

PGTransform potapov_ginzburg(const AGBlocks& b) {
  const Index nE1 = b.s1.cols();
  const Index n1 = b.s1.rows();
  const Index nE2 = b.s0.rows();
  const Index n2 = b.s.cols();
  if (n1 != nE1) fail(ErrorCode::SingularS1, "s1 is not square (dim N1 != dim E1)");
  if (n1 > 0) {
    const auto sv = Eigen::JacobiSVD<Mat>(b.s1).singularValues();
    if (!(sv(sv.size() - 1) > 1e-14 * std::max(1.0, sv(0)))) fail(ErrorCode::SingularS1, "s1 is singular");
  }
  Mat L = Mat::Zero(nE2 + n1, nE2 + nE1);
  L.topLeftCorner(nE2, nE2).setIdentity();
  L.topRightCorner(nE2, nE1) = -b.s0;
  L.bottomRightCorner(n1, nE1) = -b.s1;
  Mat R = Mat::Zero(nE2 + n1, n2 + n1);
  R.topLeftCorner(nE2, n2) = b.s2;
  R.bottomLeftCorner(n1, n2) = b.s;
  R.bottomRightCorner(n1, n1) = -Mat::Identity(n1, n1);
  return {L.partialPivLu().solve(R), nE2, n2};
}

Mat pg_apply(const PGTransform& w, const Mat& E) {
  const Mat num = w.W11() * E + w.W12();
  const Mat den = w.W21() * E + w.W22();
  if (den.size() == 0) return num;
  // X den = num  <=>  den^T X^T = num^T
  return den.transpose().partialPivLu().solve(num.transpose()).transpose();
}

double pg_consistency(const AGBlocks& s, const Mat& E) {
  return spectral_norm(redheffer(s, E) - pg_apply(potapov_ginzburg(s), E));
}

UnitaryNode unitary_completion(const AGNode& a, const IsometrySpec& v, const Mat& phi) {
  const auto& d = a.dims;
  if (d.n1 != d.n2 || d.nE1 != d.nE2) fail(ErrorCode::DefectMismatch, "completion needs n1 = n2 and nE1 = nE2");
  if (phi.rows() != d.n2 || phi.cols() != d.n1) fail(ErrorCode::DefectMismatch, "phi must map N1 to N2");
  const Mat U = v.image * v.domain.adjoint() + a.n2_basis * phi * a.n1_basis.adjoint();
  return make_node(U, d.nK, 1e-10);
}

BallMembership ball_membership(const AGBlocks& b, const Mat& w, double tol) {
  BallMembership m;
  Mat E = Mat::Zero(b.s2.cols(), b.s1.rows());
  if (E.size() > 0) {
    const Mat target = w - b.s0;
    const Mat left = b.s2.completeOrthogonalDecomposition().pseudoInverse();
    const Mat right = b.s1.completeOrthogonalDecomposition().pseudoInverse();
    E = left * target * right;
  }
  m.residual = spectral_norm(b.s0 + b.s2 * E * b.s1 - w);
  m.param_norm = spectral_norm(E);
  m.member = m.residual <= tol && m.param_norm <= 1.0 + tol;
  return m;
}

Mat random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      m(i, j) = cplx(re, g(rng));
    }
  }
  return m;
}

Mat random_unitary(Index n, std::mt19937_64& rng) {
  if (n == 0) return Mat(0, 0);
  const Mat g = random_gaussian(n, n, rng);
  const Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  // Fix the column phases so the distribution is Haar.
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Mat random_contraction(Index rows, Index cols, std::mt19937_64& rng, double max_norm) {
  Mat m = random_gaussian(rows, cols, rng);
  const double n = spectral_norm(m);
  std::uniform_real_distribution<double> u(0.0, max_norm);
  if (n > 0.0) m *= u(rng) / n;
  return m;
}

UnitaryNode random_node(Index nH, Index nE, std::mt19937_64& rng) {
  return make_node(random_unitary(nH + nE, rng), nH);
}

IsometrySpec random_isometry(Index nK, Index nE1, Index nE2, Index r, std::mt19937_64& rng) {
  if (r < 0 || r > nK + nE1 || r > nK + nE2) fail(ErrorCode::DefectMismatch, "rank out of range");
  const Mat d = random_unitary(nK + nE1, rng).leftCols(r);
  const Mat i = random_unitary(nK + nE2, rng).leftCols(r);
  return {d, i, nK, nE1, nE2};
}

}  // namespace cansys::nodes
