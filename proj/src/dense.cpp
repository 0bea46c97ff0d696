#include "fracrom/dense.hpp"

#include <cmath>
#include <string>

namespace fracrom {

ThinQr thin_qr(const DenseMatrix& A) {
  if (A.rows() < A.cols())
    throw DimensionError("thin_qr: need nrows >= ncols, got " +
                         std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  Eigen::HouseholderQR<DenseMatrix> qr(A);
  ThinQr out;
  out.Q = qr.householderQ() * DenseMatrix::Identity(A.rows(), A.cols());
  out.R = qr.matrixQR().topRows(A.cols()).triangularView<Eigen::Upper>();
  return out;
}

ThinSvd thin_svd(const DenseMatrix& A) {
  if (!A.allFinite()) throw NumericError("thin_svd: input has non-finite entries");
  Eigen::BDCSVD<DenseMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out;
  out.U = svd.matrixU();
  out.sigma = svd.singularValues();
  out.Vt = svd.matrixV().transpose();
  return out;
}

double require_symmetric(const DenseMatrix& A, const char* what, double rel_tol) {
  if (A.rows() != A.cols())
    throw DimensionError(std::string(what) + ": matrix not square");
  const double scale = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > rel_tol * scale + 1e-300)
    throw NumericError(std::string(what) + ": matrix not symmetric (max asymmetry " +
                       format_double(asym) + " vs scale " + format_double(scale) + ")");
  return scale;
}

DenseMatrix dense_cholesky_lower(const DenseMatrix& M, const char* what) {
  // Plain right-looking Cholesky so a failure can name its pivot; dimensions
  // here are at most the reduced basis size, so performance is irrelevant.
  const Eigen::Index n = M.rows();
  DenseMatrix L = DenseMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = M(j, j) - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0))
      throw NumericError(std::string(what) + ": not positive definite, pivot " +
                         std::to_string(j) + " = " + format_double(d));
    d = std::sqrt(d);
    L(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i)
      L(i, j) = (M(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / d;
  }
  return L;
}

GeneralizedEig sym_generalized_eig(const DenseMatrix& K, const DenseMatrix& M) {
  require_symmetric(K, "sym_generalized_eig: K");
  require_symmetric(M, "sym_generalized_eig: M");
  if (K.rows() != M.rows())
    throw DimensionError("sym_generalized_eig: K and M dimensions differ");

  GeneralizedEig out;
  out.L = dense_cholesky_lower(M, "sym_generalized_eig: M");

  // C = L^{-1} K L^{-T}, symmetrized to kill the triangular-solve rounding.
  DenseMatrix C = out.L.triangularView<Eigen::Lower>().solve(K);
  C = out.L.triangularView<Eigen::Lower>().solve(C.transpose().eval());
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(C);
  if (eig.info() != Eigen::Success)
    throw NumericError("sym_generalized_eig: eigensolver failed to converge");
  out.lambda = eig.eigenvalues();
  out.U = eig.eigenvectors();
  return out;
}

DenseMatrix pinv_solve(const DenseMatrix& B, const DenseMatrix& C) {
  if (B.rows() != C.rows())
    throw DimensionError("pinv_solve: row counts differ");
  Eigen::BDCSVD<DenseMatrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec64& s = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(B.rows(), B.cols())) *
                        std::numeric_limits<double>::epsilon() *
                        (s.size() > 0 ? s(0) : 0.0);
  Vec64 sinv = Vec64::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) sinv(i) = 1.0 / s(i);
  return svd.matrixV() * sinv.asDiagonal() * (svd.matrixU().transpose() * C);
}

}  // namespace fracrom
