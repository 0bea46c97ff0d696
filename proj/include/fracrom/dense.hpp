#pragma once

// Dense kernels. Storage is Eigen's MatrixXd/VectorXd (f64, column-major),
// which is exactly the layout the artifact format persists, so no conversion
// layer is needed anywhere.

#include <Eigen/Dense>

#include "fracrom/common.hpp"

namespace fracrom {

using DenseMatrix = Eigen::MatrixXd;
using Vec64 = Eigen::VectorXd;

struct ThinQr {
  DenseMatrix Q;  // m x n, orthonormal columns
  DenseMatrix R;  // n x n, upper triangular
};

// Householder thin QR, nrows >= ncols. Rank deficiency is not an error: R
// simply carries near-zero diagonal entries for the caller to inspect.
ThinQr thin_qr(const DenseMatrix& A);

struct ThinSvd {
  DenseMatrix U;
  Vec64 sigma;  // nonincreasing, nonnegative
  DenseMatrix Vt;
};

ThinSvd thin_svd(const DenseMatrix& A);

struct GeneralizedEig {
  Vec64 lambda;   // ascending
  DenseMatrix U;  // orthonormal: L^{-1} K L^{-T} = U diag(lambda) U^T
  DenseMatrix L;  // lower Cholesky factor of M
};

// Symmetric-definite pencil (K, M): K symmetric (checked, 1e-10 relative),
// M SPD (Cholesky failure reports the offending pivot index).
GeneralizedEig sym_generalized_eig(const DenseMatrix& K, const DenseMatrix& M);

// Minimum-norm least-squares solution X of B X ~= C via SVD with the
// standard cutoff max(m,n) * eps * sigma_max.
DenseMatrix pinv_solve(const DenseMatrix& B, const DenseMatrix& C);

// Throws NumericError if max |A - A^T| > rel_tol * max|A| (+ small absolute
// floor for all-zero matrices). Returns max|A| for reuse.
double require_symmetric(const DenseMatrix& A, const char* what,
                         double rel_tol = 1e-10);

// Dense SPD Cholesky that names the failing pivot on error; returns the
// lower factor. Used where error reporting must be precise (Eigen's LLT
// reports only success/failure).
DenseMatrix dense_cholesky_lower(const DenseMatrix& M, const char* what);

}  // namespace fracrom
