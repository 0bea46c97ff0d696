#include "fracrom/sparse_cholesky.hpp"

#include <Eigen/SparseCholesky>

namespace fracrom {

namespace {
using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;

// Our CSR buffers of a symmetric matrix are byte-compatible with Eigen's CSC
// view of the same matrix, so the factorization can read them in place.
Eigen::Map<const SpMat> map_symmetric_csr(const CsrMatrix& A) {
  return Eigen::Map<const SpMat>(A.nrows, A.ncols, A.nnz(), A.row_ptr.data(),
                                 A.col_idx.data(), A.values.data());
}
}  // namespace

struct SparseCholesky::Impl {
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<Index>> llt;
};

SparseCholesky::SparseCholesky(const CsrMatrix& A) : impl_(new Impl), n_(A.nrows) {
  A.check_valid();
  if (A.nrows != A.ncols)
    throw DimensionError("sparse_cholesky: matrix not square");
  if (!A.is_symmetric())
    throw NumericError("sparse_cholesky: matrix not symmetric");
  impl_->llt.compute(map_symmetric_csr(A));
  if (impl_->llt.info() != Eigen::Success) {
    // LLT only reports failure; redo as LDLT to locate the bad pivot.
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<Index>> ldlt;
    ldlt.compute(map_symmetric_csr(A));
    std::string where = "unknown pivot";
    if (ldlt.info() == Eigen::Success) {
      const auto& D = ldlt.vectorD();
      for (Eigen::Index k = 0; k < D.size(); ++k) {
        if (!(D(k) > 0.0)) {
          // Map factor position back through the fill-reducing permutation.
          const Index orig = ldlt.permutationPinv().indices()(k);
          where = "pivot " + std::to_string(k) + " (original row " +
                  std::to_string(orig) + ", value " + format_double(D(k)) + ")";
          break;
        }
      }
    }
    throw NumericError("sparse_cholesky: matrix not positive definite at " + where);
  }
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

Vec64 SparseCholesky::solve(const Vec64& b) const {
  if (static_cast<Index>(b.size()) != n_)
    throw DimensionError("SparseCholesky::solve: rhs length mismatch");
  return impl_->llt.solve(b);
}

void SparseCholesky::solve_into(const double* b, double* x) const {
  Eigen::Map<const Vec64> bm(b, n_);
  Eigen::Map<Vec64> xm(x, n_);
  xm = impl_->llt.solve(bm);
}

Vec64 SparseCholesky::apply_factor(const Vec64& omega) const {
  if (static_cast<Index>(omega.size()) != n_)
    throw DimensionError("SparseCholesky::apply_factor: length mismatch");
  // Eigen factorizes P A P^T = L L^T, so A = (P^T L)(P^T L)^T.
  Vec64 t = impl_->llt.matrixL() * omega;
  return impl_->llt.permutationPinv() * t;
}

}  // namespace fracrom
