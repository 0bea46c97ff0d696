#pragma once

#include <memory>

#include "fracrom/csr.hpp"

namespace fracrom {

// Direct sparse Cholesky of an SPD CsrMatrix (Eigen SimplicialLLT with AMD
// ordering behind the scenes). Factorizations are immutable after
// construction and safe to share across threads for concurrent solves.
class SparseCholesky {
 public:
  // Throws NumericError (naming the failing pivot) if A is not SPD, and
  // requires A symmetric to 1e-10 relative.
  explicit SparseCholesky(const CsrMatrix& A);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;

  Index dim() const { return n_; }

  Vec64 solve(const Vec64& b) const;
  void solve_into(const double* b, double* x) const;  // hot path, length dim()

  // Returns g = L_M * omega where A = L_M L_M^T (including the fill-reducing
  // permutation), so cov(g) = A when omega ~ N(0, I). Used for the
  // white-noise load.
  Vec64 apply_factor(const Vec64& omega) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
};

// Free-function spelling used throughout the solver code.
inline SparseCholesky sparse_cholesky(const CsrMatrix& A) {
  return SparseCholesky(A);
}
inline Vec64 solve(const SparseCholesky& F, const Vec64& b) { return F.solve(b); }

}  // namespace fracrom
