#pragma once

#include <string>
#include <vector>

#include "fracrom/dense.hpp"

namespace fracrom {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

// Compressed sparse row storage. Within each row column indices are strictly
// increasing; duplicates are summed at construction. Explicit zeros are kept
// (pattern unions from arithmetic stay structural).
struct CsrMatrix {
  Index nrows = 0;
  Index ncols = 0;
  std::vector<Index> row_ptr;  // size nrows + 1
  std::vector<Index> col_idx;
  std::vector<double> values;

  Index nnz() const { return static_cast<Index>(values.size()); }

  static CsrMatrix from_triplets(Index nrows, Index ncols,
                                 std::vector<Triplet> entries);
  static CsrMatrix identity(Index n);
  static CsrMatrix from_dense(const DenseMatrix& A);  // keeps nonzeros only

  DenseMatrix to_dense() const;
  void check_valid() const;  // structural invariants; throws on violation
  bool is_symmetric(double rel_tol = 1e-10) const;
  double max_abs() const;
  double frobenius_norm() const;
};

Vec64 spmv(const CsrMatrix& A, const Vec64& x);
// Hot-path variant: y must point at A.nrows doubles, x at A.ncols.
void spmv_into(const CsrMatrix& A, const double* x, double* y);

inline Vec64 operator*(const CsrMatrix& A, const Vec64& x) { return spmv(A, x); }

// c1*A + c2*B with merged (union) sparsity pattern.
CsrMatrix sparse_add_scaled(const CsrMatrix& A, const CsrMatrix& B, double c1,
                            double c2);

// MatrixMarket coordinate format, for debugging dumps.
void write_matrix_market(const std::string& path, const CsrMatrix& A);
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace fracrom
