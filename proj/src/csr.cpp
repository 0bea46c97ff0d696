#include "fracrom/csr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fracrom {

CsrMatrix CsrMatrix::from_triplets(Index nrows, Index ncols,
                                   std::vector<Triplet> entries) {
  if (nrows < 0 || ncols < 0)
    throw DimensionError("from_triplets: negative dimensions");
  for (const auto& t : entries)
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw DimensionError("from_triplets: entry (" + std::to_string(t.row) +
                           "," + std::to_string(t.col) + ") outside " +
                           std::to_string(nrows) + "x" + std::to_string(ncols));
  // Stable sort keeps duplicate accumulation order deterministic (assembly
  // order), which the bit-reproducibility contract relies on.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  CsrMatrix A;
  A.nrows = nrows;
  A.ncols = ncols;
  A.row_ptr.assign(static_cast<size_t>(nrows) + 1, 0);
  A.col_idx.reserve(entries.size());
  A.values.reserve(entries.size());
  size_t i = 0;
  for (Index r = 0; r < nrows; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      const Index c = entries[i].col;
      double v = entries[i].value;
      ++i;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;
        ++i;
      }
      A.col_idx.push_back(c);
      A.values.push_back(v);
    }
    A.row_ptr[static_cast<size_t>(r) + 1] = static_cast<Index>(A.values.size());
  }
  return A;
}

CsrMatrix CsrMatrix::identity(Index n) {
  CsrMatrix A;
  A.nrows = A.ncols = n;
  A.row_ptr.resize(static_cast<size_t>(n) + 1);
  A.col_idx.resize(n);
  A.values.assign(n, 1.0);
  for (Index i = 0; i <= n; ++i) A.row_ptr[i] = i;
  for (Index i = 0; i < n; ++i) A.col_idx[i] = i;
  return A;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& M) {
  std::vector<Triplet> trips;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0)
        trips.push_back({static_cast<Index>(i), static_cast<Index>(j), M(i, j)});
  return from_triplets(static_cast<Index>(M.rows()),
                       static_cast<Index>(M.cols()), std::move(trips));
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix M = DenseMatrix::Zero(nrows, ncols);
  for (Index r = 0; r < nrows; ++r)
    for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      M(r, col_idx[k]) = values[k];
  return M;
}

void CsrMatrix::check_valid() const {
  if (static_cast<Index>(row_ptr.size()) != nrows + 1)
    throw DimensionError("CsrMatrix: row_ptr size mismatch");
  if (row_ptr.front() != 0 ||
      row_ptr.back() != static_cast<Index>(values.size()) ||
      values.size() != col_idx.size())
    throw DimensionError("CsrMatrix: row_ptr endpoints inconsistent");
  for (Index r = 0; r < nrows; ++r) {
    if (row_ptr[r] > row_ptr[r + 1])
      throw DimensionError("CsrMatrix: row_ptr not nondecreasing");
    for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      if (col_idx[k] < 0 || col_idx[k] >= ncols)
        throw DimensionError("CsrMatrix: column index out of range");
      if (k > row_ptr[r] && col_idx[k] <= col_idx[k - 1])
        throw DimensionError("CsrMatrix: columns not strictly increasing in row " +
                             std::to_string(r));
    }
  }
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
  if (nrows != ncols) return false;
  // Compare against the transpose entry-by-entry via a column-sorted copy.
  std::vector<Triplet> tr;
  tr.reserve(values.size());
  for (Index r = 0; r < nrows; ++r)
    for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      tr.push_back({col_idx[k], r, values[k]});
  CsrMatrix At = from_triplets(ncols, nrows, std::move(tr));
  const double tol = rel_tol * max_abs() + 1e-300;
  if (At.row_ptr != row_ptr || At.col_idx != col_idx) {
    // Patterns differ; fall back to a merged comparison through addition.
    CsrMatrix D = sparse_add_scaled(*this, At, 1.0, -1.0);
    return D.max_abs() <= tol;
  }
  for (size_t k = 0; k < values.size(); ++k)
    if (std::abs(values[k] - At.values[k]) > tol) return false;
  return true;
}

Vec64 spmv(const CsrMatrix& A, const Vec64& x) {
  if (static_cast<Index>(x.size()) != A.ncols)
    throw DimensionError("spmv: vector length " + std::to_string(x.size()) +
                         " vs ncols " + std::to_string(A.ncols));
  Vec64 y(A.nrows);
  spmv_into(A, x.data(), y.data());
  return y;
}

void spmv_into(const CsrMatrix& A, const double* x, double* y) {
  const Index* rp = A.row_ptr.data();
  const Index* ci = A.col_idx.data();
  const double* v = A.values.data();
  for (Index r = 0; r < A.nrows; ++r) {
    double s = 0.0;
    for (Index k = rp[r]; k < rp[r + 1]; ++k) s += v[k] * x[ci[k]];
    y[r] = s;
  }
}

CsrMatrix sparse_add_scaled(const CsrMatrix& A, const CsrMatrix& B, double c1,
                            double c2) {
  if (A.nrows != B.nrows || A.ncols != B.ncols)
    throw DimensionError("sparse_add_scaled: dimension mismatch");
  CsrMatrix C;
  C.nrows = A.nrows;
  C.ncols = A.ncols;
  C.row_ptr.resize(static_cast<size_t>(A.nrows) + 1);
  C.row_ptr[0] = 0;
  C.col_idx.reserve(A.col_idx.size() + B.col_idx.size());
  C.values.reserve(A.values.size() + B.values.size());
  for (Index r = 0; r < A.nrows; ++r) {
    Index ia = A.row_ptr[r], ea = A.row_ptr[r + 1];
    Index ib = B.row_ptr[r], eb = B.row_ptr[r + 1];
    while (ia < ea || ib < eb) {
      Index ca = ia < ea ? A.col_idx[ia] : A.ncols;
      Index cb = ib < eb ? B.col_idx[ib] : B.ncols;
      if (ca < cb) {
        C.col_idx.push_back(ca);
        C.values.push_back(c1 * A.values[ia++]);
      } else if (cb < ca) {
        C.col_idx.push_back(cb);
        C.values.push_back(c2 * B.values[ib++]);
      } else {
        C.col_idx.push_back(ca);
        C.values.push_back(c1 * A.values[ia++] + c2 * B.values[ib++]);
      }
    }
    C.row_ptr[static_cast<size_t>(r) + 1] = static_cast<Index>(C.values.size());
  }
  return C;
}

void write_matrix_market(const std::string& path, const CsrMatrix& A) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "%%MatrixMarket matrix coordinate real general\n";
  f << A.nrows << " " << A.ncols << " " << A.nnz() << "\n";
  for (Index r = 0; r < A.nrows; ++r)
    for (Index k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      f << (r + 1) << " " << (A.col_idx[k] + 1) << " "
        << format_double(A.values[k]) << "\n";
  if (!f) throw IoError("write failed: " + path);
}

CsrMatrix read_matrix_market(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw IoError("not a MatrixMarket file: " + path);
  if (line.find("coordinate") == std::string::npos ||
      line.find("general") == std::string::npos)
    throw IoError("unsupported MatrixMarket flavor in " + path);
  do {
    if (!std::getline(f, line)) throw IoError("truncated header: " + path);
  } while (!line.empty() && line[0] == '%');
  std::istringstream hdr(line);
  Index nr, nc;
  long long nnz;
  if (!(hdr >> nr >> nc >> nnz)) throw IoError("bad size line: " + path);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(nnz));
  for (long long i = 0; i < nnz; ++i) {
    Index r, c;
    double v;
    if (!(f >> r >> c >> v)) throw IoError("truncated entries: " + path);
    trips.push_back({r - 1, c - 1, v});
  }
  return CsrMatrix::from_triplets(nr, nc, std::move(trips));
}

}  // namespace fracrom
