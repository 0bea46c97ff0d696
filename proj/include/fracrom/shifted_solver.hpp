#pragma once

// MPGMRES-Sh: one multi-preconditioned search basis shared by the whole
// shifted family (C1 + sigma_k C2) x_k = b. Each iteration applies every
// shift-and-invert preconditioner P_j = C1 + tau_j C2 to the newest basis
// vector, orthogonalizes the C2-image of the block against the previous ones,
// and checks all shifts by projected least squares. Solutions for any shift
// come from minimizing || b - (C1 + sigma C2) Z p || over the basis Z.

#include <vector>

#include "fracrom/common.hpp"
#include "fracrom/csr.hpp"
#include "fracrom/dense.hpp"
#include "fracrom/sparse_cholesky.hpp"

namespace fracrom {

struct ShiftedFamily {
  CsrMatrix C1;  // SPD
  CsrMatrix C2;  // symmetric positive semidefinite
  Vec64 shifts;  // finite, >= 0
  Vec64 rhs;

  Index n_shifts() const { return static_cast<Index>(shifts.size()); }
  void check_valid() const;
};

struct Preconditioners {
  std::vector<double> taus;            // strictly increasing, n_p >= 1
  std::vector<SparseCholesky> factors;  // factor of C1 + tau_j C2

  static Preconditioners build(const CsrMatrix& C1, const CsrMatrix& C2,
                               const std::vector<double>& taus);
  Index count() const { return static_cast<Index>(factors.size()); }
};

inline const std::vector<double>& default_taus() {
  static const std::vector<double> taus = {1e-8, 1e-4, 1e-2};
  return taus;
}

struct SearchBasis {
  DenseMatrix Z;  // N x n_cols consolidated preconditioned blocks
  Index k_m = 0;  // iterations at termination
  Index n_p = 0;

  // Derived caches: U is an orthonormal basis of span[b, C1 Z, C2 Z], and
  // Gamma1/Gamma2/b_coord are the exact coordinates of C1 Z, C2 Z, and b in
  // it. The projected least-squares residual for any shift is computed in
  // these coordinates; they are equivalent to explicit residual evaluation
  // up to the orthonormality error of U (~1e-14 relative). Empty caches are
  // allowed (hand-built bases); projected solves then fall back to forming
  // (C1 + sigma C2) Z directly.
  DenseMatrix U;
  DenseMatrix Gamma1, Gamma2;  // q x n_cols
  Vec64 b_coord;               // length q
  double b_norm = 0.0;

  Index n_cols() const { return static_cast<Index>(Z.cols()); }
  bool has_coords() const { return U.cols() > 0; }
};

struct MpgmresOptions {
  double tol = 1e-8;
  Index max_iter = 60;
  bool want_solutions = true;  // skip the final N x n_shifts solve when false
};

struct MpgmresResult {
  SearchBasis basis;
  DenseMatrix solutions;  // N x n_shifts, empty when !want_solutions
  // Relative residuals per shift (rows) per iteration (columns 0..k_m);
  // column 0 is the initial guess x = 0, i.e. all ones. Once a shift
  // converges its entry is frozen at the converged value.
  DenseMatrix residual_history;
  Vec64 final_residuals;  // recomputed on the full basis for every shift
  std::vector<char> converged;
  Index iterations = 0;
  bool all_converged = false;
  bool breakdown = false;  // QR of a new block hit a ~zero diagonal
};

MpgmresResult mpgmres_sh(const ShiftedFamily& family, const Preconditioners& precs,
                         const MpgmresOptions& opts = {});

// Coefficients p minimizing || b - (C1 + sigma C2) Z p ||_2.
Vec64 solve_projected(const SearchBasis& basis, const ShiftedFamily& family,
                      double sigma);

// One column of coefficients per shift (n_cols x n_shifts).
DenseMatrix solve_projected_all(const SearchBasis& basis,
                                const ShiftedFamily& family, const Vec64& shifts);

// Solutions u_k of (C2 + (1/sigma_k) C1) u = f for every family shift, i.e.
// the unscaled systems (K + e^{z_k} M) u = f when C1 = M, C2 = K and
// sigma_k = e^{-z_k}: u_k = sigma_k * Z p_k. Requires the basis built for
// rhs f (= family.rhs).
DenseMatrix solve_family_rhs_scaled(const SearchBasis& basis,
                                    const ShiftedFamily& family, const Vec64& f);

}  // namespace fracrom
