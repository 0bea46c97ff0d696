#pragma once

// Reduced-order model for fractional powers of parameterized elliptic
// operators. Offline: stream the MPGMRES-Sh search bases of the training
// samples through a single-view randomized sketch, extract an orthonormal
// basis V, and project the affine operator terms. Online: per query (mu,
// alpha), one K x K generalized eigendecomposition turns the whole sinc
// quadrature into a diagonal spectral filter. A dense spectral reference and
// a snapshot-SVD path are included for validation and benchmarking.

#include <cstdint>
#include <string>
#include <vector>

#include "fracrom/affine.hpp"
#include "fracrom/quadrature.hpp"
#include "fracrom/shifted_solver.hpp"
#include "fracrom/sketch.hpp"

namespace fracrom {

struct TrainingPlan {
  std::vector<Vec64> samples;
  Index target_rank = 0;  // K
  double train_h = 0.0;   // sinc step of the training rule (exponent 0.5)
  std::uint64_t sketch_seed = 0;
  double solver_tol = 1e-8;
  Index max_iter = 60;
  std::vector<double> taus = default_taus();

  void check_valid() const;
};

struct RomMeta {
  std::string problem_id;
  Index nx = 0, ny = 0;
  Index n_dof = 0;
  Index K = 0;
  double train_h = 0.0;
  double train_alpha = 0.5;
  std::uint64_t sketch_seed = 0;
  double solver_tol = 0.0;
  std::vector<double> taus;
  std::vector<std::string> op_coeffs;    // coefficient-function ids per term
  std::vector<std::string> load_coeffs;
  std::vector<double> box_lo, box_hi;
  std::string samples_digest;  // crc32 over the training samples, hex
  std::string created;         // left empty: artifact bytes stay reproducible
};

struct RomArtifact {
  RomMeta meta;
  DenseMatrix V;                    // n_dof x K
  std::vector<DenseMatrix> A_hat;   // K x K, one per operator term
  DenseMatrix M_hat;                // K x K
  std::vector<Vec64> g_hat;         // K, one per load term

  Index k() const { return static_cast<Index>(V.cols()); }
  // V^T V = I to 1e-10, M_hat SPD, every A_hat symmetric, shapes agree.
  void check_valid() const;
};

struct OnlineQuery {
  Vec64 mu;
  double alpha = 0.5;
};

struct TrainReport {
  struct Sample {
    Vec64 mu;
    Index iterations = 0;
    Index basis_cols = 0;
    bool converged = true;
    double wall_s = 0.0;
  };
  std::vector<Sample> samples;
  Vec64 sigma_estimates;  // from the sketch, min(l1, cols seen) values
  Index n_dof = 0;
  Index n_shifts = 0;
  double solve_wall_s = 0.0;     // materialize + factor + iterate
  double sketch_wall_s = 0.0;    // streaming updates
  double finalize_wall_s = 0.0;  // sketch -> V
  double project_wall_s = 0.0;   // reduced matrices
};

RomArtifact offline_train(const TrainingPlan& plan, const AffineProblem& problem,
                          RunLog* log = nullptr, TrainReport* report = nullptr);

// Reduced solve via one generalized eigendecomposition of (K_hat(mu), M_hat):
// the sinc sum collapses to the scalar filter sum_k w_k / (lambda_i + e^{z_k})
// per reduced eigenvalue. Returns the lifted solution V y_hat (length n_dof).
// The h-less overload uses the training step stored in the artifact.
Vec64 online_solve(const RomArtifact& rom, const OnlineQuery& q, double h,
                   RunLog* log = nullptr);
Vec64 online_solve(const RomArtifact& rom, const OnlineQuery& q,
                   RunLog* log = nullptr);

// Reference path: solve every reduced shifted system (K_hat + e^{z_k} M_hat)
// separately and sum with the quadrature weights. Same answer as
// online_solve to roundoff; kept for validation.
Vec64 online_solve_shiftwise(const RomArtifact& rom, const OnlineQuery& q,
                             double h, RunLog* log = nullptr);

struct FomStats {
  Index iterations = 0;
  Index n_shifts = 0;
  Index basis_cols = 0;
  bool converged = false;
  double max_rel_resid = 0.0;
};

// Full-order fractional solve: MPGMRES-Sh over the sinc shifts of
// build_rule(alpha, h), then the weighted combination of the shifted
// solutions. Non-convergence throws (NumericError) with the worst residual.
Vec64 fom_solve(const AffineProblem& problem, const Vec64& mu, double alpha,
                double h, double tol = 1e-8, FomStats* stats = nullptr);

// Dense spectral reference y = Phi diag(lambda^{-alpha}) Phi^T f with the
// M-orthonormal generalized eigenvectors. Guarded to n_dof <= 5000.
Vec64 spectral_oracle(const AffineProblem& problem, const Vec64& mu,
                      double alpha);

struct NaiveReport {
  Vec64 singular_values;   // full spectrum of the snapshot matrix
  Index snapshot_cols = 0; // samples x shifts
  double snapshot_wall_s = 0.0;  // per-shift direct solves
  double svd_wall_s = 0.0;       // dense compression
};

// Snapshot baseline: explicit per-shift direct solves for every training
// sample, dense SVD of the snapshot matrix, dominant K left singular
// vectors. Desk scale only (memory guard).
RomArtifact naive_offline(const TrainingPlan& plan, const AffineProblem& problem,
                          NaiveReport* report = nullptr);

}  // namespace fracrom
