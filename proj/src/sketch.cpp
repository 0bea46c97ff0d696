#include "fracrom/sketch.hpp"

#include "fracrom/rng.hpp"

namespace fracrom {

namespace {
// Substream keys: Psi gets key 0; the Omega row for global column c gets the
// odd key 2c+1. Frozen - stored seeds depend on it.
constexpr std::uint64_t kPsiKey = 0;
std::uint64_t omega_key(Index col) {
  return 2ULL * static_cast<std::uint64_t>(col) + 1ULL;
}
}  // namespace

SketchState::SketchState(Index n_dof, const SketchConfig& cfg)
    : cfg_(cfg), n_dof_(n_dof) {
  if (cfg.target_rank < 1)
    throw ConfigError("sketch: target rank must be >= 1, got " +
                      std::to_string(cfg.target_rank));
  if (n_dof < 1) throw DimensionError("sketch: n_dof must be >= 1");
  Psi_.resize(n_dof, cfg.l2());
  GaussianStream g(derive_stream_seed(cfg.seed, kPsiKey));
  // Column-major fill order; frozen.
  for (Index j = 0; j < cfg.l2(); ++j)
    for (Index i = 0; i < n_dof; ++i) Psi_(i, j) = g.next();
  Y1_ = DenseMatrix::Zero(n_dof, cfg.l1());
}

void SketchState::update(const DenseMatrix& Zj) {
  if (Zj.rows() != n_dof_)
    throw DimensionError("sketch_update: block has " + std::to_string(Zj.rows()) +
                         " rows, expected " + std::to_string(n_dof_));
  const Index bcols = static_cast<Index>(Zj.cols());
  if (bcols == 0) return;
  DenseMatrix omega(bcols, cfg_.l1());
  for (Index r = 0; r < bcols; ++r) {
    GaussianStream g(derive_stream_seed(cfg_.seed, omega_key(cols_seen_ + r)));
    for (Index j = 0; j < cfg_.l1(); ++j) omega(r, j) = g.next();
  }
  Y1_.noalias() += Zj * omega;
  y2_blocks_.emplace_back(Zj.transpose() * Psi_);
  cols_seen_ += bcols;
}

DenseMatrix SketchState::y2() const {
  DenseMatrix Y2(cols_seen_, cfg_.l2());
  Index r = 0;
  for (const auto& blk : y2_blocks_) {
    Y2.middleRows(r, blk.rows()) = blk;
    r += static_cast<Index>(blk.rows());
  }
  return Y2;
}

SketchState::Finalized SketchState::finalize(Index K, RunLog* log) const {
  if (K < 1 || K > cfg_.l1())
    throw ConfigError("sketch_finalize: K must be in [1, l1], got " +
                      std::to_string(K));
  if (cols_seen_ < K)
    throw ConfigError("sketch_finalize: only " + std::to_string(cols_seen_) +
                      " columns seen, need at least K = " + std::to_string(K));

  ThinQr qr = thin_qr(Y1_);
  DenseMatrix PsiTQ = Psi_.transpose() * qr.Q;  // l2 x l1

  // Flag numerical rank deficiency of Psi^T Q; the pseudoinverse still
  // produces the minimum-norm W, but the report should note it.
  {
    ThinSvd chk = thin_svd(PsiTQ);
    const double cutoff = static_cast<double>(std::max(PsiTQ.rows(), PsiTQ.cols())) *
                          std::numeric_limits<double>::epsilon() *
                          (chk.sigma.size() ? chk.sigma(0) : 0.0);
    Index rank = 0;
    for (Eigen::Index i = 0; i < chk.sigma.size(); ++i)
      if (chk.sigma(i) > cutoff) ++rank;
    if (rank < cfg_.l1() && log)
      log->warn("sketch_finalize: Psi^T Q numerically rank-deficient (rank " +
                std::to_string(rank) + " of " + std::to_string(cfg_.l1()) + ")");
  }

  DenseMatrix W = pinv_solve(PsiTQ, y2().transpose());  // l1 x cols_seen
  ThinSvd svd = thin_svd(W);

  Finalized out;
  out.V = qr.Q * svd.U.leftCols(K);
  out.sigma_est = svd.sigma;
  return out;
}

}  // namespace fracrom
