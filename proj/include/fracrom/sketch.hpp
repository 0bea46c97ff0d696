#pragma once

#include <cstdint>
#include <vector>

#include "fracrom/dense.hpp"

namespace fracrom {

struct SketchConfig {
  Index target_rank = 0;      // K
  std::uint64_t seed = 0;

  Index l1() const { return 2 * target_rank + 1; }
  Index l2() const { return 2 * l1() + 1; }
};

// Single-view randomized sketch of a tall matrix S (n_dof x cols) presented
// as a stream of column blocks: accumulates Y1 = S*Omega and Y2 = S^T*Psi
// without ever materializing S. Omega is never formed whole either - the row
// of Omega for global column c is drawn from a substream keyed by c, so the
// sketch is independent of how the stream is chopped into blocks (streaming
// and batch presentations agree to summation-order rounding).
class SketchState {
 public:
  SketchState(Index n_dof, const SketchConfig& cfg);

  void update(const DenseMatrix& Zj);

  Index n_dof() const { return n_dof_; }
  Index cols_seen() const { return cols_seen_; }
  const SketchConfig& config() const { return cfg_; }
  const DenseMatrix& psi() const { return Psi_; }
  const DenseMatrix& y1() const { return Y1_; }
  DenseMatrix y2() const;  // cols_seen x l2 (concatenates stored blocks)

  struct Finalized {
    DenseMatrix V;   // n_dof x K, orthonormal columns
    Vec64 sigma_est; // all min(l1, cols_seen) singular-value estimates;
                     // the first K belong to V's columns
  };
  // Requires K <= cols_seen and K <= l1.
  Finalized finalize(Index K, RunLog* log = nullptr) const;

 private:
  SketchConfig cfg_;
  Index n_dof_ = 0;
  Index cols_seen_ = 0;
  DenseMatrix Psi_;  // n_dof x l2, fixed at init
  DenseMatrix Y1_;   // n_dof x l1, accumulator
  std::vector<DenseMatrix> y2_blocks_;  // each cols(Zj) x l2, in arrival order
};

// Free-function spellings.
inline SketchState sketch_init(Index n_dof, const SketchConfig& cfg) {
  return SketchState(n_dof, cfg);
}
inline void sketch_update(SketchState& st, const DenseMatrix& Zj) {
  st.update(Zj);
}
inline SketchState::Finalized sketch_finalize(const SketchState& st, Index K,
                                              RunLog* log = nullptr) {
  return st.finalize(K, log);
}

}  // namespace fracrom
