#include "fracrom/shifted_solver.hpp"

#include <algorithm>
#include <cmath>

namespace fracrom {

namespace {

void append_column(DenseMatrix& m, Index& used, const Vec64& col) {
  if (used == static_cast<Index>(m.cols())) {
    DenseMatrix bigger(m.rows(), std::max<Index>(8, 2 * m.cols()));
    bigger.leftCols(used) = m.leftCols(used);
    m.swap(bigger);
  }
  m.col(used) = col;
  ++used;
}

void ensure_shape_zero_padded(DenseMatrix& m, Index rows, Index cols) {
  if (rows <= m.rows() && cols <= m.cols()) return;
  DenseMatrix bigger = DenseMatrix::Zero(std::max<Index>(rows, 2 * m.rows()),
                                         std::max<Index>(cols, 2 * m.cols()));
  bigger.topLeftCorner(m.rows(), m.cols()) = m;
  m.swap(bigger);
}

// Orthonormal basis grown one vector at a time; insert() returns the exact
// coordinates of g (two Gram-Schmidt passes), extending the basis by the
// normalized remainder unless g is numerically dependent.
struct CoordSpace {
  DenseMatrix U;
  Index q = 0;

  explicit CoordSpace(Index n) : U(n, 16) {}

  Vec64 insert(const Vec64& g) {
    Vec64 c = Vec64::Zero(q + 1);
    Vec64 r = g;
    for (int pass = 0; pass < 2 && q > 0; ++pass) {
      Vec64 proj = U.leftCols(q).transpose() * r;
      r.noalias() -= U.leftCols(q) * proj;
      c.head(q) += proj;
    }
    const double gn = g.norm(), rn = r.norm();
    if (gn > 0.0 && rn > 1e-12 * gn) {
      Index used = q;
      append_column(U, used, r / rn);
      c(q) = rn;
      q = used;
      return c;
    }
    return c.head(q).eval();
  }
};

// Least-squares residual coordinates: p = argmin ||b_coord - (G1 + s*G2) p||.
Vec64 coord_least_squares(const Eigen::Ref<const DenseMatrix>& g1,
                          const Eigen::Ref<const DenseMatrix>& g2,
                          const Eigen::Ref<const Vec64>& b_coord, double sigma,
                          double* rel_resid, double b_norm) {
  DenseMatrix a = g1 + sigma * g2;
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(a);
  Vec64 p = qr.solve(b_coord);
  if (rel_resid != nullptr)
    *rel_resid = (b_coord - a * p).norm() / b_norm;
  return p;
}

}  // namespace

void ShiftedFamily::check_valid() const {
  C1.check_valid();
  C2.check_valid();
  if (C1.nrows != C1.ncols || C2.nrows != C2.ncols || C1.nrows != C2.nrows)
    throw DimensionError("shifted family: C1 and C2 must be square with equal size");
  if (static_cast<Index>(rhs.size()) != C1.nrows)
    throw DimensionError("shifted family: rhs length does not match C1");
  if (shifts.size() == 0)
    throw ConfigError("shifted family: no shifts given");
  for (Index k = 0; k < static_cast<Index>(shifts.size()); ++k)
    if (!std::isfinite(shifts(k)) || shifts(k) < 0.0)
      throw ConfigError("shifted family: shift " + std::to_string(k) +
                        " = " + format_double(shifts(k)) +
                        " must be finite and nonnegative");
  if (!rhs.allFinite())
    throw NumericError("shifted family: rhs has non-finite entries");
  if (!C1.is_symmetric())
    throw NumericError("shifted family: C1 not symmetric");
  if (!C2.is_symmetric())
    throw NumericError("shifted family: C2 not symmetric");
}

Preconditioners Preconditioners::build(const CsrMatrix& C1, const CsrMatrix& C2,
                                       const std::vector<double>& taus) {
  if (taus.empty())
    throw ConfigError("preconditioners: need at least one tau");
  for (size_t j = 0; j < taus.size(); ++j) {
    if (!std::isfinite(taus[j]) || taus[j] < 0.0)
      throw ConfigError("preconditioners: tau must be finite and nonnegative");
    if (j > 0 && taus[j] <= taus[j - 1])
      throw ConfigError("preconditioners: tau list must be strictly increasing");
  }
  Preconditioners p;
  p.taus = taus;
  p.factors.reserve(taus.size());
  for (double tau : taus)
    p.factors.emplace_back(sparse_add_scaled(C1, C2, 1.0, tau));
  return p;
}

MpgmresResult mpgmres_sh(const ShiftedFamily& family, const Preconditioners& precs,
                         const MpgmresOptions& opts) {
  family.check_valid();
  if (!(opts.tol > 0.0)) throw ConfigError("mpgmres_sh: tol must be positive");
  if (opts.max_iter < 1) throw ConfigError("mpgmres_sh: max_iter must be >= 1");
  const Index n = family.C1.nrows;
  const Index n_p = precs.count();
  const Index n_s = family.n_shifts();

  const double b_norm = family.rhs.norm();
  if (!(b_norm > 0.0))
    throw NumericError("mpgmres_sh: zero right-hand side");

  MpgmresResult res;
  res.converged.assign(static_cast<size_t>(n_s), 0);
  DenseMatrix history = DenseMatrix::Ones(n_s, opts.max_iter + 1);

  CoordSpace coords(n);
  Vec64 b_coord_full = coords.insert(family.rhs);  // exactly ||b|| e_1

  DenseMatrix Z(n, 8 * n_p);
  Index m = 0;  // columns of Z in use
  DenseMatrix Gamma1 = DenseMatrix::Zero(16, 8 * n_p);
  DenseMatrix Gamma2 = DenseMatrix::Zero(16, 8 * n_p);

  DenseMatrix Vhat(n, 1 + 8 * n_p);
  Index v_used = 0;
  append_column(Vhat, v_used, family.rhs / b_norm);

  std::vector<Index> active(static_cast<size_t>(n_s));
  for (Index k = 0; k < n_s; ++k) active[static_cast<size_t>(k)] = k;

  Index it = 0;
  while (it < opts.max_iter) {
    ++it;
    const Vec64 vhat = Vhat.col(v_used - 1);

    // One preconditioner solve per tau, then the C2 image of the block.
    DenseMatrix W(n, n_p), What(n, n_p);
    parallel_for(n_p, [&](Index j) {
      Vec64 w = precs.factors[static_cast<size_t>(j)].solve(vhat);
      What.col(j) = family.C2 * w;
      W.col(j) = std::move(w);
    });

    // Consolidate into Z and record coordinates of C1 Z and C2 Z.
    for (Index j = 0; j < n_p; ++j) {
      Index used = m;
      append_column(Z, used, W.col(j));
      const Vec64 c1 = coords.insert(family.C1 * W.col(j));
      const Vec64 c2 = coords.insert(What.col(j));
      ensure_shape_zero_padded(Gamma1, coords.q, used);
      ensure_shape_zero_padded(Gamma2, coords.q, used);
      Gamma1.col(m).head(c1.size()) = c1;
      Gamma2.col(m).head(c2.size()) = c2;
      m = used;
    }

    // Next orthonormal block: Gram-Schmidt (two passes) against everything
    // built so far, then thin QR.
    const double block_scale = What.norm();
    for (int pass = 0; pass < 2; ++pass)
      What.noalias() -=
          Vhat.leftCols(v_used) * (Vhat.leftCols(v_used).transpose() * What);
    ThinQr qr = thin_qr(What);
    bool breakdown = !(block_scale > 0.0);
    for (Index j = 0; j < n_p && !breakdown; ++j)
      if (std::abs(qr.R(j, j)) < 1e-14 * block_scale) breakdown = true;
    if (!breakdown)
      for (Index j = 0; j < n_p; ++j) append_column(Vhat, v_used, qr.Q.col(j));

    // Projected least squares for every still-active shift.
    const Index q = coords.q;
    const auto g1 = Gamma1.topLeftCorner(q, m);
    const auto g2 = Gamma2.topLeftCorner(q, m);
    Vec64 b_coord = Vec64::Zero(q);
    b_coord.head(b_coord_full.size()) = b_coord_full;
    std::vector<double> resid(active.size());
    parallel_for(static_cast<Index>(active.size()), [&](Index a) {
      const Index k = active[static_cast<size_t>(a)];
      double r = 0.0;
      coord_least_squares(g1, g2, b_coord, family.shifts(k), &r, b_norm);
      resid[static_cast<size_t>(a)] = r;
    });
    history.col(it) = history.col(it - 1);  // frozen shifts carry over
    std::vector<Index> still;
    for (size_t a = 0; a < active.size(); ++a) {
      const Index k = active[a];
      history(k, it) = resid[a];
      if (resid[a] <= opts.tol)
        res.converged[static_cast<size_t>(k)] = 1;
      else
        still.push_back(k);
    }
    active.swap(still);

    if (breakdown) {
      res.breakdown = true;
      break;
    }
    if (active.empty()) break;
  }

  res.iterations = it;
  res.all_converged = active.empty();

  res.basis.Z = Z.leftCols(m);
  res.basis.k_m = it;
  res.basis.n_p = n_p;
  res.basis.U = coords.U.leftCols(coords.q);
  res.basis.Gamma1 = Gamma1.topLeftCorner(coords.q, m);
  res.basis.Gamma2 = Gamma2.topLeftCorner(coords.q, m);
  res.basis.b_coord = Vec64::Zero(coords.q);
  res.basis.b_coord.head(b_coord_full.size()) = b_coord_full;
  res.basis.b_norm = b_norm;

  res.residual_history = history.leftCols(it + 1);

  // Full-basis coefficients for every shift: final residuals, and solutions
  // unless the caller only wants the basis.
  DenseMatrix P(m, n_s);
  Vec64 final_resid(n_s);
  parallel_for(n_s, [&](Index k) {
    double r = 0.0;
    P.col(k) = coord_least_squares(res.basis.Gamma1, res.basis.Gamma2,
                                   res.basis.b_coord, family.shifts(k), &r,
                                   b_norm);
    final_resid(k) = r;
  });
  res.final_residuals = std::move(final_resid);
  for (Index k = 0; k < n_s; ++k)
    if (res.final_residuals(k) <= opts.tol) res.converged[static_cast<size_t>(k)] = 1;
  if (opts.want_solutions) res.solutions = res.basis.Z * P;
  return res;
}

Vec64 solve_projected(const SearchBasis& basis, const ShiftedFamily& family,
                      double sigma) {
  if (basis.n_cols() < 1)
    throw ConfigError("solve_projected: empty search basis");
  if (static_cast<Index>(basis.Z.rows()) != family.C1.nrows)
    throw DimensionError("solve_projected: basis and family dimensions differ");
  if (basis.has_coords())
    return coord_least_squares(basis.Gamma1, basis.Gamma2, basis.b_coord, sigma,
                               nullptr, 1.0);
  // Hand-built basis: form (C1 + sigma C2) Z explicitly.
  const Index n = family.C1.nrows, m = basis.n_cols();
  DenseMatrix a(n, m);
  for (Index j = 0; j < m; ++j) {
    const Vec64 z = basis.Z.col(j);
    a.col(j) = family.C1 * z + sigma * (family.C2 * z);
  }
  return Eigen::ColPivHouseholderQR<DenseMatrix>(a).solve(family.rhs);
}

DenseMatrix solve_projected_all(const SearchBasis& basis,
                                const ShiftedFamily& family, const Vec64& shifts) {
  DenseMatrix P(basis.n_cols(), shifts.size());
  parallel_for(static_cast<Index>(shifts.size()), [&](Index k) {
    P.col(k) = solve_projected(basis, family, shifts(k));
  });
  return P;
}

DenseMatrix solve_family_rhs_scaled(const SearchBasis& basis,
                                    const ShiftedFamily& family, const Vec64& f) {
  if (f.size() != family.rhs.size() || (f - family.rhs).norm() != 0.0)
    throw ConfigError(
        "solve_family_rhs_scaled: basis was not built for this right-hand side");
  DenseMatrix P = solve_projected_all(basis, family, family.shifts);
  for (Index k = 0; k < family.n_shifts(); ++k) P.col(k) *= family.shifts(k);
  return basis.Z * P;
}

}  // namespace fracrom
