// Acceptance gate for the fractional-ROM library. Nine criteria, one
// PASS/FAIL/WARN line each (details indented below the line), exit 0 iff
// every hard criterion passes. Criterion 8 is advisory (timing ratios on
// shared hardware): it warns instead of failing. Criterion 9 re-runs
// criteria 3-7 and byte-compares their numeric artifacts, so every
// criterion function below must be deterministic given its pinned seeds.
//
// All tolerances, seeds, grid sizes, and budgets are pinned here on
// purpose: this binary is the reproducible record of what the library
// guarantees at desk scale.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "fracrom/affine.hpp"
#include "fracrom/common.hpp"
#include "fracrom/csr.hpp"
#include "fracrom/dense.hpp"
#include "fracrom/problems.hpp"
#include "fracrom/quadrature.hpp"
#include "fracrom/rng.hpp"
#include "fracrom/rom.hpp"
#include "fracrom/rom_file.hpp"
#include "fracrom/shifted_solver.hpp"
#include "fracrom/sketch.hpp"
#include "fracrom/sparse_cholesky.hpp"

using namespace fracrom;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(const char* f, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return std::string(buf);
}

struct Criterion {
  bool pass = true;
  bool warn_only = false;  // advisory: a miss prints WARN and never gates
  std::string headline;
  std::vector<std::string> notes;
  std::string bytes;  // numeric artifacts, compared by criterion 9
};

// ---- byte collection ------------------------------------------------------

void put_raw(std::string& out, const void* p, std::size_t n) {
  out.append(static_cast<const char*>(p), n);
}
void put(std::string& out, double x) { put_raw(out, &x, sizeof x); }
void put(std::string& out, const Vec64& v) {
  put_raw(out, v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
}
void put(std::string& out, const DenseMatrix& A) {
  put_raw(out, A.data(), static_cast<std::size_t>(A.size()) * sizeof(double));
}

// ---- shared helpers -------------------------------------------------------

double rel_l2_m(const CsrMatrix& M, const Vec64& approx, const Vec64& ref) {
  const Vec64 d = approx - ref;
  const double num = std::sqrt(d.dot(M * d));
  const double den = std::sqrt(ref.dot(M * ref));
  return num / den;
}

std::vector<double> nine_alphas() {
  return evenly_spaced(0.1, 0.9, 9);
}

Vec64 random_in_box(const ParamBox& box, UniformStream& us) {
  Vec64 mu(box.dim());
  for (Index d = 0; d < box.dim(); ++d) mu[d] = us.next_in(box.lo[d], box.hi[d]);
  return mu;
}

// ---- criterion 1: scalar sinc identity ------------------------------------
// lambda^{-alpha} must come out of the quadrature to 1e-7 at h = 2^-10 for
// every (lambda, alpha) pair, and the error must at least halve-ish (ratio
// <= 0.75 per halving of h, with a 1e-12 absolute floor) over h = 2^-4..2^-12.

Criterion crit1() {
  Criterion c;
  const double t0 = now_s();
  const std::vector<double> lambdas = {0.1, 1.0, 4.0, 100.0, 1e4};
  const std::vector<double> alphas = nine_alphas();
  const double gate = 1e-7;

  int n_ok = 0;
  double worst = 0.0, worst_l = 0.0, worst_a = 0.0;
  for (double a : alphas) {
    const SincRule rule = build_rule(a, std::pow(2.0, -10));
    for (double l : lambdas) {
      const double err = std::abs(scalar_fractional(rule, l) * std::pow(l, a) - 1.0);
      if (err <= gate) {
        ++n_ok;
      } else {
        c.notes.push_back(fmt("identity miss: lambda=%g alpha=%.1f err=%.3e (gate %.0e)",
                              l, a, err, gate));
      }
      if (err > worst) { worst = err; worst_l = l; worst_a = a; }
    }
  }

  bool decay_ok = true;
  double worst_ratio = 0.0;
  for (double a : alphas) {
    for (double l : lambdas) {
      double prev = -1.0;
      for (int k = 4; k <= 12; ++k) {
        const SincRule rule = build_rule(a, std::pow(2.0, -k));
        const double err = std::abs(scalar_fractional(rule, l) * std::pow(l, a) - 1.0);
        if (prev >= 0.0 && err > std::max(0.75 * prev, 1e-12)) {
          decay_ok = false;
          c.notes.push_back(fmt(
              "decay miss: lambda=%g alpha=%.1f h=2^-%d -> 2^-%d err %.3e -> %.3e",
              l, a, k - 1, k, prev, err));
        }
        if (prev > 1e-12) worst_ratio = std::max(worst_ratio, err / prev);
        prev = err;
      }
    }
  }

  const double dt = now_s() - t0;
  const int n_pairs = static_cast<int>(lambdas.size() * alphas.size());
  c.pass = (n_ok == n_pairs) && decay_ok && dt < 1.0;
  c.headline = fmt(
      "scalar identity at h=2^-10: %d/%d pairs within 1e-7 (worst %.3e at lambda=%g, "
      "alpha=%.1f); halving decay %s (worst step ratio %.2f); %.2f s (budget 1 s)",
      n_ok, n_pairs, worst, worst_l, worst_a, decay_ok ? "holds" : "broken", worst_ratio, dt);
  return c;
}

// ---- criterion 2: full-order solve vs dense spectral reference -------------

Criterion crit2() {
  Criterion c;
  const double t0 = now_s();
  const AffineProblem problem =
      build_problem("gp", 17, 17, GpSpec::Rhs::WhiteNoise, 2026);
  UniformStream us(4242);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    Vec64 mu(1);
    mu[0] = us.next_in(10.0, 200.0);
    const double alpha = us.next_in(0.1, 0.9);
    const Vec64 y_ref = spectral_oracle(problem, mu, alpha);
    const Vec64 y_fom = fom_solve(problem, mu, alpha, std::pow(2.0, -13), 1e-9);
    const double err = rel_l2_m(problem.mass, y_fom, y_ref);
    worst = std::max(worst, err);
    c.notes.push_back(fmt("kappa2=%7.2f alpha=%.3f rel L2 err %.3e", mu[0], alpha, err));
  }
  const double dt = now_s() - t0;
  c.pass = worst <= 1e-6 && dt < 10.0;
  c.headline = fmt(
      "fom vs spectral reference (gp 17x17, 5 random queries, quad h=2^-13): "
      "max rel L2 err %.3e (gate 1e-6); %.2f s (budget 10 s)",
      worst, dt);
  return c;
}

// ---- criterion 3: shifted-family solver correctness ------------------------
// GP 33x33, kappa^2 = 50, the full alpha = 0.5 training shift set. Every
// per-shift residual is recomputed with an explicit sparse matvec, and every
// solution is checked against an independent sparse Cholesky solve.

Criterion crit3() {
  Criterion c;
  const double t0 = now_s();
  const AffineProblem problem =
      build_problem("gp", 33, 33, GpSpec::Rhs::WhiteNoise, 2026);
  Vec64 mu(1);
  mu[0] = 50.0;
  const Materialized mat = materialize(problem, mu);

  const SincRule rule = training_rule(problem.mesh.hx());
  ShiftedFamily family;
  family.C1 = problem.mass;
  family.C2 = mat.K;
  family.rhs = mat.f;
  family.shifts = Vec64(rule.size());
  for (Index j = 0; j < rule.size(); ++j)
    family.shifts[j] = std::exp(-rule.nodes[static_cast<std::size_t>(j)]);

  const Preconditioners precs =
      Preconditioners::build(family.C1, family.C2, default_taus());
  MpgmresOptions opts;
  opts.tol = 1e-8;
  opts.max_iter = 60;
  const MpgmresResult res = mpgmres_sh(family, precs, opts);

  double max_resid = 0.0, max_dev = 0.0;
  const double f_norm = family.rhs.norm();
  for (Index k = 0; k < family.n_shifts(); ++k) {
    const double sigma = family.shifts[k];
    const CsrMatrix A = sparse_add_scaled(family.C1, family.C2, 1.0, sigma);
    const Vec64 x = res.solutions.col(k);
    max_resid = std::max(max_resid, (family.rhs - A * x).norm() / f_norm);
    const Vec64 x_direct = sparse_cholesky(A).solve(family.rhs);
    max_dev = std::max(max_dev, (x - x_direct).norm() / x_direct.norm());
  }

  const double dt = now_s() - t0;
  c.pass = res.all_converged && res.iterations <= 60 && max_resid <= 1e-8 &&
           max_dev <= 1e-6;
  c.headline = fmt(
      "shifted solver (gp 33x33, kappa2=50, %d shifts, taus {1e-8,1e-4,1e-2}): "
      "%d iterations (gate 60), max explicit rel residual %.3e (gate 1e-8), max "
      "deviation from direct solves %.3e (gate 1e-6); %.2f s",
      static_cast<int>(family.n_shifts()), static_cast<int>(res.iterations),
      max_resid, max_dev, dt);
  c.notes.push_back(fmt("search basis: %d columns, all %d shifts converged: %s",
                        static_cast<int>(res.basis.n_cols()),
                        static_cast<int>(family.n_shifts()),
                        res.all_converged ? "yes" : "NO"));

  put(c.bytes, res.solutions);
  put(c.bytes, res.final_residuals);
  put(c.bytes, static_cast<double>(res.iterations));
  return c;
}

// ---- criterion 4: randomized sketch expectation bound -----------------------
// Synthetic 2000x300 matrices with geometric spectrum 0.85^j. The rank-K
// single-view reconstruction satisfies E ||S - S_K||_F^2 <= 4 * tail^2 with
// the sketch sizes used here; the Monte Carlo mean over 100 seeds must stay
// within 1.5x of that (noise slack). Streaming and batch presentations of
// the same stream must agree to 1e-12.

DenseMatrix sketch_reconstruct(const SketchState& st, Index K) {
  const DenseMatrix Q = thin_qr(st.y1()).Q;
  const DenseMatrix X = pinv_solve(st.psi().transpose() * Q, st.y2().transpose());
  const ThinSvd sv = thin_svd(X);
  return (Q * sv.U.leftCols(K)) * sv.sigma.head(K).asDiagonal() * sv.Vt.topRows(K);
}

Criterion crit4() {
  Criterion c;
  const double t0 = now_s();
  const Index n = 2000, m = 300;

  GaussianStream gs(99);
  DenseMatrix GU(n, m), GV(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) GU(i, j) = gs.next();
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) GV(i, j) = gs.next();
  const DenseMatrix U = thin_qr(GU).Q;
  const DenseMatrix V = thin_qr(GV).Q;
  Vec64 s(m);
  for (Index j = 0; j < m; ++j) s[j] = std::pow(0.85, static_cast<double>(j));
  const DenseMatrix S = U * s.asDiagonal() * V.transpose();

  for (Index K : {Index(10), Index(25)}) {
    double tail2 = 0.0;
    for (Index j = K; j < m; ++j) tail2 += s[j] * s[j];
    const double bound = 4.0 * tail2 * 1.5;
    double mean = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
      SketchConfig cfg;
      cfg.target_rank = K;
      cfg.seed = 1000 + static_cast<std::uint64_t>(seed);
      SketchState st(n, cfg);
      st.update(S);
      const double err2 = (S - sketch_reconstruct(st, K)).squaredNorm();
      mean += err2;
      put(c.bytes, err2);
    }
    mean /= 100.0;
    if (mean > bound) c.pass = false;
    c.notes.push_back(fmt("K=%2d: MC mean ||S-S_K||_F^2 = %.4e, bound 6*tail^2 = %.4e "
                          "(ratio %.3f)",
                          static_cast<int>(K), mean, bound, mean / bound));
  }

  // streaming vs batch: same stream chopped into 7 blocks must match 1 block
  SketchConfig cfg;
  cfg.target_rank = 25;
  cfg.seed = 777;
  SketchState batch(n, cfg), stream(n, cfg);
  batch.update(S);
  const Index widths[7] = {50, 50, 50, 50, 50, 25, 25};
  Index off = 0;
  for (Index w : widths) {
    stream.update(S.middleCols(off, w));
    off += w;
  }
  const double d1 = (batch.y1() - stream.y1()).norm() / batch.y1().norm();
  const double d2 = (batch.y2() - stream.y2()).norm() / batch.y2().norm();
  const double agree = std::max(d1, d2);
  if (agree > 1e-12) c.pass = false;
  put(c.bytes, batch.y1());
  put(c.bytes, batch.y2());

  const double dt = now_s() - t0;
  if (dt >= 30.0) c.pass = false;
  c.headline = fmt(
      "sketch bound (2000x300, spectrum 0.85^j, 100 seeds, K in {10,25}): both MC "
      "means within 6*tail^2; streaming vs batch agreement %.2e (gate 1e-12); %.2f s "
      "(budget 30 s)",
      agree, dt);
  return c;
}

// ---- criterion 5: end-to-end ROM accuracy on the GP problem ----------------

struct C5Out {
  Criterion crit;
  bool trained = false;
  AffineProblem problem;
  RomArtifact rom;
};

C5Out crit5() {
  C5Out out;
  Criterion& c = out.crit;
  const double t0 = now_s();

  out.problem = build_problem("gp", 65, 65, GpSpec::Rhs::WhiteNoise, 2026);
  TrainingPlan plan;
  plan.samples = grid_sweep(out.problem.box, 39);  // kappa^2 = 10, 15, ..., 200
  plan.target_rank = 60;
  plan.train_h = out.problem.mesh.hx();
  plan.sketch_seed = 11;
  plan.solver_tol = 1e-8;

  TrainReport report;
  out.rom = offline_train(plan, out.problem, nullptr, &report);
  out.trained = true;
  const double t_train = now_s() - t0;

  UniformStream us(777);
  std::vector<double> kappas(20);
  for (double& k2 : kappas) k2 = us.next_in(10.0, 200.0);
  const std::vector<double> alphas = nine_alphas();

  std::vector<double> per_alpha(alphas.size(), 0.0);
  double worst = 0.0;
  for (double k2 : kappas) {
    Vec64 mu(1);
    mu[0] = k2;
    for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
      OnlineQuery q;
      q.mu = mu;
      q.alpha = alphas[ia];
      const Vec64 y_rom = online_solve(out.rom, q);
      const Vec64 y_fom =
          fom_solve(out.problem, mu, alphas[ia], plan.train_h, 1e-10);
      const double err = rel_l2_m(out.problem.mass, y_rom, y_fom);
      per_alpha[ia] = std::max(per_alpha[ia], err);
      worst = std::max(worst, err);
      put(c.bytes, err);
    }
  }
  c.bytes += rom_to_bytes(out.rom);

  const double dt = now_s() - t0;
  c.pass = worst <= 1e-4 && dt < 300.0;
  c.headline = fmt(
      "gp rom accuracy (65x65, 39 training kappa^2, K=60, 180 test queries): max rel "
      "L2 err vs fom %.3e (gate 1e-4); offline %.1f s, total %.1f s (budget 300 s)",
      worst, t_train, dt);
  for (std::size_t ia = 0; ia < alphas.size(); ++ia)
    c.notes.push_back(
        fmt("alpha=%.1f: max rel L2 err over 20 kappa^2 = %.3e", alphas[ia], per_alpha[ia]));
  return out;
}

// ---- criterion 6: online eigendecomposition path vs shiftwise path ----------

Criterion crit6() {
  Criterion c;
  const double t0 = now_s();
  const char* ids[3] = {"gp", "cookies-a", "aniso"};
  const int n_queries[3] = {7, 7, 6};
  UniformStream us(2025);

  double worst = 0.0;
  for (int p = 0; p < 3; ++p) {
    const AffineProblem problem =
        build_problem(ids[p], 17, 17, GpSpec::Rhs::WhiteNoise, 5);
    TrainingPlan plan;
    plan.samples = latin_hypercube(problem.box, 4, 31 + static_cast<std::uint64_t>(p));
    plan.target_rank = 10;
    plan.train_h = problem.mesh.hx();
    plan.sketch_seed = 7;
    plan.solver_tol = 1e-8;
    const RomArtifact rom = offline_train(plan, problem);

    double worst_p = 0.0;
    for (int i = 0; i < n_queries[p]; ++i) {
      OnlineQuery q;
      q.mu = random_in_box(problem.box, us);
      q.alpha = us.next_in(0.1, 0.9);
      const Vec64 ya = online_solve(rom, q);
      const Vec64 yb = online_solve_shiftwise(rom, q, rom.meta.train_h);
      const double rel = (ya - yb).norm() / yb.norm();
      worst_p = std::max(worst_p, rel);
      put(c.bytes, rel);
      put(c.bytes, ya);
    }
    worst = std::max(worst, worst_p);
    c.notes.push_back(fmt("%-9s (17x17, K=10): max eig-vs-shiftwise rel diff %.3e over "
                          "%d random queries",
                          ids[p], worst_p, n_queries[p]));
  }

  const double dt = now_s() - t0;
  c.pass = worst <= 1e-10 && dt < 30.0;
  c.headline = fmt(
      "online path equivalence (gp, cookies-a, aniso; 20 random queries): max rel "
      "difference %.3e (gate 1e-10); %.2f s (budget 30 s)",
      worst, dt);
  return c;
}

// ---- criterion 7: cookies and aniso accuracy at their pinned ranks ----------
// Training uses a looser per-sample solver tolerance (1e-6) than the default:
// over-resolving individual samples fills the sketch's top directions with
// sample-local fine corrections and measurably hurts the shared basis.

struct Leg {
  double max_err = 0.0;
  double train_s = 0.0;
  std::string bytes;
};

Leg rom_leg(const std::string& id, Index nmesh, Index K) {
  Leg leg;
  const AffineProblem problem = build_problem(id, nmesh, nmesh);
  TrainingPlan plan;
  plan.samples = latin_hypercube(problem.box, 100, 13);
  plan.target_rank = K;
  plan.train_h = problem.mesh.hx();
  plan.sketch_seed = 17;
  plan.solver_tol = 1e-6;

  const double t0 = now_s();
  const RomArtifact rom = offline_train(plan, problem);
  leg.train_s = now_s() - t0;

  const std::vector<Vec64> test_mus = latin_hypercube(problem.box, 10, 99);
  for (const Vec64& mu : test_mus) {
    for (double alpha : nine_alphas()) {
      OnlineQuery q;
      q.mu = mu;
      q.alpha = alpha;
      const Vec64 y_rom = online_solve(rom, q);
      const Vec64 y_fom = fom_solve(problem, mu, alpha, plan.train_h, 1e-10);
      const double err = rel_l2_m(problem.mass, y_rom, y_fom);
      leg.max_err = std::max(leg.max_err, err);
      put(leg.bytes, err);
    }
  }
  leg.bytes += rom_to_bytes(rom);
  return leg;
}

Criterion crit7() {
  Criterion c;
  const double t0 = now_s();

  const Leg cookies = rom_leg("cookies-a", 65, 60);
  c.bytes += cookies.bytes;
  c.notes.push_back(fmt("cookies-a (65x65, K=60, 100 LHS samples): max rel L2 err "
                        "%.3e over 90 test queries (gate 1e-3), offline %.1f s",
                        cookies.max_err, cookies.train_s));

  const Leg aniso = rom_leg("aniso", 65, 100);
  c.bytes += aniso.bytes;
  c.notes.push_back(fmt("aniso (65x65, K=100, 100 LHS samples): max rel L2 err %.3e "
                        "over 90 test queries (gate 1e-3), offline %.1f s",
                        aniso.max_err, aniso.train_s));

  // Not gated: the same aniso pipeline at K=300. The three-parameter rotated
  // tensor needs a much larger shared basis than the one-parameter problems;
  // this run documents that the K=100 miss above is a rank floor, not a
  // training defect.
  const Leg aniso300 = rom_leg("aniso", 65, 300);
  c.bytes += aniso300.bytes;
  c.notes.push_back(fmt("aniso rank evidence (K=300, informational, not gated): max "
                        "rel L2 err %.3e, offline %.1f s",
                        aniso300.max_err, aniso300.train_s));

  const double dt = now_s() - t0;
  c.pass = cookies.max_err <= 1e-3 && aniso.max_err <= 1e-3 && dt < 600.0;
  c.headline = fmt(
      "cookies-a max %.3e, aniso max %.3e (gate 1e-3 each, 10 LHS x 9 alpha sweeps); "
      "%.1f s (budget 600 s)",
      cookies.max_err, aniso.max_err, dt);
  return c;
}

// ---- criterion 8 (advisory): timing direction ------------------------------
// Re-plays the criterion-5 training stream, timing the streaming sketch
// against a dense SVD of the concatenated search bases, then times online
// queries against full-order solves. Misses warn; they never gate.

Criterion crit8(const C5Out& c5) {
  Criterion c;
  c.warn_only = true;
  const double t0 = now_s();
  if (!c5.trained) {
    c.headline = "skipped: criterion 5 training unavailable";
    return c;
  }
  const AffineProblem& problem = c5.problem;
  const std::vector<Vec64> samples = grid_sweep(problem.box, 39);
  const SincRule rule = training_rule(problem.mesh.hx());
  Vec64 shifts(rule.size());
  for (Index j = 0; j < rule.size(); ++j)
    shifts[j] = std::exp(-rule.nodes[static_cast<std::size_t>(j)]);

  SketchConfig cfg;
  cfg.target_rank = 60;
  cfg.seed = 11;
  SketchState sketch(problem.n_dof(), cfg);

  std::vector<DenseMatrix> blocks;
  double t_sketch = 0.0;
  for (const Vec64& mu : samples) {
    const Materialized mat = materialize(problem, mu);
    ShiftedFamily family;
    family.C1 = problem.mass;
    family.C2 = mat.K;
    family.rhs = mat.f;
    family.shifts = shifts;
    const Preconditioners precs =
        Preconditioners::build(family.C1, family.C2, default_taus());
    MpgmresOptions opts;
    opts.tol = 1e-8;
    opts.max_iter = 60;
    opts.want_solutions = false;
    const MpgmresResult res = mpgmres_sh(family, precs, opts);

    const double ts = now_s();
    sketch.update(res.basis.Z);
    t_sketch += now_s() - ts;
    blocks.push_back(res.basis.Z);
  }
  double ts = now_s();
  const SketchState::Finalized fin = sketch.finalize(60);
  t_sketch += now_s() - ts;
  (void)fin;

  Index total_cols = 0;
  for (const DenseMatrix& Z : blocks) total_cols += static_cast<Index>(Z.cols());
  DenseMatrix S_hat(problem.n_dof(), total_cols);
  Index off = 0;
  for (const DenseMatrix& Z : blocks) {
    S_hat.middleCols(off, Z.cols()) = Z;
    off += static_cast<Index>(Z.cols());
  }
  ts = now_s();
  const ThinSvd full = thin_svd(S_hat);
  const double t_svd = now_s() - ts;
  (void)full;
  const double ratio_compress = t_svd / t_sketch;

  // online vs full-order, averaged over the criterion-5 query set
  UniformStream us(777);
  std::vector<double> kappas(20);
  for (double& k2 : kappas) k2 = us.next_in(10.0, 200.0);
  ts = now_s();
  int n_online = 0;
  for (double k2 : kappas) {
    for (double alpha : nine_alphas()) {
      OnlineQuery q;
      q.mu = Vec64::Constant(1, k2);
      q.alpha = alpha;
      const Vec64 y = online_solve(c5.rom, q);
      (void)y;
      ++n_online;
    }
  }
  const double t_online = (now_s() - ts) / n_online;

  ts = now_s();
  int n_fom = 0;
  for (int i = 0; i < 2; ++i) {
    for (double alpha : {0.1, 0.5, 0.9}) {
      const Vec64 y = fom_solve(problem, Vec64::Constant(1, kappas[i]), alpha,
                                problem.mesh.hx(), 1e-8);
      (void)y;
      ++n_fom;
    }
  }
  const double t_fom = (now_s() - ts) / n_fom;
  const double ratio_online = t_fom / t_online;

  c.pass = ratio_compress >= 3.0 && ratio_online >= 10.0;
  const double dt = now_s() - t0;
  c.headline = fmt(
      "compression: sketch %.2f s vs dense SVD of the %dx%d basis matrix %.2f s "
      "(%.1fx, advisory gate 3x); online %.2e s/query vs fom %.2e s/query (%.0fx, "
      "advisory gate 10x); %.1f s",
      t_sketch, static_cast<int>(problem.n_dof()), static_cast<int>(total_cols), t_svd,
      ratio_compress, t_online, t_fom, ratio_online, dt);
  return c;
}

// ---- criterion 9: determinism -----------------------------------------------

Criterion crit9(const std::array<std::string, 8>& first_bytes,
                const std::array<bool, 8>& first_ok) {
  Criterion c;
  const double t0 = now_s();
  std::size_t total = 0;
  for (int k = 3; k <= 7; ++k) {
    if (!first_ok[static_cast<std::size_t>(k - 1)]) {
      c.pass = false;
      c.notes.push_back(fmt("criterion %d: first run threw, nothing to compare", k));
      continue;
    }
    std::string again;
    switch (k) {
      case 3: again = crit3().bytes; break;
      case 4: again = crit4().bytes; break;
      case 5: again = crit5().crit.bytes; break;
      case 6: again = crit6().bytes; break;
      case 7: again = crit7().bytes; break;
    }
    const std::string& first = first_bytes[static_cast<std::size_t>(k - 1)];
    const bool same = again.size() == first.size() &&
                      std::memcmp(again.data(), first.data(), first.size()) == 0;
    if (!same) c.pass = false;
    total += first.size();
    c.notes.push_back(fmt("criterion %d artifacts: %zu bytes, rerun %s", k,
                          first.size(), same ? "identical" : "DIFFERS"));
  }
  const double dt = now_s() - t0;
  c.headline = fmt(
      "criteria 3-7 re-run with identical seeds at 1 worker thread: %zu artifact "
      "bytes %s; %.1f s",
      total, c.pass ? "byte-identical" : "NOT byte-identical", dt);
  return c;
}

void print_criterion(int k, const Criterion& c) {
  const char* status = c.pass ? "PASS" : (c.warn_only ? "WARN" : "FAIL");
  std::printf("criterion %d: %s - %s\n", k, status, c.headline.c_str());
  for (const std::string& n : c.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  set_worker_threads(1);

  std::array<std::string, 8> bytes{};
  std::array<bool, 8> ran_ok{};
  int n_pass = 0, n_fail = 0, n_warn = 0;

  C5Out c5_out;
  auto account = [&](int k, const Criterion& c) {
    print_criterion(k, c);
    if (k >= 1 && k <= 8) {
      bytes[static_cast<std::size_t>(k - 1)] = c.bytes;
      ran_ok[static_cast<std::size_t>(k - 1)] = true;
    }
    if (c.pass) {
      ++n_pass;
    } else if (c.warn_only) {
      ++n_warn;
    } else {
      ++n_fail;
    }
  };
  auto failed = [&](int k, const std::exception& e) {
    Criterion c;
    c.pass = false;
    c.headline = fmt("exception: %s", e.what());
    print_criterion(k, c);
    ++n_fail;
  };

  for (int k = 1; k <= 9; ++k) {
    try {
      switch (k) {
        case 1: account(1, crit1()); break;
        case 2: account(2, crit2()); break;
        case 3: account(3, crit3()); break;
        case 4: account(4, crit4()); break;
        case 5:
          c5_out = crit5();
          account(5, c5_out.crit);
          break;
        case 6: account(6, crit6()); break;
        case 7: account(7, crit7()); break;
        case 8: account(8, crit8(c5_out)); break;
        case 9: account(9, crit9(bytes, ran_ok)); break;
      }
    } catch (const std::exception& e) {
      failed(k, e);
    }
  }

  std::printf("acceptance: %d passed, %d failed, %d warn-only of 9 criteria\n", n_pass,
              n_fail, n_warn);
  return n_fail == 0 ? 0 : 1;
}
