#include "fracrom/rom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fracrom {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec64 rule_shifts(const SincRule& rule) {
  // sigma_k = e^{-z_k}: the shifted systems (K + e^{z_k} M) u = f rescaled to
  // (M + sigma_k K) u = sigma_k f, which is the family MPGMRES-Sh works on.
  Vec64 s(rule.size());
  for (Index k = 0; k < rule.size(); ++k) {
    s(k) = std::exp(-rule.nodes[static_cast<size_t>(k)]);
    if (!std::isfinite(s(k)))
      throw NumericError(
          "quadrature shift e^{-z} overflows for alpha = " +
          format_double(rule.alpha) + ", h = " + format_double(rule.h) +
          "; use a larger h or the reduced model's spectral path");
  }
  return s;
}

// Combination coefficients of the *scaled* projected solutions: the
// fractional solution is y = sum_k w_k u_k with u_k = sigma_k Z p_k, so
// y = Z sum_k c_k p_k with c_k = w_k sigma_k = (zeta sin(alpha pi)/pi)
// e^{-alpha z_k}. Evaluated in log space: w_k alone can overflow when
// (1-alpha) z_k is large even though the product never does.
Vec64 combination_coeffs(const SincRule& rule) {
  const double log_wfac =
      std::log(rule.zeta * std::sin(rule.alpha * kPi) / kPi);
  Vec64 c(rule.size());
  for (Index k = 0; k < rule.size(); ++k)
    c(k) = std::exp(log_wfac - rule.alpha * rule.nodes[k]);
  return c;
}

std::string hex_u32(std::uint32_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(8, '0');
  for (int i = 7; i >= 0; --i, v >>= 4) s[static_cast<size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string samples_digest(const std::vector<Vec64>& samples) {
  std::uint32_t crc = 0;
  for (const Vec64& mu : samples)
    crc = crc32_update(crc, mu.data(), sizeof(double) * static_cast<size_t>(mu.size()));
  return hex_u32(crc);
}

DenseMatrix project_symmetric(const DenseMatrix& V, const CsrMatrix& A) {
  DenseMatrix AV(V.rows(), V.cols());
  parallel_for(static_cast<Index>(V.cols()), [&](Index j) {
    spmv_into(A, V.col(j).data(), AV.col(j).data());
  });
  DenseMatrix P = V.transpose() * AV;
  // Exactly symmetric by construction in exact arithmetic; make it so in
  // floating point too (the eig path checks symmetry).
  return 0.5 * (P + P.transpose());
}

RomMeta make_meta(const TrainingPlan& plan, const AffineProblem& problem) {
  RomMeta meta;
  meta.problem_id = problem.id;
  meta.nx = problem.mesh.nx;
  meta.ny = problem.mesh.ny;
  meta.n_dof = problem.n_dof();
  meta.K = plan.target_rank;
  meta.train_h = plan.train_h;
  meta.train_alpha = 0.5;
  meta.sketch_seed = plan.sketch_seed;
  meta.solver_tol = plan.solver_tol;
  meta.taus = plan.taus;
  for (const auto& t : problem.stiffness_terms) meta.op_coeffs.push_back(t.coeff.id());
  for (const auto& t : problem.load_terms) meta.load_coeffs.push_back(t.coeff.id());
  meta.box_lo.assign(problem.box.lo.data(), problem.box.lo.data() + problem.box.dim());
  meta.box_hi.assign(problem.box.hi.data(), problem.box.hi.data() + problem.box.dim());
  meta.samples_digest = samples_digest(plan.samples);
  return meta;
}

void project_terms(const AffineProblem& problem, RomArtifact& rom) {
  for (const auto& t : problem.stiffness_terms)
    rom.A_hat.push_back(project_symmetric(rom.V, t.matrix));
  rom.M_hat = project_symmetric(rom.V, problem.mass);
  for (const auto& t : problem.load_terms)
    rom.g_hat.push_back(rom.V.transpose() * t.vector);
}

// Reduced operator and load at mu; warns (once per call) outside the box.
void reduced_system(const RomArtifact& rom, const Vec64& mu, RunLog* log,
                    DenseMatrix* K_hat, Vec64* g_hat) {
  const Index dim = static_cast<Index>(rom.meta.box_lo.size());
  if (static_cast<Index>(mu.size()) != dim) {
    std::ostringstream os;
    os << "online query: mu has dimension " << mu.size() << " but the model \""
       << rom.meta.problem_id << "\" expects " << dim;
    throw ConfigError(os.str());
  }
  if (log != nullptr) {
    for (Index i = 0; i < dim; ++i)
      if (!(mu(i) >= rom.meta.box_lo[static_cast<size_t>(i)] &&
            mu(i) <= rom.meta.box_hi[static_cast<size_t>(i)])) {
        log->warn("online query: mu outside the trained parameter box of \"" +
                  rom.meta.problem_id + "\"; extrapolating");
        break;
      }
  }
  const Index K = rom.k();
  *K_hat = DenseMatrix::Zero(K, K);
  for (size_t t = 0; t < rom.A_hat.size(); ++t)
    K_hat->noalias() +=
        CoeffFn::from_id(rom.meta.op_coeffs[t]).eval(mu) * rom.A_hat[t];
  *g_hat = Vec64::Zero(K);
  for (size_t t = 0; t < rom.g_hat.size(); ++t)
    g_hat->noalias() +=
        CoeffFn::from_id(rom.meta.load_coeffs[t]).eval(mu) * rom.g_hat[t];
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("exponent alpha = " + format_double(alpha) +
                      " must lie in (0,1)");
}

}  // namespace

void TrainingPlan::check_valid() const {
  if (samples.empty()) throw ConfigError("training plan: no parameter samples");
  const Index dim = static_cast<Index>(samples.front().size());
  for (const Vec64& mu : samples)
    if (static_cast<Index>(mu.size()) != dim || !mu.allFinite())
      throw ConfigError("training plan: inconsistent or non-finite sample");
  if (target_rank < 1) throw ConfigError("training plan: basis size K must be >= 1");
  if (!(train_h > 0.0 && train_h < 1.0))
    throw ConfigError("training plan: quadrature step h must lie in (0,1)");
  if (!(solver_tol > 0.0)) throw ConfigError("training plan: solver tol must be positive");
  if (max_iter < 1) throw ConfigError("training plan: max_iter must be >= 1");
}

void RomArtifact::check_valid() const {
  const Index K = k();
  if (K < 1 || V.rows() < K)
    throw ConfigError("reduced model: invalid basis shape");
  if (meta.K != K || meta.n_dof != static_cast<Index>(V.rows()))
    throw ConfigError("reduced model: meta does not match stored basis");
  const double ortho =
      (V.transpose() * V - DenseMatrix::Identity(K, K)).cwiseAbs().maxCoeff();
  if (!(ortho <= 1e-10))
    throw NumericError("reduced model: basis not orthonormal (deviation " +
                       format_double(ortho) + ")");
  if (A_hat.size() != meta.op_coeffs.size() || g_hat.size() != meta.load_coeffs.size())
    throw ConfigError("reduced model: term counts do not match meta");
  for (const auto& a : A_hat) {
    if (a.rows() != K || a.cols() != K)
      throw DimensionError("reduced model: reduced operator term shape mismatch");
    require_symmetric(a, "reduced operator term");
  }
  if (M_hat.rows() != K || M_hat.cols() != K)
    throw DimensionError("reduced model: reduced mass shape mismatch");
  require_symmetric(M_hat, "reduced mass");
  dense_cholesky_lower(M_hat, "reduced mass");  // SPD or it throws
  for (const auto& g : g_hat)
    if (static_cast<Index>(g.size()) != K)
      throw DimensionError("reduced model: reduced load shape mismatch");
}

RomArtifact offline_train(const TrainingPlan& plan, const AffineProblem& problem,
                          RunLog* log, TrainReport* report) {
  plan.check_valid();
  problem.check_valid();
  for (const Vec64& mu : plan.samples)
    if (static_cast<Index>(mu.size()) != problem.box.dim())
      throw ConfigError("training plan: sample dimension does not match problem");

  const SincRule rule = training_rule(plan.train_h);
  const Vec64 shifts = rule_shifts(rule);
  SketchState sketch(problem.n_dof(), {plan.target_rank, plan.sketch_seed});
  if (report != nullptr) {
    report->n_dof = problem.n_dof();
    report->n_shifts = rule.size();
  }

  for (size_t j = 0; j < plan.samples.size(); ++j) {
    const Vec64& mu = plan.samples[j];
    WallTimer timer;
    Materialized sys = materialize(problem, mu, log);
    ShiftedFamily family{problem.mass, std::move(sys.K), shifts, std::move(sys.f)};
    Preconditioners precs =
        Preconditioners::build(family.C1, family.C2, plan.taus);
    MpgmresOptions opts;
    opts.tol = plan.solver_tol;
    opts.max_iter = plan.max_iter;
    opts.want_solutions = false;
    MpgmresResult res = mpgmres_sh(family, precs, opts);
    const double solve_s = timer.seconds();
    if (!res.all_converged && log != nullptr) {
      Index misses = 0;
      for (char c : res.converged) misses += (c == 0);
      log->warn("training sample " + std::to_string(j + 1) + ": " +
                std::to_string(misses) + " of " +
                std::to_string(res.converged.size()) +
                " shifts above tol after " + std::to_string(res.iterations) +
                " iterations (worst relative residual " +
                format_double(res.final_residuals.maxCoeff()) +
                "); keeping its basis");
    }
    WallTimer sketch_timer;
    sketch.update(res.basis.Z);
    if (report != nullptr) {
      report->samples.push_back({mu, res.iterations, res.basis.n_cols(),
                                 res.all_converged, timer.seconds()});
      report->solve_wall_s += solve_s;
      report->sketch_wall_s += sketch_timer.seconds();
    }
  }

  WallTimer finalize_timer;
  SketchState::Finalized fin = sketch.finalize(plan.target_rank, log);
  const double finalize_s = finalize_timer.seconds();

  RomArtifact rom;
  rom.meta = make_meta(plan, problem);
  rom.V = std::move(fin.V);
  WallTimer project_timer;
  project_terms(problem, rom);
  if (report != nullptr) {
    report->sigma_estimates = std::move(fin.sigma_est);
    report->finalize_wall_s = finalize_s;
    report->project_wall_s = project_timer.seconds();
  }
  rom.check_valid();
  return rom;
}

Vec64 online_solve(const RomArtifact& rom, const OnlineQuery& q, double h,
                   RunLog* log) {
  require_alpha(q.alpha);
  DenseMatrix K_hat;
  Vec64 g_hat;
  reduced_system(rom, q.mu, log, &K_hat, &g_hat);
  const SincRule rule = build_rule(q.alpha, h);

  GeneralizedEig eig = sym_generalized_eig(K_hat, rom.M_hat);
  // Coefficients of g in the M_hat-orthonormal eigenbasis: d = U^T L^{-1} g.
  Vec64 d = eig.L.triangularView<Eigen::Lower>().solve(g_hat);
  d = eig.U.transpose() * d;
  for (Index i = 0; i < d.size(); ++i)
    d(i) *= scalar_fractional(rule, eig.lambda(i));
  Vec64 y_hat = eig.U * d;
  y_hat = eig.L.transpose().triangularView<Eigen::Upper>().solve(y_hat);
  return rom.V * y_hat;
}

Vec64 online_solve(const RomArtifact& rom, const OnlineQuery& q, RunLog* log) {
  return online_solve(rom, q, rom.meta.train_h, log);
}

Vec64 online_solve_shiftwise(const RomArtifact& rom, const OnlineQuery& q,
                             double h, RunLog* log) {
  require_alpha(q.alpha);
  DenseMatrix K_hat;
  Vec64 g_hat;
  reduced_system(rom, q.mu, log, &K_hat, &g_hat);
  const SincRule rule = build_rule(q.alpha, h);
  const double log_wfac =
      std::log(rule.zeta * std::sin(rule.alpha * kPi) / kPi);

  Vec64 y_hat = Vec64::Zero(rom.k());
  for (Index k = 0; k < rule.size(); ++k) {
    const double z = rule.nodes[static_cast<size_t>(k)];
    const double ez = std::exp(z);
    if (std::isfinite(ez)) {
      DenseMatrix A = K_hat + ez * rom.M_hat;
      y_hat += rule.weights[static_cast<size_t>(k)] *
               A.ldlt().solve(g_hat).eval();
    } else {
      // e^z overflowed: (K_hat + e^z M_hat)^{-1} ~= e^{-z} M_hat^{-1}, and
      // w_k e^{-z} = exp(log wfac + (1-alpha) z - z) stays representable.
      const double scale = std::exp(log_wfac - rule.alpha * z);
      y_hat += scale * rom.M_hat.ldlt().solve(g_hat).eval();
    }
  }
  return rom.V * y_hat;
}

Vec64 fom_solve(const AffineProblem& problem, const Vec64& mu, double alpha,
                double h, double tol, FomStats* stats) {
  require_alpha(alpha);
  Materialized sys = materialize(problem, mu, nullptr);
  const SincRule rule = build_rule(alpha, h);

  if (sys.f.norm() == 0.0) {
    if (stats != nullptr) *stats = {0, rule.size(), 0, true, 0.0};
    return Vec64::Zero(problem.n_dof());
  }

  ShiftedFamily family{problem.mass, std::move(sys.K), rule_shifts(rule),
                       std::move(sys.f)};
  Preconditioners precs = Preconditioners::build(family.C1, family.C2,
                                                 default_taus());
  MpgmresOptions opts;
  opts.tol = tol;
  opts.max_iter = 60;
  opts.want_solutions = false;
  MpgmresResult res = mpgmres_sh(family, precs, opts);
  if (stats != nullptr) {
    stats->iterations = res.iterations;
    stats->n_shifts = rule.size();
    stats->basis_cols = res.basis.n_cols();
    stats->converged = res.all_converged;
    stats->max_rel_resid = res.final_residuals.maxCoeff();
  }
  if (!res.all_converged) {
    Index misses = 0;
    for (char c : res.converged) misses += (c == 0);
    throw NumericError(
        "full-order solve did not converge: " + std::to_string(misses) +
        " of " + std::to_string(res.converged.size()) +
        " shifted systems above tol " + format_double(tol) + " after " +
        std::to_string(res.iterations) + " iterations (worst relative residual " +
        format_double(res.final_residuals.maxCoeff()) + ")");
  }

  DenseMatrix P = solve_projected_all(res.basis, family, family.shifts);
  const Vec64 c = combination_coeffs(rule);
  Vec64 coeff = Vec64::Zero(res.basis.n_cols());
  for (Index k = 0; k < rule.size(); ++k) coeff += c(k) * P.col(k);
  return res.basis.Z * coeff;
}

Vec64 spectral_oracle(const AffineProblem& problem, const Vec64& mu,
                      double alpha) {
  if (problem.n_dof() > 5000)
    throw ConfigError("spectral reference is limited to 5000 unknowns, got " +
                      std::to_string(problem.n_dof()));
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("spectral reference: alpha must lie in (0,1]");
  Materialized sys = materialize(problem, mu, nullptr);
  GeneralizedEig eig =
      sym_generalized_eig(sys.K.to_dense(), problem.mass.to_dense());
  // M-orthonormal eigenvectors Phi = L^{-T} U; y = Phi diag(lambda^-alpha) Phi^T f.
  Vec64 d = eig.L.triangularView<Eigen::Lower>().solve(sys.f);
  d = eig.U.transpose() * d;
  for (Index i = 0; i < d.size(); ++i) {
    if (!(eig.lambda(i) > 0.0))
      throw NumericError("spectral reference: nonpositive eigenvalue " +
                         format_double(eig.lambda(i)));
    d(i) *= std::pow(eig.lambda(i), -alpha);
  }
  Vec64 y = eig.U * d;
  return eig.L.transpose().triangularView<Eigen::Upper>().solve(y);
}

RomArtifact naive_offline(const TrainingPlan& plan, const AffineProblem& problem,
                          NaiveReport* report) {
  plan.check_valid();
  problem.check_valid();
  const SincRule rule = training_rule(plan.train_h);
  const Index n = problem.n_dof();
  const Index cols = static_cast<Index>(plan.samples.size()) * rule.size();
  if (static_cast<double>(n) * static_cast<double>(cols) > 2.5e8)
    throw ConfigError("snapshot matrix would exceed the dense-path memory guard");
  if (plan.target_rank > std::min(n, cols))
    throw ConfigError("basis size K exceeds the snapshot rank bound");

  WallTimer snapshot_timer;
  DenseMatrix S(n, cols);
  Index col = 0;
  for (const Vec64& mu : plan.samples) {
    Materialized sys = materialize(problem, mu, nullptr);
    for (Index k = 0; k < rule.size(); ++k) {
      const double z = rule.nodes[static_cast<size_t>(k)];
      // (K + e^z M) u = f, solved directly per shift; scaled form keeps the
      // matrix finite for large positive z.
      const double sigma = std::exp(-z);
      CsrMatrix A = sparse_add_scaled(problem.mass, sys.K, 1.0, sigma);
      S.col(col++) = sparse_cholesky(A).solve(sigma * sys.f);
    }
  }
  const double snapshot_s = snapshot_timer.seconds();

  WallTimer svd_timer;
  ThinSvd svd = thin_svd(S);
  if (report != nullptr) {
    report->singular_values = svd.sigma;
    report->snapshot_cols = cols;
    report->snapshot_wall_s = snapshot_s;
    report->svd_wall_s = svd_timer.seconds();
  }

  RomArtifact rom;
  rom.meta = make_meta(plan, problem);
  rom.V = svd.U.leftCols(plan.target_rank);
  project_terms(problem, rom);
  rom.check_valid();
  return rom;
}

}  // namespace fracrom
