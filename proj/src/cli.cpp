#include "fracrom/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracrom/affine.hpp"
#include "fracrom/common.hpp"
#include "fracrom/csr.hpp"
#include "fracrom/problems.hpp"
#include "fracrom/rom.hpp"
#include "fracrom/rom_file.hpp"

namespace fracrom {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// --- config plumbing ---------------------------------------------------------
// All config complaints are ConfigError with the dotted field path, so the
// message pinpoints the offending entry ("rom.sketch_seed", ...).

std::string dot(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ConfigError("config: field \"" + path + "\" " + what);
}

const json* maybe(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& need(const json& j, const std::string& ctx, const std::string& key) {
  const json* p = maybe(j, key);
  if (!p)
    throw ConfigError("config: missing required field \"" + dot(ctx, key) + "\"");
  return *p;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "must be a number");
  return j.get<double>();
}

Index as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "must be an integer");
  const auto v = j.get<long long>();
  if (v < -2147483648LL || v > 2147483647LL) bad(path, "is out of range");
  return static_cast<Index>(v);
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::uint64_t>(j.get<long long>());
  bad(path, "must be a nonnegative integer");
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "must be a string");
  return j.get<std::string>();
}

json load_config(const std::string& path) {
  const std::string text = read_file(path);  // IoError on failure
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    throw ConfigError("config: " + path + " is not valid JSON");
  if (!j.is_object())
    throw ConfigError("config: " + path + " must contain a JSON object");
  return j;
}

// --- config -> domain objects ------------------------------------------------

struct ProblemConfig {
  std::string id;
  Index nx = 0, ny = 0;
  GpSpec::Rhs gp_rhs = GpSpec::Rhs::ConstantOne;
  std::uint64_t gp_rhs_seed = 0;
};

ProblemConfig parse_problem(const json& root) {
  ProblemConfig pc;
  pc.id = as_string(need(root, "", "problem"), "problem");
  const json& grid = need(root, "", "grid");
  pc.nx = as_index(need(grid, "grid", "nx"), "grid.nx");
  pc.ny = as_index(need(grid, "grid", "ny"), "grid.ny");
  if (pc.nx < 2 || pc.ny < 2)
    throw ConfigError("config: grid.nx and grid.ny must be at least 2");
  if (const json* rhs = maybe(root, "rhs")) {
    const std::string mode = as_string(need(*rhs, "rhs", "mode"), "rhs.mode");
    if (mode == "constant_one") {
      pc.gp_rhs = GpSpec::Rhs::ConstantOne;
    } else if (mode == "white_noise") {
      if (pc.id != "gp")
        throw ConfigError(
            "config: rhs.mode \"white_noise\" is only available for problem "
            "\"gp\" (the other problems fix their own load)");
      pc.gp_rhs = GpSpec::Rhs::WhiteNoise;
      pc.gp_rhs_seed = as_seed(need(*rhs, "rhs", "seed"), "rhs.seed");
    } else {
      bad("rhs.mode", "must be \"constant_one\" or \"white_noise\"");
    }
  }
  return pc;
}

AffineProblem build_from(const ProblemConfig& pc) {
  return build_problem(pc.id, pc.nx, pc.ny, pc.gp_rhs, pc.gp_rhs_seed);
}

std::vector<Vec64> parse_samples(const json& arr, const std::string& path,
                                 Index dim) {
  if (!arr.is_array()) bad(path, "must be an array");
  std::vector<Vec64> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    const std::string epath = path + "[" + std::to_string(i) + "]";
    Vec64 mu;
    if (e.is_number()) {
      mu = Vec64::Constant(1, e.get<double>());
    } else if (e.is_array()) {
      mu = Vec64(static_cast<Index>(e.size()));
      for (std::size_t c = 0; c < e.size(); ++c) {
        if (!e[c].is_number()) bad(epath, "must contain numbers only");
        mu(static_cast<Index>(c)) = e[c].get<double>();
      }
    } else {
      bad(epath, "must be a number or an array of numbers");
    }
    if (static_cast<Index>(mu.size()) != dim)
      throw ConfigError("config: " + epath + " has " +
                        std::to_string(mu.size()) +
                        " component(s); this problem expects " +
                        std::to_string(dim));
    if (!mu.allFinite()) bad(epath, "must be finite");
    out.push_back(std::move(mu));
  }
  return out;
}

// A sample set is either an explicit list or a generator spec:
//   {"samples": [10, 20, ...]}                       (numbers if 1-D)
//   {"samples": [[0.1, 0.2], ...]}                   (arrays otherwise)
//   {"generator": {"kind": "grid-sweep", "count": 39}}
//   {"generator": {"kind": "latin-hypercube", "count": 100, "seed": 7}}
std::vector<Vec64> parse_sample_set(const json& obj, const std::string& ctx,
                                    const ParamBox& box) {
  const json* samples = maybe(obj, "samples");
  const json* gen = maybe(obj, "generator");
  if (samples && gen)
    throw ConfigError("config: \"" + ctx +
                      "\" must give either \"samples\" or \"generator\", not "
                      "both");
  if (samples) return parse_samples(*samples, dot(ctx, "samples"), box.dim());
  if (!gen)
    throw ConfigError("config: \"" + ctx +
                      "\" needs a \"samples\" list or a \"generator\"");
  const std::string gctx = dot(ctx, "generator");
  const std::string kind = as_string(need(*gen, gctx, "kind"), dot(gctx, "kind"));
  const Index count = as_index(need(*gen, gctx, "count"), dot(gctx, "count"));
  if (count < 1) bad(dot(gctx, "count"), "must be at least 1");
  if (kind == "grid-sweep") return grid_sweep(box, count);
  if (kind == "latin-hypercube") {
    const std::uint64_t seed =
        as_seed(need(*gen, gctx, "seed"), dot(gctx, "seed"));
    return latin_hypercube(box, count, seed);
  }
  bad(dot(gctx, "kind"), "must be \"grid-sweep\" or \"latin-hypercube\"");
}

std::vector<double> parse_alphas(const json& obj, const std::string& ctx) {
  const json& a = need(obj, ctx, "alphas");
  const std::string path = dot(ctx, "alphas");
  if (!a.is_array()) bad(path, "must be an array of numbers");
  std::vector<double> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) bad(path, "must contain numbers only");
    const double v = a[i].get<double>();
    if (!(v > 0.0 && v < 1.0))
      throw ConfigError("config: " + path + "[" + std::to_string(i) +
                        "] must lie in (0, 1)");
    out.push_back(v);
  }
  return out;
}

struct RomConfig {
  Index K = 0;
  std::vector<double> taus = default_taus();
  double tol = 1e-8;
  Index max_iter = 60;
  std::uint64_t sketch_seed = 0;
  double quad_h = 0.0;  // 0: use the mesh spacing
};

RomConfig parse_rom(const json& root) {
  const json& r = need(root, "", "rom");
  RomConfig rc;
  rc.K = as_index(need(r, "rom", "K"), "rom.K");
  if (rc.K < 1) bad("rom.K", "must be at least 1");
  rc.sketch_seed = as_seed(need(r, "rom", "sketch_seed"), "rom.sketch_seed");
  if (const json* t = maybe(r, "taus")) {
    if (!t->is_array() || t->empty())
      bad("rom.taus", "must be a nonempty array of numbers");
    rc.taus.clear();
    for (std::size_t i = 0; i < t->size(); ++i)
      rc.taus.push_back(as_number((*t)[i], "rom.taus"));
    // ordering/sign constraints are enforced when the preconditioners are
    // built, with the same ConfigError category
  }
  if (const json* t = maybe(r, "tol")) {
    rc.tol = as_number(*t, "rom.tol");
    if (!(rc.tol > 0.0)) bad("rom.tol", "must be positive");
  }
  if (const json* t = maybe(r, "max_iter")) {
    rc.max_iter = as_index(*t, "rom.max_iter");
    if (rc.max_iter < 1) bad("rom.max_iter", "must be at least 1");
  }
  if (const json* t = maybe(r, "quad_h")) {
    rc.quad_h = as_number(*t, "rom.quad_h");
    if (!(rc.quad_h > 0.0 && rc.quad_h < 1.0))
      bad("rom.quad_h", "must lie in (0, 1)");
  }
  return rc;
}

struct FomConfig {
  double tol = 1e-10;
  double quad_h = 0.0;  // 0: fall back (mesh spacing, or the artifact's step)
};

FomConfig parse_fom(const json& root) {
  FomConfig fc;
  if (const json* f = maybe(root, "fom")) {
    if (const json* t = maybe(*f, "tol")) {
      fc.tol = as_number(*t, "fom.tol");
      if (!(fc.tol > 0.0)) bad("fom.tol", "must be positive");
    }
    if (const json* t = maybe(*f, "quad_h")) {
      fc.quad_h = as_number(*t, "fom.quad_h");
      if (!(fc.quad_h > 0.0 && fc.quad_h < 1.0))
        bad("fom.quad_h", "must lie in (0, 1)");
    }
  }
  return fc;
}

// --- small output helpers ----------------------------------------------------

double mesh_step(const StructuredMesh& m) { return std::max(m.hx(), m.hy()); }

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void ensure_parent_dir(const std::string& path) {
  ensure_dir(fs::path(path).parent_path().string());
}

std::string fmt_secs(double s) {  // millisecond resolution, C locale
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

double round3(double s) { return std::round(s * 1000.0) / 1000.0; }

std::vector<double> to_std(const Vec64& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void write_vector_bin(const std::string& path, const Vec64& y) {
  write_file(path, std::string(reinterpret_cast<const char*>(y.data()),
                               sizeof(double) * static_cast<std::size_t>(y.size())));
}

void print_warnings(const RunLog& log) {
  for (const auto& w : log.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

// Relative error in the L2(Omega) norm induced by the mass matrix.
double m_rel_error(const CsrMatrix& M, const Vec64& ref, const Vec64& approx) {
  const Vec64 d = ref - approx;
  const double num = std::max(d.dot(spmv(M, d)), 0.0);
  const double den = ref.dot(spmv(M, ref));
  if (den <= 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

Vec64 vec_from(const std::vector<double>& v) {
  Vec64 out(static_cast<Index>(v.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = v[static_cast<std::size_t>(i)];
  return out;
}

void require_mu_dim(const AffineProblem& problem, const Vec64& mu) {
  if (static_cast<Index>(mu.size()) != problem.box.dim())
    throw ConfigError("--mu has " + std::to_string(mu.size()) +
                      " component(s); problem \"" + problem.id + "\" expects " +
                      std::to_string(problem.box.dim()));
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("--alpha must lie in (0, 1)");
}

json grid_json(Index nx, Index ny) { return json{{"nx", nx}, {"ny", ny}}; }

// --- subcommands --------------------------------------------------------------

int cmd_offline(const std::string& config_path, std::string output_dir) {
  const json cfg = load_config(config_path);
  const ProblemConfig pc = parse_problem(cfg);
  const AffineProblem problem = build_from(pc);
  const RomConfig rc = parse_rom(cfg);
  if (output_dir.empty())
    output_dir = as_string(need(cfg, "", "output_dir"), "output_dir");

  TrainingPlan plan;
  plan.samples = parse_sample_set(need(cfg, "", "training"), "training", problem.box);
  plan.target_rank = rc.K;
  plan.train_h = rc.quad_h > 0.0 ? rc.quad_h : mesh_step(problem.mesh);
  plan.sketch_seed = rc.sketch_seed;
  plan.solver_tol = rc.tol;
  plan.max_iter = rc.max_iter;
  plan.taus = rc.taus;

  std::printf("offline: problem %s on %dx%d (%d dofs), %zu training samples, "
              "K = %d, quadrature step %s\n",
              problem.id.c_str(), (int)pc.nx, (int)pc.ny, (int)problem.n_dof(),
              plan.samples.size(), (int)rc.K, format_double(plan.train_h).c_str());

  RunLog log;
  TrainReport report;
  WallTimer total;
  const RomArtifact rom = offline_train(plan, problem, &log, &report);
  const double total_s = total.seconds();
  print_warnings(log);

  ensure_dir(output_dir);
  const std::string rom_path = (fs::path(output_dir) / "rom.bin").string();
  save_rom(rom_path, rom);

  json jr;
  jr["problem"] = problem.id;
  jr["grid"] = grid_json(pc.nx, pc.ny);
  jr["n_dof"] = report.n_dof;
  jr["K"] = rom.meta.K;
  jr["quad_h"] = plan.train_h;
  jr["n_shifts"] = report.n_shifts;
  jr["n_train"] = plan.samples.size();
  jr["sketch_seed"] = plan.sketch_seed;
  jr["solver_tol"] = plan.solver_tol;
  jr["max_iter"] = plan.max_iter;
  jr["taus"] = plan.taus;
  jr["samples_digest"] = rom.meta.samples_digest;
  json rows = json::array();
  for (const auto& s : report.samples) {
    rows.push_back(json{{"mu", to_std(s.mu)},
                        {"iterations", s.iterations},
                        {"basis_cols", s.basis_cols},
                        {"converged", s.converged},
                        {"wall_s", round3(s.wall_s)}});
  }
  jr["samples"] = rows;
  jr["wall_s"] = json{{"solve", round3(report.solve_wall_s)},
                      {"sketch", round3(report.sketch_wall_s)},
                      {"finalize", round3(report.finalize_wall_s)},
                      {"project", round3(report.project_wall_s)},
                      {"total", round3(total_s)}};
  jr["warnings"] = log.warnings;
  const std::string report_path = (fs::path(output_dir) / "train_report.json").string();
  write_file(report_path, jr.dump(2) + "\n");

  std::string csv = "index,sigma_estimate\n";
  for (Index i = 0; i < report.sigma_estimates.size(); ++i)
    csv += std::to_string(i) + "," + format_double(report.sigma_estimates(i)) + "\n";
  const std::string sv_path = (fs::path(output_dir) / "singular_values.csv").string();
  write_file(sv_path, csv);

  std::printf("wrote %s (K = %d, %d x %d values)\n", rom_path.c_str(),
              (int)rom.meta.K, (int)rom.V.rows(), (int)rom.V.cols());
  std::printf("wrote %s and %s\n", report_path.c_str(), sv_path.c_str());
  std::printf("offline total %s s (solve %s, sketch %s, finalize %s, project %s)\n",
              fmt_secs(total_s).c_str(), fmt_secs(report.solve_wall_s).c_str(),
              fmt_secs(report.sketch_wall_s).c_str(),
              fmt_secs(report.finalize_wall_s).c_str(),
              fmt_secs(report.project_wall_s).c_str());
  return 0;
}

int cmd_online(const std::string& rom_path, const std::vector<double>& mu_in,
               double alpha, const std::string& out_prefix, double quad_h) {
  require_alpha(alpha);
  const RomArtifact rom = load_rom(rom_path);
  rom.check_valid();
  OnlineQuery q;
  q.mu = vec_from(mu_in);
  q.alpha = alpha;
  if (q.mu.size() != static_cast<Index>(rom.meta.box_lo.size()))
    throw ConfigError("--mu has " + std::to_string(q.mu.size()) +
                      " component(s); the reduced model for \"" +
                      rom.meta.problem_id + "\" expects " +
                      std::to_string(rom.meta.box_lo.size()));
  const double h = quad_h > 0.0 ? quad_h : rom.meta.train_h;

  RunLog log;
  WallTimer t;
  const Vec64 y = online_solve(rom, q, h, &log);
  const double secs = t.seconds();
  print_warnings(log);

  ensure_parent_dir(out_prefix);
  write_vector_bin(out_prefix + ".bin", y);
  json js;
  js["problem"] = rom.meta.problem_id;
  js["grid"] = grid_json(rom.meta.nx, rom.meta.ny);
  js["n_dof"] = rom.meta.n_dof;
  js["K"] = rom.meta.K;
  js["mu"] = to_std(q.mu);
  js["alpha"] = alpha;
  js["quad_h"] = h;
  js["online_time_s"] = round3(secs);
  js["rom"] = rom_path;
  js["solution"] = out_prefix + ".bin";
  js["warnings"] = log.warnings;
  write_file(out_prefix + ".json", js.dump(2) + "\n");

  std::printf("wrote %s.bin (%d values) and %s.json in %s s\n",
              out_prefix.c_str(), (int)y.size(), out_prefix.c_str(),
              fmt_secs(secs).c_str());
  return 0;
}

int cmd_fom(const std::string& config_path, const std::vector<double>& mu_in,
            double alpha, const std::string& out_prefix, double quad_h,
            double tol_flag) {
  require_alpha(alpha);
  const json cfg = load_config(config_path);
  const ProblemConfig pc = parse_problem(cfg);
  const FomConfig fc = parse_fom(cfg);
  const AffineProblem problem = build_from(pc);
  const Vec64 mu = vec_from(mu_in);
  require_mu_dim(problem, mu);
  double h = quad_h > 0.0 ? quad_h
             : fc.quad_h > 0.0 ? fc.quad_h
                               : mesh_step(problem.mesh);
  const double tol = tol_flag > 0.0 ? tol_flag : fc.tol;

  FomStats stats;
  WallTimer t;
  const Vec64 y = fom_solve(problem, mu, alpha, h, tol, &stats);
  const double secs = t.seconds();

  ensure_parent_dir(out_prefix);
  write_vector_bin(out_prefix + ".bin", y);
  json js;
  js["problem"] = problem.id;
  js["grid"] = grid_json(pc.nx, pc.ny);
  js["n_dof"] = problem.n_dof();
  js["mu"] = to_std(mu);
  js["alpha"] = alpha;
  js["quad_h"] = h;
  js["tol"] = tol;
  js["n_shifts"] = stats.n_shifts;
  js["iterations"] = stats.iterations;
  js["basis_cols"] = stats.basis_cols;
  js["max_rel_resid"] = stats.max_rel_resid;
  js["fom_time_s"] = round3(secs);
  js["solution"] = out_prefix + ".bin";
  write_file(out_prefix + ".json", js.dump(2) + "\n");

  std::printf("wrote %s.bin (%d values): %d shifts, %d iterations, %d basis "
              "columns, %s s\n",
              out_prefix.c_str(), (int)y.size(), (int)stats.n_shifts,
              (int)stats.iterations, (int)stats.basis_cols,
              fmt_secs(secs).c_str());
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& rom_path,
              std::string csv_path) {
  const json cfg = load_config(config_path);
  const ProblemConfig pc = parse_problem(cfg);
  const FomConfig fc = parse_fom(cfg);
  const AffineProblem problem = build_from(pc);

  const RomArtifact rom = load_rom(rom_path);
  rom.check_valid();
  if (rom.meta.problem_id != problem.id || rom.meta.nx != pc.nx ||
      rom.meta.ny != pc.ny || rom.meta.n_dof != problem.n_dof())
    throw ConfigError(
        "reduced model mismatch: " + rom_path + " was trained on \"" +
        rom.meta.problem_id + "\" (" + std::to_string(rom.meta.nx) + "x" +
        std::to_string(rom.meta.ny) + ", " + std::to_string(rom.meta.n_dof) +
        " dofs) but the config requests \"" + problem.id + "\" (" +
        std::to_string(pc.nx) + "x" + std::to_string(pc.ny) + ", " +
        std::to_string(problem.n_dof()) + " dofs)");

  std::vector<Vec64> queries;
  std::vector<double> alphas;
  if (const json* ts = maybe(cfg, "test_set")) {
    queries = parse_sample_set(*ts, "test_set", problem.box);
    alphas = parse_alphas(*ts, "test_set");
  }
  const double h_fom = fc.quad_h > 0.0 ? fc.quad_h : rom.meta.train_h;

  if (csv_path.empty()) {
    const std::string dir = as_string(need(cfg, "", "output_dir"), "output_dir");
    csv_path = (fs::path(dir) / "errors.csv").string();
  }
  ensure_parent_dir(csv_path);

  std::string header = "problem,alpha";
  for (Index c = 0; c < problem.box.dim(); ++c)
    header += ",mu_" + std::to_string(c);
  header += ",rel_l2_error,online_time_s,fom_time_s\n";
  std::string csv = header;

  RunLog log;
  double max_err = 0.0, sum_err = 0.0;
  Index n_rows = 0;
  WallTimer total;
  for (const double alpha : alphas) {
    for (const auto& mu : queries) {
      OnlineQuery q;
      q.mu = mu;
      q.alpha = alpha;
      WallTimer t_on;
      const Vec64 y_rom = online_solve(rom, q, &log);
      const double online_s = t_on.seconds();
      WallTimer t_fom;
      const Vec64 y_fom = fom_solve(problem, mu, alpha, h_fom, fc.tol);
      const double fom_s = t_fom.seconds();
      const double err = m_rel_error(problem.mass, y_fom, y_rom);
      max_err = std::max(max_err, err);
      sum_err += err;
      ++n_rows;
      csv += problem.id + "," + format_double(alpha);
      for (Index c = 0; c < mu.size(); ++c) csv += "," + format_double(mu(c));
      csv += "," + format_double(err) + "," + fmt_secs(online_s) + "," +
             fmt_secs(fom_s) + "\n";
    }
  }
  print_warnings(log);
  if (n_rows > 0) {
    // trailer row with a different shape than the data rows: a labeled
    // key,value,key,value summary
    csv += "summary,max_rel_l2_error," + format_double(max_err) +
           ",mean_rel_l2_error," + format_double(sum_err / n_rows) + "\n";
  }
  write_file(csv_path, csv);
  if (n_rows > 0) {
    std::printf("sweep: %d queries (%zu alphas x %zu samples) in %s s\n",
                (int)n_rows, alphas.size(), queries.size(),
                fmt_secs(total.seconds()).c_str());
    std::printf("max rel L2 error %s, mean %s\n", format_double(max_err).c_str(),
                format_double(sum_err / n_rows).c_str());
  } else {
    std::printf("sweep: empty test set, header-only CSV\n");
  }
  std::printf("wrote %s\n", csv_path.c_str());
  return 0;
}

int cmd_bench(const std::string& config_path, std::string output_dir) {
  const json cfg = load_config(config_path);
  const ProblemConfig pc = parse_problem(cfg);
  const AffineProblem problem = build_from(pc);
  const RomConfig rc = parse_rom(cfg);
  const FomConfig fc = parse_fom(cfg);
  if (output_dir.empty())
    output_dir = as_string(need(cfg, "", "output_dir"), "output_dir");

  TrainingPlan plan;
  plan.samples = parse_sample_set(need(cfg, "", "training"), "training", problem.box);
  plan.target_rank = rc.K;
  plan.train_h = rc.quad_h > 0.0 ? rc.quad_h : mesh_step(problem.mesh);
  plan.sketch_seed = rc.sketch_seed;
  plan.solver_tol = rc.tol;
  plan.max_iter = rc.max_iter;
  plan.taus = rc.taus;
  const auto n_train = static_cast<Index>(plan.samples.size());

  std::printf("bench: problem %s on %dx%d (%d dofs), %d training samples, K = %d\n",
              problem.id.c_str(), (int)pc.nx, (int)pc.ny, (int)problem.n_dof(),
              (int)n_train, (int)rc.K);

  // streamed offline pass (the proposed pipeline)
  RunLog log;
  TrainReport report;
  WallTimer t_total;
  const RomArtifact rom = offline_train(plan, problem, &log, &report);
  const double offline_total_s = t_total.seconds();
  const double stream_s = report.solve_wall_s + report.sketch_wall_s;
  print_warnings(log);
  std::printf("streamed offline: %s s (stream %s, finalize %s, project %s)\n",
              fmt_secs(offline_total_s).c_str(), fmt_secs(stream_s).c_str(),
              fmt_secs(report.finalize_wall_s).c_str(),
              fmt_secs(report.project_wall_s).c_str());

  // snapshot-matrix baseline: explicit per-shift direct solves + dense SVD.
  // Skipped (with a note) when the snapshot matrix would not fit.
  bool naive_ran = false;
  NaiveReport naive;
  try {
    naive_offline(plan, problem, &naive);
    naive_ran = true;
    std::printf("snapshot baseline: %s s solves + %s s svd (%d columns)\n",
                fmt_secs(naive.snapshot_wall_s).c_str(),
                fmt_secs(naive.svd_wall_s).c_str(), (int)naive.snapshot_cols);
  } catch (const ConfigError& e) {
    std::printf("snapshot baseline skipped: %s\n", e.what());
  }

  // per-query timings over the test set
  std::vector<Vec64> queries;
  std::vector<double> alphas;
  if (const json* ts = maybe(cfg, "test_set")) {
    queries = parse_sample_set(*ts, "test_set", problem.box);
    alphas = parse_alphas(*ts, "test_set");
  }
  double online_s = 0.0, fom_s = 0.0;
  Index n_online = 0, n_fom = 0;
  const double h_fom = fc.quad_h > 0.0 ? fc.quad_h : plan.train_h;
  for (const double alpha : alphas) {
    for (const auto& mu : queries) {
      OnlineQuery q;
      q.mu = mu;
      q.alpha = alpha;
      WallTimer t;
      const Vec64 y = online_solve(rom, q, &log);
      online_s += t.seconds();
      (void)y;
      ++n_online;
      if (n_fom < 3) {  // the full-order reference is priced from a few solves
        WallTimer tf;
        const Vec64 yf = fom_solve(problem, mu, alpha, h_fom, fc.tol);
        fom_s += tf.seconds();
        (void)yf;
        ++n_fom;
      }
    }
  }
  const double online_avg = n_online > 0 ? online_s / n_online : 0.0;
  const double fom_avg = n_fom > 0 ? fom_s / n_fom : 0.0;
  if (n_online > 0)
    std::printf("online avg %s s over %d queries", fmt_secs(online_avg).c_str(),
                (int)n_online);
  if (n_fom > 0)
    std::printf("; full-order avg %s s over %d queries", fmt_secs(fom_avg).c_str(),
                (int)n_fom);
  if (n_online > 0) std::printf("\n");

  std::string csv = "metric,value\n";
  auto put = [&csv](const std::string& k, const std::string& v) {
    csv += k + "," + v + "\n";
  };
  put("n_dof", std::to_string(problem.n_dof()));
  put("K", std::to_string(rc.K));
  put("n_train", std::to_string(n_train));
  put("n_shifts", std::to_string(report.n_shifts));
  put("offline_stream_s", fmt_secs(stream_s));
  put("offline_finalize_s", fmt_secs(report.finalize_wall_s));
  put("offline_project_s", fmt_secs(report.project_wall_s));
  put("offline_total_s", fmt_secs(offline_total_s));
  if (naive_ran) {
    put("snapshot_cols", std::to_string(naive.snapshot_cols));
    put("naive_snapshot_s", fmt_secs(naive.snapshot_wall_s));
    put("naive_svd_s", fmt_secs(naive.svd_wall_s));
    put("naive_total_s", fmt_secs(naive.snapshot_wall_s + naive.svd_wall_s));
    if (n_train > 0)
      put("naive_per_sample_s", fmt_secs(naive.snapshot_wall_s / n_train));
    if (report.finalize_wall_s > 0.0)
      put("svd_over_sketch_finalize",
          fmt_secs(naive.svd_wall_s / report.finalize_wall_s));
  }
  if (n_online > 0) {
    put("n_online_queries", std::to_string(n_online));
    put("online_avg_s", fmt_secs(online_avg));
  }
  if (n_fom > 0) {
    put("n_fom_queries", std::to_string(n_fom));
    put("fom_avg_s", fmt_secs(fom_avg));
  }
  if (n_online > 0 && n_fom > 0 && online_avg > 0.0)
    put("fom_over_online", fmt_secs(fom_avg / online_avg));

  ensure_dir(output_dir);
  const std::string csv_path = (fs::path(output_dir) / "timings.csv").string();
  write_file(csv_path, csv);
  std::printf("wrote %s\n", csv_path.c_str());
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"reduced-order solver for spectral fractional diffusion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fracrom 0.1.0");

  int threads = 1;
  app.add_option("--threads", threads, "worker thread cap (default 1)")
      ->envname("FRACROM_THREADS")
      ->check(CLI::PositiveNumber);

  std::string config_path, rom_path, out_path, output_dir;
  std::vector<double> mu;
  double alpha = 0.5, quad_h = 0.0, tol = 0.0;

  CLI::App* offline =
      app.add_subcommand("offline", "train a reduced model, write rom.bin + "
                                    "train_report.json + singular_values.csv");
  offline->add_option("--config", config_path, "JSON config file")->required();
  offline->add_option("--output-dir", output_dir,
                      "overrides the config's output_dir");

  CLI::App* online = app.add_subcommand(
      "online", "evaluate a reduced model at one (mu, alpha) query");
  online->add_option("--rom", rom_path, "reduced-model artifact (rom.bin)")
      ->required();
  online->add_option("--mu", mu, "parameter components")
      ->required()
      ->delimiter(',');
  online->add_option("--alpha", alpha, "fractional exponent in (0, 1)")
      ->required();
  online->add_option("--out", out_path, "output prefix (.bin and .json)")
      ->required();
  online->add_option("--quad-h", quad_h, "override the stored quadrature step");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "reduced vs full-order errors over the config's test set");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--rom", rom_path, "reduced-model artifact")->required();
  sweep->add_option("--out", out_path,
                    "errors.csv path (default <output_dir>/errors.csv)");

  CLI::App* fom = app.add_subcommand(
      "fom", "full-order fractional solve at one (mu, alpha) query");
  fom->add_option("--config", config_path, "JSON config file")->required();
  fom->add_option("--mu", mu, "parameter components")->required()->delimiter(',');
  fom->add_option("--alpha", alpha, "fractional exponent in (0, 1)")->required();
  fom->add_option("--out", out_path, "output prefix (.bin and .json)")->required();
  fom->add_option("--quad-h", quad_h, "quadrature step (default from config/mesh)");
  fom->add_option("--tol", tol, "solver tolerance (default from config)");

  CLI::App* bench = app.add_subcommand(
      "bench", "time the streamed offline pipeline against the snapshot "
               "baseline, write timings.csv");
  bench->add_option("--config", config_path, "JSON config file")->required();
  bench->add_option("--output-dir", output_dir,
                    "overrides the config's output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_worker_threads(threads);
    if (offline->parsed()) return cmd_offline(config_path, output_dir);
    if (online->parsed())
      return cmd_online(rom_path, mu, alpha, out_path, quad_h);
    if (sweep->parsed()) return cmd_sweep(config_path, rom_path, out_path);
    if (fom->parsed())
      return cmd_fom(config_path, mu, alpha, out_path, quad_h, tol);
    if (bench->parsed()) return cmd_bench(config_path, output_dir);
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace fracrom
