#include "fracrom/problems.hpp"

#include <cmath>
#include <numeric>

#include "fracrom/assemble.hpp"
#include "fracrom/rng.hpp"
#include "fracrom/sparse_cholesky.hpp"

namespace fracrom {

namespace {

void require_domain(const StructuredMesh& mesh, double ax, double bx, double ay,
                    double by, const char* problem) {
  if (mesh.ax != ax || mesh.bx != bx || mesh.ay != ay || mesh.by != by)
    throw ConfigError(std::string(problem) +
                      ": mesh does not cover the problem's canonical domain");
}

ParamBox box_1d(double lo, double hi) {
  ParamBox b;
  b.lo = Vec64::Constant(1, lo);
  b.hi = Vec64::Constant(1, hi);
  return b;
}

// Element-indicator stiffness for a disc: Theta = I on elements whose
// centroid lies in the disc, 0 elsewhere.
CsrMatrix disc_stiffness(const StructuredMesh& mesh, const DofMap& dofs,
                         double cx, double cy, double r) {
  const double r2 = r * r;
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d zero = Eigen::Matrix2d::Zero();
  return assemble_stiffness(
      mesh, dofs, [&](Index t) -> Eigen::Matrix2d {
        double tx = 0, ty = 0;
        mesh.triangle_centroid(t, &tx, &ty);
        const double dx = tx - cx, dy = ty - cy;
        return dx * dx + dy * dy <= r2 ? eye : zero;
      });
}

}  // namespace

AffineProblem build_gp(const GpSpec& spec, const StructuredMesh& mesh) {
  require_domain(mesh, 0.0, 1.0, 0.0, 1.0, "gp");
  AffineProblem p;
  p.id = "gp";
  p.mesh = mesh;
  p.bc = BoundaryKind::HomogeneousNeumann;
  p.dofs = DofMap::build(mesh, p.bc);
  p.mass = assemble_mass(mesh, p.dofs);
  p.stiffness_terms.push_back(
      {assemble_stiffness(mesh, p.dofs, Eigen::Matrix2d::Identity()),
       CoeffFn::one(), "stiffness"});
  p.stiffness_terms.push_back({p.mass, CoeffFn::mu(0), "mass"});

  Vec64 g;
  if (spec.rhs == GpSpec::Rhs::ConstantOne) {
    g = assemble_load_constant(mesh, p.dofs, 1.0);
  } else {
    // White noise: g = L_M * omega with M = L_M L_M^T, omega iid standard
    // normal. Then cov(g) = M, the FEM representation of the white-noise
    // functional.
    GaussianStream gauss(derive_stream_seed(spec.seed, 0));
    Vec64 omega(p.dofs.n_dof);
    for (Index i = 0; i < p.dofs.n_dof; ++i) omega(i) = gauss.next();
    g = sparse_cholesky(p.mass).apply_factor(omega);
  }
  p.load_terms.push_back({std::move(g), CoeffFn::one(), "load"});
  p.box = box_1d(10.0, 200.0);
  p.check_valid();
  return p;
}

double gp_alpha_from_nu(double nu, int d) {
  const double alpha = (nu + 0.5 * d) / 2.0;
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("gp exponent (nu + d/2)/2 = " + format_double(alpha) +
                      " falls outside (0,1)");
  return alpha;
}

AffineProblem build_cookies(const CookiesSpec& spec, const StructuredMesh& mesh) {
  require_domain(mesh, -1.0, 1.0, -1.0, 1.0, "cookies");
  AffineProblem p;
  p.id = spec.which == CookiesSpec::Case::A ? "cookies-a" : "cookies-b";
  p.mesh = mesh;
  p.bc = BoundaryKind::HomogeneousDirichlet;
  p.dofs = DofMap::build(mesh, p.bc);
  p.mass = assemble_mass(mesh, p.dofs);

  struct Disc {
    double cx, cy, r;
  };
  std::vector<Disc> discs;
  if (spec.which == CookiesSpec::Case::A) {
    discs = {{0.0, 0.0, 0.5}};
  } else {
    discs = {{0.5, 0.5, 0.3},
             {-0.5, 0.5, 0.3},
             {-0.5, -0.5, 0.3},
             {0.5, -0.5, 0.3}};
  }
  for (size_t t = 0; t < discs.size(); ++t)
    p.stiffness_terms.push_back(
        {disc_stiffness(mesh, p.dofs, discs[t].cx, discs[t].cy, discs[t].r),
         CoeffFn::mu(static_cast<Index>(t)),
         "region_" + std::to_string(t + 1)});
  p.stiffness_terms.push_back(
      {assemble_stiffness(mesh, p.dofs, Eigen::Matrix2d::Identity()),
       CoeffFn::one(), "global"});

  p.load_terms.push_back(
      {assemble_load_constant(mesh, p.dofs, 1.0), CoeffFn::one(), "load"});
  const Index np = static_cast<Index>(discs.size());
  p.box.lo = Vec64::Zero(np);
  p.box.hi = Vec64::Ones(np);
  p.check_valid();
  return p;
}

AffineProblem build_aniso(const AnisoSpec&, const StructuredMesh& mesh) {
  require_domain(mesh, 0.0, 1.0, 0.0, 1.0, "aniso");
  AffineProblem p;
  p.id = "aniso";
  p.mesh = mesh;
  p.bc = BoundaryKind::HomogeneousDirichlet;
  p.dofs = DofMap::build(mesh, p.bc);
  p.mass = assemble_mass(mesh, p.dofs);

  Eigen::Matrix2d xx = Eigen::Matrix2d::Zero(), xy = Eigen::Matrix2d::Zero(),
                  yy = Eigen::Matrix2d::Zero();
  xx(0, 0) = 1.0;
  xy(0, 1) = xy(1, 0) = 1.0;
  yy(1, 1) = 1.0;
  p.stiffness_terms.push_back(
      {assemble_stiffness(mesh, p.dofs, xx), CoeffFn::aniso_xx(), "xx"});
  p.stiffness_terms.push_back(
      {assemble_stiffness(mesh, p.dofs, xy), CoeffFn::aniso_xy(), "xy"});
  p.stiffness_terms.push_back(
      {assemble_stiffness(mesh, p.dofs, yy), CoeffFn::aniso_yy(), "yy"});

  p.load_terms.push_back(
      {assemble_load_constant(mesh, p.dofs, 1.0), CoeffFn::one(), "load"});
  p.box.lo = Vec64(3);
  p.box.hi = Vec64(3);
  p.box.lo << 0.5, 0.5, 0.0;
  p.box.hi << 4.5, 4.5, std::asin(1.0);  // pi/2

  // The xy structure matrix alone is symmetric but indefinite; positivity
  // holds for the materialized operator at admissible mu, which is what the
  // solver factors. check_valid() tests symmetry only.
  p.check_valid();
  return p;
}

StructuredMesh problem_mesh(const std::string& id, Index nx, Index ny) {
  if (id == "gp" || id == "aniso") return StructuredMesh::rect(0, 1, 0, 1, nx, ny);
  if (id == "cookies-a" || id == "cookies-b")
    return StructuredMesh::rect(-1, 1, -1, 1, nx, ny);
  throw ConfigError("unknown problem id: \"" + id +
                    "\" (expected gp, cookies-a, cookies-b, or aniso)");
}

AffineProblem build_problem(const std::string& id, Index nx, Index ny,
                            GpSpec::Rhs gp_rhs, std::uint64_t gp_rhs_seed) {
  const StructuredMesh mesh = problem_mesh(id, nx, ny);
  if (id == "gp") return build_gp({gp_rhs, gp_rhs_seed}, mesh);
  if (id == "cookies-a") return build_cookies({CookiesSpec::Case::A}, mesh);
  if (id == "cookies-b") return build_cookies({CookiesSpec::Case::B}, mesh);
  return build_aniso({}, mesh);
}

std::vector<double> evenly_spaced(double lo, double hi, Index count) {
  if (count < 1) throw ConfigError("evenly_spaced: count must be >= 1");
  std::vector<double> xs(static_cast<size_t>(count));
  if (count == 1) {
    xs[0] = 0.5 * (lo + hi);
    return xs;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (Index i = 0; i < count; ++i)
    xs[static_cast<size_t>(i)] = lo + step * static_cast<double>(i);
  xs.back() = hi;
  return xs;
}

std::vector<Vec64> grid_sweep(const ParamBox& box, Index count) {
  box.check_valid();
  if (box.dim() != 1)
    throw ConfigError("grid-sweep sampling needs a 1-D parameter box; use "
                      "latin-hypercube for multi-parameter problems");
  std::vector<Vec64> out;
  for (double x : evenly_spaced(box.lo(0), box.hi(0), count))
    out.push_back(Vec64::Constant(1, x));
  return out;
}

std::vector<Vec64> latin_hypercube(const ParamBox& box, Index count,
                                   std::uint64_t seed) {
  box.check_valid();
  if (count < 1) throw ConfigError("latin_hypercube: count must be >= 1");
  const Index d = box.dim();
  std::vector<Vec64> out(static_cast<size_t>(count), Vec64::Zero(d));
  for (Index j = 0; j < d; ++j) {
    UniformStream stream(derive_stream_seed(seed, static_cast<std::uint64_t>(j)));
    // Fisher-Yates permutation of the strata, then one uniform draw per cell.
    std::vector<Index> perm(static_cast<size_t>(count));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index i = count - 1; i > 0; --i) {
      auto k = static_cast<Index>(stream.next() * static_cast<double>(i + 1));
      if (k > i) k = i;  // guard the (measure-zero) top edge of the draw
      std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(k)]);
    }
    for (Index i = 0; i < count; ++i) {
      const double u = stream.next();
      const double frac =
          (static_cast<double>(perm[static_cast<size_t>(i)]) + u) /
          static_cast<double>(count);
      out[static_cast<size_t>(i)](j) = box.lo(j) + (box.hi(j) - box.lo(j)) * frac;
    }
  }
  return out;
}

}  // namespace fracrom
