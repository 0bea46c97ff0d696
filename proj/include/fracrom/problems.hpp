#pragma once

// Benchmark problem builders: Gaussian-process precision operator on the unit
// square (Neumann), the "cookies" disc-inclusion diffusion problem on
// (-1,1)^2 (Dirichlet), and rotated anisotropic diffusion on the unit square
// (Dirichlet). Each returns an AffineProblem with its parameter box.

#include <cstdint>
#include <string>
#include <vector>

#include "fracrom/affine.hpp"

namespace fracrom {

// (kappa^2 - Laplace) on (0,1)^2 with homogeneous Neumann bc.
// Terms: stiffness (coeff 1) + mass (coeff mu[0] = kappa^2), box [10, 200].
struct GpSpec {
  enum class Rhs { ConstantOne, WhiteNoise };
  Rhs rhs = Rhs::ConstantOne;
  std::uint64_t seed = 0;  // white-noise stream seed
};
AffineProblem build_gp(const GpSpec& spec, const StructuredMesh& mesh);

// Fractional exponent of the GP precision operator: alpha = (nu + d/2) / 2.
double gp_alpha_from_nu(double nu, int d = 2);

// -div(D(x;mu) grad) on (-1,1)^2, Dirichlet; D = 1 + sum_t mu_t * chi_t with
// chi_t disc indicators (element membership by centroid). Terms region_1..p
// (coeff mu[t]) then global (coeff 1); load int(v); box [0,1]^p.
//   Case A: one disc, radius 0.5, center (0,0).
//   Case B: four discs, radius 0.3, centers (+-0.5, +-0.5) ordered
//           counterclockwise from (+0.5, +0.5).
struct CookiesSpec {
  enum class Case { A, B };
  Case which = Case::A;
};
AffineProblem build_cookies(const CookiesSpec& spec, const StructuredMesh& mesh);

// -div(Theta(mu) grad) on (0,1)^2, Dirichlet, with mu = (d1, d2, th) in
// [0.5,4.5]^2 x [0,pi/2]. Structure matrices for the xx, symmetrized xy, and
// yy gradient couplings with coefficients
//   f1 = cos^2(th) d1 + sin^2(th) d2,  f2 = sin(th)cos(th)(d2 - d1),
//   f3 = cos^2(th) d2 + sin^2(th) d1;
// load int(v) (b = 1).
struct AnisoSpec {};
AffineProblem build_aniso(const AnisoSpec& spec, const StructuredMesh& mesh);

// CLI problem ids: "gp", "cookies-a", "cookies-b", "aniso". The mesh is built
// on the problem's canonical domain with the given node counts.
AffineProblem build_problem(const std::string& id, Index nx, Index ny,
                            GpSpec::Rhs gp_rhs = GpSpec::Rhs::ConstantOne,
                            std::uint64_t gp_rhs_seed = 0);
StructuredMesh problem_mesh(const std::string& id, Index nx, Index ny);

// count values evenly spaced over [lo, hi] inclusive (count >= 2; count == 1
// gives the midpoint). grid_sweep requires a 1-D box.
std::vector<double> evenly_spaced(double lo, double hi, Index count);
std::vector<Vec64> grid_sweep(const ParamBox& box, Index count);

// Standard stratified-permutation Latin hypercube sample of the box.
std::vector<Vec64> latin_hypercube(const ParamBox& box, Index count,
                                   std::uint64_t seed);

}  // namespace fracrom
