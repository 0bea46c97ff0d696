#pragma once

// Affine parameter dependence: K(mu) = sum_t f_t(mu) * A_t and
// f(mu) = sum_t f_t(mu) * g_t with parameter-independent matrices/vectors.
// Coefficient functions come from a closed set identified by string ids so
// that a saved reduced model can re-evaluate them without the matrices.

#include <string>
#include <vector>

#include "fracrom/common.hpp"
#include "fracrom/csr.hpp"
#include "fracrom/dense.hpp"
#include "fracrom/mesh.hpp"

namespace fracrom {

// Closed set of scalar coefficient functions mu -> double.
//   one        : 1
//   mu[i]      : i-th parameter component
//   aniso_xx   : cos^2(th)*d1 + sin^2(th)*d2   with mu = (d1, d2, th)
//   aniso_xy   : sin(th)*cos(th)*(d2 - d1)
//   aniso_yy   : cos^2(th)*d2 + sin^2(th)*d1
struct CoeffFn {
  enum class Kind { One, MuComponent, AnisoXX, AnisoXY, AnisoYY };
  Kind kind = Kind::One;
  Index index = 0;  // component for MuComponent, unused otherwise

  static CoeffFn one() { return {Kind::One, 0}; }
  static CoeffFn mu(Index i) { return {Kind::MuComponent, i}; }
  static CoeffFn aniso_xx() { return {Kind::AnisoXX, 0}; }
  static CoeffFn aniso_xy() { return {Kind::AnisoXY, 0}; }
  static CoeffFn aniso_yy() { return {Kind::AnisoYY, 0}; }

  double eval(const Vec64& mu) const;
  std::string id() const;
  static CoeffFn from_id(const std::string& id);  // throws ConfigError
};

struct OperatorTerm {
  CsrMatrix matrix;
  CoeffFn coeff;
  std::string name;  // "stiffness", "mass", "region_1", ...
};

struct LoadTerm {
  Vec64 vector;
  CoeffFn coeff;
  std::string name;
};

struct ParamBox {
  Vec64 lo, hi;

  Index dim() const { return static_cast<Index>(lo.size()); }
  bool contains(const Vec64& mu) const;
  void check_valid() const;  // same dims, lo <= hi, finite
};

struct AffineProblem {
  std::string id;  // "gp" | "cookies-a" | "cookies-b" | "aniso"
  StructuredMesh mesh;
  BoundaryKind bc = BoundaryKind::HomogeneousNeumann;
  DofMap dofs;
  CsrMatrix mass;
  std::vector<OperatorTerm> stiffness_terms;
  std::vector<LoadTerm> load_terms;
  ParamBox box;

  Index n_dof() const { return dofs.n_dof; }
  Index n_a() const { return static_cast<Index>(stiffness_terms.size()); }
  Index n_g() const { return static_cast<Index>(load_terms.size()); }

  // Dimension agreement, mass/terms symmetric, finite entries, box sane.
  void check_valid() const;
};

struct Materialized {
  CsrMatrix K;
  Vec64 f;
};

// Exact affine combination at mu. A mu outside the declared box records a
// warning in `log` (when given) and proceeds: extrapolation is permitted.
Materialized materialize(const AffineProblem& problem, const Vec64& mu,
                         RunLog* log = nullptr);

CsrMatrix materialize_operator(const AffineProblem& problem, const Vec64& mu);
Vec64 materialize_load(const AffineProblem& problem, const Vec64& mu);

}  // namespace fracrom
