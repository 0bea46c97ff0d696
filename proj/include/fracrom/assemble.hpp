#pragma once

#include <functional>

#include "fracrom/csr.hpp"
#include "fracrom/mesh.hpp"

namespace fracrom {

// P1 assembly on the structured triangle mesh. All element integrals are
// exact (the integrands are polynomial), and assembly is sequential in
// element order, so repeated assemblies are bit-identical.

CsrMatrix assemble_mass(const StructuredMesh& mesh, const DofMap& dofs);

// Stiffness [A]_ij = Int (Theta grad phi_j) . grad phi_i. The constant-tensor
// overload validates symmetry; the per-element overload queries theta(t) for
// each triangle t and validates each returned tensor.
CsrMatrix assemble_stiffness(const StructuredMesh& mesh, const DofMap& dofs,
                             const Eigen::Matrix2d& theta);
CsrMatrix assemble_stiffness(
    const StructuredMesh& mesh, const DofMap& dofs,
    const std::function<Eigen::Matrix2d(Index)>& theta_of_element);

// Load [g]_i = Int b phi_i for b constant, or for b the P1 interpolant of
// per-node values (consistent mass, no lumping).
Vec64 assemble_load_constant(const StructuredMesh& mesh, const DofMap& dofs,
                             double c);
Vec64 assemble_load_node_values(const StructuredMesh& mesh, const DofMap& dofs,
                                const Vec64& node_values);

// Convenience overloads taking the boundary condition directly (build the
// DofMap internally).
CsrMatrix assemble_mass(const StructuredMesh& mesh, BoundaryKind bc);
CsrMatrix assemble_stiffness(const StructuredMesh& mesh, BoundaryKind bc,
                             const Eigen::Matrix2d& theta);

}  // namespace fracrom
