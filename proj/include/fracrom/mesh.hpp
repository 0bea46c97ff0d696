#pragma once

#include <array>
#include <vector>

#include "fracrom/common.hpp"

namespace fracrom {

enum class BoundaryKind { HomogeneousNeumann, HomogeneousDirichlet };

// Uniform lattice on [ax,bx] x [ay,by] with nx * ny nodes, ordered
// lexicographically with x fastest. Each cell is split along its
// lower-left -> upper-right diagonal into two triangles:
//   lower: (sw, se, ne), upper: (sw, ne, nw), both counterclockwise.
struct StructuredMesh {
  double ax = 0, bx = 1, ay = 0, by = 1;
  Index nx = 2, ny = 2;

  static StructuredMesh rect(double ax, double bx, double ay, double by,
                             Index nx, Index ny);
  static StructuredMesh unit_square(Index nx, Index ny) {
    return rect(0.0, 1.0, 0.0, 1.0, nx, ny);
  }

  Index n_nodes() const { return nx * ny; }
  Index n_cells() const { return (nx - 1) * (ny - 1); }
  Index n_triangles() const { return 2 * n_cells(); }
  double hx() const { return (bx - ax) / static_cast<double>(nx - 1); }
  double hy() const { return (by - ay) / static_cast<double>(ny - 1); }
  double area() const { return (bx - ax) * (by - ay); }

  Index node_id(Index ix, Index iy) const { return iy * nx + ix; }
  double node_x(Index id) const { return ax + hx() * static_cast<double>(id % nx); }
  double node_y(Index id) const { return ay + hy() * static_cast<double>(id / nx); }
  bool on_boundary(Index id) const {
    const Index ix = id % nx, iy = id / nx;
    return ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1;
  }

  // Triangle t lives in cell t/2; even t is the lower triangle.
  std::array<Index, 3> triangle_nodes(Index t) const;
  // Centroid of triangle t (used for in/out tests on discontinuous
  // coefficients).
  void triangle_centroid(Index t, double* cx, double* cy) const;
};

// Node -> equation mapping. Neumann keeps every node; Dirichlet keeps the
// (nx-2)*(ny-2) interior nodes and eliminates boundary rows/columns.
struct DofMap {
  Index n_dof = 0;
  std::vector<Index> node_to_dof;  // -1 for eliminated nodes
  std::vector<Index> dof_to_node;

  static DofMap build(const StructuredMesh& mesh, BoundaryKind bc);
};

}  // namespace fracrom
