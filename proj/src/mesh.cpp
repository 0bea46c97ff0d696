#include "fracrom/mesh.hpp"

namespace fracrom {

StructuredMesh StructuredMesh::rect(double ax, double bx, double ay, double by,
                                    Index nx, Index ny) {
  if (!(bx > ax) || !(by > ay))
    throw ConfigError("mesh: domain box must have positive extent");
  if (nx < 2 || ny < 2)
    throw ConfigError("mesh: need nx, ny >= 2, got " + std::to_string(nx) +
                      "x" + std::to_string(ny));
  StructuredMesh m;
  m.ax = ax;
  m.bx = bx;
  m.ay = ay;
  m.by = by;
  m.nx = nx;
  m.ny = ny;
  return m;
}

std::array<Index, 3> StructuredMesh::triangle_nodes(Index t) const {
  const Index cell = t / 2;
  const Index cx = cell % (nx - 1);
  const Index cy = cell / (nx - 1);
  const Index sw = node_id(cx, cy);
  const Index se = sw + 1;
  const Index nw = sw + nx;
  const Index ne = nw + 1;
  if ((t & 1) == 0) return {sw, se, ne};
  return {sw, ne, nw};
}

void StructuredMesh::triangle_centroid(Index t, double* cx, double* cy) const {
  const auto n = triangle_nodes(t);
  *cx = (node_x(n[0]) + node_x(n[1]) + node_x(n[2])) / 3.0;
  *cy = (node_y(n[0]) + node_y(n[1]) + node_y(n[2])) / 3.0;
}

DofMap DofMap::build(const StructuredMesh& mesh, BoundaryKind bc) {
  DofMap map;
  const Index n = mesh.n_nodes();
  map.node_to_dof.assign(n, -1);
  if (bc == BoundaryKind::HomogeneousNeumann) {
    map.n_dof = n;
    map.dof_to_node.resize(n);
    for (Index i = 0; i < n; ++i) {
      map.node_to_dof[i] = i;
      map.dof_to_node[i] = i;
    }
    return map;
  }
  if (mesh.nx < 3 || mesh.ny < 3)
    throw ConfigError("mesh: Dirichlet problem needs nx, ny >= 3 (no interior)");
  for (Index i = 0; i < n; ++i) {
    if (mesh.on_boundary(i)) continue;
    map.node_to_dof[i] = map.n_dof++;
    map.dof_to_node.push_back(i);
  }
  return map;
}

}  // namespace fracrom
