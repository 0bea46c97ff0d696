#include "fracrom/assemble.hpp"

#include <cmath>

namespace fracrom {

namespace {

// P1 shape-function gradients; row i is grad phi_i of the triangle's i-th
// vertex in the (sw,se,ne) / (sw,ne,nw) orderings of StructuredMesh.
void triangle_gradients(const StructuredMesh& m, bool lower, double grad[3][2]) {
  const double ihx = 1.0 / m.hx(), ihy = 1.0 / m.hy();
  if (lower) {
    grad[0][0] = -ihx; grad[0][1] = 0.0;
    grad[1][0] = ihx;  grad[1][1] = -ihy;
    grad[2][0] = 0.0;  grad[2][1] = ihy;
  } else {
    grad[0][0] = 0.0;  grad[0][1] = -ihy;
    grad[1][0] = ihx;  grad[1][1] = 0.0;
    grad[2][0] = -ihx; grad[2][1] = ihy;
  }
}

void require_symmetric_tensor(const Eigen::Matrix2d& th) {
  const double scale = th.cwiseAbs().maxCoeff();
  if (std::abs(th(0, 1) - th(1, 0)) > 1e-12 * scale + 1e-300)
    throw NumericError("assemble_stiffness: diffusion tensor not symmetric");
}

void scatter(const StructuredMesh& mesh, const DofMap& dofs, Index t,
             const double ke[3][3], std::vector<Triplet>& out) {
  const auto nodes = mesh.triangle_nodes(t);
  for (int i = 0; i < 3; ++i) {
    const Index di = dofs.node_to_dof[nodes[i]];
    if (di < 0) continue;
    for (int j = 0; j < 3; ++j) {
      const Index dj = dofs.node_to_dof[nodes[j]];
      if (dj < 0) continue;
      out.push_back({di, dj, ke[i][j]});
    }
  }
}

}  // namespace

CsrMatrix assemble_mass(const StructuredMesh& mesh, const DofMap& dofs) {
  const double area = 0.5 * mesh.hx() * mesh.hy();
  const double d = area / 6.0, o = area / 12.0;
  const double ke[3][3] = {{d, o, o}, {o, d, o}, {o, o, d}};
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.n_triangles()) * 9);
  for (Index t = 0; t < mesh.n_triangles(); ++t) scatter(mesh, dofs, t, ke, trips);
  return CsrMatrix::from_triplets(dofs.n_dof, dofs.n_dof, std::move(trips));
}

CsrMatrix assemble_stiffness(
    const StructuredMesh& mesh, const DofMap& dofs,
    const std::function<Eigen::Matrix2d(Index)>& theta_of_element) {
  const double area = 0.5 * mesh.hx() * mesh.hy();
  double grads[2][3][2];
  triangle_gradients(mesh, true, grads[0]);
  triangle_gradients(mesh, false, grads[1]);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.n_triangles()) * 9);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const Eigen::Matrix2d th = theta_of_element(t);
    require_symmetric_tensor(th);
    const auto& g = grads[t & 1 ? 1 : 0];
    double ke[3][3];
    for (int i = 0; i < 3; ++i) {
      const double tgx = th(0, 0) * g[i][0] + th(0, 1) * g[i][1];
      const double tgy = th(1, 0) * g[i][0] + th(1, 1) * g[i][1];
      for (int j = 0; j < 3; ++j)
        ke[i][j] = area * (tgx * g[j][0] + tgy * g[j][1]);
    }
    scatter(mesh, dofs, t, ke, trips);
  }
  return CsrMatrix::from_triplets(dofs.n_dof, dofs.n_dof, std::move(trips));
}

CsrMatrix assemble_stiffness(const StructuredMesh& mesh, const DofMap& dofs,
                             const Eigen::Matrix2d& theta) {
  require_symmetric_tensor(theta);
  return assemble_stiffness(mesh, dofs,
                            [&theta](Index) -> Eigen::Matrix2d { return theta; });
}

Vec64 assemble_load_constant(const StructuredMesh& mesh, const DofMap& dofs,
                             double c) {
  const double contrib = c * 0.5 * mesh.hx() * mesh.hy() / 3.0;
  Vec64 g = Vec64::Zero(dofs.n_dof);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    for (Index node : mesh.triangle_nodes(t)) {
      const Index d = dofs.node_to_dof[node];
      if (d >= 0) g(d) += contrib;
    }
  }
  return g;
}

Vec64 assemble_load_node_values(const StructuredMesh& mesh, const DofMap& dofs,
                                const Vec64& node_values) {
  if (static_cast<Index>(node_values.size()) != mesh.n_nodes())
    throw DimensionError("assemble_load_node_values: expected one value per node");
  const double area = 0.5 * mesh.hx() * mesh.hy();
  const double d = area / 6.0, o = area / 12.0;
  Vec64 g = Vec64::Zero(dofs.n_dof);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto nodes = mesh.triangle_nodes(t);
    const double f0 = node_values(nodes[0]), f1 = node_values(nodes[1]),
                 f2 = node_values(nodes[2]);
    const double le[3] = {d * f0 + o * (f1 + f2), d * f1 + o * (f0 + f2),
                          d * f2 + o * (f0 + f1)};
    for (int i = 0; i < 3; ++i) {
      const Index di = dofs.node_to_dof[nodes[i]];
      if (di >= 0) g(di) += le[i];
    }
  }
  return g;
}

CsrMatrix assemble_mass(const StructuredMesh& mesh, BoundaryKind bc) {
  return assemble_mass(mesh, DofMap::build(mesh, bc));
}

CsrMatrix assemble_stiffness(const StructuredMesh& mesh, BoundaryKind bc,
                             const Eigen::Matrix2d& theta) {
  return assemble_stiffness(mesh, DofMap::build(mesh, bc), theta);
}

}  // namespace fracrom
