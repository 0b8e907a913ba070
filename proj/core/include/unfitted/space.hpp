#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "unfitted/mesh.hpp"

namespace unfitted {

inline constexpr int kMaxLocalDofs = 9;

using LocalVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxLocalDofs, 1>;
using LocalGradients = Eigen::Matrix<double, Eigen::Dynamic, 2, 0, kMaxLocalDofs, 2>;
using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLocalDofs,
                                  kMaxLocalDofs>;

struct ShapeValues {
  LocalVector values;
  LocalGradients gradients;  // row i = gradient of local basis function i
};

/// Nodal Lagrange basis on the reference element: the unit triangle
/// (0,0),(1,0),(0,1) for P1, the unit square [0,1]² for Q1/Q2. Quad dofs are
/// numbered lexicographically, a + (k+1) b for the node at (a/k, b/k).
ShapeValues shape_eval(ElementType type, const Vec2& ref_point);

/// Lagrange basis of one physical element, evaluated at physical points.
class LocalBasis {
 public:
  LocalBasis(ElementType type, const Cell& cell);

  int size() const noexcept { return dofs_per_element(type_); }
  ShapeValues eval(const Vec2& x) const;

 private:
  ElementType type_;
  Vec2 origin_;
  Eigen::Matrix2d inverse_jacobian_;  // reference = J⁻¹ (x - origin)
};

/// Continuous Lagrange space on the active mesh. Only nodes touched by an
/// active element carry a dof; dofs are numbered in grid order.
class FeSpace {
 public:
  FeSpace(const BackgroundMesh& mesh, const ActiveMesh& active);

  const BackgroundMesh& mesh() const noexcept { return mesh_; }
  int order() const noexcept { return polynomial_order(mesh_.element_type()); }
  int dofs_per_element() const noexcept { return unfitted::dofs_per_element(mesh_.element_type()); }
  std::size_t n_dofs() const noexcept { return dof_coordinates_.size(); }
  std::size_t n_elements() const noexcept { return element_dofs_.size() / dofs_per_element(); }

  /// Global dofs of the element at active position `a`, in local order.
  std::span<const int> element_dofs(std::size_t a) const noexcept;
  const Cell& element(std::size_t a) const noexcept { return cells_[a]; }
  const LocalBasis& basis(std::size_t a) const noexcept { return bases_[a]; }
  const Vec2& dof_coordinate(std::size_t dof) const noexcept { return dof_coordinates_[dof]; }

  /// Global grid node index of a dof (row-major over the dof grid).
  std::size_t dof_node(std::size_t dof) const noexcept { return dof_nodes_[dof]; }
  int nodes_per_side() const noexcept { return order() * mesh_.cells_per_side() + 1; }

  /// Coefficient vector of the nodal interpolant of `f`.
  Eigen::VectorXd interpolate(const std::function<double(const Vec2&)>& f) const;

 private:
  BackgroundMesh mesh_;
  std::vector<int> element_dofs_;
  std::vector<Cell> cells_;
  std::vector<LocalBasis> bases_;
  std::vector<Vec2> dof_coordinates_;
  std::vector<std::size_t> dof_nodes_;
};

struct BoundaryDofCounts {
  std::size_t M = 0;  // dim of the trace space on the boundary part
  std::size_t N = 0;  // basis functions with non-zero trace on it
};

/// M = rank of the boundary Gram matrix ∫ φᵢφⱼ ds over the N dofs whose trace
/// is not identically zero. The Gram is scaled to unit diagonal and the rank
/// counts eigenvalues above 1e-10 of the largest. `part` restricts the
/// boundary to one condition type.
///
/// The surface rules must integrate products of traces exactly, or the rank
/// is capped by the number of points per segment.
BoundaryDofCounts boundary_dof_counts(const FeSpace& space, const QuadratureSet& quadrature,
                                      std::optional<BcType> part = std::nullopt);
/// Same, with surface rules of degree 4k built from the cut geometry.
BoundaryDofCounts boundary_dof_counts(const FeSpace& space, const ActiveMesh& active,
                                      std::optional<BcType> part = std::nullopt);

}  // namespace unfitted
