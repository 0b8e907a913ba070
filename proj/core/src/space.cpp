#include "unfitted/space.hpp"

#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "unfitted/errors.hpp"

namespace unfitted {

namespace {

struct Lagrange1D {
  std::array<double, 3> value{};
  std::array<double, 3> derivative{};
};

Lagrange1D lagrange_1d(int order, double t) {
  Lagrange1D l;
  if (order == 1) {
    l.value = {1.0 - t, t, 0.0};
    l.derivative = {-1.0, 1.0, 0.0};
  } else {
    l.value = {2.0 * (t - 0.5) * (t - 1.0), -4.0 * t * (t - 1.0), 2.0 * t * (t - 0.5)};
    l.derivative = {4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0};
  }
  return l;
}

}  // namespace

ShapeValues shape_eval(ElementType type, const Vec2& ref) {
  ShapeValues s;
  const int n = dofs_per_element(type);
  s.values.resize(n);
  s.gradients.resize(n, 2);
  if (type == ElementType::TriP1) {
    s.values << 1.0 - ref.x() - ref.y(), ref.x(), ref.y();
    s.gradients << -1.0, -1.0, 1.0, 0.0, 0.0, 1.0;
    return s;
  }
  const int k = polynomial_order(type);
  const auto lx = lagrange_1d(k, ref.x());
  const auto ly = lagrange_1d(k, ref.y());
  for (int b = 0; b <= k; ++b) {
    for (int a = 0; a <= k; ++a) {
      const int i = a + (k + 1) * b;
      s.values(i) = lx.value[a] * ly.value[b];
      s.gradients(i, 0) = lx.derivative[a] * ly.value[b];
      s.gradients(i, 1) = lx.value[a] * ly.derivative[b];
    }
  }
  return s;
}

LocalBasis::LocalBasis(ElementType type, const Cell& cell) : type_(type), origin_(cell.vertices[0]) {
  Eigen::Matrix2d jac;
  if (type == ElementType::TriP1) {
    if (cell.shape != CellShape::Triangle) throw ContractViolation("P1 basis needs a triangle");
    jac.col(0) = cell.vertices[1] - cell.vertices[0];
    jac.col(1) = cell.vertices[2] - cell.vertices[0];
  } else {
    if (cell.shape != CellShape::Quad) throw ContractViolation("Q1/Q2 basis needs a quad");
    const Vec2 d = cell.vertices[2] - cell.vertices[0];
    jac << d.x(), 0.0, 0.0, d.y();
  }
  inverse_jacobian_ = jac.inverse();
}

ShapeValues LocalBasis::eval(const Vec2& x) const {
  ShapeValues s = shape_eval(type_, inverse_jacobian_ * (x - origin_));
  s.gradients = (s.gradients * inverse_jacobian_).eval();
  return s;
}

FeSpace::FeSpace(const BackgroundMesh& mesh, const ActiveMesh& active) : mesh_(mesh) {
  const int k = order();
  const int side = nodes_per_side();
  const int per = dofs_per_element();
  std::vector<std::size_t> nodes;
  nodes.reserve(active.size() * per);
  cells_.reserve(active.size());
  bases_.reserve(active.size());
  const double node_spacing = mesh.h() / k;
  for (std::size_t e : active.elements) {
    const Cell cell = mesh.element(e);
    cells_.push_back(cell);
    bases_.emplace_back(mesh.element_type(), cell);
    if (mesh.element_type() == ElementType::TriP1) {
      for (int v = 0; v < 3; ++v) {
        const auto ix = std::lround((cell.vertices[v].x() - mesh.origin()) / node_spacing);
        const auto iy = std::lround((cell.vertices[v].y() - mesh.origin()) / node_spacing);
        nodes.push_back(static_cast<std::size_t>(ix + side * iy));
      }
    } else {
      const auto [i, j] = mesh.cell_index(e);
      for (int b = 0; b <= k; ++b) {
        for (int a = 0; a <= k; ++a) {
          nodes.push_back(static_cast<std::size_t>((k * i + a) + side * (k * j + b)));
        }
      }
    }
  }
  std::vector<int> node_to_dof(static_cast<std::size_t>(side) * side, -1);
  for (auto n : nodes) node_to_dof[n] = 0;
  int next = 0;
  for (std::size_t n = 0; n < node_to_dof.size(); ++n) {
    if (node_to_dof[n] < 0) continue;
    node_to_dof[n] = next++;
    dof_nodes_.push_back(n);
    const auto ix = static_cast<double>(n % side);
    const auto iy = static_cast<double>(n / side);
    dof_coordinates_.emplace_back(mesh.origin() + ix * node_spacing,
                                  mesh.origin() + iy * node_spacing);
  }
  element_dofs_.reserve(nodes.size());
  for (auto n : nodes) element_dofs_.push_back(node_to_dof[n]);
}

std::span<const int> FeSpace::element_dofs(std::size_t a) const noexcept {
  const auto per = static_cast<std::size_t>(dofs_per_element());
  return {element_dofs_.data() + a * per, per};
}

Eigen::VectorXd FeSpace::interpolate(const std::function<double(const Vec2&)>& f) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n_dofs()));
  for (std::size_t i = 0; i < n_dofs(); ++i) v(static_cast<Eigen::Index>(i)) = f(dof_coordinates_[i]);
  return v;
}

namespace {

BoundaryDofCounts count_on(const FeSpace& space, const std::vector<const SurfaceRule*>& surfaces,
                           std::optional<BcType> part) {
  const double trace_tol = 1e-12 * space.mesh().h();
  std::map<int, int> local_index;  // global dof -> row of the Gram matrix
  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto& surface = *surfaces[a];
    const auto dofs = space.element_dofs(a);
    for (std::size_t q = 0; q < surface.size(); ++q) {
      if (part && surface.bc[q] != *part) continue;
      const auto s = space.basis(a).eval(surface.points[q]);
      for (int i = 0; i < s.values.size(); ++i) {
        if (std::abs(s.values(i)) > trace_tol) local_index.emplace(dofs[i], 0);
      }
    }
  }
  BoundaryDofCounts counts;
  counts.N = local_index.size();
  if (counts.N == 0) return counts;
  int row = 0;
  for (auto& [dof, idx] : local_index) idx = row++;

  const auto n = static_cast<Eigen::Index>(counts.N);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto& surface = *surfaces[a];
    const auto dofs = space.element_dofs(a);
    for (std::size_t q = 0; q < surface.size(); ++q) {
      if (part && surface.bc[q] != *part) continue;
      const auto s = space.basis(a).eval(surface.points[q]);
      for (int i = 0; i < s.values.size(); ++i) {
        const auto it = local_index.find(dofs[i]);
        if (it == local_index.end()) continue;
        for (int j = 0; j < s.values.size(); ++j) {
          const auto jt = local_index.find(dofs[j]);
          if (jt == local_index.end()) continue;
          gram(it->second, jt->second) += surface.weights[q] * s.values(i) * s.values(j);
        }
      }
    }
  }
  // unit diagonal, so that traces of size ~ε count like any other
  const Eigen::VectorXd scale = gram.diagonal().cwiseSqrt().cwiseInverse();
  gram = scale.asDiagonal() * gram * scale.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.eigenvalues()(i) > 1e-10 * largest) ++counts.M;
  }
  return counts;
}

}  // namespace

BoundaryDofCounts boundary_dof_counts(const FeSpace& space, const QuadratureSet& quadrature,
                                      std::optional<BcType> part) {
  std::vector<const SurfaceRule*> surfaces;
  for (const auto& r : quadrature.rules) surfaces.push_back(&r.surface);
  return count_on(space, surfaces, part);
}

BoundaryDofCounts boundary_dof_counts(const FeSpace& space, const ActiveMesh& active,
                                      std::optional<BcType> part) {
  // traces of Q_k on a slanted line are polynomials of degree 2k
  const int degree = 4 * space.order();
  std::vector<SurfaceRule> rules(active.size());
  std::vector<const SurfaceRule*> surfaces;
  for (std::size_t a = 0; a < active.size(); ++a) {
    if (active.is_cut(a)) rules[a] = surface_rule(*active.cut[a], degree);
    surfaces.push_back(&rules[a]);
  }
  return count_on(space, surfaces, part);
}

}  // namespace unfitted
