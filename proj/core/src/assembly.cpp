#include "unfitted/assembly.hpp"

#include <cmath>

#include "unfitted/errors.hpp"

namespace unfitted {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& triplets, std::span<const int> dofs, const LocalMatrix& local) {
  for (Eigen::Index i = 0; i < local.rows(); ++i) {
    for (Eigen::Index j = 0; j < local.cols(); ++j) {
      if (local(i, j) != 0.0) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
}

SparseMatrix to_matrix(const Triplets& triplets, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  SparseMatrix m(size, size);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

bool has_dirichlet(const SurfaceRule& surface) {
  for (auto bc : surface.bc) {
    if (bc == BcType::Dirichlet) return true;
  }
  return false;
}

void check_variant(const StabilizationField& stab, const FormVariant& variant) {
  if (variant.is_hybrid() && stab.cap != variant.cap_value()) {
    throw AssemblyError("stabilization field was capped differently from the hybrid variant");
  }
}

}  // namespace

BoundaryTreatment boundary_treatment(const StabilizationField& stab, const FormVariant& variant,
                                     std::size_t a, bool has_dirichlet_points) {
  if (!has_dirichlet_points) return {};
  if (a >= stab.entries.size() || !stab.entries[a]) {
    throw AssemblyError("missing stabilization parameter on Dirichlet-cut element at active position " +
                        std::to_string(a));
  }
  const auto& e = *stab.entries[a];
  if (e.mode == StabMode::CappedPenalty) {
    if (!variant.is_hybrid()) {
      throw AssemblyError("capped element in a symmetric Nitsche assembly");
    }
    return {true, false, e.lambda};
  }
  return {true, true, e.lambda};
}

LinearSystem assemble(const FeSpace& space, const QuadratureSet& quadrature,
                      const StabilizationField& stab, const ManufacturedSolution& sol,
                      const FormVariant& variant) {
  check_variant(stab, variant);
  const std::size_t n = space.n_dofs();
  const int per = space.dofs_per_element();
  Triplets triplets;
  triplets.reserve(space.n_elements() * per * per * 2);
  LinearSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<double> support(n, 0.0);

  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto dofs = space.element_dofs(a);
    const auto& basis = space.basis(a);
    const auto& rules = quadrature.rules[a];
    LocalMatrix k_loc = LocalMatrix::Zero(per, per);
    LocalVector b_loc = LocalVector::Zero(per);

    for (std::size_t q = 0; q < rules.volume.size(); ++q) {
      const Vec2& x = rules.volume.points[q];
      const double w = rules.volume.weights[q];
      const auto s = basis.eval(x);
      k_loc.noalias() += w * s.gradients * s.gradients.transpose();
      b_loc.noalias() += w * sol.f(x) * s.values;
    }
    const double measure = rules.volume.measure();
    for (int d : dofs) support[static_cast<std::size_t>(d)] += measure;

    const auto treat = boundary_treatment(stab, variant, a, has_dirichlet(rules.surface));
    for (std::size_t q = 0; q < rules.surface.size(); ++q) {
      const Vec2& x = rules.surface.points[q];
      const Vec2& normal = rules.surface.normals[q];
      const double w = rules.surface.weights[q];
      const auto s = basis.eval(x);
      const auto data = boundary_data(sol, x, normal, rules.surface.bc[q]);
      if (data.bc == BcType::Neumann) {
        b_loc.noalias() += w * data.value * s.values;
        continue;
      }
      const LocalVector dn = s.gradients * normal;
      if (treat.nitsche) {
        k_loc.noalias() -= w * (s.values * dn.transpose() + dn * s.values.transpose());
        b_loc.noalias() -= w * data.value * dn;
      }
      k_loc.noalias() += w * treat.lambda * s.values * s.values.transpose();
      b_loc.noalias() += w * treat.lambda * data.value * s.values;
    }
    scatter(triplets, dofs, k_loc);
    for (int i = 0; i < per; ++i) sys.rhs(dofs[i]) += b_loc(i);
  }

  std::vector<bool> pinned(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (support[i] < kPinTolerance) {
      pinned[i] = true;
      sys.pinned.push_back(static_cast<int>(i));
    }
  }
  if (!sys.pinned.empty()) {
    Triplets kept;
    kept.reserve(triplets.size());
    for (const auto& t : triplets) {
      if (!pinned[static_cast<std::size_t>(t.row())] && !pinned[static_cast<std::size_t>(t.col())]) {
        kept.push_back(t);
      }
    }
    for (int p : sys.pinned) {
      kept.emplace_back(p, p, 1.0);
      sys.rhs(p) = 0.0;
    }
    triplets.swap(kept);
  }
  sys.matrix = to_matrix(triplets, n);
  return sys;
}

SparseMatrix assemble_energy_gram(const FeSpace& space, const QuadratureSet& quadrature,
                                  const StabilizationField& stab, const FormVariant& variant) {
  check_variant(stab, variant);
  const int per = space.dofs_per_element();
  Triplets triplets;
  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto& basis = space.basis(a);
    const auto& rules = quadrature.rules[a];
    LocalMatrix e_loc = LocalMatrix::Zero(per, per);
    for (std::size_t q = 0; q < rules.volume.size(); ++q) {
      const auto s = basis.eval(rules.volume.points[q]);
      e_loc.noalias() += rules.volume.weights[q] * s.gradients * s.gradients.transpose();
    }
    const auto treat = boundary_treatment(stab, variant, a, has_dirichlet(rules.surface));
    for (std::size_t q = 0; q < rules.surface.size(); ++q) {
      if (rules.surface.bc[q] != BcType::Dirichlet) continue;
      const double w = rules.surface.weights[q];
      const auto s = basis.eval(rules.surface.points[q]);
      if (treat.nitsche) {
        const LocalVector dn = s.gradients * rules.surface.normals[q];
        e_loc.noalias() += (w / treat.lambda) * dn * dn.transpose();
      }
      e_loc.noalias() += w * treat.lambda * s.values * s.values.transpose();
    }
    scatter(triplets, space.element_dofs(a), e_loc);
  }
  return to_matrix(triplets, space.n_dofs());
}

SparseMatrix assemble_h1_gram(const FeSpace& space, const QuadratureSet& quadrature) {
  const int per = space.dofs_per_element();
  Triplets triplets;
  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto& basis = space.basis(a);
    const auto& volume = quadrature.rules[a].volume;
    LocalMatrix g_loc = LocalMatrix::Zero(per, per);
    for (std::size_t q = 0; q < volume.size(); ++q) {
      const auto s = basis.eval(volume.points[q]);
      g_loc.noalias() += volume.weights[q] *
                         (s.gradients * s.gradients.transpose() + s.values * s.values.transpose());
    }
    scatter(triplets, space.element_dofs(a), g_loc);
  }
  return to_matrix(triplets, space.n_dofs());
}

Eigen::VectorXd energy_functional(const FeSpace& space, const QuadratureSet& quadrature,
                                  const StabilizationField& stab, const FormVariant& variant,
                                  const ManufacturedSolution& sol) {
  check_variant(stab, variant);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_dofs()));
  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto dofs = space.element_dofs(a);
    const auto& basis = space.basis(a);
    const auto& rules = quadrature.rules[a];
    LocalVector r_loc = LocalVector::Zero(space.dofs_per_element());
    for (std::size_t q = 0; q < rules.volume.size(); ++q) {
      const Vec2& x = rules.volume.points[q];
      const auto s = basis.eval(x);
      r_loc.noalias() += rules.volume.weights[q] * (s.gradients * sol.grad_u(x));
    }
    const auto treat = boundary_treatment(stab, variant, a, has_dirichlet(rules.surface));
    for (std::size_t q = 0; q < rules.surface.size(); ++q) {
      if (rules.surface.bc[q] != BcType::Dirichlet) continue;
      const Vec2& x = rules.surface.points[q];
      const Vec2& normal = rules.surface.normals[q];
      const double w = rules.surface.weights[q];
      const auto s = basis.eval(x);
      if (treat.nitsche) {
        const LocalVector dn = s.gradients * normal;
        r_loc.noalias() += (w / treat.lambda) * sol.grad_u(x).dot(normal) * dn;
      }
      r_loc.noalias() += w * treat.lambda * sol.u(x) * s.values;
    }
    for (int i = 0; i < r_loc.size(); ++i) r(dofs[i]) += r_loc(i);
  }
  return r;
}

}  // namespace unfitted
