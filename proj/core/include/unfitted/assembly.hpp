#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "unfitted/stabilization.hpp"

namespace unfitted {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Symmetric Nitsche everywhere, or the hybrid that switches elements whose
/// λ_T exceeds the cap to a pure penalty C_λ without flux terms.
struct FormVariant {
  enum class Kind { SymmetricNitsche, HybridNitschePenalty };

  Kind kind = Kind::SymmetricNitsche;
  double cap = std::numeric_limits<double>::infinity();

  static FormVariant symmetric_nitsche() { return {}; }
  static FormVariant hybrid(double cap) { return {Kind::HybridNitschePenalty, cap}; }

  bool is_hybrid() const noexcept { return kind == Kind::HybridNitschePenalty; }
  std::optional<double> cap_value() const {
    return is_hybrid() ? std::optional<double>(cap) : std::nullopt;
  }
  std::string name() const { return is_hybrid() ? "hybrid" : "nitsche"; }
};

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> pinned;  // dofs without volume support, fixed to zero
};

/// Dofs whose support inside Ω has measure below this are pinned.
inline constexpr double kPinTolerance = 1e-14;

/// a_h(u, v) = l_h(v) over the active dofs.
///
/// Nitsche elements contribute -∫∂ₙu v - ∫∂ₙv u + λ_T ∫uv on their Dirichlet
/// part and (-∂ₙv + λ_T v) g to the right-hand side; CappedPenalty elements
/// only C_λ ∫uv and C_λ ∫vg. Neumann parts add ∫(∇u·n) v to the rhs.
LinearSystem assemble(const FeSpace& space, const QuadratureSet& quadrature,
                      const StabilizationField& stab, const ManufacturedSolution& sol,
                      const FormVariant& variant);

/// Gram matrix of the mesh-dependent energy norm: vᵀEv = |||v|||².
SparseMatrix assemble_energy_gram(const FeSpace& space, const QuadratureSet& quadrature,
                                  const StabilizationField& stab, const FormVariant& variant);

/// Gram matrix of the full H¹(Ω) norm, mass plus stiffness on Ω.
SparseMatrix assemble_h1_gram(const FeSpace& space, const QuadratureSet& quadrature);

/// rᵢ = ⟨u, φᵢ⟩ in the energy inner product, for the exact solution u.
Eigen::VectorXd energy_functional(const FeSpace& space, const QuadratureSet& quadrature,
                                  const StabilizationField& stab, const FormVariant& variant,
                                  const ManufacturedSolution& sol);

/// Resolved per-element boundary treatment, shared by the assembly routines.
struct BoundaryTreatment {
  bool has_dirichlet = false;
  bool nitsche = true;  // flux terms present
  double lambda = 0.0;
};

BoundaryTreatment boundary_treatment(const StabilizationField& stab, const FormVariant& variant,
                                     std::size_t a, bool has_dirichlet_points);

}  // namespace unfitted
