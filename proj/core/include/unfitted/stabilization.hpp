#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "unfitted/space.hpp"

namespace unfitted {

enum class StabMode { Nitsche, CappedPenalty };

struct ElementStabilization {
  double raw = 0.0;     // λ_T from the local eigenproblem; +inf if it degenerated
  double lambda = 0.0;  // value used in the forms (raw or the cap)
  StabMode mode = StabMode::Nitsche;
};

/// Penalty parameters of all cut elements carrying Dirichlet boundary.
struct StabilizationField {
  std::vector<std::optional<ElementStabilization>> entries;  // per active position
  std::optional<double> cap;

  double max_lambda() const;
  std::size_t n_capped() const;
};

/// Local matrices of the penalty eigenproblem on one element.
struct LocalEigenproblem {
  Eigen::MatrixXd flux;       // ∫_{T∩Γ_D} ∂ₙφᵢ ∂ₙφⱼ ds
  Eigen::MatrixXd stiffness;  // ∫_{T∩Ω} ∇φᵢ·∇φⱼ dx
  Eigen::MatrixXd mass;       // ∫_T φᵢφⱼ dx over the whole element
};

LocalEigenproblem local_eigenproblem(ElementType type, const Cell& cell,
                                     const VolumeRule& cut_volume,
                                     const SurfaceRule& dirichlet_surface);

/// Columns span {v : ∫_T v dx = 0} and are orthonormal in the T-mass inner
/// product. Requires the constant to be representable (partition of unity).
Eigen::MatrixXd zero_mean_local_basis(const Eigen::MatrixXd& element_mass);

/// λ_T = 2 max μ with flux x = μ stiffness x on the zero-mean local space.
///
/// The stiffness is reduced through its spectral square root. Directions
/// with stiffness eigenvalue below 1e-12 · trace / (N_T - 1) are deflated;
/// if the flux still sees them (above 1e-12 of its trace) the element throws
/// SliverDegenerate carrying `element`.
double lambda_T(const LocalEigenproblem& local, std::size_t element = 0);
double lambda_T(ElementType type, const Cell& cell, const VolumeRule& cut_volume,
                const SurfaceRule& dirichlet_surface);

/// Caps every entry at `cap`: entries with raw λ_T > cap switch to
/// CappedPenalty with lambda = cap. Without a cap the field is returned as is.
StabilizationField apply_cap(StabilizationField field, std::optional<double> cap);

/// λ_T for every cut element with a Dirichlet part, then apply_cap. With a
/// cap, sliver-degenerate elements are capped instead of throwing.
StabilizationField compute_stabilization(const FeSpace& space, const ActiveMesh& active,
                                         const QuadratureSet& quadrature,
                                         std::optional<double> cap = std::nullopt);

}  // namespace unfitted
