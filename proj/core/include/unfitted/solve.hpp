#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "unfitted/assembly.hpp"

namespace unfitted {

/// Coefficients of u_h over the active dofs of `space`.
struct DiscreteSolution {
  const FeSpace* space = nullptr;
  Eigen::VectorXd coefficients;

  double value(std::size_t a, const Vec2& x) const;
  Vec2 gradient(std::size_t a, const Vec2& x) const;
};

/// Direct sparse LU with partial pivoting.
/// Throws SolveError on a singular factorization or if ‖Av − b‖ > 1e-10 ‖b‖.
Eigen::VectorXd solve(const LinearSystem& system);
DiscreteSolution solve(const FeSpace& space, const LinearSystem& system);

inline constexpr double kResidualTolerance = 1e-10;

struct ErrorReport {
  double err_energy = 0.0;
  double err_h1 = 0.0;  // full H¹(Ω) norm
  double err_l2 = 0.0;
  double lambda_max = 0.0;
  std::size_t n_dofs = 0;
  std::size_t M = 0;
  std::size_t N = 0;
};

/// Errors of u_h against the exact solution, integrated pointwise with the
/// given (error) quadrature. The energy norm uses the boundary treatment of
/// `variant`: flux and λ_T terms on Nitsche parts, C_λ on penalty parts.
/// M and N are left at zero.
ErrorReport error_norms(const DiscreteSolution& uh, const ManufacturedSolution& sol,
                        const QuadratureSet& quadrature, const StabilizationField& stab,
                        const FormVariant& variant);

}  // namespace unfitted
