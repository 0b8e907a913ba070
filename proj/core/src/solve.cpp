#include "unfitted/solve.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "unfitted/errors.hpp"

namespace unfitted {

namespace {

long parse_pivot(const std::string& message) {
  const auto pos = message.find_last_of(' ');
  if (pos == std::string::npos) return -1;
  try {
    return std::stol(message.substr(pos + 1)) - 1;
  } catch (const std::exception&) {
    return -1;
  }
}

}  // namespace

double DiscreteSolution::value(std::size_t a, const Vec2& x) const {
  const auto s = space->basis(a).eval(x);
  const auto dofs = space->element_dofs(a);
  double v = 0.0;
  for (int i = 0; i < s.values.size(); ++i) v += s.values(i) * coefficients(dofs[i]);
  return v;
}

Vec2 DiscreteSolution::gradient(std::size_t a, const Vec2& x) const {
  const auto s = space->basis(a).eval(x);
  const auto dofs = space->element_dofs(a);
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < s.values.size(); ++i) g += coefficients(dofs[i]) * s.gradients.row(i).transpose();
  return g;
}

Eigen::VectorXd solve(const LinearSystem& system) {
  const auto n = system.matrix.rows();
  if (system.matrix.cols() != n || system.rhs.size() != n) {
    throw ContractViolation("solve: matrix and right-hand side sizes differ");
  }
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success) {
    throw SolveError("singular factorization: " + lu.lastErrorMessage(), parse_pivot(lu.lastErrorMessage()));
  }
  Eigen::VectorXd v = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !v.allFinite()) {
    throw SolveError("sparse LU back-substitution failed", -1);
  }
  const double b_norm = system.rhs.norm();
  const double residual = (system.matrix * v - system.rhs).norm();
  if (residual > kResidualTolerance * (b_norm > 0.0 ? b_norm : 1.0)) {
    throw SolveError("relative residual " + std::to_string(residual / b_norm) + " above tolerance", -1);
  }
  return v;
}

DiscreteSolution solve(const FeSpace& space, const LinearSystem& system) {
  return {&space, solve(system)};
}

ErrorReport error_norms(const DiscreteSolution& uh, const ManufacturedSolution& sol,
                        const QuadratureSet& quadrature, const StabilizationField& stab,
                        const FormVariant& variant) {
  const FeSpace& space = *uh.space;
  double grad2 = 0.0;
  double l2 = 0.0;
  double boundary2 = 0.0;
  for (std::size_t a = 0; a < space.n_elements(); ++a) {
    const auto& rules = quadrature.rules[a];
    for (std::size_t q = 0; q < rules.volume.size(); ++q) {
      const Vec2& x = rules.volume.points[q];
      const double w = rules.volume.weights[q];
      const double e = sol.u(x) - uh.value(a, x);
      grad2 += w * (sol.grad_u(x) - uh.gradient(a, x)).squaredNorm();
      l2 += w * e * e;
    }
    bool dirichlet = false;
    for (auto bc : rules.surface.bc) dirichlet = dirichlet || bc == BcType::Dirichlet;
    if (!dirichlet) continue;
    const auto treat = boundary_treatment(stab, variant, a, true);
    for (std::size_t q = 0; q < rules.surface.size(); ++q) {
      if (rules.surface.bc[q] != BcType::Dirichlet) continue;
      const Vec2& x = rules.surface.points[q];
      const double w = rules.surface.weights[q];
      const double e = sol.u(x) - uh.value(a, x);
      boundary2 += w * treat.lambda * e * e;
      if (treat.nitsche) {
        const double dn = (sol.grad_u(x) - uh.gradient(a, x)).dot(rules.surface.normals[q]);
        boundary2 += w * dn * dn / treat.lambda;
      }
    }
  }
  ErrorReport report;
  report.err_energy = std::sqrt(grad2 + boundary2);
  report.err_h1 = std::sqrt(grad2 + l2);
  report.err_l2 = std::sqrt(l2);
  report.lambda_max = stab.max_lambda();
  report.n_dofs = space.n_dofs();
  return report;
}

}  // namespace unfitted
