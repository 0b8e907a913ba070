#include "unfitted/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "unfitted/errors.hpp"

namespace unfitted {

double StabilizationField::max_lambda() const {
  double m = 0.0;
  for (const auto& e : entries) {
    if (e) m = std::max(m, e->lambda);
  }
  return m;
}

std::size_t StabilizationField::n_capped() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) {
    return e && e->mode == StabMode::CappedPenalty;
  }));
}

LocalEigenproblem local_eigenproblem(ElementType type, const Cell& cell,
                                     const VolumeRule& cut_volume,
                                     const SurfaceRule& dirichlet_surface) {
  const LocalBasis basis(type, cell);
  const int n = basis.size();
  LocalEigenproblem local;
  local.flux = Eigen::MatrixXd::Zero(n, n);
  local.stiffness = Eigen::MatrixXd::Zero(n, n);
  local.mass = Eigen::MatrixXd::Zero(n, n);

  for (std::size_t q = 0; q < dirichlet_surface.size(); ++q) {
    const auto s = basis.eval(dirichlet_surface.points[q]);
    const LocalVector dn = s.gradients * dirichlet_surface.normals[q];
    local.flux.noalias() += dirichlet_surface.weights[q] * dn * dn.transpose();
  }
  for (std::size_t q = 0; q < cut_volume.size(); ++q) {
    const auto s = basis.eval(cut_volume.points[q]);
    local.stiffness.noalias() += cut_volume.weights[q] * s.gradients * s.gradients.transpose();
  }
  // biquadratic products have degree 4 per direction
  const VolumeRule full = element_rule(cell, 4);
  for (std::size_t q = 0; q < full.size(); ++q) {
    const auto s = basis.eval(full.points[q]);
    local.mass.noalias() += full.weights[q] * s.values * s.values.transpose();
  }
  return local;
}

Eigen::MatrixXd zero_mean_local_basis(const Eigen::MatrixXd& element_mass) {
  const Eigen::Index n = element_mass.rows();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(element_mass);
  const Eigen::VectorXd sqrt_vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root = eig.eigenvectors() * sqrt_vals.asDiagonal() *
                               eig.eigenvectors().transpose();
  const Eigen::MatrixXd inv_root = eig.eigenvectors() * sqrt_vals.cwiseInverse().asDiagonal() *
                                   eig.eigenvectors().transpose();
  // M^{1/2} 1 is the image of the constant; complete it to an orthonormal
  // basis and map the complement back with M^{-1/2}.
  Eigen::MatrixXd q0(n, 1);
  q0.col(0) = root * Eigen::VectorXd::Ones(n);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(q0);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return inv_root * q.rightCols(n - 1);
}

double lambda_T(const LocalEigenproblem& local, std::size_t element) {
  const Eigen::MatrixXd z = zero_mean_local_basis(local.mass);
  const Eigen::MatrixXd a = z.transpose() * local.flux * z;
  const Eigen::MatrixXd b = z.transpose() * local.stiffness * z;
  const Eigen::Index m = b.rows();
  const double trace_a = a.trace();
  const double trace_b = b.trace();
  if (!(trace_a > 0.0)) {
    throw ContractViolation("lambda_T needs a non-empty Dirichlet boundary part");
  }
  if (!(trace_b > 0.0)) throw SliverDegenerate(element);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_b(b);
  const double threshold = 1e-12 * trace_b / static_cast<double>(m);
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> deflated;
  for (Eigen::Index i = 0; i < m; ++i) {
    (eig_b.eigenvalues()(i) > threshold ? kept : deflated).push_back(i);
  }
  if (!deflated.empty()) {
    Eigen::MatrixXd vd(m, static_cast<Eigen::Index>(deflated.size()));
    for (std::size_t c = 0; c < deflated.size(); ++c) {
      vd.col(static_cast<Eigen::Index>(c)) = eig_b.eigenvectors().col(deflated[c]);
    }
    const Eigen::MatrixXd a_kernel = vd.transpose() * a * vd;
    const double seen = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a_kernel, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .cwiseAbs()
                            .maxCoeff();
    if (seen > 1e-12 * trace_a) throw SliverDegenerate(element);
  }
  Eigen::MatrixXd w(m, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Eigen::Index i = kept[c];
    w.col(static_cast<Eigen::Index>(c)) = eig_b.eigenvectors().col(i) / std::sqrt(eig_b.eigenvalues()(i));
  }
  const Eigen::MatrixXd reduced = w.transpose() * a * w;
  const double mu_max =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(reduced, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  return 2.0 * mu_max;
}

double lambda_T(ElementType type, const Cell& cell, const VolumeRule& cut_volume,
                const SurfaceRule& dirichlet_surface) {
  return lambda_T(local_eigenproblem(type, cell, cut_volume, dirichlet_surface), cell.id);
}

StabilizationField apply_cap(StabilizationField field, std::optional<double> cap) {
  if (cap && !(*cap > 0.0)) throw ConfigError("penalty cap must be positive");
  field.cap = cap;
  for (auto& e : field.entries) {
    if (!e) continue;
    if (cap && e->raw > *cap) {
      e->mode = StabMode::CappedPenalty;
      e->lambda = *cap;
    } else {
      e->mode = StabMode::Nitsche;
      e->lambda = e->raw;
    }
  }
  return field;
}

StabilizationField compute_stabilization(const FeSpace& space, const ActiveMesh& active,
                                         const QuadratureSet& quadrature,
                                         std::optional<double> cap) {
  StabilizationField field;
  field.entries.resize(active.size());
  for (std::size_t a = 0; a < active.size(); ++a) {
    if (!active.is_cut(a) || !active.cut[a]->has_boundary(BcType::Dirichlet)) continue;
    const auto& rules = quadrature.rules[a];
    const SurfaceRule dirichlet = rules.surface.restricted(BcType::Dirichlet);
    ElementStabilization entry;
    try {
      entry.raw = lambda_T(space.mesh().element_type(), space.element(a), rules.volume, dirichlet);
    } catch (const SliverDegenerate&) {
      if (!cap) throw;
      entry.raw = std::numeric_limits<double>::infinity();
    }
    entry.lambda = entry.raw;
    field.entries[a] = entry;
  }
  return apply_cap(std::move(field), cap);
}

}  // namespace unfitted
