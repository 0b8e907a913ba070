#include "unfitted/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "unfitted/errors.hpp"

namespace unfitted {

namespace {

std::vector<int> all_indices(Eigen::Index n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
  return idx;
}

SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<int>& keep) {
  std::vector<int> position(static_cast<std::size_t>(m.rows()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) position[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      const int r = position[static_cast<std::size_t>(it.row())];
      const int cc = position[static_cast<std::size_t>(it.col())];
      if (r >= 0 && cc >= 0) triplets.emplace_back(r, cc, it.value());
    }
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::VectorXd dense_pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double rel_tol) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_b(b);
  const double largest = eig_b.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> range;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    if (eig_b.eigenvalues()(i) > rel_tol * largest) range.push_back(i);
  }
  if (range.empty()) throw ContractViolation("pencil has an empty range");
  Eigen::MatrixXd w(b.rows(), static_cast<Eigen::Index>(range.size()));
  for (std::size_t c = 0; c < range.size(); ++c) {
    w.col(static_cast<Eigen::Index>(c)) =
        eig_b.eigenvectors().col(range[c]) / std::sqrt(eig_b.eigenvalues()(range[c]));
  }
  const Eigen::MatrixXd reduced = w.transpose() * a * w;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(reduced, Eigen::EigenvaluesOnly).eigenvalues();
}

// Largest eigenvalue of A x = ρ B x for sparse SPD A and B, by block
// subspace iteration on B⁻¹A with Rayleigh-Ritz.
double largest_pencil_eigenvalue(const SparseMatrix& a, const SparseMatrix& b, std::uint64_t seed) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(b);
  if (ldlt.info() != Eigen::Success) throw SolveError("pencil factorization failed", -1);
  const Eigen::Index n = a.rows();
  const Eigen::Index p = std::min<Eigen::Index>(8, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  double theta = 0.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const Eigen::MatrixXd y = ldlt.solve(a * x);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd aq = q.transpose() * (a * q);
    const Eigen::MatrixXd bq = q.transpose() * (b * q);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(aq, bq);
    const double next = ritz.eigenvalues()(p - 1);
    x = q * ritz.eigenvectors();
    x.colwise().normalize();
    if (iter > 2 && std::abs(next - theta) <= 1e-13 * std::abs(next)) return next;
    theta = next;
  }
  return theta;
}

Eigen::VectorXd random_vector(const std::vector<int>& support, Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int i : support) v(i) = normal(rng);
  return v;
}

}  // namespace

std::vector<int> supported_dofs(const SparseMatrix& gram, const std::vector<int>& pinned) {
  std::vector<bool> skip(static_cast<std::size_t>(gram.rows()), false);
  for (int p : pinned) skip[static_cast<std::size_t>(p)] = true;
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    if (!skip[static_cast<std::size_t>(i)] && gram.coeff(i, i) > 0.0) keep.push_back(static_cast<int>(i));
  }
  return keep;
}

PencilExtremes pencil_extremes(const SparseMatrix& a, const SparseMatrix& b, const std::vector<int>& keep,
                               double rel_tol) {
  const std::vector<int> idx = keep.empty() ? all_indices(a.rows()) : keep;
  const SparseMatrix ar = restrict_to(a, idx);
  const SparseMatrix br = restrict_to(b, idx);
  if (idx.size() <= kDenseDiagnosticsLimit) {
    const Eigen::VectorXd rho = dense_pencil_eigenvalues(Eigen::MatrixXd(ar), Eigen::MatrixXd(br), rel_tol);
    return {rho.minCoeff(), rho.maxCoeff()};
  }
  return {1.0 / largest_pencil_eigenvalue(br, ar, 7), largest_pencil_eigenvalue(ar, br, 11)};
}

CoercivityScan coercivity_scan(const LinearSystem& system, const SparseMatrix& energy, std::size_t n_samples,
                               std::uint64_t seed) {
  const auto keep = supported_dofs(energy, system.pinned);
  CoercivityScan scan;
  scan.exact_min = pencil_extremes(system.matrix, energy, keep).min;
  scan.sampled_min = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd v = random_vector(keep, energy.rows(), rng);
    const double e = v.dot(energy * v);
    if (!(e > 0.0)) {
      --s;
      continue;
    }
    scan.sampled_min = std::min(scan.sampled_min, v.dot(system.matrix * v) / e);
  }
  return scan;
}

double continuity_ratio(const SparseMatrix& a, const SparseMatrix& energy, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& v) {
  return u.dot(a * v) / std::sqrt(u.dot(energy * u) * v.dot(energy * v));
}

ContinuityScan continuity_scan(const LinearSystem& system, const SparseMatrix& energy, std::size_t n_pairs,
                               std::uint64_t seed) {
  const auto keep = supported_dofs(energy, system.pinned);
  ContinuityScan scan;
  const auto extremes = pencil_extremes(system.matrix, energy, keep);
  scan.exact_max = std::max(std::abs(extremes.min), std::abs(extremes.max));
  scan.sampled_max = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < n_pairs; ++s) {
    const Eigen::VectorXd u = random_vector(keep, energy.rows(), rng);
    const Eigen::VectorXd v = random_vector(keep, energy.rows(), rng);
    if (!(u.dot(energy * u) > 0.0) || !(v.dot(energy * v) > 0.0)) {
      --s;
      continue;
    }
    scan.sampled_max = std::max(scan.sampled_max, continuity_ratio(system.matrix, energy, u, v));
  }
  return scan;
}

DiscreteSolution energy_projection(const FeSpace& space, const QuadratureSet& quadrature,
                                   const StabilizationField& stab, const FormVariant& variant,
                                   const ManufacturedSolution& sol) {
  const SparseMatrix e = assemble_energy_gram(space, quadrature, stab, variant);
  const Eigen::VectorXd r = energy_functional(space, quadrature, stab, variant, sol);
  const auto keep = supported_dofs(e);
  const SparseMatrix er = restrict_to(e, keep);
  Eigen::VectorXd rr(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) rr(static_cast<Eigen::Index>(i)) = r(keep[i]);

  Eigen::VectorXd xr;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(er);
  if (ldlt.info() == Eigen::Success) xr = ldlt.solve(rr);
  if (ldlt.info() != Eigen::Success || !xr.allFinite()) {
    // singular E: least-squares solution restricted to its range
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(er)};
    const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd coeff = eig.eigenvectors().transpose() * rr;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      const double mu = eig.eigenvalues()(i);
      coeff(i) = mu > 1e-13 * largest ? coeff(i) / mu : 0.0;
    }
    xr = eig.eigenvectors() * coeff;
  }
  DiscreteSolution pi{&space, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_dofs()))};
  for (std::size_t i = 0; i < keep.size(); ++i) pi.coefficients(keep[i]) = xr(static_cast<Eigen::Index>(i));
  return pi;
}

EquivConstants equiv_constants(const SparseMatrix& energy, const SparseMatrix& h1) {
  const auto keep = supported_dofs(h1);
  const auto extremes = pencil_extremes(energy, h1, keep);
  if (!(extremes.min > 0.0)) throw ContractViolation("energy norm is not positive on the discrete space");
  return {std::sqrt(extremes.min), std::sqrt(extremes.max)};
}

}  // namespace unfitted
