#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "unfitted/solve.hpp"

namespace unfitted {

/// Systems up to this many unknowns use dense generalized eigensolvers;
/// larger ones use block subspace iteration with sparse factorizations.
inline constexpr std::size_t kDenseDiagnosticsLimit = 1500;

/// Extremal eigenvalues of the pencil A x = ρ B x on the range of B.
///
/// B is symmetric positive semidefinite. Directions where B has eigenvalue
/// below rel_tol · ‖B‖ are dropped. Only indices in `keep` take part (all when
/// empty).
struct PencilExtremes {
  double min = 0.0;
  double max = 0.0;
};

PencilExtremes pencil_extremes(const SparseMatrix& a, const SparseMatrix& b,
                               const std::vector<int>& keep = {}, double rel_tol = 1e-13);

/// Indices with a positive diagonal in `gram` and not listed in `pinned`.
std::vector<int> supported_dofs(const SparseMatrix& gram, const std::vector<int>& pinned = {});

struct CoercivityScan {
  double sampled_min = 0.0;  // over random coefficient vectors
  double exact_min = 0.0;    // smallest generalized eigenvalue of (A, E)
};

CoercivityScan coercivity_scan(const LinearSystem& system, const SparseMatrix& energy,
                               std::size_t n_samples, std::uint64_t seed = 20240611);

struct ContinuityScan {
  double sampled_max = 0.0;  // max a(u,v) / (|||u||| |||v|||) over random pairs
  double exact_max = 0.0;    // largest |ρ| of (A, E)
};

ContinuityScan continuity_scan(const LinearSystem& system, const SparseMatrix& energy,
                               std::size_t n_pairs, std::uint64_t seed = 20240612);

/// a(u, v) / (|||u||| |||v|||) for one pair of coefficient vectors.
double continuity_ratio(const SparseMatrix& a, const SparseMatrix& energy,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Best approximation of u in the energy norm: E x = r on the supported dofs,
/// remaining coefficients zero.
DiscreteSolution energy_projection(const FeSpace& space, const QuadratureSet& quadrature,
                                   const StabilizationField& stab, const FormVariant& variant,
                                   const ManufacturedSolution& sol);

struct EquivConstants {
  double c_est = 0.0;
  double C_est = 0.0;
};

/// Square roots of the extremal eigenvalues of (E, H¹ Gram) over V_h.
EquivConstants equiv_constants(const SparseMatrix& energy, const SparseMatrix& h1);

}  // namespace unfitted
