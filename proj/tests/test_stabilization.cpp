#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "cut_configs.hpp"
#include "oracles.hpp"
#include "unfitted/errors.hpp"
#include "unfitted/experiment.hpp"

using namespace unfitted;

namespace {

Eigen::MatrixXd element_mass(ElementType type, const Cell& cell) {
  const LocalBasis basis(type, cell);
  const VolumeRule r = element_rule(cell, 4);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t q = 0; q < r.size(); ++q) {
    const auto s = basis.eval(r.points[q]);
    m += r.weights[q] * Eigen::VectorXd(s.values) * Eigen::VectorXd(s.values).transpose();
  }
  return m;
}

// Fitted element: the right edge of a square (or the hypotenuse-free leg of a
// triangle) lies on the boundary, the whole element is inside.
cutcfg::Config fitted(ElementType type, double h) {
  cutcfg::Config c{type, cutcfg::reference_cell(type, Vec2(0, 0), h), {}, {}};
  c.volume = element_rule(c.cell, 5);
  const auto g = gauss_legendre(3);
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    c.surface.points.emplace_back(type == ElementType::TriP1 ? 0.0 : h, g.points[i] * h);
    c.surface.weights.push_back(g.weights[i] * h);
    c.surface.normals.emplace_back(type == ElementType::TriP1 ? -1.0 : 1.0, 0.0);
    c.surface.bc.push_back(BcType::Dirichlet);
  }
  return c;
}

}  // namespace

TEST(ZeroMeanBasis, DimensionsAndOrthonormality) {
  for (auto type : {ElementType::TriP1, ElementType::QuadQ1, ElementType::QuadQ2}) {
    const Cell cell = cutcfg::reference_cell(type, Vec2(0.1, 0.2), 0.125);
    const Eigen::MatrixXd mass = element_mass(type, cell);
    const Eigen::MatrixXd z = zero_mean_local_basis(mass);
    const int n = dofs_per_element(type);
    ASSERT_EQ(z.rows(), n);
    ASSERT_EQ(z.cols(), n - 1);
    // ∫_T v = 1ᵀ M z for the nodal basis (partition of unity)
    const Eigen::RowVectorXd means = Eigen::RowVectorXd::Ones(n) * mass * z;
    EXPECT_LT(means.cwiseAbs().maxCoeff(), 1e-13);
    const Eigen::MatrixXd gram = z.transpose() * mass * z;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LocalEigenproblem, MatricesMatchDirectAssembly) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto c = cutcfg::random_config(rng);
    const auto local = local_eigenproblem(c.type, c.cell, c.volume, c.surface);
    const auto direct = cutcfg::local_matrices(c);
    EXPECT_LT((local.flux - direct.flux).cwiseAbs().maxCoeff(), 1e-12 * direct.flux.cwiseAbs().maxCoeff());
    EXPECT_LT((local.stiffness - direct.stiffness).cwiseAbs().maxCoeff(),
              1e-12 * direct.stiffness.cwiseAbs().maxCoeff());
    EXPECT_LT((local.mass - element_mass(c.type, c.cell)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(LambdaT, FittedTriangleAgainstDenseOracle) {
  const auto c = fitted(ElementType::TriP1, 1.0 / 16);
  const auto m = cutcfg::local_matrices(c);
  EXPECT_NEAR(cutcfg::lambda(c), 2 * oracle::quotient_max_eigenvalue(m.flux, m.stiffness),
              1e-8 * cutcfg::lambda(c));
}

TEST(LambdaT, RandomCutsAgainstDenseOracleAndRayleighSampling) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 50; ++i) {
    const auto c = cutcfg::random_config(rng);
    const double lam = cutcfg::lambda(c);
    EXPECT_GT(lam, 0.0);
    const auto m = cutcfg::local_matrices(c);
    const double oracle_mu = oracle::quotient_max_eigenvalue(m.flux, m.stiffness);
    EXPECT_NEAR(lam, 2 * oracle_mu, 1e-8 * lam) << "config " << i;

    // no sampled Rayleigh quotient exceeds μ_max = λ/2
    const Eigen::Index n = m.flux.rows();
    double best = 0.0;
    for (int s = 0; s < 10000; ++s) {
      Eigen::VectorXd v(n);
      for (Eigen::Index k = 0; k < n; ++k) v(k) = normal(rng);
      best = std::max(best, v.dot(m.flux * v) / v.dot(m.stiffness * v));
    }
    EXPECT_LE(best, 0.5 * lam * (1 + 1e-10));
    EXPECT_GT(best, 0.0);
  }
}

TEST(LambdaT, TranslationAndScalingInvariance) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const auto c = cutcfg::random_config(rng);
    const double lam = cutcfg::lambda(c);
    EXPECT_NEAR(cutcfg::lambda(cutcfg::translated(c, Vec2(0.375, -0.625))), lam, 1e-10 * lam);
    for (double s : {0.5, 2.0}) EXPECT_NEAR(cutcfg::lambda(cutcfg::scaled(c, s)), lam / s, 1e-8 * lam / s);
  }
}

TEST(LambdaT, FittedElementsScaleLikeOneOverH) {
  for (auto type : {ElementType::TriP1, ElementType::QuadQ1, ElementType::QuadQ2}) {
    const double ref = cutcfg::lambda(fitted(type, 1.0 / 8)) / 8;
    for (int K : {16, 32}) {
      const double lam_h = cutcfg::lambda(fitted(type, 1.0 / K)) / K;
      EXPECT_GT(lam_h, 0.5 * ref);
      EXPECT_LT(lam_h, 2.0 * ref);
    }
  }
}

TEST(LambdaT, SliverCellDoublesWhenWidthHalves) {
  const double h = 1.0 / 16;
  const Cell cell = Cell::square(Vec2(1, 0), h);
  double previous = 0.0;
  for (int j = 4; j <= 20; ++j) {
    const double eps = std::ldexp(h, -j);
    const ImplicitDomain d(DomainKind::OverlapSquare, eps);
    const CutGeometry g = tessellate(cell, d, 2);
    const double lam = lambda_T(ElementType::QuadQ1, cell, volume_rule(g, 3), surface_rule(g, 3));
    if (previous > 0.0 && j >= 8) EXPECT_NEAR(lam / previous, 2.0, 0.01) << j;
    previous = lam;
  }
}

TEST(LambdaT, EmptyFluxIsAContractViolation) {
  const Cell cell = Cell::square(Vec2(0, 0), 0.125);
  EXPECT_THROW(lambda_T(ElementType::QuadQ1, cell, element_rule(cell, 3), SurfaceRule{}), ContractViolation);
}

TEST(LambdaT, NoVolumeIsSliverDegenerate) {
  const auto c = fitted(ElementType::QuadQ1, 0.125);
  const auto local = local_eigenproblem(c.type, c.cell, VolumeRule{}, c.surface);
  EXPECT_THROW(lambda_T(local, 42), SliverDegenerate);
  try {
    lambda_T(local, 42);
  } catch (const SliverDegenerate& e) {
    EXPECT_EQ(e.element(), 42u);
  }
}

TEST(ApplyCap, ModesAndValues) {
  StabilizationField f;
  f.entries = {ElementStabilization{100.0, 100.0, StabMode::Nitsche}, std::nullopt,
               ElementStabilization{1e6, 1e6, StabMode::Nitsche},
               ElementStabilization{std::numeric_limits<double>::infinity(), 0.0, StabMode::Nitsche}};
  const auto capped = apply_cap(f, 16000.0);
  EXPECT_EQ(capped.entries[0]->mode, StabMode::Nitsche);
  EXPECT_DOUBLE_EQ(capped.entries[0]->lambda, 100.0);
  EXPECT_FALSE(capped.entries[1]);
  EXPECT_EQ(capped.entries[2]->mode, StabMode::CappedPenalty);
  EXPECT_DOUBLE_EQ(capped.entries[2]->lambda, 16000.0);
  EXPECT_DOUBLE_EQ(capped.entries[2]->raw, 1e6);
  EXPECT_EQ(capped.entries[3]->mode, StabMode::CappedPenalty);
  EXPECT_EQ(capped.n_capped(), 2u);
  EXPECT_DOUBLE_EQ(capped.max_lambda(), 16000.0);

  const auto same = apply_cap(f, std::nullopt);
  EXPECT_EQ(same.n_capped(), 0u);
  EXPECT_DOUBLE_EQ(same.entries[2]->lambda, 1e6);
  EXPECT_THROW(apply_cap(f, 0.0), ConfigError);
}

TEST(ComputeStabilization, CoversExactlyTheDirichletCutElements) {
  const Discretization d(ElementType::QuadQ1, 8, DomainKind::MixedSquare, 1.0 / 32);
  const auto stab = compute_stabilization(d.space, d.active, d.quadrature);
  for (std::size_t a = 0; a < d.active.size(); ++a) {
    const bool dirichlet = d.active.is_cut(a) && d.active.cut[a]->has_boundary(BcType::Dirichlet);
    EXPECT_EQ(stab.entries[a].has_value(), dirichlet) << a;
    if (dirichlet) EXPECT_GT(stab.entries[a]->lambda, 0.0);
  }
}
