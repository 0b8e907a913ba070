#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "unfitted/errors.hpp"
#include "unfitted/experiment.hpp"

using namespace unfitted;

TEST(Solve, IdentitySystem) {
  LinearSystem sys;
  sys.matrix.resize(5, 5);
  sys.matrix.setIdentity();
  sys.rhs = Eigen::VectorXd::Unit(5, 0);
  EXPECT_EQ(solve(sys), Eigen::VectorXd::Unit(5, 0));
}

TEST(Solve, RandomSpdAgainstDenseInverse) {
  std::mt19937_64 rng(50);
  std::normal_distribution<double> normal;
  const int n = 50;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  const Eigen::MatrixXd spd = g * g.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = normal(rng);
  LinearSystem sys{spd.sparseView(), b, {}};
  const Eigen::VectorXd x = solve(sys);
  const Eigen::VectorXd ref = spd.ldlt().solve(b);
  EXPECT_LE((x - ref).norm(), 1e-9 * ref.norm());
}

TEST(Solve, SingularMatrixReportsPivot) {
  LinearSystem sys;
  sys.matrix.resize(3, 3);
  sys.matrix.insert(0, 0) = 1.0;
  sys.matrix.insert(2, 2) = 1.0;
  sys.rhs = Eigen::VectorXd::Ones(3);
  try {
    solve(sys);
    FAIL() << "expected SolveError";
  } catch (const SolveError& e) {
    EXPECT_GE(e.pivot(), 0);
  }
}

TEST(Solve, SizeMismatchIsAContractViolation) {
  LinearSystem sys;
  sys.matrix.resize(3, 3);
  sys.rhs = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(solve(sys), ContractViolation);
}

TEST(Solve, ExampleSystemMeetsResidualContract) {
  const Discretization d(ElementType::QuadQ1, 8, DomainKind::OverlapSquare, 1.0 / 16);
  const auto stab = compute_stabilization(d.space, d.active, d.quadrature);
  const auto sys = assemble(d.space, d.quadrature, stab, ManufacturedSolution::sine(), FormVariant{});
  const Eigen::VectorXd x = solve(sys);
  EXPECT_LE((sys.matrix * x - sys.rhs).norm(), 1e-10 * sys.rhs.norm());
}

TEST(ErrorNorms, ZeroForInSpaceSolution) {
  const Discretization d(ElementType::QuadQ1, 8, DomainKind::OverlapSquare, 1.0 / 24);
  const auto stab = compute_stabilization(d.space, d.active, d.quadrature);
  const auto lin = ManufacturedSolution::linear();
  const DiscreteSolution uh{&d.space, d.space.interpolate(lin.u)};
  const auto r = error_norms(uh, lin, d.error_quadrature, stab, FormVariant{});
  EXPECT_LE(r.err_energy, 1e-10);
  EXPECT_LE(r.err_h1, 1e-10);
  EXPECT_LE(r.err_l2, 1e-10);
}

TEST(ErrorNorms, ZeroSolutionGivesNormOfSine) {
  // ε = 0 fits the square [-1,1]² exactly; ∫(sin πx + sin πy)² = 4 there
  const double tiny = 1e-12;
  const Discretization d(ElementType::QuadQ2, 8, DomainKind::OverlapSquare, tiny);
  const auto stab = compute_stabilization(d.space, d.active, d.quadrature);
  const auto sine = ManufacturedSolution::sine();
  const DiscreteSolution zero{&d.space, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.space.n_dofs()))};
  const auto r = error_norms(zero, sine, d.error_quadrature, stab, FormVariant{});
  EXPECT_NEAR(r.err_l2 * r.err_l2, 4.0, 1e-8);
  // ∫|∇u|² = π² ∫(cos²πx + cos²πy) = 4π²
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(r.err_h1 * r.err_h1, 4.0 + 4 * pi2, 1e-7);
  EXPECT_GE(r.err_energy * r.err_energy, 4 * pi2 * (1 - 1e-12));
}

TEST(ErrorNorms, EnergyDominatesGradientPart) {
  const Discretization d(ElementType::TriP1, 8, DomainKind::PNormBall8, 1e-3);
  const auto stab = compute_stabilization(d.space, d.active, d.quadrature);
  const auto sine = ManufacturedSolution::sine();
  const auto uh = solve(d.space, assemble(d.space, d.quadrature, stab, sine, FormVariant{}));
  const auto r = error_norms(uh, sine, d.error_quadrature, stab, FormVariant{});
  const double grad2 = r.err_h1 * r.err_h1 - r.err_l2 * r.err_l2;
  EXPECT_GE(r.err_energy * r.err_energy, grad2 * (1 - 1e-12));
  EXPECT_GT(r.err_l2, 0.0);
}
