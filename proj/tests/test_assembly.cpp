#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "unfitted/errors.hpp"
#include "unfitted/experiment.hpp"

using namespace unfitted;

namespace {

double max_abs(const SparseMatrix& m) {
  double v = 0.0;
  for (Eigen::Index c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

struct Built {
  Discretization d;
  StabilizationField stab;
  Built(ElementType type, int K, DomainKind kind, double eps, std::optional<double> cap = std::nullopt)
      : d(type, K, kind, eps), stab(compute_stabilization(d.space, d.active, d.quadrature, cap)) {}
};

}  // namespace

TEST(Assemble, SystemIsSymmetricForBothVariants) {
  const Built s(ElementType::QuadQ1, 8, DomainKind::PNormBall8, 0.01, 200.0);
  const Built n(ElementType::TriP1, 8, DomainKind::OverlapSquare, 0.01);
  const auto sol = ManufacturedSolution::sine();
  const LinearSystem hybrid = assemble(s.d.space, s.d.quadrature, s.stab, sol, FormVariant::hybrid(200.0));
  const LinearSystem nitsche = assemble(n.d.space, n.d.quadrature, n.stab, sol, FormVariant{});
  ASSERT_GT(s.stab.n_capped(), 0u);
  for (const auto* sys : {&hybrid, &nitsche}) {
    const SparseMatrix diff = sys->matrix - SparseMatrix(sys->matrix.transpose());
    EXPECT_LE(max_abs(diff), 1e-12 * max_abs(sys->matrix));
  }
}

TEST(Assemble, ReproducesLinearSolution) {
  const double h = 1.0 / 8;
  for (auto kind : {DomainKind::OverlapSquare, DomainKind::MixedSquare, DomainKind::KinkedSquare}) {
    const Built s(ElementType::QuadQ1, 8, kind, h / 3);
    const auto lin = ManufacturedSolution::linear();
    const LinearSystem sys = assemble(s.d.space, s.d.quadrature, s.stab, lin, FormVariant{});
    const Eigen::VectorXd uh = solve(sys);
    const Eigen::VectorXd exact = s.d.space.interpolate(lin.u);
    EXPECT_LT((uh - exact).cwiseAbs().maxCoeff(), 1e-10) << to_string(kind);

    // consistency: a_h(ū, v) = l_h(v) for every v
    const Eigen::VectorXd residual = sys.matrix * exact - sys.rhs;
    const SparseMatrix e = assemble_energy_gram(s.d.space, s.d.quadrature, s.stab, FormVariant{});
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd v(exact.size());
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
      EXPECT_LE(std::abs(residual.dot(v)), 1e-9 * std::sqrt(v.dot(e * v)));
    }
  }
}

TEST(Assemble, HybridWithInactiveCapEqualsNitsche) {
  const Built plain(ElementType::QuadQ1, 8, DomainKind::PNormBall8, 0.02);
  const double cap = 10 * plain.stab.max_lambda();
  const Built capped(ElementType::QuadQ1, 8, DomainKind::PNormBall8, 0.02, cap);
  EXPECT_EQ(capped.stab.n_capped(), 0u);
  const auto sol = ManufacturedSolution::sine();
  const auto a = assemble(plain.d.space, plain.d.quadrature, plain.stab, sol, FormVariant{});
  const auto b = assemble(capped.d.space, capped.d.quadrature, capped.stab, sol, FormVariant::hybrid(cap));
  EXPECT_LE(max_abs(a.matrix - b.matrix), 1e-14 * max_abs(a.matrix));
  EXPECT_LE((a.rhs - b.rhs).cwiseAbs().maxCoeff(), 1e-14 * a.rhs.cwiseAbs().maxCoeff());
}

TEST(Assemble, CappedElementsDropTheFluxTerms) {
  // with every element capped the hybrid matrix is stiffness + C ∫uv, which
  // is positive definite and differs from the Nitsche matrix
  const Built s(ElementType::QuadQ1, 8, DomainKind::OverlapSquare, 1e-4, 1.0);
  ASSERT_EQ(s.stab.n_capped(), s.d.active.n_cut());
  const auto sol = ManufacturedSolution::sine();
  const auto sys = assemble(s.d.space, s.d.quadrature, s.stab, sol, FormVariant::hybrid(1.0));
  const SparseMatrix e = assemble_energy_gram(s.d.space, s.d.quadrature, s.stab, FormVariant::hybrid(1.0));
  EXPECT_LE(max_abs(sys.matrix - e), 1e-12 * max_abs(e));
}

TEST(Assemble, MissingOrInconsistentStabilizationIsAnError) {
  const Built s(ElementType::QuadQ1, 4, DomainKind::OverlapSquare, 0.05);
  const auto sol = ManufacturedSolution::sine();
  StabilizationField missing = s.stab;
  for (auto& e : missing.entries) e.reset();
  EXPECT_THROW(assemble(s.d.space, s.d.quadrature, missing, sol, FormVariant{}), AssemblyError);
  EXPECT_THROW(assemble(s.d.space, s.d.quadrature, s.stab, sol, FormVariant::hybrid(100.0)), AssemblyError);
  const StabilizationField capped = apply_cap(s.stab, 1.0);
  EXPECT_THROW(assemble(s.d.space, s.d.quadrature, capped, sol, FormVariant{}), AssemblyError);
}

TEST(Assemble, NeumannTagsOnlyChangeSideRows) {
  const double eps = 1.0 / 32;
  const Built mixed(ElementType::QuadQ1, 8, DomainKind::MixedSquare, eps);
  const Built dirichlet(ElementType::QuadQ1, 8, DomainKind::OverlapSquare, eps);
  const auto sol = ManufacturedSolution::sine();
  const auto a = assemble(mixed.d.space, mixed.d.quadrature, mixed.stab, sol, FormVariant{});
  const auto b = assemble(dirichlet.d.space, dirichlet.d.quadrature, dirichlet.stab, sol, FormVariant{});
  ASSERT_EQ(a.matrix.rows(), b.matrix.rows());
  // dofs of elements that carry Neumann boundary
  std::vector<bool> side(static_cast<std::size_t>(a.matrix.rows()), false);
  for (std::size_t e = 0; e < mixed.d.active.size(); ++e) {
    if (!mixed.d.active.is_cut(e) || !mixed.d.active.cut[e]->has_boundary(BcType::Neumann)) continue;
    for (int dof : mixed.d.space.element_dofs(e)) side[static_cast<std::size_t>(dof)] = true;
  }
  const SparseMatrix diff = a.matrix - b.matrix;
  const double scale = max_abs(b.matrix);
  for (Eigen::Index c = 0; c < diff.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) {
      if (std::abs(it.value()) > 1e-12 * scale) {
        EXPECT_TRUE(side[static_cast<std::size_t>(it.row())] && side[static_cast<std::size_t>(it.col())]);
      }
    }
  }
  for (Eigen::Index i = 0; i < a.rhs.size(); ++i) {
    if (!side[static_cast<std::size_t>(i)]) EXPECT_NEAR(a.rhs(i), b.rhs(i), 1e-12 * b.rhs.cwiseAbs().maxCoeff());
  }
}

TEST(EnergyGram, TermwiseAgainstDirectQuadrature) {
  const Built s(ElementType::QuadQ1, 8, DomainKind::OverlapSquare, 1.0 / 24);
  const SparseMatrix e = assemble_energy_gram(s.d.space, s.d.quadrature, s.stab, FormVariant{});
  const Eigen::VectorXd v = s.d.space.interpolate([](const Vec2& p) { return p.x(); });
  double expected = 0.0;
  for (std::size_t a = 0; a < s.d.active.size(); ++a) {
    const auto& r = s.d.quadrature.rules[a];
    expected += r.volume.measure();
    if (!s.stab.entries[a]) continue;
    const double lam = s.stab.entries[a]->lambda;
    for (std::size_t q = 0; q < r.surface.size(); ++q) {
      const double nx = r.surface.normals[q].x();
      const double x = r.surface.points[q].x();
      expected += r.surface.weights[q] * (nx * nx / lam + lam * x * x);
    }
  }
  EXPECT_NEAR(v.dot(e * v), expected, 1e-12 * expected);
  EXPECT_EQ(Eigen::VectorXd::Zero(v.size()).dot(e * Eigen::VectorXd::Zero(v.size())), 0.0);
}

TEST(EnergyGram, PositiveSemidefinite) {
  for (auto kind : {DomainKind::OverlapSquare, DomainKind::PNormBall8}) {
    const Built s(ElementType::TriP1, 8, kind, 1e-3);
    const SparseMatrix e = assemble_energy_gram(s.d.space, s.d.quadrature, s.stab, FormVariant{});
    const Eigen::MatrixXd dense(e);
    const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
    EXPECT_GE(smallest, -1e-10 * max_abs(e));
  }
}

TEST(H1Gram, QuadraticFormIsTheH1Norm) {
  const Built s(ElementType::QuadQ2, 4, DomainKind::OverlapSquare, 0.1);
  const SparseMatrix g = assemble_h1_gram(s.d.space, s.d.quadrature);
  const Eigen::VectorXd v = s.d.space.interpolate([](const Vec2& p) { return p.x() + 2 * p.y(); });
  // over [-1.1, 1.1]² the cross term ∫xy vanishes
  const double side = 2.2, area = side * side;
  const double second_moment = area * (1.1 * 1.1) / 3;
  EXPECT_NEAR(v.dot(g * v), 5 * second_moment + 5 * area, 1e-11);
}
