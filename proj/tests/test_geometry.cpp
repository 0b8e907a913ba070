#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "unfitted/errors.hpp"
#include "unfitted/geometry.hpp"

using namespace unfitted;

TEST(ImplicitDomain, OverlapSquareSignsAndExtent) {
  const ImplicitDomain d(DomainKind::OverlapSquare, 0.25);
  EXPECT_LT(d.phi(Vec2(0, 0)), 0.0);
  EXPECT_LT(d.phi(Vec2(1.2, 1.2)), 0.0);
  EXPECT_GT(d.phi(Vec2(1.3, 0)), 0.0);
  EXPECT_NEAR(d.phi(Vec2(1.25, 0.3)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(d.extent(), 1.25);
  EXPECT_FALSE(d.has_neumann());
  EXPECT_EQ(d.facets().size(), 4u);
}

TEST(ImplicitDomain, MixedSquareTags) {
  const ImplicitDomain d(DomainKind::MixedSquare, 0.1);
  EXPECT_TRUE(d.has_neumann());
  EXPECT_EQ(d.tag_at(Vec2(1.1, 0.2)), BcType::Neumann);
  EXPECT_EQ(d.tag_at(Vec2(-1.1, 0.2)), BcType::Neumann);
  EXPECT_EQ(d.tag_at(Vec2(0.2, 1.1)), BcType::Dirichlet);
  EXPECT_EQ(d.tag_at(Vec2(0.2, -1.1)), BcType::Dirichlet);
}

TEST(ImplicitDomain, KinkedSquareFacetsPassThroughCorners) {
  const double eps = 0.2;
  const ImplicitDomain d(DomainKind::KinkedSquare, eps);
  // corner where x - εy = 1 and y - εx = 1
  const double c = 1.0 / (1.0 - eps);
  EXPECT_NEAR(d.phi(Vec2(c, c)), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(d.extent(), c);
  EXPECT_EQ(d.tag_at(Vec2(1.0 + eps * 0.1, 0.1)), BcType::Neumann);
  EXPECT_EQ(d.tag_at(Vec2(0.1, 1.0 + eps * 0.1)), BcType::Dirichlet);
  EXPECT_THROW(ImplicitDomain(DomainKind::KinkedSquare, 1.0), ConfigError);
}

TEST(ImplicitDomain, PNormBallLevelSet) {
  const double eps = 1.0 / 16;
  const ImplicitDomain d(DomainKind::PNormBall8, eps);
  EXPECT_TRUE(d.facets().empty());
  EXPECT_NEAR(d.phi(Vec2(1 + eps, 0)), 0.0, 1e-15);
  const double t = (1 + eps) / std::pow(2.0, 0.125);
  EXPECT_NEAR(d.phi(Vec2(t, t)), 0.0, 1e-14);
  EXPECT_LT(d.phi(Vec2(1, 1) * 0.9), 0.0);
  EXPECT_GT(d.phi(Vec2(1, 1)), 0.0);
  EXPECT_EQ(d.tag_at(Vec2(1, 0)), BcType::Dirichlet);
  // gradient points outwards and is parallel to ∇|x|_8
  const Vec2 g = d.grad_phi(Vec2(t, t));
  EXPECT_NEAR(g.x(), g.y(), 1e-14);
  EXPECT_GT(g.x(), 0.0);
}

TEST(ImplicitDomain, RejectsBadEpsilon) {
  EXPECT_THROW(ImplicitDomain(DomainKind::OverlapSquare, -1e-3), ConfigError);
  EXPECT_THROW(ImplicitDomain(DomainKind::OverlapSquare, std::nan("")), ConfigError);
  EXPECT_THROW(ImplicitDomain(DomainKind::PNormBall8, INFINITY), ConfigError);
}

TEST(ImplicitDomain, ParseRoundTrip) {
  for (auto k : {DomainKind::OverlapSquare, DomainKind::MixedSquare, DomainKind::KinkedSquare,
                 DomainKind::PNormBall8}) {
    EXPECT_EQ(parse_domain_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_domain_kind("circle"), ConfigError);
}

TEST(ManufacturedSolution, SineSatisfiesPoisson) {
  const auto s = ManufacturedSolution::sine();
  const Vec2 p(0.3, -0.7);
  const double h = 1e-4;
  const double lap = (s.u(p + Vec2(h, 0)) + s.u(p - Vec2(h, 0)) + s.u(p + Vec2(0, h)) + s.u(p - Vec2(0, h)) -
                      4 * s.u(p)) / (h * h);
  EXPECT_NEAR(-lap, s.f(p), 1e-5);
  const Vec2 g = s.grad_u(p);
  EXPECT_NEAR(g.x(), (s.u(p + Vec2(h, 0)) - s.u(p - Vec2(h, 0))) / (2 * h), 1e-7);
  EXPECT_NEAR(g.y(), (s.u(p + Vec2(0, h)) - s.u(p - Vec2(0, h))) / (2 * h), 1e-7);
}

TEST(BoundaryData, DirichletAndNeumannValues) {
  const auto s = ManufacturedSolution::sine();
  const ImplicitDomain d(DomainKind::MixedSquare, 0.0);
  const Vec2 side(1.0, 0.25);
  const auto n = boundary_data(d, s, side, Vec2(1, 0));
  EXPECT_EQ(n.bc, BcType::Neumann);
  EXPECT_NEAR(n.value, std::numbers::pi * std::cos(std::numbers::pi), 1e-14);
  const Vec2 top(0.25, 1.0);
  const auto dv = boundary_data(d, s, top, Vec2(0, 1));
  EXPECT_EQ(dv.bc, BcType::Dirichlet);
  EXPECT_NEAR(dv.value, s.u(top), 1e-15);
}

TEST(Cell, AreaDiameterAndTransforms) {
  const Cell sq = Cell::square(Vec2(0.5, -0.25), 0.125);
  EXPECT_DOUBLE_EQ(sq.area(), 0.125 * 0.125);
  EXPECT_NEAR(sq.diameter(), 0.125 * std::sqrt(2.0), 1e-15);
  const Cell tri = Cell::triangle(Vec2(0, 0), Vec2(2, 0), Vec2(0, 2));
  EXPECT_DOUBLE_EQ(tri.area(), 2.0);
  EXPECT_NEAR(tri.scaled(0.5).area(), 0.5, 1e-15);
  EXPECT_NEAR(tri.translated(Vec2(3, 4)).area(), 2.0, 1e-14);
}

TEST(Classification, StraightDomain) {
  const ImplicitDomain d(DomainKind::OverlapSquare, 0.01);
  const double h = 1.0 / 16;
  EXPECT_EQ(classify_element(d, Cell::square(Vec2(0, 0), h)), Classification::Inside);
  EXPECT_EQ(classify_element(d, Cell::square(Vec2(1, 0), h)), Classification::Cut);
  EXPECT_EQ(classify_element(d, Cell::square(Vec2(1.5, 0), h)), Classification::Outside);
  const Cell flat = Cell::triangle(Vec2(0, 0), Vec2(1, 0), Vec2(2, 0));
  EXPECT_THROW(classify_element(d, flat), InputError);
}
