#include "unfitted/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "unfitted/errors.hpp"

namespace unfitted {

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::OverlapSquare: return "overlap-square";
    case DomainKind::MixedSquare: return "mixed-square";
    case DomainKind::KinkedSquare: return "kinked-square";
    case DomainKind::PNormBall8: return "pnorm-ball8";
  }
  return "unknown";
}

std::string_view to_string(BcType bc) {
  return bc == BcType::Dirichlet ? "dirichlet" : "neumann";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Inside: return "inside";
    case Classification::Outside: return "outside";
    case Classification::Cut: return "cut";
  }
  return "unknown";
}

DomainKind parse_domain_kind(std::string_view name) {
  for (auto kind : {DomainKind::OverlapSquare, DomainKind::MixedSquare,
                    DomainKind::KinkedSquare, DomainKind::PNormBall8}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown domain kind '" + std::string(name) + "'");
}

namespace {

Facet make_facet(double nx, double ny, double offset, BcType bc) {
  const double len = std::hypot(nx, ny);
  return Facet{Vec2(nx / len, ny / len), offset / len, bc};
}

}  // namespace

ImplicitDomain::ImplicitDomain(DomainKind kind, double epsilon) : kind_(kind), epsilon_(epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw ConfigError("domain parameter epsilon must be finite and non-negative");
  }
  const double a = 1.0 + epsilon;
  switch (kind) {
    case DomainKind::OverlapSquare:
      facets_ = {make_facet(1, 0, a, BcType::Dirichlet), make_facet(0, 1, a, BcType::Dirichlet),
                 make_facet(-1, 0, a, BcType::Dirichlet), make_facet(0, -1, a, BcType::Dirichlet)};
      break;
    case DomainKind::MixedSquare:
      facets_ = {make_facet(1, 0, a, BcType::Neumann), make_facet(0, 1, a, BcType::Dirichlet),
                 make_facet(-1, 0, a, BcType::Neumann), make_facet(0, -1, a, BcType::Dirichlet)};
      break;
    case DomainKind::KinkedSquare:
      if (epsilon >= 1.0) throw ConfigError("kinked square needs epsilon < 1");
      // |x - εy| < 1 (Neumann sides), |y - εx| < 1 (Dirichlet sides)
      facets_ = {make_facet(1, -epsilon, 1, BcType::Neumann),
                 make_facet(-epsilon, 1, 1, BcType::Dirichlet),
                 make_facet(-1, epsilon, 1, BcType::Neumann),
                 make_facet(epsilon, -1, 1, BcType::Dirichlet)};
      break;
    case DomainKind::PNormBall8:
      break;
    default:
      throw ConfigError("unknown domain kind");
  }
}

double ImplicitDomain::phi(const Vec2& p) const {
  if (kind_ == DomainKind::PNormBall8) {
    const double m = std::max(std::abs(p.x()), std::abs(p.y()));
    if (m == 0.0) return -(1.0 + epsilon_);
    const double sx = p.x() / m;
    const double sy = p.y() / m;
    const double s8 = std::pow(sx, 8) + std::pow(sy, 8);
    return m * std::pow(s8, 0.125) - (1.0 + epsilon_);
  }
  double value = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) value = std::max(value, f.eval(p));
  return value;
}

Vec2 ImplicitDomain::grad_phi(const Vec2& p) const {
  if (kind_ == DomainKind::PNormBall8) {
    const double r = phi(p) + 1.0 + epsilon_;
    if (r == 0.0) return Vec2::Zero();
    return Vec2(std::pow(p.x() / r, 7), std::pow(p.y() / r, 7));
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(facets_.size()); ++i) {
    if (facets_[i].eval(p) > facets_[best].eval(p)) best = i;
  }
  return facets_[best].normal;
}

BcType ImplicitDomain::facet_bc(int facet) const {
  if (kind_ == DomainKind::PNormBall8) return BcType::Dirichlet;
  return facets_.at(static_cast<std::size_t>(facet)).bc;
}

bool ImplicitDomain::has_neumann() const noexcept {
  return std::any_of(facets_.begin(), facets_.end(),
                     [](const Facet& f) { return f.bc == BcType::Neumann; });
}

BcType ImplicitDomain::tag_at(const Vec2& p) const {
  if (facets_.empty()) return BcType::Dirichlet;
  int best = 0;
  for (int i = 1; i < static_cast<int>(facets_.size()); ++i) {
    if (facets_[i].eval(p) > facets_[best].eval(p)) best = i;
  }
  return facets_[best].bc;
}

double ImplicitDomain::extent() const noexcept {
  if (kind_ == DomainKind::KinkedSquare) return 1.0 / (1.0 - epsilon_);
  return 1.0 + epsilon_;
}

ManufacturedSolution ManufacturedSolution::sine() {
  using std::numbers::pi;
  ManufacturedSolution s;
  s.u = [](const Vec2& p) { return std::sin(pi * p.x()) + std::sin(pi * p.y()); };
  s.grad_u = [](const Vec2& p) {
    return Vec2(pi * std::cos(pi * p.x()), pi * std::cos(pi * p.y()));
  };
  s.f = [](const Vec2& p) { return pi * pi * (std::sin(pi * p.x()) + std::sin(pi * p.y())); };
  return s;
}

ManufacturedSolution ManufacturedSolution::linear() {
  ManufacturedSolution s;
  s.u = [](const Vec2& p) { return p.x() + p.y(); };
  s.grad_u = [](const Vec2&) { return Vec2(1.0, 1.0); };
  s.f = [](const Vec2&) { return 0.0; };
  return s;
}

BoundaryValue boundary_data(const ManufacturedSolution& sol, const Vec2& point,
                            const Vec2& normal, BcType bc) {
  if (bc == BcType::Dirichlet) return {bc, sol.u(point)};
  return {bc, sol.grad_u(point).dot(normal)};
}

BoundaryValue boundary_data(const ImplicitDomain& domain, const ManufacturedSolution& sol,
                            const Vec2& point, const Vec2& normal) {
  return boundary_data(sol, point, normal, domain.tag_at(point));
}

Cell Cell::triangle(const Vec2& a, const Vec2& b, const Vec2& c, std::size_t id) {
  Cell cell;
  cell.shape = CellShape::Triangle;
  cell.vertices = {a, b, c, Vec2::Zero()};
  cell.id = id;
  return cell;
}

Cell Cell::square(const Vec2& lower_left, double h, std::size_t id) {
  Cell cell;
  cell.shape = CellShape::Quad;
  cell.vertices = {lower_left, lower_left + Vec2(h, 0), lower_left + Vec2(h, h),
                   lower_left + Vec2(0, h)};
  cell.id = id;
  return cell;
}

double Cell::area() const {
  double twice = 0.0;
  const int n = n_vertices();
  for (int i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

double Cell::diameter() const {
  double d = 0.0;
  const int n = n_vertices();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
  }
  return d;
}

Cell Cell::translated(const Vec2& shift) const {
  Cell c = *this;
  for (int i = 0; i < n_vertices(); ++i) c.vertices[i] += shift;
  return c;
}

Cell Cell::scaled(double s) const {
  Cell c = *this;
  for (int i = 0; i < n_vertices(); ++i) c.vertices[i] *= s;
  return c;
}

}  // namespace unfitted
