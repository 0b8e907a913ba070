#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace unfitted {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { OverlapSquare, MixedSquare, KinkedSquare, PNormBall8 };
enum class BcType { Dirichlet, Neumann };
enum class Classification { Inside, Outside, Cut };

std::string_view to_string(DomainKind kind);
std::string_view to_string(BcType bc);
std::string_view to_string(Classification c);

/// Parses "overlap-square", "mixed-square", "kinked-square" or "pnorm-ball8".
DomainKind parse_domain_kind(std::string_view name);

/// Straight boundary piece of a polygonal domain: Ω lies in {n·x < offset}.
struct Facet {
  Vec2 normal;  // outward, unit length
  double offset = 0.0;
  BcType bc = BcType::Dirichlet;

  double eval(const Vec2& p) const { return normal.dot(p) - offset; }
};

/// Level-set description of one of the four model domains.
///
/// phi < 0 inside, phi > 0 outside, phi = 0 on the boundary. The three
/// straight-sided kinds are convex polygons given as an intersection of
/// half-planes, phi being the maximum of the facet functions. The rounded
/// square uses the 8-norm, phi(x) = |x|_8 - (1 + ε).
class ImplicitDomain {
 public:
  /// ε ≥ 0; the kinked square additionally needs ε < 1 to stay bounded.
  ImplicitDomain(DomainKind kind, double epsilon);

  DomainKind kind() const noexcept { return kind_; }
  double epsilon() const noexcept { return epsilon_; }

  double phi(const Vec2& p) const;
  Vec2 grad_phi(const Vec2& p) const;

  bool is_polygonal() const noexcept { return kind_ != DomainKind::PNormBall8; }
  /// Empty for the curved kind.
  std::span<const Facet> facets() const noexcept { return facets_; }
  BcType facet_bc(int facet) const;
  bool has_neumann() const noexcept;

  /// Boundary condition by geometric proximity: the facet with the largest
  /// facet function at p (first one on ties). Only meant for point queries;
  /// quadrature points carry the tag of the facet that generated them.
  BcType tag_at(const Vec2& p) const;

  /// max(|x|, |y|) over the closure of Ω.
  double extent() const noexcept;

 private:
  DomainKind kind_;
  double epsilon_;
  std::vector<Facet> facets_;
};

/// Exact solution data for the model Poisson problem -Δu = f.
struct ManufacturedSolution {
  std::function<double(const Vec2&)> u;
  std::function<Vec2(const Vec2&)> grad_u;
  std::function<double(const Vec2&)> f;

  /// u = sin(πx) + sin(πy), f = π² u.
  static ManufacturedSolution sine();
  /// u = x + y, f = 0. Lies in every Lagrange space used here.
  static ManufacturedSolution linear();
};

struct BoundaryValue {
  BcType bc;
  double value;  // g = u(p) for Dirichlet, ∇u(p)·n for Neumann
};

BoundaryValue boundary_data(const ManufacturedSolution& sol, const Vec2& point,
                            const Vec2& normal, BcType bc);
BoundaryValue boundary_data(const ImplicitDomain& domain, const ManufacturedSolution& sol,
                            const Vec2& point, const Vec2& normal);

enum class CellShape { Triangle, Quad };

/// A background element as a convex polygon with counterclockwise vertices.
/// Quads are axis-aligned with vertices[0] the lower-left corner.
struct Cell {
  CellShape shape = CellShape::Quad;
  std::array<Vec2, 4> vertices{};
  std::size_t id = 0;

  static Cell triangle(const Vec2& a, const Vec2& b, const Vec2& c, std::size_t id = 0);
  static Cell square(const Vec2& lower_left, double h, std::size_t id = 0);

  int n_vertices() const noexcept { return shape == CellShape::Triangle ? 3 : 4; }
  std::span<const Vec2> corners() const noexcept {
    return {vertices.data(), static_cast<std::size_t>(n_vertices())};
  }
  double area() const;
  double diameter() const;
  Cell translated(const Vec2& shift) const;
  Cell scaled(double s) const;
};

/// Inside if T ⊂ Ω̄, Outside if T ∩ Ω = ∅ (up to the measure tolerance of the
/// cut quadrature), Cut otherwise. Exact for the straight-sided kinds; for the
/// rounded square the answer follows the depth-`max_depth` tessellation.
/// Throws InputError for a zero-area cell.
Classification classify_element(const ImplicitDomain& domain, const Cell& cell, int max_depth = 2);

}  // namespace unfitted
