#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "unfitted/geometry.hpp"

namespace unfitted {

/// Gauss-Legendre rule on [0, 1].
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
GaussRule1D gauss_legendre(int n);

/// Smallest point count whose Gauss rule integrates degree `degree` exactly.
constexpr int gauss_points_for_degree(int degree) { return degree / 2 + 1; }

/// Triangle rule in barycentric coordinates; weights sum to one.
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
};

/// Positive-weight rule exact for total degree `degree`. Symmetric tabulated
/// rules up to degree 5, collapsed-coordinate Gauss rules above.
const TriangleRule& triangle_rule(int degree);

struct VolumeRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  double measure() const;
};

struct SurfaceRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<Vec2> normals;  // outward unit normals
  std::vector<BcType> bc;     // tag of the facet that produced each point

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  double measure() const;
  /// Sub-rule holding only the points tagged `tag`.
  SurfaceRule restricted(BcType tag) const;
};

/// Straight piece of the (approximated) boundary inside one element.
struct BoundarySegment {
  Vec2 a;
  Vec2 b;
  Vec2 normal;  // outward unit normal
  BcType bc = BcType::Dirichlet;

  double length() const { return (b - a).norm(); }
};

/// Result of tessellating one element against the domain: the interior
/// region T∩Ω as triangles and axis-aligned boxes, and T∩∂Ω as segments.
struct CutGeometry {
  std::vector<std::array<Vec2, 3>> triangles;
  std::vector<std::array<Vec2, 2>> boxes;  // lower-left, upper-right
  std::vector<BoundarySegment> segments;

  double interior_measure() const;
  double boundary_measure() const;
  bool has_boundary(BcType tag) const;
};

/// Relative measure below which interior pieces and boundary segments are
/// discarded (relative to |T| for areas, to diam(T) for lengths).
inline constexpr double kDropTolerance = 1e-14;

/// Default bisection depth of the cut-cell tessellation.
inline constexpr int kDefaultTessellationDepth = 2;

/// Interior/boundary decomposition of a cut element.
///
/// Straight-sided domains are clipped facet by facet, which is exact at any
/// depth. The rounded square is bisected `max_depth` times; fully interior
/// sub-cells are kept as they are and mixed leaves are split into triangles
/// whose boundary crossings come from a secant step on phi followed by one
/// Newton correction. Throws ContractViolation if the element is not cut.
CutGeometry tessellate(const Cell& cell, const ImplicitDomain& domain, int max_depth);

/// Cut of a cell by the single straight boundary {facet.eval(x) = 0}. Used to
/// build arbitrary cut configurations independent of the model domains.
CutGeometry clip_by_half_plane(const Cell& cell, const Facet& facet);

/// Plain rule on the whole element, exact for degree `degree`.
VolumeRule element_rule(const Cell& cell, int degree);
VolumeRule volume_rule(const CutGeometry& geometry, int degree);
SurfaceRule surface_rule(const CutGeometry& geometry, int degree);

/// Classifies the element first: Inside elements get element_rule, Outside an
/// empty rule, Cut elements the mapped rules over the tessellation.
VolumeRule volume_rule(const Cell& cell, const ImplicitDomain& domain, int max_depth, int degree);
SurfaceRule surface_rule(const Cell& cell, const ImplicitDomain& domain, int max_depth, int degree);

}  // namespace unfitted
