#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "unfitted/geometry.hpp"
#include "unfitted/quadrature.hpp"

namespace unfitted {

enum class ElementType { TriP1, QuadQ1, QuadQ2 };

std::string_view to_string(ElementType type);
constexpr int polynomial_order(ElementType type) { return type == ElementType::QuadQ2 ? 2 : 1; }
constexpr int dofs_per_element(ElementType type) {
  switch (type) {
    case ElementType::TriP1: return 3;
    case ElementType::QuadQ1: return 4;
    case ElementType::QuadQ2: return 9;
  }
  return 0;
}

/// How each square cell of the triangular grid is split.
/// CrissCross alternates the diagonal in a checkerboard, so that every node
/// with even index sum is the centre of a union-jack star of 8 triangles.
enum class DiagonalPattern { CrissCross, Uniform };

/// Structured background grid on [-1-h, 1+h]² with h = 1/K, i.e. one layer of
/// cells beyond the unit square [-1, 1]².
class BackgroundMesh {
 public:
  BackgroundMesh(ElementType type, int K, DiagonalPattern pattern = DiagonalPattern::CrissCross);

  ElementType element_type() const noexcept { return type_; }
  DiagonalPattern pattern() const noexcept { return pattern_; }
  int K() const noexcept { return K_; }
  double h() const noexcept { return h_; }
  /// Lower-left corner coordinate, -1 - h.
  double origin() const noexcept { return origin_; }
  /// Half-width of the background square, 1 + h.
  double half_width() const noexcept { return -origin_; }
  int cells_per_side() const noexcept { return 2 * K_ + 2; }
  std::size_t n_cells() const noexcept;
  std::size_t n_elements() const noexcept;
  /// Mesh vertices (element corners), (2K+3)².
  std::size_t n_vertices() const noexcept;

  Cell element(std::size_t id) const;
  /// Square cell index (i, j) containing element `id`.
  std::pair<int, int> cell_index(std::size_t id) const noexcept;

 private:
  ElementType type_;
  DiagonalPattern pattern_;
  int K_;
  double h_;
  double origin_;
};

BackgroundMesh build_background(ElementType type, int K,
                                DiagonalPattern pattern = DiagonalPattern::CrissCross);

/// Background elements with T ∩ Ω ≠ ∅ and their cut geometry.
struct ActiveMesh {
  int tessellation_depth = kDefaultTessellationDepth;
  std::vector<Classification> classification;  // per background element
  std::vector<std::size_t> elements;           // active element ids, ascending
  std::vector<std::optional<CutGeometry>> cut;  // per active position; set for Cut elements

  std::size_t size() const noexcept { return elements.size(); }
  bool is_cut(std::size_t a) const noexcept { return cut[a].has_value(); }
  std::size_t n_cut() const noexcept;
};

/// Classifies every background element and keeps Inside ∪ Cut.
/// Throws ConfigError if no element intersects Ω.
ActiveMesh extract_active(const BackgroundMesh& mesh, const ImplicitDomain& domain,
                          int tessellation_depth = kDefaultTessellationDepth);

struct ElementQuadrature {
  VolumeRule volume;
  SurfaceRule surface;  // empty for Inside elements
};

/// Volume and surface rules for every active element, all of one degree of
/// polynomial exactness.
struct QuadratureSet {
  int degree = 0;
  std::vector<ElementQuadrature> rules;  // per active position
};

QuadratureSet build_quadrature(const BackgroundMesh& mesh, const ActiveMesh& active, int degree);

}  // namespace unfitted
