#include "unfitted/mesh.hpp"

#include <algorithm>

#include "unfitted/errors.hpp"

namespace unfitted {

std::string_view to_string(ElementType type) {
  switch (type) {
    case ElementType::TriP1: return "P1";
    case ElementType::QuadQ1: return "Q1";
    case ElementType::QuadQ2: return "Q2";
  }
  return "unknown";
}

BackgroundMesh::BackgroundMesh(ElementType type, int K, DiagonalPattern pattern)
    : type_(type), pattern_(pattern), K_(K), h_(1.0 / K), origin_(-1.0 - 1.0 / K) {
  if (K < 2) throw ConfigError("background mesh needs K >= 2");
}

std::size_t BackgroundMesh::n_cells() const noexcept {
  const auto n = static_cast<std::size_t>(cells_per_side());
  return n * n;
}

std::size_t BackgroundMesh::n_elements() const noexcept {
  return type_ == ElementType::TriP1 ? 2 * n_cells() : n_cells();
}

std::size_t BackgroundMesh::n_vertices() const noexcept {
  const auto n = static_cast<std::size_t>(cells_per_side() + 1);
  return n * n;
}

std::pair<int, int> BackgroundMesh::cell_index(std::size_t id) const noexcept {
  const std::size_t c = type_ == ElementType::TriP1 ? id / 2 : id;
  const auto n = static_cast<std::size_t>(cells_per_side());
  return {static_cast<int>(c % n), static_cast<int>(c / n)};
}

Cell BackgroundMesh::element(std::size_t id) const {
  const auto [i, j] = cell_index(id);
  const Vec2 ll(origin_ + i * h_, origin_ + j * h_);
  if (type_ != ElementType::TriP1) return Cell::square(ll, h_, id);

  const Vec2 lr = ll + Vec2(h_, 0);
  const Vec2 ur = ll + Vec2(h_, h_);
  const Vec2 ul = ll + Vec2(0, h_);
  const bool rising = pattern_ == DiagonalPattern::Uniform || (i + j) % 2 == 0;
  const bool first = id % 2 == 0;
  if (rising) {
    // diagonal from lower-left to upper-right
    return first ? Cell::triangle(ll, lr, ur, id) : Cell::triangle(ll, ur, ul, id);
  }
  return first ? Cell::triangle(ll, lr, ul, id) : Cell::triangle(lr, ur, ul, id);
}

BackgroundMesh build_background(ElementType type, int K, DiagonalPattern pattern) {
  return BackgroundMesh(type, K, pattern);
}

std::size_t ActiveMesh::n_cut() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cut.begin(), cut.end(), [](const auto& c) { return c.has_value(); }));
}

ActiveMesh extract_active(const BackgroundMesh& mesh, const ImplicitDomain& domain,
                          int tessellation_depth) {
  ActiveMesh active;
  active.tessellation_depth = tessellation_depth;
  active.classification.resize(mesh.n_elements());
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const Cell cell = mesh.element(e);
    const auto c = classify_element(domain, cell, tessellation_depth);
    active.classification[e] = c;
    if (c == Classification::Outside) continue;
    active.elements.push_back(e);
    if (c == Classification::Cut) {
      active.cut.emplace_back(tessellate(cell, domain, tessellation_depth));
    } else {
      active.cut.emplace_back(std::nullopt);
    }
  }
  if (active.elements.empty()) throw ConfigError("active mesh is empty: domain misses the grid");
  return active;
}

QuadratureSet build_quadrature(const BackgroundMesh& mesh, const ActiveMesh& active, int degree) {
  QuadratureSet set;
  set.degree = degree;
  set.rules.reserve(active.size());
  for (std::size_t a = 0; a < active.size(); ++a) {
    ElementQuadrature q;
    if (active.is_cut(a)) {
      q.volume = volume_rule(*active.cut[a], degree);
      q.surface = surface_rule(*active.cut[a], degree);
    } else {
      q.volume = element_rule(mesh.element(active.elements[a]), degree);
    }
    set.rules.push_back(std::move(q));
  }
  return set;
}

}  // namespace unfitted
