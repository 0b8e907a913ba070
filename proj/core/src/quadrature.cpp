#include "unfitted/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "unfitted/errors.hpp"

namespace unfitted {

GaussRule1D gauss_legendre(int n) {
  if (n < 1) throw ContractViolation("Gauss rule needs at least one point");
  GaussRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton on P_n with Chebyshev-like initial guesses; nodes on [-1, 1] first.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // refresh derivative at the converged node
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

namespace {

void add_orbit3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.barycentric.push_back({a, a, b});
  r.barycentric.push_back({a, b, a});
  r.barycentric.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

void add_orbit6(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                        std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
    r.barycentric.push_back(p);
    r.weights.push_back(w);
  }
}

// Duffy-collapsed tensor Gauss rule; positive weights for any degree.
TriangleRule collapsed_rule(int degree) {
  const int n = gauss_points_for_degree(degree + 1);
  const auto g = gauss_legendre(n);
  TriangleRule r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = g.points[i];
      const double v = g.points[j];
      const double x = u;
      const double y = v * (1.0 - u);
      r.barycentric.push_back({1.0 - x - y, x, y});
      r.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return r;
}

TriangleRule make_triangle_rule(int degree) {
  TriangleRule r;
  switch (degree) {
    case 0:
    case 1:
      r.barycentric.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(1.0);
      return r;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      return r;
    case 3:
      // Strang-Fix six-point rule
      add_orbit6(r, 0.659027622374092, 0.231933368553031, 1.0 / 6.0);
      return r;
    case 4:
      add_orbit3(r, 0.445948490915965, 0.223381589678011);
      add_orbit3(r, 0.091576213509771, 0.109951743655322);
      return r;
    case 5: {
      // Radon seven-point rule
      const double s15 = std::sqrt(15.0);
      r.barycentric.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      r.weights.push_back(9.0 / 40.0);
      add_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
      add_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
      return r;
    }
    default:
      return collapsed_rule(degree);
  }
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  if (degree < 0) throw ContractViolation("negative quadrature degree");
  static std::mutex mutex;
  static std::map<int, TriangleRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make_triangle_rule(degree)).first;
  return it->second;
}

double VolumeRule::measure() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double SurfaceRule::measure() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

SurfaceRule SurfaceRule::restricted(BcType tag) const {
  SurfaceRule out;
  for (std::size_t q = 0; q < size(); ++q) {
    if (bc[q] != tag) continue;
    out.points.push_back(points[q]);
    out.weights.push_back(weights[q]);
    out.normals.push_back(normals[q]);
    out.bc.push_back(bc[q]);
  }
  return out;
}

namespace {

void append_triangle(VolumeRule& rule, const std::array<Vec2, 3>& t, const TriangleRule& tr) {
  const double area = 0.5 * std::abs((t[1] - t[0]).x() * (t[2] - t[0]).y() -
                                     (t[2] - t[0]).x() * (t[1] - t[0]).y());
  for (std::size_t q = 0; q < tr.weights.size(); ++q) {
    const auto& l = tr.barycentric[q];
    rule.points.push_back(l[0] * t[0] + l[1] * t[1] + l[2] * t[2]);
    rule.weights.push_back(tr.weights[q] * area);
  }
}

void append_box(VolumeRule& rule, const Vec2& lo, const Vec2& hi, const GaussRule1D& g) {
  const Vec2 d = hi - lo;
  for (std::size_t j = 0; j < g.points.size(); ++j) {
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      rule.points.emplace_back(lo.x() + g.points[i] * d.x(), lo.y() + g.points[j] * d.y());
      rule.weights.push_back(g.weights[i] * g.weights[j] * d.x() * d.y());
    }
  }
}

}  // namespace

VolumeRule element_rule(const Cell& cell, int degree) {
  VolumeRule rule;
  if (cell.shape == CellShape::Triangle) {
    append_triangle(rule, {cell.vertices[0], cell.vertices[1], cell.vertices[2]},
                    triangle_rule(degree));
  } else {
    append_box(rule, cell.vertices[0], cell.vertices[2],
               gauss_legendre(gauss_points_for_degree(degree)));
  }
  return rule;
}

VolumeRule volume_rule(const CutGeometry& geometry, int degree) {
  VolumeRule rule;
  const auto& tr = triangle_rule(degree);
  for (const auto& t : geometry.triangles) append_triangle(rule, t, tr);
  if (!geometry.boxes.empty()) {
    const auto g = gauss_legendre(gauss_points_for_degree(degree));
    for (const auto& b : geometry.boxes) append_box(rule, b[0], b[1], g);
  }
  return rule;
}

SurfaceRule surface_rule(const CutGeometry& geometry, int degree) {
  SurfaceRule rule;
  const auto g = gauss_legendre(gauss_points_for_degree(degree));
  for (const auto& s : geometry.segments) {
    const double len = s.length();
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      rule.points.push_back(s.a + g.points[q] * (s.b - s.a));
      rule.weights.push_back(g.weights[q] * len);
      rule.normals.push_back(s.normal);
      rule.bc.push_back(s.bc);
    }
  }
  return rule;
}

VolumeRule volume_rule(const Cell& cell, const ImplicitDomain& domain, int max_depth, int degree) {
  switch (classify_element(domain, cell, max_depth)) {
    case Classification::Inside: return element_rule(cell, degree);
    case Classification::Outside: return {};
    case Classification::Cut: return volume_rule(tessellate(cell, domain, max_depth), degree);
  }
  return {};
}

SurfaceRule surface_rule(const Cell& cell, const ImplicitDomain& domain, int max_depth,
                         int degree) {
  if (classify_element(domain, cell, max_depth) != Classification::Cut) return {};
  return surface_rule(tessellate(cell, domain, max_depth), degree);
}

}  // namespace unfitted
