#include <algorithm>
#include <cmath>
#include <numeric>

#include "unfitted/errors.hpp"
#include "unfitted/quadrature.hpp"

namespace unfitted {

double CutGeometry::interior_measure() const {
  double m = 0.0;
  for (const auto& t : triangles) {
    m += 0.5 * std::abs((t[1] - t[0]).x() * (t[2] - t[0]).y() -
                        (t[2] - t[0]).x() * (t[1] - t[0]).y());
  }
  for (const auto& b : boxes) m += (b[1] - b[0]).prod();
  return m;
}

double CutGeometry::boundary_measure() const {
  double m = 0.0;
  for (const auto& s : segments) m += s.length();
  return m;
}

bool CutGeometry::has_boundary(BcType tag) const {
  return std::any_of(segments.begin(), segments.end(),
                     [tag](const BoundarySegment& s) { return s.bc == tag; });
}

namespace {

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (c - a).x() * (b - a).y());
}

// Polygon vertex plus the facet that carries the edge to the next vertex
// (-1 for a piece of the element boundary).
struct TaggedVertex {
  Vec2 p;
  int tag;
};

using TaggedPolygon = std::vector<TaggedVertex>;

TaggedPolygon clip(const TaggedPolygon& poly, const Facet& facet, int facet_id) {
  TaggedPolygon out;
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& P = poly[k];
    const auto& Q = poly[(k + 1) % n];
    const double fp = facet.eval(P.p);
    const double fq = facet.eval(Q.p);
    const bool p_in = fp <= 0.0;
    const bool q_in = fq <= 0.0;
    if (p_in) out.push_back(P);
    if (p_in != q_in) {
      const double t = fp / (fp - fq);
      const Vec2 x = P.p + t * (Q.p - P.p);
      // leaving Ω: the next edge runs along the facet; entering: along PQ
      out.push_back({x, p_in ? facet_id : P.tag});
    }
  }
  return out;
}

void drop_duplicates(TaggedPolygon& poly, double tol) {
  bool changed = true;
  while (changed && poly.size() > 1) {
    changed = false;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const auto& next = poly[(k + 1) % poly.size()];
      if ((poly[k].p - next.p).norm() <= tol) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
}

CutGeometry polygon_cut(const Cell& cell, std::span<const Facet> facets,
                        const std::vector<BcType>& tags) {
  const double area = cell.area();
  const double diam = cell.diameter();
  TaggedPolygon poly;
  for (const auto& v : cell.corners()) poly.push_back({v, -1});
  for (std::size_t i = 0; i < facets.size() && !poly.empty(); ++i) {
    poly = clip(poly, facets[i], static_cast<int>(i));
  }
  CutGeometry geo;
  drop_duplicates(poly, 1e-15 * diam);
  if (poly.size() < 3) return geo;

  // element edges that lie exactly on a facet line are boundary too
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (poly[k].tag >= 0) continue;
    const Vec2& p = poly[k].p;
    const Vec2& q = poly[(k + 1) % n].p;
    for (std::size_t i = 0; i < facets.size(); ++i) {
      if (std::abs(facets[i].eval(p)) <= 1e-14 * diam &&
          std::abs(facets[i].eval(q)) <= 1e-14 * diam) {
        poly[k].tag = static_cast<int>(i);
        break;
      }
    }
  }

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double a = triangle_area(poly[0].p, poly[k].p, poly[k + 1].p);
    if (a > kDropTolerance * area) geo.triangles.push_back({poly[0].p, poly[k].p, poly[k + 1].p});
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (poly[k].tag < 0) continue;
    const Vec2& p = poly[k].p;
    const Vec2& q = poly[(k + 1) % n].p;
    if ((q - p).norm() <= kDropTolerance * diam) continue;
    const auto& f = facets[static_cast<std::size_t>(poly[k].tag)];
    geo.segments.push_back({p, q, f.normal, tags[static_cast<std::size_t>(poly[k].tag)]});
  }
  return geo;
}

// --- curved boundary: bisection + marching triangles -----------------------

class CurvedCutter {
 public:
  CurvedCutter(const ImplicitDomain& domain, const Cell& cell)
      : domain_(domain), area_tol_(kDropTolerance * cell.area()),
        length_tol_(kDropTolerance * cell.diameter()) {}

  void box(const Vec2& lo, const Vec2& hi, int levels_left) {
    const std::array<Vec2, 4> c = {lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())};
    std::array<double, 4> f{};
    for (int i = 0; i < 4; ++i) f[i] = domain_.phi(c[i]);
    if (std::all_of(f.begin(), f.end(), [](double v) { return v < 0.0; })) {
      geo_.boxes.push_back({lo, hi});
      return;
    }
    if (std::all_of(f.begin(), f.end(), [](double v) { return v >= 0.0; })) {
      if (levels_left == 0 || min_phi_on_box(lo, hi) >= 0.0) return;
    }
    if (levels_left > 0) {
      const Vec2 mid = 0.5 * (lo + hi);
      box(lo, mid, levels_left - 1);
      box(Vec2(mid.x(), lo.y()), Vec2(hi.x(), mid.y()), levels_left - 1);
      box(mid, hi, levels_left - 1);
      box(Vec2(lo.x(), mid.y()), Vec2(mid.x(), hi.y()), levels_left - 1);
      return;
    }
    const Vec2 centre = 0.5 * (lo + hi);
    const double fc = domain_.phi(centre);
    for (int i = 0; i < 4; ++i) {
      const int j = (i + 1) % 4;
      march({c[i], c[j], centre}, {f[i], f[j], fc});
    }
  }

  void triangle(const std::array<Vec2, 3>& t, int levels_left) {
    std::array<double, 3> f{};
    for (int i = 0; i < 3; ++i) f[i] = domain_.phi(t[i]);
    if (std::all_of(f.begin(), f.end(), [](double v) { return v < 0.0; })) {
      add_triangle(t[0], t[1], t[2]);
      return;
    }
    if (std::all_of(f.begin(), f.end(), [](double v) { return v >= 0.0; })) {
      Vec2 lo = t[0].cwiseMin(t[1]).cwiseMin(t[2]);
      Vec2 hi = t[0].cwiseMax(t[1]).cwiseMax(t[2]);
      if (levels_left == 0 || min_phi_on_box(lo, hi) >= 0.0) return;
    }
    if (levels_left > 0) {
      const Vec2 ab = 0.5 * (t[0] + t[1]);
      const Vec2 bc = 0.5 * (t[1] + t[2]);
      const Vec2 ca = 0.5 * (t[2] + t[0]);
      triangle({t[0], ab, ca}, levels_left - 1);
      triangle({ab, t[1], bc}, levels_left - 1);
      triangle({ca, bc, t[2]}, levels_left - 1);
      triangle({ab, bc, ca}, levels_left - 1);
      return;
    }
    march(t, f);
  }

  CutGeometry take() { return std::move(geo_); }

 private:
  // Lower bound of phi over an axis-aligned box; exact for the 8-norm level
  // set since |x|_8 is monotone in |x| and |y| separately.
  double min_phi_on_box(const Vec2& lo, const Vec2& hi) const {
    const Vec2 closest(std::clamp(0.0, lo.x(), hi.x()), std::clamp(0.0, lo.y(), hi.y()));
    return domain_.phi(closest);
  }

  // Zero of phi on segment [p, q]; p and q are ordered canonically so that
  // neighbouring leaves compute bit-identical crossing points.
  Vec2 crossing(Vec2 p, Vec2 q, double fp, double fq) const {
    if (q.x() < p.x() || (q.x() == p.x() && q.y() < p.y())) {
      std::swap(p, q);
      std::swap(fp, fq);
    }
    double t = fp / (fp - fq);
    const Vec2 d = q - p;
    const Vec2 x = p + t * d;
    const double slope = domain_.grad_phi(x).dot(d);
    if (slope != 0.0) t = std::clamp(t - domain_.phi(x) / slope, 0.0, 1.0);
    return p + t * d;
  }

  void add_triangle(const Vec2& a, const Vec2& b, const Vec2& c) {
    if (std::abs(triangle_area(a, b, c)) > area_tol_) geo_.triangles.push_back({a, b, c});
  }

  void add_segment(const Vec2& a, const Vec2& b, const Vec2& inside_point) {
    const Vec2 d = b - a;
    const double len = d.norm();
    if (len <= length_tol_) return;
    Vec2 n(d.y() / len, -d.x() / len);
    if (n.dot(inside_point - a) > 0.0) n = -n;
    geo_.segments.push_back({a, b, n, BcType::Dirichlet});
  }

  void march(const std::array<Vec2, 3>& t, const std::array<double, 3>& f) {
    int n_in = 0;
    for (double v : f) n_in += v < 0.0;
    if (n_in == 0) return;
    if (n_in == 3) {
      add_triangle(t[0], t[1], t[2]);
      return;
    }
    // rotate so that the odd vertex (alone in its sign class) comes first
    int odd = 0;
    for (int i = 0; i < 3; ++i) {
      const bool in = f[i] < 0.0;
      if ((n_in == 1 && in) || (n_in == 2 && !in)) odd = i;
    }
    const int i1 = (odd + 1) % 3;
    const int i2 = (odd + 2) % 3;
    const Vec2 x1 = crossing(t[odd], t[i1], f[odd], f[i1]);
    const Vec2 x2 = crossing(t[odd], t[i2], f[odd], f[i2]);
    if (n_in == 1) {
      add_triangle(t[odd], x1, x2);
      add_segment(x1, x2, t[odd]);
    } else {
      add_triangle(x1, t[i1], t[i2]);
      add_triangle(x1, t[i2], x2);
      add_segment(x1, x2, t[i1]);
    }
  }

  const ImplicitDomain& domain_;
  double area_tol_;
  double length_tol_;
  CutGeometry geo_;
};

CutGeometry cut_cell(const Cell& cell, const ImplicitDomain& domain, int max_depth) {
  if (domain.is_polygonal()) {
    std::vector<BcType> tags;
    for (const auto& f : domain.facets()) tags.push_back(f.bc);
    return polygon_cut(cell, domain.facets(), tags);
  }
  CurvedCutter cutter(domain, cell);
  if (cell.shape == CellShape::Quad) {
    cutter.box(cell.vertices[0], cell.vertices[2], max_depth);
  } else {
    cutter.triangle({cell.vertices[0], cell.vertices[1], cell.vertices[2]}, max_depth);
  }
  return cutter.take();
}

Classification derive(const Cell& cell, const CutGeometry& geo) {
  const double area = cell.area();
  const double m = geo.interior_measure();
  if (m <= kDropTolerance * area) return Classification::Outside;
  if (geo.segments.empty()) {
    if (std::abs(m - area) > 1e-10 * area) {
      throw InternalError("interior region without boundary does not fill the element", cell.id);
    }
    return Classification::Inside;
  }
  return Classification::Cut;
}

void check_cell(const Cell& cell) {
  const double d = cell.diameter();
  if (!(cell.area() > 1e-14 * d * d)) {
    throw InputError("degenerate element " + std::to_string(cell.id) +
                     " (zero area or clockwise orientation)");
  }
}

}  // namespace

Classification classify_element(const ImplicitDomain& domain, const Cell& cell, int max_depth) {
  check_cell(cell);
  const auto corners = cell.corners();
  if (std::all_of(corners.begin(), corners.end(),
                  [&](const Vec2& p) { return domain.phi(p) < 0.0; })) {
    // all four model domains are convex
    return Classification::Inside;
  }
  if (domain.is_polygonal()) {
    for (const auto& f : domain.facets()) {
      if (std::all_of(corners.begin(), corners.end(),
                      [&](const Vec2& p) { return f.eval(p) >= 0.0; })) {
        return Classification::Outside;
      }
    }
  } else {
    Vec2 lo = corners[0];
    Vec2 hi = corners[0];
    for (const auto& p : corners) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 closest(std::clamp(0.0, lo.x(), hi.x()), std::clamp(0.0, lo.y(), hi.y()));
    if (domain.phi(closest) >= 0.0) return Classification::Outside;
  }
  return derive(cell, cut_cell(cell, domain, max_depth));
}

CutGeometry tessellate(const Cell& cell, const ImplicitDomain& domain, int max_depth) {
  if (max_depth < 0) throw ContractViolation("tessellation depth must be non-negative");
  check_cell(cell);
  CutGeometry geo = cut_cell(cell, domain, max_depth);
  if (derive(cell, geo) != Classification::Cut) {
    throw ContractViolation("tessellate called on element " + std::to_string(cell.id) +
                            " which is not cut");
  }
  return geo;
}

CutGeometry clip_by_half_plane(const Cell& cell, const Facet& facet) {
  check_cell(cell);
  const Facet facets[] = {facet};
  return polygon_cut(cell, facets, {facet.bc});
}

}  // namespace unfitted
