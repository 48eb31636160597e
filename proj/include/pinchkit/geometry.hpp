// Planar convex-polygon helpers over complex numbers.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace pinchkit::geometry {

using Point = std::complex<double>;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

/// Indices of the convex hull of `pts` in counter-clockwise order, collinear
/// points dropped (Andrew's monotone chain).
inline std::vector<std::size_t> convex_hull(const std::vector<Point>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].real() != pts[b].real()) return pts[a].real() < pts[b].real();
    return pts[a].imag() < pts[b].imag();
  });
  order.erase(std::unique(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
              order.end());
  if (order.size() < 3) return order;
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && cross(pts[hull[k - 1]] - pts[hull[k - 2]], pts[i] - pts[hull[k - 2]]) <= 0.0) --k;
    hull[k++] = i;
  }
  for (std::size_t j = order.size() - 1, lower = k + 1; j-- > 0;) {
    const std::size_t i = order[j];
    while (k >= lower && cross(pts[hull[k - 1]] - pts[hull[k - 2]], pts[i] - pts[hull[k - 2]]) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

/// Signed distance from z to the boundary of a CCW convex polygon; positive inside.
inline double interior_margin(const std::vector<Point>& poly, Point z) {
  double margin = std::numeric_limits<double>::infinity();
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % m];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    margin = std::min(margin, cross(b - a, z - a) / len);
  }
  return margin;
}

/// Distance from z to segment [a, b].
inline double segment_distance(Point a, Point b, Point z) {
  const Point d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

/// Distance from z to a convex polygon (zero inside).
inline double distance_to_polygon(const std::vector<Point>& poly, Point z) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return std::abs(z - poly[0]);
  if (poly.size() >= 3 && interior_margin(poly, z) >= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, segment_distance(poly[i], poly[(i + 1) % poly.size()], z));
  return best;
}

/// Largest distance of any vertex from the line through the two most distant vertices.
inline double thickness(const std::vector<Point>& pts, std::size_t* far_a = nullptr, std::size_t* far_b = nullptr) {
  std::size_t ia = 0, ib = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) > best) {
        best = std::abs(pts[i] - pts[j]);
        ia = i;
        ib = j;
      }
  if (far_a) *far_a = ia;
  if (far_b) *far_b = ib;
  if (pts.size() < 3 || best <= 0.0) return 0.0;
  const Point d = pts[ib] - pts[ia];
  double width = 0.0;
  for (const auto& p : pts) width = std::max(width, std::abs(cross(d, p - pts[ia])) / std::abs(d));
  return width;
}

/// Cross-product convexity test on a closed vertex sequence: no turn may be
/// clockwise by more than `tol` (scaled by edge lengths).
inline bool is_convex_ccw(const std::vector<Point>& poly, double tol) {
  const std::size_t m = poly.size();
  if (m < 3) return true;
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % m];
    const Point c = poly[(i + 2) % m];
    const double la = std::abs(b - a);
    const double lb = std::abs(c - b);
    if (la <= tol || lb <= tol) continue;
    if (cross(b - a, c - b) < -tol * std::max(la, lb)) return false;
  }
  return true;
}

}  // namespace pinchkit::geometry
