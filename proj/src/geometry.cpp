#include "pneufab/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <tuple>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "pneufab/error.hpp"

namespace pneufab::geom {

Polyline as_polyline(const Polygon& p) { return Polyline{p.points, true}; }

Polygon rectangle(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

bool is_valid(const Polyline& p) {
  if (p.points.size() < 2) return false;
  for (const Point& q : p.points)
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) return false;
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    if (distance(p.segment_start(i), p.segment_end(i)) <= kCoordEps) return false;
  }
  return true;
}

bool is_simple(const Polygon& poly) {
  const Polyline ring = as_polyline(poly);
  if (!is_valid(ring) || poly.points.size() < 3) return false;
  const std::size_t n = ring.segment_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(ring.segment_start(i), ring.segment_end(i), ring.segment_start(j),
                             ring.segment_end(j)))
        return false;
    }
  }
  return true;
}

double length(const Polyline& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.segment_count(); ++i)
    total += distance(p.segment_start(i), p.segment_end(i));
  return total;
}

double signed_area(const Polygon& p) {
  double twice = 0.0;
  const std::size_t n = p.points.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(p.points[i], p.points[(i + 1) % n]);
  return 0.5 * twice;
}

double perimeter(const Polygon& p) { return length(as_polyline(p)); }

Polygon counterclockwise(Polygon p) {
  if (signed_area(p) < 0.0) std::reverse(p.points.begin(), p.points.end());
  return p;
}

Box bounds(const std::vector<Point>& pts) {
  Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
        {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Point& q : pts) {
    b.min.x = std::min(b.min.x, q.x);
    b.min.y = std::min(b.min.y, q.y);
    b.max.x = std::max(b.max.x, q.x);
    b.max.y = std::max(b.max.y, q.y);
  }
  return b;
}
Box bounds(const Polyline& p) { return bounds(p.points); }
Box bounds(const Polygon& p) { return bounds(p.points); }
Box merge(Box a, Box b) {
  return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y)},
          {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y)}};
}

// ---------------------------------------------------------------------------
// Orientation: floating-point filter, exact expansion arithmetic on failure.

namespace {

struct Pair {
  double hi;
  double lo;
};

Pair two_sum(double a, double b) {
  const double x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  return {x, (a - av) + (b - bv)};
}

Pair two_diff(double a, double b) {
  const double x = a - b;
  const double bv = a - x;
  const double av = x + bv;
  return {x, (a - av) + (bv - b)};
}

Pair two_prod(double a, double b) {
  const double x = a * b;
  return {x, std::fma(a, b, -x)};
}

// Adds `b` into a nonoverlapping expansion kept in increasing magnitude.
void grow_expansion(std::vector<double>& e, double b) {
  double q = b;
  std::vector<double> out;
  out.reserve(e.size() + 1);
  for (double comp : e) {
    const Pair s = two_sum(q, comp);
    q = s.hi;
    if (s.lo != 0.0) out.push_back(s.lo);
  }
  if (q != 0.0) out.push_back(q);
  e.swap(out);
}

int exact_orientation(Point a, Point b, Point c) {
  const Pair acx = two_diff(a.x, c.x);
  const Pair acy = two_diff(a.y, c.y);
  const Pair bcx = two_diff(b.x, c.x);
  const Pair bcy = two_diff(b.y, c.y);
  std::vector<double> terms;
  for (double u : {acx.hi, acx.lo}) {
    for (double v : {bcy.hi, bcy.lo}) {
      const Pair p = two_prod(u, v);
      terms.push_back(p.hi);
      terms.push_back(p.lo);
    }
  }
  for (double u : {acy.hi, acy.lo}) {
    for (double v : {bcx.hi, bcx.lo}) {
      const Pair p = two_prod(u, v);
      terms.push_back(-p.hi);
      terms.push_back(-p.lo);
    }
  }
  std::vector<double> e;
  for (double t : terms)
    if (t != 0.0) grow_expansion(e, t);
  if (e.empty()) return 0;
  return e.back() > 0.0 ? 1 : -1;
}

}  // namespace

int orientation(Point a, Point b, Point c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  constexpr double eps = std::numeric_limits<double>::epsilon() * 0.5;
  const double bound = (3.0 + 16.0 * eps) * eps * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orientation(a, b, c);
}

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

namespace {

bool on_segment_collinear(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

double endpoint_distance(Point a0, Point a1, Point b0, Point b1) {
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

}  // namespace

bool segments_intersect(Point a0, Point a1, Point b0, Point b1) {
  const int o1 = orientation(a0, a1, b0);
  const int o2 = orientation(a0, a1, b1);
  const int o3 = orientation(b0, b1, a0);
  const int o4 = orientation(b0, b1, a1);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment_collinear(b0, a0, a1)) return true;
  if (o2 == 0 && on_segment_collinear(b1, a0, a1)) return true;
  if (o3 == 0 && on_segment_collinear(a0, b0, b1)) return true;
  if (o4 == 0 && on_segment_collinear(a1, b0, b1)) return true;
  return endpoint_distance(a0, a1, b0, b1) <= kCoordEps;
}

double segment_distance(Point a0, Point a1, Point b0, Point b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return endpoint_distance(a0, a1, b0, b1);
}

double min_distance(const Polyline& a, const Polyline& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.segment_count(); ++i) {
    for (std::size_t j = 0; j < b.segment_count(); ++j) {
      best = std::min(best, segment_distance(a.segment_start(i), a.segment_end(i),
                                             b.segment_start(j), b.segment_end(j)));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

double min_distance(Point p, const Polyline& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < b.segment_count(); ++j)
    best = std::min(best, point_segment_distance(p, b.segment_start(j), b.segment_end(j)));
  if (b.points.size() == 1) best = distance(p, b.points.front());
  return best;
}

bool intersects(const Polyline& a, const Polyline& b) {
  for (std::size_t i = 0; i < a.segment_count(); ++i)
    for (std::size_t j = 0; j < b.segment_count(); ++j)
      if (segments_intersect(a.segment_start(i), a.segment_end(i), b.segment_start(j),
                             b.segment_end(j)))
        return true;
  return false;
}

Location contains(const Polygon& poly, Point p) {
  const std::size_t n = poly.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly.points[i], poly.points[(i + 1) % n]) <= kCoordEps)
      return Location::Boundary;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly.points[j];
    const Point& b = poly.points[i];
    if ((a.y > p.y) != (b.y > p.y)) {
      // Edge straddles the horizontal ray; count it if it passes right of p.
      const int o = orientation(a, b, p);
      const bool upward = b.y > a.y;
      if ((upward && o > 0) || (!upward && o < 0)) inside = !inside;
    }
  }
  return inside ? Location::Inside : Location::Outside;
}

// ---------------------------------------------------------------------------
// Offsetting is delegated to Boost.Geometry's buffer algorithm.

namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint>;  // clockwise, closed
using BMulti = bg::model::multi_polygon<BPolygon>;

// Sagitta of the round-join chords.
constexpr double kChordTolerance = 1e-4;

int points_per_circle(double d) {
  const double r = std::abs(d);
  const double half_angle = std::acos(std::max(-1.0, 1.0 - kChordTolerance / r));
  const int n = static_cast<int>(std::ceil(std::numbers::pi / half_angle));
  return std::clamp(n, 16, 8192);
}

Polygon from_ring(const BPolygon::ring_type& ring) {
  Polygon out;
  for (const BPoint& q : ring) {
    const Point p{q.x(), q.y()};
    if (!out.points.empty() && distance(out.points.back(), p) <= kCoordEps) continue;
    out.points.push_back(p);
  }
  while (out.points.size() > 1 && distance(out.points.front(), out.points.back()) <= kCoordEps)
    out.points.pop_back();
  return counterclockwise(std::move(out));
}

}  // namespace

std::vector<Polygon> offset(const Polygon& poly, double d) {
  if (poly.points.size() < 3 || area(poly) < 1e-6) {
    throw Error(ErrorCode::Degenerate, "polygon area below 1e-6 mm^2");
  }
  if (d == 0.0) return {counterclockwise(poly)};

  BPolygon in;
  const Polygon ccw = counterclockwise(poly);
  for (auto it = ccw.points.rbegin(); it != ccw.points.rend(); ++it)
    in.outer().emplace_back(it->x, it->y);
  in.outer().emplace_back(ccw.points.back().x, ccw.points.back().y);
  bg::correct(in);

  const int n = points_per_circle(d);
  bg::strategy::buffer::distance_symmetric<double> dist(d);
  bg::strategy::buffer::join_round join(n);
  bg::strategy::buffer::end_round end(n);
  bg::strategy::buffer::point_circle circle(n);
  bg::strategy::buffer::side_straight side;
  BMulti result;
  bg::buffer(in, result, dist, side, join, end, circle);

  // Shrinking a densely sampled ring can leave stray slivers near its
  // boundary; a true inward offset keeps every vertex |d| inside.
  const Polyline boundary = as_polyline(ccw);
  auto genuine = [&](const Polygon& p) {
    if (d > 0.0) return true;
    for (const Point& v : p.points) {
      if (contains(ccw, v) != Location::Inside) return false;
      if (min_distance(v, boundary) < -d - 2 * kChordTolerance) return false;
    }
    return true;
  };

  std::vector<Polygon> out;
  for (const BPolygon& part : result) {
    Polygon p = from_ring(part.outer());
    if (p.points.size() >= 3 && area(p) > 0.0 && genuine(p)) out.push_back(std::move(p));
  }
  // Deterministic order: by lowest-left vertex.
  std::sort(out.begin(), out.end(), [](const Polygon& a, const Polygon& b) {
    const Box ba = bounds(a), bb = bounds(b);
    return std::tie(ba.min.x, ba.min.y) < std::tie(bb.min.x, bb.min.y);
  });
  return out;
}

Polygon clip_halfplane(const Polygon& convex, Point on_line, Point normal) {
  Polygon out;
  const std::size_t n = convex.points.size();
  auto side = [&](Point p) { return dot(p - on_line, normal); };
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = convex.points[i];
    const Point b = convex.points[(i + 1) % n];
    const double sa = side(a), sb = side(b);
    if (sa >= 0.0) out.points.push_back(a);
    if ((sa >= 0.0) != (sb >= 0.0)) {
      const double t = sa / (sa - sb);
      out.points.push_back(a + (b - a) * t);
    }
  }
  // Drop duplicates introduced by vertices lying on the line.
  Polygon clean;
  for (const Point& p : out.points)
    if (clean.points.empty() || distance(clean.points.back(), p) > kCoordEps) clean.points.push_back(p);
  while (clean.points.size() > 1 && distance(clean.points.front(), clean.points.back()) <= kCoordEps)
    clean.points.pop_back();
  return clean;
}

double arc_position(const Polyline& loop, Point p, double* dist) {
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < loop.segment_count(); ++i) {
    const Point a = loop.segment_start(i);
    const Point b = loop.segment_end(i);
    const Point ab = b - a;
    const double len = norm(ab);
    const double t = len > 0.0 ? std::clamp(dot(p - a, ab) / (len * len), 0.0, 1.0) : 0.0;
    const double d = distance(p, a + ab * t);
    if (d < best - kCoordEps) {
      best = d;
      best_s = s + t * len;
    }
    s += len;
  }
  if (dist) *dist = best;
  const double total = s;
  if (loop.closed && total > 0.0 && best_s >= total - kCoordEps) best_s = 0.0;
  return best_s;
}

Point point_at(const Polyline& p, double s) {
  const double total = length(p);
  if (p.closed && total > 0.0) {
    s = std::fmod(s, total);
    if (s < 0.0) s += total;
  }
  s = std::clamp(s, 0.0, total);
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const Point a = p.segment_start(i);
    const Point b = p.segment_end(i);
    const double len = distance(a, b);
    if (s <= len) return a + (b - a) * (len > 0.0 ? s / len : 0.0);
    s -= len;
  }
  return p.closed ? p.points.front() : p.points.back();
}

Point translate(Point p, Point by) { return p + by; }
Polyline translate(Polyline p, Point by) {
  for (Point& q : p.points) q = q + by;
  return p;
}
Polygon translate(Polygon p, Point by) {
  for (Point& q : p.points) q = q + by;
  return p;
}

}  // namespace pneufab::geom
