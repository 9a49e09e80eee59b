#pragma once

#include <cmath>
#include <vector>

namespace pneufab::geom {

/// Two coordinates closer than this are the same point (mm).
inline constexpr double kCoordEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  Point operator*(double k) const { return {x * k, y * k}; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Ordered vertices; a closed polyline does not repeat its first point.
struct Polyline {
  std::vector<Point> points;
  bool closed = false;

  friend bool operator==(const Polyline&, const Polyline&) = default;
  std::size_t segment_count() const {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
  }
  Point segment_start(std::size_t i) const { return points[i]; }
  Point segment_end(std::size_t i) const { return points[(i + 1) % points.size()]; }
};

/// Closed simple ring, counterclockwise when normalized.
struct Polygon {
  std::vector<Point> points;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct Box {
  Point min{};
  Point max{};
};

Polyline as_polyline(const Polygon& p);
Polygon rectangle(double x0, double y0, double x1, double y1);

/// At least two points and no consecutive duplicates (closing pair included).
bool is_valid(const Polyline& p);
bool is_simple(const Polygon& p);

double length(const Polyline& p);
double signed_area(const Polygon& p);
inline double area(const Polygon& p) { return std::abs(signed_area(p)); }
double perimeter(const Polygon& p);
Polygon counterclockwise(Polygon p);

Box bounds(const std::vector<Point>& pts);
Box bounds(const Polyline& p);
Box bounds(const Polygon& p);
Box merge(Box a, Box b);

/// Exact sign of the orientation determinant: +1 left turn, -1 right, 0 collinear.
int orientation(Point a, Point b, Point c);

double point_segment_distance(Point p, Point a, Point b);
/// Touching (inclusive of endpoints) or crossing, decided with exact
/// orientation signs; points within kCoordEps count as touching.
bool segments_intersect(Point a0, Point a1, Point b0, Point b1);
double segment_distance(Point a0, Point a1, Point b0, Point b1);

/// Minimum Euclidean distance between the two point sets; 0 when they touch.
double min_distance(const Polyline& a, const Polyline& b);
double min_distance(Point p, const Polyline& b);
bool intersects(const Polyline& a, const Polyline& b);

enum class Location { Inside, Boundary, Outside };
/// Even-odd classification with a kCoordEps boundary band.
Location contains(const Polygon& poly, Point p);

/// Minkowski offset with round joins. d > 0 grows, d < 0 shrinks; the result
/// may be empty or have several parts, each a simple CCW ring. Holes that
/// growing a concave ring can enclose are not represented.
/// Throws E_DEGENERATE when the input area is below 1e-6 mm^2.
std::vector<Polygon> offset(const Polygon& poly, double d);

/// Keeps the part of a convex polygon where dot(p - on_line, normal) >= 0.
Polygon clip_halfplane(const Polygon& convex, Point on_line, Point normal);

/// Distance along a closed polyline from its first vertex to the foot of the
/// perpendicular from `p`; `dist` receives the perpendicular distance.
double arc_position(const Polyline& loop, Point p, double* dist = nullptr);

/// Point at arc length `s` along the polyline (clamped, wrapping if closed).
Point point_at(const Polyline& p, double s);

Point translate(Point p, Point by);
Polyline translate(Polyline p, Point by);
Polygon translate(Polygon p, Point by);

}  // namespace pneufab::geom
