#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace diskpart {

/// Incidence / orthogonality tolerance shared by every exact construction.
inline constexpr double kTolGeom = 1e-9;
/// Below this magnitude a curvature is treated as a straight segment.
inline constexpr double kStraightCurvature = 1e-10;
inline constexpr double kPi = 3.14159265358979323846;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DomainError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class TopologyError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class PoleError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator-() const { return {-x, -y}; }
  constexpr Point operator*(double s) const { return {x * s, y * s}; }
  constexpr Point operator/(double s) const { return {x / s, y / s}; }
  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Point&) const = default;
};

inline constexpr Point operator*(double s, Point p) { return p * s; }
inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
/// Counterclockwise quarter turn.
inline constexpr Point perp(Point a) { return {-a.y, a.x}; }
inline Point normalized(Point a) { return a / norm(a); }
inline Point rotate(Point a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline Point unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline std::complex<double> to_complex(Point p) { return {p.x, p.y}; }
inline Point to_point(std::complex<double> z) { return {z.real(), z.imag()}; }
inline bool on_unit_circle(Point p, double tol = kTolGeom) { return std::abs(norm(p) - 1.0) <= tol; }
/// Unsigned angle in [0, pi] between two nonzero vectors.
double angle_between(Point a, Point b);
/// Wraps an angle into [0, 2pi).
double wrap_angle(double a);

/// Circular arc (or segment when h == 0) from p0 to p1. The curvature h is signed
/// with respect to the left normal of the p0 -> p1 direction of travel; arcs are
/// always the minor arc of their supporting circle.
struct ArcEdge {
  Point p0;
  Point p1;
  double h = 0.0;
};

void validate(const ArcEdge& e);
bool is_straight(const ArcEdge& e);
double chord_length(const ArcEdge& e);
double radius(const ArcEdge& e);
/// Angle subtended at the center (0 for segments).
double central_angle(const ArcEdge& e);
std::optional<Point> center(const ArcEdge& e);
double arc_length(const ArcEdge& e);
/// Point at arc-length fraction s in [0, 1].
Point point_at(const ArcEdge& e, double s);
/// Unit tangent (direction of travel) at arc-length fraction s.
Point tangent_at(const ArcEdge& e, double s);
/// Unit left normal at arc-length fraction s; h is the curvature along this normal.
Point normal_at(const ArcEdge& e, double s);
ArcEdge reversed(const ArcEdge& e);
ArcEdge rotated(const ArcEdge& e, double angle);
/// Signed area between the chord and the arc, positive when the arc bulges to the
/// right of the direction of travel (h > 0).
double segment_area(const ArcEdge& e);

/// Counterclockwise (sweep > 0) or clockwise piece of the unit circle.
struct BoundaryArc {
  double theta0 = 0.0;
  double sweep = 0.0;

  Point start() const { return unit_vector(theta0); }
  Point end() const { return unit_vector(theta0 + sweep); }
};

using PolygonPiece = std::variant<ArcEdge, BoundaryArc>;

/// Closed counterclockwise cycle of arcs.
struct ArcPolygon {
  std::vector<PolygonPiece> pieces;
};

Point piece_start(const PolygonPiece& p);
Point piece_end(const PolygonPiece& p);
double arc_polygon_area(const ArcPolygon& poly, double tol = kTolGeom);

/// z -> (a z + b) / (c z + d).
struct MobiusMap {
  std::complex<double> a{1.0, 0.0};
  std::complex<double> b{0.0, 0.0};
  std::complex<double> c{0.0, 0.0};
  std::complex<double> d{1.0, 0.0};

  std::complex<double> operator()(std::complex<double> z) const;
  Point operator()(Point p) const { return to_point((*this)(to_complex(p))); }
  MobiusMap inverse() const;
  bool near_pole(std::complex<double> z, double tol = 1e-12) const;
};

MobiusMap identity_map();
/// z -> i (z + q) / (q - z): sends the unit disk to the upper half-plane and q to infinity.
MobiusMap disk_to_halfplane(Point q);

/// Image of an arc under a Mobius map, described by three image points and the
/// supporting circle (or line).
struct ImageArc {
  Point start;
  Point through;
  Point end;
  double curvature = 0.0;  // signed w.r.t. the left normal of start -> end travel
  bool straight = false;
  Point center;             // valid when !straight
  double radius = 0.0;      // valid when !straight

  /// True when the image is the minor arc between start and end.
  bool is_minor() const;
  ArcEdge to_edge() const;
};

ImageArc mobius_image_arc(const MobiusMap& m, const ArcEdge& e);

/// Signed curvature of the circle through a -> b -> c (positive for a left turn).
double three_point_curvature(Point a, Point b, Point c);
std::optional<Point> circumcenter(Point a, Point b, Point c);

/// Residual |angle - pi/2| between the arc and the unit circle at the endpoint(s)
/// lying on it; the larger one when both endpoints are on the circle.
double meets_unit_circle_orthogonally(const ArcEdge& e, double tol = kTolGeom);

/// Same supporting circle (or the same line for segments).
bool cocircular(const ArcEdge& e1, const ArcEdge& e2, double tol = kTolGeom);
/// Both curved with centers within tol (radii may differ).
bool concentric(const ArcEdge& e1, const ArcEdge& e2, double tol = kTolGeom);

/// The arc leaving `start` in direction `dir` that meets the unit circle
/// orthogonally, ending on the circle. Throws DomainError if that arc is longer
/// than half its circle or start is not interior.
ArcEdge orthogonal_arc_from(Point start, Point dir);

/// Algebraic least-squares circle through an ordered polyline.
struct CircleFit {
  bool straight = false;
  Point center;
  double radius = 0.0;
  double curvature = 0.0;   // signed w.r.t. the left normal of the polyline direction
  double rms_residual = 0.0;
};

CircleFit fit_circle(std::span<const Point> pts);

}  // namespace diskpart
