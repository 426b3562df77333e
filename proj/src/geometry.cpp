#include "diskpart/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace diskpart {

namespace {

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

double angle_between(Point a, Point b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

void validate(const ArcEdge& e) {
  if (!std::isfinite(e.p0.x) || !std::isfinite(e.p0.y) || !std::isfinite(e.p1.x) ||
      !std::isfinite(e.p1.y) || !std::isfinite(e.h))
    throw DomainError("arc edge has non-finite data");
  const double c = chord_length(e);
  if (c <= 0.0) throw DomainError("arc edge endpoints coincide");
  if (std::abs(e.h) * c / 2.0 > 1.0 + kTolGeom)
    throw DomainError("arc curvature too large for its chord");
}

bool is_straight(const ArcEdge& e) { return std::abs(e.h) < kStraightCurvature; }

double chord_length(const ArcEdge& e) { return distance(e.p0, e.p1); }

double radius(const ArcEdge& e) {
  return is_straight(e) ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(e.h);
}

double central_angle(const ArcEdge& e) {
  if (is_straight(e)) return 0.0;
  const double s = std::min(1.0, std::abs(e.h) * chord_length(e) / 2.0);
  return 2.0 * std::asin(s);
}

std::optional<Point> center(const ArcEdge& e) {
  if (is_straight(e)) return std::nullopt;
  const double c = chord_length(e);
  const double r = 1.0 / std::abs(e.h);
  const Point mid = (e.p0 + e.p1) * 0.5;
  const Point n = perp(e.p1 - e.p0) / c;
  const double off = std::sqrt(std::max(r * r - c * c / 4.0, 0.0));
  return mid + n * (sign_of(e.h) * off);
}

double arc_length(const ArcEdge& e) {
  validate(e);
  const double c = chord_length(e);
  if (is_straight(e)) return c;
  return (2.0 / std::abs(e.h)) * std::asin(std::min(1.0, std::abs(e.h) * c / 2.0));
}

Point point_at(const ArcEdge& e, double s) {
  if (s == 0.0) return e.p0;
  if (s == 1.0) return e.p1;
  if (is_straight(e)) return e.p0 + (e.p1 - e.p0) * s;
  const Point c = *center(e);
  const double r = 1.0 / std::abs(e.h);
  const double a0 = std::atan2(e.p0.y - c.y, e.p0.x - c.x);
  const double a = a0 + sign_of(e.h) * s * central_angle(e);
  return c + unit_vector(a) * r;
}

Point tangent_at(const ArcEdge& e, double s) {
  const Point chord = normalized(e.p1 - e.p0);
  if (is_straight(e)) return chord;
  // A left-curving arc starts to the right of its chord and turns through the central angle.
  const double theta = central_angle(e);
  return rotate(chord, sign_of(e.h) * theta * (s - 0.5));
}

Point normal_at(const ArcEdge& e, double s) { return perp(tangent_at(e, s)); }

ArcEdge reversed(const ArcEdge& e) { return {e.p1, e.p0, -e.h}; }

ArcEdge rotated(const ArcEdge& e, double angle) {
  return {rotate(e.p0, angle), rotate(e.p1, angle), e.h};
}

double segment_area(const ArcEdge& e) {
  if (is_straight(e)) return 0.0;
  const double r = 1.0 / std::abs(e.h);
  const double theta = central_angle(e);
  return sign_of(e.h) * r * r * (theta - std::sin(theta)) / 2.0;
}

Point piece_start(const PolygonPiece& p) {
  return std::visit([](const auto& x) -> Point {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ArcEdge>) return x.p0;
    else return x.start();
  }, p);
}

Point piece_end(const PolygonPiece& p) {
  return std::visit([](const auto& x) -> Point {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ArcEdge>) return x.p1;
    else return x.end();
  }, p);
}

double arc_polygon_area(const ArcPolygon& poly, double tol) {
  if (poly.pieces.empty()) throw TopologyError("empty arc polygon");
  const std::size_t n = poly.pieces.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = piece_end(poly.pieces[i]);
    const Point b = piece_start(poly.pieces[(i + 1) % n]);
    if (distance(a, b) > tol) throw TopologyError("arc polygon does not close");
  }
  double area = 0.0;
  for (const auto& piece : poly.pieces) {
    if (const auto* e = std::get_if<ArcEdge>(&piece)) {
      area += cross(e->p0, e->p1) / 2.0 + segment_area(*e);
    } else {
      area += std::get<BoundaryArc>(piece).sweep / 2.0;
    }
  }
  return area;
}

std::complex<double> MobiusMap::operator()(std::complex<double> z) const {
  const auto den = c * z + d;
  if (std::abs(den) < 1e-300) throw PoleError("point maps to infinity");
  return (a * z + b) / den;
}

MobiusMap MobiusMap::inverse() const { return {d, -b, -c, a}; }

bool MobiusMap::near_pole(std::complex<double> z, double tol) const {
  return std::abs(c * z + d) <= tol * (std::abs(c) + std::abs(d));
}

MobiusMap identity_map() { return {}; }

MobiusMap disk_to_halfplane(Point q) {
  if (!on_unit_circle(q)) throw DomainError("Mobius pole must lie on the unit circle");
  const std::complex<double> i{0.0, 1.0};
  const auto qc = to_complex(q);
  return {i, i * qc, {-1.0, 0.0}, qc};
}

double three_point_curvature(Point a, Point b, Point c) {
  const double den = distance(a, b) * distance(b, c) * distance(a, c);
  if (den == 0.0) throw DomainError("degenerate point triple");
  return 2.0 * cross(b - a, c - b) / den;
}

std::optional<Point> circumcenter(Point a, Point b, Point c) {
  const double d = 2.0 * cross(b - a, c - a);
  const double scale = std::max({distance(a, b), distance(b, c), distance(a, c)});
  if (std::abs(d) <= 1e-14 * scale * scale) return std::nullopt;
  const Point ba = b - a, ca = c - a;
  const double nb = dot(ba, ba), nc = dot(ca, ca);
  return a + Point{ca.y * nb - ba.y * nc, ba.x * nc - ca.x * nb} / d;
}

bool ImageArc::is_minor() const {
  if (straight) return true;
  // The through-point lies on the arc; the arc is minor when it sits on the side
  // of the chord away from the center.
  return cross(end - start, through - start) * cross(end - start, center - start) <= 0.0;
}

ArcEdge ImageArc::to_edge() const {
  if (!is_minor()) throw DomainError("image arc exceeds a half circle");
  return {start, end, straight ? 0.0 : curvature};
}

ImageArc mobius_image_arc(const MobiusMap& m, const ArcEdge& e) {
  const Point mid = point_at(e, 0.5);
  for (Point p : {e.p0, mid, e.p1})
    if (m.near_pole(to_complex(p), 1e-12)) throw PoleError("arc passes through the pole");
  // Any interior point on the pole would split the image; sample densely.
  for (int k = 1; k < 64; ++k)
    if (m.near_pole(to_complex(point_at(e, k / 64.0)), 1e-9))
      throw PoleError("arc passes through the pole");
  ImageArc img;
  img.start = m(e.p0);
  img.through = m(mid);
  img.end = m(e.p1);
  const auto cc = circumcenter(img.start, img.through, img.end);
  if (!cc) {
    img.straight = true;
    return img;
  }
  img.center = *cc;
  img.radius = distance(*cc, img.start);
  img.curvature = three_point_curvature(img.start, img.through, img.end);
  if (std::abs(img.curvature) < kStraightCurvature) img.straight = true;
  return img;
}

double meets_unit_circle_orthogonally(const ArcEdge& e, double tol) {
  double worst = -1.0;
  auto check = [&](Point p, Point t) {
    const Point bt = perp(p);
    const double ang = angle_between(t, bt);
    worst = std::max(worst, std::abs(ang - kPi / 2.0));
  };
  if (on_unit_circle(e.p0, tol)) check(e.p0, tangent_at(e, 0.0));
  if (on_unit_circle(e.p1, tol)) check(e.p1, tangent_at(e, 1.0));
  if (worst < 0.0) throw DomainError("arc has no endpoint on the unit circle");
  return worst;
}

bool cocircular(const ArcEdge& e1, const ArcEdge& e2, double tol) {
  const bool s1 = is_straight(e1), s2 = is_straight(e2);
  if (s1 != s2) return false;
  if (s1) {
    const Point d = normalized(e1.p1 - e1.p0);
    return std::abs(cross(d, e2.p0 - e1.p0)) <= tol && std::abs(cross(d, e2.p1 - e1.p0)) <= tol;
  }
  return distance(*center(e1), *center(e2)) <= tol && std::abs(radius(e1) - radius(e2)) <= tol;
}

bool concentric(const ArcEdge& e1, const ArcEdge& e2, double tol) {
  if (is_straight(e1) || is_straight(e2)) return false;
  return distance(*center(e1), *center(e2)) <= tol;
}

ArcEdge orthogonal_arc_from(Point start, Point dir) {
  const double s2 = dot(start, start);
  if (s2 >= 1.0) throw DomainError("orthogonal arc must start inside the disk");
  dir = normalized(dir);
  const Point n = perp(dir);
  const double k = dot(start, n);
  const double h = 2.0 * k / (1.0 - s2);  // signed curvature of the orthogonal circle
  if (std::abs(h) < kStraightCurvature) {
    const double b = dot(start, dir);
    const double t = -b + std::sqrt(b * b + 1.0 - s2);
    return {start, normalized(start + dir * t), 0.0};
  }
  const double r = 1.0 / std::abs(h);
  const double sgn = sign_of(h);
  const Point c = start + n * (sgn * r);
  const double c2 = dot(c, c);
  const Point base = c / c2;
  const Point off = perp(c) * (std::sqrt(std::max(0.0, 1.0 - 1.0 / c2)) / std::sqrt(c2));
  const double a_start = std::atan2(start.y - c.y, start.x - c.x);
  double best_sweep = 1e300;
  Point best;
  for (Point p : {base + off, base - off}) {
    const double a = std::atan2(p.y - c.y, p.x - c.x);
    const double sweep = wrap_angle(sgn * (a - a_start));
    if (sweep < best_sweep) {
      best_sweep = sweep;
      best = p;
    }
  }
  if (best_sweep > kPi) throw DomainError("orthogonal arc exceeds a half circle");
  return {start, best / norm(best), h};
}

CircleFit fit_circle(std::span<const Point> pts) {
  if (pts.size() < 2) throw DomainError("circle fit needs at least two points");
  CircleFit fit;
  const Point a = pts.front(), b = pts.back();
  const Point d = normalized(b - a);
  double dev = 0.0;
  for (Point p : pts) dev = std::max(dev, std::abs(cross(d, p - a)));
  const double scale = distance(a, b);
  if (pts.size() < 3 || dev <= 1e-12 * std::max(scale, 1e-300)) {
    fit.straight = true;
    return fit;
  }
  Point mean;
  for (Point p : pts) mean += p;
  mean = mean / static_cast<double>(pts.size());
  Eigen::MatrixXd A(pts.size(), 3);
  Eigen::VectorXd rhs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point q = pts[i] - mean;
    A(i, 0) = q.x;
    A(i, 1) = q.y;
    A(i, 2) = 1.0;
    rhs(i) = -(q.x * q.x + q.y * q.y);
  }
  const Eigen::Vector3d sol = A.colPivHouseholderQr().solve(rhs);
  const Point c{-sol(0) / 2.0, -sol(1) / 2.0};
  const double r2 = dot(c, c) - sol(2);
  if (!(r2 > 0.0) || std::sqrt(r2) > 1e10 * std::max(scale, 1e-300)) {
    fit.straight = true;
    return fit;
  }
  fit.center = c + mean;
  fit.radius = std::sqrt(r2);
  // Orientation from the overall turning direction.
  double turn = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) turn += cross(pts[i] - pts[i - 1], pts[i + 1] - pts[i]);
  fit.curvature = sign_of(turn) / fit.radius;
  double ss = 0.0;
  for (Point p : pts) {
    const double r = distance(p, fit.center) - fit.radius;
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
  return fit;
}

}  // namespace diskpart
