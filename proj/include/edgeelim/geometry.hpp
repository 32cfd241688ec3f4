#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeelim {

/// Global tolerance for equality and degeneracy tests.
inline constexpr double kEps = 1e-12;

class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

inline double norm(Point a) { return std::hypot(a.x, a.y); }

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Segment {
    Point p;
    Point q;

    double length() const { return dist(p, q); }
};

/// Coordinate frame attached to the line through a segment pq. Every query is
/// relative to the infinite line, not the closed segment.
class ProjectedFrame {
public:
    explicit ProjectedFrame(Segment s);

    const Segment& segment() const { return seg_; }
    Point direction() const { return dir_; }

    /// Foot of the perpendicular from x onto line pq.
    Point project(Point x) const;
    /// Coordinate of x along pq, measured from p (p -> 0, q -> |pq|).
    double along(Point x) const { return dot(x - seg_.p, dir_); }
    /// Signed distance from line pq; positive on the left of p -> q.
    double signed_offset(Point x) const { return cross(dir_, x - seg_.p); }
    double distance_to_line(Point x) const { return std::abs(signed_offset(x)); }

    double dist_x(Point a, Point b) const { return std::abs(along(a) - along(b)); }
    double dist_y(Point a, Point b) const {
        return std::abs(distance_to_line(a) - distance_to_line(b));
    }

private:
    Segment seg_;
    Point dir_;
};

/// Intersection of the ray r -> t with the circle of radius delta around r.
Point ray_circle_point(Point r, Point t, double delta);

/// Intersection points of two circles. Two-point results list the point on
/// the left of the directed line c1 -> c2 first. Throws on coincident circles.
std::vector<Point> circle_circle_intersection(Point c1, double r1, Point c2, double r2);

/// Angle a-vertex-b in [0, pi].
double angle(Point a, Point vertex, Point b);

/// Reflection of x through the point center (2*center - x).
constexpr Point reflect_through(Point x, Point center) { return {2.0 * center.x - x.x, 2.0 * center.y - x.y}; }

}  // namespace edgeelim
