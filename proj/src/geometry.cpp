#include "edgeelim/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace edgeelim {

ProjectedFrame::ProjectedFrame(Segment s) : seg_(s) {
    if (!s.p.finite() || !s.q.finite()) {
        throw GeometryError("segment endpoints must be finite");
    }
    const double len = s.length();
    if (len <= kEps) {
        throw GeometryError("degenerate segment: endpoints coincide");
    }
    dir_ = (1.0 / len) * (s.q - s.p);
}

Point ProjectedFrame::project(Point x) const { return seg_.p + along(x) * dir_; }

Point ray_circle_point(Point r, Point t, double delta) {
    if (!(delta > 0.0)) {
        throw GeometryError("ray_circle_point: radius must be positive");
    }
    const Point d = t - r;
    const double len = norm(d);
    if (len <= kEps) {
        throw GeometryError("ray_circle_point: degenerate ray (t == r)");
    }
    return r + (delta / len) * d;
}

std::vector<Point> circle_circle_intersection(Point c1, double r1, Point c2, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
        throw GeometryError("circle_circle_intersection: radii must be positive");
    }
    const Point d = c2 - c1;
    const double D = norm(d);
    if (D <= kEps) {
        if (std::abs(r1 - r2) <= kEps) {
            throw GeometryError("circle_circle_intersection: identical circles");
        }
        return {};
    }
    const double scale = std::max({1.0, r1, r2, D});
    if (D > r1 + r2 + kEps * scale || D < std::abs(r1 - r2) - kEps * scale) {
        return {};
    }
    // a: distance from c1 to the chord midpoint along c1 -> c2.
    const double a = (D * D + r1 * r1 - r2 * r2) / (2.0 * D);
    const double h2 = r1 * r1 - a * a;
    const Point u = (1.0 / D) * d;
    const Point mid = c1 + a * u;
    if (h2 <= (kEps * scale) * (kEps * scale)) {
        return {mid};
    }
    const double h = std::sqrt(h2);
    const Point left{-u.y, u.x};
    return {mid + h * left, mid - h * left};
}

double angle(Point a, Point vertex, Point b) {
    const Point u = a - vertex;
    const Point v = b - vertex;
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu <= kEps || nv <= kEps) {
        throw GeometryError("angle: coincident points");
    }
    const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(c);
}

}  // namespace edgeelim
