#include "edgeelim/hs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace edgeelim::hs {

HsParams HsParams::for_n(std::size_t n) {
    HsParams params;
    const double root = std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
    params.delta = 1.0 / root;
    params.f_n = static_cast<std::size_t>(std::ceil(root));
    return params;
}

void HsParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("hs: delta must be positive");
    if (!(gamma_bar >= 24.0)) throw ValidationError("hs: gamma_bar must be at least 24");
    if (f_n < 1) throw ValidationError("hs: f_n must be at least 1");
    if (!(eps_margin >= 0.0)) throw ValidationError("hs: eps_margin must be nonnegative");
}

std::string to_string(Mode m) {
    return m == Mode::CanonicalRegion ? "canonical" : "direct";
}

Mode mode_from_string(const std::string& s) {
    if (s == "canonical" || s == "canonical-region" || s == "CanonicalRegion") {
        return Mode::CanonicalRegion;
    }
    if (s == "direct" || s == "PairDirect") return Mode::PairDirect;
    throw ValidationError("unknown hs mode '" + s + "' (expected canonical|direct)");
}

Cone make_cone(Point p, Point q, Point r, double delta, ConeSide side) {
    Cone c;
    c.apex = r;
    c.delta = delta;
    c.side = side;
    if (side == ConeSide::P) {
        c.anchor = q;
        c.base = p;
        c.threshold = delta + dist(p, q) - dist(p, r);
    } else {
        c.anchor = p;
        c.base = q;
        c.threshold = delta + dist(p, q) - dist(q, r);
    }
    return c;
}

double cone_margin(const Cone& cone, Point t) {
    const Point on_circle = ray_circle_point(cone.apex, t, cone.delta);
    return dist(cone.anchor, on_circle) - cone.threshold;
}

bool cone_contains(const Cone& cone, Point t) { return cone_margin(cone, t) >= 0.0; }

std::pair<Point, Point> cone_arc_endpoints(const Cone& cone) {
    const double excess =
        dist(cone.base, cone.apex) + dist(cone.apex, cone.anchor) - dist(cone.base, cone.anchor);
    if (!(excess < 2.0 * cone.delta)) {
        throw NoArcError("cone arc: dist(p,r) + dist(r,q) must be below dist(p,q) + 2 delta");
    }
    if (!(cone.threshold > 0.0)) {
        throw NoArcError("cone arc: nonpositive threshold");
    }
    const auto pts = circle_circle_intersection(cone.apex, cone.delta, cone.anchor, cone.threshold);
    if (pts.empty()) {
        throw NoArcError("cone arc: bounding circles do not meet");
    }
    if (pts.size() == 1) return {pts[0], pts[0]};
    return {pts[0], pts[1]};
}

double cone_angle(const Cone& cone) {
    const auto [e1, e2] = cone_arc_endpoints(cone);
    (void)e2;
    // The arc is symmetric about the ray anchor -> apex, so the opening is
    // twice the deviation of either endpoint from that ray.
    return 2.0 * (std::numbers::pi - angle(cone.anchor, cone.apex, e1));
}

std::optional<double> min_neighbor_angle(Point p, Point q, Point r, double delta) {
    const double slack = 2.0 * delta + dist(p, q) - dist(p, r) - dist(r, q);
    if (slack < 0.0) return std::nullopt;
    const double arg = std::clamp(1.0 - slack * slack / (2.0 * delta * delta), -1.0, 1.0);
    return std::acos(arg);
}

bool is_delta_alone(const Instance& inst, VertexId i, double delta) {
    return inst.nearest_neighbor_distance(i) >= delta;
}

bool is_potential_point(const Instance& inst, VertexId p, VertexId q, VertexId r, double delta,
                        double eps_margin) {
    if (r == p || r == q || inst.size() < 3) return false;
    if (!is_delta_alone(inst, r, delta)) return false;
    const Point P = inst[p], Q = inst[q], R = inst[r];
    const auto bound = min_neighbor_angle(P, Q, R, delta);
    if (!bound) return false;
    try {
        const double ap = cone_angle(make_cone(P, Q, R, delta, ConeSide::P));
        const double aq = cone_angle(make_cone(P, Q, R, delta, ConeSide::Q));
        return ap < *bound - eps_margin && aq < *bound - eps_margin;
    } catch (const GeometryError&) {
        return false;
    }
}

namespace {

/// Point of the arc farthest from `from`: the antipodal ray point when it is
/// on the arc, otherwise the farther arc endpoint.
Point farthest_arc_point(const Cone& cone, Point from) {
    const Point antipode = ray_circle_point(cone.apex, reflect_through(from, cone.apex), cone.delta);
    if (cone_contains(cone, antipode)) return antipode;
    const auto [e1, e2] = cone_arc_endpoints(cone);
    return dist(from, e2) > dist(from, e1) ? e2 : e1;
}

}  // namespace

ExtremalPoints extremal_points(Point p, Point q, Point r, double delta) {
    const Cone cp = make_cone(p, q, r, delta, ConeSide::P);
    const Cone cq = make_cone(p, q, r, delta, ConeSide::Q);
    // Both arcs must exist even when the antipodal branch applies.
    (void)cone_arc_endpoints(cp);
    (void)cone_arc_endpoints(cq);
    return {farthest_arc_point(cp, p), farthest_arc_point(cq, q)};
}

bool pair_test_eliminates(const Instance& inst, VertexId p, VertexId q, VertexId r, VertexId s,
                              double delta, double eps_margin) {
    if (r == s || r == p || r == q || s == p || s == q || p == q) return false;
    if (!(delta > 0.0)) return false;
    if (!is_potential_point(inst, p, q, r, delta, eps_margin)) return false;
    if (!is_potential_point(inst, p, q, s, delta, eps_margin)) return false;

    const Point P = inst[p], Q = inst[q], R = inst[r], S = inst[s];
    // r outside both cones of s, and s outside both cones of r, by margin.
    for (auto side : {ConeSide::P, ConeSide::Q}) {
        if (cone_margin(make_cone(P, Q, S, delta, side), R) >= -eps_margin) return false;
        if (cone_margin(make_cone(P, Q, R, delta, side), S) >= -eps_margin) return false;
    }

    ExtremalPoints rx, sx;
    try {
        rx = extremal_points(P, Q, R, delta);
        sx = extremal_points(P, Q, S, delta);
    } catch (const GeometryError&) {
        return false;
    }
    const double pq = dist(P, Q), rs = dist(R, S);
    const double first = pq - rs - dist(P, rx.r_p) - dist(sx.r_q, Q) + 2.0 * delta;
    const double second = pq - rs - dist(P, sx.r_p) - dist(rx.r_q, Q) + 2.0 * delta;
    return first > eps_margin && second > eps_margin;
}

// ---------------------------------------------------------------------------
// Test regions

namespace {

double distance_to_line(Point a, Point b, Point x) {
    const Point d = b - a;
    return std::abs(cross(d, x - a)) / norm(d);
}

double border_clearance(Point x) { return std::min({x.x, x.y, 1.0 - x.x, 1.0 - x.y}); }

}  // namespace

bool TestRegion::in_upper(Point x) const {
    return dist(x, center) <= delta && distance_to_line(p, q, x) - delta >= 0.5 * delta;
}

bool TestRegion::in_lower(Point x) const {
    return dist(x, center) <= delta && delta - distance_to_line(p, q, x) >= 0.5 * delta;
}

bool TestRegion::in_test_area(Point x) const {
    return dist(x, center) <= 2.0 * delta && x.x >= 0.0 && x.x <= 1.0 && x.y >= 0.0 && x.y <= 1.0;
}

std::vector<TestRegion> canonical_test_regions(const Instance& inst, VertexId p, VertexId q,
                                               const HsParams& params) {
    params.validate();
    const Point P = inst[p], Q = inst[q];
    const double len = dist(P, Q);
    const double delta = params.delta;
    if (len < params.gamma_bar * delta) return {};

    const double sub_len = 0.5 * len;
    const auto m = std::min<std::size_t>(params.f_n,
                                         static_cast<std::size_t>(std::floor(sub_len / (4.0 * delta))));
    if (m == 0) return {};

    const Point dir = (1.0 / len) * (Q - P);
    const Point left{-dir.y, dir.x};
    const Point u = P + (0.25 * len) * dir;
    const Point v = P + (0.75 * len) * dir;

    // Subneighbourhood on side sgn: rectangle u, v, u + 3 delta n, v + 3 delta n.
    auto clearance = [&](double sgn) {
        const Point off = (sgn * 3.0 * delta) * left;
        return std::min({border_clearance(u), border_clearance(v), border_clearance(u + off),
                         border_clearance(v + off)});
    };
    const double c_left = clearance(1.0), c_right = clearance(-1.0);
    if (c_left < 0.0 && c_right < 0.0) return {};
    const double sgn = c_left >= c_right ? 1.0 : -1.0;

    std::vector<TestRegion> regions;
    regions.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double t = 0.25 * len + sub_len * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
        regions.push_back({P, Q, P + t * dir + (sgn * delta) * left, delta});
    }
    return regions;
}

RegionStatus region_status(const TestRegion& region, const Instance& inst, VertexId p, VertexId q) {
    RegionStatus st;
    std::size_t in_area = 0, n_upper = 0, n_lower = 0;
    for (VertexId id : inst.points_in_disk(region.center, 2.0 * region.delta)) {
        if (id == p || id == q) continue;
        const Point x = inst[id];
        if (!region.in_test_area(x)) continue;
        ++in_area;
        if (region.in_upper(x)) {
            if (!st.upper) st.upper = id;
            ++n_upper;
        } else if (region.in_lower(x)) {
            if (!st.lower) st.lower = id;
            ++n_lower;
        }
    }
    if (n_upper == 0 || n_lower == 0) {
        st.upper.reset();
        st.lower.reset();
        st.state = RegionState::NotOccupied;
        return st;
    }
    st.state = (in_area == 2 && n_upper == 1 && n_lower == 1) ? RegionState::StronglyCertifying
                                                               : RegionState::OccupiedNotStrong;
    return st;
}

// ---------------------------------------------------------------------------
// Edge evaluation

namespace {

HsWitness make_witness(const Instance& inst, VertexId p, VertexId q, VertexId r, VertexId s,
                       double delta, Mode mode, std::optional<std::size_t> region) {
    HsWitness w;
    w.r = r;
    w.s = s;
    w.delta = delta;
    w.r_extremal = extremal_points(inst[p], inst[q], inst[r], delta);
    w.s_extremal = extremal_points(inst[p], inst[q], inst[s], delta);
    w.mode = mode;
    w.region_index = region;
    return w;
}

/// Candidate pairs for the direct mode: for each of up to f_n probe points
/// spread evenly along pq, the nearest vertex on each side of the line within
/// 3 delta of the probe.
std::vector<std::pair<VertexId, VertexId>> direct_candidate_pairs(const Instance& inst, VertexId p,
                                                                  VertexId q, const HsParams& params) {
    const Point P = inst[p], Q = inst[q];
    const double len = dist(P, Q);
    const Point dir = (1.0 / len) * (Q - P);
    const double delta = params.delta;
    const auto probes = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::floor(len / delta)), 1, params.f_n);
    const double radius = 3.0 * delta;

    std::vector<std::pair<VertexId, VertexId>> pairs;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (std::size_t k = 0; k < probes && pairs.size() < params.f_n; ++k) {
        const double t = len * (static_cast<double>(k) + 0.5) / static_cast<double>(probes);
        const Point probe = P + t * dir;
        std::optional<VertexId> best_left, best_right;
        double d_left = std::numeric_limits<double>::infinity(), d_right = d_left;
        for (VertexId id : inst.points_in_disk(probe, radius)) {
            if (id == p || id == q) continue;
            const Point x = inst[id];
            const double along = dot(x - P, dir);
            if (along <= 0.0 || along >= len) continue;
            const double side = cross(dir, x - P);
            const double d = dist(x, probe);
            if (side > 0.0 && d < d_left) {
                d_left = d;
                best_left = id;
            } else if (side < 0.0 && d < d_right) {
                d_right = d;
                best_right = id;
            }
        }
        if (!best_left || !best_right) continue;
        if (seen.insert({*best_left, *best_right}).second) pairs.emplace_back(*best_left, *best_right);
    }
    return pairs;
}

}  // namespace

HsResult hs_edge_useless(const Instance& inst, VertexId p, VertexId q, const HsParams& params,
                         Mode mode) {
    if (inst.size() < 5) throw ValidationError("hs criterion requires n >= 5");
    if (p == q || p >= inst.size() || q >= inst.size()) throw ValidationError("hs: invalid edge");
    params.validate();

    if (mode == Mode::CanonicalRegion) {
        const auto regions = canonical_test_regions(inst, p, q, params);
        for (std::size_t k = 0; k < regions.size(); ++k) {
            const RegionStatus st = region_status(regions[k], inst, p, q);
            if (st.state != RegionState::StronglyCertifying) continue;
            if (pair_test_eliminates(inst, p, q, *st.upper, *st.lower, params.delta,
                                         params.eps_margin)) {
                return {true, make_witness(inst, p, q, *st.upper, *st.lower, params.delta, mode, k)};
            }
        }
        return {};
    }

    for (const auto& [r, s] : direct_candidate_pairs(inst, p, q, params)) {
        const double delta = params.adaptive_delta
                                 ? std::min(inst.nearest_neighbor_distance(r),
                                            inst.nearest_neighbor_distance(s))
                                 : params.delta;
        if (!(delta > 0.0)) continue;
        if (pair_test_eliminates(inst, p, q, r, s, delta, params.eps_margin)) {
            return {true, make_witness(inst, p, q, r, s, delta, mode, std::nullopt)};
        }
    }
    return {};
}

bool replay_witness(const Instance& inst, VertexId p, VertexId q, const HsWitness& w,
                    double eps_margin) {
    return pair_test_eliminates(inst, p, q, w.r, w.s, w.delta, eps_margin);
}

}  // namespace edgeelim::hs
