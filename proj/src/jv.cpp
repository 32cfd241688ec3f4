#include "edgeelim/jv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "edgeelim/random.hpp"

namespace edgeelim::jv {

WitnessStrategy WitnessStrategy::default_for(std::size_t n) {
    return n <= 2000 ? all() : nearest(10);
}

WitnessStrategy WitnessStrategy::parse(const std::string& text) {
    if (text == "all") return all();
    if (text.rfind("nearest:", 0) == 0) {
        try {
            const auto k = std::stoul(text.substr(8));
            if (k >= 1) return nearest(k);
        } catch (const std::exception&) {
        }
    }
    throw ValidationError("bad witness strategy '" + text + "' (expected all|nearest:K)");
}

std::string WitnessStrategy::to_string() const {
    return kind == Kind::AllVertices ? "all" : "nearest:" + std::to_string(k);
}

JvParams JvParams::for_n(std::size_t n) {
    JvParams params;
    params.strategy = WitnessStrategy::default_for(n);
    return params;
}

void JvParams::validate() const {
    if (!(alpha > 0.0 && alpha < 0.5)) throw ValidationError("jv: alpha must lie in (0, 1/2)");
    if (strategy.kind == WitnessStrategy::Kind::NearestK && strategy.k < 1) {
        throw ValidationError("jv: nearest-k strategy needs k >= 1");
    }
    if (!(eps_margin >= 0.0)) throw ValidationError("jv: eps_margin must be nonnegative");
}

namespace {

void check_edge(const Instance& inst, VertexId p, VertexId q) {
    if (inst.size() < 4) {
        throw NotApplicableError("jv criterion requires n >= 4");
    }
    if (p == q || p >= inst.size() || q >= inst.size()) throw ValidationError("jv: invalid edge");
}

/// Both inequalities for a single z.
inline bool z_respects(const Point& P, const Point& Q, const Point& R, const Point& Z, double lhs_p,
                       double lhs_q, double eps) {
    const double dzr = dist(Z, R);
    return lhs_p > dist(P, Z) - dzr + eps && lhs_q > dist(Z, Q) - dzr + eps;
}

}  // namespace

bool jv_witness_eliminates(const Instance& inst, VertexId p, VertexId q, VertexId r,
                           const JvParams& params) {
    check_edge(inst, p, q);
    if (r == p || r == q || r >= inst.size()) return false;
    const Point P = inst[p], Q = inst[q], R = inst[r];
    const double pq = dist(P, Q);
    const double lhs_p = pq - dist(Q, R);
    const double lhs_q = pq - dist(P, R);
    for (VertexId z = 0; z < inst.size(); ++z) {
        if (z == p || z == q || z == r) continue;
        if (!z_respects(P, Q, R, inst[z], lhs_p, lhs_q, params.eps_margin)) return false;
    }
    return true;
}

JvResult jv_edge_useless(const Instance& inst, VertexId p, VertexId q, const JvParams& params) {
    check_edge(inst, p, q);
    params.validate();
    const std::size_t n = inst.size();
    const Point P = inst[p], Q = inst[q];
    const Point mid = 0.5 * (P + Q);
    const double pq = dist(P, Q);

    struct Candidate {
        double mid_dist;
        double excess;
        VertexId id;
    };

    // A witness r must beat its own nearest vertex z outside {p, q}:
    // dist(p,z) - dist(z,r) >= dist(p,r) - 2 dist(z,r), so the detour excess
    // dist(p,r) + dist(r,q) - dist(p,q) has to stay below 2 dist(z,r). The
    // 1e-9 slack keeps borderline candidates for the exact test.
    const std::array<VertexId, 2> ends{p, q};
    std::vector<Candidate> cands;
    for (VertexId r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        const Point R = inst[r];
        const double excess = dist(P, R) + dist(R, Q) - pq;
        const double nn = inst.nearest_distance_excluding(r, ends);
        if (excess >= 2.0 * nn + 1e-9) continue;
        cands.push_back({dist(R, mid), excess, r});
    }

    if (params.strategy.kind == WitnessStrategy::Kind::NearestK) {
        // Restrict to the k vertices nearest the midpoint, then apply the filter.
        std::vector<std::pair<double, VertexId>> near;
        near.reserve(n);
        for (VertexId r = 0; r < n; ++r) {
            if (r != p && r != q) near.emplace_back(dist(inst[r], mid), r);
        }
        const std::size_t k = std::min(params.strategy.k, near.size());
        std::partial_sort(near.begin(), near.begin() + static_cast<long>(k), near.end());
        std::vector<Candidate> kept;
        for (std::size_t i = 0; i < k; ++i) {
            for (const auto& c : cands) {
                if (c.id == near[i].second) kept.push_back(c);
            }
        }
        cands = std::move(kept);
    }

    // Low-excess vertices hug the segment and are the likeliest violators, so
    // they are tried first before the full scan.
    std::vector<VertexId> probe_order;
    {
        std::vector<Candidate> by_excess = cands;
        std::sort(by_excess.begin(), by_excess.end(),
                  [](const Candidate& a, const Candidate& b) {
                      return a.excess < b.excess || (a.excess == b.excess && a.id < b.id);
                  });
        for (const auto& c : by_excess) probe_order.push_back(c.id);
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.mid_dist < b.mid_dist || (a.mid_dist == b.mid_dist && a.id < b.id);
    });

    const double eps = params.eps_margin;
    for (const auto& c : cands) {
        const Point R = inst[c.id];
        const double lhs_p = pq - dist(Q, R);
        const double lhs_q = pq - dist(P, R);
        bool ok = true;
        for (VertexId z : probe_order) {
            if (z == c.id) continue;
            if (!z_respects(P, Q, R, inst[z], lhs_p, lhs_q, eps)) {
                ok = false;
                break;
            }
        }
        if (ok && jv_witness_eliminates(inst, p, q, c.id, params)) {
            return {true, JvWitness{c.id}};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------

bool hyperbola_contains(Point p, Point q, Point r, Point z) {
    return dist(p, z) - dist(z, r) >= dist(p, q) - dist(q, r);
}

Point HyperbolaParams::to_frame(Point z) const {
    const Point d = z - origin;
    return {dot(d, axis), cross(axis, d)};
}

HyperbolaParams hyperbola_params(Point p, Point q, Point r) {
    const double pr = dist(p, r);
    if (pr <= kEps) throw GeometryError("hyperbola_params: p and r coincide");
    HyperbolaParams h;
    h.a = 0.5 * (dist(p, q) - dist(q, r));
    const double half = 0.5 * pr;
    if (std::abs(h.a) > half + 1e-12 * std::max(1.0, half)) {
        throw GeometryError("hyperbola_params: |a_r| exceeds dist(p,r)/2");
    }
    h.b = std::sqrt(std::max(0.0, half * half - h.a * h.a));
    h.origin = 0.5 * (p + r);
    h.axis = (1.0 / pr) * (r - p);
    return h;
}

bool in_alpha_border(Point z, double alpha) {
    return std::min({z.x, z.y, 1.0 - z.x, 1.0 - z.y}) < alpha;
}

std::optional<std::size_t> prob_area_index(Point r, Point p, Point q, std::size_t n) {
    const ProjectedFrame frame({p, q});
    const double along = frame.along(r);
    const double len = frame.segment().length();
    if (along < 0.0 || along > 2.0 * len) return std::nullopt;
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * frame.distance_to_line(r)));
}

AreaEstimate estimate_hyperbola_area(Point p, Point q, Point r, std::size_t sample_count,
                                     std::uint64_t seed) {
    if (sample_count < 10000) throw ValidationError("estimate_hyperbola_area: need >= 1e4 samples");
    const auto side = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(sample_count))));
    const double cell = 1.0 / static_cast<double>(side);
    const double rhs = dist(p, q) - dist(q, r);
    SplitMix64 rng(seed);
    std::size_t hits = 0;
    for (std::size_t iy = 0; iy < side; ++iy) {
        for (std::size_t ix = 0; ix < side; ++ix) {
            const Point z{(static_cast<double>(ix) + rng.uniform()) * cell,
                          (static_cast<double>(iy) + rng.uniform()) * cell};
            if (dist(p, z) - dist(z, r) >= rhs) ++hits;
        }
    }
    const std::size_t total = side * side;
    const double frac = static_cast<double>(hits) / static_cast<double>(total);
    return {frac, std::sqrt(frac * (1.0 - frac) / static_cast<double>(total)), total};
}

}  // namespace edgeelim::jv
