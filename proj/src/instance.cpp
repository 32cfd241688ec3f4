#include "edgeelim/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edgeelim/random.hpp"

namespace edgeelim {

namespace {

constexpr double kMinSigma = 1e-3;

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Mass of a 1D N(c, sigma^2) inside [0, 1].
double axis_mass(double c, double sigma) {
    return std_normal_cdf((1.0 - c) / sigma) - std_normal_cdf(-c / sigma);
}

double component_mass(const GaussianComponent& g) {
    return axis_mass(g.center.x, g.sigma) * axis_mass(g.center.y, g.sigma);
}

/// Truncated, renormalised component density at x.
double component_density(const GaussianComponent& g, Point x) {
    const double dx = x.x - g.center.x, dy = x.y - g.center.y;
    const double s2 = g.sigma * g.sigma;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * s2)) /
           (2.0 * std::numbers::pi * s2 * component_mass(g));
}

/// Peak of the truncated component density over the square.
double component_peak(const GaussianComponent& g) {
    const double cx = std::clamp(g.center.x, 0.0, 1.0);
    const double cy = std::clamp(g.center.y, 0.0, 1.0);
    return component_density(g, {cx, cy});
}

double truncated_normal(SplitMix64& rng, double c, double sigma) {
    for (;;) {
        const double v = c + sigma * rng.normal();
        if (v >= 0.0 && v <= 1.0) return v;
    }
}

}  // namespace

std::string to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::Uniform: return "uniform";
        case DensityKind::TruncatedGaussianMixture: return "truncated-gaussian-mixture";
        case DensityKind::PerPointMixture: return "per-point-mixture";
    }
    return "unknown";
}

DensityKind density_kind_from_string(std::string_view name) {
    if (name == "uniform") return DensityKind::Uniform;
    if (name == "truncated-gaussian-mixture" || name == "gaussian") {
        return DensityKind::TruncatedGaussianMixture;
    }
    if (name == "per-point-mixture") return DensityKind::PerPointMixture;
    throw ValidationError("unknown density kind '" + std::string(name) + "'");
}

DensitySpec DensitySpec::gaussian_mixture(double psi, std::vector<GaussianComponent> comps) {
    DensitySpec s;
    s.kind = DensityKind::TruncatedGaussianMixture;
    s.psi = psi;
    s.components = std::move(comps);
    return s;
}

DensitySpec DensitySpec::per_point_mixture(double psi, std::vector<GaussianComponent> anchors) {
    DensitySpec s = gaussian_mixture(psi, std::move(anchors));
    s.kind = DensityKind::PerPointMixture;
    return s;
}

DensitySpec DensitySpec::resolved() const {
    if (!(psi > 0.0) || !(psi <= 1.0)) {
        throw ValidationError("density: psi must lie in (0, 1]");
    }
    if (phi && !(*phi >= psi)) {
        throw ValidationError("density: psi exceeds phi");
    }
    if (phi && !(*phi >= 1.0)) {
        throw ValidationError("density: phi must be at least 1");
    }
    DensitySpec out = *this;
    if (kind == DensityKind::Uniform) {
        out.psi = 1.0;
        out.phi = 1.0;
        out.components.clear();
        return out;
    }
    if (components.empty()) {
        throw ValidationError("density: mixture needs at least one component");
    }
    double total_weight = 0.0;
    for (const auto& g : components) {
        if (!g.center.finite() || g.center.x < 0.0 || g.center.x > 1.0 || g.center.y < 0.0 ||
            g.center.y > 1.0) {
            throw ValidationError("density: component centers must lie in the unit square");
        }
        if (!(g.sigma >= kMinSigma) || !std::isfinite(g.sigma)) {
            throw ValidationError("density: component sigma must be >= 1e-3");
        }
        if (!(g.weight > 0.0) || !std::isfinite(g.weight)) {
            throw ValidationError("density: component weights must be positive");
        }
        total_weight += g.weight;
    }
    for (auto& g : out.components) g.weight /= total_weight;

    double g_max = 0.0;
    if (kind == DensityKind::TruncatedGaussianMixture) {
        for (const auto& g : out.components) g_max += g.weight * component_peak(g);
    } else {
        for (const auto& g : out.components) g_max = std::max(g_max, component_peak(g));
    }
    const double derived_phi = std::max(1.0, psi + (1.0 - psi) * g_max);
    if (phi && derived_phi > *phi) {
        throw ValidationError("density: components exceed the requested phi bound");
    }
    out.phi = derived_phi;
    return out;
}

double DensitySpec::density(Point x, VertexId index) const {
    if (x.x < 0.0 || x.x > 1.0 || x.y < 0.0 || x.y > 1.0) return 0.0;
    if (kind == DensityKind::Uniform) return 1.0;
    double g = 0.0;
    if (kind == DensityKind::TruncatedGaussianMixture) {
        for (const auto& c : components) g += c.weight * component_density(c, x);
    } else {
        g = component_density(components[index % components.size()], x);
    }
    return psi + (1.0 - psi) * g;
}

// ---------------------------------------------------------------------------

GridIndex::GridIndex(const std::vector<Point>& points) {
    const auto n = points.size();
    side_ = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))), 1, 4096);
    const std::size_t cells = side_ * side_;
    std::vector<std::size_t> cell_of(n);
    start_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cell_of[i] = cell_coord(points[i].y) * side_ + cell_coord(points[i].x);
        ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    ids_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) ids_[fill[cell_of[i]]++] = i;
}

std::size_t GridIndex::cell_coord(double v) const {
    const double scaled = v * static_cast<double>(side_);
    if (!(scaled > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(scaled), side_ - 1);
}

std::span<const VertexId> GridIndex::cell(std::size_t cx, std::size_t cy) const {
    const std::size_t c = cy * side_ + cx;
    return {ids_.data() + start_[c], start_[c + 1] - start_[c]};
}

// ---------------------------------------------------------------------------

Instance::Instance(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw ValidationError("instance must contain at least one point");
    }
    for (const auto& p : points_) {
        if (!p.finite() || p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) {
            throw ValidationError("instance points must be finite and lie in [0,1]^2");
        }
    }
    grid_ = GridIndex(points_);

    // k nearest neighbours by expanding rings of grid cells.
    const std::size_t n = points_.size();
    const std::size_t want = std::min(kCachedNeighbors, n - 1);
    knn_.assign(n, {});
    knn_count_.assign(n, 0);
    for (auto& d : knn_dist_) d.assign(n, std::numeric_limits<double>::infinity());
    const auto side = static_cast<long>(grid_.cells_per_side());
    const double cs = grid_.cell_size();

    for (VertexId i = 0; i < n && want > 0; ++i) {
        std::array<std::pair<double, VertexId>, kCachedNeighbors + 1> best{};
        std::size_t count = 0;
        auto offer = [&](VertexId j) {
            if (j == i) return;
            const std::pair<double, VertexId> cand{dist(points_[i], points_[j]), j};
            std::size_t pos = count;
            while (pos > 0 && cand < best[pos - 1]) {
                best[pos] = best[pos - 1];
                --pos;
            }
            best[pos] = cand;
            count = std::min(count + 1, want);
        };
        const long cx = static_cast<long>(grid_.cell_coord(points_[i].x));
        const long cy = static_cast<long>(grid_.cell_coord(points_[i].y));
        for (long ring = 0; ring <= side; ++ring) {
            for (long y = cy - ring; y <= cy + ring; ++y) {
                if (y < 0 || y >= side) continue;
                const bool edge_row = (y == cy - ring || y == cy + ring);
                for (long x = cx - ring; x <= cx + ring; x += (edge_row ? 1 : 2 * std::max(ring, 1L))) {
                    if (x < 0 || x >= side) continue;
                    for (VertexId j : grid_.cell(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) {
                        offer(j);
                    }
                }
            }
            // Anything outside this ring is farther than ring * cs.
            if (count == want && best[want - 1].first <= static_cast<double>(ring) * cs) break;
        }
        knn_count_[i] = static_cast<std::uint8_t>(count);
        for (std::size_t k = 0; k < count; ++k) {
            knn_[i][k] = best[k].second;
            knn_dist_[k][i] = best[k].first;
        }
    }
}

double Instance::nearest_neighbor_distance(VertexId i) const {
    if (points_.size() < 2) {
        throw ValidationError("nearest_neighbor_distance requires n >= 2");
    }
    return knn_dist_[0][i];
}

std::span<const VertexId> Instance::nearest_neighbors(VertexId i) const {
    return {knn_[i].data(), knn_count_[i]};
}

double Instance::nearest_distance_excluding(VertexId i, std::span<const VertexId> excluded) const {
    for (std::size_t k = 0; k < knn_count_[i]; ++k) {
        const VertexId j = knn_[i][k];
        if (std::find(excluded.begin(), excluded.end(), j) == excluded.end()) {
            return knn_dist_[k][i];
        }
    }
    if (knn_count_[i] == points_.size() - 1) return std::numeric_limits<double>::infinity();
    return brute_nearest_excluding(i, excluded);
}

double Instance::brute_nearest_excluding(VertexId i, std::span<const VertexId> excluded) const {
    double best = std::numeric_limits<double>::infinity();
    for (VertexId j = 0; j < points_.size(); ++j) {
        if (j == i || std::find(excluded.begin(), excluded.end(), j) != excluded.end()) continue;
        best = std::min(best, dist(points_[i], points_[j]));
    }
    return best;
}

std::vector<VertexId> Instance::points_in_disk(Point center, double radius) const {
    std::vector<VertexId> out;
    if (!(radius >= 0.0)) return out;
    for_each_in_box({center.x - radius, center.y - radius}, {center.x + radius, center.y + radius},
                    [&](VertexId id) {
                        if (dist(points_[id], center) <= radius) out.push_back(id);
                    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> Instance::points_in_region(const std::function<bool(Point)>& pred, Point lo,
                                                 Point hi) const {
    std::vector<VertexId> out;
    for_each_in_box(lo, hi, [&](VertexId id) {
        const Point& p = points_[id];
        if (p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && pred(p)) out.push_back(id);
    });
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

Instance generate(std::size_t n, const DensitySpec& spec, Seed seed) {
    if (n < 1) throw ValidationError("generate: n must be at least 1");
    const DensitySpec resolved = spec.resolved();

    // Cumulative weights for component selection.
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& c : resolved.components) cumulative.push_back(acc += c.weight);

    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_stream(seed, i));
        const bool floor_draw = resolved.kind == DensityKind::Uniform || rng.uniform() < resolved.psi;
        if (floor_draw) {
            pts[i] = {rng.uniform(), rng.uniform()};
            continue;
        }
        const GaussianComponent* g = nullptr;
        if (resolved.kind == DensityKind::PerPointMixture) {
            g = &resolved.components[i % resolved.components.size()];
        } else {
            const double u = rng.uniform() * acc;
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            g = &resolved.components[std::min<std::size_t>(it - cumulative.begin(),
                                                           resolved.components.size() - 1)];
        }
        const double x = truncated_normal(rng, g->center.x, g->sigma);
        const double y = truncated_normal(rng, g->center.y, g->sigma);
        pts[i] = {x, y};
    }
    Instance inst(std::move(pts));
    inst.seed = seed;
    inst.density = resolved;
    return inst;
}

}  // namespace edgeelim
