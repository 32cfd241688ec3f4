#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgeelim/geometry.hpp"

namespace edgeelim {

using VertexId = std::size_t;
using Seed = std::uint64_t;

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class DensityKind { Uniform, TruncatedGaussianMixture, PerPointMixture };

std::string to_string(DensityKind kind);
DensityKind density_kind_from_string(std::string_view name);

/// Isotropic Gaussian bump, truncated to the unit square.
struct GaussianComponent {
    Point center{0.5, 0.5};
    double sigma = 0.1;
    double weight = 1.0;
};

/// Density family rho(x) = psi + (1 - psi) * g(x), where g is uniform (kind
/// Uniform) or a truncated Gaussian mixture renormalised on the unit square.
/// For PerPointMixture, vertex i uses component i mod K alone as its g.
///
/// psi is an input. phi is the guaranteed upper bound of rho; it is derived
/// from the components by `resolved()`. A caller-supplied phi acts as a cap:
/// resolving fails if the derived bound exceeds it.
struct DensitySpec {
    DensityKind kind = DensityKind::Uniform;
    double psi = 1.0;
    std::optional<double> phi;
    std::vector<GaussianComponent> components;

    static DensitySpec uniform() { return {}; }
    static DensitySpec gaussian_mixture(double psi, std::vector<GaussianComponent> comps);
    static DensitySpec per_point_mixture(double psi, std::vector<GaussianComponent> anchors);

    /// Validates and fills phi. Throws ValidationError on an invalid spec.
    DensitySpec resolved() const;

    /// Density of vertex `index` at x (requires a resolved spec).
    double density(Point x, VertexId index = 0) const;
};

/// Uniform bucket grid over [0,1]^2 with about one point per cell.
class GridIndex {
public:
    GridIndex() = default;
    explicit GridIndex(const std::vector<Point>& points);

    std::size_t cells_per_side() const { return side_; }
    double cell_size() const { return 1.0 / static_cast<double>(side_); }
    std::size_t cell_coord(double v) const;
    std::span<const VertexId> cell(std::size_t cx, std::size_t cy) const;

private:
    std::size_t side_ = 1;
    std::vector<std::size_t> start_;
    std::vector<VertexId> ids_;
};

/// Immutable point set in the closed unit square plus neighbour data.
class Instance {
public:
    static constexpr std::size_t kCachedNeighbors = 3;

    explicit Instance(std::vector<Point> points);

    std::size_t size() const { return points_.size(); }
    const Point& operator[](VertexId i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }
    const GridIndex& grid() const { return grid_; }

    double distance(VertexId i, VertexId j) const { return dist(points_[i], points_[j]); }

    /// min_{j != i} dist(v_i, v_j). Requires n >= 2.
    double nearest_neighbor_distance(VertexId i) const;
    /// Up to kCachedNeighbors nearest other vertices of i, ascending by
    /// (distance, index).
    std::span<const VertexId> nearest_neighbors(VertexId i) const;
    /// Distance from i to its nearest vertex outside `excluded` (and != i).
    /// Returns +inf when no such vertex exists.
    double nearest_distance_excluding(VertexId i, std::span<const VertexId> excluded) const;

    /// Vertices with dist(v, center) <= radius.
    std::vector<VertexId> points_in_disk(Point center, double radius) const;
    /// Vertices inside [lo, hi] that satisfy `pred`.
    std::vector<VertexId> points_in_region(const std::function<bool(Point)>& pred, Point lo,
                                           Point hi) const;
    /// Calls visit(id) for every vertex in grid cells overlapping [lo, hi].
    template <typename F>
    void for_each_in_box(Point lo, Point hi, F&& visit) const;

    /// Provenance (recorded by the generator; empty for parsed files).
    std::optional<Seed> seed;
    std::optional<DensitySpec> density;
    std::string name;

private:
    double brute_nearest_excluding(VertexId i, std::span<const VertexId> excluded) const;

    std::vector<Point> points_;
    GridIndex grid_;
    std::vector<std::array<VertexId, kCachedNeighbors>> knn_;
    std::vector<double> knn_dist_[kCachedNeighbors];
    std::vector<std::uint8_t> knn_count_;
};

template <typename F>
void Instance::for_each_in_box(Point lo, Point hi, F&& visit) const {
    if (hi.x < lo.x || hi.y < lo.y) return;
    const std::size_t x0 = grid_.cell_coord(lo.x), x1 = grid_.cell_coord(hi.x);
    const std::size_t y0 = grid_.cell_coord(lo.y), y1 = grid_.cell_coord(hi.y);
    for (std::size_t cy = y0; cy <= y1; ++cy) {
        for (std::size_t cx = x0; cx <= x1; ++cx) {
            for (VertexId id : grid_.cell(cx, cy)) visit(id);
        }
    }
}

/// Draws n independent points; point i uses its own RNG stream derived from
/// (seed, i), so the result is identical across platforms and thread counts.
Instance generate(std::size_t n, const DensitySpec& spec, Seed seed);

/// TSPLIB subset: TYPE TSP, EDGE_WEIGHT_TYPE EUC_2D, NODE_COORD_SECTION.
/// Coordinates are shifted and scaled by the larger extent into [0,1]^2.
Instance read_tsplib(std::string_view text);
std::string write_tsplib(const Instance& inst, std::string_view name = "instance");

/// JSON dump with provenance (seed and density spec, when known).
std::string write_instance_json(const Instance& inst);
Instance read_instance_json(std::string_view text);

/// Dispatches on content: JSON objects vs TSPLIB text.
Instance read_instance_file(const std::string& path);

}  // namespace edgeelim
