#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "edgeelim/geometry.hpp"
#include "edgeelim/instance.hpp"

namespace edgeelim::jv {

class NotApplicableError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct WitnessStrategy {
    enum class Kind { AllVertices, NearestK } kind = Kind::AllVertices;
    std::size_t k = 10;

    static WitnessStrategy all() { return {}; }
    static WitnessStrategy nearest(std::size_t k) { return {Kind::NearestK, k}; }
    /// AllVertices up to n = 2000, NearestK(10) above.
    static WitnessStrategy default_for(std::size_t n);
    static WitnessStrategy parse(const std::string& text);  ///< "all" | "nearest:K"
    std::string to_string() const;
};

struct JvParams {
    WitnessStrategy strategy;
    double eps_margin = kEps;
    double alpha = 0.25;  ///< border width used by the area diagnostics

    static JvParams for_n(std::size_t n);
    void validate() const;
};

/// True iff every vertex z outside {p, q, r} satisfies both strict
/// inequalities by eps_margin. Throws NotApplicableError when n < 4.
bool jv_witness_eliminates(const Instance& inst, VertexId p, VertexId q, VertexId r,
                           const JvParams& params);

struct JvWitness {
    VertexId r = 0;
};

struct JvResult {
    bool useless = false;
    std::optional<JvWitness> witness;
};

/// Scans witnesses in ascending distance from the midpoint of pq (ties by
/// index). With AllVertices the scan is exhaustive.
JvResult jv_edge_useless(const Instance& inst, VertexId p, VertexId q, const JvParams& params);

// --- improvement hyperbola diagnostics -----------------------------------

/// dist(p,z) - dist(z,r) >= dist(p,q) - dist(q,r).
bool hyperbola_contains(Point p, Point q, Point r, Point z);

struct HyperbolaParams {
    double a = 0.0;  ///< (dist(p,q) - dist(q,r)) / 2, negative when r is farther from q than p
    double b = 0.0;  ///< sqrt((dist(p,r)/2)^2 - a^2)
    Point origin;    ///< midpoint of pr
    Point axis;      ///< unit vector p -> r

    /// Coordinates of z in the frame with pr on the x axis and r at x > 0.
    Point to_frame(Point z) const;
};

HyperbolaParams hyperbola_params(Point p, Point q, Point r);

/// min(z.x, z.y, 1 - z.x, 1 - z.y) < alpha.
bool in_alpha_border(Point z, double alpha);

/// k with k/n <= dist(r, line pq) < (k+1)/n when the projection of r lies on
/// the segment from p to the reflection of p through q; nullopt otherwise.
std::optional<std::size_t> prob_area_index(Point r, Point p, Point q, std::size_t n);

struct AreaEstimate {
    double area = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Stratified Monte Carlo estimate of the area of the improvement hyperbola
/// inside the unit square.
AreaEstimate estimate_hyperbola_area(Point p, Point q, Point r, std::size_t sample_count,
                                     std::uint64_t seed);

}  // namespace edgeelim::jv
