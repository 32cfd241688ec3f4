#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgeelim/geometry.hpp"
#include "edgeelim/instance.hpp"

namespace edgeelim::hs {

class NoArcError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

struct HsParams {
    double delta = 0.0;       ///< cone radius, 1/sqrt(n) by default
    double gamma_bar = 24.0;  ///< edges shorter than gamma_bar * delta get no test regions
    std::size_t f_n = 1;      ///< region / candidate-pair budget, ceil(sqrt(n)) by default
    double eps_margin = kEps;
    /// Direct mode only: evaluate each candidate pair (r, s) with the largest
    /// radius for which both are alone, min(nn(r), nn(s)), instead of delta.
    bool adaptive_delta = true;

    static HsParams for_n(std::size_t n);
    void validate() const;
};

enum class Mode { CanonicalRegion, PairDirect };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

enum class ConeSide { P, Q };

/// R_p^r(delta) (side P) or R_q^r(delta) (side Q). A direction t from the apex
/// is inside when the point t_r(delta) on the circle around the apex is at
/// least `threshold` away from `anchor` (q for side P, p for side Q).
struct Cone {
    Point apex;
    Point anchor;
    Point base;  ///< the other edge endpoint (p for side P, q for side Q)
    double delta = 0.0;
    double threshold = 0.0;
    ConeSide side = ConeSide::P;
};

Cone make_cone(Point p, Point q, Point r, double delta, ConeSide side);

/// Signed membership margin: dist(anchor, t_r(delta)) - threshold.
double cone_margin(const Cone& cone, Point t);
bool cone_contains(const Cone& cone, Point t);

/// Endpoints of the arc (cone ∩ circle(apex, delta)), left of apex->anchor
/// first. Throws NoArcError unless dist(p,r) + dist(r,q) < dist(p,q) + 2 delta
/// and the bounding circles meet.
std::pair<Point, Point> cone_arc_endpoints(const Cone& cone);

/// Opening angle of the cone at its apex, in [0, 2 pi].
double cone_angle(const Cone& cone);

/// Lower bound on the angle between the two tour neighbours of an alone
/// vertex r. nullopt when dist(p,r) + dist(r,q) - dist(p,q) > 2 delta.
std::optional<double> min_neighbor_angle(Point p, Point q, Point r, double delta);

bool is_delta_alone(const Instance& inst, VertexId i, double delta);

/// Sufficient test that r is a potential point for pq: r is alone and both
/// cone angles are below the neighbour-angle bound by eps_margin.
bool is_potential_point(const Instance& inst, VertexId p, VertexId q, VertexId r, double delta,
                        double eps_margin = kEps);

struct ExtremalPoints {
    Point r_p;  ///< point of R_p^r ∩ circle farthest from p
    Point r_q;  ///< point of R_q^r ∩ circle farthest from q
};

ExtremalPoints extremal_points(Point p, Point q, Point r, double delta);

/// Pair test for uselessness of pq with witnesses r, s at radius delta.
bool pair_test_eliminates(const Instance& inst, VertexId p, VertexId q, VertexId r, VertexId s,
                              double delta, double eps_margin = kEps);

struct TestRegion {
    Point p;
    Point q;
    Point center;
    double delta = 0.0;

    /// dist(x, center) <= delta and x at least 1.5 delta from line pq.
    bool in_upper(Point x) const;
    /// dist(x, center) <= delta and x at most delta / 2 from line pq.
    bool in_lower(Point x) const;
    /// Disk of radius 2 delta around the center, clipped to the unit square.
    bool in_test_area(Point x) const;
};

std::vector<TestRegion> canonical_test_regions(const Instance& inst, VertexId p, VertexId q,
                                               const HsParams& params);

enum class RegionState { NotOccupied, OccupiedNotStrong, StronglyCertifying };

struct RegionStatus {
    RegionState state = RegionState::NotOccupied;
    std::optional<VertexId> upper;
    std::optional<VertexId> lower;
};

/// Classifies a region; p and q themselves are never counted.
RegionStatus region_status(const TestRegion& region, const Instance& inst, VertexId p, VertexId q);

struct HsWitness {
    VertexId r = 0;
    VertexId s = 0;
    double delta = 0.0;
    ExtremalPoints r_extremal;
    ExtremalPoints s_extremal;
    Mode mode = Mode::PairDirect;
    std::optional<std::size_t> region_index;
};

struct HsResult {
    bool useless = false;
    std::optional<HsWitness> witness;
};

/// Requires n >= 5.
HsResult hs_edge_useless(const Instance& inst, VertexId p, VertexId q, const HsParams& params,
                         Mode mode);

/// Re-evaluates the pair test recorded in a witness.
bool replay_witness(const Instance& inst, VertexId p, VertexId q, const HsWitness& w,
                    double eps_margin = kEps);

}  // namespace edgeelim::hs
