#pragma once

#include <vector>

#include "edgeelim/instance.hpp"

namespace edgeelim::oracle {

inline constexpr std::size_t kMinVertices = 3;
inline constexpr std::size_t kDefaultMaxVertices = 15;

struct TourResult {
    /// Starts at vertex 0; order[1] < order.back() picks one of the two
    /// orientations.
    std::vector<VertexId> order;
    double length = 0.0;
};

double tour_length(const Instance& inst, const std::vector<VertexId>& order);

/// Bitmask dynamic programming over subsets. Requires 3 <= n <= max_n.
TourResult optimal_tour(const Instance& inst, std::size_t max_n = kDefaultMaxVertices);

/// Shortest tour that uses edge {i, j}.
TourResult optimal_tour_with_edge(const Instance& inst, VertexId i, VertexId j,
                                  std::size_t max_n = kDefaultMaxVertices);

/// True iff every tour through {i, j} is longer than the optimum by more than tol.
bool is_edge_useless_bruteforce(const Instance& inst, VertexId i, VertexId j, double tol = 1e-9,
                                std::size_t max_n = kDefaultMaxVertices);

/// Optimum plus the best tour length through every edge, computed with one
/// path DP per start vertex. forced[i][j] == forced[j][i].
struct EdgeTable {
    double optimum = 0.0;
    std::vector<std::vector<double>> forced;

    bool useless(VertexId i, VertexId j, double tol = 1e-9) const {
        return forced[i][j] > optimum + tol;
    }
};

EdgeTable edge_table(const Instance& inst, std::size_t max_n = kDefaultMaxVertices);

}  // namespace edgeelim::oracle
