#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgeelim/oracle.hpp"
#include "edgeelim/random.hpp"

using namespace edgeelim;
using namespace edgeelim::oracle;

namespace {

Instance square() { return Instance({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

/// Best tour by enumerating all permutations with vertex 0 fixed.
double enumerate_optimum(const Instance& inst) {
    std::vector<VertexId> rest(inst.size() - 1);
    std::iota(rest.begin(), rest.end(), VertexId{1});
    double best = INFINITY;
    do {
        double len = inst.distance(0, rest.front()) + inst.distance(rest.back(), 0);
        for (std::size_t k = 0; k + 1 < rest.size(); ++k) len += inst.distance(rest[k], rest[k + 1]);
        best = std::min(best, len);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

/// Best tour through edge {i, j} by enumeration.
double enumerate_with_edge(const Instance& inst, VertexId i, VertexId j) {
    std::vector<VertexId> rest;
    for (VertexId v = 0; v < inst.size(); ++v) {
        if (v != i && v != j) rest.push_back(v);
    }
    double best = INFINITY;
    do {
        double len = inst.distance(i, j) + inst.distance(j, rest.front()) + inst.distance(rest.back(), i);
        for (std::size_t k = 0; k + 1 < rest.size(); ++k) len += inst.distance(rest[k], rest[k + 1]);
        best = std::min(best, len);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

}  // namespace

TEST(OptimalTour, SquarePerimeter) {
    const auto t = optimal_tour(square());
    EXPECT_NEAR(t.length, 4.0, 1e-15);
    EXPECT_EQ(t.order, (std::vector<VertexId>{0, 1, 2, 3}));
}

TEST(OptimalTour, Triangle) {
    const Instance inst({{0.1, 0.1}, {0.9, 0.2}, {0.4, 0.8}});
    const auto t = optimal_tour(inst);
    EXPECT_NEAR(t.length, inst.distance(0, 1) + inst.distance(1, 2) + inst.distance(2, 0), 1e-15);
    EXPECT_EQ(t.order.size(), 3u);
}

TEST(OptimalTour, MatchesEnumeration) {
    for (Seed seed = 1; seed <= 20; ++seed) {
        for (std::size_t n : {5u, 6u, 7u, 8u}) {
            const Instance inst = generate(n, DensitySpec::uniform(), seed * 100 + n);
            const auto t = optimal_tour(inst);
            EXPECT_NEAR(t.length, enumerate_optimum(inst), 1e-12);
            EXPECT_NEAR(tour_length(inst, t.order), t.length, 1e-15);
            auto sorted = t.order;
            std::sort(sorted.begin(), sorted.end());
            for (VertexId k = 0; k < n; ++k) EXPECT_EQ(sorted[k], k);
            EXPECT_EQ(t.order.front(), 0u);
            EXPECT_LT(t.order[1], t.order.back());
        }
    }
}

TEST(OptimalTour, RangeChecks) {
    EXPECT_THROW(optimal_tour(Instance({{0, 0}, {1, 1}})), ValidationError);
    EXPECT_THROW(optimal_tour(generate(16, DensitySpec::uniform(), 1)), ValidationError);
    EXPECT_NO_THROW(optimal_tour(generate(16, DensitySpec::uniform(), 1), 16));
}

TEST(ForcedEdge, SquareSideAndDiagonal) {
    EXPECT_NEAR(optimal_tour_with_edge(square(), 0, 1).length, 4.0, 1e-15);
    // The only tours through a diagonal use both diagonals: 2 + 2 sqrt(2).
    EXPECT_NEAR(optimal_tour_with_edge(square(), 0, 2).length, 2.0 + 2.0 * std::sqrt(2.0), 1e-15);
}

TEST(ForcedEdge, ContainsTheEdgeAndMatchesEnumeration) {
    for (Seed seed = 1; seed <= 5; ++seed) {
        const Instance inst = generate(8, DensitySpec::uniform(), seed);
        const double best = optimal_tour(inst).length;
        for (VertexId i = 0; i < 8; ++i) {
            for (VertexId j = i + 1; j < 8; ++j) {
                const auto t = optimal_tour_with_edge(inst, i, j);
                EXPECT_GE(t.length, best - 1e-12);
                EXPECT_NEAR(t.length, enumerate_with_edge(inst, i, j), 1e-12);
                bool uses = false;
                for (std::size_t k = 0; k < t.order.size(); ++k) {
                    const VertexId a = t.order[k], b = t.order[(k + 1) % t.order.size()];
                    uses = uses || (a == i && b == j) || (a == j && b == i);
                }
                EXPECT_TRUE(uses);
            }
        }
    }
}

TEST(ForcedEdge, InvalidEdge) {
    EXPECT_THROW(optimal_tour_with_edge(square(), 1, 1), ValidationError);
    EXPECT_THROW(optimal_tour_with_edge(square(), 1, 9), ValidationError);
}

TEST(Useless, Square) {
    EXPECT_TRUE(is_edge_useless_bruteforce(square(), 0, 2));
    EXPECT_TRUE(is_edge_useless_bruteforce(square(), 1, 3));
    EXPECT_FALSE(is_edge_useless_bruteforce(square(), 0, 1));
}

TEST(Useless, OptimalTourEdgesAreExactlyNKept) {
    for (Seed seed = 1; seed <= 10; ++seed) {
        const Instance inst = generate(10, DensitySpec::uniform(), seed);
        const auto t = optimal_tour(inst);
        const auto table = edge_table(inst);
        for (std::size_t k = 0; k < t.order.size(); ++k) {
            const VertexId a = t.order[k], b = t.order[(k + 1) % t.order.size()];
            EXPECT_FALSE(is_edge_useless_bruteforce(inst, a, b));
            EXPECT_FALSE(table.useless(a, b));
        }
        std::size_t kept = 0;
        for (VertexId i = 0; i < 10; ++i) {
            for (VertexId j = i + 1; j < 10; ++j) kept += table.useless(i, j) ? 0 : 1;
        }
        EXPECT_GE(kept, 10u);
    }
}

TEST(EdgeTable, AgreesWithPerEdgeDp) {
    for (Seed seed = 1; seed <= 5; ++seed) {
        const Instance inst = generate(9, DensitySpec::uniform(), seed + 50);
        const auto table = edge_table(inst);
        EXPECT_NEAR(table.optimum, optimal_tour(inst).length, 1e-12);
        for (VertexId i = 0; i < 9; ++i) {
            for (VertexId j = i + 1; j < 9; ++j) {
                EXPECT_NEAR(table.forced[i][j], optimal_tour_with_edge(inst, i, j).length, 1e-12);
                EXPECT_EQ(table.forced[i][j], table.forced[j][i]);
                EXPECT_GE(table.forced[i][j], table.optimum);
            }
        }
    }
}
