#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "edgeelim/instance.hpp"
#include "edgeelim/random.hpp"

using namespace edgeelim;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(EDGEELIM_FIXTURE_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double brute_nn(const Instance& inst, VertexId i) {
    double best = std::numeric_limits<double>::infinity();
    for (VertexId j = 0; j < inst.size(); ++j) {
        if (j != i) best = std::min(best, dist(inst[i], inst[j]));
    }
    return best;
}

}  // namespace

TEST(Generate, SinglePointInSquare) {
    const Instance inst = generate(1, DensitySpec::uniform(), 123);
    ASSERT_EQ(inst.size(), 1u);
    EXPECT_GE(inst[0].x, 0.0);
    EXPECT_LE(inst[0].x, 1.0);
    EXPECT_GE(inst[0].y, 0.0);
    EXPECT_LE(inst[0].y, 1.0);
}

TEST(Generate, ZeroPointsRejected) { EXPECT_THROW(generate(0, DensitySpec::uniform(), 1), ValidationError); }

TEST(Generate, Deterministic) {
    const Instance a = generate(500, DensitySpec::uniform(), 77);
    const Instance b = generate(500, DensitySpec::uniform(), 77);
    const Instance c = generate(500, DensitySpec::uniform(), 78);
    EXPECT_EQ(a.points(), b.points());
    EXPECT_NE(a.points(), c.points());
}

TEST(Generate, PrefixStableAcrossSizes) {
    // Point i depends only on (seed, i).
    const Instance small = generate(10, DensitySpec::uniform(), 5);
    const Instance big = generate(1000, DensitySpec::uniform(), 5);
    for (VertexId i = 0; i < 10; ++i) EXPECT_EQ(small[i], big[i]);
}

TEST(Generate, TenByTenCellCountsWithinFourSigma) {
    const std::size_t n = 10000;
    const Instance inst = generate(n, DensitySpec::uniform(), 31337);
    std::array<int, 100> counts{};
    for (const Point& x : inst.points()) {
        const int cx = std::min(9, static_cast<int>(x.x * 10)), cy = std::min(9, static_cast<int>(x.y * 10));
        ++counts[cy * 10 + cx];
    }
    const double mean = 100.0, sigma = std::sqrt(n * 0.01 * 0.99);
    for (int c : counts) EXPECT_LE(std::abs(c - mean), 4 * sigma);
}

TEST(Generate, ChiSquareUniformity) {
    const Instance inst = generate(100000, DensitySpec::uniform(), 2718);
    std::vector<double> counts(256, 0.0);
    for (const Point& x : inst.points()) {
        const int cx = std::min(15, static_cast<int>(x.x * 16)), cy = std::min(15, static_cast<int>(x.y * 16));
        counts[cy * 16 + cx] += 1.0;
    }
    const double expected = 100000.0 / 256.0;
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    // 99.9% quantile of chi-square with 255 degrees of freedom.
    EXPECT_LT(stat, 330.51974363400586);
}

TEST(Density, UniformForcesUnitBounds) {
    DensitySpec s = DensitySpec::uniform();
    s.psi = 0.3;
    const DensitySpec r = s.resolved();
    EXPECT_EQ(r.psi, 1.0);
    EXPECT_EQ(*r.phi, 1.0);
}

TEST(Density, InvalidSpecsRejected) {
    EXPECT_THROW(DensitySpec::gaussian_mixture(0.5, {}).resolved(), ValidationError);
    EXPECT_THROW(DensitySpec::gaussian_mixture(0.0, {{{0.5, 0.5}, 0.1, 1}}).resolved(), ValidationError);
    EXPECT_THROW(DensitySpec::gaussian_mixture(0.5, {{{1.5, 0.5}, 0.1, 1}}).resolved(), ValidationError);
    EXPECT_THROW(DensitySpec::gaussian_mixture(0.5, {{{0.5, 0.5}, 1e-4, 1}}).resolved(), ValidationError);
    EXPECT_THROW(DensitySpec::gaussian_mixture(0.5, {{{0.5, 0.5}, 0.1, -1}}).resolved(), ValidationError);
    auto capped = DensitySpec::gaussian_mixture(0.5, {{{0.5, 0.5}, 0.05, 1}});
    capped.phi = 1.5;  // a sharp bump far exceeds this cap
    EXPECT_THROW(capped.resolved(), ValidationError);
}

TEST(Density, DensityIntegratesToOne) {
    const auto spec = DensitySpec::gaussian_mixture(0.4, {{{0.3, 0.3}, 0.1, 2}, {{0.8, 0.6}, 0.2, 1}}).resolved();
    const int m = 400;
    double total = 0.0, top = 0.0, low = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double d = spec.density({(i + 0.5) / m, (j + 0.5) / m});
            total += d;
            top = std::max(top, d);
            low = std::min(low, d);
        }
    }
    EXPECT_NEAR(total / (m * m), 1.0, 2e-3);
    EXPECT_LE(top, *spec.phi + 1e-9);
    EXPECT_GE(low, spec.psi - 1e-12);
}

TEST(Density, MixtureEmpiricalDensityWithinLooseBand) {
    const auto spec = DensitySpec::gaussian_mixture(0.5, {{{0.5, 0.5}, 0.25, 1}});
    const Instance inst = generate(1000000, spec, 4242);
    const auto resolved = spec.resolved();
    std::vector<double> counts(32 * 32, 0.0);
    for (const Point& x : inst.points()) {
        const int cx = std::min(31, static_cast<int>(x.x * 32)), cy = std::min(31, static_cast<int>(x.y * 32));
        counts[cy * 32 + cx] += 1.0;
    }
    for (double c : counts) {
        const double density = c / 1e6 * 32 * 32;
        EXPECT_GE(density, resolved.psi * 0.5);
        EXPECT_LE(density, *resolved.phi * 1.5);
    }
}

TEST(Density, PerPointMixtureUsesOwnComponent) {
    const auto spec = DensitySpec::per_point_mixture(0.01, {{{0.1, 0.1}, 0.01, 1}, {{0.9, 0.9}, 0.01, 1}});
    const Instance inst = generate(400, spec, 9);
    int near_own = 0;
    for (VertexId i = 0; i < inst.size(); ++i) {
        const Point c = i % 2 == 0 ? Point{0.1, 0.1} : Point{0.9, 0.9};
        if (dist(inst[i], c) < 0.1) ++near_own;
    }
    EXPECT_GE(near_own, 380);
}

TEST(Instance, RejectsOutOfSquare) {
    EXPECT_THROW(Instance({{0.5, 0.5}, {1.2, 0.5}}), ValidationError);
    EXPECT_THROW(Instance(std::vector<Point>{}), ValidationError);
}

TEST(NearestNeighbor, TwoPoints) {
    const Instance inst({{0, 0}, {1, 0}});
    EXPECT_EQ(inst.nearest_neighbor_distance(0), 1.0);
    EXPECT_EQ(inst.nearest_neighbor_distance(1), 1.0);
}

TEST(NearestNeighbor, Collinear) {
    const Instance inst({{0, 0}, {0.1, 0}, {0.5, 0}});
    EXPECT_DOUBLE_EQ(inst.nearest_neighbor_distance(1), 0.1);
}

TEST(NearestNeighbor, SinglePointThrows) {
    const Instance inst({{0.5, 0.5}});
    EXPECT_THROW(inst.nearest_neighbor_distance(0), ValidationError);
}

TEST(NearestNeighbor, MatchesBruteForce) {
    for (Seed s : {1u, 2u, 3u}) {
        const Instance inst = generate(200, DensitySpec::uniform(), s);
        for (VertexId i = 0; i < inst.size(); ++i) EXPECT_EQ(inst.nearest_neighbor_distance(i), brute_nn(inst, i));
    }
    // Clustered instances stress the ring search.
    const auto clustered = DensitySpec::gaussian_mixture(0.05, {{{0.2, 0.8}, 0.01, 1}});
    const Instance inst = generate(300, clustered, 8);
    for (VertexId i = 0; i < inst.size(); ++i) EXPECT_EQ(inst.nearest_neighbor_distance(i), brute_nn(inst, i));
}

TEST(NearestNeighbor, ExcludingMatchesBruteForce) {
    const Instance inst = generate(300, DensitySpec::uniform(), 17);
    SplitMix64 rng(3);
    for (int k = 0; k < 300; ++k) {
        const VertexId i = rng.below(300);
        const std::array<VertexId, 2> ex{inst.nearest_neighbors(i)[0], static_cast<VertexId>(rng.below(300))};
        double best = std::numeric_limits<double>::infinity();
        for (VertexId j = 0; j < inst.size(); ++j) {
            if (j == i || j == ex[0] || j == ex[1]) continue;
            best = std::min(best, dist(inst[i], inst[j]));
        }
        EXPECT_EQ(inst.nearest_distance_excluding(i, ex), best);
    }
}

TEST(RangeQuery, EmptyAndFull) {
    const Instance inst = generate(100, DensitySpec::uniform(), 4);
    EXPECT_TRUE(inst.points_in_disk({0.5, 0.5}, 0.0).empty() || inst.points_in_disk({0.5, 0.5}, 0.0).size() <= 1);
    EXPECT_TRUE(inst.points_in_disk({5.0, 5.0}, 0.5).empty());
    EXPECT_EQ(inst.points_in_disk({0.5, 0.5}, 1.0).size(), 100u);
}

TEST(RangeQuery, MatchesLinearScan) {
    SplitMix64 rng(11);
    for (int k = 0; k < 150; ++k) {
        const Instance inst = generate(50 + rng.below(400), DensitySpec::uniform(), rng.next());
        const Point c{rng.uniform(), rng.uniform()};
        const double radius = 0.3 * rng.uniform();
        std::vector<VertexId> expect;
        for (VertexId i = 0; i < inst.size(); ++i) {
            if (dist(inst[i], c) <= radius) expect.push_back(i);
        }
        EXPECT_EQ(inst.points_in_disk(c, radius), expect);

        const Point lo{rng.uniform() * 0.5, rng.uniform() * 0.5};
        const Point hi{lo.x + 0.4 * rng.uniform(), lo.y + 0.4 * rng.uniform()};
        auto pred = [&](Point x) { return x.x + x.y > lo.x + hi.y; };
        std::vector<VertexId> expect_region;
        for (VertexId i = 0; i < inst.size(); ++i) {
            const Point x = inst[i];
            if (x.x >= lo.x && x.x <= hi.x && x.y >= lo.y && x.y <= hi.y && pred(x)) expect_region.push_back(i);
        }
        EXPECT_EQ(inst.points_in_region(pred, lo, hi), expect_region);
    }
}

TEST(Tsplib, SquareNormalizedToUnitCorners) {
    const Instance inst = read_tsplib(fixture("square.tsp"));
    ASSERT_EQ(inst.size(), 4u);
    EXPECT_EQ(inst[0], (Point{0, 0}));
    EXPECT_EQ(inst[1], (Point{0, 1}));
    EXPECT_EQ(inst[2], (Point{1, 1}));
    EXPECT_EQ(inst[3], (Point{1, 0}));
}

TEST(Tsplib, ExplicitWeightsRejected) {
    try {
        read_tsplib(fixture("explicit.tsp"));
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("EDGE_WEIGHT_TYPE"), std::string::npos);
    }
}

TEST(Tsplib, BerlinStyleFixture) {
    const Instance inst = read_tsplib(fixture("berlin52_style.tsp"));
    ASSERT_EQ(inst.size(), 52u);
    double max_x = 0, max_y = 0;
    for (const Point& x : inst.points()) {
        EXPECT_GE(x.x, 0.0);
        EXPECT_LE(x.x, 1.0);
        EXPECT_GE(x.y, 0.0);
        EXPECT_LE(x.y, 1.0);
        max_x = std::max(max_x, x.x);
        max_y = std::max(max_y, x.y);
    }
    // Aspect ratio is preserved: the wider axis spans [0, 1] exactly.
    EXPECT_EQ(std::max(max_x, max_y), 1.0);
    EXPECT_LT(std::min(max_x, max_y), 1.0);
}

TEST(Tsplib, MalformedInputs) {
    EXPECT_THROW(read_tsplib("TYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n"),
                 ValidationError);
    EXPECT_THROW(read_tsplib("TYPE : ATSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n"),
                 ValidationError);
    EXPECT_THROW(read_tsplib("TYPE : TSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 zero\n2 1 1\nEOF\n"),
                 ValidationError);
}

TEST(Tsplib, RoundTrip) {
    const Instance inst = generate(40, DensitySpec::uniform(), 6);
    const Instance back = read_tsplib(write_tsplib(inst, "rt"));
    ASSERT_EQ(back.size(), inst.size());
    // Renormalisation may rescale; pairwise distance ratios survive.
    const double scale = dist(back[0], back[1]) / dist(inst[0], inst[1]);
    for (VertexId i = 0; i + 1 < inst.size(); ++i) {
        EXPECT_NEAR(dist(back[i], back[i + 1]), scale * dist(inst[i], inst[i + 1]), 1e-12);
    }
}

TEST(InstanceJson, RoundTripKeepsProvenance) {
    const auto spec = DensitySpec::gaussian_mixture(0.6, {{{0.4, 0.6}, 0.1, 1}});
    Instance inst = generate(64, spec, 99);
    inst.name = "mix";
    const Instance back = read_instance_json(write_instance_json(inst));
    EXPECT_EQ(back.points(), inst.points());
    EXPECT_EQ(back.seed, inst.seed);
    ASSERT_TRUE(back.density.has_value());
    EXPECT_EQ(back.density->kind, DensityKind::TruncatedGaussianMixture);
    EXPECT_EQ(back.name, "mix");
}

TEST(InstanceJson, RejectsWrongFormat) {
    EXPECT_THROW(read_instance_json(R"({"format":"other","points":[[0,0]]})"), ValidationError);
    EXPECT_THROW(read_instance_json("{not json"), ValidationError);
}
