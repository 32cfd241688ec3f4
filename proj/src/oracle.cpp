#include "edgeelim/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace edgeelim::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_range(const Instance& inst, std::size_t max_n) {
    const std::size_t n = inst.size();
    if (n < kMinVertices || n > max_n) {
        throw ValidationError("exact oracle supports " + std::to_string(kMinVertices) +
                              " <= n <= " + std::to_string(max_n) + ", got n = " + std::to_string(n));
    }
}

/// Shortest Hamiltonian paths from `start` through all vertices, one per end
/// vertex. dp is indexed [mask][end]; mask always contains start.
class PathDp {
public:
    PathDp(const Instance& inst, VertexId start) : n_(inst.size()), start_(start) {
        d_.assign(n_ * n_, 0.0);
        for (VertexId a = 0; a < n_; ++a) {
            for (VertexId b = 0; b < n_; ++b) d_[a * n_ + b] = inst.distance(a, b);
        }
        const std::size_t full = std::size_t{1} << n_;
        dp_.assign(full * n_, kInf);
        parent_.assign(full * n_, static_cast<std::uint8_t>(0xff));
        dp_[(std::size_t{1} << start) * n_ + start] = 0.0;
        for (std::size_t mask = 1; mask < full; ++mask) {
            if (!(mask & (std::size_t{1} << start))) continue;
            for (VertexId end = 0; end < n_; ++end) {
                const double cur = dp_[mask * n_ + end];
                if (cur == kInf) continue;
                for (VertexId next = 0; next < n_; ++next) {
                    if (mask & (std::size_t{1} << next)) continue;
                    const std::size_t nmask = mask | (std::size_t{1} << next);
                    const double cand = cur + d_[end * n_ + next];
                    double& slot = dp_[nmask * n_ + next];
                    if (cand < slot) {
                        slot = cand;
                        parent_[nmask * n_ + next] = static_cast<std::uint8_t>(end);
                    }
                }
            }
        }
    }

    /// Length of the cycle start -> ... -> end -> start.
    double cycle_through(VertexId end) const {
        const std::size_t full = (std::size_t{1} << n_) - 1;
        return dp_[full * n_ + end] + d_[end * n_ + start_];
    }

    std::vector<VertexId> path_to(VertexId end) const {
        std::vector<VertexId> rev;
        std::size_t mask = (std::size_t{1} << n_) - 1;
        VertexId cur = end;
        while (cur != start_) {
            rev.push_back(cur);
            const VertexId prev = parent_[mask * n_ + cur];
            mask &= ~(std::size_t{1} << cur);
            cur = prev;
        }
        rev.push_back(start_);
        std::reverse(rev.begin(), rev.end());
        return rev;
    }

private:
    std::size_t n_;
    VertexId start_;
    std::vector<double> d_;
    std::vector<double> dp_;
    std::vector<std::uint8_t> parent_;
};

/// Rotates to start at 0 and orients so that order[1] < order.back().
std::vector<VertexId> canonical(std::vector<VertexId> order) {
    const auto it = std::find(order.begin(), order.end(), VertexId{0});
    std::rotate(order.begin(), it, order.end());
    if (order.size() > 2 && order[1] > order.back()) std::reverse(order.begin() + 1, order.end());
    return order;
}

}  // namespace

double tour_length(const Instance& inst, const std::vector<VertexId>& order) {
    double total = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        total += inst.distance(order[k], order[(k + 1) % order.size()]);
    }
    return total;
}

TourResult optimal_tour(const Instance& inst, std::size_t max_n) {
    check_range(inst, max_n);
    const PathDp dp(inst, 0);
    VertexId best_end = 1;
    double best = kInf;
    for (VertexId end = 1; end < inst.size(); ++end) {
        const double len = dp.cycle_through(end);
        if (len < best) {
            best = len;
            best_end = end;
        }
    }
    TourResult res;
    res.order = canonical(dp.path_to(best_end));
    res.length = tour_length(inst, res.order);
    return res;
}

TourResult optimal_tour_with_edge(const Instance& inst, VertexId i, VertexId j, std::size_t max_n) {
    check_range(inst, max_n);
    if (i == j || i >= inst.size() || j >= inst.size()) {
        throw ValidationError("optimal_tour_with_edge: invalid edge");
    }
    // A Hamiltonian path i -> ... -> j closed by the edge j -> i.
    const PathDp dp(inst, i);
    TourResult res;
    res.order = canonical(dp.path_to(j));
    res.length = tour_length(inst, res.order);
    return res;
}

bool is_edge_useless_bruteforce(const Instance& inst, VertexId i, VertexId j, double tol,
                                std::size_t max_n) {
    const double with_edge = optimal_tour_with_edge(inst, i, j, max_n).length;
    const double best = optimal_tour(inst, max_n).length;
    return with_edge > best + tol;
}

EdgeTable edge_table(const Instance& inst, std::size_t max_n) {
    check_range(inst, max_n);
    const std::size_t n = inst.size();
    EdgeTable table;
    table.forced.assign(n, std::vector<double>(n, kInf));
    table.optimum = kInf;
    for (VertexId i = 0; i + 1 < n; ++i) {
        const PathDp dp(inst, i);
        for (VertexId j = i + 1; j < n; ++j) {
            const double len = dp.cycle_through(j);
            table.forced[i][j] = table.forced[j][i] = len;
            table.optimum = std::min(table.optimum, len);
        }
    }
    return table;
}

}  // namespace edgeelim::oracle
