#include "edgeelim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "edgeelim/json_io.hpp"
#include "edgeelim/oracle.hpp"
#include "edgeelim/random.hpp"

namespace edgeelim {

namespace {

std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(k) for k in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots so the outcome is independent of scheduling.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = next++; k < count; k = next++) fn(k);
            } catch (...) {
                errors[w] = std::current_exception();
                next = count;
            }
        });
    }
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Parses "key=value;key=value".
std::optional<std::vector<std::pair<std::string, std::string>>> parse_fields(const std::string& s) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) return std::nullopt;
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

std::optional<VertexId> parse_id(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) return std::nullopt;
        return static_cast<VertexId>(v);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

std::string to_string(Criterion c) { return c == Criterion::HS ? "hs" : "jv"; }

Criterion criterion_from_string(const std::string& s) {
    if (s == "hs" || s == "HS") return Criterion::HS;
    if (s == "jv" || s == "JV") return Criterion::JV;
    throw ValidationError("unknown criterion '" + s + "' (expected hs|jv)");
}

std::string CriterionConfig::mode_label(std::size_t n) const {
    if (criterion == Criterion::HS) return hs::to_string(hs_mode);
    return jv_params(n).strategy.to_string();
}

hs::HsParams CriterionConfig::hs_params(std::size_t n) const {
    auto params = hs::HsParams::for_n(n);
    if (hs_adaptive_delta) params.adaptive_delta = *hs_adaptive_delta;
    return params;
}

jv::JvParams CriterionConfig::jv_params(std::size_t n) const {
    auto params = jv::JvParams::for_n(n);
    if (jv_strategy) params.strategy = *jv_strategy;
    return params;
}

EdgeVerdict evaluate_edge(const Instance& inst, VertexId i, VertexId j, const CriterionConfig& cfg) {
    EdgeVerdict v;
    if (cfg.criterion == Criterion::JV) {
        const auto res = jv::jv_edge_useless(inst, i, j, cfg.jv_params(inst.size()));
        v.eliminated = res.useless;
        if (res.witness) v.witness = "r=" + std::to_string(res.witness->r);
    } else {
        const auto res = hs::hs_edge_useless(inst, i, j, cfg.hs_params(inst.size()), cfg.hs_mode);
        v.eliminated = res.useless;
        if (res.witness) {
            v.witness = "r=" + std::to_string(res.witness->r) + ";s=" + std::to_string(res.witness->s) +
                        ";delta=" + fmt_g17(res.witness->delta);
        }
    }
    return v;
}

std::vector<EdgeVerdict> evaluate_edges(const Instance& inst,
                                        const std::vector<std::pair<VertexId, VertexId>>& edges,
                                        const CriterionConfig& cfg, unsigned threads) {
    std::vector<EdgeVerdict> out(edges.size());
    // Chunks keep per-task overhead small for cheap criteria.
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (edges.size() + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(edges.size(), (c + 1) * kChunk);
        for (std::size_t k = c * kChunk; k < end; ++k) {
            out[k] = evaluate_edge(inst, edges[k].first, edges[k].second, cfg);
        }
    });
    return out;
}

bool replay_witness(const Instance& inst, VertexId i, VertexId j, const std::string& witness,
                    const CriterionConfig& cfg) {
    const auto fields = parse_fields(witness);
    if (!fields) return false;
    std::optional<VertexId> r, s;
    std::optional<double> delta;
    for (const auto& [k, val] : *fields) {
        if (k == "r") {
            r = parse_id(val);
        } else if (k == "s") {
            s = parse_id(val);
        } else if (k == "delta") {
            try {
                delta = std::stod(val);
            } catch (const std::exception&) {
                return false;
            }
        }
    }
    if (!r || *r >= inst.size()) return false;
    if (cfg.criterion == Criterion::JV) {
        return jv::jv_witness_eliminates(inst, i, j, *r, cfg.jv_params(inst.size()));
    }
    if (!s || *s >= inst.size() || !delta) return false;
    return hs::pair_test_eliminates(inst, i, j, *r, *s, *delta,
                                        cfg.hs_params(inst.size()).eps_margin);
}

std::uint64_t pair_count(std::size_t n) {
    return static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
}

std::vector<std::pair<VertexId, VertexId>> sample_edges(std::size_t n, std::size_t count,
                                                        std::uint64_t seed) {
    std::vector<std::pair<VertexId, VertexId>> out;
    if (n < 2) return out;
    if (count >= pair_count(n)) {
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) out.emplace_back(i, j);
        }
        return out;
    }
    SplitMix64 rng(seed);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    while (out.size() < count) {
        auto a = static_cast<VertexId>(rng.below(n));
        auto b = static_cast<VertexId>(rng.below(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (seen.insert(static_cast<std::uint64_t>(a) * n + b).second) out.emplace_back(a, b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
    if (kind != "rate" && kind != "growth" && kind != "soundness") {
        throw ValidationError("experiment kind must be rate, growth or soundness");
    }
    if (kind == "soundness") {
        if (n_min < 5 || n_max > 15 || n_min > n_max) {
            throw ValidationError("soundness: n range must lie within [5, 15]");
        }
        return;
    }
    if (n_values.empty()) throw ValidationError("experiment: n_values must not be empty");
    for (auto n : n_values) {
        if (n < criterion.min_vertices()) {
            throw ValidationError("experiment: n = " + std::to_string(n) + " is below the minimum " +
                                  std::to_string(criterion.min_vertices()) + " for " +
                                  to_string(criterion.criterion));
        }
    }
    if (edges && *edges == 0) throw ValidationError("experiment: edges per trial must be positive");
    if (total_edges && *total_edges == 0) throw ValidationError("experiment: total_edges must be positive");
    if (!total_edges && trials == 0) throw ValidationError("experiment: trials must be positive");
    if (kind == "growth") {
        std::set<std::size_t> distinct(n_values.begin(), n_values.end());
        if (distinct.size() < 3) throw ValidationError("growth: need at least 3 distinct n values");
    }
    (void)density.resolved();
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        c.kind = j.value("experiment", std::string("rate"));
        c.criterion.criterion = criterion_from_string(j.at("criterion").get<std::string>());
        if (j.contains("mode")) c.criterion.hs_mode = hs::mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("adaptive_delta")) c.criterion.hs_adaptive_delta = j.at("adaptive_delta").get<bool>();
        if (j.contains("strategy")) {
            c.criterion.jv_strategy = jv::WitnessStrategy::parse(j.at("strategy").get<std::string>());
        }
        if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<std::size_t>>();
        c.trials = j.value("trials", std::size_t{1});
        if (j.contains("edges")) {
            const auto& e = j.at("edges");
            if (e.is_string()) {
                if (e.get<std::string>() != "all") throw ValidationError("edges must be a count or \"all\"");
            } else {
                const auto v = e.get<long long>();
                if (v <= 0) throw ValidationError("experiment: edges per trial must be positive");
                c.edges = static_cast<std::size_t>(v);
            }
        }
        if (j.contains("total_edges")) c.total_edges = j.at("total_edges").get<std::size_t>();
        if (j.contains("density")) c.density = j.at("density").get<DensitySpec>();
        c.seed = j.value("seed", Seed{1});
        c.output = j.value("output", std::string());
        c.threads = j.value("threads", 0u);
        c.record_timing = j.value("record_timing", true);
        c.n_min = j.value("n_min", std::size_t{7});
        c.n_max = j.value("n_max", std::size_t{11});
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("experiment config: ") + e.what());
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["experiment"] = kind;
    j["criterion"] = to_string(criterion.criterion);
    if (criterion.criterion == Criterion::HS) {
        j["mode"] = hs::to_string(criterion.hs_mode);
        j["adaptive_delta"] = criterion.hs_adaptive_delta.value_or(hs::HsParams{}.adaptive_delta);
    } else {
        j["strategy"] = criterion.jv_strategy ? criterion.jv_strategy->to_string() : "default";
    }
    j["n_values"] = n_values;
    j["trials"] = trials;
    if (edges) {
        j["edges"] = *edges;
    } else {
        j["edges"] = "all";
    }
    if (total_edges) j["total_edges"] = *total_edges;
    j["density"] = density.resolved();
    j["seed"] = seed;
    j["threads"] = resolve_threads(threads);
    j["record_timing"] = record_timing;
    if (kind == "soundness") {
        j["n_min"] = n_min;
        j["n_max"] = n_max;
    }
    if (!output.empty()) j["output"] = output;
    return j;
}

// ---------------------------------------------------------------------------

namespace {

struct TrialPlan {
    std::size_t n_index;
    std::size_t trial;
    std::size_t edges;  ///< pairs to draw (>= pair_count means all)
};

struct TrialResult {
    std::uint64_t checked = 0;
    std::uint64_t eliminated = 0;
    double wall_ms = 0.0;
};

Seed instance_seed(Seed master, std::size_t n, std::size_t trial) {
    return derive_stream(derive_stream(master, n), trial);
}

}  // namespace

std::vector<ExperimentRow> elimination_rate_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<TrialPlan> plan;
    for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
        const std::size_t n = config.n_values[ni];
        const std::uint64_t per_trial_cap = pair_count(n);
        const std::size_t per_trial = static_cast<std::size_t>(
            std::min<std::uint64_t>(config.edges.value_or(per_trial_cap), per_trial_cap));
        if (config.total_edges) {
            std::size_t remaining = *config.total_edges;
            for (std::size_t t = 0; remaining > 0; ++t) {
                const std::size_t take = std::min(per_trial, remaining);
                plan.push_back({ni, t, take});
                remaining -= take;
            }
        } else {
            for (std::size_t t = 0; t < config.trials; ++t) plan.push_back({ni, t, per_trial});
        }
    }

    std::vector<TrialResult> results(plan.size());
    parallel_for(plan.size(), config.threads, [&](std::size_t k) {
        const auto start = std::chrono::steady_clock::now();
        const TrialPlan& tp = plan[k];
        const std::size_t n = config.n_values[tp.n_index];
        const Seed s = instance_seed(config.seed, n, tp.trial);
        const Instance inst = generate(n, config.density, s);
        TrialResult& res = results[k];
        for (const auto& [i, j] : sample_edges(n, tp.edges, derive_stream(s, 0xed9e))) {
            ++res.checked;
            if (evaluate_edge(inst, i, j, config.criterion).eliminated) ++res.eliminated;
        }
        res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<ExperimentRow> rows;
    for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
        const std::size_t n = config.n_values[ni];
        ExperimentRow row;
        row.n = n;
        row.criterion = config.criterion.criterion;
        row.mode = config.criterion.mode_label(n);
        row.seed = config.seed;
        bool all_exhaustive = true;
        for (std::size_t k = 0; k < plan.size(); ++k) {
            if (plan[k].n_index != ni) continue;
            row.edges_checked += results[k].checked;
            row.edges_eliminated += results[k].eliminated;
            row.wall_ms += results[k].wall_ms;
            ++row.instances;
            all_exhaustive = all_exhaustive && plan[k].edges >= pair_count(n);
        }
        row.rate = row.edges_checked ? static_cast<double>(row.edges_eliminated) /
                                           static_cast<double>(row.edges_checked)
                                     : 0.0;
        row.exhaustive = all_exhaustive;
        row.remaining_estimate =
            all_exhaustive
                ? static_cast<double>(row.edges_checked - row.edges_eliminated) / static_cast<double>(row.instances)
                : (1.0 - row.rate) * static_cast<double>(pair_count(n));
        if (!config.record_timing) row.wall_ms = 0.0;
        rows.push_back(row);
    }
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) throw ValidationError("loglog_slope: x values must differ");
    return (m * sxy - sx * sy) / denom;
}

GrowthReport remaining_edges_growth(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.kind = "growth";
    c.validate();
    GrowthReport report;
    report.rows = elimination_rate_experiment(c);
    std::vector<double> xs, ys;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : report.rows) {
        xs.push_back(static_cast<double>(row.n));
        ys.push_back(row.remaining_estimate);
        const double ratio = row.remaining_estimate / static_cast<double>(row.n);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    report.slope = loglog_slope(xs, ys);
    report.ratio_variation = lo > 0.0 ? (hi - lo) / lo : std::numeric_limits<double>::infinity();
    return report;
}

SoundnessReport soundness_experiment(std::size_t trials, std::size_t n_min, std::size_t n_max,
                                     const std::vector<CriterionConfig>& criteria, Seed seed,
                                     unsigned threads) {
    if (n_min < 5 || n_max > oracle::kDefaultMaxVertices || n_min > n_max) {
        throw ValidationError("soundness: n range must lie within [5, 15]");
    }
    struct Slot {
        std::uint64_t checked = 0;
        std::uint64_t eliminated = 0;
        std::vector<std::string> violations;
    };
    std::vector<Slot> slots(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const Seed s = derive_stream(seed, t);
        SplitMix64 pick(derive_stream(s, 0x5e1ec7));
        const std::size_t n = n_min + static_cast<std::size_t>(pick.below(n_max - n_min + 1));
        const Instance inst = generate(n, DensitySpec::uniform(), s);
        const auto table = oracle::edge_table(inst);
        Slot& slot = slots[t];
        for (const auto& cfg : criteria) {
            for (VertexId i = 0; i < n; ++i) {
                for (VertexId j = i + 1; j < n; ++j) {
                    ++slot.checked;
                    const EdgeVerdict v = evaluate_edge(inst, i, j, cfg);
                    if (!v.eliminated) continue;
                    ++slot.eliminated;
                    const bool confirmed = table.useless(i, j);
                    const bool replays = replay_witness(inst, i, j, v.witness, cfg);
                    if (!confirmed || !replays) {
                        std::ostringstream line;
                        line << "trial=" << t << " instance_seed=" << s << " n=" << n
                             << " criterion=" << to_string(cfg.criterion) << " mode=" << cfg.mode_label(n)
                             << " edge=" << i << "-" << j << " witness=" << v.witness
                             << " optimum=" << fmt_g17(table.optimum)
                             << " forced=" << fmt_g17(table.forced[i][j])
                             << (replays ? "" : " (witness does not replay)");
                        slot.violations.push_back(line.str());
                    }
                }
            }
        }
    });
    SoundnessReport report;
    report.instances = trials;
    for (auto& slot : slots) {
        report.edges_checked += slot.checked;
        report.edges_eliminated += slot.eliminated;
        for (auto& v : slot.violations) report.transcript.push_back(std::move(v));
    }
    report.violations = report.transcript.size();
    return report;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        char rate[32], wall[32];
        std::snprintf(rate, sizeof rate, "%.6f", r.rate);
        std::snprintf(wall, sizeof wall, "%.0f", r.wall_ms);
        out << r.n << ',' << to_string(r.criterion) << ',' << r.mode << ',' << r.edges_checked << ','
            << r.edges_eliminated << ',' << rate << ',' << r.seed << ',' << wall << '\n';
    }
    return out.str();
}

void print_summary(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << std::left << std::setw(9) << "n" << std::setw(5) << "crit" << std::setw(12) << "mode"
        << std::right << std::setw(10) << "checked" << std::setw(11) << "eliminated" << std::setw(9)
        << "rate%" << std::setw(15) << "remaining" << std::setw(12) << "remain/n" << std::setw(10)
        << "wall_ms" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(9) << r.n << std::setw(5) << to_string(r.criterion) << std::setw(12)
            << r.mode << std::right << std::setw(10) << r.edges_checked << std::setw(11)
            << r.edges_eliminated << std::setw(9) << std::fixed << std::setprecision(2) << 100.0 * r.rate
            << std::setw(15) << std::setprecision(1) << r.remaining_estimate << std::setw(12)
            << std::setprecision(3) << r.remaining_estimate / static_cast<double>(r.n) << std::setw(10)
            << std::setprecision(0) << r.wall_ms << '\n';
        out.unsetf(std::ios::fixed);
    }
}

}  // namespace edgeelim
