#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgeelim/hs.hpp"
#include "edgeelim/instance.hpp"
#include "edgeelim/jv.hpp"

namespace edgeelim {

enum class Criterion { HS, JV };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

/// Which criterion to run and how. Unset knobs fall back to the per-n
/// defaults of HsParams::for_n / JvParams::for_n.
struct CriterionConfig {
    Criterion criterion = Criterion::JV;
    hs::Mode hs_mode = hs::Mode::PairDirect;
    std::optional<bool> hs_adaptive_delta;
    std::optional<jv::WitnessStrategy> jv_strategy;

    /// "canonical"/"direct" for HS, the witness strategy for JV.
    std::string mode_label(std::size_t n) const;
    hs::HsParams hs_params(std::size_t n) const;
    jv::JvParams jv_params(std::size_t n) const;
    /// Smallest n the criterion accepts (5 for HS, 4 for JV).
    std::size_t min_vertices() const { return criterion == Criterion::HS ? 5 : 4; }
};

struct EdgeVerdict {
    bool eliminated = false;
    std::string witness;  ///< empty when not eliminated
};

/// Witness strings: JV "r=<id>", HS "r=<id>;s=<id>;delta=<%.17g>".
EdgeVerdict evaluate_edge(const Instance& inst, VertexId i, VertexId j, const CriterionConfig& cfg);

/// Evaluates a batch of edges on up to `threads` workers; verdicts come back
/// in input order regardless of scheduling.
std::vector<EdgeVerdict> evaluate_edges(const Instance& inst,
                                        const std::vector<std::pair<VertexId, VertexId>>& edges,
                                        const CriterionConfig& cfg, unsigned threads = 0);

/// Re-checks a witness string against the instance. False on malformed input.
bool replay_witness(const Instance& inst, VertexId i, VertexId j, const std::string& witness,
                    const CriterionConfig& cfg);

/// `count` distinct unordered pairs drawn uniformly, sorted; all pairs when
/// count >= n(n-1)/2.
std::vector<std::pair<VertexId, VertexId>> sample_edges(std::size_t n, std::size_t count,
                                                        std::uint64_t seed);

std::uint64_t pair_count(std::size_t n);

// --- experiments ----------------------------------------------------------

struct ExperimentConfig {
    std::string kind = "rate";  ///< rate | growth | soundness
    CriterionConfig criterion;
    std::vector<std::size_t> n_values;
    std::size_t trials = 1;
    std::optional<std::size_t> edges;        ///< per trial; nullopt = all edges
    std::optional<std::size_t> total_edges;  ///< overrides trials: draw until reached
    DensitySpec density;
    Seed seed = 1;
    std::string output;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    bool record_timing = true;
    // soundness only
    std::size_t n_min = 7;
    std::size_t n_max = 11;

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentRow {
    std::size_t n = 0;
    Criterion criterion = Criterion::JV;
    std::string mode;
    std::uint64_t edges_checked = 0;
    std::uint64_t edges_eliminated = 0;
    double rate = 0.0;
    double remaining_estimate = 0.0;  ///< (1 - rate) * n(n-1)/2, or exact when exhaustive
    bool exhaustive = false;
    double wall_ms = 0.0;
    Seed seed = 0;
    std::size_t instances = 0;
};

std::vector<ExperimentRow> elimination_rate_experiment(const ExperimentConfig& config);

struct GrowthReport {
    std::vector<ExperimentRow> rows;
    double slope = 0.0;            ///< least-squares slope of log(remaining) vs log(n)
    double ratio_variation = 0.0;  ///< (max - min) / min of remaining / n
};

GrowthReport remaining_edges_growth(const ExperimentConfig& config);

struct SoundnessReport {
    std::size_t instances = 0;
    std::uint64_t edges_checked = 0;
    std::uint64_t edges_eliminated = 0;
    std::size_t violations = 0;
    std::vector<std::string> transcript;  ///< one replayable line per violation
};

/// Runs every criterion on all edges of `trials` uniform instances with n
/// drawn from [n_min, n_max] and confirms each elimination with the exact oracle.
SoundnessReport soundness_experiment(std::size_t trials, std::size_t n_min, std::size_t n_max,
                                     const std::vector<CriterionConfig>& criteria, Seed seed,
                                     unsigned threads = 0);

inline constexpr const char* kCsvHeader = "n,criterion,mode,edges_checked,edges_eliminated,rate,seed,wall_ms";

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
void print_summary(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace edgeelim
