#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "edgeelim/harness.hpp"
#include "edgeelim/hs.hpp"
#include "edgeelim/instance.hpp"
#include "edgeelim/json_io.hpp"
#include "edgeelim/jv.hpp"
#include "edgeelim/oracle.hpp"

namespace edgeelim::cli {

namespace {

using json = nlohmann::json;

/// Bad flag values that CLI11 cannot check by itself.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a verdict disagrees with the exact oracle.
class ViolationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
}

/// A density name ("uniform"), an inline JSON object, or @path to a JSON file.
DensitySpec parse_density(const std::string& text) {
    try {
        if (!text.empty() && text[0] == '@') return json::parse(read_text(text.substr(1))).get<DensitySpec>();
        if (!text.empty() && text[0] == '{') return json::parse(text).get<DensitySpec>();
        return json(text).get<DensitySpec>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("density: ") + e.what());
    }
}

CriterionConfig make_criterion(const std::string& name, const std::string& mode, bool fixed_delta) {
    CriterionConfig cfg;
    cfg.criterion = criterion_from_string(name);
    try {
        if (cfg.criterion == Criterion::HS) {
            if (!mode.empty()) cfg.hs_mode = hs::mode_from_string(mode);
            if (fixed_delta) cfg.hs_adaptive_delta = false;
        } else if (!mode.empty()) {
            cfg.jv_strategy = jv::WitnessStrategy::parse(mode);
        }
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

json criterion_json(const CriterionConfig& cfg, std::size_t n) {
    json j{{"criterion", to_string(cfg.criterion)}, {"mode", cfg.mode_label(n)}};
    if (cfg.criterion == Criterion::HS) {
        const auto p = cfg.hs_params(n);
        j["delta"] = p.delta;
        j["gamma_bar"] = p.gamma_bar;
        j["f_n"] = p.f_n;
        j["adaptive_delta"] = p.adaptive_delta;
        j["eps_margin"] = p.eps_margin;
    } else {
        const auto p = cfg.jv_params(n);
        j["eps_margin"] = p.eps_margin;
    }
    return j;
}

void print_config(std::ostream& err, const std::string& command, const json& j) {
    json full = j;
    full["command"] = command;
    err << "# config " << full.dump() << '\n';
}

/// "all" or "sample:K".
std::optional<std::size_t> parse_edge_spec(const std::string& text) {
    if (text == "all") return std::nullopt;
    if (text.rfind("sample:", 0) == 0) {
        try {
            std::size_t used = 0;
            const auto k = std::stoull(text.substr(7), &used);
            if (used == text.size() - 7 && k >= 1) return static_cast<std::size_t>(k);
        } catch (const std::exception&) {
        }
    }
    throw UsageError("--edges must be 'all' or 'sample:K' with K >= 1");
}

std::string fmt(double v, int precision = 17) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

struct VerdictRow {
    VertexId i = 0, j = 0;
    bool eliminated = false;
    std::string witness;
};

std::vector<VerdictRow> read_verdicts(const std::string& path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::vector<VerdictRow> rows;
    bool header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            if (line != "i,j,eliminated,witness") {
                throw ValidationError("verdict file: expected header 'i,j,eliminated,witness'");
            }
            continue;
        }
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        if (line.back() == ',') cols.emplace_back();
        if (cols.size() != 4) throw ValidationError("verdict file: bad row at line " + std::to_string(lineno));
        try {
            VerdictRow r;
            r.i = std::stoull(cols[0]);
            r.j = std::stoull(cols[1]);
            if (cols[2] != "0" && cols[2] != "1") throw std::invalid_argument("eliminated");
            r.eliminated = cols[2] == "1";
            r.witness = cols[3];
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw ValidationError("verdict file: bad row at line " + std::to_string(lineno));
        }
    }
    return rows;
}

// --- commands -------------------------------------------------------------

struct GenerateOpts {
    std::size_t n = 0;
    std::string density = "uniform";
    Seed seed = 1;
    std::string out;
    std::string format = "json";
    std::string name;
};

int cmd_generate(const GenerateOpts& o, std::ostream& out, std::ostream& err) {
    const DensitySpec spec = parse_density(o.density);
    const DensitySpec resolved = spec.resolved();
    print_config(err, "generate",
                 {{"n", o.n}, {"density", resolved}, {"seed", o.seed}, {"format", o.format},
                  {"out", o.out.empty() ? "-" : o.out}});
    Instance inst = generate(o.n, spec, o.seed);
    inst.name = o.name.empty() ? "uniform-n" + std::to_string(o.n) + "-s" + std::to_string(o.seed) : o.name;
    if (o.name.empty() && resolved.kind != DensityKind::Uniform) {
        inst.name = to_string(resolved.kind) + "-n" + std::to_string(o.n) + "-s" + std::to_string(o.seed);
    }
    write_text(o.out, o.format == "tsplib" ? write_tsplib(inst, inst.name) : write_instance_json(inst), out);
    return kExitOk;
}

struct EliminateOpts {
    std::string in;
    std::string criterion;
    std::string mode;
    std::string edges = "all";
    Seed seed = 1;
    std::string out;
    unsigned threads = 0;
    bool fixed_delta = false;
};

int cmd_eliminate(const EliminateOpts& o, std::ostream& out, std::ostream& err) {
    const CriterionConfig cfg = make_criterion(o.criterion, o.mode, o.fixed_delta);
    const auto sample = parse_edge_spec(o.edges);
    const Instance inst = read_instance_file(o.in);
    const std::size_t n = inst.size();
    json conf = criterion_json(cfg, n);
    conf["in"] = o.in;
    conf["n"] = n;
    conf["edges"] = o.edges;
    conf["seed"] = o.seed;
    conf["threads"] = o.threads;
    print_config(err, "eliminate", conf);
    if (n < cfg.min_vertices()) {
        throw ValidationError(to_string(cfg.criterion) + " criterion requires n >= " +
                              std::to_string(cfg.min_vertices()) + ", got n = " + std::to_string(n));
    }
    const auto edges = sample_edges(n, sample ? *sample : static_cast<std::size_t>(pair_count(n)), o.seed);
    const auto verdicts = evaluate_edges(inst, edges, cfg, o.threads);
    std::string csv = "i,j,eliminated,witness\n";
    std::size_t eliminated = 0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        csv += std::to_string(edges[k].first) + ',' + std::to_string(edges[k].second) + ',' +
               (verdicts[k].eliminated ? "1" : "0") + ',' + verdicts[k].witness + '\n';
        eliminated += verdicts[k].eliminated ? 1 : 0;
    }
    write_text(o.out, csv, out);
    const double rate = edges.empty() ? 0.0 : static_cast<double>(eliminated) / static_cast<double>(edges.size());
    err << "# summary checked=" << edges.size() << " eliminated=" << eliminated
        << " kept=" << edges.size() - eliminated << " rate=" << fmt(rate, 6) << '\n';
    return kExitOk;
}

struct VerifyOpts {
    std::string in;
    std::string criterion;
    std::string mode;
    double tol = 1e-9;
    std::string replay;
    unsigned threads = 0;
    bool fixed_delta = false;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out, std::ostream& err) {
    const CriterionConfig cfg = make_criterion(o.criterion, o.mode, o.fixed_delta);
    if (!(o.tol >= 0.0)) throw ValidationError("--tol must be nonnegative");
    const Instance inst = read_instance_file(o.in);
    const std::size_t n = inst.size();
    json conf = criterion_json(cfg, n);
    conf["in"] = o.in;
    conf["n"] = n;
    conf["tol"] = o.tol;
    conf["replay"] = o.replay.empty() ? json(nullptr) : json(o.replay);
    print_config(err, "verify", conf);

    // Replays on large instances can only re-check witnesses; otherwise the
    // oracle decides.
    const bool use_oracle = n <= oracle::kDefaultMaxVertices;
    if (!use_oracle && o.replay.empty()) {
        throw ValidationError("verify: exact oracle supports n <= " +
                              std::to_string(oracle::kDefaultMaxVertices) + ", got n = " + std::to_string(n));
    }
    if (n < cfg.min_vertices()) {
        throw ValidationError(to_string(cfg.criterion) + " criterion requires n >= " +
                              std::to_string(cfg.min_vertices()) + ", got n = " + std::to_string(n));
    }

    std::vector<VerdictRow> rows;
    if (!o.replay.empty()) {
        rows = read_verdicts(o.replay);
        for (const auto& r : rows) {
            if (r.i >= n || r.j >= n || r.i == r.j) throw ValidationError("verdict file: edge out of range");
        }
    } else {
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
        }
        const auto verdicts = evaluate_edges(inst, edges, cfg, o.threads);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            rows.push_back({edges[k].first, edges[k].second, verdicts[k].eliminated, verdicts[k].witness});
        }
    }

    std::optional<oracle::EdgeTable> table;
    if (use_oracle) table = oracle::edge_table(inst);
    out << "i,j,eliminated,oracle_useless,excess,witness_ok,status\n";
    std::size_t violations = 0, eliminated = 0;
    for (const auto& r : rows) {
        std::string oracle_col = "na", excess_col = "na", witness_col = "na";
        bool ok = true;
        if (table) {
            const bool useless = table->useless(r.i, r.j, o.tol);
            oracle_col = useless ? "1" : "0";
            excess_col = fmt(table->forced[r.i][r.j] - table->optimum, 6);
            if (r.eliminated && !useless) ok = false;
        }
        if (r.eliminated) {
            ++eliminated;
            const bool replays = replay_witness(inst, r.i, r.j, r.witness, cfg);
            witness_col = replays ? "1" : "0";
            if (!replays) ok = false;
        }
        if (!ok) ++violations;
        out << r.i << ',' << r.j << ',' << (r.eliminated ? 1 : 0) << ',' << oracle_col << ',' << excess_col
            << ',' << witness_col << ',' << (ok ? "ok" : "VIOLATION") << '\n';
    }
    err << "# summary checked=" << rows.size() << " eliminated=" << eliminated << " violations=" << violations
        << (table ? " optimum=" + fmt(table->optimum) : std::string()) << '\n';
    if (violations > 0) throw ViolationError(std::to_string(violations) + " oracle violation(s)");
    return kExitOk;
}

struct ExperimentOpts {
    std::string config;
    std::string out;
    std::optional<unsigned> threads;
    std::optional<Seed> seed;
};

int cmd_experiment(const ExperimentOpts& o, std::ostream& out, std::ostream& err) {
    json raw;
    try {
        raw = json::parse(read_text(o.config));
    } catch (const json::exception& e) {
        throw ValidationError("experiment config '" + o.config + "': " + e.what());
    }
    if (o.threads) raw["threads"] = *o.threads;
    if (o.seed) raw["seed"] = *o.seed;
    if (!o.out.empty()) raw["output"] = o.out;
    const ExperimentConfig cfg = ExperimentConfig::from_json(raw);
    print_config(err, "experiment", cfg.to_json());

    if (cfg.kind == "soundness") {
        std::vector<CriterionConfig> crits{cfg.criterion};
        const auto report = soundness_experiment(cfg.trials, cfg.n_min, cfg.n_max, crits, cfg.seed, cfg.threads);
        std::ostringstream csv;
        csv << "instances,edges_checked,edges_eliminated,violations\n"
            << report.instances << ',' << report.edges_checked << ',' << report.edges_eliminated << ','
            << report.violations << '\n';
        write_text(cfg.output, csv.str(), out);
        for (const auto& line : report.transcript) err << "# violation " << line << '\n';
        if (report.violations > 0) throw ViolationError(std::to_string(report.violations) + " oracle violation(s)");
        return kExitOk;
    }

    std::vector<ExperimentRow> rows;
    std::optional<GrowthReport> growth;
    if (cfg.kind == "growth") {
        growth = remaining_edges_growth(cfg);
        rows = growth->rows;
    } else {
        rows = elimination_rate_experiment(cfg);
    }
    write_text(cfg.output, rows_to_csv(rows), out);
    print_summary(err, rows);
    if (growth) {
        err << "# growth slope=" << fmt(growth->slope, 6) << " remaining_over_n_variation="
            << fmt(growth->ratio_variation, 6) << '\n';
    }
    return kExitOk;
}

struct InspectOpts {
    std::string in;
    std::vector<VertexId> edge;
    std::string criterion = "jv";
    std::string mode;
};

int cmd_inspect(const InspectOpts& o, std::ostream& out, std::ostream& err) {
    const Instance inst = read_instance_file(o.in);
    const std::size_t n = inst.size();
    json conf{{"in", o.in}, {"n", n}};
    if (!o.edge.empty()) conf["edge"] = o.edge;
    print_config(err, "inspect", conf);

    json info{{"n", n}, {"name", inst.name}};
    if (inst.seed) info["seed"] = *inst.seed;
    if (inst.density) info["density"] = *inst.density;
    if (n >= 2) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
        for (VertexId i = 0; i < n; ++i) {
            const double d = inst.nearest_neighbor_distance(i);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sum += d;
        }
        info["nearest_neighbor"] = {{"min", lo}, {"mean", sum / static_cast<double>(n)}, {"max", hi}};
        info["mean_nn_times_sqrt_n"] = sum / static_cast<double>(n) * std::sqrt(static_cast<double>(n));
    }
    if (!o.edge.empty()) {
        if (o.edge.size() != 2 || o.edge[0] >= n || o.edge[1] >= n || o.edge[0] == o.edge[1]) {
            throw ValidationError("--edge needs two distinct vertex ids below n");
        }
        const VertexId p = o.edge[0], q = o.edge[1];
        const CriterionConfig cfg = make_criterion(o.criterion, o.mode, false);
        json e{{"p", p}, {"q", q}, {"length", inst.distance(p, q)}};
        if (n >= cfg.min_vertices()) {
            const EdgeVerdict v = evaluate_edge(inst, p, q, cfg);
            e["criterion"] = criterion_json(cfg, n);
            e["eliminated"] = v.eliminated;
            e["witness"] = v.witness;
            if (cfg.criterion == Criterion::JV && v.eliminated) {
                const auto w = std::stoull(v.witness.substr(2));
                const auto h = jv::hyperbola_params(inst[p], inst[q], inst[w]);
                e["hyperbola"] = {{"a", h.a}, {"b", h.b}};
            }
            if (cfg.criterion == Criterion::HS) {
                const auto regions = hs::canonical_test_regions(inst, p, q, cfg.hs_params(n));
                std::size_t strong = 0;
                for (const auto& region : regions) {
                    if (hs::region_status(region, inst, p, q).state == hs::RegionState::StronglyCertifying) ++strong;
                }
                e["canonical_regions"] = regions.size();
                e["strongly_certifying"] = strong;
            }
        }
        info["edge"] = e;
    }
    out << info.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Euclidean TSP edge elimination toolkit", "edgeelim"};
    app.require_subcommand(1);
    app.fallthrough(false);

    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "Draw a random instance in the unit square");
    g->add_option("--n", gen.n, "Number of points")->required();
    g->add_option("--density", gen.density, "uniform | gaussian | per-point-mixture | JSON object | @file")
        ->capture_default_str();
    g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output path (stdout when omitted)");
    g->add_option("--format", gen.format, "Output format")->check(CLI::IsMember({"json", "tsplib"}))->capture_default_str();
    g->add_option("--name", gen.name, "Instance name");

    EliminateOpts elim;
    auto* e = app.add_subcommand("eliminate", "Classify edges with an elimination criterion");
    e->add_option("--in", elim.in, "Instance file (JSON or TSPLIB EUC_2D)")->required();
    e->add_option("--criterion", elim.criterion, "hs | jv")->required()->check(CLI::IsMember({"hs", "jv"}));
    e->add_option("--mode", elim.mode, "hs: canonical | direct; jv: all | nearest:K");
    e->add_option("--edges", elim.edges, "all | sample:K")->capture_default_str();
    e->add_option("--seed", elim.seed, "Seed for edge sampling")->capture_default_str();
    e->add_option("--out", elim.out, "CSV output path (stdout when omitted)");
    e->add_option("--threads", elim.threads, "Worker cap (0 = all cores)")->capture_default_str();
    e->add_flag("--fixed-delta", elim.fixed_delta, "hs direct mode: use delta = 1/sqrt(n) for every pair");

    VerifyOpts ver;
    auto* v = app.add_subcommand("verify", "Compare verdicts with the exact oracle (n <= 15)");
    v->add_option("--in", ver.in, "Instance file")->required();
    v->add_option("--criterion", ver.criterion, "hs | jv")->required()->check(CLI::IsMember({"hs", "jv"}));
    v->add_option("--mode", ver.mode, "hs: canonical | direct; jv: all | nearest:K");
    v->add_option("--tol", ver.tol, "Oracle tolerance on tour length")->capture_default_str();
    v->add_option("--replay", ver.replay, "Verdict CSV from 'eliminate' to re-check instead of recomputing");
    v->add_option("--threads", ver.threads, "Worker cap (0 = all cores)")->capture_default_str();
    v->add_flag("--fixed-delta", ver.fixed_delta, "hs direct mode: use delta = 1/sqrt(n) for every pair");

    ExperimentOpts exp;
    auto* x = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a JSON config");
    x->add_option("--config", exp.config, "Experiment config (JSON)")->required();
    x->add_option("--out", exp.out, "CSV output path (overrides the config)");
    x->add_option("--threads", exp.threads, "Worker cap (overrides the config)");
    x->add_option("--seed", exp.seed, "Master seed (overrides the config)");

    InspectOpts ins;
    auto* i = app.add_subcommand("inspect", "Summarise an instance or diagnose one edge");
    i->add_option("--in", ins.in, "Instance file")->required();
    i->add_option("--edge", ins.edge, "Two vertex ids")->expected(2);
    i->add_option("--criterion", ins.criterion, "hs | jv")->check(CLI::IsMember({"hs", "jv"}))->capture_default_str();
    i->add_option("--mode", ins.mode, "hs: canonical | direct; jv: all | nearest:K");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& pe) {
        const int code = app.exit(pe, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (g->parsed()) return cmd_generate(gen, out, err);
        if (e->parsed()) return cmd_eliminate(elim, out, err);
        if (v->parsed()) return cmd_verify(ver, out, err);
        if (x->parsed()) return cmd_experiment(exp, out, err);
        if (i->parsed()) return cmd_inspect(ins, out, err);
    } catch (const UsageError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const ViolationError& ex) {
        err << "oracle violation: " << ex.what() << '\n';
        return kExitViolation;
    } catch (const std::invalid_argument& ex) {
        err << "validation error: " << ex.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& ex) {
        err << "validation error: " << ex.what() << '\n';
        return kExitValidation;
    }
    return kExitUsage;
}

}  // namespace edgeelim::cli
