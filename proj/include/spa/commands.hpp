#pragma once

#include "spa/experiment.hpp"
#include "spa/synthetic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace spa {

// Everything a CLI invocation needs; filled from a config file and flags.
struct RunConfig {
    std::string edges_path;
    std::string features_path;
    std::string labels_path;
    std::string synthetic;  // "sbm:..." replaces the three paths when set
    bool row_normalize = false;

    std::vector<std::string> strategies{"spa"};
    ScanParams scan;
    PageRankParams pagerank;
    std::size_t featprop_steps = 2;
    std::vector<std::size_t> budgets{10};
    std::vector<std::uint64_t> seeds{0};
    TrainConfig train;
    std::size_t jobs = 1;
    std::string out_dir = ".";

    std::size_t repetitions = 10;
    std::vector<double> sweep_epsilons{0.3, 0.5, 0.7, 0.9};
    std::vector<std::size_t> sweep_mus{1, 2, 3};

    ExperimentOptions experiment_options() const {
        return {scan, pagerank, featprop_steps, train, jobs};
    }

    void validate() const {
        if (synthetic.empty()) {
            for (const auto* p : {&edges_path, &features_path, &labels_path}) {
                if (p->empty()) {
                    throw std::invalid_argument("--edges, --features and --labels are required "
                                                "unless --synthetic is given");
                }
                if (!std::filesystem::exists(*p)) throw std::invalid_argument("no such file: " + *p);
            }
        }
        if (budgets.empty()) throw std::invalid_argument("--budgets must not be empty");
        if (seeds.empty()) throw std::invalid_argument("--seeds must not be empty");
        if (strategies.empty()) throw std::invalid_argument("--strategy must not be empty");
        scan.validate();
        pagerank.validate();
        train.validate();
    }

    std::vector<Strategy> parsed_strategies() const {
        std::vector<Strategy> out;
        for (const auto& name : strategies) {
            const auto s = parse_strategy(name);
            if (!s) {
                throw std::invalid_argument("unknown strategy '" + name +
                                            "'; valid strategies: " + strategy_list());
            }
            out.push_back(*s);
        }
        return out;
    }
};

inline AttributedGraph load_dataset(const RunConfig& cfg) {
    AttributedGraph g = cfg.synthetic.empty()
                            ? load_graph(cfg.edges_path, cfg.features_path, cfg.labels_path)
                            : generate_sbm(SbmSpec::parse(cfg.synthetic));
    if (cfg.row_normalize) g = g.with_row_normalized_features();
    return g;
}

namespace detail {

inline std::filesystem::path output_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << std::setprecision(10);
    return os;
}

inline void report_graph(std::ostream& out, const AttributedGraph& g) {
    out << "graph: " << g.num_nodes() << " nodes, " << g.num_edges() << " edges, " << g.feature_dim()
        << " features, " << g.num_classes() << " classes";
    if (g.load_stats().self_loops_dropped > 0) {
        out << " (" << g.load_stats().self_loops_dropped << " self-loop lines dropped)";
    }
    out << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace detail

// Size histogram over power-of-two bins: [2,3], [4,7], [8,15], ...
inline std::vector<std::pair<std::string, std::size_t>> size_histogram(const CommunityAssignment& a) {
    std::vector<std::pair<std::string, std::size_t>> bins;
    std::size_t max_size = 0;
    for (const auto& c : a.communities) max_size = std::max(max_size, c.size());
    for (std::size_t lo = 2; lo <= max_size; lo *= 2) {
        const std::size_t hi = 2 * lo - 1;
        std::size_t count = 0;
        for (const auto& c : a.communities) count += (c.size() >= lo && c.size() <= hi);
        bins.emplace_back(std::to_string(lo) + "-" + std::to_string(hi), count);
    }
    return bins;
}

/// Writes communities.csv and prints community count, size histogram and
/// outlier count.
inline int cmd_partition(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        const AttributedGraph g = load_dataset(cfg);
        detail::report_graph(out, g);
        const CommunityAssignment parts = scan_partition(g, cfg.scan);
        auto os = detail::open_output(detail::output_dir(cfg) / "communities.csv");
        write_communities_csv(os, parts);
        out << "communities: " << parts.num_communities() << '\n';
        out << "outliers: " << parts.outliers.size() << '\n';
        out << "size histogram:\n";
        for (const auto& [range, count] : size_histogram(parts)) out << "  " << range << ": " << count << '\n';
        return 0;
    });
}

inline std::string selection_filename(std::string_view strategy, std::size_t budget, std::uint64_t seed) {
    return "selection_" + std::string(strategy) + "_b" + std::to_string(budget) + "_s" +
           std::to_string(seed) + ".json";
}

/// One selection JSON per (strategy, budget, seed).
inline int cmd_select(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        const auto strategies = cfg.parsed_strategies();
        const AttributedGraph g = load_dataset(cfg);
        detail::report_graph(out, g);
        const auto opts = cfg.experiment_options();
        const auto dir = detail::output_dir(cfg);
        for (Strategy s : strategies) {
            for (std::size_t b : cfg.budgets) {
                for (std::uint64_t seed : cfg.seeds) {
                    const SelectionResult r = select_with_strategy(g, s, b, seed, opts);
                    auto os = detail::open_output(dir / selection_filename(to_string(s), b, seed));
                    os << to_json(r, b, seed).dump(2) << '\n';
                    out << to_string(s) << " budget=" << b << " seed=" << seed
                        << " selected=" << r.selected.size() << " query_time_ms=" << r.query_time.count()
                        << '\n';
                }
            }
        }
        return 0;
    });
}

/// runs.csv (flushed row by row), aggregate.csv and report.json.
inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        const auto strategies = cfg.parsed_strategies();
        const AttributedGraph g = load_dataset(cfg);
        detail::report_graph(out, g);
        for (std::size_t b : cfg.budgets) {
            if (b < 1 || b >= g.num_nodes()) {
                throw std::invalid_argument("budget " + std::to_string(b) + " must lie in [1, " +
                                            std::to_string(g.num_nodes()) + ")");
            }
        }
        const auto dir = detail::output_dir(cfg);
        auto runs_csv = detail::open_output(dir / "runs.csv");
        write_runs_csv_header(runs_csv);
        const EvalReport report =
            run_experiment(g, strategies, cfg.budgets, cfg.seeds, cfg.experiment_options(),
                           [&](const RunRecord& r) {
                               write_run_csv_row(runs_csv, r);
                               runs_csv.flush();
                           });
        auto agg = detail::open_output(dir / "aggregate.csv");
        write_aggregate_csv(agg, report);
        auto js = detail::open_output(dir / "report.json");
        js << to_json(report).dump(2) << '\n';
        out << "strategy   budget  accuracy          macro_f1\n";
        for (const auto& a : report.aggregates) {
            out << std::left << std::setw(11) << a.strategy << std::setw(8) << a.budget << std::fixed
                << std::setprecision(4) << a.accuracy_mean << " +- " << a.accuracy_std << "  "
                << a.macro_f1_mean << " +- " << a.macro_f1_std << '\n';
        }
        return 0;
    });
}

struct TimingSummary {
    double median_ms = 0.0;
    double p95_ms = 0.0;
};

// Median (mean of the middle pair for even counts) and nearest-rank p95.
inline TimingSummary summarize_timings(std::vector<double> ms) {
    if (ms.empty()) return {};
    std::sort(ms.begin(), ms.end());
    const std::size_t n = ms.size();
    TimingSummary t;
    t.median_ms = n % 2 ? ms[n / 2] : 0.5 * (ms[n / 2 - 1] + ms[n / 2]);
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    t.p95_ms = ms[std::max<std::size_t>(rank, 1) - 1];
    return t;
}

/// Times each strategy's selection call `repetitions` times at the first
/// budget and first seed; writes benchmark.csv.
inline int cmd_benchmark(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        if (cfg.repetitions < 1) throw std::invalid_argument("--repetitions must be >= 1");
        const auto strategies = cfg.parsed_strategies();
        const AttributedGraph g = load_dataset(cfg);
        detail::report_graph(out, g);
        const auto opts = cfg.experiment_options();
        auto os = detail::open_output(detail::output_dir(cfg) / "benchmark.csv");
        os << "strategy,median_ms,p95_ms\n";
        for (Strategy s : strategies) {
            std::vector<double> ms;
            for (std::size_t r = 0; r < cfg.repetitions; ++r) {
                ms.push_back(select_with_strategy(g, s, cfg.budgets.front(), cfg.seeds.front(), opts)
                                 .query_time.count());
            }
            const TimingSummary t = summarize_timings(ms);
            os << to_string(s) << ',' << t.median_ms << ',' << t.p95_ms << '\n';
            out << to_string(s) << ": median " << t.median_ms << " ms, p95 " << t.p95_ms << " ms over "
                << cfg.repetitions << " runs\n";
        }
        return 0;
    });
}

/// Community counts over an epsilon x mu grid; writes sweep.csv.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        const AttributedGraph g = load_dataset(cfg);
        detail::report_graph(out, g);
        auto os = detail::open_output(detail::output_dir(cfg) / "sweep.csv");
        os << "epsilon,mu,communities,outliers,largest_community\n";
        for (double eps : cfg.sweep_epsilons) {
            for (std::size_t mu : cfg.sweep_mus) {
                ScanParams p = cfg.scan;
                p.epsilon = eps;
                p.mu = mu;
                const auto parts = scan_partition(g, p);
                std::size_t largest = 0;
                for (const auto& c : parts.communities) largest = std::max(largest, c.size());
                os << eps << ',' << mu << ',' << parts.num_communities() << ',' << parts.outliers.size()
                   << ',' << largest << '\n';
                out << "epsilon=" << eps << " mu=" << mu << ": " << parts.num_communities()
                    << " communities, " << parts.outliers.size() << " outliers\n";
            }
        }
        return 0;
    });
}

}  // namespace spa
