#pragma once

#include "spa/gcn.hpp"
#include "spa/metrics.hpp"
#include "spa/selection.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace spa {

enum class Strategy { spa, random, pagerank, uncertainty, featprop };

inline constexpr std::array<std::string_view, 5> kStrategyNames = {"spa", "random", "pagerank",
                                                                   "uncertainty", "featprop"};

inline std::string_view to_string(Strategy s) { return kStrategyNames[static_cast<std::size_t>(s)]; }

inline std::optional<Strategy> parse_strategy(std::string_view name) {
    for (std::size_t k = 0; k < kStrategyNames.size(); ++k) {
        if (kStrategyNames[k] == name) return static_cast<Strategy>(k);
    }
    return std::nullopt;
}

inline std::string strategy_list() {
    std::string out;
    for (auto name : kStrategyNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

struct ExperimentOptions {
    ScanParams scan;
    PageRankParams pagerank;
    std::size_t featprop_steps = 2;
    TrainConfig train;
    std::size_t jobs = 1;
};

/**
 * Runs one strategy. `seed` drives the random sample, the k-medoids tie order
 * and the uncertainty warm-start model; spa and pagerank ignore it.
 *
 * uncertainty needs a model before any label exists: it labels ceil(b/2)
 * random nodes, trains on them, then fills the rest of the budget by entropy.
 * The warm-start time is part of its query time.
 */
inline SelectionResult select_with_strategy(const AttributedGraph& g, Strategy strategy, std::size_t b,
                                            std::uint64_t seed, const ExperimentOptions& opts) {
    switch (strategy) {
        case Strategy::spa:
            return spa_select(g, opts.scan, opts.pagerank, b);
        case Strategy::random:
            return random_select(g, b, seed);
        case Strategy::pagerank:
            return pagerank_select(g, opts.pagerank, b);
        case Strategy::featprop:
            return featprop_select(g, opts.featprop_steps, b, seed);
        case Strategy::uncertainty: {
            detail::Stopwatch clock;
            SelectionResult warm = random_select(g, (b + 1) / 2, seed);
            warm.strategy = "uncertainty";
            if (warm.selected.size() < std::min(b, g.num_nodes())) {
                TrainConfig cfg = opts.train;
                cfg.seed = seed;
                const GcnModel model = train(g, warm.selected, cfg);
                const SelectionResult rest =
                    uncertainty_select(gcn_forward(model, g), warm.selected, b - warm.selected.size());
                for (const auto& p : rest.provenance) warm.add(p.node, p.community, p.score);
            }
            warm.query_time = clock.elapsed();
            return warm;
        }
    }
    throw std::invalid_argument("unknown strategy");
}

struct RunRecord {
    std::string strategy;
    std::size_t budget = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double query_time_ms = 0.0;
};

struct AggregateRow {
    std::string strategy;
    std::size_t budget = 0;
    std::size_t runs = 0;
    double accuracy_mean = 0.0, accuracy_std = 0.0;
    double macro_f1_mean = 0.0, macro_f1_std = 0.0;
    double query_time_ms_mean = 0.0;
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
};

inline MeanStd mean_std(std::span<const double> xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

struct EvalReport {
    std::vector<RunRecord> runs;
    std::vector<AggregateRow> aggregates;

    // Groups runs by (strategy, budget) in first-appearance order.
    static std::vector<AggregateRow> aggregate(std::span<const RunRecord> runs) {
        std::vector<AggregateRow> rows;
        std::vector<std::vector<const RunRecord*>> groups;
        for (const auto& r : runs) {
            auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow& a) {
                return a.strategy == r.strategy && a.budget == r.budget;
            });
            if (it == rows.end()) {
                rows.push_back({r.strategy, r.budget});
                groups.emplace_back();
                it = rows.end() - 1;
            }
            groups[static_cast<std::size_t>(it - rows.begin())].push_back(&r);
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            std::vector<double> acc, f1, qt;
            for (const RunRecord* r : groups[k]) {
                acc.push_back(r->accuracy);
                f1.push_back(r->macro_f1);
                qt.push_back(r->query_time_ms);
            }
            const auto a = mean_std(acc), f = mean_std(f1);
            rows[k].runs = groups[k].size();
            rows[k].accuracy_mean = a.mean;
            rows[k].accuracy_std = a.std;
            rows[k].macro_f1_mean = f.mean;
            rows[k].macro_f1_std = f.std;
            rows[k].query_time_ms_mean = mean_std(qt).mean;
        }
        return rows;
    }

    const AggregateRow* find(std::string_view strategy, std::size_t budget) const {
        for (const auto& a : aggregates) {
            if (a.strategy == strategy && a.budget == budget) return &a;
        }
        return nullptr;
    }
};

struct Scores {
    double accuracy;
    double macro_f1;
};

// Trains on `selected` and scores predictions on every other node.
inline Scores train_and_evaluate(const AttributedGraph& g, std::span<const NodeId> selected,
                                 const TrainConfig& cfg) {
    const GcnModel model = train(g, selected, cfg);
    const auto predictions = predict(gcn_forward(model, g));
    std::vector<char> in_train(g.num_nodes(), 0);
    for (NodeId v : selected) in_train[v] = 1;
    std::vector<NodeId> eval_set;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (!in_train[v]) eval_set.push_back(v);
    }
    return {accuracy(predictions, g.labels(), eval_set),
            macro_f1(predictions, g.labels(), eval_set, g.num_classes())};
}

inline RunRecord run_once(const AttributedGraph& g, Strategy strategy, std::size_t budget,
                          std::uint64_t seed, const ExperimentOptions& opts) {
    const SelectionResult sel = select_with_strategy(g, strategy, budget, seed, opts);
    TrainConfig cfg = opts.train;
    cfg.seed = seed;
    const Scores s = train_and_evaluate(g, sel.selected, cfg);
    return {std::string(to_string(strategy)), budget, seed, s.accuracy, s.macro_f1,
            sel.query_time.count()};
}

/**
 * Every (strategy, budget, seed) combination in that nesting order.
 *
 * Runs execute on up to opts.jobs threads; `on_record` sees records in
 * combination order. If a run throws, the records before it are still
 * delivered and the exception is rethrown.
 */
inline EvalReport run_experiment(const AttributedGraph& g, std::span<const Strategy> strategies,
                                 std::span<const std::size_t> budgets,
                                 std::span<const std::uint64_t> seeds, const ExperimentOptions& opts,
                                 const std::function<void(const RunRecord&)>& on_record = {}) {
    if (strategies.empty() || budgets.empty() || seeds.empty()) {
        throw std::invalid_argument("run_experiment: strategies, budgets and seeds must be non-empty");
    }
    for (std::size_t b : budgets) {
        if (b < 1 || b >= g.num_nodes()) {
            throw std::invalid_argument("run_experiment: budget " + std::to_string(b) +
                                        " must lie in [1, num_nodes) so that evaluation nodes remain");
        }
    }
    opts.train.validate();

    struct Task {
        Strategy strategy;
        std::size_t budget;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Strategy s : strategies) {
        for (std::size_t b : budgets) {
            for (std::uint64_t seed : seeds) tasks.push_back({s, b, seed});
        }
    }

    EvalReport report;
    const std::size_t jobs = std::max<std::size_t>(1, opts.jobs);
    std::vector<std::optional<RunRecord>> slot(tasks.size());
    std::vector<std::exception_ptr> error(tasks.size());
    auto execute = [&](std::size_t k) {
        try {
            slot[k] = run_once(g, tasks[k].strategy, tasks[k].budget, tasks[k].seed, opts);
        } catch (...) {
            error[k] = std::current_exception();
        }
    };
    for (std::size_t begin = 0; begin < tasks.size(); begin += jobs) {
        const std::size_t end = std::min(tasks.size(), begin + jobs);
        if (jobs == 1) {
            execute(begin);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t k = begin; k < end; ++k) pool.emplace_back(execute, k);
        }
        for (std::size_t k = begin; k < end; ++k) {
            if (error[k]) std::rethrow_exception(error[k]);
            report.runs.push_back(*slot[k]);
            if (on_record) on_record(*slot[k]);
        }
    }
    report.aggregates = EvalReport::aggregate(report.runs);
    return report;
}

inline void write_runs_csv_header(std::ostream& os) {
    os << "strategy,budget,seed,accuracy,macro_f1,query_time_ms\n";
}

inline void write_run_csv_row(std::ostream& os, const RunRecord& r) {
    os << r.strategy << ',' << r.budget << ',' << r.seed << ',' << r.accuracy << ',' << r.macro_f1 << ','
       << r.query_time_ms << '\n';
}

inline void write_aggregate_csv(std::ostream& os, const EvalReport& report) {
    os << "strategy,budget,runs,accuracy_mean,accuracy_std,macro_f1_mean,macro_f1_std,"
          "query_time_ms_mean\n";
    for (const auto& a : report.aggregates) {
        os << a.strategy << ',' << a.budget << ',' << a.runs << ',' << a.accuracy_mean << ','
           << a.accuracy_std << ',' << a.macro_f1_mean << ',' << a.macro_f1_std << ','
           << a.query_time_ms_mean << '\n';
    }
}

inline nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json runs = nlohmann::json::array(), aggs = nlohmann::json::array();
    for (const auto& r : report.runs) {
        runs.push_back({{"strategy", r.strategy},
                        {"budget", r.budget},
                        {"seed", r.seed},
                        {"accuracy", r.accuracy},
                        {"macro_f1", r.macro_f1},
                        {"query_time_ms", r.query_time_ms}});
    }
    for (const auto& a : report.aggregates) {
        aggs.push_back({{"strategy", a.strategy},
                        {"budget", a.budget},
                        {"runs", a.runs},
                        {"accuracy_mean", a.accuracy_mean},
                        {"accuracy_std", a.accuracy_std},
                        {"macro_f1_mean", a.macro_f1_mean},
                        {"macro_f1_std", a.macro_f1_std},
                        {"query_time_ms_mean", a.query_time_ms_mean}});
    }
    return {{"runs", runs}, {"aggregates", aggs}};
}

}  // namespace spa
