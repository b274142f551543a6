#pragma once

#include "spa/graph.hpp"
#include "spa/kmedoids.hpp"
#include "spa/pagerank.hpp"
#include "spa/scan.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace spa {

struct SelectionRecord {
    NodeId node;
    CommunityId community = kNoCommunity;
    double score = 0.0;
};

/**
 * Nodes chosen for labeling, in selection order, with one provenance record
 * per selected node. query_time covers only the selection computation.
 */
struct SelectionResult {
    std::string strategy;
    std::vector<NodeId> selected;
    std::vector<SelectionRecord> provenance;
    std::chrono::duration<double, std::milli> query_time{0};

    void add(NodeId v, CommunityId community, double score) {
        selected.push_back(v);
        provenance.push_back({v, community, score});
    }
};

namespace detail {

inline void check_budget(std::size_t b) {
    if (b < 1) throw std::invalid_argument("selection: budget must be >= 1");
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::chrono::duration<double, std::milli> elapsed() const {
        return std::chrono::steady_clock::now() - start_;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Highest score first, ties to the lower node id.
inline bool ranks_before(double sa, NodeId a, double sb, NodeId b) {
    return sa > sb || (sa == sb && a < b);
}

}  // namespace detail

/**
 * Structural-clustering representative selection.
 *
 * One representative per SCAN community (the community's top node under
 * PageRank on its induced subgraph). A short list is topped up with the best
 * remaining nodes by whole-graph PageRank, already chosen nodes excluded from
 * the ranking. When communities outnumber the budget, the b representatives
 * with the highest whole-graph PageRank are kept.
 */
inline SelectionResult spa_select(const AttributedGraph& g, const ScanParams& scan,
                                  const PageRankParams& pr, std::size_t b) {
    detail::check_budget(b);
    scan.validate();
    pr.validate();
    detail::Stopwatch clock;

    SelectionResult res;
    res.strategy = "spa";
    const std::size_t n = g.num_nodes();
    const std::size_t target = std::min(b, n);

    const CommunityAssignment parts = scan_partition(g, scan);

    struct Representative {
        NodeId node;
        CommunityId community;
        double local_score;
    };
    std::vector<Representative> reps;
    reps.reserve(parts.num_communities());
    std::vector<std::int64_t> scratch(n, -1);
    for (std::size_t c = 0; c < parts.num_communities(); ++c) {
        const auto& members = parts.communities[c];
        const ScoreVector local = detail::pagerank_induced(g, members, pr, scratch);
        std::size_t best = 0;
        for (std::size_t k = 1; k < local.size(); ++k) {
            if (detail::ranks_before(local.scores[k], local.nodes[k], local.scores[best],
                                     local.nodes[best])) {
                best = k;
            }
        }
        reps.push_back({local.nodes[best], static_cast<CommunityId>(c), local.scores[best]});
    }

    const ScoreVector global = pagerank(g, pr);
    std::stable_sort(reps.begin(), reps.end(), [&](const Representative& a, const Representative& b) {
        return detail::ranks_before(global.scores[a.node], a.node, global.scores[b.node], b.node);
    });
    if (reps.size() > target) reps.resize(target);

    std::vector<char> chosen(n, 0);
    for (const auto& r : reps) {
        res.add(r.node, r.community, r.local_score);
        chosen[r.node] = 1;
    }
    if (res.selected.size() < target) {
        for (std::size_t k : ranking(global)) {
            if (res.selected.size() == target) break;
            const NodeId v = global.nodes[k];
            if (chosen[v]) continue;
            chosen[v] = 1;
            res.add(v, parts.community_of[v], global.scores[k]);
        }
    }
    res.query_time = clock.elapsed();
    return res;
}

// Uniform sample without replacement, reproducible from the seed.
inline SelectionResult random_select(const AttributedGraph& g, std::size_t b, std::uint64_t seed) {
    detail::check_budget(b);
    detail::Stopwatch clock;
    SelectionResult res;
    res.strategy = "random";
    const std::size_t n = g.num_nodes();
    const std::size_t target = std::min(b, n);
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < target; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, n - 1);
        std::swap(pool[k], pool[pick(rng)]);
        res.add(pool[k], kNoCommunity, 1.0 / static_cast<double>(n));
    }
    res.query_time = clock.elapsed();
    return res;
}

// Top-b nodes by whole-graph PageRank.
inline SelectionResult pagerank_select(const AttributedGraph& g, const PageRankParams& pr,
                                       std::size_t b) {
    detail::check_budget(b);
    detail::Stopwatch clock;
    SelectionResult res;
    res.strategy = "pagerank";
    const ScoreVector global = pagerank(g, pr);
    const auto order = ranking(global);
    const std::size_t target = std::min(b, g.num_nodes());
    for (std::size_t k = 0; k < target; ++k) {
        res.add(global.nodes[order[k]], kNoCommunity, global.scores[order[k]]);
    }
    res.query_time = clock.elapsed();
    return res;
}

// Shannon entropy in nats; 0·log 0 taken as 0.
inline double entropy(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0) h -= x * std::log(x);
    }
    return h;
}

/**
 * Top-b unlabeled nodes by predictive entropy. Returns fewer than b nodes
 * only when fewer remain unlabeled.
 */
inline SelectionResult uncertainty_select(const Matrix& probabilities, std::span<const NodeId> labeled,
                                          std::size_t b) {
    detail::check_budget(b);
    detail::Stopwatch clock;
    const auto n = static_cast<std::size_t>(probabilities.rows());
    for (std::size_t v = 0; v < n; ++v) {
        const auto row = probabilities.row(static_cast<Eigen::Index>(v));
        if (!(std::abs(row.sum() - 1.0) <= 1e-6) || !(row.minCoeff() >= -1e-12)) {
            throw std::invalid_argument("uncertainty_select: row " + std::to_string(v) +
                                        " is not a probability distribution");
        }
    }
    std::vector<char> is_labeled(n, 0);
    for (NodeId v : labeled) {
        if (v >= n) throw std::out_of_range("uncertainty_select: labeled node out of range");
        is_labeled[v] = 1;
    }
    std::vector<NodeId> pool;
    std::vector<double> h(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        if (is_labeled[v]) continue;
        pool.push_back(v);
        const auto row = probabilities.row(v);
        h[v] = entropy(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
    }
    if (pool.empty()) throw std::invalid_argument("uncertainty_select: every node is already labeled");

    const std::size_t target = std::min(b, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(target), pool.end(),
                      [&](NodeId a, NodeId c) { return detail::ranks_before(h[a], a, h[c], c); });
    SelectionResult res;
    res.strategy = "uncertainty";
    for (std::size_t k = 0; k < target; ++k) res.add(pool[k], kNoCommunity, h[pool[k]]);
    res.query_time = clock.elapsed();
    return res;
}

/**
 * k-medoids (k = b) over rows of Ã^steps X; returns the medoids in ascending
 * node order. The provenance score is the fraction of nodes a medoid covers.
 */
inline SelectionResult featprop_select(const AttributedGraph& g, std::size_t steps, std::size_t b,
                                       std::uint64_t seed) {
    detail::check_budget(b);
    if (b > g.num_nodes()) {
        throw std::invalid_argument("featprop_select: budget " + std::to_string(b) +
                                    " exceeds num_nodes " + std::to_string(g.num_nodes()));
    }
    detail::Stopwatch clock;
    const Matrix z = propagate(g, g.features(), steps);
    const KMedoidsResult km = kmedoids(pairwise_euclidean(z), b, seed);

    std::vector<std::size_t> covered(km.medoids.size(), 0);
    for (std::size_t a : km.assignment) ++covered[a];
    std::vector<std::size_t> slots(km.medoids.size());
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    std::sort(slots.begin(), slots.end(),
              [&](std::size_t a, std::size_t c) { return km.medoids[a] < km.medoids[c]; });

    SelectionResult res;
    res.strategy = "featprop";
    for (std::size_t s : slots) {
        res.add(static_cast<NodeId>(km.medoids[s]), kNoCommunity,
                static_cast<double>(covered[s]) / static_cast<double>(g.num_nodes()));
    }
    res.query_time = clock.elapsed();
    return res;
}

inline nlohmann::json to_json(const SelectionResult& r, std::size_t budget, std::uint64_t seed) {
    nlohmann::json prov = nlohmann::json::array();
    for (const auto& p : r.provenance) {
        prov.push_back({{"node", p.node}, {"community", p.community}, {"score", p.score}});
    }
    return {{"strategy", r.strategy},         {"budget", budget},
            {"seed", seed},                   {"selected", r.selected},
            {"query_time_ms", r.query_time.count()}, {"provenance", prov}};
}

}  // namespace spa
