#pragma once

#include "spa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace spa {

struct PageRankParams {
    double damping = 0.95;
    double tolerance = 1e-8;
    std::size_t max_iterations = 1000;

    void validate() const {
        if (!(damping >= 0.0 && damping < 1.0)) {
            throw std::invalid_argument("pagerank: damping must lie in [0, 1), got " +
                                        std::to_string(damping));
        }
        if (!(tolerance > 0.0)) throw std::invalid_argument("pagerank: tolerance must be > 0");
        if (max_iterations < 1) throw std::invalid_argument("pagerank: max_iterations must be >= 1");
    }
};

// Scores over `nodes` (ascending); scores[k] belongs to nodes[k].
struct ScoreVector {
    std::vector<NodeId> nodes;
    std::vector<double> scores;
    std::size_t iterations_used = 0;
    bool converged = false;

    std::size_t size() const noexcept { return nodes.size(); }

    // Score of a global node id; the node must be in the index set.
    double score_of(NodeId v) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
        if (it == nodes.end() || *it != v) {
            throw std::out_of_range("node " + std::to_string(v) + " not in score index set");
        }
        return scores[static_cast<std::size_t>(it - nodes.begin())];
    }
};

namespace detail {

// Power iteration on the subgraph induced by `subset` (sorted, unique).
// `local_of` is caller-owned scratch of size num_nodes filled with -1; it is
// restored before returning so it can be reused across calls.
inline ScoreVector pagerank_induced(const AttributedGraph& g, std::span<const NodeId> subset,
                                    const PageRankParams& p, std::vector<std::int64_t>& local_of) {
    const std::size_t count = subset.size();
    for (std::size_t k = 0; k < count; ++k) local_of[subset[k]] = static_cast<std::int64_t>(k);

    std::vector<std::size_t> offsets(count + 1, 0);
    std::vector<std::uint32_t> targets;
    for (std::size_t k = 0; k < count; ++k) {
        for (NodeId u : g.neighbors(subset[k])) {
            if (local_of[u] >= 0) targets.push_back(static_cast<std::uint32_t>(local_of[u]));
        }
        offsets[k + 1] = targets.size();
    }
    for (NodeId v : subset) local_of[v] = -1;

    const double n = static_cast<double>(count);
    const double teleport = (1.0 - p.damping) / n;
    std::vector<double> inv_degree(count, 0.0);
    std::vector<std::size_t> dangling;
    for (std::size_t k = 0; k < count; ++k) {
        const auto deg = offsets[k + 1] - offsets[k];
        if (deg == 0) {
            dangling.push_back(k);
        } else {
            inv_degree[k] = 1.0 / static_cast<double>(deg);
        }
    }

    ScoreVector out;
    out.nodes.assign(subset.begin(), subset.end());
    std::vector<double> rank(count, 1.0 / n), next(count), share(count);
    for (std::size_t it = 1; it <= p.max_iterations; ++it) {
        double dangling_mass = 0.0;
        for (std::size_t k : dangling) dangling_mass += rank[k];
        for (std::size_t k = 0; k < count; ++k) share[k] = rank[k] * inv_degree[k];
        const double base = teleport + p.damping * dangling_mass / n;
        double change = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            double acc = 0.0;
            for (std::size_t e = offsets[k]; e < offsets[k + 1]; ++e) acc += share[targets[e]];
            next[k] = base + p.damping * acc;
            change += std::abs(next[k] - rank[k]);
        }
        rank.swap(next);
        out.iterations_used = it;
        if (change < p.tolerance) {
            out.converged = true;
            break;
        }
    }
    out.scores = std::move(rank);
    return out;
}

}  // namespace detail

/**
 * Damped PageRank by power iteration from the uniform vector.
 *
 * With a subset, scores are computed on the induced subgraph and N is the
 * subset size. Nodes without edges inside the scored set spread their mass
 * uniformly every iteration, so scores always sum to one.
 */
inline ScoreVector pagerank(const AttributedGraph& g, std::optional<std::span<const NodeId>> subset,
                            const PageRankParams& p) {
    p.validate();
    std::vector<NodeId> nodes;
    if (subset) {
        nodes.assign(subset->begin(), subset->end());
        for (NodeId v : nodes) g.check_node(v);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    } else {
        nodes.resize(g.num_nodes());
        std::iota(nodes.begin(), nodes.end(), NodeId{0});
    }
    if (nodes.empty()) throw std::invalid_argument("pagerank: empty node set");
    std::vector<std::int64_t> scratch(g.num_nodes(), -1);
    return detail::pagerank_induced(g, nodes, p, scratch);
}

inline ScoreVector pagerank(const AttributedGraph& g, const PageRankParams& p = {}) {
    return pagerank(g, std::nullopt, p);
}

// Indices into `s` ordered by descending score, ties by ascending node id.
inline std::vector<std::size_t> ranking(const ScoreVector& s) {
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.scores[a] > s.scores[b]; });
    return order;
}

// `node_id,score` by descending score.
inline void write_scores_csv(std::ostream& os, const ScoreVector& s) {
    os << "node_id,score\n";
    os.precision(17);
    for (std::size_t k : ranking(s)) os << s.nodes[k] << ',' << s.scores[k] << '\n';
}

}  // namespace spa
