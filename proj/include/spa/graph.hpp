#pragma once

#include "spa/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spa {

struct Edge {
    NodeId u;
    NodeId v;
};

// Bookkeeping collected while building a graph from raw edge entries.
struct LoadStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_entries_merged = 0;

    bool operator==(const LoadStats&) const = default;
};

/**
 * Immutable undirected attributed graph.
 *
 * Adjacency is stored in CSR form with each neighbor list sorted and free of
 * self-loops and duplicates. Every undirected edge appears twice in the target
 * array. Features are one row per node, labels one class id per node.
 */
class AttributedGraph {
public:
    AttributedGraph() = default;

    // Symmetrizes, deduplicates and drops self-loops. Throws GraphError on ids
    // outside [0, num_nodes) or label/feature row-count disagreement.
    static AttributedGraph from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                                      Matrix features, std::vector<ClassId> labels) {
        if (static_cast<std::size_t>(features.rows()) != num_nodes) {
            throw GraphError(GraphErrorKind::row_count_mismatch,
                             "feature rows (" + std::to_string(features.rows()) +
                                 ") != num_nodes (" + std::to_string(num_nodes) + ")");
        }
        if (labels.size() != num_nodes) {
            throw GraphError(GraphErrorKind::row_count_mismatch,
                             "label rows (" + std::to_string(labels.size()) +
                                 ") != num_nodes (" + std::to_string(num_nodes) + ")");
        }

        AttributedGraph g;
        std::vector<std::pair<NodeId, NodeId>> arcs;
        arcs.reserve(edges.size() * 2);
        std::size_t self_loops = 0;
        for (const Edge& e : edges) {
            if (e.u >= num_nodes || e.v >= num_nodes) {
                throw GraphError(GraphErrorKind::row_count_mismatch,
                                 "edge " + std::to_string(e.u) + " " + std::to_string(e.v) +
                                     " references a node outside the " +
                                     std::to_string(num_nodes) + " feature rows");
            }
            if (e.u == e.v) {
                ++self_loops;
                continue;
            }
            arcs.emplace_back(e.u, e.v);
            arcs.emplace_back(e.v, e.u);
        }
        std::sort(arcs.begin(), arcs.end());
        const std::size_t raw_arcs = arcs.size();
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

        g.offsets_.assign(num_nodes + 1, 0);
        g.targets_.reserve(arcs.size());
        for (const auto& [src, dst] : arcs) {
            ++g.offsets_[src + 1];
            g.targets_.push_back(dst);
        }
        for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];

        g.num_nodes_ = num_nodes;
        g.num_edges_ = arcs.size() / 2;
        g.features_ = std::move(features);
        g.labels_ = std::move(labels);
        g.num_classes_ = 0;
        for (ClassId c : g.labels_) g.num_classes_ = std::max<std::size_t>(g.num_classes_, c + 1);
        g.stats_.self_loops_dropped = self_loops;
        g.stats_.duplicate_entries_merged = (raw_arcs - arcs.size()) / 2;
        return g;
    }

    // Structure-only graph: zero-width features, every label 0.
    static AttributedGraph from_edges(std::size_t num_nodes, std::span<const Edge> edges) {
        return from_edges(num_nodes, edges, Matrix(num_nodes, 0),
                          std::vector<ClassId>(num_nodes, 0));
    }

    std::size_t num_nodes() const noexcept { return num_nodes_; }
    std::size_t num_edges() const noexcept { return num_edges_; }
    std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    std::size_t num_classes() const noexcept { return num_classes_; }

    std::span<const std::size_t> csr_offsets() const noexcept { return offsets_; }
    std::span<const NodeId> csr_targets() const noexcept { return targets_; }
    const Matrix& features() const noexcept { return features_; }
    std::span<const ClassId> labels() const noexcept { return labels_; }
    const LoadStats& load_stats() const noexcept { return stats_; }

    // Sorted open neighborhood of v.
    std::span<const NodeId> neighbors(NodeId v) const {
        check_node(v);
        return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    std::size_t degree(NodeId v) const {
        check_node(v);
        return offsets_[v + 1] - offsets_[v];
    }

    bool has_edge(NodeId u, NodeId v) const {
        auto n = neighbors(u);
        return std::binary_search(n.begin(), n.end(), v);
    }

    void check_node(NodeId v) const {
        if (v >= num_nodes_) {
            throw std::out_of_range("node id " + std::to_string(v) + " out of range (num_nodes = " +
                                    std::to_string(num_nodes_) + ")");
        }
    }

    // Copy with every feature row scaled to unit L1 norm (zero rows unchanged).
    AttributedGraph with_row_normalized_features() const {
        AttributedGraph g = *this;
        for (Eigen::Index r = 0; r < g.features_.rows(); ++r) {
            const double s = g.features_.row(r).cwiseAbs().sum();
            if (s > 0) g.features_.row(r) /= s;
        }
        return g;
    }

    bool operator==(const AttributedGraph& o) const {
        return num_nodes_ == o.num_nodes_ && num_edges_ == o.num_edges_ &&
               num_classes_ == o.num_classes_ && offsets_ == o.offsets_ &&
               targets_ == o.targets_ && labels_ == o.labels_ && stats_ == o.stats_ &&
               features_.rows() == o.features_.rows() && features_.cols() == o.features_.cols() &&
               std::equal(features_.data(), features_.data() + features_.size(), o.features_.data());
    }

private:
    std::size_t num_nodes_ = 0;
    std::size_t num_edges_ = 0;
    std::size_t num_classes_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    Matrix features_;
    std::vector<ClassId> labels_;
    LoadStats stats_;
};

inline std::span<const NodeId> neighbors(const AttributedGraph& g, NodeId v) {
    return g.neighbors(v);
}

/**
 * The renormalized operator D^-1/2 (A + I) D^-1/2, with D the degree matrix of
 * A + I. Never materialized: apply() walks the CSR arrays directly.
 */
class NormalizedAdjacency {
public:
    explicit NormalizedAdjacency(const AttributedGraph& g) : graph_(&g), inv_sqrt_(g.num_nodes()) {
        for (NodeId v = 0; v < g.num_nodes(); ++v) {
            inv_sqrt_[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
        }
    }

    const AttributedGraph& graph() const noexcept { return *graph_; }

    Matrix apply(const Matrix& m) const {
        const auto n = graph_->num_nodes();
        if (static_cast<std::size_t>(m.rows()) != n) {
            throw std::invalid_argument("propagate: matrix has " + std::to_string(m.rows()) +
                                        " rows, graph has " + std::to_string(n) + " nodes");
        }
        Matrix out(m.rows(), m.cols());
        const auto offsets = graph_->csr_offsets();
        const auto targets = graph_->csr_targets();
        for (std::size_t i = 0; i < n; ++i) {
            const double si = inv_sqrt_[i];
            auto row = out.row(static_cast<Eigen::Index>(i));
            row = (si * si) * m.row(static_cast<Eigen::Index>(i));
            for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
                const NodeId j = targets[k];
                row += (si * inv_sqrt_[j]) * m.row(j);
            }
        }
        return out;
    }

private:
    const AttributedGraph* graph_;
    std::vector<double> inv_sqrt_;
};

// Ã^steps · m via repeated sparse products; steps = 0 returns m unchanged.
inline Matrix propagate(const AttributedGraph& g, Matrix m, std::size_t steps) {
    if (static_cast<std::size_t>(m.rows()) != g.num_nodes()) {
        throw std::invalid_argument("propagate: matrix has " + std::to_string(m.rows()) +
                                    " rows, graph has " + std::to_string(g.num_nodes()) + " nodes");
    }
    if (steps == 0) return m;
    NormalizedAdjacency adj(g);
    for (std::size_t s = 0; s < steps; ++s) m = adj.apply(m);
    return m;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
    tok = trim(tok);
    if (tok.empty()) return false;
    if constexpr (std::is_floating_point_v<T>) {
        if (tok.front() == '+') tok.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError(GraphErrorKind::io, "cannot open " + path);
    return in;
}

inline GraphError malformed(const std::string& path, std::size_t line_no, std::string_view line) {
    return GraphError(GraphErrorKind::malformed_line,
                      path + ":" + std::to_string(line_no) + ": malformed line '" +
                          std::string(line) + "'");
}

}  // namespace detail

// Whitespace-separated `u v` pairs; blank and '#' lines skipped.
inline std::vector<Edge> read_edge_list(const std::string& path) {
    auto in = detail::open_or_throw(path);
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto split = body.find_first_of(" \t");
        if (split == std::string_view::npos) throw detail::malformed(path, line_no, body);
        const auto rest = detail::trim(body.substr(split));
        if (rest.find_first_of(" \t") != std::string_view::npos) {
            throw detail::malformed(path, line_no, body);
        }
        NodeId u = 0, v = 0;
        if (!detail::parse_number(body.substr(0, split), u) || !detail::parse_number(rest, v)) {
            throw detail::malformed(path, line_no, body);
        }
        edges.push_back({u, v});
    }
    return edges;
}

inline Matrix read_features_csv(const std::string& path) {
    auto in = detail::open_or_throw(path);
    std::vector<double> values;
    std::size_t cols = 0, rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        std::size_t count = 0;
        std::size_t pos = 0;
        while (true) {
            const auto comma = body.find(',', pos);
            const auto tok = body.substr(pos, comma == std::string_view::npos ? body.size() - pos
                                                                              : comma - pos);
            double x = 0;
            if (!detail::parse_number(tok, x)) throw detail::malformed(path, line_no, body);
            values.push_back(x);
            ++count;
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (rows == 0) cols = count;
        if (count != cols) throw detail::malformed(path, line_no, body);
        ++rows;
    }
    Matrix m(rows, cols);
    std::copy(values.begin(), values.end(), m.data());
    return m;
}

inline std::vector<ClassId> read_labels(const std::string& path) {
    auto in = detail::open_or_throw(path);
    std::vector<ClassId> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        ClassId c = 0;
        if (!detail::parse_number(body, c)) throw detail::malformed(path, line_no, body);
        labels.push_back(c);
    }
    return labels;
}

/**
 * Loads an attributed graph from plain-text exports.
 *
 * The node count is the number of feature rows. Reversed and repeated edge
 * entries collapse into one undirected edge; self-loop entries are dropped and
 * counted in load_stats(). An edge file without edges is rejected.
 */
inline AttributedGraph load_graph(const std::string& edge_list_path, const std::string& features_path,
                                  const std::string& labels_path) {
    auto edges = read_edge_list(edge_list_path);
    auto features = read_features_csv(features_path);
    auto labels = read_labels(labels_path);
    if (features.rows() == 0) {
        throw GraphError(GraphErrorKind::empty_graph, features_path + ": no feature rows");
    }
    if (edges.empty()) {
        throw GraphError(GraphErrorKind::empty_graph, edge_list_path + ": no edges");
    }
    const auto n = static_cast<std::size_t>(features.rows());
    return AttributedGraph::from_edges(n, edges, std::move(features), std::move(labels));
}

}  // namespace spa
