#pragma once

#include "spa/graph.hpp"
#include "spa/union_find.hpp"

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace spa {

enum class NeighborhoodMode { closed, open };

struct ScanParams {
    double epsilon = 0.5;
    std::size_t mu = 2;
    NeighborhoodMode mode = NeighborhoodMode::closed;

    void validate() const {
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
            throw std::invalid_argument("scan: epsilon must lie in [0, 1], got " +
                                        std::to_string(epsilon));
        }
        if (mu < 1) throw std::invalid_argument("scan: mu must be >= 1");
    }
};

/**
 * Result of a SCAN partition.
 *
 * `communities[c]` lists the members of community c in ascending order and
 * `community_of[v]` is c, or kNoCommunity for outliers. Community ids follow
 * the order of each community's smallest member.
 */
struct CommunityAssignment {
    std::vector<CommunityId> community_of;
    std::vector<std::vector<NodeId>> communities;
    std::vector<NodeId> outliers;

    std::size_t num_communities() const noexcept { return communities.size(); }
};

namespace detail {

inline std::size_t count_common(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return common;
}

struct PairOverlap {
    std::size_t shared;  // |N(i) ∩ N(j)| in the chosen mode
    double similarity;
};

inline PairOverlap overlap(const AttributedGraph& g, NodeId i, NodeId j, NeighborhoodMode mode) {
    const auto ni = g.neighbors(i);
    const auto nj = g.neighbors(j);
    if (i == j) {
        const std::size_t size = ni.size() + (mode == NeighborhoodMode::closed ? 1 : 0);
        return {size, size > 0 ? 1.0 : 0.0};
    }
    std::size_t shared = count_common(ni, nj);
    double size_i = static_cast<double>(ni.size());
    double size_j = static_cast<double>(nj.size());
    if (mode == NeighborhoodMode::closed) {
        // i ∈ Ñ(j) and j ∈ Ñ(i) exactly when the pair is adjacent.
        if (g.has_edge(i, j)) shared += 2;
        size_i += 1;
        size_j += 1;
    }
    const double denom = std::sqrt(size_i * size_j);
    return {shared, denom > 0 ? static_cast<double>(shared) / denom : 0.0};
}

}  // namespace detail

inline double structural_similarity(const AttributedGraph& g, NodeId i, NodeId j,
                                    NeighborhoodMode mode = NeighborhoodMode::closed) {
    g.check_node(i);
    g.check_node(j);
    return detail::overlap(g, i, j, mode).similarity;
}

// The edge predicate: S(i,j) >= epsilon and |N(i) ∩ N(j)| >= mu.
inline bool edge_qualifies(const AttributedGraph& g, NodeId i, NodeId j, const ScanParams& p) {
    const auto o = detail::overlap(g, i, j, p.mode);
    return o.similarity >= p.epsilon && o.shared >= p.mu;
}

/**
 * Partitions the graph into the connected components of its qualifying edges.
 *
 * Only existing edges are tested, so the cost is one sorted-list merge per
 * edge. Nodes with no qualifying incident edge are outliers.
 */
inline CommunityAssignment scan_partition(const AttributedGraph& g, const ScanParams& p) {
    p.validate();
    const std::size_t n = g.num_nodes();
    UnionFind uf(n);
    std::vector<char> touched(n, 0);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : g.neighbors(i)) {
            if (j <= i) continue;
            if (edge_qualifies(g, i, j, p)) {
                uf.unite(i, j);
                touched[i] = touched[j] = 1;
            }
        }
    }

    CommunityAssignment out;
    out.community_of.assign(n, kNoCommunity);
    std::vector<CommunityId> id_of_root(n, kNoCommunity);
    for (NodeId v = 0; v < n; ++v) {
        if (!touched[v]) {
            out.outliers.push_back(v);
            continue;
        }
        const auto root = uf.find(v);
        if (id_of_root[root] == kNoCommunity) {
            id_of_root[root] = static_cast<CommunityId>(out.communities.size());
            out.communities.emplace_back();
        }
        const auto c = id_of_root[root];
        out.community_of[v] = c;
        out.communities[static_cast<std::size_t>(c)].push_back(v);
    }
    return out;
}

// `node_id,community_id`, outliers as -1.
inline void write_communities_csv(std::ostream& os, const CommunityAssignment& a) {
    os << "node_id,community_id\n";
    for (std::size_t v = 0; v < a.community_of.size(); ++v) {
        os << v << ',' << a.community_of[v] << '\n';
    }
}

}  // namespace spa
