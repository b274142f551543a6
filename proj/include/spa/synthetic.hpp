#pragma once

#include "spa/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace spa {

/**
 * Stochastic block model with Gaussian class-mean features.
 *
 * Class c has mean feature_snr · e_(c mod dim) plus unit Gaussian noise in
 * every coordinate. Node ids are a seeded permutation of block order.
 */
struct SbmSpec {
    std::size_t blocks = 4;
    std::size_t nodes = 400;
    double p_in = 0.1;
    double p_out = 0.01;
    double feature_snr = 1.0;
    std::uint64_t seed = 0;
    std::size_t dim = 16;

    // Parses "sbm:blocks,n,p_in,p_out,feature_snr,seed[,dim]".
    static SbmSpec parse(std::string_view text) {
        constexpr std::string_view prefix = "sbm:";
        if (text.substr(0, prefix.size()) != prefix) {
            throw std::invalid_argument("--synthetic must start with 'sbm:', got '" +
                                        std::string(text) + "'");
        }
        text.remove_prefix(prefix.size());
        std::vector<std::string_view> fields;
        while (true) {
            const auto comma = text.find(',');
            fields.push_back(text.substr(0, comma));
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
        if (fields.size() != 6 && fields.size() != 7) {
            throw std::invalid_argument("--synthetic needs 6 or 7 fields: "
                                        "sbm:blocks,n,p_in,p_out,feature_snr,seed[,dim]");
        }
        SbmSpec s;
        auto need = [&](bool ok, const char* name) {
            if (!ok) throw std::invalid_argument(std::string("--synthetic: bad ") + name);
        };
        need(detail::parse_number(fields[0], s.blocks) && s.blocks >= 1, "blocks");
        need(detail::parse_number(fields[1], s.nodes) && s.nodes >= s.blocks, "n");
        need(detail::parse_number(fields[2], s.p_in) && s.p_in >= 0 && s.p_in <= 1, "p_in");
        need(detail::parse_number(fields[3], s.p_out) && s.p_out >= 0 && s.p_out <= 1, "p_out");
        need(detail::parse_number(fields[4], s.feature_snr), "feature_snr");
        need(detail::parse_number(fields[5], s.seed), "seed");
        if (fields.size() == 7) need(detail::parse_number(fields[6], s.dim) && s.dim >= 1, "dim");
        return s;
    }
};

namespace detail {

// Bernoulli(p) trials over `count` slots via geometric skips; calls emit(k)
// for each success index k.
template <typename Rng, typename Emit>
void sample_bernoulli_slots(std::uint64_t count, double p, Rng& rng, Emit&& emit) {
    if (p <= 0.0 || count == 0) return;
    if (p >= 1.0) {
        for (std::uint64_t k = 0; k < count; ++k) emit(k);
        return;
    }
    std::geometric_distribution<std::uint64_t> skip(p);
    for (std::uint64_t k = skip(rng); k < count; k += skip(rng) + 1) emit(k);
}

}  // namespace detail

inline AttributedGraph generate_sbm(const SbmSpec& s) {
    std::mt19937_64 rng(s.seed);
    const std::size_t n = s.nodes;

    // Block b owns the contiguous raw range [start[b], start[b+1]).
    std::vector<std::size_t> start(s.blocks + 1);
    for (std::size_t b = 0; b <= s.blocks; ++b) start[b] = b * n / s.blocks;
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<Edge> edges;
    for (std::size_t a = 0; a < s.blocks; ++a) {
        const std::uint64_t sa = start[a + 1] - start[a];
        // Upper triangle within block a, row-major over i < j.
        detail::sample_bernoulli_slots(sa * (sa - 1) / 2, s.p_in, rng, [&](std::uint64_t k) {
            // Invert k -> (i, j) with i < j; rows before i hold i(2sa - i - 1)/2 slots.
            auto before = [&](std::uint64_t i) { return i * (2 * sa - i - 1) / 2; };
            const double t = static_cast<double>(2 * sa - 1);
            auto i = static_cast<std::uint64_t>(
                std::max(0.0, std::floor((t - std::sqrt(t * t - 8.0 * static_cast<double>(k))) / 2.0)));
            while (i > 0 && before(i) > k) --i;
            while (before(i + 1) <= k) ++i;
            const std::uint64_t j = i + 1 + (k - before(i));
            edges.push_back({perm[start[a] + i], perm[start[a] + j]});
        });
        for (std::size_t b = a + 1; b < s.blocks; ++b) {
            const std::uint64_t sb = start[b + 1] - start[b];
            detail::sample_bernoulli_slots(sa * sb, s.p_out, rng, [&](std::uint64_t k) {
                edges.push_back({perm[start[a] + k / sb], perm[start[b] + k % sb]});
            });
        }
    }

    Matrix features(n, s.dim);
    std::vector<ClassId> labels(n);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t b = 0; b < s.blocks; ++b) {
        for (std::size_t r = start[b]; r < start[b + 1]; ++r) {
            const NodeId v = perm[r];
            labels[v] = static_cast<ClassId>(b);
            for (std::size_t c = 0; c < s.dim; ++c) features(v, c) = noise(rng);
            features(v, b % s.dim) += s.feature_snr;
        }
    }
    return AttributedGraph::from_edges(n, edges, std::move(features), std::move(labels));
}

// G(n, p) without features.
inline AttributedGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (coin(rng)) edges.push_back({i, j});
        }
    }
    return AttributedGraph::from_edges(n, edges);
}

inline AttributedGraph cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.push_back({i, static_cast<NodeId>((i + 1) % n)});
    return AttributedGraph::from_edges(n, edges);
}

inline AttributedGraph star_graph(std::size_t leaves) {
    std::vector<Edge> edges;
    for (NodeId i = 1; i <= leaves; ++i) edges.push_back({0, i});
    return AttributedGraph::from_edges(leaves + 1, edges);
}

inline AttributedGraph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j});
    }
    return AttributedGraph::from_edges(n, edges);
}

inline AttributedGraph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return AttributedGraph::from_edges(n, edges);
}

}  // namespace spa
