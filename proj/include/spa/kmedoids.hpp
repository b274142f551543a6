#pragma once

#include "spa/types.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace spa {

struct KMedoidsResult {
    std::vector<std::size_t> medoids;     // row indices, in discovery order
    std::vector<std::size_t> assignment;  // position in `medoids` for each row
    double cost = 0.0;                    // sum of distances to nearest medoid
    std::size_t swaps = 0;
};

// Full Euclidean distance matrix between rows.
inline Matrix pairwise_euclidean(const Matrix& points) {
    const Eigen::Index n = points.rows();
    Matrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (points.row(i) - points.row(j)).norm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

namespace detail {

struct NearestCache {
    std::vector<double> nearest, second;
    std::vector<std::size_t> owner;  // position in medoid list

    NearestCache(const Matrix& dist, const std::vector<std::size_t>& medoids) {
        const auto n = static_cast<std::size_t>(dist.rows());
        nearest.assign(n, std::numeric_limits<double>::infinity());
        second.assign(n, std::numeric_limits<double>::infinity());
        owner.assign(n, 0);
        for (std::size_t o = 0; o < n; ++o) {
            for (std::size_t m = 0; m < medoids.size(); ++m) {
                const double v = dist(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(medoids[m]));
                if (v < nearest[o]) {
                    second[o] = nearest[o];
                    nearest[o] = v;
                    owner[o] = m;
                } else if (v < second[o]) {
                    second[o] = v;
                }
            }
        }
    }

    double cost() const { return std::accumulate(nearest.begin(), nearest.end(), 0.0); }
};

}  // namespace detail

/**
 * PAM k-medoids on a precomputed distance matrix: greedy BUILD followed by
 * best-improvement SWAP passes (shared-delta evaluation, O(n^2) per pass).
 *
 * Candidates are scanned in a seed-determined order and a candidate replaces
 * the current best only on strict improvement, so the seed decides ties.
 */
inline KMedoidsResult kmedoids(const Matrix& dist, std::size_t k, std::uint64_t seed,
                               std::size_t max_iterations = 100) {
    const auto n = static_cast<std::size_t>(dist.rows());
    if (k == 0) throw std::invalid_argument("kmedoids: k must be >= 1");
    if (k > n) {
        throw std::invalid_argument("kmedoids: cannot initialize " + std::to_string(k) +
                                    " medoids from " + std::to_string(n) + " points");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    auto D = [&](std::size_t a, std::size_t b) {
        return dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    };

    KMedoidsResult res;
    std::vector<char> is_medoid(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    // BUILD
    for (std::size_t round = 0; round < k; ++round) {
        std::size_t best = n;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t c : order) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            if (round == 0) {
                for (std::size_t o = 0; o < n; ++o) gain -= D(o, c);
            } else {
                for (std::size_t o = 0; o < n; ++o) gain += std::max(0.0, nearest[o] - D(o, c));
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        is_medoid[best] = 1;
        res.medoids.push_back(best);
        for (std::size_t o = 0; o < n; ++o) nearest[o] = std::min(nearest[o], D(o, best));
    }

    // SWAP
    detail::NearestCache cache(dist, res.medoids);
    std::vector<double> delta(k);
    for (std::size_t it = 0; it < max_iterations && k < n; ++it) {
        const double cost = cache.cost();
        double best_delta = 0.0;
        std::size_t best_slot = k, best_candidate = n;
        for (std::size_t c : order) {
            if (is_medoid[c]) continue;
            std::fill(delta.begin(), delta.end(), 0.0);
            double shared = 0.0;
            for (std::size_t o = 0; o < n; ++o) {
                const double doc = D(o, c);
                if (doc < cache.nearest[o]) {
                    shared += doc - cache.nearest[o];
                } else {
                    delta[cache.owner[o]] += std::min(doc, cache.second[o]) - cache.nearest[o];
                }
            }
            for (std::size_t m = 0; m < k; ++m) {
                const double total = shared + delta[m];
                if (total < best_delta) {
                    best_delta = total;
                    best_slot = m;
                    best_candidate = c;
                }
            }
        }
        // Ignore round-off sized improvements so the loop cannot cycle.
        if (best_candidate == n || best_delta > -1e-12 * (1.0 + cost)) break;
        is_medoid[res.medoids[best_slot]] = 0;
        is_medoid[best_candidate] = 1;
        res.medoids[best_slot] = best_candidate;
        cache = detail::NearestCache(dist, res.medoids);
        ++res.swaps;
    }

    res.assignment = cache.owner;
    res.cost = cache.cost();
    return res;
}

}  // namespace spa
