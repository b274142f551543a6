#include "fixtures.hpp"
#include "spa/pagerank.hpp"
#include "spa/synthetic.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace spa;
using spa::testing::from_list;

namespace {

double total(const ScoreVector& s) { return std::accumulate(s.scores.begin(), s.scores.end(), 0.0); }

double l1(const ScoreVector& s, const Eigen::VectorXd& ref) {
    double d = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) d += std::abs(s.scores[k] - ref(static_cast<Eigen::Index>(k)));
    return d;
}

}  // namespace

TEST(PageRank, CycleIsUniform) {
    const auto s = pagerank(cycle_graph(5), {0.95, 1e-8, 1000});
    for (double x : s.scores) EXPECT_NEAR(x, 0.2, 1e-12);
    EXPECT_TRUE(s.converged);
}

TEST(PageRank, SingleNodeSubset) {
    const auto g = cycle_graph(5);
    const std::vector<NodeId> one{3};
    const auto s = pagerank(g, std::span<const NodeId>(one), {});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s.scores[0], 1.0);
    EXPECT_EQ(s.iterations_used, 1u);
    EXPECT_TRUE(s.converged);
}

TEST(PageRank, StarMatchesDenseSolve) {
    const oracle::EdgeList edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    const auto s = pagerank(from_list(5, edges), {0.85, 1e-12, 10000});
    const auto ref = oracle::dense_pagerank(oracle::dense_adjacency(5, edges), 0.85);
    EXPECT_LT(l1(s, ref), 1e-8);
    for (std::size_t leaf = 1; leaf < 5; ++leaf) EXPECT_GT(s.scores[0], s.scores[leaf]);
}

TEST(PageRank, ZeroDampingIsUniformAfterOneIteration) {
    std::mt19937_64 rng(4);
    const auto g = from_list(9, oracle::random_edges(9, 0.3, rng));
    const auto s = pagerank(g, {0.0, 1e-8, 1000});
    EXPECT_EQ(s.iterations_used, 1u);
    for (double x : s.scores) EXPECT_EQ(x, 1.0 / 9.0);
}

TEST(PageRank, MassConservedWithDanglingNodes) {
    const auto g = from_list(6, {{0, 1}, {1, 2}});  // 3, 4, 5 isolated
    for (std::size_t iters : {1, 2, 3, 10, 200}) {
        const auto s = pagerank(g, {0.95, 1e-300, iters});
        EXPECT_NEAR(total(s), 1.0, 1e-12);
        EXPECT_FALSE(s.converged);
        for (double x : s.scores) EXPECT_GE(x, 0.0);
    }
}

TEST(PageRank, InducedSubgraphIgnoresOutsideEdges) {
    // Path 0-1-2-3 scored on {1, 2, 3}: the edge 0-1 must not count.
    const auto g = path_graph(4);
    const std::vector<NodeId> sub{1, 2, 3};
    const auto s = pagerank(g, std::span<const NodeId>(sub), {0.95, 1e-13, 10000});
    const auto ref = oracle::dense_pagerank(oracle::dense_adjacency(3, {{0, 1}, {1, 2}}), 0.95);
    EXPECT_LT(l1(s, ref), 1e-10);
    EXPECT_DOUBLE_EQ(s.score_of(1), s.scores[0]);
    EXPECT_THROW(s.score_of(0), std::out_of_range);
}

TEST(PageRank, PermutationEquivariance) {
    std::mt19937_64 rng(31);
    const std::size_t n = 20;
    const auto edges = oracle::random_edges(n, 0.2, rng);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    oracle::EdgeList relabeled;
    for (auto [u, v] : edges) relabeled.emplace_back(perm[u], perm[v]);
    const PageRankParams p{0.95, 1e-13, 10000};
    const auto a = pagerank(from_list(n, edges), p);
    const auto b = pagerank(from_list(n, relabeled), p);
    for (NodeId v = 0; v < n; ++v) EXPECT_NEAR(a.scores[v], b.scores[perm[v]], 1e-12);
}

TEST(PageRank, RandomGraphsMatchDenseSolve) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 10 + 9 * static_cast<std::size_t>(trial);
        const auto edges = oracle::random_edges(n, 0.05 + 0.03 * trial, rng);
        const auto s = pagerank(from_list(n, edges), {0.95, 1e-12, 10000});
        EXPECT_LT(l1(s, oracle::dense_pagerank(oracle::dense_adjacency(n, edges), 0.95)), 1e-8);
        EXPECT_NEAR(total(s), 1.0, 1e-9);
    }
}

TEST(PageRank, RejectsBadInput) {
    const auto g = cycle_graph(4);
    const std::vector<NodeId> none;
    EXPECT_THROW(pagerank(g, std::span<const NodeId>(none), {}), std::invalid_argument);
    EXPECT_THROW(pagerank(g, {1.0, 1e-8, 10}), std::invalid_argument);
    EXPECT_THROW(pagerank(g, {0.5, 0.0, 10}), std::invalid_argument);
    EXPECT_THROW(pagerank(g, {0.5, 1e-8, 0}), std::invalid_argument);
    const std::vector<NodeId> bad{9};
    EXPECT_THROW(pagerank(g, std::span<const NodeId>(bad), {}), std::out_of_range);
}

TEST(PageRank, CsvSortedByDescendingScore) {
    const auto s = pagerank(star_graph(3), {0.85, 1e-12, 1000});
    std::ostringstream os;
    write_scores_csv(os, s);
    const std::string text = os.str();
    EXPECT_EQ(text.rfind("node_id,score\n0,", 0), 0u);
    EXPECT_NE(text.find("\n1,"), std::string::npos);
}
