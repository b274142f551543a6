#include "fixtures.hpp"
#include "spa/selection.hpp"
#include "spa/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace spa;
using spa::testing::from_list;
using spa::testing::two_triangles;

namespace {

std::set<NodeId> as_set(const SelectionResult& r) { return {r.selected.begin(), r.selected.end()}; }

void expect_valid(const SelectionResult& r, std::size_t b, std::size_t n) {
    EXPECT_EQ(r.selected.size(), std::min(b, n));
    EXPECT_EQ(as_set(r).size(), r.selected.size());
    for (NodeId v : r.selected) EXPECT_LT(v, n);
    ASSERT_EQ(r.provenance.size(), r.selected.size());
    for (std::size_t k = 0; k < r.selected.size(); ++k) EXPECT_EQ(r.provenance[k].node, r.selected[k]);
}

}  // namespace

TEST(SpaSelect, OneRepresentativePerTriangle) {
    const auto g = from_list(6, two_triangles(false));
    const auto r = spa_select(g, {0.5, 1}, {}, 2);
    EXPECT_EQ(r.selected, (std::vector<NodeId>{0, 3}));
    EXPECT_EQ(r.provenance[0].community, 0);
    EXPECT_EQ(r.provenance[1].community, 1);
    EXPECT_EQ(r.strategy, "spa");
}

TEST(SpaSelect, TopUpUsesGlobalPageRank) {
    const auto edges = two_triangles(false);
    const auto g = from_list(6, edges);
    const auto r = spa_select(g, {0.5, 1}, {}, 4);
    // All six global scores coincide; the tie-break picks the lowest remaining ids.
    const auto ref = oracle::dense_pagerank(oracle::dense_adjacency(6, edges), 0.95);
    EXPECT_NEAR(ref.maxCoeff() - ref.minCoeff(), 0.0, 1e-12);
    EXPECT_EQ(r.selected, (std::vector<NodeId>{0, 3, 1, 2}));
}

TEST(SpaSelect, BudgetSaturation) {
    const auto g = from_list(6, two_triangles(true));
    for (std::size_t b : {6, 10}) {
        const auto r = spa_select(g, {0.7, 2}, {}, b);
        expect_valid(r, b, 6);
        EXPECT_EQ(as_set(r), (std::set<NodeId>{0, 1, 2, 3, 4, 5}));
    }
}

TEST(SpaSelect, OverflowKeepsHighestGlobalRepresentatives) {
    // Three triangles; a pendant on node 6 makes community {6,7,8,9} the most central.
    oracle::EdgeList e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {6, 7}, {7, 8}, {6, 8}, {6, 9}};
    const auto g = from_list(10, e);
    ASSERT_EQ(scan_partition(g, {0.5, 1}).num_communities(), 3u);
    const auto r = spa_select(g, {0.5, 1}, {}, 2);
    EXPECT_EQ(r.selected, (std::vector<NodeId>{6, 0}));
}

TEST(SpaSelect, NoCommunitiesFallsBackToGlobalRanking) {
    const auto g = star_graph(4);
    const auto r = spa_select(g, {1.0, 10}, {}, 2);
    EXPECT_EQ(r.selected, pagerank_select(g, {}, 2).selected);
}

TEST(SpaSelect, RepresentativesAreCommunityMaxima) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = from_list(30, oracle::random_edges(30, 0.2, rng));
        const ScanParams sp{0.4, 2};
        const PageRankParams pp{};
        const auto parts = scan_partition(g, sp);
        const auto r = spa_select(g, sp, pp, parts.num_communities() + 3);
        std::set<CommunityId> covered;
        for (std::size_t k = 0; k < parts.num_communities(); ++k) {
            const auto& rec = r.provenance[k];
            ASSERT_NE(rec.community, kNoCommunity);
            covered.insert(rec.community);
            const auto& members = parts.communities[static_cast<std::size_t>(rec.community)];
            const auto local = pagerank(g, std::span<const NodeId>(members), pp);
            for (double s : local.scores) EXPECT_LE(s, local.score_of(rec.node));
        }
        EXPECT_EQ(covered.size(), parts.num_communities());
    }
}

TEST(SpaSelect, RejectsZeroBudget) {
    EXPECT_THROW(spa_select(cycle_graph(4), {}, {}, 0), std::invalid_argument);
}

TEST(RandomSelect, SaturationAndDeterminism) {
    const auto g = cycle_graph(10);
    EXPECT_EQ(as_set(random_select(g, 10, 3)).size(), 10u);
    EXPECT_EQ(random_select(g, 4, 7).selected, random_select(g, 4, 7).selected);
    EXPECT_THROW(random_select(g, 0, 1), std::invalid_argument);
}

TEST(RandomSelect, UniformFrequencies) {
    const auto g = cycle_graph(10);
    std::vector<int> hits(10, 0);
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) ++hits[random_select(g, 1, static_cast<std::uint64_t>(t)).selected[0]];
    const double sigma = std::sqrt(0.1 * 0.9 / trials);
    for (int h : hits) EXPECT_NEAR(h / static_cast<double>(trials), 0.1, 3 * sigma);
}

TEST(PageRankSelect, Examples) {
    EXPECT_EQ(pagerank_select(star_graph(4), {}, 1).selected, (std::vector<NodeId>{0}));
    EXPECT_EQ(pagerank_select(cycle_graph(6), {}, 3).selected, (std::vector<NodeId>{0, 1, 2}));
    const auto g = star_graph(4);
    const auto all = pagerank_select(g, {}, 5);
    expect_valid(all, 5, 5);
    for (std::size_t k = 1; k < all.provenance.size(); ++k) {
        EXPECT_GE(all.provenance[k - 1].score, all.provenance[k].score);
    }
}

TEST(PageRankSelect, BudgetPrefixesNest) {
    std::mt19937_64 rng(6);
    const auto g = from_list(25, oracle::random_edges(25, 0.15, rng));
    auto prev = pagerank_select(g, {}, 1).selected;
    for (std::size_t b = 2; b <= 25; ++b) {
        const auto cur = pagerank_select(g, {}, b).selected;
        EXPECT_TRUE(std::equal(prev.begin(), prev.end(), cur.begin()));
        prev = cur;
    }
}

TEST(UncertaintySelect, EntropyOrdering) {
    Matrix p(5, 2);
    p << 0.5, 0.5, 0.6, 0.4, 0.7, 0.3, 0.8, 0.2, 0.9, 0.1;
    EXPECT_EQ(uncertainty_select(p, {}, 2).selected, (std::vector<NodeId>{0, 1}));

    Matrix q(3, 3);
    q << 1, 0, 0, 0.2, 0.5, 0.3, 1.0 / 3, 1.0 / 3, 1.0 / 3;
    const auto r = uncertainty_select(q, {}, 3);
    EXPECT_EQ(r.selected, (std::vector<NodeId>{2, 1, 0}));
    EXPECT_EQ(r.provenance[2].score, 0.0);
}

TEST(UncertaintySelect, SkipsLabeledAndValidatesRows) {
    Matrix p(4, 2);
    p << 0.5, 0.5, 0.6, 0.4, 0.7, 0.3, 0.8, 0.2;
    const std::vector<NodeId> labeled{0, 2};
    const auto r = uncertainty_select(p, labeled, 5);
    EXPECT_EQ(r.selected, (std::vector<NodeId>{1, 3}));

    const std::vector<NodeId> all{0, 1, 2, 3};
    EXPECT_THROW(uncertainty_select(p, all, 1), std::invalid_argument);
    Matrix bad = p;
    bad(1, 0) = 0.9;
    EXPECT_THROW(uncertainty_select(bad, {}, 1), std::invalid_argument);
}

namespace {

// Two disconnected 5-cliques whose features are constant per clique.
AttributedGraph separated_cliques() {
    std::vector<Edge> e;
    for (NodeId base : {0u, 5u}) {
        for (NodeId i = 0; i < 5; ++i) {
            for (NodeId j = i + 1; j < 5; ++j) e.push_back({base + i, base + j});
        }
    }
    Matrix x(10, 2);
    std::vector<ClassId> y(10);
    for (NodeId v = 0; v < 10; ++v) {
        x(v, 0) = v < 5 ? 0.0 : 100.0;
        x(v, 1) = v < 5 ? 1.0 : -50.0;
        y[v] = v < 5 ? 0 : 1;
    }
    return AttributedGraph::from_edges(10, e, x, y);
}

}  // namespace

TEST(FeatPropSelect, OneMedoidPerSeparatedCluster) {
    const auto g = separated_cliques();
    const auto r = featprop_select(g, 2, 2, 0);
    ASSERT_EQ(r.selected.size(), 2u);
    EXPECT_LT(r.selected[0], 5u);
    EXPECT_GE(r.selected[1], 5u);

    // Brute force over all C(10,2) medoid pairs: the optimum splits the cliques.
    const Matrix z = propagate(g, g.features(), 2);
    const Matrix d = pairwise_euclidean(z);
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> arg;
    for (std::size_t a = 0; a < 10; ++a) {
        for (std::size_t b = a + 1; b < 10; ++b) {
            double c = 0.0;
            for (Eigen::Index o = 0; o < 10; ++o) c += std::min(d(o, a), d(o, b));
            if (c < best) {
                best = c;
                arg = {a, b};
            }
        }
    }
    EXPECT_LT(arg.first, 5u);
    EXPECT_GE(arg.second, 5u);
}

TEST(FeatPropSelect, SaturationAndRawFeatures) {
    const auto g = separated_cliques();
    EXPECT_EQ(as_set(featprop_select(g, 2, 10, 1)).size(), 10u);
    EXPECT_THROW(featprop_select(g, 2, 11, 1), std::invalid_argument);
    // steps = 0 clusters raw features; same split here.
    const auto r = featprop_select(g, 0, 2, 3);
    EXPECT_LT(r.selected[0], 5u);
    EXPECT_GE(r.selected[1], 5u);
}

TEST(Selection, JsonShape) {
    const auto r = spa_select(from_list(6, two_triangles(false)), {0.5, 1}, {}, 2);
    const auto j = to_json(r, 2, 9);
    EXPECT_EQ(j["strategy"], "spa");
    EXPECT_EQ(j["budget"], 2);
    EXPECT_EQ(j["seed"], 9);
    EXPECT_EQ(j["selected"], nlohmann::json::array({0, 3}));
    EXPECT_TRUE(j["query_time_ms"].is_number());
    EXPECT_EQ(j["provenance"][1]["community"], 1);
}
