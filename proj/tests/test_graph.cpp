#include "fixtures.hpp"
#include "spa/graph.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace spa;
using spa::testing::from_list;
using spa::testing::temp_dir;
using spa::testing::write_file;

namespace {

struct TriangleFiles {
    std::filesystem::path dir, edges, features, labels;

    explicit TriangleFiles(const std::string& name, const std::string& edge_text = "0 1\n1\t2\n0 2\n")
        : dir(temp_dir(name)), edges(dir / "edges.txt"), features(dir / "x.csv"), labels(dir / "y.txt") {
        write_file(edges, edge_text);
        write_file(features, "1.0,0.0\n0.5,0.5\n0,1\n");
        write_file(labels, "0\n0\n1\n");
    }

    AttributedGraph load() const { return load_graph(edges.string(), features.string(), labels.string()); }
};

GraphErrorKind load_error_kind(const TriangleFiles& f) {
    try {
        f.load();
    } catch (const GraphError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected GraphError";
    return GraphErrorKind::io;
}

}  // namespace

TEST(LoadGraph, Triangle) {
    const auto g = TriangleFiles("tri").load();
    EXPECT_EQ(g.num_nodes(), 3u);
    EXPECT_EQ(g.num_edges(), 3u);
    EXPECT_EQ(g.feature_dim(), 2u);
    EXPECT_EQ(g.num_classes(), 2u);
    EXPECT_DOUBLE_EQ(g.features()(1, 0), 0.5);
    ASSERT_EQ(g.csr_offsets().size(), 4u);
    EXPECT_EQ(g.csr_offsets().back(), 2 * g.num_edges());
}

TEST(LoadGraph, DeduplicatesReversedEdgesAndCountsSelfLoops) {
    const auto g = TriangleFiles("dedup", "# comment\n0 1\n1 0\n0 1\n2 2\n1 2\n\n2 0\n").load();
    EXPECT_EQ(g.num_edges(), 3u);
    EXPECT_EQ(g.load_stats().self_loops_dropped, 1u);
    EXPECT_EQ(g.load_stats().duplicate_entries_merged, 2u);
}

TEST(LoadGraph, EdgeBeyondFeatureRowsIsRowCountMismatch) {
    EXPECT_EQ(load_error_kind(TriangleFiles("mismatch", "0 1\n5 2\n")), GraphErrorKind::row_count_mismatch);
}

TEST(LoadGraph, LabelCountMismatch) {
    TriangleFiles f("labels");
    write_file(f.labels, "0\n1\n");
    EXPECT_EQ(load_error_kind(f), GraphErrorKind::row_count_mismatch);
}

TEST(LoadGraph, MalformedLines) {
    EXPECT_EQ(load_error_kind(TriangleFiles("bad1", "0 x\n")), GraphErrorKind::malformed_line);
    EXPECT_EQ(load_error_kind(TriangleFiles("bad2", "0 -1\n")), GraphErrorKind::malformed_line);
    EXPECT_EQ(load_error_kind(TriangleFiles("bad3", "0 1 2\n")), GraphErrorKind::malformed_line);
    TriangleFiles ragged("ragged");
    write_file(ragged.features, "1,2\n3\n4,5\n");
    EXPECT_EQ(load_error_kind(ragged), GraphErrorKind::malformed_line);
}

TEST(LoadGraph, EmptyEdgeFileRejected) {
    EXPECT_EQ(load_error_kind(TriangleFiles("empty", "# nothing\n")), GraphErrorKind::empty_graph);
}

TEST(LoadGraph, DeterministicIngestion) {
    TriangleFiles f("determinism", "2 1\n0 1\n0 2\n1 0\n");
    EXPECT_TRUE(f.load() == f.load());
}

TEST(Neighbors, Examples) {
    const auto tri = from_list(3, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(std::vector<NodeId>(tri.neighbors(0).begin(), tri.neighbors(0).end()),
              (std::vector<NodeId>{1, 2}));
    const auto path = from_list(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(std::vector<NodeId>(path.neighbors(1).begin(), path.neighbors(1).end()),
              (std::vector<NodeId>{0, 2}));
    const auto isolated = from_list(3, {{0, 1}});
    EXPECT_TRUE(isolated.neighbors(2).empty());
    EXPECT_THROW(tri.neighbors(3), std::out_of_range);
}

TEST(Neighbors, SymmetricSortedNoSelfAndDegreeSum) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + trial;
        auto list = oracle::random_edges(n, 0.3, rng);
        list.emplace_back(0, 0);
        const auto g = from_list(n, list);
        std::size_t degree_sum = 0;
        for (NodeId v = 0; v < n; ++v) {
            const auto nb = g.neighbors(v);
            degree_sum += nb.size();
            EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
            EXPECT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
            for (NodeId u : nb) {
                EXPECT_NE(u, v);
                EXPECT_TRUE(g.has_edge(u, v));
            }
        }
        EXPECT_EQ(degree_sum, 2 * g.num_edges());
    }
}

TEST(Propagate, ZeroStepsIsIdentity) {
    const auto g = from_list(3, {{0, 1}});
    Matrix m(3, 2);
    m << 1, 2, 3, 4, 5, 6;
    EXPECT_EQ(propagate(g, m, 0), m);
}

TEST(Propagate, RegularGraphKeepsOnes) {
    const auto k3 = from_list(3, {{0, 1}, {1, 2}, {0, 2}});
    const Matrix out = propagate(k3, Matrix::Ones(3, 1), 1);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(out(i, 0), 1.0, 1e-15);
}

TEST(Propagate, MatchesDenseOperatorSquared) {
    std::mt19937_64 rng(3);
    const auto list = oracle::random_edges(10, 0.35, rng);
    const auto g = from_list(10, list);
    Matrix m = Matrix::Random(10, 3);
    const Eigen::MatrixXd a_hat = oracle::dense_normalized(oracle::dense_adjacency(10, list));
    const Eigen::MatrixXd expect = a_hat * a_hat * Eigen::MatrixXd(m);
    const Matrix got = propagate(g, m, 2);
    EXPECT_LT((Eigen::MatrixXd(got) - expect).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((a_hat - a_hat.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagate, StepsCompose) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = from_list(12, oracle::random_edges(12, 0.25, rng));
        const Matrix m = Matrix::Random(12, 4);
        const Matrix lhs = propagate(g, m, 5);
        const Matrix rhs = propagate(g, propagate(g, m, 2), 3);
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Propagate, DimensionMismatch) {
    const auto g = from_list(3, {{0, 1}});
    EXPECT_THROW(propagate(g, Matrix::Ones(4, 1), 1), std::invalid_argument);
}

TEST(RowNormalize, RowsSumToOne) {
    std::vector<Edge> e{{0, 1}};
    Matrix x(2, 2);
    x << 1, 3, 0, 0;
    const auto g = AttributedGraph::from_edges(2, e, x, {0, 1}).with_row_normalized_features();
    EXPECT_DOUBLE_EQ(g.features()(0, 0), 0.25);
    EXPECT_DOUBLE_EQ(g.features()(1, 1), 0.0);
}
