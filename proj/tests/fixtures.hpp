#pragma once

#include "oracles.hpp"
#include "spa/graph.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace spa::testing {

inline AttributedGraph from_list(std::size_t n, const oracle::EdgeList& list) {
    std::vector<Edge> edges;
    for (auto [u, v] : list) edges.push_back({u, v});
    return AttributedGraph::from_edges(n, edges);
}

// {0,1,2} and {3,4,5}, optionally joined by the bridge 2-3.
inline oracle::EdgeList two_triangles(bool bridge) {
    oracle::EdgeList e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    if (bridge) e.emplace_back(2, 3);
    return e;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("spa_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace spa::testing
