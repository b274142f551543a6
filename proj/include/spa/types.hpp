#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spa {

using NodeId = std::uint32_t;
using ClassId = std::uint32_t;
using CommunityId = std::int64_t;

inline constexpr CommunityId kNoCommunity = -1;

// Row-major so that node rows are contiguous (feature rows, propagated rows).
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class GraphErrorKind { malformed_line, row_count_mismatch, empty_graph, io };

// Raised by ingestion; `kind` distinguishes the validation failure.
class GraphError : public std::runtime_error {
public:
    GraphError(GraphErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    GraphErrorKind kind() const noexcept { return kind_; }

private:
    GraphErrorKind kind_;
};

// Non-finite loss or similar numeric breakdown during training.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spa
