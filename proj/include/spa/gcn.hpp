#pragma once

#include "spa/graph.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace spa {

struct TrainConfig {
    double learning_rate = 1e-2;
    double weight_decay = 5e-4;
    std::size_t epochs = 200;
    std::size_t hidden_units = 16;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(learning_rate > 0)) throw std::invalid_argument("train: learning_rate must be > 0");
        if (!(weight_decay >= 0)) throw std::invalid_argument("train: weight_decay must be >= 0");
        if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
        if (hidden_units < 1) throw std::invalid_argument("train: hidden_units must be >= 1");
    }
};

/**
 * Two-layer GCN: softmax(Ã · ReLU(Ã X W0) · W1).
 *
 * Carries its Adam moment estimates so that training can be resumed.
 */
struct GcnModel {
    Matrix w0;  // d x h
    Matrix w1;  // h x C
    Matrix m0, v0, m1, v1;
    std::size_t adam_step = 0;

    // Glorot-uniform weights, zero moments.
    static GcnModel glorot(std::size_t in, std::size_t hidden, std::size_t classes, std::uint64_t seed) {
        GcnModel m;
        std::mt19937_64 rng(seed);
        auto fill = [&](Matrix& w, std::size_t rows, std::size_t cols) {
            const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
            std::uniform_real_distribution<double> u(-limit, limit);
            w.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = u(rng);
        };
        fill(m.w0, in, hidden);
        fill(m.w1, hidden, classes);
        m.m0 = m.v0 = Matrix::Zero(m.w0.rows(), m.w0.cols());
        m.m1 = m.v1 = Matrix::Zero(m.w1.rows(), m.w1.cols());
        return m;
    }

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(w0.rows()); }
    std::size_t num_classes() const noexcept { return static_cast<std::size_t>(w1.cols()); }
};

struct GcnGradients {
    Matrix w0;
    Matrix w1;
};

namespace detail {

inline void softmax_rows(Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        row.array() -= row.maxCoeff();
        row = row.array().exp().matrix();
        row /= row.sum();
    }
}

// Intermediate activations kept for the backward pass.
struct ForwardPass {
    Matrix pre_hidden;   // Ã X W0
    Matrix hidden;       // ReLU(pre_hidden)
    Matrix agg_hidden;   // Ã hidden
    Matrix probabilities;
};

inline void check_dims(const GcnModel& model, const AttributedGraph& g) {
    if (model.input_dim() != g.feature_dim() || model.w0.cols() != model.w1.rows()) {
        throw std::invalid_argument("gcn: model input dim " + std::to_string(model.input_dim()) +
                                    " does not match feature dim " + std::to_string(g.feature_dim()));
    }
    if (model.num_classes() < g.num_classes()) {
        throw std::invalid_argument("gcn: model has " + std::to_string(model.num_classes()) +
                                    " classes, graph labels need " + std::to_string(g.num_classes()));
    }
}

inline ForwardPass forward(const GcnModel& model, const NormalizedAdjacency& adj, const Matrix& agg_x) {
    ForwardPass f;
    f.pre_hidden = agg_x * model.w0;
    f.hidden = f.pre_hidden.cwiseMax(0.0);
    f.agg_hidden = adj.apply(f.hidden);
    f.probabilities = f.agg_hidden * model.w1;
    softmax_rows(f.probabilities);
    return f;
}

}  // namespace detail

inline Matrix gcn_forward(const GcnModel& model, const AttributedGraph& g) {
    detail::check_dims(model, g);
    NormalizedAdjacency adj(g);
    return detail::forward(model, adj, adj.apply(g.features())).probabilities;
}

// Sum over labeled nodes of -log p(true class), p clamped at 1e-12.
inline double cross_entropy_loss(const Matrix& probabilities, std::span<const ClassId> labels,
                                 std::span<const NodeId> labeled) {
    if (labeled.empty()) throw std::invalid_argument("cross_entropy_loss: empty labeled set");
    double loss = 0.0;
    for (NodeId v : labeled) {
        loss -= std::log(std::max(probabilities(v, labels[v]), 1e-12));
    }
    return loss;
}

inline std::vector<ClassId> predict(const Matrix& probabilities) {
    std::vector<ClassId> out(static_cast<std::size_t>(probabilities.rows()));
    for (Eigen::Index r = 0; r < probabilities.rows(); ++r) {
        Eigen::Index arg = 0;
        probabilities.row(r).maxCoeff(&arg);
        out[static_cast<std::size_t>(r)] = static_cast<ClassId>(arg);
    }
    return out;
}

// L2 penalty (weight_decay / 2)·(|W0|² + |W1|²) added to the data loss.
inline double weight_penalty(const GcnModel& model, double weight_decay) {
    return 0.5 * weight_decay * (model.w0.squaredNorm() + model.w1.squaredNorm());
}

struct LossAndGradients {
    double data_loss = 0.0;
    double objective = 0.0;  // data_loss + weight penalty
    GcnGradients grad;
};

/**
 * Analytic gradients of cross-entropy plus L2 penalty. `agg_x` must be Ã X
 * for the graph behind `adj`.
 */
inline LossAndGradients loss_and_gradients(const GcnModel& model, const NormalizedAdjacency& adj,
                                           const Matrix& agg_x, std::span<const ClassId> labels,
                                           std::span<const NodeId> labeled, double weight_decay) {
    const detail::ForwardPass f = detail::forward(model, adj, agg_x);
    LossAndGradients out;
    out.data_loss = cross_entropy_loss(f.probabilities, labels, labeled);
    out.objective = out.data_loss + weight_penalty(model, weight_decay);

    // d loss / d logits = softmax - onehot on labeled rows, zero elsewhere.
    Matrix d_logits = Matrix::Zero(f.probabilities.rows(), f.probabilities.cols());
    for (NodeId v : labeled) {
        d_logits.row(v) = f.probabilities.row(v);
        d_logits(v, labels[v]) -= 1.0;
    }
    out.grad.w1 = f.agg_hidden.transpose() * d_logits + weight_decay * model.w1;
    // Ã is symmetric, so its transpose is itself.
    Matrix d_hidden = adj.apply(d_logits * model.w1.transpose());
    d_hidden.array() *= (f.pre_hidden.array() > 0.0).cast<double>();
    out.grad.w0 = agg_x.transpose() * d_hidden + weight_decay * model.w0;
    return out;
}

namespace detail {

inline void adam_update(Matrix& w, Matrix& m, Matrix& v, const Matrix& g, double lr, std::size_t t) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    w.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

}  // namespace detail

/**
 * Full-batch Adam on the labeled nodes for cfg.epochs epochs.
 *
 * If `loss_history` is given it receives the objective before each update
 * followed by the objective of the final model (epochs + 1 entries).
 */
inline GcnModel train(const AttributedGraph& g, std::span<const NodeId> labeled, const TrainConfig& cfg,
                      std::vector<double>* loss_history = nullptr) {
    cfg.validate();
    if (labeled.empty()) throw std::invalid_argument("train: empty labeled set");
    for (NodeId v : labeled) g.check_node(v);

    GcnModel model = GcnModel::glorot(g.feature_dim(), cfg.hidden_units, g.num_classes(), cfg.seed);
    NormalizedAdjacency adj(g);
    const Matrix agg_x = adj.apply(g.features());
    const auto labels = g.labels();

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        LossAndGradients lg = loss_and_gradients(model, adj, agg_x, labels, labeled, cfg.weight_decay);
        if (!std::isfinite(lg.objective)) {
            throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch));
        }
        if (loss_history) loss_history->push_back(lg.objective);
        ++model.adam_step;
        detail::adam_update(model.w0, model.m0, model.v0, lg.grad.w0, cfg.learning_rate, model.adam_step);
        detail::adam_update(model.w1, model.m1, model.v1, lg.grad.w1, cfg.learning_rate, model.adam_step);
    }
    if (loss_history) {
        const auto f = detail::forward(model, adj, agg_x);
        loss_history->push_back(cross_entropy_loss(f.probabilities, labels, labeled) +
                                weight_penalty(model, cfg.weight_decay));
    }
    return model;
}

}  // namespace spa
