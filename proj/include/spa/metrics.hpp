#pragma once

#include "spa/types.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spa {

// Fraction of eval_set nodes whose prediction equals the label.
inline double accuracy(std::span<const ClassId> predictions, std::span<const ClassId> labels,
                       std::span<const NodeId> eval_set) {
    if (eval_set.empty()) throw std::invalid_argument("accuracy: empty evaluation set");
    std::size_t correct = 0;
    for (NodeId v : eval_set) {
        if (predictions[v] == labels[v]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(eval_set.size());
}

/**
 * Unweighted mean of one-vs-rest F1 over all num_classes classes. Precision
 * or recall with a zero denominator counts as 0, and so does F1 when
 * precision + recall is 0. Absent classes therefore contribute 0.
 */
inline double macro_f1(std::span<const ClassId> predictions, std::span<const ClassId> labels,
                       std::span<const NodeId> eval_set, std::size_t num_classes) {
    if (eval_set.empty()) throw std::invalid_argument("macro_f1: empty evaluation set");
    if (num_classes == 0) throw std::invalid_argument("macro_f1: num_classes must be >= 1");
    std::vector<std::size_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
    for (NodeId v : eval_set) {
        const ClassId p = predictions[v], t = labels[v];
        if (p >= num_classes || t >= num_classes) {
            throw std::out_of_range("macro_f1: class id >= num_classes at node " + std::to_string(v));
        }
        if (p == t) {
            ++tp[t];
        } else {
            ++fp[p];
            ++fn[t];
        }
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        const double precision =
            tp[c] + fp[c] > 0 ? static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]) : 0.0;
        const double recall =
            tp[c] + fn[c] > 0 ? static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fn[c]) : 0.0;
        if (precision + recall > 0) sum += 2.0 * precision * recall / (precision + recall);
    }
    return sum / static_cast<double>(num_classes);
}

}  // namespace spa
