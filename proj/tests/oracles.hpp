#pragma once

// Independent reference computations used to check the library. These
// deliberately avoid the library's own forward/score paths.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace oracles {

// Weighted mean cross-entropy over a dense batch plus 0.5*l2*||W||^2
// (bias unpenalized). W is K x B row-major, each batch item is a dense
// B-vector with a class index.
inline double softmax_loss(
    const std::vector<double>& weights, const std::vector<double>& bias,
    std::size_t num_classes, std::size_t num_buckets,
    const std::vector<std::pair<std::vector<double>, std::size_t>>& batch,
    double l2, const std::vector<double>& class_weights) {
  double data = 0.0;
  double weight_sum = 0.0;
  for (const auto& [x, label] : batch) {
    std::vector<double> logits(num_classes);
    for (std::size_t k = 0; k < num_classes; ++k) {
      double z = bias[k];
      for (std::size_t j = 0; j < num_buckets; ++j)
        z += weights[k * num_buckets + j] * x[j];
      logits[k] = z;
    }
    double max_z = logits[0];
    for (double z : logits) max_z = std::max(max_z, z);
    double sum_exp = 0.0;
    for (double z : logits) sum_exp += std::exp(z - max_z);
    const double log_p = logits[label] - max_z - std::log(sum_exp);
    const double u = class_weights.empty() ? 1.0 : class_weights[label];
    data += u * -log_p;
    weight_sum += u;
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return data / weight_sum + 0.5 * l2 * penalty;
}

// Macro F1 straight from the label lists, one class at a time, with the
// 0/0 -> 0 convention.
inline double macro_f1(const std::vector<std::string>& gold,
                       const std::vector<std::string>& pred,
                       const std::vector<std::string>& classes) {
  double sum = 0.0;
  for (const auto& c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool g = gold[i] == c;
      const bool p = pred[i] == c;
      if (g && p) ++tp;
      else if (!g && p) ++fp;
      else if (g && !p) ++fn;
    }
    const double prec = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
    const double rec = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
    const double f1 =
        (prec + rec) > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    sum += f1;
  }
  return sum / double(classes.size());
}

}  // namespace oracles
