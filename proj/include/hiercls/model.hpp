#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hiercls/features.hpp"

namespace hiercls {

struct TrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 0.05;
  double epsilon = 1e-8;  // adaptive-moment denominator offset
  double beta1 = 0.9;     // first moment decay
  double beta2 = 0.999;   // second moment decay
  std::uint64_t shuffle_seed = 13;
  double l2 = 1e-6;
  bool balance_classes = false;  // inverse-frequency example weighting

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct Prediction {
  std::vector<double> probabilities;  // sums to 1
  std::size_t argmax_index = 0;       // ties broken by lowest class index
  std::string argmax_class;
  double score = 0.0;  // probabilities[argmax_index]
};

// A featurized training item. `label` indexes the model's class list.
struct TrainExample {
  FeatureVector features;
  std::size_t label = 0;
};

struct Gradient {
  std::vector<double> weights;  // classes x buckets, row-major
  std::vector<double> bias;     // classes
  double loss = 0.0;            // the regularized batch loss differentiated
};

// What the model is for, beyond the bare class list. Travels in the
// model file so pipeline stages can sanity-check their inputs.
enum class TaskLevel : std::uint8_t { kBinary = 0, kCategory = 1, kVector = 2 };

const std::string& to_string(TaskLevel level);
TaskLevel task_level_from_string(const std::string& s);

// Multinomial softmax over hashed sparse features: dense class x bucket
// weight matrix plus per-class bias. Zero-initialized (the objective is
// convex, so no random init).
class SoftmaxModel {
 public:
  SoftmaxModel(std::vector<std::string> classes, HashingConfig hashing);

  const std::vector<std::string>& classes() const { return classes_; }
  std::uint32_t buckets() const { return hashing_.buckets; }
  std::size_t num_classes() const { return classes_.size(); }
  const HashingConfig& hashing() const { return hashing_; }

  double weight(std::size_t cls, std::uint32_t bucket) const;
  double& weight(std::size_t cls, std::uint32_t bucket);
  double bias(std::size_t cls) const { return bias_[cls]; }
  double& bias(std::size_t cls) { return bias_[cls]; }
  std::span<const double> weights_flat() const { return weights_; }
  std::span<const double> bias_flat() const { return bias_; }

  TaskLevel task_level = TaskLevel::kBinary;
  bool conditioned = false;  // expects parent-conditioned featurization
  std::uint64_t taxonomy_fingerprint = 0;
  TrainConfig train_snapshot;
  std::vector<double> loss_history;  // [0] = before any update
  double dev_macro_f1 = -1.0;        // set by pipeline stages, -1 = unset
  IdfTable idf;                      // non-empty iff hashing.use_idf

 private:
  friend SoftmaxModel train(const std::vector<TrainExample>&,
                            std::vector<std::string>, const HashingConfig&,
                            const TrainConfig&);
  std::vector<std::string> classes_;
  HashingConfig hashing_;
  std::vector<double> weights_;  // K x B row-major
  std::vector<double> bias_;     // K
};

// Mini-batch adaptive-moment minimization of mean cross-entropy plus an
// L2 penalty on the weights (bias unpenalized). Deterministic: per-epoch
// shuffling comes from config.shuffle_seed, batches run in order,
// updates are dense.
SoftmaxModel train(const std::vector<TrainExample>& examples,
                   std::vector<std::string> classes,
                   const HashingConfig& hashing, const TrainConfig& config);

// Analytic gradient of the regularized batch objective at the model's
// current parameters. class_weights: per-class example weights (empty =
// uniform); training passes these when balance_classes is set.
Gradient gradient(const SoftmaxModel& model,
                  std::span<const TrainExample> batch,
                  const TrainConfig& config,
                  std::span<const double> class_weights = {});

double batch_loss(const SoftmaxModel& model,
                  std::span<const TrainExample> batch,
                  const TrainConfig& config,
                  std::span<const double> class_weights = {});

Prediction predict(const SoftmaxModel& model, const FeatureVector& features);

// Binary model file: versioned little-endian header, payload, fnv64
// checksum trailer. load(save(m)) predicts bit-identically to m.
void save_model(const SoftmaxModel& model, const std::string& path);
SoftmaxModel load_model(const std::string& path);

}  // namespace hiercls
