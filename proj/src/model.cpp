#include "hiercls/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "hiercls/errors.hpp"

namespace hiercls {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
    throw ConfigError("moment decays must be in (0,1)");
  if (l2 < 0.0) throw ConfigError("l2 must be >= 0");
}

const std::string& to_string(TaskLevel level) {
  static const std::string names[] = {"binary", "category", "vector"};
  return names[static_cast<std::uint8_t>(level)];
}

TaskLevel task_level_from_string(const std::string& s) {
  if (s == "binary") return TaskLevel::kBinary;
  if (s == "category") return TaskLevel::kCategory;
  if (s == "vector") return TaskLevel::kVector;
  throw DataError("unknown task level: " + s);
}

SoftmaxModel::SoftmaxModel(std::vector<std::string> classes,
                           HashingConfig hashing)
    : classes_(std::move(classes)), hashing_(std::move(hashing)) {
  hashing_.validate();
  if (classes_.empty()) throw ConfigError("model needs at least one class");
  weights_.assign(classes_.size() * static_cast<std::size_t>(hashing_.buckets),
                  0.0);
  bias_.assign(classes_.size(), 0.0);
}

double SoftmaxModel::weight(std::size_t cls, std::uint32_t bucket) const {
  return weights_[cls * hashing_.buckets + bucket];
}

double& SoftmaxModel::weight(std::size_t cls, std::uint32_t bucket) {
  return weights_[cls * hashing_.buckets + bucket];
}

namespace {

// Logits and stable log-softmax pieces for one example.
struct Forward {
  std::vector<double> probs;
  double log_prob_of(std::size_t cls) const { return log_probs[cls]; }
  std::vector<double> log_probs;
};

Forward forward(const SoftmaxModel& model, const FeatureVector& fv) {
  const std::size_t k_classes = model.num_classes();
  const std::uint32_t buckets = model.buckets();
  std::vector<double> logits(k_classes);
  for (std::size_t k = 0; k < k_classes; ++k) logits[k] = model.bias(k);
  for (const auto& [idx, w] : fv.entries) {
    if (idx >= buckets)
      throw DataError("feature index " + std::to_string(idx) +
                      " out of range for model with " +
                      std::to_string(buckets) + " buckets");
    for (std::size_t k = 0; k < k_classes; ++k)
      logits[k] += model.weight(k, idx) * w;
  }
  double max_logit = logits[0];
  for (double z : logits) max_logit = std::max(max_logit, z);
  double sum_exp = 0.0;
  for (double z : logits) sum_exp += std::exp(z - max_logit);
  const double log_sum = std::log(sum_exp);
  Forward f;
  f.probs.resize(k_classes);
  f.log_probs.resize(k_classes);
  for (std::size_t k = 0; k < k_classes; ++k) {
    f.log_probs[k] = logits[k] - max_logit - log_sum;
    f.probs[k] = std::exp(f.log_probs[k]);
  }
  return f;
}

double l2_penalty(const SoftmaxModel& model, double l2) {
  if (l2 == 0.0) return 0.0;
  double sq = 0.0;
  for (double w : model.weights_flat()) sq += w * w;
  return 0.5 * l2 * sq;
}

double example_weight(std::span<const double> class_weights,
                      std::size_t label) {
  return class_weights.empty() ? 1.0 : class_weights[label];
}

Gradient gradient_core(const SoftmaxModel& model,
                       const TrainExample* const* batch, std::size_t n,
                       const TrainConfig& config,
                       std::span<const double> class_weights) {
  if (n == 0) throw DataError("gradient: empty batch");
  const std::size_t k_classes = model.num_classes();
  const std::size_t buckets = model.buckets();
  Gradient g;
  g.weights.assign(k_classes * buckets, 0.0);
  g.bias.assign(k_classes, 0.0);

  double data_loss = 0.0;
  double weight_sum = 0.0;
  std::vector<double> delta(k_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const TrainExample& ex = *batch[i];
    if (ex.label >= k_classes)
      throw DataError("gradient: label index " + std::to_string(ex.label) +
                      " out of range");
    Forward f = forward(model, ex.features);
    const double u = example_weight(class_weights, ex.label);
    weight_sum += u;
    data_loss += u * -f.log_prob_of(ex.label);
    for (std::size_t k = 0; k < k_classes; ++k)
      delta[k] = u * (f.probs[k] - (k == ex.label ? 1.0 : 0.0));
    for (std::size_t k = 0; k < k_classes; ++k) g.bias[k] += delta[k];
    for (const auto& [idx, w] : ex.features.entries)
      for (std::size_t k = 0; k < k_classes; ++k)
        g.weights[k * buckets + idx] += delta[k] * w;
  }
  if (weight_sum <= 0.0)
    throw InternalError("gradient: zero total example weight");
  const double inv = 1.0 / weight_sum;
  for (double& v : g.weights) v *= inv;
  for (double& v : g.bias) v *= inv;
  if (config.l2 > 0.0) {
    auto w = model.weights_flat();
    for (std::size_t i = 0; i < w.size(); ++i)
      g.weights[i] += config.l2 * w[i];
  }
  g.loss = data_loss * inv + l2_penalty(model, config.l2);
  return g;
}

std::vector<double> inverse_frequency_weights(
    const std::vector<TrainExample>& examples, std::size_t k_classes) {
  std::vector<double> counts(k_classes, 0.0);
  for (const auto& ex : examples) counts[ex.label] += 1.0;
  std::vector<double> weights(k_classes, 0.0);
  const double n = static_cast<double>(examples.size());
  const double k = static_cast<double>(k_classes);
  for (std::size_t c = 0; c < k_classes; ++c)
    if (counts[c] > 0.0) weights[c] = n / (k * counts[c]);
  return weights;
}

}  // namespace

Gradient gradient(const SoftmaxModel& model,
                  std::span<const TrainExample> batch,
                  const TrainConfig& config,
                  std::span<const double> class_weights) {
  std::vector<const TrainExample*> ptrs(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) ptrs[i] = &batch[i];
  return gradient_core(model, ptrs.data(), ptrs.size(), config,
                       class_weights);
}

double batch_loss(const SoftmaxModel& model,
                  std::span<const TrainExample> batch,
                  const TrainConfig& config,
                  std::span<const double> class_weights) {
  if (batch.empty()) throw DataError("batch_loss: empty batch");
  double data_loss = 0.0;
  double weight_sum = 0.0;
  for (const auto& ex : batch) {
    Forward f = forward(model, ex.features);
    const double u = example_weight(class_weights, ex.label);
    weight_sum += u;
    data_loss += u * -f.log_prob_of(ex.label);
  }
  return data_loss / weight_sum + l2_penalty(model, config.l2);
}

SoftmaxModel train(const std::vector<TrainExample>& examples,
                   std::vector<std::string> classes,
                   const HashingConfig& hashing, const TrainConfig& config) {
  config.validate();
  if (examples.empty()) throw DataError("train: no examples");
  SoftmaxModel model(std::move(classes), hashing);
  const std::size_t k_classes = model.num_classes();
  const std::size_t buckets = model.buckets();
  for (const auto& ex : examples) {
    if (ex.label >= k_classes)
      throw DataError("train: example labeled with class index " +
                      std::to_string(ex.label) + ", but model has only " +
                      std::to_string(k_classes) + " classes");
    for (const auto& [idx, w] : ex.features.entries)
      if (idx >= buckets)
        throw DataError("train: feature index out of range");
  }
  model.train_snapshot = config;

  std::vector<double> class_weights;
  if (config.balance_classes)
    class_weights = inverse_frequency_weights(examples, k_classes);

  const double initial_loss =
      batch_loss(model, examples, config, class_weights);
  if (!std::isfinite(initial_loss))
    throw InternalError("train: non-finite initial loss");
  model.loss_history.push_back(initial_loss);

  const std::size_t n_params = k_classes * buckets;
  std::vector<double> m_w(n_params, 0.0), v_w(n_params, 0.0);
  std::vector<double> m_b(k_classes, 0.0), v_b(k_classes, 0.0);
  std::uint64_t step = 0;

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(config.shuffle_seed);
  std::vector<const TrainExample*> batch;
  batch.reserve(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = rng() % i;
      std::swap(order[i - 1], order[j]);
    }
    std::size_t pos = 0;
    int batch_index = 0;
    while (pos < order.size()) {
      batch.clear();
      for (; pos < order.size() &&
             batch.size() < static_cast<std::size_t>(config.batch_size);
           ++pos)
        batch.push_back(&examples[order[pos]]);
      Gradient g = gradient_core(model, batch.data(), batch.size(), config,
                                 class_weights);
      if (!std::isfinite(g.loss))
        throw InternalError("train: non-finite loss in epoch " +
                            std::to_string(epoch) + ", batch " +
                            std::to_string(batch_index));
      ++step;
      const double bc1 = 1.0 - std::pow(config.beta1, double(step));
      const double bc2 = 1.0 - std::pow(config.beta2, double(step));
      for (std::size_t i = 0; i < n_params; ++i) {
        const double grad = g.weights[i];
        m_w[i] = config.beta1 * m_w[i] + (1.0 - config.beta1) * grad;
        v_w[i] = config.beta2 * v_w[i] + (1.0 - config.beta2) * grad * grad;
        const double m_hat = m_w[i] / bc1;
        const double v_hat = v_w[i] / bc2;
        model.weights_[i] -=
            config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
      }
      for (std::size_t k = 0; k < k_classes; ++k) {
        const double grad = g.bias[k];
        m_b[k] = config.beta1 * m_b[k] + (1.0 - config.beta1) * grad;
        v_b[k] = config.beta2 * v_b[k] + (1.0 - config.beta2) * grad * grad;
        const double m_hat = m_b[k] / bc1;
        const double v_hat = v_b[k] / bc2;
        model.bias(k) -=
            config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
      }
      ++batch_index;
    }
    model.loss_history.push_back(
        batch_loss(model, examples, config, class_weights));
  }
  return model;
}

Prediction predict(const SoftmaxModel& model, const FeatureVector& features) {
  Forward f = forward(model, features);
  Prediction p;
  p.probabilities = std::move(f.probs);
  p.argmax_index = 0;
  for (std::size_t k = 1; k < p.probabilities.size(); ++k)
    if (p.probabilities[k] > p.probabilities[p.argmax_index])
      p.argmax_index = k;
  p.argmax_class = model.classes()[p.argmax_index];
  p.score = p.probabilities[p.argmax_index];
  return p;
}

// --- model file ------------------------------------------------------
//
// All integers little-endian; doubles stored as their IEEE-754 bit
// pattern in a little-endian u64. Layout:
//   "HCSM" | u32 version | u32 endian tag 0x01020304
//   u64 taxonomy fingerprint
//   u32 K, K x (u32 len, bytes) class names
//   u8 task level | u8 conditioned
//   hashing: u32 n_orders, n x i32 | u32 buckets | u64 seed |
//            u8 lowercase | u64 max_tokens | u8 sublinear | u8 use_idf
//   train:   i32 epochs | i32 batch | f64 lr | f64 eps | f64 beta1 |
//            f64 beta2 | u64 shuffle seed | f64 l2 | u8 balance
//   f64 dev macro F1
//   u32 n_loss, n x f64 loss history
//   K x f64 bias
//   u64 weight count (= K*B), K*B x f64 weights row-major
//   u8 has_idf, [B x f64]
//   u64 fnv1a-64 checksum of everything above

namespace {

constexpr char kMagic[4] = {'H', 'C', 'S', 'M'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kEndianTag = 0x01020304u;
constexpr std::uint64_t kFnvBasis = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

class ByteSink {
 public:
  explicit ByteSink(const std::string& path)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw DataError("cannot write model file: " + path);
  }
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= b[i];
      hash_ *= kFnvPrime;
    }
    out_.write(reinterpret_cast<const char*>(p),
               static_cast<std::streamsize>(n));
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
    bytes(b, 4);
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    bytes(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void finish() {
    // Trailer is the running checksum itself, excluded from hashing.
    std::uint64_t h = hash_;
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (h >> (8 * i)) & 0xff;
    out_.write(reinterpret_cast<const char*>(b), 8);
    out_.flush();
    if (!out_) throw DataError("write failed for model file: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
  std::uint64_t hash_ = kFnvBasis;
};

class ByteSource {
 public:
  explicit ByteSource(const std::string& path)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw DataError("cannot open model file: " + path);
  }
  void bytes(void* p, std::size_t n) {
    in_.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw ModelTruncatedError("truncated model file: " + path_);
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= b[i];
      hash_ *= kFnvPrime;
    }
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    std::uint32_t len = u32();
    if (len > (1u << 24))
      throw ModelFileError("implausible string length in model file: " +
                           path_);
    std::string s(len, '\0');
    if (len) bytes(s.data(), len);
    return s;
  }
  void verify_checksum() {
    const std::uint64_t computed = hash_;
    unsigned char b[8];
    in_.read(reinterpret_cast<char*>(b), 8);
    if (in_.gcount() != 8)
      throw ModelTruncatedError("truncated model file: " + path_);
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= std::uint64_t(b[i]) << (8 * i);
    if (stored != computed)
      throw ModelChecksumError("model file checksum mismatch: " + path_);
  }

 private:
  std::ifstream in_;
  std::string path_;
  std::uint64_t hash_ = kFnvBasis;
};

}  // namespace

void save_model(const SoftmaxModel& model, const std::string& path) {
  ByteSink sink(path);
  sink.bytes(kMagic, 4);
  sink.u32(kFormatVersion);
  sink.u32(kEndianTag);
  sink.u64(model.taxonomy_fingerprint);
  const auto& classes = model.classes();
  sink.u32(static_cast<std::uint32_t>(classes.size()));
  for (const auto& c : classes) sink.str(c);
  sink.u8(static_cast<std::uint8_t>(model.task_level));
  sink.u8(model.conditioned ? 1 : 0);

  const HashingConfig& h = model.hashing();
  sink.u32(static_cast<std::uint32_t>(h.ngram_orders.size()));
  for (int n : h.ngram_orders) sink.i32(n);
  sink.u32(h.buckets);
  sink.u64(h.hash_seed);
  sink.u8(h.lowercase ? 1 : 0);
  sink.u64(h.max_tokens);
  sink.u8(h.sublinear_tf ? 1 : 0);
  sink.u8(h.use_idf ? 1 : 0);

  const TrainConfig& t = model.train_snapshot;
  sink.i32(t.epochs);
  sink.i32(t.batch_size);
  sink.f64(t.learning_rate);
  sink.f64(t.epsilon);
  sink.f64(t.beta1);
  sink.f64(t.beta2);
  sink.u64(t.shuffle_seed);
  sink.f64(t.l2);
  sink.u8(t.balance_classes ? 1 : 0);

  sink.f64(model.dev_macro_f1);
  sink.u32(static_cast<std::uint32_t>(model.loss_history.size()));
  for (double v : model.loss_history) sink.f64(v);

  for (std::size_t k = 0; k < classes.size(); ++k) sink.f64(model.bias(k));
  const auto weights = model.weights_flat();
  sink.u64(weights.size());
  for (double w : weights) sink.f64(w);

  if (model.idf.empty()) {
    sink.u8(0);
  } else {
    sink.u8(1);
    for (double v : model.idf.values) sink.f64(v);
  }
  sink.finish();
}

SoftmaxModel load_model(const std::string& path) {
  ByteSource src(path);
  char magic[4];
  src.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ModelFileError("not a model file: " + path);
  const std::uint32_t version = src.u32();
  if (version > kFormatVersion)
    throw ModelVersionError("model file " + path + " has format version " +
                            std::to_string(version) + "; this build reads up " +
                            "to version " + std::to_string(kFormatVersion));
  if (version == 0)
    throw ModelVersionError("model file " + path + " has invalid version 0");
  if (src.u32() != kEndianTag)
    throw ModelFileError("model file endianness tag mismatch: " + path);

  const std::uint64_t taxonomy_fp = src.u64();
  const std::uint32_t k_classes = src.u32();
  if (k_classes == 0 || k_classes > (1u << 20))
    throw ModelFileError("implausible class count in model file: " + path);
  std::vector<std::string> classes(k_classes);
  for (auto& c : classes) c = src.str();
  const std::uint8_t level = src.u8();
  if (level > 2) throw ModelFileError("bad task level in model file: " + path);
  const bool conditioned = src.u8() != 0;

  HashingConfig h;
  const std::uint32_t n_orders = src.u32();
  if (n_orders == 0 || n_orders > 16)
    throw ModelFileError("implausible n-gram order count: " + path);
  h.ngram_orders.resize(n_orders);
  for (auto& n : h.ngram_orders) n = src.i32();
  h.buckets = src.u32();
  h.hash_seed = src.u64();
  h.lowercase = src.u8() != 0;
  h.max_tokens = src.u64();
  h.sublinear_tf = src.u8() != 0;
  h.use_idf = src.u8() != 0;
  h.validate();

  TrainConfig t;
  t.epochs = src.i32();
  t.batch_size = src.i32();
  t.learning_rate = src.f64();
  t.epsilon = src.f64();
  t.beta1 = src.f64();
  t.beta2 = src.f64();
  t.shuffle_seed = src.u64();
  t.l2 = src.f64();
  t.balance_classes = src.u8() != 0;

  SoftmaxModel model(std::move(classes), h);
  model.taxonomy_fingerprint = taxonomy_fp;
  model.task_level = static_cast<TaskLevel>(level);
  model.conditioned = conditioned;
  model.train_snapshot = t;
  model.dev_macro_f1 = src.f64();
  const std::uint32_t n_loss = src.u32();
  if (n_loss > (1u << 20))
    throw ModelFileError("implausible loss history length: " + path);
  model.loss_history.resize(n_loss);
  for (auto& v : model.loss_history) v = src.f64();

  for (std::size_t k = 0; k < model.num_classes(); ++k)
    model.bias(k) = src.f64();
  const std::uint64_t n_weights = src.u64();
  if (n_weights != model.num_classes() * std::uint64_t(model.buckets()))
    throw ModelFileError("weight count mismatch in model file: " + path);
  for (std::size_t k = 0; k < model.num_classes(); ++k)
    for (std::uint32_t j = 0; j < model.buckets(); ++j)
      model.weight(k, j) = src.f64();

  if (src.u8() != 0) {
    model.idf.values.resize(model.buckets());
    for (auto& v : model.idf.values) v = src.f64();
  }
  src.verify_checksum();
  return model;
}

}  // namespace hiercls
