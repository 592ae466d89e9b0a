#include "hiercls/backend.hpp"

#include <algorithm>
#include <unordered_map>

#include "hiercls/errors.hpp"

namespace hiercls {

HashedSoftmaxBackend::HashedSoftmaxBackend(const Taxonomy& taxonomy,
                                           HashingConfig hashing)
    : taxonomy_(taxonomy), hashing_(std::move(hashing)) {
  hashing_.validate();
}

FeatureVector HashedSoftmaxBackend::encode(
    const std::string& text, const std::optional<std::string>& parent,
    const IdfTable& idf) const {
  auto tokens = tokenize(text, hashing_);
  FeatureVector vec =
      parent ? featurize_conditioned(tokens, *parent, taxonomy_, hashing_)
             : featurize(tokens, hashing_);
  apply_idf(vec, idf);
  return vec;
}

void HashedSoftmaxBackend::fit(const std::vector<LabeledText>& items,
                               const std::vector<std::string>& classes,
                               const TrainConfig& config) {
  if (items.empty()) throw DataError("fit: no training items");
  const bool with_parent = items.front().parent.has_value();
  std::unordered_map<std::string, std::size_t> class_index;
  for (std::size_t i = 0; i < classes.size(); ++i) class_index[classes[i]] = i;

  std::vector<FeatureVector> encoded;
  encoded.reserve(items.size());
  for (const auto& item : items) {
    if (item.parent.has_value() != with_parent)
      throw DataError(
          "fit: mixed conditioned and unconditioned training items");
    encoded.push_back(encode(item.text, item.parent, IdfTable{}));
  }

  IdfTable idf;
  if (hashing_.use_idf) {
    idf = build_idf(encoded, hashing_.buckets);
    for (auto& vec : encoded) apply_idf(vec, idf);
  }

  std::vector<TrainExample> train_set;
  train_set.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = class_index.find(items[i].label);
    if (it == class_index.end())
      throw DataError("fit: example labeled with unknown class '" +
                      items[i].label + "'");
    train_set.push_back({std::move(encoded[i]), it->second});
  }

  model_ = train(train_set, classes, hashing_, config);
  model_->conditioned = with_parent;
  model_->task_level = pending_level_;
  model_->taxonomy_fingerprint = taxonomy_.fingerprint();
  model_->idf = std::move(idf);
}

Prediction HashedSoftmaxBackend::predict_text(
    const std::string& text, const std::optional<std::string>& parent) const {
  if (!model_) throw InternalError("predict: backend has no model");
  if (model_->conditioned && !parent)
    throw ConfigError("model expects a parent class for every input");
  if (!model_->conditioned && parent)
    throw ConfigError("model was trained without parent conditioning");
  return predict(*model_, encode(text, parent, model_->idf));
}

const std::vector<std::string>& HashedSoftmaxBackend::classes() const {
  if (!model_) throw InternalError("backend has no model");
  return model_->classes();
}

void HashedSoftmaxBackend::save(const std::string& path) const {
  if (!model_) throw InternalError("save: backend has no model");
  save_model(*model_, path);
}

void HashedSoftmaxBackend::load(const std::string& path) {
  model_ = load_model(path);
  hashing_ = model_->hashing();
  if (model_->taxonomy_fingerprint != taxonomy_.fingerprint())
    throw DataError("model file " + path +
                    " was trained against a different taxonomy");
}

TaskLevel HashedSoftmaxBackend::task_level() const {
  return model_ ? model_->task_level : pending_level_;
}

void HashedSoftmaxBackend::set_task_level(TaskLevel level) {
  pending_level_ = level;
  if (model_) model_->task_level = level;
}

bool HashedSoftmaxBackend::conditioned() const {
  return model_ && model_->conditioned;
}

double HashedSoftmaxBackend::dev_macro_f1() const {
  return model_ ? model_->dev_macro_f1 : -1.0;
}

void HashedSoftmaxBackend::set_dev_macro_f1(double f1) {
  if (!model_) throw InternalError("no model to annotate");
  model_->dev_macro_f1 = f1;
}

const SoftmaxModel& HashedSoftmaxBackend::model() const {
  if (!model_) throw InternalError("backend has no model");
  return *model_;
}

}  // namespace hiercls
