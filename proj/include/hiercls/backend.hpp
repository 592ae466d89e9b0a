#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hiercls/model.hpp"
#include "hiercls/taxonomy.hpp"

namespace hiercls {

// One training item as the backend sees it: raw text, an optional parent
// class to condition on, and the target label.
struct LabeledText {
  std::string text;
  std::optional<std::string> parent;
  std::string label;
};

// The pluggable classifier surface the pipeline is written against.
// Implementations must be deterministic under a fixed TrainConfig seed.
class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;

  virtual void fit(const std::vector<LabeledText>& items,
                   const std::vector<std::string>& classes,
                   const TrainConfig& config) = 0;
  virtual Prediction predict_text(
      const std::string& text,
      const std::optional<std::string>& parent) const = 0;
  virtual const std::vector<std::string>& classes() const = 0;

  virtual void save(const std::string& path) const = 0;
  virtual void load(const std::string& path) = 0;

  virtual TaskLevel task_level() const = 0;
  virtual void set_task_level(TaskLevel level) = 0;
  virtual bool conditioned() const = 0;
  virtual double dev_macro_f1() const = 0;
  virtual void set_dev_macro_f1(double f1) = 0;
};

// Reference backend: whitespace tokens, hashed n-grams, softmax model.
class HashedSoftmaxBackend : public ClassifierBackend {
 public:
  HashedSoftmaxBackend(const Taxonomy& taxonomy, HashingConfig hashing);

  void fit(const std::vector<LabeledText>& items,
           const std::vector<std::string>& classes,
           const TrainConfig& config) override;
  Prediction predict_text(
      const std::string& text,
      const std::optional<std::string>& parent) const override;
  const std::vector<std::string>& classes() const override;

  void save(const std::string& path) const override;
  void load(const std::string& path) override;

  TaskLevel task_level() const override;
  void set_task_level(TaskLevel level) override;
  bool conditioned() const override;
  double dev_macro_f1() const override;
  void set_dev_macro_f1(double f1) override;

  const SoftmaxModel& model() const;
  bool has_model() const { return model_.has_value(); }

 private:
  FeatureVector encode(const std::string& text,
                       const std::optional<std::string>& parent,
                       const IdfTable& idf) const;

  Taxonomy taxonomy_;
  HashingConfig hashing_;
  std::optional<SoftmaxModel> model_;
  TaskLevel pending_level_ = TaskLevel::kBinary;
};

}  // namespace hiercls
