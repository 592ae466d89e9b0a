#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hiercls/backend.hpp"
#include "hiercls/corpus.hpp"
#include "hiercls/eval.hpp"
#include "hiercls/model.hpp"
#include "hiercls/taxonomy.hpp"

namespace hiercls {

// How "potentially sexist" pool items are picked. Argmax mode keeps an
// item when sexist wins the argmax; threshold mode keeps it when
// p(sexist) >= threshold.
struct SelectionPolicy {
  enum class Mode { kArgmax, kThreshold };
  Mode mode = Mode::kArgmax;
  double threshold = 0.5;

  void validate() const;
};

struct StageCounts {
  std::size_t authentic = 0;
  std::size_t synthetic = 0;
  std::size_t selected = 0;
  std::size_t mixed = 0;
};

// Binary sexist / not-sexist training. Every train example needs a
// binary label. Dev macro F1 (when dev is non-empty) is stored on the
// backend for later best-model selection.
void train_task_a(ClassifierBackend& backend, const DatasetSplit& split,
                  const Taxonomy& taxonomy, const TrainConfig& config);

// Runs the binary model over the unlabeled pool and returns copies of
// the items the policy selects, labeled sexist with synthetic
// provenance. The pool itself is never touched.
std::vector<Example> pseudo_label_pool(const ClassifierBackend& binary_model,
                                       const std::vector<Example>& pool,
                                       const SelectionPolicy& policy);

// Gives every selected synthetic item the category model's argmax
// category. Inputs must be synthetic and sexist-labeled.
std::vector<Example> synthesize_category_labels(
    const ClassifierBackend& category_model, const Taxonomy& taxonomy,
    std::vector<Example> selected);

// Concatenates and id-sorts, so downstream seeded shuffles do not depend
// on input file order. Duplicate ids across the two lists are an error.
std::vector<Example> mix_examples(const std::vector<Example>& authentic,
                                  const std::vector<Example>& synthetic);

// 4-way category training over authentic + synthetic examples (synthetic
// may be empty: that is the plain baseline). All inputs need category
// labels and correctly set provenance flags.
StageCounts train_task_b(ClassifierBackend& backend,
                         const std::vector<Example>& authentic,
                         const std::vector<Example>& synthetic,
                         const Taxonomy& taxonomy, const TrainConfig& config,
                         const std::vector<Example>* dev = nullptr);

// 11-way vector training. In conditioned mode each example is encoded
// with its gold parent category paired in front of the sentence.
void train_task_c(ClassifierBackend& backend,
                  const std::vector<Example>& examples,
                  const Taxonomy& taxonomy, const TrainConfig& config,
                  bool conditioned, const std::vector<Example>* dev = nullptr);

// Fine-grained prediction with parent resolution: gold parent if given,
// otherwise the category model's argmax, otherwise an error. With
// mask_to_children, probability mass on vectors outside the resolved
// parent's children is zeroed and the rest renormalized.
Prediction predict_task_c(const ClassifierBackend& vector_model,
                          const Taxonomy& taxonomy, const std::string& text,
                          const std::optional<std::string>& gold_parent,
                          const ClassifierBackend* category_model,
                          bool mask_to_children);

// Dev-set macro F1 helpers used by the training stages and the CLI.
double eval_binary(const ClassifierBackend& backend,
                   const std::vector<Example>& examples);
double eval_category(const ClassifierBackend& backend,
                     const Taxonomy& taxonomy,
                     const std::vector<Example>& examples);
double eval_vector(const ClassifierBackend& backend, const Taxonomy& taxonomy,
                   const std::vector<Example>& examples, bool mask_to_children);

}  // namespace hiercls
