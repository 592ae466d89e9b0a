#include "hiercls/pipeline.hpp"

#include <algorithm>
#include <set>

#include "hiercls/errors.hpp"

namespace hiercls {

void SelectionPolicy::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ConfigError("selection threshold must be in (0,1)");
}

namespace {

std::size_t class_index_of(const ClassifierBackend& backend,
                           const std::string& name) {
  const auto& classes = backend.classes();
  auto it = std::find(classes.begin(), classes.end(), name);
  if (it == classes.end())
    throw InternalError("backend has no class '" + name + "'");
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

void train_task_a(ClassifierBackend& backend, const DatasetSplit& split,
                  const Taxonomy& taxonomy, const TrainConfig& config) {
  (void)taxonomy;
  if (split.train.empty()) throw DataError("task A: empty train set");
  std::vector<LabeledText> items;
  items.reserve(split.train.size());
  for (const auto& ex : split.train) {
    if (!ex.label_binary)
      throw DataError("task A: example " + ex.id + " has no binary label");
    items.push_back({ex.text, std::nullopt, *ex.label_binary});
  }
  backend.set_task_level(TaskLevel::kBinary);
  backend.fit(items, Taxonomy::binary_labels(), config);
  if (!split.dev.empty())
    backend.set_dev_macro_f1(eval_binary(backend, split.dev));
}

std::vector<Example> pseudo_label_pool(const ClassifierBackend& binary_model,
                                       const std::vector<Example>& pool,
                                       const SelectionPolicy& policy) {
  policy.validate();
  const std::size_t sexist_idx =
      class_index_of(binary_model, Taxonomy::sexist_label());
  std::vector<Example> selected;
  for (const auto& ex : pool) {
    if (ex.label_binary || ex.label_category || ex.label_vector)
      throw DataError("pseudo-label: pool example " + ex.id +
                      " already carries labels");
    Prediction p = binary_model.predict_text(ex.text, std::nullopt);
    const bool take =
        policy.mode == SelectionPolicy::Mode::kArgmax
            ? p.argmax_index == sexist_idx
            : p.probabilities[sexist_idx] >= policy.threshold;
    if (!take) continue;
    Example out = ex;
    out.label_binary = Taxonomy::sexist_label();
    out.provenance = Provenance::kSynthetic;
    selected.push_back(std::move(out));
  }
  return selected;
}

std::vector<Example> synthesize_category_labels(
    const ClassifierBackend& category_model, const Taxonomy& taxonomy,
    std::vector<Example> selected) {
  for (auto& ex : selected) {
    if (ex.provenance != Provenance::kSynthetic)
      throw DataError("synthesize: example " + ex.id + " is not synthetic");
    if (!ex.label_binary || *ex.label_binary != Taxonomy::sexist_label())
      throw DataError("synthesize: example " + ex.id +
                      " is not labeled sexist");
    Prediction p = category_model.predict_text(ex.text, std::nullopt);
    ex.label_category = p.argmax_class;
    validate_example(ex, taxonomy, "synthesize");
  }
  return selected;
}

std::vector<Example> mix_examples(const std::vector<Example>& authentic,
                                  const std::vector<Example>& synthetic) {
  std::vector<Example> mixed;
  mixed.reserve(authentic.size() + synthetic.size());
  mixed.insert(mixed.end(), authentic.begin(), authentic.end());
  mixed.insert(mixed.end(), synthetic.begin(), synthetic.end());
  std::sort(mixed.begin(), mixed.end(),
            [](const Example& a, const Example& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < mixed.size(); ++i)
    if (mixed[i].id == mixed[i - 1].id)
      throw DataError("mix: duplicate id across inputs: " + mixed[i].id);
  return mixed;
}

StageCounts train_task_b(ClassifierBackend& backend,
                         const std::vector<Example>& authentic,
                         const std::vector<Example>& synthetic,
                         const Taxonomy& taxonomy, const TrainConfig& config,
                         const std::vector<Example>* dev) {
  for (const auto& ex : authentic) {
    if (ex.provenance != Provenance::kAuthentic)
      throw DataError("task B: example " + ex.id +
                      " in the authentic list is synthetic");
    if (!ex.label_category)
      throw DataError("task B: example " + ex.id + " has no category label");
  }
  for (const auto& ex : synthetic) {
    if (ex.provenance != Provenance::kSynthetic)
      throw DataError("task B: example " + ex.id +
                      " in the synthetic list is authentic");
    if (!ex.label_category)
      throw DataError("task B: example " + ex.id + " has no category label");
  }
  std::vector<Example> mixed = mix_examples(authentic, synthetic);
  if (mixed.empty()) throw DataError("task B: empty train set");

  std::vector<LabeledText> items;
  items.reserve(mixed.size());
  for (const auto& ex : mixed)
    items.push_back({ex.text, std::nullopt, *ex.label_category});
  backend.set_task_level(TaskLevel::kCategory);
  backend.fit(items, taxonomy.categories(), config);
  if (dev && !dev->empty())
    backend.set_dev_macro_f1(eval_category(backend, taxonomy, *dev));

  StageCounts counts;
  counts.authentic = authentic.size();
  counts.synthetic = synthetic.size();
  counts.selected = synthetic.size();
  counts.mixed = mixed.size();
  return counts;
}

void train_task_c(ClassifierBackend& backend,
                  const std::vector<Example>& examples,
                  const Taxonomy& taxonomy, const TrainConfig& config,
                  bool conditioned, const std::vector<Example>* dev) {
  if (examples.empty()) throw DataError("task C: empty train set");
  std::vector<LabeledText> items;
  items.reserve(examples.size());
  for (const auto& ex : examples) {
    if (!ex.label_vector)
      throw DataError("task C: example " + ex.id + " has no vector label");
    std::optional<std::string> parent;
    if (conditioned) parent = taxonomy.parent_of(*ex.label_vector);
    items.push_back({ex.text, parent, *ex.label_vector});
  }
  backend.set_task_level(TaskLevel::kVector);
  backend.fit(items, taxonomy.vector_names(), config);
  if (dev && !dev->empty())
    backend.set_dev_macro_f1(
        eval_vector(backend, taxonomy, *dev, /*mask_to_children=*/false));
}

Prediction predict_task_c(const ClassifierBackend& vector_model,
                          const Taxonomy& taxonomy, const std::string& text,
                          const std::optional<std::string>& gold_parent,
                          const ClassifierBackend* category_model,
                          bool mask_to_children) {
  std::string parent;
  if (gold_parent) {
    parent = *gold_parent;
    if (!taxonomy.has_category(parent))
      throw DataError("predict: unknown parent category: " + parent);
  } else if (category_model) {
    parent = category_model->predict_text(text, std::nullopt).argmax_class;
  } else {
    throw ConfigError(
        "predict: need a gold parent or a category model to resolve the "
        "parent class");
  }

  std::optional<std::string> encode_parent;
  if (vector_model.conditioned()) encode_parent = parent;
  Prediction p = vector_model.predict_text(text, encode_parent);
  if (!mask_to_children) return p;

  const auto& classes = vector_model.classes();
  double kept = 0.0;
  std::vector<bool> is_child(classes.size(), false);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (taxonomy.parent_of(classes[k]) == parent) {
      is_child[k] = true;
      kept += p.probabilities[k];
    }
  }
  if (std::none_of(is_child.begin(), is_child.end(),
                   [](bool b) { return b; }))
    throw DataError("predict: category '" + parent +
                    "' has no child vectors in the taxonomy");
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (!is_child[k]) {
      p.probabilities[k] = 0.0;
    } else if (kept > 0.0) {
      p.probabilities[k] /= kept;
    } else {
      // Softmax mass never vanishes entirely, but stay total anyway.
      p.probabilities[k] =
          1.0 / double(std::count(is_child.begin(), is_child.end(), true));
    }
  }
  p.argmax_index = 0;
  for (std::size_t k = 1; k < classes.size(); ++k)
    if (p.probabilities[k] > p.probabilities[p.argmax_index])
      p.argmax_index = k;
  p.argmax_class = classes[p.argmax_index];
  p.score = p.probabilities[p.argmax_index];
  return p;
}

double eval_binary(const ClassifierBackend& backend,
                   const std::vector<Example>& examples) {
  std::vector<std::string> gold, pred;
  for (const auto& ex : examples) {
    if (!ex.label_binary)
      throw DataError("eval: example " + ex.id + " has no binary label");
    gold.push_back(*ex.label_binary);
    pred.push_back(backend.predict_text(ex.text, std::nullopt).argmax_class);
  }
  return macro_f1(confusion(gold, pred, Taxonomy::binary_labels()));
}

double eval_category(const ClassifierBackend& backend,
                     const Taxonomy& taxonomy,
                     const std::vector<Example>& examples) {
  std::vector<std::string> gold, pred;
  for (const auto& ex : examples) {
    if (!ex.label_category) continue;
    gold.push_back(*ex.label_category);
    pred.push_back(backend.predict_text(ex.text, std::nullopt).argmax_class);
  }
  if (gold.empty()) throw DataError("eval: no category-labeled examples");
  return macro_f1(confusion(gold, pred, taxonomy.categories()));
}

double eval_vector(const ClassifierBackend& backend, const Taxonomy& taxonomy,
                   const std::vector<Example>& examples,
                   bool mask_to_children) {
  std::vector<std::string> gold, pred;
  for (const auto& ex : examples) {
    if (!ex.label_vector) continue;
    gold.push_back(*ex.label_vector);
    pred.push_back(predict_task_c(backend, taxonomy, ex.text,
                                  ex.label_category, nullptr,
                                  mask_to_children)
                       .argmax_class);
  }
  if (gold.empty()) throw DataError("eval: no vector-labeled examples");
  return macro_f1(confusion(gold, pred, taxonomy.vector_names()));
}

}  // namespace hiercls
