#pragma once

// Keyword-rule backends used to drive the pipeline without real
// training. They also demonstrate that the pipeline only relies on the
// ClassifierBackend surface.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hiercls/backend.hpp"
#include "hiercls/errors.hpp"

namespace faketest {

class FakeBackend : public hiercls::ClassifierBackend {
 public:
  // score(text, parent) must return a probability vector over classes().
  using Scorer = std::function<std::vector<double>(
      const std::string&, const std::optional<std::string>&)>;

  FakeBackend(std::vector<std::string> classes, hiercls::TaskLevel level,
              bool conditioned, Scorer scorer)
      : classes_(std::move(classes)),
        level_(level),
        conditioned_(conditioned),
        scorer_(std::move(scorer)) {}

  void fit(const std::vector<hiercls::LabeledText>& items,
           const std::vector<std::string>& classes,
           const hiercls::TrainConfig&) override {
    fit_calls++;
    last_fit_size = items.size();
    classes_ = classes;
  }

  hiercls::Prediction predict_text(
      const std::string& text,
      const std::optional<std::string>& parent) const override {
    hiercls::Prediction p;
    p.probabilities = scorer_(text, parent);
    if (p.probabilities.size() != classes_.size())
      throw hiercls::InternalError("fake scorer size mismatch");
    p.argmax_index = 0;
    for (std::size_t k = 1; k < p.probabilities.size(); ++k)
      if (p.probabilities[k] > p.probabilities[p.argmax_index])
        p.argmax_index = k;
    p.argmax_class = classes_[p.argmax_index];
    p.score = p.probabilities[p.argmax_index];
    return p;
  }

  const std::vector<std::string>& classes() const override { return classes_; }
  void save(const std::string&) const override {}
  void load(const std::string&) override {}
  hiercls::TaskLevel task_level() const override { return level_; }
  void set_task_level(hiercls::TaskLevel level) override { level_ = level; }
  bool conditioned() const override { return conditioned_; }
  double dev_macro_f1() const override { return f1_; }
  void set_dev_macro_f1(double f1) override { f1_ = f1; }

  int fit_calls = 0;
  std::size_t last_fit_size = 0;

 private:
  std::vector<std::string> classes_;
  hiercls::TaskLevel level_;
  bool conditioned_;
  Scorer scorer_;
  double f1_ = -1.0;
};

inline bool contains_word(const std::string& text, const std::string& word) {
  auto pos = text.find(word);
  while (pos != std::string::npos) {
    const bool left_ok = pos == 0 || text[pos - 1] == ' ';
    const auto end = pos + word.size();
    const bool right_ok = end == text.size() || text[end] == ' ';
    if (left_ok && right_ok) return true;
    pos = text.find(word, pos + 1);
  }
  return false;
}

// p(sexist) = 0.9 when the text contains "foxtrot" or "tango", 0.1
// otherwise. Class order matches Taxonomy::binary_labels().
inline FakeBackend keyword_binary_backend() {
  return FakeBackend(
      hiercls::Taxonomy::binary_labels(), hiercls::TaskLevel::kBinary, false,
      [](const std::string& text, const std::optional<std::string>&) {
        const double p_sexist =
            contains_word(text, "foxtrot") || contains_word(text, "tango")
                ? 0.9
                : 0.1;
        return std::vector<double>{1.0 - p_sexist, p_sexist};
      });
}

// Argmax category by keyword: quebec/romeo/sierra/victor; falls back to
// the second category when no keyword is present.
inline FakeBackend keyword_category_backend(const hiercls::Taxonomy& tax) {
  const std::vector<std::string> keywords = {"quebec", "romeo", "sierra",
                                             "victor"};
  return FakeBackend(
      tax.categories(), hiercls::TaskLevel::kCategory, false,
      [keywords](const std::string& text,
                 const std::optional<std::string>&) {
        std::vector<double> probs(4, 0.05);
        std::size_t hit = 1;
        for (std::size_t i = 0; i < keywords.size(); ++i)
          if (contains_word(text, keywords[i])) hit = i;
        probs[hit] = 0.85;
        return probs;
      });
}

// Conditioned vector backend: all mass on the resolved parent's first
// child, so predictions are a pure function of the parent.
inline FakeBackend first_child_vector_backend(const hiercls::Taxonomy& tax) {
  auto names = tax.vector_names();
  return FakeBackend(
      names, hiercls::TaskLevel::kVector, true,
      [names, tax](const std::string&,
                   const std::optional<std::string>& parent) {
        if (!parent)
          throw hiercls::ConfigError("fake vector backend needs a parent");
        std::vector<double> probs(names.size(), 0.01);
        const auto first_child = tax.children_of(*parent).front();
        for (std::size_t k = 0; k < names.size(); ++k)
          if (names[k] == first_child) probs[k] = 0.9;
        return probs;
      });
}

}  // namespace faketest
