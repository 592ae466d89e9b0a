#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hiercls {

// Gold x predicted counts over an ordered class list.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::uint64_t> counts;  // classes x classes, row = gold

  std::uint64_t at(std::size_t gold, std::size_t pred) const {
    return counts[gold * classes.size() + pred];
  }
  std::uint64_t total() const;
};

struct ClassScore {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;  // gold count
};

struct EvalReport {
  std::string task;    // "A" / "B" / "C"
  std::string method;  // free-form label for report rows
  std::vector<ClassScore> per_class;
  double macro_f1 = 0.0;  // unweighted mean of per-class F1
  ConfusionMatrix confusion;
};

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& predicted,
                          const std::vector<std::string>& classes);

// Per-class F1 with the 0/0 -> 0 convention, averaged unweighted.
// All-zero matrices are an error.
double macro_f1(const ConfusionMatrix& matrix);

std::vector<ClassScore> per_class_scores(const ConfusionMatrix& matrix);

EvalReport evaluate(const std::vector<std::string>& gold,
                    const std::vector<std::string>& predicted,
                    const std::vector<std::string>& classes,
                    const std::string& task, const std::string& method);

// Plain-text Task | Method | F1 table, F1 to 4 decimals. Deterministic.
std::string render_report_table(const std::vector<EvalReport>& runs);

// One JSON object per run, keyed and line-oriented.
std::string render_report_jsonl(const std::vector<EvalReport>& runs);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text,
                            const std::string& origin);

}  // namespace hiercls
