#include "hiercls/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "hiercls/errors.hpp"

namespace hiercls {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& predicted,
                          const std::vector<std::string>& classes) {
  if (gold.size() != predicted.size())
    throw DataError("confusion: gold has " + std::to_string(gold.size()) +
                    " labels but predictions have " +
                    std::to_string(predicted.size()));
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;
  ConfusionMatrix m;
  m.classes = classes;
  m.counts.assign(classes.size() * classes.size(), 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = index.find(gold[i]);
    if (g == index.end())
      throw DataError("confusion: unknown gold label: " + gold[i]);
    auto p = index.find(predicted[i]);
    if (p == index.end())
      throw DataError("confusion: unknown predicted label: " + predicted[i]);
    ++m.counts[g->second * classes.size() + p->second];
  }
  return m;
}

std::vector<ClassScore> per_class_scores(const ConfusionMatrix& matrix) {
  const std::size_t k = matrix.classes.size();
  std::vector<ClassScore> scores(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t tp = matrix.at(c, c);
    std::uint64_t gold_total = 0, pred_total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      gold_total += matrix.at(c, j);
      pred_total += matrix.at(j, c);
    }
    ClassScore& s = scores[c];
    s.name = matrix.classes[c];
    s.support = gold_total;
    // 0/0 counts as 0, not as a skipped class.
    s.precision = pred_total ? double(tp) / double(pred_total) : 0.0;
    s.recall = gold_total ? double(tp) / double(gold_total) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  return scores;
}

double macro_f1(const ConfusionMatrix& matrix) {
  if (matrix.classes.empty()) throw DataError("macro_f1: no classes");
  if (matrix.total() == 0)
    throw DataError("macro_f1: all-zero confusion matrix");
  auto scores = per_class_scores(matrix);
  double sum = 0.0;
  for (const auto& s : scores) sum += s.f1;
  return sum / double(scores.size());
}

EvalReport evaluate(const std::vector<std::string>& gold,
                    const std::vector<std::string>& predicted,
                    const std::vector<std::string>& classes,
                    const std::string& task, const std::string& method) {
  EvalReport report;
  report.task = task;
  report.method = method;
  report.confusion = confusion(gold, predicted, classes);
  report.per_class = per_class_scores(report.confusion);
  report.macro_f1 = macro_f1(report.confusion);
  return report;
}

namespace {

std::string f1_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string render_report_table(const std::vector<EvalReport>& runs) {
  if (runs.empty()) throw DataError("report: no runs");
  std::size_t task_w = 4, method_w = 6;  // header widths
  for (const auto& r : runs) {
    task_w = std::max(task_w, r.task.size());
    method_w = std::max(method_w, r.method.size());
  }
  std::ostringstream out;
  auto row = [&](const std::string& task, const std::string& method,
                 const std::string& f1) {
    out << task << std::string(task_w - task.size() + 2, ' ') << method
        << std::string(method_w - method.size() + 2, ' ') << f1 << '\n';
  };
  row("Task", "Method", "F1");
  row(std::string(4, '-'), std::string(6, '-'), "--");
  for (const auto& r : runs) row(r.task, r.method, f1_str(r.macro_f1));
  return out.str();
}

std::string render_report_jsonl(const std::vector<EvalReport>& runs) {
  std::ostringstream out;
  for (const auto& r : runs) {
    nlohmann::json j;
    j["task"] = r.task;
    j["method"] = r.method;
    j["macro_f1"] = r.macro_f1;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["task"] = report.task;
  j["method"] = report.method;
  j["macro_f1"] = report.macro_f1;
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& s : report.per_class) {
    per_class.push_back({{"class", s.name},
                         {"precision", s.precision},
                         {"recall", s.recall},
                         {"f1", s.f1},
                         {"support", s.support}});
  }
  j["per_class"] = per_class;
  j["classes"] = report.confusion.classes;
  j["confusion"] = report.confusion.counts;
  return j.dump(2);
}

EvalReport report_from_json(const std::string& text,
                            const std::string& origin) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw DataError(origin + ": not a valid report file");
  EvalReport report;
  try {
    report.task = j.at("task").get<std::string>();
    report.method = j.at("method").get<std::string>();
    report.macro_f1 = j.at("macro_f1").get<double>();
    report.confusion.classes =
        j.at("classes").get<std::vector<std::string>>();
    report.confusion.counts =
        j.at("confusion").get<std::vector<std::uint64_t>>();
    for (const auto& e : j.at("per_class")) {
      ClassScore s;
      s.name = e.at("class").get<std::string>();
      s.precision = e.at("precision").get<double>();
      s.recall = e.at("recall").get<double>();
      s.f1 = e.at("f1").get<double>();
      s.support = e.at("support").get<std::uint64_t>();
      report.per_class.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(origin + ": " + e.what());
  }
  return report;
}

}  // namespace hiercls
