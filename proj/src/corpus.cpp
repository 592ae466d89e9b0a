#include "hiercls/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "hiercls/csv.hpp"
#include "hiercls/errors.hpp"

namespace hiercls {

namespace {

constexpr const char* kNone = "none";

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<std::string> label_or_none(const std::string& raw) {
  if (raw == kNone || raw.empty()) return std::nullopt;
  return raw;
}

void check_duplicate_ids(const std::vector<Example>& examples,
                         const std::string& origin) {
  std::unordered_set<std::string> seen;
  for (const auto& ex : examples) {
    if (!seen.insert(ex.id).second)
      throw DataError(origin + ": duplicate id: " + ex.id);
  }
}

std::vector<std::string> split_on_space(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) tokens.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

}  // namespace

const std::string& to_string(Provenance p) {
  static const std::string a = "authentic";
  static const std::string s = "synthetic";
  return p == Provenance::kAuthentic ? a : s;
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "authentic") return Provenance::kAuthentic;
  if (s == "synthetic") return Provenance::kSynthetic;
  throw DataError("unknown provenance: " + s);
}

void validate_example(const Example& ex, const Taxonomy& taxonomy,
                      const std::string& where) {
  auto fail = [&](const std::string& msg) {
    throw DataError(where + ": " + msg + " (id=" + ex.id + ")");
  };
  if (ex.id.empty()) fail("empty id");
  if (ex.label_binary) {
    const auto& bins = Taxonomy::binary_labels();
    if (std::find(bins.begin(), bins.end(), *ex.label_binary) == bins.end())
      fail("unknown binary label '" + *ex.label_binary +
           "' (expected 'sexist' or 'not sexist')");
  }
  if (ex.label_category && !taxonomy.has_category(*ex.label_category))
    fail("unknown category '" + *ex.label_category + "' for this taxonomy");
  if (ex.label_vector && !taxonomy.has_vector(*ex.label_vector))
    fail("unknown vector '" + *ex.label_vector + "' for this taxonomy");
  if (ex.label_vector) {
    if (!ex.label_category)
      fail("vector label present without category label");
    const auto& parent = taxonomy.parent_of(*ex.label_vector);
    if (parent != *ex.label_category)
      fail("vector '" + *ex.label_vector + "' has parent '" + parent +
           "' but category label is '" + *ex.label_category + "'");
  }
  if (ex.label_category) {
    if (!ex.label_binary)
      fail("category label present without binary label");
    if (*ex.label_binary != Taxonomy::sexist_label())
      fail("category label present with binary label '" + *ex.label_binary +
           "'");
  }
}

namespace {

std::vector<Example> load_labeled_csv(const std::string& path,
                                      const Taxonomy& taxonomy) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw DataError(path + ": empty file (header expected)");
  const std::vector<std::string> expected = {"id", "text", "label_binary",
                                             "label_category", "label_vector"};
  if (rows[0].fields != expected) {
    throw DataError(path +
                    ": bad header; expected "
                    "id,text,label_binary,label_category,label_vector");
  }
  std::vector<Example> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::string where = path + ": line " + std::to_string(row.line);
    if (row.fields.size() != 5)
      throw DataError(where + ": expected 5 fields, got " +
                      std::to_string(row.fields.size()));
    Example ex;
    ex.id = row.fields[0];
    ex.text = row.fields[1];
    ex.label_binary = label_or_none(row.fields[2]);
    ex.label_category = label_or_none(row.fields[3]);
    ex.label_vector = label_or_none(row.fields[4]);
    ex.provenance = Provenance::kAuthentic;
    validate_example(ex, taxonomy, where);
    out.push_back(std::move(ex));
  }
  check_duplicate_ids(out, path);
  return out;
}

nlohmann::json example_to_json(const Example& ex) {
  nlohmann::json j;
  j["id"] = ex.id;
  j["text"] = ex.text;
  if (ex.label_binary) j["label_binary"] = *ex.label_binary;
  if (ex.label_category) j["label_category"] = *ex.label_category;
  if (ex.label_vector) j["label_vector"] = *ex.label_vector;
  j["provenance"] = to_string(ex.provenance);
  return j;
}

Example example_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": record is not an object");
  Example ex;
  try {
    ex.id = j.at("id").get<std::string>();
    ex.text = j.at("text").get<std::string>();
    if (j.contains("label_binary"))
      ex.label_binary = j["label_binary"].get<std::string>();
    if (j.contains("label_category"))
      ex.label_category = j["label_category"].get<std::string>();
    if (j.contains("label_vector"))
      ex.label_vector = j["label_vector"].get<std::string>();
    ex.provenance = provenance_from_string(
        j.value("provenance", std::string("authentic")));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
  return ex;
}

}  // namespace

std::vector<Example> load_jsonl(const std::string& path,
                                const Taxonomy& taxonomy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<Example> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string where = path + ": line " + std::to_string(lineno);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError(where + ": invalid record");
    Example ex = example_from_json(j, where);
    validate_example(ex, taxonomy, where);
    out.push_back(std::move(ex));
  }
  check_duplicate_ids(out, path);
  return out;
}

void save_jsonl(const std::vector<Example>& examples,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& ex : examples) out << example_to_json(ex).dump() << '\n';
}

void save_csv(const std::vector<Example>& examples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << "id,text,label_binary,label_category,label_vector\n";
  // Text column is always quoted; labels quoted only when needed.
  const std::vector<bool> force = {false, true, false, false, false};
  for (const auto& ex : examples) {
    csv::write_row(out,
                   {ex.id, ex.text, ex.label_binary.value_or(kNone),
                    ex.label_category.value_or(kNone),
                    ex.label_vector.value_or(kNone)},
                   force);
  }
}

std::vector<Example> load_labeled(const std::string& path,
                                  const Taxonomy& taxonomy) {
  if (has_suffix(path, ".jsonl")) return load_jsonl(path, taxonomy);
  return load_labeled_csv(path, taxonomy);
}

std::vector<Example> load_unlabeled(const std::string& path) {
  std::vector<Example> out;
  if (has_suffix(path, ".jsonl")) {
    out = load_jsonl(path, Taxonomy::edos_default());
  } else {
    auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path + ": empty file (header expected)");
    if (rows[0].fields != std::vector<std::string>{"id", "text"})
      throw DataError(path + ": bad header; expected id,text");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      std::string where = path + ": line " + std::to_string(row.line);
      if (row.fields.size() != 2)
        throw DataError(where + ": expected 2 fields, got " +
                        std::to_string(row.fields.size()));
      Example ex;
      ex.id = row.fields[0];
      ex.text = row.fields[1];
      out.push_back(std::move(ex));
    }
    check_duplicate_ids(out, path);
  }
  for (const auto& ex : out) {
    if (ex.label_binary || ex.label_category || ex.label_vector)
      throw DataError(path + ": pool example " + ex.id + " carries labels");
    if (ex.text.empty())
      throw DataError(path + ": pool example " + ex.id + " has empty text");
  }
  return out;
}

DatasetSplit resplit(const std::vector<Example>& official_train,
                     const std::vector<Example>& official_dev,
                     std::uint64_t seed, double dev_fraction) {
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0))
    throw ConfigError("dev_fraction must be in (0,1)");

  std::set<std::string> train_ids;
  for (const auto& ex : official_train) {
    if (!ex.label_binary)
      throw DataError("resplit: example " + ex.id +
                      " lacks the binary label required for stratification");
    if (!train_ids.insert(ex.id).second)
      throw DataError("resplit: duplicate id in train: " + ex.id);
  }
  for (const auto& ex : official_dev) {
    if (train_ids.count(ex.id))
      throw DataError("resplit: id appears in both train and dev: " + ex.id);
  }

  // Membership must not depend on input row order: work over id-sorted
  // per-class lists and a seed-derived permutation.
  std::vector<std::string> dev_ids;
  std::mt19937_64 rng(seed);
  for (const auto& cls : Taxonomy::binary_labels()) {
    std::vector<const Example*> members;
    for (const auto& ex : official_train)
      if (*ex.label_binary == cls) members.push_back(&ex);
    if (members.empty())
      throw DataError("resplit: binary class '" + cls +
                      "' has no members; cannot stratify");
    std::sort(members.begin(), members.end(),
              [](const Example* a, const Example* b) { return a->id < b->id; });
    // Nearest integer, ties away from zero.
    auto take = static_cast<std::size_t>(
        std::llround(dev_fraction * static_cast<double>(members.size())));
    for (std::size_t i = members.size(); i > 1; --i) {
      std::size_t j = rng() % i;
      std::swap(members[i - 1], members[j]);
    }
    for (std::size_t i = 0; i < take && i < members.size(); ++i)
      dev_ids.push_back(members[i]->id);
  }

  std::set<std::string> dev_id_set(dev_ids.begin(), dev_ids.end());
  DatasetSplit split;
  split.seed = seed;
  for (const auto& ex : official_train) {
    if (dev_id_set.count(ex.id)) split.dev.push_back(ex);
    else split.train.push_back(ex);
  }
  split.train.insert(split.train.end(), official_dev.begin(),
                     official_dev.end());
  auto by_id = [](const Example& a, const Example& b) { return a.id < b.id; };
  std::sort(split.train.begin(), split.train.end(), by_id);
  std::sort(split.dev.begin(), split.dev.end(), by_id);
  return split;
}

CorpusStats stats(const std::vector<Example>& examples) {
  if (examples.empty()) throw DataError("stats: empty example list");
  CorpusStats s;
  s.sentences = examples.size();
  s.token_min = std::numeric_limits<std::size_t>::max();
  for (const auto& ex : examples) {
    std::size_t n = split_on_space(ex.text).size();
    s.token_min = std::min(s.token_min, n);
    s.token_max = std::max(s.token_max, n);
    s.token_total += n;
    if (ex.label_binary) ++s.binary_counts[*ex.label_binary];
    else ++s.binary_unlabeled;
    if (ex.label_category) ++s.category_counts[*ex.label_category];
    else ++s.category_unlabeled;
    if (ex.label_vector) ++s.vector_counts[*ex.label_vector];
    else ++s.vector_unlabeled;
  }
  s.token_mean =
      static_cast<double>(s.token_total) / static_cast<double>(s.sentences);
  return s;
}

std::string format_stats(const CorpusStats& s) {
  std::ostringstream out;
  out << "sentences: " << s.sentences << '\n';
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", s.token_mean);
  out << "tokens: min " << s.token_min << ", max " << s.token_max << ", mean "
      << buf << ", total " << s.token_total << '\n';
  auto dump_level = [&out](const char* level,
                           const std::map<std::string, std::size_t>& counts,
                           std::size_t unlabeled) {
    out << level << ":\n";
    for (const auto& [name, n] : counts)
      out << "  " << name << ": " << n << '\n';
    if (unlabeled) out << "  (unlabeled): " << unlabeled << '\n';
  };
  dump_level("binary", s.binary_counts, s.binary_unlabeled);
  dump_level("category", s.category_counts, s.category_unlabeled);
  dump_level("vector", s.vector_counts, s.vector_unlabeled);
  return out.str();
}

}  // namespace hiercls
