#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hiercls/taxonomy.hpp"

namespace hiercls {

enum class Provenance { kAuthentic, kSynthetic };

const std::string& to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// One text item with optional labels at each taxonomy level.
// Hierarchical consistency: vector => category == parent(vector);
// category => binary == sexist; binary == not sexist => no deeper labels.
struct Example {
  std::string id;
  std::string text;
  std::optional<std::string> label_binary;
  std::optional<std::string> label_category;
  std::optional<std::string> label_vector;
  Provenance provenance = Provenance::kAuthentic;

  bool operator==(const Example&) const = default;
};

// Throws DataError naming the violated invariant. `where` prefixes the
// message (e.g. "train.csv: line 7").
void validate_example(const Example& ex, const Taxonomy& taxonomy,
                      const std::string& where);

// Labeled file: columns id,text,label_binary,label_category,label_vector
// ("none" = absent label) for .csv, or the keyed line-per-record
// interchange format for .jsonl. Provenance of CSV rows is authentic.
std::vector<Example> load_labeled(const std::string& path,
                                  const Taxonomy& taxonomy);

// Unlabeled pool: columns id,text (.csv) or interchange records with no
// labels (.jsonl). Empty text and duplicate ids are errors.
std::vector<Example> load_unlabeled(const std::string& path);

// Interchange format: one JSON object per line, absent labels omitted.
void save_jsonl(const std::vector<Example>& examples, const std::string& path);
std::vector<Example> load_jsonl(const std::string& path,
                                const Taxonomy& taxonomy);

// Official five-column CSV (text field always quoted, "none" sentinel).
void save_csv(const std::vector<Example>& examples, const std::string& path);

struct DatasetSplit {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<Example> test;
  std::uint64_t seed = 0;
};

// Carves a stratified-by-binary-label dev set of `dev_fraction` out of
// official_train (per-class size = nearest integer), merges official_dev
// into the remaining train. Partition membership depends only on the
// input id sets and the seed; partitions come back id-sorted.
DatasetSplit resplit(const std::vector<Example>& official_train,
                     const std::vector<Example>& official_dev,
                     std::uint64_t seed, double dev_fraction = 0.10);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t token_min = 0;
  std::size_t token_max = 0;
  double token_mean = 0.0;
  std::size_t token_total = 0;
  // Label -> count at each level; "(none)" rows counted separately so
  // that each level's counts sum to `sentences`.
  std::map<std::string, std::size_t> binary_counts;
  std::size_t binary_unlabeled = 0;
  std::map<std::string, std::size_t> category_counts;
  std::size_t category_unlabeled = 0;
  std::map<std::string, std::size_t> vector_counts;
  std::size_t vector_unlabeled = 0;
};

// Token counts split on the single space character, empty tokens
// dropped, no truncation. Empty input list is an error.
CorpusStats stats(const std::vector<Example>& examples);

std::string format_stats(const CorpusStats& s);

}  // namespace hiercls
