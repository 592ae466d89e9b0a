#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hiercls/taxonomy.hpp"

namespace hiercls {

// Text encoding settings. Saved inside model files so a model and its
// encoder travel together.
struct HashingConfig {
  std::vector<int> ngram_orders = {1, 2};   // ascending, each >= 1
  std::uint32_t buckets = 1u << 20;         // power of two, >= 2
  std::uint64_t hash_seed = 42;
  bool lowercase = true;
  std::size_t max_tokens = 128;
  bool sublinear_tf = false;  // weight = 1 + ln(tf) instead of tf
  bool use_idf = false;       // multiply by an idf table learned at training

  void validate() const;
  bool operator==(const HashingConfig&) const = default;
};

// Sparse hashed representation: (bucket, weight) entries sorted by
// bucket, weights > 0, L2 norm cached.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  double norm = 0.0;

  double recompute_norm() const;
  bool operator==(const FeatureVector&) const = default;
};

// Split on the single space character (empty tokens dropped), optional
// lowercasing, truncation to max_tokens. Total function.
std::vector<std::string> tokenize(const std::string& text,
                                  const HashingConfig& config);

// Hash every n-gram of each configured order into a bucket; weights are
// occurrence counts (possibly rescaled per config flags).
FeatureVector featurize(const std::vector<std::string>& tokens,
                        const HashingConfig& config);

// The reserved token form that carries the parent class. Spaces in the
// category name are folded to '_' so the marker stays one token.
std::string parent_marker(const std::string& category);

// featurize() over the token list prefixed with parent_marker(parent),
// so the parent shows up in both unigram and n-gram features. The parent
// must name a category of `taxonomy`.
FeatureVector featurize_conditioned(const std::vector<std::string>& tokens,
                                    const std::string& parent,
                                    const Taxonomy& taxonomy,
                                    const HashingConfig& config);

// Per-bucket inverse document frequencies, built over a training corpus
// when HashingConfig::use_idf is set: idf = ln((1+N)/(1+df)) + 1.
struct IdfTable {
  std::vector<double> values;  // size == buckets, 0 when empty

  bool empty() const { return values.empty(); }
};

IdfTable build_idf(const std::vector<FeatureVector>& corpus,
                   std::uint32_t buckets);
void apply_idf(FeatureVector& vec, const IdfTable& idf);

}  // namespace hiercls
