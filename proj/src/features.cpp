#include "hiercls/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "hiercls/errors.hpp"
#include "hiercls/hash.hpp"

namespace hiercls {

void HashingConfig::validate() const {
  if (buckets < 2 || (buckets & (buckets - 1)) != 0)
    throw ConfigError("buckets must be a power of two >= 2");
  if (ngram_orders.empty())
    throw ConfigError("at least one n-gram order required");
  for (int n : ngram_orders)
    if (n < 1) throw ConfigError("n-gram orders must be >= 1");
  if (max_tokens == 0) throw ConfigError("max_tokens must be >= 1");
}

double FeatureVector::recompute_norm() const {
  double sq = 0.0;
  for (const auto& [idx, w] : entries) sq += w * w;
  return std::sqrt(sq);
}

std::vector<std::string> tokenize(const std::string& text,
                                  const HashingConfig& config) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size() && tokens.size() < config.max_tokens) {
    std::size_t end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) {
      std::string tok = text.substr(start, end - start);
      if (config.lowercase) {
        for (char& c : tok)
          c = static_cast<char>(
              std::tolower(static_cast<unsigned char>(c)));
      }
      tokens.push_back(std::move(tok));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return tokens;
}

FeatureVector featurize(const std::vector<std::string>& tokens,
                        const HashingConfig& config) {
  config.validate();
  const std::uint32_t mask = config.buckets - 1;
  std::unordered_map<std::uint32_t, double> acc;
  std::string gram;
  for (int order : config.ngram_orders) {
    const std::size_t n = static_cast<std::size_t>(order);
    if (tokens.size() < n) continue;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      gram.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (k) gram.push_back(' ');
        gram += tokens[i + k];
      }
      std::uint32_t bucket =
          static_cast<std::uint32_t>(hash64(gram, config.hash_seed)) & mask;
      acc[bucket] += 1.0;
    }
  }
  FeatureVector vec;
  vec.entries.reserve(acc.size());
  for (auto& [idx, w] : acc) {
    if (config.sublinear_tf) w = 1.0 + std::log(w);
    vec.entries.emplace_back(idx, w);
  }
  std::sort(vec.entries.begin(), vec.entries.end());
  vec.norm = vec.recompute_norm();
  return vec;
}

std::string parent_marker(const std::string& category) {
  std::string name = category;
  std::replace(name.begin(), name.end(), ' ', '_');
  return "[parent:" + name + "]";
}

FeatureVector featurize_conditioned(const std::vector<std::string>& tokens,
                                    const std::string& parent,
                                    const Taxonomy& taxonomy,
                                    const HashingConfig& config) {
  if (!taxonomy.has_category(parent))
    throw DataError("featurize_conditioned: unknown parent category: " +
                    parent);
  std::vector<std::string> prefixed;
  prefixed.reserve(tokens.size() + 1);
  prefixed.push_back(parent_marker(parent));
  prefixed.insert(prefixed.end(), tokens.begin(), tokens.end());
  return featurize(prefixed, config);
}

IdfTable build_idf(const std::vector<FeatureVector>& corpus,
                   std::uint32_t buckets) {
  std::vector<std::size_t> df(buckets, 0);
  for (const auto& vec : corpus)
    for (const auto& [idx, w] : vec.entries) ++df[idx];
  IdfTable idf;
  idf.values.resize(buckets);
  const double n = static_cast<double>(corpus.size());
  for (std::uint32_t j = 0; j < buckets; ++j)
    idf.values[j] =
        std::log((1.0 + n) / (1.0 + static_cast<double>(df[j]))) + 1.0;
  return idf;
}

void apply_idf(FeatureVector& vec, const IdfTable& idf) {
  if (idf.empty()) return;
  for (auto& [idx, w] : vec.entries) {
    if (idx >= idf.values.size())
      throw DataError("apply_idf: bucket index out of range");
    w *= idf.values[idx];
  }
  vec.norm = vec.recompute_norm();
}

}  // namespace hiercls
