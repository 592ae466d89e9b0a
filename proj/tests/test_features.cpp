#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "hiercls/errors.hpp"
#include "hiercls/features.hpp"
#include "hiercls/hash.hpp"
#include "hiercls/taxonomy.hpp"

using namespace hiercls;

namespace {

HashingConfig small_config() {
  HashingConfig c;
  c.buckets = 1u << 12;
  return c;
}

std::map<std::uint32_t, double> as_map(const FeatureVector& v) {
  return {v.entries.begin(), v.entries.end()};
}

}  // namespace

TEST_CASE("config validation") {
  HashingConfig c;
  CHECK_NOTHROW(c.validate());
  c.buckets = 1000;  // not a power of two
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.buckets = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = HashingConfig{};
  c.ngram_orders = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.ngram_orders = {0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("tokenize lowercases and splits on single spaces") {
  HashingConfig c;
  CHECK(tokenize("Women are X", c) ==
        std::vector<std::string>{"women", "are", "x"});
  CHECK(tokenize("", c).empty());
  CHECK(tokenize("   ", c).empty());
  CHECK(tokenize("a  b", c) == std::vector<std::string>{"a", "b"});
  c.lowercase = false;
  CHECK(tokenize("Women", c) == std::vector<std::string>{"Women"});
}

TEST_CASE("tokenize truncates to max_tokens") {
  HashingConfig c;
  std::string text;
  for (int i = 0; i < 200; ++i) {
    if (i) text += ' ';
    text += "t" + std::to_string(i);
  }
  auto tokens = tokenize(text, c);
  CHECK(tokens.size() == 128);
  CHECK(tokens.front() == "t0");
  CHECK(tokens.back() == "t127");
}

TEST_CASE("featurize: repeated unigram accumulates weight") {
  HashingConfig c = small_config();
  c.ngram_orders = {1};
  auto v = featurize({"a", "a"}, c);
  REQUIRE(v.entries.size() == 1);
  CHECK(v.entries[0].second == doctest::Approx(2.0));
  CHECK(v.norm == doctest::Approx(2.0));
}

TEST_CASE("featurize: unigrams plus bigram populate at most 3 buckets") {
  HashingConfig c = small_config();
  auto v = featurize({"a", "b"}, c);
  CHECK(v.entries.size() <= 3);
  CHECK(v.entries.size() >= 1);
  double total = 0;
  for (auto& [idx, w] : v.entries) {
    CHECK(idx < c.buckets);
    CHECK(w > 0);
    total += w;
  }
  CHECK(total == doctest::Approx(3.0));  // 2 unigrams + 1 bigram
}

TEST_CASE("featurize determinism") {
  HashingConfig c = small_config();
  auto tokens = tokenize("some words repeated some words", c);
  CHECK(featurize(tokens, c) == featurize(tokens, c));
  HashingConfig other = c;
  other.hash_seed = c.hash_seed + 1;
  CHECK(featurize(tokens, c) != featurize(tokens, other));
}

TEST_CASE("bigram features are order-sensitive") {
  HashingConfig c = small_config();
  c.ngram_orders = {2};
  auto fwd = featurize({"alpha", "beta"}, c);
  auto rev = featurize({"beta", "alpha"}, c);
  REQUIRE(fwd.entries.size() == 1);
  REQUIRE(rev.entries.size() == 1);
  CHECK(fwd.entries[0].first != rev.entries[0].first);
}

TEST_CASE("featurize is additive over concatenation for unigrams") {
  HashingConfig c = small_config();
  c.ngram_orders = {1};
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> a, b;
    int na = int(rng() % 10), nb = int(rng() % 10);
    for (int i = 0; i < na; ++i) a.push_back("w" + std::to_string(rng() % 8));
    for (int i = 0; i < nb; ++i) b.push_back("w" + std::to_string(rng() % 8));
    std::vector<std::string> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());

    auto sum = as_map(featurize(a, c));
    for (auto& [idx, w] : as_map(featurize(b, c))) sum[idx] += w;
    CHECK(as_map(featurize(ab, c)) == sum);
  }
}

TEST_CASE("all bucket indices stay below the configured bucket count") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    HashingConfig c;
    c.buckets = 1u << (2 + rng() % 12);
    c.hash_seed = rng();
    std::vector<std::string> tokens;
    int n = int(rng() % 30);
    for (int i = 0; i < n; ++i)
      tokens.push_back("tok" + std::to_string(rng() % 1000));
    for (auto& [idx, w] : featurize(tokens, c).entries) CHECK(idx < c.buckets);
  }
}

TEST_CASE("sublinear tf rescales weights") {
  HashingConfig c = small_config();
  c.ngram_orders = {1};
  c.sublinear_tf = true;
  auto v = featurize({"a", "a", "a"}, c);
  REQUIRE(v.entries.size() == 1);
  CHECK(v.entries[0].second == doctest::Approx(1.0 + std::log(3.0)));
}

TEST_CASE("idf table downweights common buckets") {
  HashingConfig c = small_config();
  c.ngram_orders = {1};
  std::vector<FeatureVector> corpus = {
      featurize({"common", "rare"}, c),
      featurize({"common"}, c),
      featurize({"common"}, c),
  };
  IdfTable idf = build_idf(corpus, c.buckets);
  auto common = featurize({"common"}, c);
  auto rare = featurize({"rare"}, c);
  apply_idf(common, idf);
  apply_idf(rare, idf);
  CHECK(common.entries[0].second < rare.entries[0].second);
  CHECK(common.entries[0].second > 0.0);
}

TEST_CASE("conditioned featurization: additive decomposition for unigrams") {
  Taxonomy tax = Taxonomy::edos_default();
  HashingConfig c = small_config();
  c.ngram_orders = {1};
  auto tokens = tokenize("just some words", c);
  const std::string parent = tax.categories()[0];

  auto plain = as_map(featurize(tokens, c));
  auto conditioned = as_map(featurize_conditioned(tokens, parent, tax, c));

  auto marker_bucket = static_cast<std::uint32_t>(
                           hash64(parent_marker(parent), c.hash_seed)) &
                       (c.buckets - 1);
  plain[marker_bucket] += 1.0;
  CHECK(conditioned == plain);
}

TEST_CASE("conditioned featurization: four parents give four distinct vectors") {
  Taxonomy tax = Taxonomy::edos_default();
  HashingConfig c = small_config();
  auto tokens = tokenize("the same sentence each time", c);
  std::vector<FeatureVector> vecs;
  for (const auto& cat : tax.categories())
    vecs.push_back(featurize_conditioned(tokens, cat, tax, c));
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (std::size_t j = i + 1; j < vecs.size(); ++j)
      CHECK(vecs[i] != vecs[j]);
}

TEST_CASE("conditioned featurization rejects unknown parents") {
  Taxonomy tax = Taxonomy::edos_default();
  HashingConfig c = small_config();
  CHECK_THROWS_AS(featurize_conditioned({"x"}, "no such category", tax, c),
                  DataError);
}
