#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hiercls {

// Two-level label tree: fine-grained vectors, each with exactly one
// parent category, plus the fixed binary pair. The default tree is the
// EDOS schema (4 categories, 11 vectors).
class Taxonomy {
 public:
  struct Vector {
    std::string name;
    std::string parent;
  };

  Taxonomy(std::vector<std::string> categories, std::vector<Vector> vectors);

  static const std::string& sexist_label();      // "sexist"
  static const std::string& not_sexist_label();  // "not sexist"
  static const std::vector<std::string>& binary_labels();

  static Taxonomy edos_default();

  // File format: one line per vector as "vector<TAB>category". Lines
  // without a tab declare a childless category. '#' starts a comment.
  static Taxonomy load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<std::string>& categories() const { return categories_; }
  const std::vector<Vector>& vectors() const { return vectors_; }
  std::vector<std::string> vector_names() const;

  bool has_category(const std::string& name) const;
  bool has_vector(const std::string& name) const;
  // Parent category of a vector; throws DataError for unknown vectors.
  const std::string& parent_of(const std::string& vector_name) const;
  std::vector<std::string> children_of(const std::string& category) const;

  // Stable fingerprint of the tree, embedded in model files so a model
  // can detect being used against a different taxonomy.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::string> categories_;  // ordered
  std::vector<Vector> vectors_;          // ordered
};

}  // namespace hiercls
