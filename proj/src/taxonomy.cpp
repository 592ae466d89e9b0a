#include "hiercls/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hiercls/errors.hpp"
#include "hiercls/hash.hpp"

namespace hiercls {

Taxonomy::Taxonomy(std::vector<std::string> categories,
                   std::vector<Vector> vectors)
    : categories_(std::move(categories)), vectors_(std::move(vectors)) {
  std::set<std::string> cat_names;
  for (const auto& c : categories_) {
    if (c.empty()) throw DataError("taxonomy: empty category name");
    if (!cat_names.insert(c).second)
      throw DataError("taxonomy: duplicate category: " + c);
  }
  std::set<std::string> vec_names;
  for (const auto& v : vectors_) {
    if (v.name.empty()) throw DataError("taxonomy: empty vector name");
    if (!vec_names.insert(v.name).second)
      throw DataError("taxonomy: duplicate vector: " + v.name);
    if (!cat_names.count(v.parent))
      throw DataError("taxonomy: vector '" + v.name +
                      "' has unknown parent '" + v.parent + "'");
  }
}

const std::string& Taxonomy::sexist_label() {
  static const std::string s = "sexist";
  return s;
}

const std::string& Taxonomy::not_sexist_label() {
  static const std::string s = "not sexist";
  return s;
}

const std::vector<std::string>& Taxonomy::binary_labels() {
  static const std::vector<std::string> labels = {not_sexist_label(),
                                                  sexist_label()};
  return labels;
}

Taxonomy Taxonomy::edos_default() {
  const std::string c1 = "1. threats, plans to harm and incitement";
  const std::string c2 = "2. derogation";
  const std::string c3 = "3. animosity";
  const std::string c4 = "4. prejudiced discussions";
  return Taxonomy(
      {c1, c2, c3, c4},
      {
          {"1.1 threats of harm", c1},
          {"1.2 incitement and encouragement of harm", c1},
          {"2.1 descriptive attacks", c2},
          {"2.2 aggressive and emotive attacks", c2},
          {"2.3 dehumanising attacks & overt sexual objectification", c2},
          {"3.1 casual use of gendered slurs, profanities, and insults", c3},
          {"3.2 immutable gender differences and gender stereotypes", c3},
          {"3.3 backhanded gendered compliments", c3},
          {"3.4 condescending explanations or unwelcome advice", c3},
          {"4.1 supporting mistreatment of individual women", c4},
          {"4.2 supporting systemic discrimination against women as a group",
           c4},
      });
}

Taxonomy Taxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open taxonomy file: " + path);
  std::vector<std::string> categories;
  std::vector<Vector> vectors;
  std::set<std::string> seen_cats;
  auto add_category = [&](const std::string& name) {
    if (seen_cats.insert(name).second) categories.push_back(name);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      add_category(line);
      continue;
    }
    std::string vec = line.substr(0, tab);
    std::string parent = line.substr(tab + 1);
    if (vec.empty() || parent.empty())
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": empty vector or category name");
    add_category(parent);
    vectors.push_back({vec, parent});
  }
  return Taxonomy(std::move(categories), std::move(vectors));
}

void Taxonomy::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write taxonomy file: " + path);
  std::set<std::string> parents;
  for (const auto& v : vectors_) {
    out << v.name << '\t' << v.parent << '\n';
    parents.insert(v.parent);
  }
  for (const auto& c : categories_) {
    if (!parents.count(c)) out << c << '\n';
  }
}

std::vector<std::string> Taxonomy::vector_names() const {
  std::vector<std::string> names;
  names.reserve(vectors_.size());
  for (const auto& v : vectors_) names.push_back(v.name);
  return names;
}

bool Taxonomy::has_category(const std::string& name) const {
  return std::find(categories_.begin(), categories_.end(), name) !=
         categories_.end();
}

bool Taxonomy::has_vector(const std::string& name) const {
  for (const auto& v : vectors_)
    if (v.name == name) return true;
  return false;
}

const std::string& Taxonomy::parent_of(const std::string& vector_name) const {
  for (const auto& v : vectors_)
    if (v.name == vector_name) return v.parent;
  throw DataError("taxonomy: unknown vector: " + vector_name);
}

std::vector<std::string> Taxonomy::children_of(
    const std::string& category) const {
  if (!has_category(category))
    throw DataError("taxonomy: unknown category: " + category);
  std::vector<std::string> out;
  for (const auto& v : vectors_)
    if (v.parent == category) out.push_back(v.name);
  return out;
}

std::uint64_t Taxonomy::fingerprint() const {
  std::ostringstream canon;
  for (const auto& c : categories_) canon << "C\x1f" << c << '\x1e';
  for (const auto& v : vectors_)
    canon << "V\x1f" << v.name << '\x1f' << v.parent << '\x1e';
  return hash64(canon.str(), /*seed=*/0);
}

}  // namespace hiercls
