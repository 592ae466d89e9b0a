#include "hiercls/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hiercls/errors.hpp"

namespace hiercls::csv {

std::vector<Row> read_all(std::istream& in, const std::string& origin) {
  std::vector<Row> rows;
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  size_t i = 0;
  int line = 1;
  const size_t n = content.size();
  while (i < n) {
    Row row;
    row.line = line;
    std::string field;
    bool in_quotes = false;
    bool row_done = false;
    while (i < n && !row_done) {
      char c = content[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < n && content[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
      } else if (c == '"' && field.empty()) {
        in_quotes = true;
        ++i;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        ++i;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && i + 1 < n && content[i + 1] == '\n') ++i;
        ++i;
        ++line;
        row_done = true;
      } else {
        field.push_back(c);
        ++i;
      }
    }
    if (in_quotes) {
      throw DataError(origin + ": line " + std::to_string(row.line) +
                      ": unterminated quoted field");
    }
    row.fields.push_back(std::move(field));
    // A lone trailing newline does not produce an empty row.
    if (!(row.fields.size() == 1 && row.fields[0].empty() && i >= n)) {
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<Row> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return read_all(in, path);
}

std::string encode_field(const std::string& field, bool force) {
  bool needs = force || field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields,
               const std::vector<bool>& force_quote) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(',');
    bool force = i < force_quote.size() && force_quote[i];
    out << encode_field(fields[i], force);
  }
  out.put('\n');
}

}  // namespace hiercls::csv
