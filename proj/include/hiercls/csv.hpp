#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hiercls::csv {

// Minimal RFC 4180 comma-separated reader/writer. Fields may be quoted
// with '"'; quoted fields may contain commas, doubled quotes and
// newlines. Row numbers reported in errors are physical line numbers of
// the row start (header = line 1).

struct Row {
  std::vector<std::string> fields;
  int line = 0;
};

// Reads all rows, header included. Throws DataError on unbalanced quotes.
std::vector<Row> read_all(std::istream& in, const std::string& origin);
std::vector<Row> read_file(const std::string& path);

// Quotes iff the field contains a comma, quote, CR/LF, or when `force`.
std::string encode_field(const std::string& field, bool force = false);

void write_row(std::ostream& out, const std::vector<std::string>& fields,
               const std::vector<bool>& force_quote = {});

}  // namespace hiercls::csv
