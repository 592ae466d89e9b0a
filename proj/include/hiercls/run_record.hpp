#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hiercls {

// Provenance record written next to every artifact a CLI stage
// produces: enough to re-execute the stage exactly. Deliberately free of
// timestamps so reruns are byte-identical.
struct RunRecord {
  std::string stage;
  struct Input {
    std::string path;
    std::string fingerprint;  // fnv64 of the file bytes, hex
    std::uint64_t rows = 0;
  };
  std::vector<Input> inputs;
  std::string output;
  std::map<std::string, std::string> config;   // effective settings
  std::map<std::string, std::uint64_t> counts;
  std::map<std::string, double> metrics;
};

std::string file_fingerprint(const std::string& path);

void write_run_record(const RunRecord& record, const std::string& path);

}  // namespace hiercls
