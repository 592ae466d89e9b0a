#include "hiercls/run_record.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "hiercls/errors.hpp"
#include "hiercls/hash.hpp"

namespace hiercls {

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for fingerprinting: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash64(bytes, 0)));
  return buf;
}

void write_run_record(const RunRecord& record, const std::string& path) {
  nlohmann::json j;
  j["stage"] = record.stage;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : record.inputs)
    inputs.push_back({{"path", in.path},
                      {"fingerprint", in.fingerprint},
                      {"rows", in.rows}});
  j["inputs"] = inputs;
  j["output"] = record.output;
  j["config"] = record.config;
  j["counts"] = record.counts;
  j["metrics"] = record.metrics;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write run record: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace hiercls
