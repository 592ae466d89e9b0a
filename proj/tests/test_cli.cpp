#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hiercls/cli.hpp"
#include "hiercls/errors.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using hiercls::run_cli;

namespace {

const std::string kToyDir = std::string(HIERCLS_DATA_DIR) + "/toy";

struct CliResult {
  int code;
  std::string err;
};

CliResult run_capture(const std::vector<std::string>& args) {
  std::ostringstream captured;
  std::streambuf* old = std::cerr.rdbuf(captured.rdbuf());
  int code = run_cli(args);
  std::cerr.rdbuf(old);
  return {code, captured.str()};
}

int run(const std::vector<std::string>& args) { return run_capture(args).code; }

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("full toy chain: a -> pseudo-label -> augment -> b -> c -> report") {
  auto dir = testutil::scratch_dir("cli_chain");
  const std::string train = kToyDir + "/train.csv";
  const std::string dev = kToyDir + "/dev.csv";
  const std::string pool = kToyDir + "/pool.csv";
  const std::vector<std::string> speed = {"--epochs", "5", "--buckets",
                                          "32768"};

  auto with_speed = [&](std::vector<std::string> args) {
    args.insert(args.end(), speed.begin(), speed.end());
    return args;
  };

  const std::string a_model = (dir / "a.bin").string();
  REQUIRE(run(with_speed({"train", "--task", "a", "--train", train, "--dev",
                          dev, "--out", a_model})) == 0);
  CHECK(fs::exists(a_model));
  CHECK(fs::exists(a_model + ".run.json"));

  const std::string selected = (dir / "selected.jsonl").string();
  REQUIRE(run({"pseudo-label", "--model", a_model, "--pool", pool, "--out",
               selected}) == 0);
  CHECK(fs::exists(selected));

  const std::string b0_model = (dir / "b0.bin").string();
  REQUIRE(run(with_speed({"train", "--task", "b", "--train", train, "--dev",
                          dev, "--out", b0_model})) == 0);

  const std::string mixed = (dir / "mixed.jsonl").string();
  REQUIRE(run({"augment", "--authentic", train, "--selected", selected,
               "--model", b0_model, "--out", mixed}) == 0);

  const std::string b_model = (dir / "b.bin").string();
  REQUIRE(run(with_speed({"train", "--task", "b", "--train", mixed, "--dev",
                          dev, "--out", b_model})) == 0);

  const std::string c_model = (dir / "c.bin").string();
  REQUIRE(run(with_speed({"train", "--task", "c", "--conditioned", "--train",
                          train, "--dev", dev, "--out", c_model})) == 0);

  // Predict + evaluate each task on dev, then render the report.
  struct Stage {
    std::string task, model, method;
  };
  std::vector<Stage> stages = {{"a", a_model, "reference"},
                               {"b", b_model, "reference+synth"},
                               {"c", c_model, "reference+parent"}};
  std::vector<std::string> report_args = {"report"};
  report_args.push_back("--in");
  for (const auto& stage : stages) {
    const std::string preds =
        (dir / ("preds_" + stage.task + ".csv")).string();
    REQUIRE(run({"predict", "--model", stage.model, "--data", dev,
                 "--labeled-only", "--out", preds}) == 0);
    const std::string report =
        (dir / ("eval_" + stage.task + ".json")).string();
    REQUIRE(run({"evaluate", "--gold", dev, "--pred", preds, "--task",
                 stage.task, "--method", stage.method, "--out", report}) == 0);
    report_args.push_back(report);
  }
  const std::string table_path = (dir / "report.txt").string();
  report_args.insert(report_args.end(), {"--out", table_path});
  REQUIRE(run(report_args) == 0);

  const std::string table = testutil::read_file(table_path);
  CHECK(count_lines(table) == 5);  // header + separator + three task rows
  CHECK(table.find("A     reference") != std::string::npos);
  CHECK(table.find("B     reference+synth") != std::string::npos);
  CHECK(table.find("C     reference+parent") != std::string::npos);

  // Augment accounting: mixed = authentic + selected.
  nlohmann::json record = nlohmann::json::parse(
      testutil::read_file(mixed + ".run.json"));
  CHECK(record["counts"]["mixed"].get<std::uint64_t>() ==
        record["counts"]["authentic"].get<std::uint64_t>() +
            record["counts"]["selected"].get<std::uint64_t>());

  // Rerunning a stage with identical inputs is byte-identical.
  const std::string selected2 = (dir / "selected2.jsonl").string();
  REQUIRE(run({"pseudo-label", "--model", a_model, "--pool", pool, "--out",
               selected2}) == 0);
  CHECK(testutil::read_file(selected) == testutil::read_file(selected2));
}

TEST_CASE("split and stats commands") {
  auto dir = testutil::scratch_dir("cli_split");
  const std::string out_dir = (dir / "resplit").string();
  REQUIRE(run({"split", "--train", kToyDir + "/train.csv", "--dev",
               kToyDir + "/dev.csv", "--seed", "7", "--out", out_dir}) == 0);
  CHECK(fs::exists(fs::path(out_dir) / "train.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "dev.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "split.run.json"));

  // 10% of 300 train rows -> 30 dev rows; train = 270 + 88 dev rows.
  auto record = nlohmann::json::parse(
      testutil::read_file(fs::path(out_dir) / "split.run.json"));
  CHECK(record["counts"]["dev"].get<int>() == 30);
  CHECK(record["counts"]["train"].get<int>() == 358);

  // Rerun with the same seed reproduces the files byte for byte.
  const std::string out_dir2 = (dir / "resplit2").string();
  REQUIRE(run({"split", "--train", kToyDir + "/train.csv", "--dev",
               kToyDir + "/dev.csv", "--seed", "7", "--out", out_dir2}) == 0);
  CHECK(testutil::read_file(fs::path(out_dir) / "train.csv") ==
        testutil::read_file(fs::path(out_dir2) / "train.csv"));
  CHECK(testutil::read_file(fs::path(out_dir) / "dev.csv") ==
        testutil::read_file(fs::path(out_dir2) / "dev.csv"));

  CHECK(run({"stats", "--data", (fs::path(out_dir) / "train.csv").string()}) ==
        0);
}

TEST_CASE("stats on a header-only file is a data error") {
  auto dir = testutil::scratch_dir("cli_stats_empty");
  auto path = testutil::write_file(
      dir / "empty.csv", "id,text,label_binary,label_category,label_vector\n");
  auto result = run_capture({"stats", "--data", path});
  CHECK(result.code == hiercls::kExitData);
}

TEST_CASE("missing input path gives a usage error naming the path") {
  auto result = run_capture({"stats", "--data", "/no/such/file.csv"});
  CHECK(result.code == hiercls::kExitUsage);
  CHECK(result.err.find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("unknown flags and bad combinations are usage errors") {
  CHECK(run({"stats", "--no-such-flag"}) == hiercls::kExitUsage);
  CHECK(run({"no-such-command"}) == hiercls::kExitUsage);
  CHECK(run({}) == hiercls::kExitUsage);

  auto dir = testutil::scratch_dir("cli_usage");
  auto result = run_capture({"train", "--task", "a", "--conditioned",
                             "--train", kToyDir + "/train.csv", "--out",
                             (dir / "m.bin").string()});
  CHECK(result.code == hiercls::kExitUsage);
  CHECK(result.err.find("--conditioned") != std::string::npos);
}

TEST_CASE("malformed data gives a data error with the line number") {
  auto dir = testutil::scratch_dir("cli_bad_data");
  auto path = testutil::write_file(
      dir / "bad.csv",
      "id,text,label_binary,label_category,label_vector\n"
      "x1,\"text\",not sexist,\"2. derogation\",none\n");
  auto result = run_capture({"stats", "--data", path});
  CHECK(result.code == hiercls::kExitData);
  CHECK(result.err.find("line 2") != std::string::npos);
}

TEST_CASE("evaluate with mismatched prediction set is a data error") {
  auto dir = testutil::scratch_dir("cli_eval");
  auto gold = testutil::write_file(
      dir / "gold.csv",
      "id,text,label_binary,label_category,label_vector\n"
      "g1,\"a\",sexist,none,none\n"
      "g2,\"b\",not sexist,none,none\n");
  auto preds = testutil::write_file(dir / "preds.csv",
                                    "id,predicted_label\ng1,sexist\n");
  auto result = run_capture({"evaluate", "--gold", gold, "--pred", preds,
                             "--task", "a", "--method", "m"});
  CHECK(result.code == hiercls::kExitData);

  auto wrong_id = testutil::write_file(
      dir / "preds2.csv",
      "id,predicted_label\ng1,sexist\nzz,not sexist\n");
  result = run_capture({"evaluate", "--gold", gold, "--pred", wrong_id,
                        "--task", "a", "--method", "m"});
  CHECK(result.code == hiercls::kExitData);

  auto good = testutil::write_file(
      dir / "preds3.csv",
      "id,predicted_label\ng1,sexist\ng2,not sexist\n");
  CHECK(run({"evaluate", "--gold", gold, "--pred", good, "--task", "a",
             "--method", "m"}) == 0);
}

TEST_CASE("train run-record carries the effective config and fingerprints") {
  auto dir = testutil::scratch_dir("cli_record");
  const std::string model = (dir / "a.bin").string();
  REQUIRE(run({"train", "--task", "a", "--train", kToyDir + "/train.csv",
               "--epochs", "2", "--buckets", "4096", "--seed", "99", "--out",
               model}) == 0);
  auto record =
      nlohmann::json::parse(testutil::read_file(model + ".run.json"));
  CHECK(record["stage"] == "train_task_a");
  CHECK(record["config"]["epochs"] == "2");
  CHECK(record["config"]["buckets"] == "4096");
  CHECK(record["config"]["shuffle_seed"] == "99");
  CHECK(record["config"]["learning_rate"] == "0.050000000000000003");
  REQUIRE(record["inputs"].size() == 1);
  CHECK(record["inputs"][0]["rows"].get<int>() == 300);
  CHECK(record["inputs"][0]["fingerprint"].get<std::string>().size() == 16);
}

TEST_CASE("taxonomy file flag works end to end") {
  auto dir = testutil::scratch_dir("cli_taxonomy");
  // A reduced taxonomy rejects the toy data's labels.
  auto tiny = testutil::write_file(dir / "tiny.tsv", "v1\tc1\n");
  auto result = run_capture({"stats", "--data", kToyDir + "/train.csv",
                             "--taxonomy", tiny});
  CHECK(result.code == hiercls::kExitData);

  // The shipped full taxonomy accepts it.
  CHECK(run({"stats", "--data", kToyDir + "/train.csv", "--taxonomy",
             std::string(HIERCLS_DATA_DIR) + "/taxonomy.tsv"}) == 0);
}
