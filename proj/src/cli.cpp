#include "hiercls/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hiercls/backend.hpp"
#include "hiercls/corpus.hpp"
#include "hiercls/csv.hpp"
#include "hiercls/errors.hpp"
#include "hiercls/eval.hpp"
#include "hiercls/model.hpp"
#include "hiercls/pipeline.hpp"
#include "hiercls/run_record.hpp"
#include "hiercls/taxonomy.hpp"

namespace fs = std::filesystem;

namespace hiercls {
namespace {

struct CommonOpts {
  std::string taxonomy_path;
  std::string data_dir;  // HIERCLS_DATA_DIR
};

Taxonomy resolve_taxonomy(const CommonOpts& opts) {
  if (!opts.taxonomy_path.empty()) return Taxonomy::load(opts.taxonomy_path);
  if (!opts.data_dir.empty()) {
    fs::path candidate = fs::path(opts.data_dir) / "taxonomy.tsv";
    if (fs::exists(candidate)) return Taxonomy::load(candidate.string());
  }
  return Taxonomy::edos_default();
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--taxonomy", opts.taxonomy_path,
                  "Taxonomy file (vector<TAB>category per line); default is "
                  "the built-in EDOS tree")
      ->check(CLI::ExistingFile);
  cmd->add_option("--data-dir", opts.data_dir,
                  "Directory searched for taxonomy.tsv when --taxonomy is "
                  "not given")
      ->envname("HIERCLS_DATA_DIR");
}

struct TrainOpts {
  TrainConfig train;
  HashingConfig hashing;
};

void add_train_options(CLI::App* cmd, TrainOpts& opts) {
  cmd->add_option("--seed", opts.train.shuffle_seed, "Shuffle seed")
      ->capture_default_str();
  cmd->add_option("--epochs", opts.train.epochs, "Training epochs")
      ->capture_default_str();
  cmd->add_option("--batch-size", opts.train.batch_size, "Mini-batch size")
      ->capture_default_str();
  cmd->add_option("--lr", opts.train.learning_rate, "Learning rate")
      ->capture_default_str();
  cmd->add_option("--l2", opts.train.l2, "L2 penalty on weights")
      ->capture_default_str();
  cmd->add_flag("--class-weights", opts.train.balance_classes,
                "Weight examples by inverse class frequency");
  cmd->add_option("--buckets", opts.hashing.buckets,
                  "Feature buckets (power of two)")
      ->capture_default_str();
  cmd->add_option("--ngram", opts.hashing.ngram_orders,
                  "N-gram orders (repeatable)");
  cmd->add_option("--hash-seed", opts.hashing.hash_seed, "Feature hash seed")
      ->capture_default_str();
  cmd->add_option("--max-tokens", opts.hashing.max_tokens,
                  "Maximum sequence length in tokens")
      ->capture_default_str();
  cmd->add_flag("--no-lowercase", [&opts](std::int64_t) {
    opts.hashing.lowercase = false;
  }, "Keep token case");
  cmd->add_flag("--sublinear-tf", opts.hashing.sublinear_tf,
                "Use 1+ln(tf) term weights");
  cmd->add_flag("--idf", opts.hashing.use_idf,
                "Scale features by inverse document frequency");
}

std::map<std::string, std::string> config_snapshot(const TrainOpts& opts) {
  std::map<std::string, std::string> snap;
  auto put_d = [&snap](const char* key, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    snap[key] = buf;
  };
  snap["epochs"] = std::to_string(opts.train.epochs);
  snap["batch_size"] = std::to_string(opts.train.batch_size);
  put_d("learning_rate", opts.train.learning_rate);
  put_d("epsilon", opts.train.epsilon);
  put_d("beta1", opts.train.beta1);
  put_d("beta2", opts.train.beta2);
  snap["shuffle_seed"] = std::to_string(opts.train.shuffle_seed);
  put_d("l2", opts.train.l2);
  snap["class_weights"] = opts.train.balance_classes ? "true" : "false";
  snap["buckets"] = std::to_string(opts.hashing.buckets);
  std::string orders;
  for (int n : opts.hashing.ngram_orders) {
    if (!orders.empty()) orders += ",";
    orders += std::to_string(n);
  }
  snap["ngram_orders"] = orders;
  snap["hash_seed"] = std::to_string(opts.hashing.hash_seed);
  snap["max_tokens"] = std::to_string(opts.hashing.max_tokens);
  snap["lowercase"] = opts.hashing.lowercase ? "true" : "false";
  snap["sublinear_tf"] = opts.hashing.sublinear_tf ? "true" : "false";
  snap["use_idf"] = opts.hashing.use_idf ? "true" : "false";
  return snap;
}

void ensure_parent_dir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

RunRecord::Input record_input(const std::string& path, std::uint64_t rows) {
  return {path, file_fingerprint(path), rows};
}

void save_examples(const std::vector<Example>& examples,
                   const std::string& path) {
  ensure_parent_dir(path);
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0)
    save_jsonl(examples, path);
  else
    save_csv(examples, path);
}

std::string f1_text(double f1) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", f1);
  return buf;
}

// --- split -----------------------------------------------------------

struct SplitArgs {
  CommonOpts common;
  std::string train_path, dev_path, out_dir;
  std::uint64_t seed = 13;
  double dev_fraction = 0.10;
};

int cmd_split(const SplitArgs& args) {
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  auto train = load_labeled(args.train_path, taxonomy);
  auto dev = load_labeled(args.dev_path, taxonomy);
  DatasetSplit split = resplit(train, dev, args.seed, args.dev_fraction);

  fs::create_directories(args.out_dir);
  const std::string out_train = (fs::path(args.out_dir) / "train.csv").string();
  const std::string out_dev = (fs::path(args.out_dir) / "dev.csv").string();
  save_csv(split.train, out_train);
  save_csv(split.dev, out_dev);

  RunRecord record;
  record.stage = "split";
  record.inputs = {record_input(args.train_path, train.size()),
                   record_input(args.dev_path, dev.size())};
  record.output = args.out_dir;
  record.config["seed"] = std::to_string(args.seed);
  char frac[32];
  std::snprintf(frac, sizeof(frac), "%.17g", args.dev_fraction);
  record.config["dev_fraction"] = frac;
  record.counts["train"] = split.train.size();
  record.counts["dev"] = split.dev.size();
  write_run_record(record,
                   (fs::path(args.out_dir) / "split.run.json").string());

  std::cout << "split: train " << split.train.size() << ", dev "
            << split.dev.size() << " -> " << args.out_dir << "\n";
  return kExitOk;
}

// --- stats -----------------------------------------------------------

struct StatsArgs {
  CommonOpts common;
  std::string data_path;
};

int cmd_stats(const StatsArgs& args) {
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  auto examples = load_labeled(args.data_path, taxonomy);
  std::cout << format_stats(stats(examples));
  return kExitOk;
}

// --- train -----------------------------------------------------------

struct TrainArgs {
  CommonOpts common;
  TrainOpts opts;
  std::string task;
  std::string train_path, dev_path, out_path;
  bool conditioned = false;
};

int cmd_train(const TrainArgs& args) {
  if (args.conditioned && args.task != "c")
    throw ConfigError("--conditioned only applies to --task c");
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  auto train_examples = load_labeled(args.train_path, taxonomy);
  std::vector<Example> dev_examples;
  if (!args.dev_path.empty())
    dev_examples = load_labeled(args.dev_path, taxonomy);

  HashedSoftmaxBackend backend(taxonomy, args.opts.hashing);
  RunRecord record;
  record.stage = "train_task_" + args.task;
  record.config = config_snapshot(args.opts);
  record.config["conditioned"] = args.conditioned ? "true" : "false";
  record.inputs.push_back(
      record_input(args.train_path, train_examples.size()));
  if (!args.dev_path.empty())
    record.inputs.push_back(record_input(args.dev_path, dev_examples.size()));

  if (args.task == "a") {
    DatasetSplit split;
    split.train = std::move(train_examples);
    split.dev = dev_examples;
    train_task_a(backend, split, taxonomy, args.opts.train);
    record.counts["train"] = split.train.size();
  } else if (args.task == "b") {
    std::vector<Example> authentic, synthetic;
    std::size_t dropped = 0;
    for (auto& ex : train_examples) {
      if (!ex.label_category) {
        ++dropped;
        continue;
      }
      if (ex.provenance == Provenance::kAuthentic)
        authentic.push_back(std::move(ex));
      else
        synthetic.push_back(std::move(ex));
    }
    if (dropped)
      std::cerr << "train b: dropped " << dropped
                << " rows without category labels\n";
    StageCounts counts =
        train_task_b(backend, authentic, synthetic, taxonomy, args.opts.train,
                     dev_examples.empty() ? nullptr : &dev_examples);
    record.counts["authentic"] = counts.authentic;
    record.counts["synthetic"] = counts.synthetic;
    record.counts["selected"] = counts.selected;
    record.counts["mixed"] = counts.mixed;
  } else if (args.task == "c") {
    std::vector<Example> labeled;
    std::size_t dropped = 0;
    for (auto& ex : train_examples) {
      // Synthetic items never carry vector labels and stay out of Task C.
      if (!ex.label_vector || ex.provenance != Provenance::kAuthentic) {
        ++dropped;
        continue;
      }
      labeled.push_back(std::move(ex));
    }
    if (dropped)
      std::cerr << "train c: dropped " << dropped
                << " rows without vector labels\n";
    train_task_c(backend, labeled, taxonomy, args.opts.train, args.conditioned,
                 dev_examples.empty() ? nullptr : &dev_examples);
    record.counts["train"] = labeled.size();
  } else {
    throw ConfigError("unknown task: " + args.task);
  }

  ensure_parent_dir(args.out_path);
  backend.save(args.out_path);
  record.output = args.out_path;
  if (backend.dev_macro_f1() >= 0.0) {
    record.metrics["dev_macro_f1"] = backend.dev_macro_f1();
    std::cout << "task " << args.task
              << " dev macro F1: " << f1_text(backend.dev_macro_f1()) << "\n";
  }
  write_run_record(record, args.out_path + ".run.json");
  std::cout << "model written to " << args.out_path << "\n";
  return kExitOk;
}

// --- pseudo-label ----------------------------------------------------

struct PseudoArgs {
  CommonOpts common;
  std::vector<std::string> model_paths;
  std::string pool_path, out_path;
  std::string mode = "argmax";
  double threshold = 0.5;
};

int cmd_pseudo_label(const PseudoArgs& args) {
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  SelectionPolicy policy;
  if (args.mode == "argmax") policy.mode = SelectionPolicy::Mode::kArgmax;
  else if (args.mode == "threshold")
    policy.mode = SelectionPolicy::Mode::kThreshold;
  else
    throw ConfigError("selection mode must be 'argmax' or 'threshold'");
  policy.threshold = args.threshold;
  policy.validate();

  // Best model = highest stored dev macro F1, first one on ties.
  std::unique_ptr<HashedSoftmaxBackend> best;
  std::string best_path;
  for (const auto& path : args.model_paths) {
    auto backend = std::make_unique<HashedSoftmaxBackend>(taxonomy,
                                                          HashingConfig{});
    backend->load(path);
    if (backend->task_level() != TaskLevel::kBinary)
      throw ConfigError("pseudo-label: " + path + " is not a binary model");
    if (!best || backend->dev_macro_f1() > best->dev_macro_f1()) {
      best = std::move(backend);
      best_path = path;
    }
  }
  auto pool = load_unlabeled(args.pool_path);
  auto selected = pseudo_label_pool(*best, pool, policy);
  ensure_parent_dir(args.out_path);
  save_jsonl(selected, args.out_path);

  RunRecord record;
  record.stage = "pseudo_label";
  for (const auto& path : args.model_paths)
    record.inputs.push_back(record_input(path, 0));
  record.inputs.push_back(record_input(args.pool_path, pool.size()));
  record.output = args.out_path;
  record.config["mode"] = args.mode;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", args.threshold);
  record.config["threshold"] = buf;
  record.config["selected_model"] = best_path;
  record.counts["pool"] = pool.size();
  record.counts["selected"] = selected.size();
  write_run_record(record, args.out_path + ".run.json");

  std::cout << "pseudo-label: selected " << selected.size() << " of "
            << pool.size() << " pool items (model " << best_path << ")\n";
  return kExitOk;
}

// --- augment ---------------------------------------------------------

struct AugmentArgs {
  CommonOpts common;
  std::string authentic_path, selected_path, model_path, out_path;
};

int cmd_augment(const AugmentArgs& args) {
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  auto authentic_rows = load_labeled(args.authentic_path, taxonomy);
  std::vector<Example> authentic;
  for (auto& ex : authentic_rows) {
    if (ex.label_category && ex.provenance == Provenance::kAuthentic)
      authentic.push_back(std::move(ex));
  }
  auto selected = load_labeled(args.selected_path, taxonomy);

  HashedSoftmaxBackend category_model(taxonomy, HashingConfig{});
  category_model.load(args.model_path);
  if (category_model.task_level() != TaskLevel::kCategory)
    throw ConfigError("augment: " + args.model_path +
                      " is not a category model");

  auto labeled = synthesize_category_labels(category_model, taxonomy,
                                            std::move(selected));
  auto mixed = mix_examples(authentic, labeled);
  ensure_parent_dir(args.out_path);
  save_jsonl(mixed, args.out_path);

  RunRecord record;
  record.stage = "augment";
  record.inputs = {record_input(args.authentic_path, authentic_rows.size()),
                   record_input(args.selected_path, labeled.size()),
                   record_input(args.model_path, 0)};
  record.output = args.out_path;
  record.counts["authentic"] = authentic.size();
  record.counts["selected"] = labeled.size();
  record.counts["mixed"] = mixed.size();
  write_run_record(record, args.out_path + ".run.json");

  std::cout << "augment: " << authentic.size() << " authentic + "
            << labeled.size() << " synthetic = " << mixed.size()
            << " mixed -> " << args.out_path << "\n";
  return kExitOk;
}

// --- predict ---------------------------------------------------------

struct PredictArgs {
  CommonOpts common;
  std::string model_path, data_path, out_path, category_model_path;
  std::string parent_mode = "auto";  // auto | gold | predicted
  bool mask_to_children = false;
  bool labeled_only = false;
};

int cmd_predict(const PredictArgs& args) {
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  HashedSoftmaxBackend backend(taxonomy, HashingConfig{});
  backend.load(args.model_path);
  const TaskLevel level = backend.task_level();

  if (args.mask_to_children && level != TaskLevel::kVector)
    throw ConfigError("--mask-to-children only applies to vector models");
  if (args.parent_mode != "auto" && args.parent_mode != "gold" &&
      args.parent_mode != "predicted")
    throw ConfigError("--parent-mode must be auto, gold or predicted");

  std::unique_ptr<HashedSoftmaxBackend> category_model;
  if (!args.category_model_path.empty()) {
    category_model =
        std::make_unique<HashedSoftmaxBackend>(taxonomy, HashingConfig{});
    category_model->load(args.category_model_path);
    if (category_model->task_level() != TaskLevel::kCategory)
      throw ConfigError("predict: " + args.category_model_path +
                        " is not a category model");
  }

  auto examples = load_labeled(args.data_path, taxonomy);
  if (args.labeled_only) {
    std::vector<Example> kept;
    for (auto& ex : examples) {
      const bool has =
          level == TaskLevel::kBinary
              ? ex.label_binary.has_value()
              : level == TaskLevel::kCategory ? ex.label_category.has_value()
                                              : ex.label_vector.has_value();
      if (has) kept.push_back(std::move(ex));
    }
    examples = std::move(kept);
  }

  ensure_parent_dir(args.out_path);
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw DataError("cannot write predictions: " + args.out_path);
  out << "id,predicted_label\n";
  for (const auto& ex : examples) {
    std::string label;
    if (level == TaskLevel::kVector) {
      std::optional<std::string> gold;
      if (args.parent_mode != "predicted") gold = ex.label_category;
      if (args.parent_mode == "gold" && !gold)
        throw DataError("predict: example " + ex.id +
                        " has no gold parent category");
      label = predict_task_c(backend, taxonomy, ex.text, gold,
                             category_model.get(), args.mask_to_children)
                  .argmax_class;
    } else {
      label = backend.predict_text(ex.text, std::nullopt).argmax_class;
    }
    csv::write_row(out, {ex.id, label});
  }
  out.close();

  RunRecord record;
  record.stage = "predict";
  record.inputs = {record_input(args.model_path, 0),
                   record_input(args.data_path, examples.size())};
  if (category_model)
    record.inputs.push_back(record_input(args.category_model_path, 0));
  record.output = args.out_path;
  record.config["parent_mode"] = args.parent_mode;
  record.config["mask_to_children"] =
      args.mask_to_children ? "true" : "false";
  record.config["labeled_only"] = args.labeled_only ? "true" : "false";
  record.counts["predictions"] = examples.size();
  write_run_record(record, args.out_path + ".run.json");

  std::cout << "predict: " << examples.size() << " rows -> " << args.out_path
            << "\n";
  return kExitOk;
}

// --- evaluate --------------------------------------------------------

struct EvaluateArgs {
  CommonOpts common;
  std::string gold_path, pred_path, task, method, out_path;
};

int cmd_evaluate(const EvaluateArgs& args) {
  Taxonomy taxonomy = resolve_taxonomy(args.common);
  auto gold_rows = load_labeled(args.gold_path, taxonomy);

  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::string>> gold;  // id, label
  if (args.task == "a") {
    classes = Taxonomy::binary_labels();
    for (const auto& ex : gold_rows)
      if (ex.label_binary) gold.emplace_back(ex.id, *ex.label_binary);
  } else if (args.task == "b") {
    classes = taxonomy.categories();
    for (const auto& ex : gold_rows)
      if (ex.label_category) gold.emplace_back(ex.id, *ex.label_category);
  } else if (args.task == "c") {
    classes = taxonomy.vector_names();
    for (const auto& ex : gold_rows)
      if (ex.label_vector) gold.emplace_back(ex.id, *ex.label_vector);
  } else {
    throw ConfigError("unknown task: " + args.task);
  }
  if (gold.empty())
    throw DataError("evaluate: no gold labels for task " + args.task +
                    " in " + args.gold_path);

  auto pred_csv = csv::read_file(args.pred_path);
  if (pred_csv.empty() ||
      pred_csv[0].fields != std::vector<std::string>{"id", "predicted_label"})
    throw DataError(args.pred_path + ": expected header id,predicted_label");
  std::map<std::string, std::string> pred_by_id;
  for (std::size_t r = 1; r < pred_csv.size(); ++r) {
    const auto& row = pred_csv[r];
    if (row.fields.size() != 2)
      throw DataError(args.pred_path + ": line " + std::to_string(row.line) +
                      ": expected 2 fields");
    if (!pred_by_id.emplace(row.fields[0], row.fields[1]).second)
      throw DataError(args.pred_path + ": duplicate id " + row.fields[0]);
  }
  if (pred_by_id.size() != gold.size())
    throw DataError("evaluate: " + std::to_string(gold.size()) +
                    " gold labels but " + std::to_string(pred_by_id.size()) +
                    " predictions");
  std::vector<std::string> gold_labels, pred_labels;
  for (const auto& [id, label] : gold) {
    auto it = pred_by_id.find(id);
    if (it == pred_by_id.end())
      throw DataError("evaluate: no prediction for id " + id);
    gold_labels.push_back(label);
    pred_labels.push_back(it->second);
  }

  EvalReport report = evaluate(gold_labels, pred_labels, classes,
                               args.task == "a"   ? "A"
                               : args.task == "b" ? "B"
                                                  : "C",
                               args.method);
  std::cout << "task " << report.task << " (" << report.method
            << ") macro F1: " << f1_text(report.macro_f1) << "\n";
  for (const auto& s : report.per_class)
    std::cout << "  " << s.name << ": P " << f1_text(s.precision) << ", R "
              << f1_text(s.recall) << ", F1 " << f1_text(s.f1) << ", n "
              << s.support << "\n";
  if (!args.out_path.empty()) {
    ensure_parent_dir(args.out_path);
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw DataError("cannot write report: " + args.out_path);
    out << report_to_json(report) << '\n';
  }
  return kExitOk;
}

// --- report ----------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out_path, jsonl_path;
};

int cmd_report(const ReportArgs& args) {
  std::vector<EvalReport> runs;
  for (const auto& path : args.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open report: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    runs.push_back(report_from_json(text, path));
  }
  const std::string table = render_report_table(runs);
  std::cout << table;
  if (!args.out_path.empty()) {
    ensure_parent_dir(args.out_path);
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw DataError("cannot write report: " + args.out_path);
    out << table;
  }
  if (!args.jsonl_path.empty()) {
    ensure_parent_dir(args.jsonl_path);
    std::ofstream out(args.jsonl_path, std::ios::binary);
    if (!out) throw DataError("cannot write report: " + args.jsonl_path);
    out << render_report_jsonl(runs);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"hiercls: hierarchical text classification pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from an INI config file");

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand(
      "split", "Carve a stratified dev set out of the official train file");
  add_common(split_cmd, split_args.common);
  split_cmd->add_option("--train", split_args.train_path, "Official train file")
      ->required()
      ->check(CLI::ExistingFile);
  split_cmd->add_option("--dev", split_args.dev_path, "Official dev file")
      ->required()
      ->check(CLI::ExistingFile);
  split_cmd->add_option("--seed", split_args.seed, "Split seed")
      ->capture_default_str();
  split_cmd
      ->add_option("--dev-fraction", split_args.dev_fraction,
                   "Fraction of train moved to the new dev set")
      ->capture_default_str();
  split_cmd->add_option("--out", split_args.out_dir, "Output directory")
      ->required();

  StatsArgs stats_args;
  auto* stats_cmd =
      app.add_subcommand("stats", "Print corpus statistics for a data file");
  add_common(stats_cmd, stats_args.common);
  stats_cmd->add_option("--data", stats_args.data_path, "Data file")
      ->required()
      ->check(CLI::ExistingFile);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a task model");
  add_common(train_cmd, train_args.common);
  train_cmd->add_option("--task", train_args.task, "a, b or c")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c"}));
  train_cmd->add_option("--train", train_args.train_path, "Training data")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", train_args.dev_path, "Development data")
      ->check(CLI::ExistingFile);
  train_cmd->add_flag("--conditioned", train_args.conditioned,
                      "Pair each sentence with its parent class (task c)");
  add_train_options(train_cmd, train_args.opts);
  train_cmd->add_option("--out", train_args.out_path, "Model file to write")
      ->required();

  PseudoArgs pseudo_args;
  auto* pseudo_cmd = app.add_subcommand(
      "pseudo-label",
      "Select potentially sexist pool items with the best binary model");
  add_common(pseudo_cmd, pseudo_args.common);
  pseudo_cmd
      ->add_option("--model", pseudo_args.model_paths,
                   "Binary model(s); the one with the best stored dev macro "
                   "F1 is used")
      ->required()
      ->check(CLI::ExistingFile);
  pseudo_cmd->add_option("--pool", pseudo_args.pool_path, "Unlabeled pool")
      ->required()
      ->check(CLI::ExistingFile);
  pseudo_cmd->add_option("--mode", pseudo_args.mode, "argmax or threshold")
      ->capture_default_str();
  pseudo_cmd
      ->add_option("--threshold", pseudo_args.threshold,
                   "p(sexist) cutoff for threshold mode")
      ->capture_default_str();
  pseudo_cmd->add_option("--out", pseudo_args.out_path, "Selected items file")
      ->required();

  AugmentArgs augment_args;
  auto* augment_cmd = app.add_subcommand(
      "augment",
      "Label selected pool items with a category model and mix with "
      "authentic data");
  add_common(augment_cmd, augment_args.common);
  augment_cmd
      ->add_option("--authentic", augment_args.authentic_path,
                   "Authentic labeled data")
      ->required()
      ->check(CLI::ExistingFile);
  augment_cmd
      ->add_option("--selected", augment_args.selected_path,
                   "Pseudo-labeled pool items")
      ->required()
      ->check(CLI::ExistingFile);
  augment_cmd
      ->add_option("--model", augment_args.model_path,
                   "Category model for synthetic labels")
      ->required()
      ->check(CLI::ExistingFile);
  augment_cmd->add_option("--out", augment_args.out_path, "Mixed data file")
      ->required();

  PredictArgs predict_args;
  auto* predict_cmd =
      app.add_subcommand("predict", "Write predictions for a data file");
  add_common(predict_cmd, predict_args.common);
  predict_cmd->add_option("--model", predict_args.model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--data", predict_args.data_path, "Data file")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd
      ->add_option("--category-model", predict_args.category_model_path,
                   "Category model for predicted parents (vector models)")
      ->check(CLI::ExistingFile);
  predict_cmd
      ->add_option("--parent-mode", predict_args.parent_mode,
                   "Parent resolution: auto, gold or predicted")
      ->capture_default_str();
  predict_cmd->add_flag("--mask-to-children", predict_args.mask_to_children,
                        "Restrict vector predictions to the parent's "
                        "children");
  predict_cmd->add_flag(
      "--labeled-only", predict_args.labeled_only,
      "Only predict rows that carry the model's task-level gold label");
  predict_cmd->add_option("--out", predict_args.out_path, "Predictions file")
      ->required();

  EvaluateArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Score predictions against gold labels");
  add_common(eval_cmd, eval_args.common);
  eval_cmd->add_option("--gold", eval_args.gold_path, "Gold data file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", eval_args.pred_path, "Predictions file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--task", eval_args.task, "a, b or c")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c"}));
  eval_cmd->add_option("--method", eval_args.method, "Method label")
      ->required();
  eval_cmd->add_option("--out", eval_args.out_path, "Report JSON file");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand(
      "report", "Render a Task/Method/F1 table from evaluation reports");
  report_cmd->add_option("--in", report_args.inputs, "Report JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report_args.out_path, "Table output file");
  report_cmd->add_option("--jsonl", report_args.jsonl_path,
                         "Machine-readable output file");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (split_cmd->parsed()) return cmd_split(split_args);
    if (stats_cmd->parsed()) return cmd_stats(stats_args);
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (pseudo_cmd->parsed()) return cmd_pseudo_label(pseudo_args);
    if (augment_cmd->parsed()) return cmd_augment(augment_args);
    if (predict_cmd->parsed()) return cmd_predict(predict_args);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_args);
    if (report_cmd->parsed()) return cmd_report(report_args);
    throw InternalError("no subcommand dispatched");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace hiercls
