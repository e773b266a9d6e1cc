// dbtag: annotate text-to-SQL questions with database entities, calibrate
// the annotator against gold labels, and evaluate annotation quality.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "dbtag/dbtag.hpp"

namespace {

using namespace dbtag;

// Exit codes: 0 ok, 1 usage, 2 bad input data, 3 internal invariant failure.
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

DatasetFormat format_from_flag(const std::string& name) {
  auto fmt = parse_dataset_format(name);
  if (!fmt) throw InputError("unknown dataset format: " + name);
  return *fmt;
}

SimilarityConfig config_from_flags(const std::string& measure, double threshold) {
  auto m = parse_measure(measure);
  if (!m) throw InputError("unknown measure: " + measure + " (want jaccard3 or levenshtein)");
  SimilarityConfig cfg{*m, threshold};
  try {
    validate_config(cfg);
  } catch (const InvariantError& e) {
    throw InputError(e.what());
  }
  return cfg;
}

/// stdout unless --out was given.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw InputError("cannot open file for writing: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

SimilarityConfig config_from_calibration_file(const std::string& path) {
  ordered_json root = detail::parse_json(detail::read_file(path), path);
  if (!root.contains("best")) throw InputError(path + ": missing \"best\" object");
  const auto& best = root.at("best");
  auto measure = parse_measure(best.at("measure").get<std::string>());
  if (!measure) throw InputError(path + ": unknown measure in \"best\"");
  double threshold = best.at("threshold").get<double>();
  return config_from_flags(std::string(measure_str(*measure)), threshold);
}

void report_skips(const std::vector<SkipEntry>& skipped, size_t total) {
  for (const SkipEntry& s : skipped)
    std::cerr << "skipped " << s.id << ": " << s.reason << "\n";
  if (!skipped.empty())
    std::cerr << "skipped " << skipped.size() << " of " << total << " records\n";
}

int run_tokenize(const std::string& input, const std::string& format) {
  auto pairs = load_pairs(input, format_from_flag(format));
  for (const RawPair& pair : pairs) {
    NlqDoc doc = tokenize(pair.question);
    ordered_json j;
    j["id"] = pair.id;
    ordered_json tokens = ordered_json::array();
    for (const Token& t : doc.tokens) tokens.push_back(t.text);
    j["tokens"] = std::move(tokens);
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int run_extract(const std::string& input, const std::string& format) {
  auto pairs = load_pairs(input, format_from_flag(format));
  size_t skipped = 0;
  for (const RawPair& pair : pairs) {
    EntitySet entities;
    try {
      entities = sql::extract_entities(sql::parse_sql(pair.sql));
    } catch (const ParseError& e) {
      std::cerr << "skipped " << pair.id << ": " << e.what() << "\n";
      ++skipped;
      continue;
    }
    ordered_json j;
    j["id"] = pair.id;
    ordered_json list = ordered_json::array();
    for (const DbEntity& e : entities) {
      ordered_json je;
      je["text"] = e.text;
      je["type"] = std::string(entity_type_str(e.type));
      list.push_back(std::move(je));
    }
    j["entities"] = std::move(list);
    std::cout << j.dump() << "\n";
  }
  if (skipped > 0) std::cerr << "skipped " << skipped << " of " << pairs.size() << " records\n";
  return 0;
}

int run_annotate(const std::string& input, const std::string& format, const SimilarityConfig& cfg,
                 size_t max_span, unsigned jobs, const std::string& out_path) {
  auto pairs = load_pairs(input, format_from_flag(format));
  AugmentResult result = augment(pairs, cfg, max_span, jobs);
  std::vector<AnnotatedRecord> records;
  records.reserve(result.annotated.size());
  for (const AugmentedPair& p : result.annotated) records.push_back(to_record(p.id, p.result));
  OutputTarget out(out_path);
  write_annotations(records, out.stream());
  report_skips(result.skipped, pairs.size());
  return 0;
}

int run_calibrate(const std::string& gold_path, size_t max_span, const std::string& out_path) {
  auto gold = load_gold(gold_path, /*require_sql=*/true);
  CalibrationReport report = calibrate(gold, max_span);
  OutputTarget out(out_path);
  out.stream() << calibration_to_json(report) << "\n";
  return 0;
}

int run_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& grouping_flag) {
  auto grouping = parse_grouping(grouping_flag);
  if (!grouping) throw InputError("unknown grouping: " + grouping_flag + " (want 4, 3 or 2)");
  auto gold = load_gold(gold_path, /*require_sql=*/false);
  auto preds = read_annotations(pred_path);
  std::unordered_map<std::string, const AnnotatedRecord*> by_id;
  for (const AnnotatedRecord& rec : preds) by_id[rec.id] = &rec;
  std::vector<LabelPair> pairs;
  pairs.reserve(gold.size());
  for (const GoldExample& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw InputError("no prediction for gold id '" + g.id + "'");
    pairs.push_back(LabelPair{g.id, g.labels, it->second->labels});
  }
  std::cout << metrics_to_json(score_corpus(pairs, *grouping)) << "\n";
  return 0;
}

int run_stats(const std::string& input) {
  auto records = read_annotations(input);
  std::cout << format_stats(collect_stats(records));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Database entity annotation toolkit for text-to-SQL datasets"};
  app.require_subcommand(1);

  std::string input, format = "jsonl", out_path, gold_path, pred_path, calibration_path;
  std::string measure = "jaccard3", grouping = "4";
  double threshold = 0.5;
  size_t max_span = dbtag::kDefaultMaxSpanTokens;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* cmd_tokenize = app.add_subcommand("tokenize", "Tokenize questions to JSONL");
  cmd_tokenize->add_option("file", input, "Input dataset")->required();
  cmd_tokenize->add_option("--format", format, "spider|bird|jsonl (default jsonl)");

  auto* cmd_extract = app.add_subcommand("extract", "Extract SQL entities to JSONL");
  cmd_extract->add_option("file", input, "Input dataset")->required();
  cmd_extract->add_option("--format", format, "spider|bird|jsonl (default jsonl)");

  auto* cmd_annotate = app.add_subcommand("annotate", "Annotate questions from their SQL");
  cmd_annotate->add_option("file", input, "Input dataset")->required();
  cmd_annotate->add_option("--format", format, "spider|bird|jsonl (default jsonl)");
  cmd_annotate->add_option("--measure", measure, "jaccard3|levenshtein")->required();
  cmd_annotate->add_option("--threshold", threshold, "similarity threshold in (0,1]")->required();
  cmd_annotate->add_option("--max-span", max_span, "max span length in tokens (default 8)");
  cmd_annotate->add_option("--jobs", jobs, "parallel workers (default: cpu count)");
  cmd_annotate->add_option("--out", out_path, "output path (default stdout)");

  auto* cmd_calibrate = app.add_subcommand("calibrate", "Grid-search measure and threshold");
  cmd_calibrate->add_option("--gold", gold_path, "gold JSONL with tokens/labels/sql")->required();
  cmd_calibrate->add_option("--max-span", max_span, "max span length in tokens (default 8)");
  cmd_calibrate->add_option("--out", out_path, "output path (default stdout)");

  auto* cmd_augment = app.add_subcommand("augment", "Annotate a dataset with a calibrated config");
  cmd_augment->add_option("file", input, "Input dataset")->required();
  cmd_augment->add_option("--format", format, "spider|bird|jsonl (default jsonl)");
  cmd_augment->add_option("--calibration", calibration_path, "calibration report JSON")
      ->required();
  cmd_augment->add_option("--max-span", max_span, "max span length in tokens (default 8)");
  cmd_augment->add_option("--jobs", jobs, "parallel workers (default: cpu count)");
  cmd_augment->add_option("--out", out_path, "output path (default stdout)");

  auto* cmd_eval = app.add_subcommand("eval", "Score predictions against gold labels");
  cmd_eval->add_option("--gold", gold_path, "gold JSONL")->required();
  cmd_eval->add_option("--pred", pred_path, "predicted annotation JSONL")->required();
  cmd_eval->add_option("--grouping", grouping, "4|3|2 (default 4)");

  auto* cmd_stats = app.add_subcommand("stats", "Label distribution of an annotated file");
  cmd_stats->add_option("file", input, "Annotated JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(cmd_tokenize)) return run_tokenize(input, format);
    if (app.got_subcommand(cmd_extract)) return run_extract(input, format);
    if (app.got_subcommand(cmd_annotate))
      return run_annotate(input, format, config_from_flags(measure, threshold), max_span, jobs,
                          out_path);
    if (app.got_subcommand(cmd_calibrate)) return run_calibrate(gold_path, max_span, out_path);
    if (app.got_subcommand(cmd_augment))
      return run_annotate(input, format, config_from_calibration_file(calibration_path), max_span,
                          jobs, out_path);
    if (app.got_subcommand(cmd_eval)) return run_eval(gold_path, pred_path, grouping);
    if (app.got_subcommand(cmd_stats)) return run_stats(input);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const dbtag::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dbtag::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dbtag::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
