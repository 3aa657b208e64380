#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "postmetrics/data_pipeline.hpp"
#include "postmetrics/error.hpp"
#include "postmetrics/experiment.hpp"

namespace postbench {

namespace pm = postmetrics;

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

pm::RunConfig config_from(const std::string& path) {
  pm::RunConfig config = path.empty() ? pm::RunConfig{} : pm::load_run_config(path);
  pm::apply_environment(config);
  pm::validate(config);
  return config;
}

struct StatRow {
  const char* name;
  double pm::ColumnStats::*field;
};

constexpr StatRow kStatRows[] = {
    {"mean", &pm::ColumnStats::mean},       {"median", &pm::ColumnStats::median},
    {"mode", &pm::ColumnStats::mode},       {"std_dev", &pm::ColumnStats::std_dev},
    {"max", &pm::ColumnStats::max},         {"min", &pm::ColumnStats::min},
};

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const pm::RawTable raw = pm::load_raw(path);
  const auto& published = pm::published_target_stats();

  out << "rows: " << raw.rows.size() << '\n';
  out << std::left << std::setw(10) << "target" << std::setw(9) << "stat" << std::setw(14)
      << "computed" << std::setw(8) << "rounded" << std::setw(10) << "published"
      << "status\n";
  std::size_t mismatches = 0;
  for (const pm::Target t : pm::kAllTargets) {
    const pm::ColumnStats s = pm::summary_stats(pm::numeric_column(raw, pm::target_column(t)));
    const pm::ColumnStats& ref = published[static_cast<std::size_t>(t)];
    for (const auto& row : kStatRows) {
      const double value = s.*row.field;
      const double rounded = std::round(value);
      const bool match = rounded == ref.*row.field;
      mismatches += match ? 0 : 1;
      out << std::setw(10) << pm::target_name(t) << std::setw(9) << row.name << std::setw(14)
          << fmt(value, 8) << std::setw(8) << fmt(rounded, 8) << std::setw(10)
          << fmt(ref.*row.field, 8) << (match ? "MATCH" : "MISMATCH") << '\n';
    }
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  out << (mismatches == 0 ? "all 18 cells match" : std::to_string(mismatches) + " of 18 cells differ")
      << " (" << fmt(elapsed.count(), 3) << " s)\n";
  return mismatches == 0 ? kOk : kMismatch;
}

int cmd_stats(const std::string& path, const std::vector<std::string>& columns,
              std::ostream& out) {
  const pm::RawTable raw = pm::load_raw(path);
  std::vector<std::string> names = columns;
  if (names.empty()) {
    for (const pm::Target t : pm::kAllTargets) names.emplace_back(pm::target_column(t));
  }
  out << "column,count,mean,median,mode,std_dev,max,min\n";
  for (const auto& name : names) {
    const auto values = pm::numeric_column(raw, name);
    if (values.empty()) throw pm::DataError("column '" + name + "' has no values");
    const pm::ColumnStats s = pm::summary_stats(values);
    out << name << ',' << values.size();
    for (const auto& row : kStatRows) out << ',' << fmt(s.*row.field);
    out << '\n';
  }
  return kOk;
}

int cmd_train(const pm::RunConfig& config, std::ostream& out) {
  const std::uint64_t seed = config.seeds.front();
  const pm::EncodedTable table = pm::encode_features(pm::load_raw(config.data_path));
  pm::SplitSpec spec = config.split;
  spec.seed = seed;
  const auto [train, test] = pm::prepare_split(table, spec);
  const pm::CellOutcome outcome =
      pm::run_cell(config.train_model, config.train_target, train, test, config, seed);

  std::filesystem::create_directories(config.output_dir);
  const auto path = config.output_dir / (std::string(pm::model_name(config.train_model)) + "_" +
                                         std::string(pm::target_name(config.train_target)) +
                                         "_seed" + std::to_string(seed) + ".json");
  std::ofstream file(path, std::ios::binary);
  file << pm::model_json(outcome.model);
  if (!file) throw pm::Error("cannot write '" + path.string() + "'");

  out << pm::model_label(config.train_model) << ' ' << pm::target_name(config.train_target)
      << " seed " << seed << ": train_mse " << fmt(outcome.train_mse) << ", test_mse "
      << fmt(outcome.test_mse) << '\n'
      << "model written to " << path.string() << '\n';
  return kOk;
}

int cmd_reproduce(const pm::RunConfig& config, pm::ReportFormat format, std::ostream& out) {
  const pm::EvalReport report = pm::run_experiment(config);
  const auto path = pm::emit_report(report, format, config.output_dir);
  pm::write_report(out, report, pm::ReportFormat::kMarkdown);
  out << "\nreports written to " << config.output_dir.string() << " (" << path.filename().string()
      << " requested)\n";
  const bool any_failed = std::any_of(report.cells.begin(), report.cells.end(),
                                      [](const pm::CellReport& c) { return c.failed(); });
  return any_failed ? kFailure : kOk;
}

int cmd_dump(const pm::RunConfig& config, std::uint64_t seed, const std::string& target,
             std::ostream& out) {
  const pm::EncodedTable table = pm::encode_features(pm::load_raw(config.data_path));
  pm::SplitSpec spec = config.split;
  spec.seed = seed;
  const auto [train, test] = pm::prepare_split(table, spec);
  if (target.empty() || target == "-") {
    pm::write_dataset_csv(out, train);
    pm::write_dataset_csv(out, test);
    return kOk;
  }
  std::ofstream file(target, std::ios::binary);
  pm::write_dataset_csv(file, train);
  pm::write_dataset_csv(file, test);
  if (!file) throw pm::Error("cannot write '" + target + "'");
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark of ESN, SVR and ANFIS regressors on Facebook post metrics", "postbench"};
  app.require_subcommand(1);

  std::string data_path;
  std::string config_path;
  std::string format_name = "csv";
  std::string output_dir;
  std::string dump_target;
  std::vector<std::string> columns;
  std::uint64_t dump_seed = 1;

  auto* validate = app.add_subcommand("validate-data", "Check outcome statistics against the published table");
  validate->add_option("path", data_path, "Semicolon-delimited dataset file")->required();

  auto* stats = app.add_subcommand("stats", "Print summary statistics of raw columns");
  stats->add_option("path", data_path, "Semicolon-delimited dataset file")->required();
  stats->add_option("-c,--column", columns, "Column name (repeatable; default: outcomes)");

  auto* train = app.add_subcommand("train", "Train one model on one target and dump it as JSON");
  train->add_option("config", config_path, "Run configuration (INI)");
  train->add_option("-o,--output-dir", output_dir, "Override output directory");

  auto* reproduce = app.add_subcommand("reproduce", "Run every model x target x seed and write reports");
  reproduce->add_option("config", config_path, "Run configuration (INI)");
  reproduce->add_option("-f,--format", format_name, "Report to announce: csv, markdown or json")
      ->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
  reproduce->add_option("-o,--output-dir", output_dir, "Override output directory");

  auto* dump = app.add_subcommand("dump-dataset", "Write the scaled train and test rows as CSV");
  dump->add_option("config", config_path, "Run configuration (INI)");
  dump->add_option("-s,--seed", dump_seed, "Split seed");
  dump->add_option("--out", dump_target, "Output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(data_path, out);
    if (*stats) return cmd_stats(data_path, columns, out);

    pm::RunConfig config = config_from(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (*train) return cmd_train(config, out);
    if (*dump) return cmd_dump(config, dump_seed, dump_target, out);
    if (*reproduce) {
      const pm::ReportFormat format = format_name == "json"  ? pm::ReportFormat::kJson
                                      : format_name == "csv" ? pm::ReportFormat::kCsv
                                                             : pm::ReportFormat::kMarkdown;
      return cmd_reproduce(config, format, out);
    }
  } catch (const pm::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  err << app.help();
  return kUsage;
}

}  // namespace postbench
