#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "postmetrics/anfis.hpp"
#include "postmetrics/data_pipeline.hpp"
#include "postmetrics/esn.hpp"
#include "postmetrics/svr.hpp"

namespace postmetrics {

enum class ModelKind { kSvr, kEsn, kAnfis, kBaseline };

/// Report row order: SVR, ESN, ANFIS.
inline constexpr std::array<ModelKind, 3> kAllModels = {ModelKind::kSvr, ModelKind::kEsn,
                                                        ModelKind::kAnfis};

std::string_view model_name(ModelKind kind) noexcept;  // "svr", "esn", ...
std::string_view model_label(ModelKind kind) noexcept; // "SVR", "ESN", ...
std::optional<ModelKind> parse_model(std::string_view name) noexcept;

/// Environment variable that overrides RunConfig::output_dir.
inline constexpr const char* kOutputDirEnv = "POSTBENCH_OUTPUT_DIR";

struct RunConfig {
  std::filesystem::path data_path = "data/dataset_Facebook.csv";
  std::filesystem::path output_dir = "postbench-out";
  SplitSpec split;
  EsnConfig esn;
  SvrConfig svr;
  AnfisSettings anfis;
  std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
  std::vector<Target> targets{kAllTargets.begin(), kAllTargets.end()};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  // Single-cell selection for `postbench train`.
  ModelKind train_model = ModelKind::kEsn;
  Target train_target = Target::kShares;
};

/// Parses the INI-style run configuration. Relative paths are resolved
/// against `base_dir`. Unknown sections or keys are rejected.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies kOutputDirEnv when it is set and nonempty.
void apply_environment(RunConfig& config);

/// Validates the invariants of a RunConfig; throws ConfigError.
void validate(const RunConfig& config);

/// Canonical text form (fixed key order, every field) and its FNV-1a digest.
std::string canonical_config(const RunConfig& config);
std::uint64_t config_digest(const RunConfig& config);

/// Mean squared error (1/T) sum (yhat - y)^2.
double mse(std::span<const double> predictions, std::span<const double> targets);
double mse(const Vec& predictions, const Vec& targets);

using TrainedModel = std::variant<EsnModel, SvrModel, AnfisModel, double>;

struct CellOutcome {
  TrainedModel model;
  double train_mse = 0.0;
  double test_mse = 0.0;
};

/// Trains one model on one target and scores it on both sets. `seed` feeds
/// the model's own randomness (ESN reservoir) through derive_seed. The
/// baseline predicts the training mean.
CellOutcome run_cell(ModelKind kind, Target target, const Dataset& train, const Dataset& test,
                     const RunConfig& config, std::uint64_t seed);

std::string model_json(const TrainedModel& model);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double train_mse = 0.0;
  double test_mse = 0.0;
};

struct CellReport {
  ModelKind model = ModelKind::kSvr;
  Target target = Target::kComments;
  std::vector<SeedResult> seeds;

  bool failed() const noexcept;
  std::string first_error() const;
  /// Aggregates over seeds that succeeded; NaN when none did.
  double train_mse_median() const;
  double test_mse_mean() const;
  double test_mse_median() const;
  double test_mse_min() const;
  double test_mse_max() const;
};

struct CellTiming {
  ModelKind model;
  Target target;
  std::uint64_t seed;
  double seconds;
};

struct EvalReport {
  std::vector<CellReport> cells;  // requested models x targets, then baselines
  std::vector<std::uint64_t> seeds;
  SplitSpec split;
  std::size_t rows_used = 0;
  std::size_t rows_dropped = 0;
  std::uint64_t config_digest = 0;
  /// Wall-clock per (model, target, seed); kept out of the deterministic
  /// report files.
  std::vector<CellTiming> timings;

  const CellReport* find(ModelKind model, Target target) const noexcept;
};

/// Loads the configured file and runs every (seed, model, target) cell plus
/// the constant-mean baseline per target. A failing cell records its error
/// and the remaining cells still run.
EvalReport run_experiment(const RunConfig& config);
EvalReport run_experiment(const RunConfig& config, const EncodedTable& table);

enum class ReportFormat { kCsv, kMarkdown, kJson };

void write_report(std::ostream& out, const EvalReport& report, ReportFormat format);
void write_timings(std::ostream& out, const EvalReport& report);

/// Writes report.{csv,md,json} into `dir` (created if needed) and returns
/// the path of the requested format.
std::filesystem::path emit_report(const EvalReport& report, ReportFormat format,
                                  const std::filesystem::path& dir);

}  // namespace postmetrics
