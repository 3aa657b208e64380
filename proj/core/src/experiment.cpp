#include "postmetrics/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "postmetrics/error.hpp"
#include "postmetrics/serialization.hpp"
#include "text.hpp"

namespace postmetrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> successful(const std::vector<SeedResult>& seeds, bool test) {
  std::vector<double> out;
  for (const auto& s : seeds) {
    if (s.ok) out.push_back(test ? s.test_mse : s.train_mse);
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Per-cell stream so every (model, target) job draws from its own seed.
std::uint64_t cell_seed(std::uint64_t seed, ModelKind kind, Target target) {
  const auto stream = 16 * static_cast<std::uint64_t>(kind) + static_cast<std::uint64_t>(target);
  return derive_seed(seed, stream);
}

}  // namespace

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::kSvr: return "svr";
    case ModelKind::kEsn: return "esn";
    case ModelKind::kAnfis: return "anfis";
    case ModelKind::kBaseline: return "baseline";
  }
  return {};
}

std::string_view model_label(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::kSvr: return "SVR";
    case ModelKind::kEsn: return "ESN";
    case ModelKind::kAnfis: return "ANFIS";
    case ModelKind::kBaseline: return "Baseline (train mean)";
  }
  return {};
}

std::optional<ModelKind> parse_model(std::string_view name) noexcept {
  for (const ModelKind k : {ModelKind::kSvr, ModelKind::kEsn, ModelKind::kAnfis,
                            ModelKind::kBaseline}) {
    if (name == model_name(k)) return k;
  }
  return std::nullopt;
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) throw DimensionError("mse: length mismatch");
  if (predictions.empty()) throw DimensionError("mse: empty input");
  double sum = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    const double e = predictions[t] - targets[t];
    sum += e * e;
  }
  return sum / static_cast<double>(predictions.size());
}

double mse(const Vec& predictions, const Vec& targets) {
  return mse(std::span<const double>(predictions.data(), static_cast<std::size_t>(predictions.size())),
             std::span<const double>(targets.data(), static_cast<std::size_t>(targets.size())));
}

CellOutcome run_cell(ModelKind kind, Target target, const Dataset& train, const Dataset& test,
                     const RunConfig& config, std::uint64_t seed) {
  const Vec y_train = train.target(target);
  const Vec y_test = test.target(target);
  CellOutcome out;
  switch (kind) {
    case ModelKind::kEsn: {
      EsnConfig ec = config.esn;
      ec.seed = cell_seed(seed, kind, target);
      EsnModel model = train_readout(init_esn(train.features.cols(), ec), train.features, y_train);
      const Vec fitted =
          readout(model, run_reservoir(model, train.features)).cwiseMax(0.0).cwiseMin(1.0);
      out.train_mse = mse(fitted, y_train);
      out.test_mse = mse(predict_esn(model, test.features), y_test);
      out.model = std::move(model);
      break;
    }
    case ModelKind::kSvr: {
      SvrModel model = train_svr(train.features, y_train, config.svr);
      out.train_mse = mse(predict_svr_rows(model, train.features), y_train);
      out.test_mse = mse(predict_svr_rows(model, test.features), y_test);
      out.model = std::move(model);
      break;
    }
    case ModelKind::kAnfis: {
      const std::vector<std::pair<double, double>> ranges(
          static_cast<std::size_t>(train.features.cols()), {0.0, 1.0});
      AnfisTrainResult r = train_hybrid(init_anfis(ranges, config.anfis), train.features,
                                        y_train, config.anfis.epochs);
      out.train_mse = mse(predict_anfis_rows(r.model, train.features), y_train);
      out.test_mse = mse(predict_anfis_rows(r.model, test.features), y_test);
      out.model = std::move(r.model);
      break;
    }
    case ModelKind::kBaseline: {
      const double mean = y_train.mean();
      out.train_mse = mse(Vec::Constant(y_train.size(), mean), y_train);
      out.test_mse = mse(Vec::Constant(y_test.size(), mean), y_test);
      out.model = mean;
      break;
    }
  }
  return out;
}

std::string model_json(const TrainedModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, double>) {
          return "{\n \"model\": \"baseline\",\n \"mean\": " + detail::format_sig(m, 9) + "\n}\n";
        } else {
          return to_json(m);
        }
      },
      model);
}

bool CellReport::failed() const noexcept {
  return std::any_of(seeds.begin(), seeds.end(), [](const SeedResult& s) { return !s.ok; });
}

std::string CellReport::first_error() const {
  for (const auto& s : seeds) {
    if (!s.ok) return s.error;
  }
  return {};
}

double CellReport::train_mse_median() const { return median_of(successful(seeds, false)); }

double CellReport::test_mse_mean() const {
  const auto v = successful(seeds, true);
  if (v.empty()) return kNaN;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double CellReport::test_mse_median() const { return median_of(successful(seeds, true)); }

double CellReport::test_mse_min() const {
  const auto v = successful(seeds, true);
  return v.empty() ? kNaN : *std::min_element(v.begin(), v.end());
}

double CellReport::test_mse_max() const {
  const auto v = successful(seeds, true);
  return v.empty() ? kNaN : *std::max_element(v.begin(), v.end());
}

const CellReport* EvalReport::find(ModelKind model, Target target) const noexcept {
  for (const auto& c : cells) {
    if (c.model == model && c.target == target) return &c;
  }
  return nullptr;
}

EvalReport run_experiment(const RunConfig& config) {
  validate(config);
  const EncodedTable table = encode_features(load_raw(config.data_path));
  return run_experiment(config, table);
}

EvalReport run_experiment(const RunConfig& config, const EncodedTable& table) {
  validate(config);
  EvalReport report;
  report.seeds = config.seeds;
  report.split = config.split;
  report.rows_used = static_cast<std::size_t>(table.features.rows());
  report.rows_dropped = table.dropped_rows.size();
  report.config_digest = config_digest(config);

  std::vector<ModelKind> kinds = config.models;
  kinds.push_back(ModelKind::kBaseline);
  for (const ModelKind kind : kinds) {
    for (const Target target : config.targets) {
      report.cells.push_back(CellReport{kind, target, {}});
    }
  }

  for (const std::uint64_t seed : config.seeds) {
    SplitSpec spec = config.split;
    spec.seed = seed;
    std::optional<std::pair<Dataset, Dataset>> sets;
    std::string split_error;
    try {
      sets = prepare_split(table, spec);
    } catch (const std::exception& e) {
      split_error = e.what();
    }
    for (auto& cell : report.cells) {
      SeedResult r;
      r.seed = seed;
      if (!sets) {
        r.error = split_error;
        cell.seeds.push_back(std::move(r));
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        const CellOutcome o = run_cell(cell.model, cell.target, sets->first, sets->second,
                                       config, seed);
        r.ok = true;
        r.train_mse = o.train_mse;
        r.test_mse = o.test_mse;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      report.timings.push_back({cell.model, cell.target, seed, elapsed.count()});
      cell.seeds.push_back(std::move(r));
    }
  }
  return report;
}

}  // namespace postmetrics
