#include "postmetrics/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "postmetrics/error.hpp"
#include "text.hpp"

namespace postmetrics {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(';', start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_missing(std::string_view cell) { return detail::trim(cell).empty(); }

double encode_type(std::string_view label, std::size_t row) {
  const auto trimmed = detail::trim(label);
  for (std::size_t code = 0; code < kPostTypes.size(); ++code) {
    if (kPostTypes[code] == trimmed) return static_cast<double>(code);
  }
  std::ostringstream msg;
  msg << "row " << row + 1 << ": unknown post Type label '" << trimmed << "'";
  throw DataError(msg.str());
}

double parse_cell(const RawTable& raw, std::size_t row, std::size_t col) {
  const auto value = detail::parse_double(raw.rows[row][col]);
  if (!value) {
    std::ostringstream msg;
    msg << "row " << row + 1 << ", column '" << raw.header[col]
        << "': non-numeric value '" << raw.rows[row][col] << "'";
    throw DataError(msg.str());
  }
  return *value;
}

}  // namespace

std::string_view target_column(Target t) noexcept {
  switch (t) {
    case Target::kComments: return "comment";
    case Target::kLikes: return "like";
    case Target::kShares: return "share";
  }
  return {};
}

std::string_view target_name(Target t) noexcept {
  switch (t) {
    case Target::kComments: return "comments";
    case Target::kLikes: return "likes";
    case Target::kShares: return "shares";
  }
  return {};
}

std::optional<Target> parse_target(std::string_view name) noexcept {
  for (const Target t : kAllTargets) {
    if (name == target_name(t) || name == target_column(t)) return t;
  }
  return std::nullopt;
}

std::size_t RawTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (detail::trim(header[i]) == name) return i;
  }
  throw DataError("missing column '" + std::string(name) + "'");
}

RawTable parse_raw(std::istream& in, std::filesystem::path source) {
  RawTable table;
  table.source_path = std::move(source);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // A UTF-8 byte order mark would otherwise stick to the first column name.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  table.header = split_fields(line);

  std::vector<std::string> pending_blank;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    if (line.empty()) {
      pending_blank.push_back(line);
      continue;
    }
    if (!pending_blank.empty()) {
      std::ostringstream msg;
      msg << "row " << table.rows.size() + 1 << ": expected "
          << table.header.size() << " columns";
      throw DataError(msg.str());
    }
    auto fields = split_fields(line);
    if (fields.size() != table.header.size()) {
      std::ostringstream msg;
      msg << "row " << table.rows.size() + 1 << ": expected "
          << table.header.size() << " columns, found " << fields.size();
      throw DataError(msg.str());
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

RawTable load_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");
  return parse_raw(in, path);
}

EncodedTable encode_features(const RawTable& raw) {
  std::array<std::size_t, kFeatureCount> feature_cols{};
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    feature_cols[j] = raw.column_index(kFeatureColumns[j]);
  }
  std::array<std::size_t, kTargetCount> target_cols{};
  for (std::size_t k = 0; k < kTargetCount; ++k) {
    target_cols[k] = raw.column_index(target_column(kAllTargets[k]));
  }
  const std::size_t type_col = raw.column_index("Type");

  EncodedTable out;
  std::vector<std::array<double, kFeatureCount>> feats;
  std::vector<std::array<double, kTargetCount>> targs;
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    const bool missing =
        std::any_of(feature_cols.begin(), feature_cols.end(),
                    [&](std::size_t c) { return is_missing(row[c]); }) ||
        std::any_of(target_cols.begin(), target_cols.end(),
                    [&](std::size_t c) { return is_missing(row[c]); });
    if (missing) {
      out.dropped_rows.push_back(r);
      continue;
    }
    std::array<double, kFeatureCount> f{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const std::size_t c = feature_cols[j];
      f[j] = c == type_col ? encode_type(row[c], r) : parse_cell(raw, r, c);
    }
    std::array<double, kTargetCount> t{};
    for (std::size_t k = 0; k < kTargetCount; ++k) t[k] = parse_cell(raw, r, target_cols[k]);
    feats.push_back(f);
    targs.push_back(t);
    out.row_ids.push_back(r);
  }

  const auto n = static_cast<Eigen::Index>(feats.size());
  out.features.resize(n, kFeatureCount);
  out.targets.resize(n, kTargetCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      out.features(i, static_cast<Eigen::Index>(j)) = feats[static_cast<std::size_t>(i)][j];
    }
    for (std::size_t k = 0; k < kTargetCount; ++k) {
      out.targets(i, static_cast<Eigen::Index>(k)) = targs[static_cast<std::size_t>(i)][k];
    }
  }
  return out;
}

ScalerParams fit_scaler(const Mat& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw DimensionError("fit_scaler: matrix must be nonempty");
  }
  ScalerParams p;
  p.min.resize(static_cast<std::size_t>(matrix.cols()));
  p.max.resize(static_cast<std::size_t>(matrix.cols()));
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    p.min[static_cast<std::size_t>(j)] = matrix.col(j).minCoeff();
    p.max[static_cast<std::size_t>(j)] = matrix.col(j).maxCoeff();
  }
  return p;
}

Mat apply_scaler(const Mat& matrix, const ScalerParams& params) {
  if (static_cast<std::size_t>(matrix.cols()) != params.columns()) {
    std::ostringstream msg;
    msg << "apply_scaler: matrix has " << matrix.cols() << " columns, scaler has "
        << params.columns();
    throw DimensionError(msg.str());
  }
  Mat out(matrix.rows(), matrix.cols());
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    const auto c = static_cast<std::size_t>(j);
    const double lo = params.min[c];
    const double span = params.max[c] - lo;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
      out(i, j) = span > 0.0 ? std::clamp((matrix(i, j) - lo) / span, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

Mat invert_scaler(const Mat& scaled, const ScalerParams& params) {
  if (static_cast<std::size_t>(scaled.cols()) != params.columns()) {
    throw DimensionError("invert_scaler: column count mismatch");
  }
  Mat out(scaled.rows(), scaled.cols());
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const auto c = static_cast<std::size_t>(j);
    out.col(j) = scaled.col(j).array() * (params.max[c] - params.min[c]) + params.min[c];
  }
  return out;
}

SplitIndices make_split(std::size_t row_count, const SplitSpec& spec) {
  if (spec.n_train == 0 || spec.n_train >= row_count) {
    std::ostringstream msg;
    msg << "split: n_train must satisfy 0 < n_train < T (n_train=" << spec.n_train
        << ", T=" << row_count << ")";
    throw DataError(msg.str());
  }
  std::vector<std::size_t> order(row_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.shuffle) {
    Rng rng(spec.seed);
    for (std::size_t i = row_count - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_index(i + 1));
      std::swap(order[i], order[j]);
    }
  }
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(spec.n_train), order.end());
  return out;
}

namespace {

Mat take_rows(const Mat& m, std::span<const std::size_t> rows) {
  Mat out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= static_cast<std::size_t>(m.rows())) {
      throw DimensionError("row index out of range");
    }
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace

Dataset build_dataset(const EncodedTable& table, std::span<const std::size_t> fit_rows) {
  if (fit_rows.empty()) throw DataError("build_dataset: no rows to fit the scaler on");
  Dataset ds;
  ds.scaler.features = fit_scaler(take_rows(table.features, fit_rows));
  ds.scaler.targets = fit_scaler(take_rows(table.targets, fit_rows));
  ds.features = apply_scaler(table.features, ds.scaler.features);
  ds.targets = apply_scaler(table.targets, ds.scaler.targets);
  ds.row_ids = table.row_ids;
  return ds;
}

Dataset select_rows(const Dataset& dataset, std::span<const std::size_t> rows) {
  Dataset out;
  out.features = take_rows(dataset.features, rows);
  out.targets = take_rows(dataset.targets, rows);
  out.scaler = dataset.scaler;
  out.row_ids.reserve(rows.size());
  for (const std::size_t r : rows) out.row_ids.push_back(dataset.row_ids.at(r));
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
  const SplitIndices idx = make_split(dataset.size(), spec);
  return {select_rows(dataset, idx.train), select_rows(dataset, idx.test)};
}

std::pair<Dataset, Dataset> prepare_split(const EncodedTable& table, const SplitSpec& spec) {
  const SplitIndices idx = make_split(static_cast<std::size_t>(table.features.rows()), spec);
  const Dataset full = build_dataset(table, idx.train);
  return {select_rows(full, idx.train), select_rows(full, idx.test)};
}

ColumnStats summary_stats(std::span<const double> column) {
  if (column.empty()) throw DataError("summary_stats: empty column");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  ColumnStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = sorted[(n - 1) / 2];
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);

  double ss = 0.0;
  for (const double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.std_dev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

  // Runs in sorted order; strict '>' keeps the smallest value among ties.
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    if (j - i > best_run) {
      best_run = j - i;
      s.mode = sorted[i];
    }
    i = j;
  }
  return s;
}

std::vector<double> numeric_column(const RawTable& raw, std::string_view name) {
  const std::size_t col = raw.column_index(name);
  std::vector<double> values;
  values.reserve(raw.rows.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    if (is_missing(raw.rows[r][col])) continue;
    values.push_back(parse_cell(raw, r, col));
  }
  return values;
}

const std::array<ColumnStats, kTargetCount>& published_target_stats() noexcept {
  // mean, median, mode, std_dev, max, min
  static const std::array<ColumnStats, kTargetCount> stats = {{
      {7, 3, 0, 21, 372, 0},
      {178, 101, 98, 323, 5172, 0},
      {27, 19, 13, 43, 790, 0},
  }};
  return stats;
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
  out << "row_id";
  for (const auto name : kFeatureColumns) out << ',' << name;
  for (const Target t : kAllTargets) out << ',' << target_name(t);
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out << dataset.row_ids[i];
    for (Eigen::Index j = 0; j < dataset.features.cols(); ++j) {
      out << ',' << detail::format_sig(dataset.features(r, j), 9);
    }
    for (Eigen::Index k = 0; k < dataset.targets.cols(); ++k) {
      out << ',' << detail::format_sig(dataset.targets(r, k), 9);
    }
    out << '\n';
  }
}

}  // namespace postmetrics
