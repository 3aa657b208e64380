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
#include <utility>
#include <vector>

#include "postmetrics/numerics.hpp"

namespace postmetrics {

// Column layout of the UCI "Facebook metrics" file.
inline constexpr std::size_t kRawColumnCount = 19;
inline constexpr std::size_t kFeatureCount = 7;
inline constexpr std::size_t kTargetCount = 3;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureColumns = {
    "Page total likes", "Type", "Category", "Post Month",
    "Post Weekday", "Post Hour", "Paid"};

/// Post categories in the order of their integer codes (alphabetical).
inline constexpr std::array<std::string_view, 4> kPostTypes = {"Link", "Photo", "Status",
                                                               "Video"};

enum class Target : std::size_t { kComments = 0, kLikes = 1, kShares = 2 };

inline constexpr std::array<Target, kTargetCount> kAllTargets = {
    Target::kComments, Target::kLikes, Target::kShares};

/// Raw column name in the CSV ("comment", "like", "share").
std::string_view target_column(Target t) noexcept;
/// Lower-case report name ("comments", "likes", "shares").
std::string_view target_name(Target t) noexcept;
std::optional<Target> parse_target(std::string_view name) noexcept;

/// Semicolon-delimited table exactly as read, no type coercion.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::filesystem::path source_path;

  /// Index of a header column; throws DataError when absent.
  std::size_t column_index(std::string_view name) const;
};

/// Reads a semicolon-delimited CSV with a header row. Empty trailing lines
/// are ignored and CRLF line endings are accepted. A data row whose field
/// count differs from the header raises DataError("row N: expected K columns").
RawTable load_raw(const std::filesystem::path& path);
RawTable parse_raw(std::istream& in, std::filesystem::path source = {});

/// Numeric view of the table before scaling.
struct EncodedTable {
  Mat features;                          // T x 7, raw units, Type integer-coded
  Mat targets;                           // T x 3, comments/likes/shares
  std::vector<std::size_t> row_ids;      // 0-based data row index in the file
  std::vector<std::size_t> dropped_rows; // rows with a missing feature or target
};

EncodedTable encode_features(const RawTable& raw);

/// Min-max parameters for one block of columns.
struct ScalerParams {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t columns() const noexcept { return min.size(); }
  bool is_constant(std::size_t column) const { return max.at(column) == min.at(column); }
};

ScalerParams fit_scaler(const Mat& matrix);

/// Maps each entry to (v - min) / (max - min) clipped to [0, 1]; constant
/// columns map to 0.
Mat apply_scaler(const Mat& matrix, const ScalerParams& params);

/// Inverse map v * (max - min) + min, without clipping.
Mat invert_scaler(const Mat& scaled, const ScalerParams& params);

struct DatasetScaler {
  ScalerParams features;
  ScalerParams targets;
};

/// Scaled, model-ready data. All entries lie in [0, 1].
struct Dataset {
  Mat features;  // T x 7
  Mat targets;   // T x 3
  DatasetScaler scaler;
  std::vector<std::size_t> row_ids;

  std::size_t size() const noexcept { return static_cast<std::size_t>(features.rows()); }
  Vec target(Target t) const { return targets.col(static_cast<Eigen::Index>(t)); }
};

struct SplitSpec {
  std::size_t n_train = 400;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Train/test positions over T rows. With shuffle, a Fisher-Yates
/// permutation from Rng(spec.seed) is drawn and its first n_train entries
/// form the training set.
SplitIndices make_split(std::size_t row_count, const SplitSpec& spec);

/// Scales every row of `table` with parameters fitted on `fit_rows` only.
Dataset build_dataset(const EncodedTable& table, std::span<const std::size_t> fit_rows);

/// Row subset of a dataset, preserving the given order.
Dataset select_rows(const Dataset& dataset, std::span<const std::size_t> rows);

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

/// The usual path from an encoded table to scaled train/test sets: split
/// positions from `spec`, scaler fitted on the training rows.
std::pair<Dataset, Dataset> prepare_split(const EncodedTable& table, const SplitSpec& spec);

struct ColumnStats {
  double mean = 0;
  double median = 0;
  double mode = 0;
  double std_dev = 0;
  double max = 0;
  double min = 0;
};

/// Mean, lower median, smallest mode, sample standard deviation, extremes.
ColumnStats summary_stats(std::span<const double> column);

/// Non-missing numeric values of a raw column, in file order.
std::vector<double> numeric_column(const RawTable& raw, std::string_view name);

/// Integer-rounded summary statistics published for the three outcome
/// columns of the dataset, in kAllTargets order.
const std::array<ColumnStats, kTargetCount>& published_target_stats() noexcept;

/// Canonical CSV dump (row_id, features, targets; 9 significant digits).
void write_dataset_csv(std::ostream& out, const Dataset& dataset);

}  // namespace postmetrics
