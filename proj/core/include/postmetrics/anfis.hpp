#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "postmetrics/numerics.hpp"

namespace postmetrics {

inline constexpr double kMinMfWidth = 1e-3;

struct GaussianMf {
  double center = 0.0;
  double width = 1.0;  // sigma
};

/// exp(-(x - c)^2 / (2 sigma^2)).
double gaussian_mf(double x, const GaussianMf& mf) noexcept;

struct AnfisSettings {
  std::size_t mfs_per_input = 3;
  double lr = 0.01;
  double lse_lambda = 1e-6;
  std::size_t epochs = 2;
};

/// Zero-order Sugeno system over a full grid partition. Rule r combines one
/// membership function per input; rules are enumerated lexicographically
/// with the last input varying fastest and are never stored explicitly.
class AnfisModel {
 public:
  AnfisModel() = default;
  AnfisModel(std::vector<std::vector<GaussianMf>> mfs, AnfisSettings settings);

  std::size_t input_count() const noexcept { return mfs_.size(); }
  std::size_t mfs_per_input() const noexcept { return mfs_.empty() ? 0 : mfs_.front().size(); }
  std::size_t rule_count() const noexcept { return static_cast<std::size_t>(consequents_.size()); }

  /// MF index used by `rule` for `input`.
  std::size_t rule_mf(std::size_t rule, std::size_t input) const;

  const std::vector<std::vector<GaussianMf>>& mfs() const noexcept { return mfs_; }
  std::vector<std::vector<GaussianMf>>& mfs() noexcept { return mfs_; }
  const Vec& consequents() const noexcept { return consequents_; }
  Vec& consequents() noexcept { return consequents_; }
  const AnfisSettings& settings() const noexcept { return settings_; }
  AnfisSettings& settings() noexcept { return settings_; }

  friend bool operator==(const AnfisModel& a, const AnfisModel& b);

 private:
  std::vector<std::vector<GaussianMf>> mfs_;  // [input][mf]
  Vec consequents_;
  AnfisSettings settings_;
  std::vector<std::size_t> strides_;
};

/// Layer-by-layer values for a single input vector.
struct ForwardTrace {
  Mat memberships;       // inputs x mfs, layer 1
  Vec firing;            // layer 2, product t-norm (may underflow to 0)
  Vec normalized;        // layer 3
  Vec rule_outputs;      // layer 4, normalized * consequent
  double output = 0.0;   // layer 5
};

/// Evenly spaced centers over each [lo, hi] (lo, mid, hi for three MFs)
/// with sigma = (hi - lo) / (2 (m - 1)); a single MF sits at the midpoint
/// with sigma = (hi - lo) / 2. Consequents start at zero.
AnfisModel init_anfis(const std::vector<std::pair<double, double>>& input_ranges,
                      const AnfisSettings& settings = {});

/// Full five-layer pass. Firing strengths are normalized in the log domain,
/// so layer 3 stays well defined when products underflow.
ForwardTrace forward(const AnfisModel& model, const Eigen::Ref<const Vec>& x);

/// Normalized firing strengths for every row of x (n x rules).
Mat normalized_firing(const AnfisModel& model, const Mat& x);

/// Layer-5 outputs for every row, unclipped.
Vec anfis_outputs(const AnfisModel& model, const Mat& x);

double anfis_mse(const AnfisModel& model, const Mat& x, const Vec& y);

/// Least-squares half of hybrid learning: consequents become the ridge
/// solution on the normalized firing matrix. Premises are untouched.
AnfisModel lse_consequents(AnfisModel model, const Mat& x, const Vec& y);

/// Gradient of the batch MSE with respect to every premise parameter, laid
/// out as [input][mf] pairs (d/d center, d/d sigma).
struct PremiseGradient {
  std::vector<std::vector<std::pair<double, double>>> values;
};
PremiseGradient premise_gradient(const AnfisModel& model, const Mat& x, const Vec& y);

/// Backward half: one full-batch gradient step on all centers and widths,
/// then widths are floored at kMinMfWidth.
AnfisModel premise_gradient_step(AnfisModel model, const Mat& x, const Vec& y, double lr);

struct AnfisTrainResult {
  AnfisModel model;
  std::vector<double> epoch_mse;  // training MSE at the end of each epoch
};

/// Per epoch: consequent LSE on the full batch, then one premise step.
AnfisTrainResult train_hybrid(AnfisModel model, const Mat& x, const Vec& y,
                              std::size_t epochs);

/// Layer-5 output clipped to [0, 1].
double predict_anfis(const AnfisModel& model, const Eigen::Ref<const Vec>& x);
Vec predict_anfis_rows(const AnfisModel& model, const Mat& x);

}  // namespace postmetrics
