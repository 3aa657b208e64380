#pragma once

#include <cstddef>
#include <cstdint>

#include "postmetrics/numerics.hpp"

namespace postmetrics {

struct EsnConfig {
  std::size_t reservoir_size = 25;
  double spectral_radius = 0.5;
  double input_scale = 1.0;
  std::size_t washout = 10;
  double ridge_lambda = 1e-6;
  std::uint64_t seed = 0;
};

/// Echo state network with a fixed random reservoir and a linear readout on
/// [1, s(t)].
struct EsnModel {
  Mat w_in;          // d x p
  Mat w_r;           // d x d, rescaled to the configured spectral radius
  Vec w_out;         // d + 1, bias first
  Vec final_train_state;
  EsnConfig config;
  bool trained = false;

  std::size_t reservoir_size() const noexcept { return static_cast<std::size_t>(w_r.rows()); }
  std::size_t input_size() const noexcept { return static_cast<std::size_t>(w_in.cols()); }
};

/// Draws input weights uniform in [-input_scale, input_scale] and reservoir
/// weights uniform in [-1, 1], then rescales the reservoir so its spectral
/// radius equals config.spectral_radius. A degenerate draw is retried with
/// the next values of the same stream.
EsnModel init_esn(std::size_t input_size, const EsnConfig& config);

/// States s(t) = tanh(W_r s(t-1) + W_in x(t)) for each input row, starting
/// from s0. Returns a T x d matrix, one state per row.
Mat run_reservoir(const EsnModel& model, const Mat& inputs, const Vec& s0);
Mat run_reservoir(const EsnModel& model, const Mat& inputs);

/// Design matrix [1, s(t)] for the states kept after washout.
Mat readout_design(const Mat& states, std::size_t washout);

/// Runs the reservoir from the zero state over the training rows, drops the
/// first `washout` states and fits the readout by ridge regression.
EsnModel train_readout(EsnModel model, const Mat& inputs, const Vec& targets);

/// Readout applied to states already computed, without clipping.
Vec readout(const EsnModel& model, const Mat& states);

/// Continues the reservoir from the final training state across `inputs` in
/// order; predictions are clipped to [0, 1].
Vec predict_esn(const EsnModel& model, const Mat& inputs);

}  // namespace postmetrics
