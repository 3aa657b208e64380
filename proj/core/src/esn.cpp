#include "postmetrics/esn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "postmetrics/error.hpp"

namespace postmetrics {

namespace {

constexpr int kMaxReservoirDraws = 16;

void check_config(const EsnConfig& c) {
  if (c.reservoir_size < 1) throw ConfigError("esn: reservoir_size must be >= 1");
  if (!(c.spectral_radius > 0.0)) throw ConfigError("esn: spectral_radius must be > 0");
  if (!(c.input_scale >= 0.0)) throw ConfigError("esn: input_scale must be >= 0");
  if (!(c.ridge_lambda >= 0.0)) throw ConfigError("esn: ridge_lambda must be >= 0");
}

}  // namespace

EsnModel init_esn(std::size_t input_size, const EsnConfig& config) {
  if (input_size < 1) throw ConfigError("esn: input size must be >= 1");
  check_config(config);

  const auto d = static_cast<Eigen::Index>(config.reservoir_size);
  const auto p = static_cast<Eigen::Index>(input_size);
  Rng rng(config.seed);

  EsnModel model;
  model.config = config;
  model.w_in.resize(d, p);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      model.w_in(i, j) = config.input_scale > 0.0
                             ? rng.uniform(-config.input_scale, config.input_scale)
                             : 0.0;
    }
  }

  Mat raw(d, d);
  for (int attempt = 0; attempt < kMaxReservoirDraws; ++attempt) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) raw(i, j) = rng.uniform(-1.0, 1.0);
    }
    PowerIterationOptions opts;
    opts.seed = derive_seed(config.seed, static_cast<std::uint64_t>(attempt));
    double radius = 0.0;
    try {
      radius = spectral_radius(raw, opts);
    } catch (const ConvergenceError&) {
      continue;
    }
    if (radius < 1e-12) continue;
    model.w_r = raw * (config.spectral_radius / radius);
    model.w_out = Vec::Zero(d + 1);
    model.final_train_state = Vec::Zero(d);
    return model;
  }
  throw NumericalError("esn: could not draw a non-degenerate reservoir");
}

Mat run_reservoir(const EsnModel& model, const Mat& inputs, const Vec& s0) {
  const auto d = model.w_r.rows();
  if (inputs.cols() != model.w_in.cols()) {
    std::ostringstream msg;
    msg << "esn: inputs have " << inputs.cols() << " columns, model expects "
        << model.w_in.cols();
    throw DimensionError(msg.str());
  }
  if (s0.size() != d) throw DimensionError("esn: initial state has wrong size");
  if (!s0.allFinite()) throw NumericalError("esn: initial state is not finite");

  Mat states(inputs.rows(), d);
  Vec s = s0;
  for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
    const Vec pre = model.w_r * s + model.w_in * inputs.row(t).transpose();
    s = pre.array().tanh();
    states.row(t) = s.transpose();
  }
  return states;
}

Mat run_reservoir(const EsnModel& model, const Mat& inputs) {
  return run_reservoir(model, inputs, Vec::Zero(model.w_r.rows()));
}

Mat readout_design(const Mat& states, std::size_t washout) {
  const auto skip = static_cast<Eigen::Index>(washout);
  if (skip >= states.rows()) throw DimensionError("esn: washout leaves no states");
  const auto n = states.rows() - skip;
  Mat design(n, states.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(states.cols()) = states.bottomRows(n);
  return design;
}

EsnModel train_readout(EsnModel model, const Mat& inputs, const Vec& targets) {
  if (inputs.rows() != targets.size()) {
    throw DimensionError("esn: inputs and targets differ in length");
  }
  if (static_cast<std::size_t>(inputs.rows()) <= model.config.washout) {
    throw DimensionError("esn: training set must be longer than the washout");
  }
  const Mat states = run_reservoir(model, inputs);
  const Mat design = readout_design(states, model.config.washout);
  const Vec y = targets.tail(design.rows());
  model.w_out = ridge_solve(design, y, model.config.ridge_lambda);
  model.final_train_state = states.row(states.rows() - 1).transpose();
  model.trained = true;
  return model;
}

Vec readout(const EsnModel& model, const Mat& states) {
  return (states * model.w_out.tail(states.cols())).array() + model.w_out[0];
}

Vec predict_esn(const EsnModel& model, const Mat& inputs) {
  if (!model.trained) throw Error("esn: model is not trained");
  const Mat states = run_reservoir(model, inputs, model.final_train_state);
  Vec y = readout(model, states);
  return y.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace postmetrics
