#include "postmetrics/anfis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "postmetrics/error.hpp"

namespace postmetrics {

namespace {

double log_mf(double x, const GaussianMf& mf) noexcept {
  const double z = (x - mf.center) / mf.width;
  return -0.5 * z * z;
}

// Log firing strengths of all rules, lexicographic with the last input
// varying fastest.
void log_firing(const AnfisModel& model, const Eigen::Ref<const Vec>& x, Vec& out) {
  const auto& mfs = model.mfs();
  const std::size_t m = model.mfs_per_input();
  out.resize(static_cast<Eigen::Index>(model.rule_count()));
  out[0] = 0.0;
  std::size_t len = 1;
  for (std::size_t i = 0; i < mfs.size(); ++i) {
    // Expand in place from the back so entries are not overwritten early.
    for (std::size_t r = len; r-- > 0;) {
      const double base = out[static_cast<Eigen::Index>(r)];
      for (std::size_t k = m; k-- > 0;) {
        out[static_cast<Eigen::Index>(r * m + k)] = base + log_mf(x[static_cast<Eigen::Index>(i)], mfs[i][k]);
      }
    }
    len *= m;
  }
}

void normalize_log(const Vec& logw, Vec& normalized) {
  const double top = logw.maxCoeff();
  normalized = (logw.array() - top).exp();
  normalized /= normalized.sum();
}

void check_input(const AnfisModel& model, Eigen::Index size) {
  if (static_cast<std::size_t>(size) != model.input_count()) {
    std::ostringstream msg;
    msg << "anfis: input has " << size << " values, model expects " << model.input_count();
    throw DimensionError(msg.str());
  }
}

}  // namespace

double gaussian_mf(double x, const GaussianMf& mf) noexcept {
  return std::exp(log_mf(x, mf));
}

AnfisModel::AnfisModel(std::vector<std::vector<GaussianMf>> mfs, AnfisSettings settings)
    : mfs_(std::move(mfs)), settings_(settings) {
  if (mfs_.empty()) throw ConfigError("anfis: need at least one input");
  const std::size_t m = mfs_.front().size();
  if (m == 0) throw ConfigError("anfis: need at least one membership function per input");
  for (const auto& row : mfs_) {
    if (row.size() != m) throw ConfigError("anfis: every input needs the same MF count");
    for (const auto& mf : row) {
      if (!(mf.width >= kMinMfWidth) || !std::isfinite(mf.center)) {
        throw ConfigError("anfis: membership width below floor or non-finite center");
      }
    }
  }
  std::size_t rules = 1;
  strides_.assign(mfs_.size(), 1);
  for (std::size_t i = mfs_.size(); i-- > 0;) {
    strides_[i] = rules;
    rules *= m;
  }
  consequents_ = Vec::Zero(static_cast<Eigen::Index>(rules));
}

std::size_t AnfisModel::rule_mf(std::size_t rule, std::size_t input) const {
  return (rule / strides_.at(input)) % mfs_per_input();
}

bool operator==(const AnfisModel& a, const AnfisModel& b) {
  if (a.mfs_.size() != b.mfs_.size()) return false;
  for (std::size_t i = 0; i < a.mfs_.size(); ++i) {
    if (a.mfs_[i].size() != b.mfs_[i].size()) return false;
    for (std::size_t k = 0; k < a.mfs_[i].size(); ++k) {
      if (a.mfs_[i][k].center != b.mfs_[i][k].center ||
          a.mfs_[i][k].width != b.mfs_[i][k].width) {
        return false;
      }
    }
  }
  return a.consequents_.size() == b.consequents_.size() && a.consequents_ == b.consequents_;
}

AnfisModel init_anfis(const std::vector<std::pair<double, double>>& input_ranges,
                      const AnfisSettings& settings) {
  if (input_ranges.empty()) throw ConfigError("anfis: need at least one input range");
  const std::size_t m = settings.mfs_per_input;
  if (m == 0) throw ConfigError("anfis: mfs_per_input must be >= 1");

  std::vector<std::vector<GaussianMf>> mfs;
  for (const auto& [lo, hi] : input_ranges) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      std::ostringstream msg;
      msg << "anfis: invalid input range [" << lo << ", " << hi << "]";
      throw ConfigError(msg.str());
    }
    std::vector<GaussianMf> row(m);
    if (m == 1) {
      row[0] = {0.5 * (lo + hi), hi - lo > 0 ? 0.5 * (hi - lo) : 1.0};
    } else {
      const double step = (hi - lo) / static_cast<double>(m - 1);
      const double sigma = std::max((hi - lo) / (2.0 * static_cast<double>(m - 1)), kMinMfWidth);
      for (std::size_t k = 0; k < m; ++k) {
        row[k] = {k + 1 == m ? hi : lo + step * static_cast<double>(k), sigma};
      }
    }
    mfs.push_back(std::move(row));
  }
  return AnfisModel(std::move(mfs), settings);
}

ForwardTrace forward(const AnfisModel& model, const Eigen::Ref<const Vec>& x) {
  check_input(model, x.size());
  ForwardTrace trace;
  const std::size_t n_in = model.input_count();
  const std::size_t m = model.mfs_per_input();
  trace.memberships.resize(static_cast<Eigen::Index>(n_in), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n_in; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      trace.memberships(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          gaussian_mf(x[static_cast<Eigen::Index>(i)], model.mfs()[i][k]);
    }
  }
  Vec logw;
  log_firing(model, x, logw);
  trace.firing = logw.array().exp();
  normalize_log(logw, trace.normalized);
  trace.rule_outputs = trace.normalized.cwiseProduct(model.consequents());
  trace.output = trace.rule_outputs.sum();
  return trace;
}

Mat normalized_firing(const AnfisModel& model, const Mat& x) {
  check_input(model, x.cols());
  Mat phi(x.rows(), static_cast<Eigen::Index>(model.rule_count()));
  Vec logw;
  Vec wbar;
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    log_firing(model, x.row(t).transpose(), logw);
    normalize_log(logw, wbar);
    phi.row(t) = wbar.transpose();
  }
  return phi;
}

Vec anfis_outputs(const AnfisModel& model, const Mat& x) {
  return normalized_firing(model, x) * model.consequents();
}

double anfis_mse(const AnfisModel& model, const Mat& x, const Vec& y) {
  if (x.rows() != y.size() || y.size() == 0) {
    throw DimensionError("anfis: inputs and targets differ in length or are empty");
  }
  return (anfis_outputs(model, x) - y).squaredNorm() / static_cast<double>(y.size());
}

AnfisModel lse_consequents(AnfisModel model, const Mat& x, const Vec& y) {
  if (x.rows() == 0) throw DimensionError("anfis: empty batch");
  if (x.rows() != y.size()) throw DimensionError("anfis: inputs and targets differ in length");
  const Mat phi = normalized_firing(model, x);
  model.consequents() = ridge_solve(phi, y, model.settings().lse_lambda);
  return model;
}

PremiseGradient premise_gradient(const AnfisModel& model, const Mat& x, const Vec& y) {
  check_input(model, x.cols());
  if (x.rows() == 0 || x.rows() != y.size()) {
    throw DimensionError("anfis: inputs and targets differ in length or are empty");
  }
  const std::size_t n_in = model.input_count();
  const std::size_t m = model.mfs_per_input();
  const std::size_t rules = model.rule_count();
  const Vec& q = model.consequents();

  PremiseGradient grad;
  grad.values.assign(n_in, std::vector<std::pair<double, double>>(m, {0.0, 0.0}));
  std::vector<double> s(n_in * m);
  Vec logw;
  Vec wbar;
  const double scale = 2.0 / static_cast<double>(x.rows());
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    log_firing(model, x.row(t).transpose(), logw);
    normalize_log(logw, wbar);
    const double out = wbar.dot(q);
    const double err = out - y[t];

    // d out / d log w_r = wbar_r (q_r - out); summed per (input, mf).
    std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t r = 0; r < rules; ++r) {
      const double contrib = wbar[static_cast<Eigen::Index>(r)] * (q[static_cast<Eigen::Index>(r)] - out);
      for (std::size_t i = 0; i < n_in; ++i) s[i * m + model.rule_mf(r, i)] += contrib;
    }
    for (std::size_t i = 0; i < n_in; ++i) {
      const double xi = x(t, static_cast<Eigen::Index>(i));
      for (std::size_t k = 0; k < m; ++k) {
        const auto& mf = model.mfs()[i][k];
        const double diff = xi - mf.center;
        const double s2 = mf.width * mf.width;
        const double common = scale * err * s[i * m + k];
        grad.values[i][k].first += common * diff / s2;
        grad.values[i][k].second += common * diff * diff / (s2 * mf.width);
      }
    }
  }
  return grad;
}

AnfisModel premise_gradient_step(AnfisModel model, const Mat& x, const Vec& y, double lr) {
  const PremiseGradient grad = premise_gradient(model, x, y);
  for (std::size_t i = 0; i < grad.values.size(); ++i) {
    for (std::size_t k = 0; k < grad.values[i].size(); ++k) {
      const auto [dc, ds] = grad.values[i][k];
      if (!std::isfinite(dc) || !std::isfinite(ds)) {
        std::ostringstream msg;
        msg << "anfis: non-finite premise gradient at input " << i << ", mf " << k
            << (std::isfinite(dc) ? " (width)" : " (center)");
        throw NumericalError(msg.str());
      }
      auto& mf = model.mfs()[i][k];
      mf.center -= lr * dc;
      mf.width = std::max(mf.width - lr * ds, kMinMfWidth);
    }
  }
  return model;
}

AnfisTrainResult train_hybrid(AnfisModel model, const Mat& x, const Vec& y,
                              std::size_t epochs) {
  if (x.rows() == 0) throw DimensionError("anfis: empty training set");
  AnfisTrainResult result;
  for (std::size_t e = 0; e < epochs; ++e) {
    model = lse_consequents(std::move(model), x, y);
    model = premise_gradient_step(std::move(model), x, y, model.settings().lr);
    result.epoch_mse.push_back(anfis_mse(model, x, y));
  }
  result.model = std::move(model);
  return result;
}

double predict_anfis(const AnfisModel& model, const Eigen::Ref<const Vec>& x) {
  return std::clamp(forward(model, x).output, 0.0, 1.0);
}

Vec predict_anfis_rows(const AnfisModel& model, const Mat& x) {
  return anfis_outputs(model, x).cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace postmetrics
