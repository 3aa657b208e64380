#include "postmetrics/svr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "postmetrics/error.hpp"

namespace postmetrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_or_zero(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Admissible bias interval [lo, hi] for point i given F_i = y_i - (K beta)_i.
// Bounded coefficients leave one side open.
struct BiasBounds {
  double lo;
  double hi;
};

BiasBounds bias_bounds(double f, double beta, double c, double eps) {
  if (beta >= c) return {-kInf, f - eps};
  if (beta <= -c) return {f + eps, kInf};
  if (beta > 0.0) return {f - eps, f - eps};
  if (beta < 0.0) return {f + eps, f + eps};
  return {f - eps, f + eps};
}

void check_data(const Mat& x, const Vec& y) {
  if (x.rows() != y.size()) throw DimensionError("svr: inputs and targets differ in length");
  if (x.rows() < 2) throw DimensionError("svr: need at least 2 training rows");
}

void check_config(const SvrConfig& c) {
  if (!(c.c > 0.0)) throw ConfigError("svr: C must be > 0");
  if (!(c.epsilon >= 0.0)) throw ConfigError("svr: epsilon must be >= 0");
  if (!(c.gamma > 0.0)) throw ConfigError("svr: gamma must be > 0");
  if (!(c.kkt_tol > 0.0)) throw ConfigError("svr: kkt_tol must be > 0");
}

// Change of the minimization objective W = 1/2 b'Kb + eps|b|_1 - y'b when
// beta_i += t and beta_j -= t.
double pair_delta(double t, double fi, double fj, double eta, double bi, double bj,
                  double eps) {
  return t * (fj - fi) + 0.5 * eta * t * t +
         eps * (std::abs(bi + t) + std::abs(bj - t) - std::abs(bi) - std::abs(bj));
}

}  // namespace

double rbf_kernel(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& z,
                  double gamma) {
  if (x.size() != z.size()) throw DimensionError("rbf_kernel: dimension mismatch");
  if (!(gamma > 0.0)) throw ConfigError("rbf_kernel: gamma must be > 0");
  return std::exp(-gamma * (x - z).squaredNorm());
}

Eigen::MatrixXd rbf_gram(const Mat& x, double gamma) {
  const auto n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = rbf_kernel(x.row(i).transpose(), x.row(j).transpose(), gamma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

double svr_dual_objective(const Eigen::MatrixXd& gram, const Vec& y, const Vec& beta,
                          double epsilon) {
  return -0.5 * beta.dot(gram * beta) - epsilon * beta.lpNorm<1>() + y.dot(beta);
}

double svr_bias(const Eigen::MatrixXd& gram, const Vec& y, const Vec& beta, double c,
                double epsilon) {
  const Vec f = y - gram * beta;
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double max_lo = -kInf;
  double min_hi = kInf;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto b = bias_bounds(f[i], beta[i], c, epsilon);
    max_lo = std::max(max_lo, b.lo);
    min_hi = std::min(min_hi, b.hi);
    if (beta[i] != 0.0 && std::abs(beta[i]) < c) {
      free_sum += f[i] - epsilon * sign_or_zero(beta[i]);
      ++free_count;
    }
  }
  if (free_count > 0) return free_sum / static_cast<double>(free_count);
  if (std::isfinite(max_lo) && std::isfinite(min_hi)) return 0.5 * (max_lo + min_hi);
  return std::isfinite(max_lo) ? max_lo : min_hi;
}

SvrModel make_svr_model(const Mat& x, const Vec& y, const Vec& beta, const SvrConfig& config) {
  check_data(x, y);
  if (beta.size() != y.size()) throw DimensionError("svr: beta has wrong length");
  const Eigen::MatrixXd gram = rbf_gram(x, config.gamma);

  SvrModel model;
  model.config = config;
  model.beta0 = svr_bias(gram, y, beta, config.c, config.epsilon);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (std::abs(beta[i]) > 1e-12) keep.push_back(i);
  }
  model.support_inputs.resize(static_cast<Eigen::Index>(keep.size()), x.cols());
  model.beta.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    model.support_inputs.row(row) = x.row(keep[k]);
    model.beta[row] = beta[keep[k]];
    model.support_indices.push_back(static_cast<std::size_t>(keep[k]));
  }
  return model;
}

SvrModel train_svr(const Mat& x, const Vec& y, const SvrConfig& config) {
  check_data(x, y);
  check_config(config);

  const Eigen::Index n = x.rows();
  const double c = config.c;
  const double eps = config.epsilon;
  const Eigen::MatrixXd k = rbf_gram(x, config.gamma);

  Vec beta = Vec::Zero(n);
  Vec f = y;  // y - K beta
  std::vector<double> trace;
  double objective = 0.0;  // minimization form W(beta)

  // One pass is n pairwise updates.
  const std::size_t per_pass = static_cast<std::size_t>(n);
  const std::size_t budget = config.max_passes > SIZE_MAX / per_pass ? SIZE_MAX
                                                                        : config.max_passes * per_pass;
  std::size_t iter = 0;
  double gap = 0.0;
  bool converged = false;
  for (;;) {
    // Maximal violating pair: i raises beta, j lowers it.
    Eigen::Index i = -1;
    Eigen::Index j = -1;
    double max_lo = -kInf;
    double min_hi = kInf;
    for (Eigen::Index t = 0; t < n; ++t) {
      const auto b = bias_bounds(f[t], beta[t], c, eps);
      if (beta[t] < c && b.lo > max_lo) {
        max_lo = b.lo;
        i = t;
      }
      if (beta[t] > -c && b.hi < min_hi) {
        min_hi = b.hi;
        j = t;
      }
    }
    gap = max_lo - min_hi;
    if (gap <= config.kkt_tol || i < 0 || j < 0 || i == j) {
      converged = true;
      break;
    }
    if (iter >= budget) break;
    ++iter;

    const double bi = beta[i];
    const double bj = beta[j];
    const double eta = std::max(k(i, i) + k(j, j) - 2.0 * k(i, j), 0.0);
    const double lo = std::max(-c - bi, bj - c);
    const double hi = std::min(c - bi, bj + c);

    // Exact minimization of a convex piecewise quadratic over [lo, hi]:
    // the optimum sits at an end, a kink, or a stationary point of a piece.
    enum class Kind { kZero, kLo, kHi, kKinkI, kKinkJ, kFree };
    struct Candidate {
      double t;
      Kind kind;
    };
    std::array<Candidate, 9> cands{};
    std::size_t count = 0;
    cands[count++] = {0.0, Kind::kZero};
    cands[count++] = {lo, Kind::kLo};
    cands[count++] = {hi, Kind::kHi};
    if (-bi > lo && -bi < hi) cands[count++] = {-bi, Kind::kKinkI};
    if (bj > lo && bj < hi) cands[count++] = {bj, Kind::kKinkJ};
    if (eta > 1e-12) {
      for (const double si : {-1.0, 1.0}) {
        for (const double sj : {-1.0, 1.0}) {
          const double t = (f[i] - f[j] - eps * (si - sj)) / eta;
          if (t > lo && t < hi) cands[count++] = {t, Kind::kFree};
        }
      }
    }
    Candidate best = cands[0];
    double best_delta = 0.0;
    for (std::size_t q = 1; q < count; ++q) {
      const double delta = pair_delta(cands[q].t, f[i], f[j], eta, bi, bj, eps);
      if (delta < best_delta - 1e-15 * (1.0 + std::abs(objective))) {
        best_delta = delta;
        best = cands[q];
      }
    }
    if (best.kind == Kind::kZero) {
      // The gain is below what objective differences can resolve. The slope
      // at t = 0+ is -gap, so step along the first piece directly.
      double limit = hi;
      Kind kind = Kind::kHi;
      if (-bi > 0.0 && -bi < limit) {
        limit = -bi;
        kind = Kind::kKinkI;
      }
      if (bj > 0.0 && bj < limit) {
        limit = bj;
        kind = Kind::kKinkJ;
      }
      double t = limit;
      if (eta > 1e-12 && gap / eta < limit) {
        t = gap / eta;
        kind = Kind::kFree;
      }
      if (!(t > 0.0)) break;
      best = {t, kind};
      best_delta = pair_delta(t, f[i], f[j], eta, bi, bj, eps);
    }

    const double sum = bi + bj;
    double ni = 0.0;
    double nj = 0.0;
    switch (best.kind) {
      case Kind::kLo:
        if (-c - bi >= bj - c) {
          ni = -c;
          nj = sum + c;
        } else {
          nj = c;
          ni = sum - c;
        }
        break;
      case Kind::kHi:
        if (c - bi <= bj + c) {
          ni = c;
          nj = sum - c;
        } else {
          nj = -c;
          ni = sum + c;
        }
        break;
      case Kind::kKinkI:
        ni = 0.0;
        nj = sum;
        break;
      case Kind::kKinkJ:
        nj = 0.0;
        ni = sum;
        break;
      default:
        ni = bi + best.t;
        nj = sum - ni;
        break;
    }
    ni = std::clamp(ni, -c, c);
    nj = std::clamp(nj, -c, c);

    const double di = ni - bi;
    const double dj = nj - bj;
    beta[i] = ni;
    beta[j] = nj;
    f.noalias() -= di * k.col(i) + dj * k.col(j);
    objective += best_delta;

    if (config.record_objective) {
      // From the maintained residuals: W = 1/2 b'(y - F) + eps|b|_1 - y'b.
      const double w = 0.5 * beta.dot(y - f) + eps * beta.lpNorm<1>() - y.dot(beta);
      trace.push_back(-w);
    }
  }

  SvrModel model = make_svr_model(x, y, beta, config);
  model.converged = converged;
  model.iterations = iter;
  model.final_gap = gap;
  model.objective_trace = std::move(trace);
  return model;
}

SvrModel train_svr(const Dataset& train, Target target, const SvrConfig& config) {
  return train_svr(train.features, train.target(target), config);
}

double svr_decision(const SvrModel& model, const Eigen::Ref<const Vec>& x) {
  if (model.support_count() > 0 && x.size() != model.support_inputs.cols()) {
    throw DimensionError("svr: input dimension mismatch");
  }
  double f = model.beta0;
  for (Eigen::Index i = 0; i < model.support_inputs.rows(); ++i) {
    f += model.beta[i] * rbf_kernel(model.support_inputs.row(i).transpose(), x,
                                    model.config.gamma);
  }
  return f;
}

double predict_svr(const SvrModel& model, const Eigen::Ref<const Vec>& x) {
  return std::clamp(svr_decision(model, x), 0.0, 1.0);
}

Vec predict_svr_rows(const SvrModel& model, const Mat& x) {
  Vec out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = predict_svr(model, x.row(i).transpose());
  return out;
}

KktReport check_kkt(const SvrModel& model, const Mat& x, const Vec& y) {
  if (x.rows() != y.size()) throw DimensionError("check_kkt: inputs and targets differ");
  Vec beta = Vec::Zero(y.size());
  for (std::size_t k = 0; k < model.support_indices.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(model.support_indices[k]);
    if (row >= y.size()) throw DimensionError("check_kkt: support index out of range");
    beta[row] = model.beta[static_cast<Eigen::Index>(k)];
  }

  const double c = model.config.c;
  const double eps = model.config.epsilon;
  const double bound = c * (1.0 - 1e-12);
  KktReport report;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = y[i] - svr_decision(model, x.row(i).transpose());
    const double b = beta[i];
    double v = 0.0;
    if (b == 0.0) {
      v = std::max(std::abs(r) - eps, 0.0);
    } else if (b >= bound) {
      v = std::max(eps - r, 0.0);
    } else if (b <= -bound) {
      v = std::max(r + eps, 0.0);
    } else if (b > 0.0) {
      v = std::abs(r - eps);
    } else {
      v = std::abs(r + eps);
    }
    report.max_violation = std::max(report.max_violation, v);
    if (v > model.config.kkt_tol) ++report.violating_count;
  }
  return report;
}

KktReport check_kkt(const SvrModel& model, const Dataset& train, Target target) {
  return check_kkt(model, train.features, train.target(target));
}

}  // namespace postmetrics
