#pragma once

#include <cstddef>
#include <vector>

#include "postmetrics/data_pipeline.hpp"
#include "postmetrics/numerics.hpp"

namespace postmetrics {

struct SvrConfig {
  double c = 1000.0;
  double epsilon = 0.1;
  double gamma = 0.1;
  double kkt_tol = 1e-3;
  /// Update budget in passes; one pass is as many pairwise updates as there
  /// are training points.
  std::size_t max_passes = 10'000;
  /// Keep the dual objective after every pairwise update (for diagnostics).
  bool record_objective = false;
};

/// Epsilon-SVR with an RBF kernel, f(x) = beta0 + sum_i beta_i K(x_i, x).
struct SvrModel {
  Mat support_inputs;  // q x p
  std::vector<std::size_t> support_indices;  // training rows of the support vectors
  Vec beta;            // q, beta_i = alpha_i - alpha_i*
  double beta0 = 0.0;
  SvrConfig config;

  bool converged = false;
  std::size_t iterations = 0;  // pairwise updates performed
  /// max_i lo_i - min_i hi_i over the per-point bias intervals at exit.
  double final_gap = 0.0;
  /// Dual objective (maximization form) after each update, if recorded.
  std::vector<double> objective_trace;

  std::size_t support_count() const noexcept {
    return static_cast<std::size_t>(support_inputs.rows());
  }
};

double rbf_kernel(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& z, double gamma);

/// Full Gram matrix K_ij = exp(-gamma |x_i - x_j|^2) over the rows of x.
Eigen::MatrixXd rbf_gram(const Mat& x, double gamma);

/// Dual objective -1/2 b'Kb - eps |b|_1 + y'b for a full coefficient vector.
double svr_dual_objective(const Eigen::MatrixXd& gram, const Vec& y, const Vec& beta,
                          double epsilon);

/// Bias for given coefficients: mean of the equality conditions at unbounded
/// support vectors, else the midpoint of the feasible bias interval.
double svr_bias(const Eigen::MatrixXd& gram, const Vec& y, const Vec& beta, double c,
                double epsilon);

/// Pairwise (SMO-style) solver on the reduced coefficients beta in [-C, C]
/// with sum(beta) = 0. Each step picks the maximal violating pair and
/// minimizes the dual exactly along the pair direction. The returned model
/// carries converged = false when max_passes ran out first.
SvrModel train_svr(const Mat& x, const Vec& y, const SvrConfig& config);
SvrModel train_svr(const Dataset& train, Target target, const SvrConfig& config);

/// Builds a model from explicit full-length coefficients (zero entries are
/// pruned). Bias is derived with svr_bias.
SvrModel make_svr_model(const Mat& x, const Vec& y, const Vec& beta, const SvrConfig& config);

/// Raw decision value, no clipping.
double svr_decision(const SvrModel& model, const Eigen::Ref<const Vec>& x);

/// Decision value clipped to [0, 1].
double predict_svr(const SvrModel& model, const Eigen::Ref<const Vec>& x);
/// Clipped predictions for every row of x.
Vec predict_svr_rows(const SvrModel& model, const Mat& x);

struct KktReport {
  double max_violation = 0.0;
  std::size_t violating_count = 0;  // points whose violation exceeds kkt_tol
};

/// Checks the epsilon-insensitive optimality conditions of `model` on the
/// data it was trained on, using the model's own bias. Rows not listed in
/// support_indices count as beta = 0.
KktReport check_kkt(const SvrModel& model, const Mat& x, const Vec& y);
KktReport check_kkt(const SvrModel& model, const Dataset& train, Target target);

}  // namespace postmetrics
