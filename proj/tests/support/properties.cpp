#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "postmetrics/anfis.hpp"
#include "postmetrics/data_pipeline.hpp"
#include "postmetrics/error.hpp"
#include "postmetrics/esn.hpp"
#include "postmetrics/experiment.hpp"
#include "postmetrics/svr.hpp"
#include "surrogate.hpp"

#ifndef POSTMETRICS_DEFAULT_DATA_FILE
#define POSTMETRICS_DEFAULT_DATA_FILE ""
#endif

namespace props {

using namespace postmetrics;

Mat random_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

Vec random_vec(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

std::size_t random_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform_index(hi - lo + 1));
}

std::optional<std::string> dataset_path() {
  std::string path = POSTMETRICS_DEFAULT_DATA_FILE;
  if (const char* env = std::getenv("POSTMETRICS_DATA_FILE"); env != nullptr && *env != '\0') {
    path = env;
  }
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  return path;
}

namespace {

std::string str(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

bool same_bytes(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

EncodedTable surrogate_table() {
  std::istringstream in(surrogate::csv());
  return encode_features(parse_raw(in, "surrogate.csv"));
}

// ---- data_pipeline ---------------------------------------------------------

Outcome scaler_round_trip() {
  Outcome out;
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial, ++out.cases) {
    const auto rows = static_cast<Eigen::Index>(random_between(rng, 1, 40));
    const auto cols = static_cast<Eigen::Index>(random_between(rng, 1, 7));
    const double scale = std::pow(10.0, rng.uniform(-3.0, 4.0));
    const double offset = rng.uniform(-1e4, 1e4);
    Mat raw = random_mat(rng, rows, cols, offset - scale, offset + scale);
    if (trial % 5 == 0) raw.col(0).setConstant(offset);
    const ScalerParams p = fit_scaler(raw);
    const Mat back = invert_scaler(apply_scaler(raw, p), p);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double err = std::abs(back(i, j) - raw(i, j));
        if (err > 1e-9 * std::max(1.0, std::abs(raw(i, j)))) {
          out.fail("trial " + std::to_string(trial) + ": round-trip error " + str(err));
          return out;
        }
      }
    }
  }
  return out;
}

Outcome split_partition() {
  Outcome out;
  Rng rng(202);
  for (int trial = 0; trial < 300; ++trial, ++out.cases) {
    const std::size_t rows = random_between(rng, 2, 600);
    SplitSpec spec;
    spec.n_train = random_between(rng, 1, rows - 1);
    spec.seed = rng.next_u64();
    spec.shuffle = rng.uniform01() < 0.8;
    const SplitIndices s = make_split(rows, spec);
    if (s.train.size() != spec.n_train || s.test.size() != rows - spec.n_train) {
      out.fail("sizes differ from (n_train, T - n_train)");
      return out;
    }
    std::vector<char> seen(rows, 0);
    for (const auto* part : {&s.train, &s.test}) {
      for (const std::size_t i : *part) {
        if (i >= rows || seen[i]) {
          out.fail("index repeated or out of range: " + std::to_string(i));
          return out;
        }
        seen[i] = 1;
      }
    }
  }
  return out;
}

Outcome table_one() {
  Outcome out;
  const auto path = dataset_path();
  if (!path) {
    out.skipped = true;
    out.detail = "dataset file not available";
    return out;
  }
  const RawTable raw = load_raw(*path);
  const auto& ref = published_target_stats();
  for (const Target t : kAllTargets) {
    const ColumnStats s = summary_stats(numeric_column(raw, target_column(t)));
    const ColumnStats& r = ref[static_cast<std::size_t>(t)];
    const double got[] = {s.mean, s.median, s.mode, s.std_dev, s.max, s.min};
    const double want[] = {r.mean, r.median, r.mode, r.std_dev, r.max, r.min};
    for (int k = 0; k < 6; ++k, ++out.cases) {
      if (std::round(got[k]) != want[k]) {
        out.fail(std::string(target_name(t)) + " stat " + std::to_string(k) + ": " +
                 str(got[k]) + " vs " + str(want[k]));
      }
    }
  }
  return out;
}

Outcome encode_deterministic() {
  Outcome out;
  const std::string text = surrogate::csv(77);
  std::string dumps[2];
  EncodedTable tables[2];
  for (int k = 0; k < 2; ++k, ++out.cases) {
    std::istringstream in(text);
    tables[k] = encode_features(parse_raw(in));
    const auto [train, test] = prepare_split(tables[k], SplitSpec{400, 9, true});
    std::ostringstream o;
    write_dataset_csv(o, train);
    write_dataset_csv(o, test);
    dumps[k] = o.str();
  }
  if (!same_bytes(tables[0].features, tables[1].features) ||
      !same_bytes(tables[0].targets, tables[1].targets) ||
      tables[0].dropped_rows != tables[1].dropped_rows) {
    out.fail("encoded tables differ");
  }
  if (dumps[0] != dumps[1]) out.fail("dataset dumps differ");
  return out;
}

// ---- numerics --------------------------------------------------------------

Outcome ridge_residual_law() {
  Outcome out;
  Rng rng(303);
  const double lambdas[] = {1e-8, 1e-6, 1e-3, 1.0, 10.0};
  for (int trial = 0; trial < 150; ++trial, ++out.cases) {
    const auto n = static_cast<Eigen::Index>(random_between(rng, 1, 40));
    const auto m = static_cast<Eigen::Index>(random_between(rng, 1, 12));
    const double lambda = lambdas[rng.uniform_index(5)];
    const Mat a = random_mat(rng, n, m, -3.0, 3.0);
    const Vec b = random_vec(rng, n, -5.0, 5.0);
    const Vec w = ridge_solve(a, b, lambda);
    if (!w.allFinite()) {
      out.fail("non-finite coefficients");
      return out;
    }
    const double rhs = (a.transpose() * b).lpNorm<Eigen::Infinity>();
    const double res = (a.transpose() * (a * w - b) + lambda * w).lpNorm<Eigen::Infinity>();
    if (res > 1e-8 * (1.0 + rhs)) {
      out.fail("residual " + str(res) + " at lambda " + str(lambda));
      return out;
    }
  }
  return out;
}

Outcome spectral_scaling() {
  Outcome out;
  Rng rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const auto d = static_cast<Eigen::Index>(random_between(rng, 1, 25));
    const Mat m = random_mat(rng, d, d, -1.0, 1.0);
    const double base = spectral_radius(m);
    for (const double c : {-2.0, 0.5, 3.0}) {
      ++out.cases;
      const double scaled = spectral_radius(Mat(c * m));
      const double expect = std::abs(c) * base;
      if (std::abs(scaled - expect) > 1e-6 * std::max(1.0, expect)) {
        out.fail("d=" + std::to_string(d) + " c=" + str(c) + ": " + str(scaled) + " vs " +
                 str(expect));
        return out;
      }
    }
  }
  return out;
}

Outcome numerics_deterministic() {
  Outcome out;
  Rng a(55);
  Rng b(55);
  for (int i = 0; i < 1000; ++i, ++out.cases) {
    if (a.next_u64() != b.next_u64()) out.fail("rng streams diverge");
  }
  Rng g(66);
  const Mat m = random_mat(g, 25, 25, -1.0, 1.0);
  if (spectral_radius(m) != spectral_radius(m)) out.fail("spectral_radius not repeatable");
  const Mat x = random_mat(g, 30, 6, -1.0, 1.0);
  const Vec y = random_vec(g, 30, -1.0, 1.0);
  const Vec w1 = ridge_solve(x, y, 1e-6);
  const Vec w2 = ridge_solve(x, y, 1e-6);
  if (std::memcmp(w1.data(), w2.data(), sizeof(double) * 6) != 0) {
    out.fail("ridge_solve not repeatable");
  }
  out.cases += 2;
  return out;
}

// ---- esn -------------------------------------------------------------------

EsnConfig random_esn_config(Rng& rng) {
  EsnConfig c;
  c.reservoir_size = random_between(rng, 1, 30);
  c.spectral_radius = rng.uniform(0.1, 1.2);
  c.input_scale = rng.uniform(0.1, 1.5);
  c.washout = random_between(rng, 0, 10);
  c.seed = rng.next_u64();
  return c;
}

Outcome esn_state_bounds() {
  Outcome out;
  Rng rng(505);
  for (int trial = 0; trial < 40; ++trial, ++out.cases) {
    const std::size_t p = random_between(rng, 1, 7);
    const EsnModel model = init_esn(p, random_esn_config(rng));
    // Operating range: scaled features and their negatives.
    const Mat inputs = random_mat(rng, 60, static_cast<Eigen::Index>(p), -1.0, 1.0);
    const Mat states = run_reservoir(model, inputs);
    if (states.cwiseAbs().maxCoeff() >= 1.0) {
      out.fail("state reached +-1 on moderate inputs");
      return out;
    }
    // Extreme inputs saturate tanh in floating point but never exceed 1.
    const Mat wild = random_mat(rng, 10, static_cast<Eigen::Index>(p), -1e6, 1e6);
    const Mat ws = run_reservoir(model, wild);
    if (!ws.allFinite() || ws.cwiseAbs().maxCoeff() > 1.0) {
      out.fail("state left [-1, 1] on extreme inputs");
      return out;
    }
  }
  return out;
}

Outcome esn_fixed_weights() {
  Outcome out;
  Rng rng(606);
  for (int trial = 0; trial < 15; ++trial, ++out.cases) {
    const std::size_t p = random_between(rng, 1, 7);
    EsnConfig c = random_esn_config(rng);
    const EsnModel model = init_esn(p, c);
    const Mat w_in = model.w_in;
    const Mat w_r = model.w_r;
    const Mat x = random_mat(rng, static_cast<Eigen::Index>(c.washout + 40),
                             static_cast<Eigen::Index>(p), 0.0, 1.0);
    const EsnModel trained = train_readout(model, x, random_vec(rng, x.rows(), 0.0, 1.0));
    if (!same_bytes(trained.w_in, w_in) || !same_bytes(trained.w_r, w_r)) {
      out.fail("reservoir or input weights changed during training");
      return out;
    }
  }
  return out;
}

Outcome esn_readout_optimality() {
  Outcome out;
  Rng rng(707);
  for (int trial = 0; trial < 20; ++trial, ++out.cases) {
    const std::size_t p = random_between(rng, 1, 7);
    const EsnConfig c = random_esn_config(rng);
    const Mat x = random_mat(rng, static_cast<Eigen::Index>(c.washout + random_between(rng, 5, 120)),
                             static_cast<Eigen::Index>(p), 0.0, 1.0);
    const Vec y = random_vec(rng, x.rows(), 0.0, 1.0);
    const EsnModel model = train_readout(init_esn(p, c), x, y);
    const Mat states = oracle::reservoir_states(model.w_in, model.w_r, x,
                                                Vec::Zero(model.w_r.rows()));
    const Eigen::Index kept = x.rows() - static_cast<Eigen::Index>(c.washout);
    Mat s(kept, states.cols() + 1);
    Vec yk(kept);
    for (Eigen::Index t = 0; t < kept; ++t) {
      s(t, 0) = 1.0;
      for (Eigen::Index j = 0; j < states.cols(); ++j) {
        s(t, j + 1) = states(t + static_cast<Eigen::Index>(c.washout), j);
      }
      yk[t] = y[t + static_cast<Eigen::Index>(c.washout)];
    }
    const Vec sty = s.transpose() * yk;
    const double res =
        (s.transpose() * (s * model.w_out) + c.ridge_lambda * model.w_out - sty).lpNorm<Eigen::Infinity>();
    if (res > 1e-8 * (1.0 + sty.lpNorm<Eigen::Infinity>())) {
      out.fail("normal-equation residual " + str(res));
      return out;
    }
  }
  return out;
}

Outcome esn_fading_memory() {
  Outcome out;
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial, ++out.cases) {
    EsnConfig c;
    c.seed = rng.next_u64();
    const EsnModel model = init_esn(7, c);
    const Mat x = random_mat(rng, 100, 7, 0.0, 1.0);
    const Vec s0 = random_vec(rng, 25, -1.0, 1.0);
    const Mat a = run_reservoir(model, x, s0);
    const Mat b = run_reservoir(model, x, Vec::Zero(25));
    const double diff = (a.row(99) - b.row(99)).lpNorm<Eigen::Infinity>();
    if (!(diff < 1e-6)) {
      out.fail("final state difference " + str(diff));
      return out;
    }
  }
  return out;
}

// ---- svr -------------------------------------------------------------------

struct SvrCase {
  Mat x;
  Vec y;
  SvrConfig config;
};

SvrCase random_svr_case(Rng& rng) {
  SvrCase sc;
  const auto n = static_cast<Eigen::Index>(random_between(rng, 5, 60));
  const auto p = static_cast<Eigen::Index>(random_between(rng, 1, 4));
  sc.x = random_mat(rng, n, p, 0.0, 1.0);
  sc.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sc.y[i] = std::clamp(0.3 + 0.4 * std::sin(3.0 * sc.x(i, 0)) + rng.uniform(-0.15, 0.15), 0.0, 1.0);
  }
  const double cs[] = {0.5, 10.0, 1000.0};
  const double eps[] = {0.0, 0.05, 0.1};
  const double gammas[] = {0.1, 1.0, 5.0};
  sc.config.c = cs[rng.uniform_index(3)];
  sc.config.epsilon = eps[rng.uniform_index(3)];
  sc.config.gamma = gammas[rng.uniform_index(3)];
  // Near-interpolating cases (C = 1000, narrow kernel) need more than the
  // default budget under first-order pair selection.
  sc.config.max_passes = 100'000;
  return sc;
}

Outcome svr_feasibility() {
  Outcome out;
  Rng rng(909);
  for (int trial = 0; trial < 60; ++trial, ++out.cases) {
    const SvrCase sc = random_svr_case(rng);
    const SvrModel m = train_svr(sc.x, sc.y, sc.config);
    const double c = sc.config.c;
    if (std::abs(m.beta.sum()) > 1e-9 * c) {
      out.fail("sum(beta) = " + str(m.beta.sum()) + " with C = " + str(c));
      return out;
    }
    if (m.beta.size() > 0 && m.beta.cwiseAbs().maxCoeff() > c + 1e-12) {
      out.fail("|beta| exceeds C");
      return out;
    }
    if (m.beta.size() > 0 && m.beta.cwiseAbs().minCoeff() <= 1e-12) {
      out.fail("stored coefficient at or below the pruning threshold");
      return out;
    }
  }
  return out;
}

Outcome svr_monotone_objective() {
  Outcome out;
  Rng rng(1010);
  for (int trial = 0; trial < 40; ++trial, ++out.cases) {
    SvrCase sc = random_svr_case(rng);
    sc.config.record_objective = true;
    const SvrModel m = train_svr(sc.x, sc.y, sc.config);
    for (std::size_t k = 1; k < m.objective_trace.size(); ++k) {
      const double prev = m.objective_trace[k - 1];
      if (m.objective_trace[k] < prev - 1e-12 * (1.0 + std::abs(prev))) {
        out.fail("objective decreased at update " + std::to_string(k) + ": " + str(prev) +
                 " -> " + str(m.objective_trace[k]));
        return out;
      }
    }
  }
  return out;
}

Outcome svr_tube() {
  Outcome out;
  Rng rng(1111);
  for (int trial = 0; trial < 60; ++trial) {
    const SvrCase sc = random_svr_case(rng);
    const SvrModel m = train_svr(sc.x, sc.y, sc.config);
    if (!m.converged) {
      out.fail("solver did not converge");
      return out;
    }
    for (std::size_t k = 0; k < m.support_indices.size(); ++k) {
      const double b = std::abs(m.beta[static_cast<Eigen::Index>(k)]);
      if (b >= sc.config.c * (1.0 - 1e-12)) continue;
      ++out.cases;
      const auto i = static_cast<Eigen::Index>(m.support_indices[k]);
      const double r = std::abs(svr_decision(m, sc.x.row(i).transpose()) - sc.y[i]);
      if (std::abs(r - sc.config.epsilon) > sc.config.kkt_tol) {
        out.fail("free support vector residual " + str(r) + " vs epsilon " +
                 str(sc.config.epsilon));
        return out;
      }
    }
  }
  return out;
}

Outcome kernel_symmetry() {
  Outcome out;
  Rng rng(1212);
  for (int trial = 0; trial < 500; ++trial, ++out.cases) {
    const auto p = static_cast<Eigen::Index>(random_between(rng, 1, 7));
    const Vec x = random_vec(rng, p, -2.0, 2.0);
    const Vec z = random_vec(rng, p, -2.0, 2.0);
    const double g = rng.uniform(1e-3, 10.0);
    if (rbf_kernel(x, z, g) != rbf_kernel(z, x, g)) out.fail("K(x,z) != K(z,x)");
    if (rbf_kernel(x, x, g) != 1.0) out.fail("K(x,x) != 1");
  }
  return out;
}

// ---- anfis -----------------------------------------------------------------

AnfisModel random_anfis(Rng& rng, std::size_t inputs, std::size_t mfs) {
  std::vector<std::vector<GaussianMf>> grid(inputs, std::vector<GaussianMf>(mfs));
  for (auto& row : grid) {
    for (auto& mf : row) mf = {rng.uniform(-0.2, 1.2), rng.uniform(0.05, 0.6)};
  }
  AnfisModel model(std::move(grid), AnfisSettings{mfs, 0.01, 1e-6, 2});
  model.consequents() = random_vec(rng, static_cast<Eigen::Index>(model.rule_count()), -1.0, 2.0);
  return model;
}

Outcome anfis_normalization() {
  Outcome out;
  Rng rng(1313);
  for (int trial = 0; trial < 12; ++trial) {
    AnfisModel model = random_anfis(rng, random_between(rng, 1, 7), random_between(rng, 1, 3));
    if (trial % 4 == 0) {
      // Narrow memberships push raw products toward underflow.
      for (auto& row : model.mfs()) {
        for (auto& mf : row) mf.width = kMinMfWidth;
      }
    }
    for (int k = 0; k < 100; ++k, ++out.cases) {
      const Vec x = random_vec(rng, static_cast<Eigen::Index>(model.input_count()), 0.0, 1.0);
      const double sum = forward(model, x).normalized.sum();
      if (std::abs(sum - 1.0) > 1e-12) {
        out.fail("sum of normalized firing = " + str(sum));
        return out;
      }
    }
  }
  return out;
}

Outcome anfis_lse_optimality() {
  Outcome out;
  Rng rng(1414);
  for (int trial = 0; trial < 30; ++trial, ++out.cases) {
    AnfisModel model = random_anfis(rng, random_between(rng, 1, 3), random_between(rng, 2, 3));
    model.settings().lse_lambda = trial % 2 == 0 ? 1e-6 : 1e-3;
    const auto n = static_cast<Eigen::Index>(random_between(rng, 5, 60));
    const Mat x = random_mat(rng, n, static_cast<Eigen::Index>(model.input_count()), 0.0, 1.0);
    const Vec y = random_vec(rng, n, 0.0, 1.0);
    const AnfisModel fitted = lse_consequents(model, x, y);
    const Mat phi = oracle::anfis_normalized_firing(fitted.mfs(), x);
    const double lambda = model.settings().lse_lambda;
    const Vec q = fitted.consequents();
    const Vec pty = phi.transpose() * y;
    const double res = (phi.transpose() * (phi * q) + lambda * q - pty).lpNorm<Eigen::Infinity>();
    if (res > 1e-8 * (1.0 + pty.lpNorm<Eigen::Infinity>())) {
      out.fail("normal-equation residual " + str(res));
      return out;
    }
  }
  return out;
}

Outcome anfis_gradient_check() {
  Outcome out;
  Rng rng(1515);
  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const AnfisModel model = random_anfis(rng, random_between(rng, 1, 2), random_between(rng, 1, 2));
    const auto n = static_cast<Eigen::Index>(random_between(rng, 3, 20));
    const Mat x = random_mat(rng, n, static_cast<Eigen::Index>(model.input_count()), 0.0, 1.0);
    const Vec y = random_vec(rng, n, 0.0, 1.0);
    const PremiseGradient g = premise_gradient(model, x, y);
    for (std::size_t i = 0; i < model.input_count(); ++i) {
      for (std::size_t k = 0; k < model.mfs_per_input(); ++k) {
        for (int which = 0; which < 2; ++which, ++out.cases) {
          auto loss = [&](double v) {
            AnfisModel probe = model;
            (which == 0 ? probe.mfs()[i][k].center : probe.mfs()[i][k].width) = v;
            return anfis_mse(probe, x, y);
          };
          const double v0 = which == 0 ? model.mfs()[i][k].center : model.mfs()[i][k].width;
          const double fd = oracle::central_difference(loss, v0, h);
          const double an = which == 0 ? g.values[i][k].first : g.values[i][k].second;
          const double scale = std::max(std::abs(an), std::abs(fd));
          if (scale < 1e-9) {
            if (std::abs(an - fd) > 1e-11) out.fail("tiny gradient mismatch");
            continue;
          }
          if (std::abs(an - fd) / scale > 1e-4) {
            out.fail("input " + std::to_string(i) + " mf " + std::to_string(k) +
                     (which == 0 ? " center" : " width") + ": analytic " + str(an) +
                     " vs finite difference " + str(fd));
            return out;
          }
        }
      }
    }
  }
  return out;
}

Outcome anfis_monotone_lse() {
  Outcome out;
  Rng rng(1616);
  for (int trial = 0; trial < 30; ++trial, ++out.cases) {
    const AnfisModel model = random_anfis(rng, random_between(rng, 1, 3), random_between(rng, 2, 3));
    const auto n = static_cast<Eigen::Index>(random_between(rng, 5, 80));
    const Mat x = random_mat(rng, n, static_cast<Eigen::Index>(model.input_count()), 0.0, 1.0);
    const Vec y = random_vec(rng, n, 0.0, 1.0);
    const double before = anfis_mse(model, x, y);
    const double after = anfis_mse(lse_consequents(model, x, y), x, y);
    if (after > before + 1e-10) {
      out.fail("MSE rose from " + str(before) + " to " + str(after));
      return out;
    }
  }
  return out;
}

Outcome anfis_deterministic() {
  Outcome out;
  Rng rng(1717);
  const Mat x = random_mat(rng, 120, 4, 0.0, 1.0);
  const Vec y = random_vec(rng, 120, 0.0, 1.0);
  const std::vector<std::pair<double, double>> ranges(4, {0.0, 1.0});
  const AnfisTrainResult a = train_hybrid(init_anfis(ranges), x, y, 2);
  const AnfisTrainResult b = train_hybrid(init_anfis(ranges), x, y, 2);
  out.cases = 1;
  if (!(a.model == b.model) || a.epoch_mse != b.epoch_mse) out.fail("two trainings differ");
  return out;
}

// ---- bench_cli -------------------------------------------------------------

std::string serialize(const EvalReport& r) {
  std::ostringstream o;
  for (const auto f : {ReportFormat::kCsv, ReportFormat::kMarkdown, ReportFormat::kJson}) {
    write_report(o, r, f);
  }
  return o.str();
}

Outcome report_reproducible() {
  Outcome out;
  const EncodedTable table = surrogate_table();
  RunConfig c;
  c.seeds = {3, 4};
  c.anfis.mfs_per_input = 2;
  const std::string a = serialize(run_experiment(c, table));
  const std::string b = serialize(run_experiment(c, table));
  out.cases = 1;
  if (a != b) out.fail("report bytes differ between identical runs");
  return out;
}

Outcome baseline_dominance() {
  Outcome out;
  const EncodedTable table = surrogate_table();
  RunConfig c;
  c.seeds = {1, 2};
  const EvalReport r = run_experiment(c, table);
  for (const auto& cell : r.cells) {
    if (cell.model == ModelKind::kBaseline) continue;
    const CellReport* base = r.find(ModelKind::kBaseline, cell.target);
    for (std::size_t s = 0; s < cell.seeds.size(); ++s, ++out.cases) {
      if (!cell.seeds[s].ok || !base->seeds[s].ok) {
        out.fail(std::string(model_name(cell.model)) + " failed: " + cell.seeds[s].error);
        return out;
      }
      if (cell.seeds[s].train_mse > base->seeds[s].train_mse + 1e-9) {
        out.fail(std::string(model_name(cell.model)) + "/" + std::string(target_name(cell.target)) +
                 " seed " + std::to_string(cell.seeds[s].seed) + ": train MSE " +
                 str(cell.seeds[s].train_mse) + " above baseline " + str(base->seeds[s].train_mse));
        return out;
      }
    }
  }
  return out;
}

Outcome report_completeness() {
  Outcome out;
  const EncodedTable full = surrogate_table();
  EncodedTable small;
  small.features = full.features.topRows(30);
  small.targets = full.targets.topRows(30);
  small.row_ids.assign(full.row_ids.begin(), full.row_ids.begin() + 30);

  RunConfig c;
  c.seeds = {1};
  c.split.n_train = 20;
  c.esn.ridge_lambda = 0.0;  // 10 usable rows for 26 readout weights: singular
  c.anfis.mfs_per_input = 2;
  const EvalReport r = run_experiment(c, small);
  for (const ModelKind k : {ModelKind::kSvr, ModelKind::kEsn, ModelKind::kAnfis, ModelKind::kBaseline}) {
    for (const Target t : kAllTargets) {
      ++out.cases;
      const CellReport* cell = r.find(k, t);
      if (cell == nullptr) {
        out.fail("missing cell " + std::string(model_name(k)) + "/" + std::string(target_name(t)));
        return out;
      }
      if (k == ModelKind::kEsn && !cell->failed()) out.fail("singular ESN cell not marked failed");
      if (!cell->failed() && (cell->test_mse_median() < 0 || cell->train_mse_median() < 0)) {
        out.fail("negative MSE");
      }
    }
  }
  std::ostringstream csv;
  write_report(csv, r, ReportFormat::kCsv);
  if (csv.str().find("esn,shares,failed,failed,failed,failed,failed") == std::string::npos) {
    out.fail("failed cell not marked in CSV");
  }
  return out;
}

}  // namespace

const std::vector<Property>& all() {
  static const std::vector<Property> list = {
      {"data_pipeline", "scaler round-trip within 1e-9 relative", scaler_round_trip},
      {"data_pipeline", "split is a disjoint cover with sizes (n_train, T - n_train)", split_partition},
      {"data_pipeline", "outcome statistics match the published table after rounding", table_one},
      {"data_pipeline", "encoding and scaled dumps are byte-identical across runs", encode_deterministic},
      {"numerics", "ridge solution finite with normal-equation residual <= 1e-8 (1 + |A'b|)", ridge_residual_law},
      {"numerics", "spectral_radius(cM) = |c| spectral_radius(M)", spectral_scaling},
      {"numerics", "rng, ridge and spectral radius deterministic", numerics_deterministic},
      {"esn", "reservoir states bounded by 1", esn_state_bounds},
      {"esn", "input and reservoir weights unchanged by training", esn_fixed_weights},
      {"esn", "readout satisfies the ridge normal equations on realized states", esn_readout_optimality},
      {"esn", "states from different starts agree within 1e-6 after 100 inputs", esn_fading_memory},
      {"svr", "sum(beta) = 0 within 1e-9 C and |beta| <= C", svr_feasibility},
      {"svr", "dual objective non-decreasing over updates", svr_monotone_objective},
      {"svr", "free support vectors sit on the tube edge within kkt_tol", svr_tube},
      {"svr", "kernel symmetric with unit diagonal", kernel_symmetry},
      {"anfis", "normalized firing sums to 1 within 1e-12", anfis_normalization},
      {"anfis", "consequents satisfy the ridge normal equations", anfis_lse_optimality},
      {"anfis", "premise gradient matches central differences within 1e-4", anfis_gradient_check},
      {"anfis", "least-squares step never raises training MSE", anfis_monotone_lse},
      {"anfis", "hybrid training deterministic", anfis_deterministic},
      {"bench_cli", "identical configs give byte-identical reports", report_reproducible},
      {"bench_cli", "every model's train MSE at or below the mean baseline", baseline_dominance},
      {"bench_cli", "every requested cell present or marked failed", report_completeness},
  };
  return list;
}

}  // namespace props
