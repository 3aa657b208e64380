#include "postmetrics/serialization.hpp"

#include <json.hpp>

#include "postmetrics/error.hpp"
#include "text.hpp"

namespace postmetrics {

namespace {

using nlohmann::json;

constexpr int kDigits = 9;

double r9(double v) { return detail::round_sig(v, kDigits); }

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(r9(v[i]));
  return out;
}

json mat_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i).transpose()));
  return out;
}

Vec vec_from(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Mat mat_from(const json& j, Eigen::Index cols_if_empty = 0) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error("model json: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json parse_kind(std::string_view text, std::string_view kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model json: ") + e.what());
  }
  if (!j.is_object() || j.value("model", "") != kind) {
    throw Error("model json: expected a '" + std::string(kind) + "' dump");
  }
  return j;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(std::string("model json: ") + e.what());
  }
}

}  // namespace

std::string to_json(const EsnModel& model) {
  const auto& c = model.config;
  json j;
  j["model"] = "esn";
  j["config"] = {{"reservoir_size", c.reservoir_size},
                 {"spectral_radius", r9(c.spectral_radius)},
                 {"input_scale", r9(c.input_scale)},
                 {"washout", c.washout},
                 {"ridge_lambda", r9(c.ridge_lambda)},
                 {"seed", c.seed}};
  j["trained"] = model.trained;
  j["w_in"] = mat_json(model.w_in);
  j["w_r"] = mat_json(model.w_r);
  j["w_out"] = vec_json(model.w_out);
  j["final_train_state"] = vec_json(model.final_train_state);
  return j.dump(1) + "\n";
}

EsnModel esn_from_json(std::string_view text) {
  const json j = parse_kind(text, "esn");
  return guarded([&] {
    EsnModel m;
    const auto& c = j.at("config");
    m.config.reservoir_size = c.at("reservoir_size").get<std::size_t>();
    m.config.spectral_radius = c.at("spectral_radius").get<double>();
    m.config.input_scale = c.at("input_scale").get<double>();
    m.config.washout = c.at("washout").get<std::size_t>();
    m.config.ridge_lambda = c.at("ridge_lambda").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.trained = j.at("trained").get<bool>();
    m.w_in = mat_from(j.at("w_in"));
    m.w_r = mat_from(j.at("w_r"));
    m.w_out = vec_from(j.at("w_out"));
    m.final_train_state = vec_from(j.at("final_train_state"));
    if (m.w_r.rows() != m.w_r.cols() || m.w_in.rows() != m.w_r.rows() ||
        m.w_out.size() != m.w_r.rows() + 1 || m.final_train_state.size() != m.w_r.rows()) {
      throw Error("model json: inconsistent esn dimensions");
    }
    return m;
  });
}

std::string to_json(const SvrModel& model) {
  const auto& c = model.config;
  json j;
  j["model"] = "svr";
  j["config"] = {{"c", r9(c.c)},
                 {"epsilon", r9(c.epsilon)},
                 {"gamma", r9(c.gamma)},
                 {"kkt_tol", r9(c.kkt_tol)},
                 {"max_passes", c.max_passes}};
  j["beta0"] = r9(model.beta0);
  j["beta"] = vec_json(model.beta);
  j["support_inputs"] = mat_json(model.support_inputs);
  j["support_indices"] = model.support_indices;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  j["final_gap"] = r9(model.final_gap);
  return j.dump(1) + "\n";
}

SvrModel svr_from_json(std::string_view text) {
  const json j = parse_kind(text, "svr");
  return guarded([&] {
    SvrModel m;
    const auto& c = j.at("config");
    m.config.c = c.at("c").get<double>();
    m.config.epsilon = c.at("epsilon").get<double>();
    m.config.gamma = c.at("gamma").get<double>();
    m.config.kkt_tol = c.at("kkt_tol").get<double>();
    m.config.max_passes = c.at("max_passes").get<std::size_t>();
    m.beta0 = j.at("beta0").get<double>();
    m.beta = vec_from(j.at("beta"));
    m.support_inputs = mat_from(j.at("support_inputs"));
    m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.final_gap = j.at("final_gap").get<double>();
    if (m.beta.size() != m.support_inputs.rows() ||
        m.support_indices.size() != static_cast<std::size_t>(m.beta.size())) {
      throw Error("model json: inconsistent svr dimensions");
    }
    return m;
  });
}

std::string to_json(const AnfisModel& model) {
  const auto& s = model.settings();
  json j;
  j["model"] = "anfis";
  j["settings"] = {{"mfs_per_input", s.mfs_per_input},
                   {"lr", r9(s.lr)},
                   {"lse_lambda", r9(s.lse_lambda)},
                   {"epochs", s.epochs}};
  json grid = json::array();
  for (const auto& row : model.mfs()) {
    json jr = json::array();
    for (const auto& mf : row) jr.push_back({{"center", r9(mf.center)}, {"width", r9(mf.width)}});
    grid.push_back(std::move(jr));
  }
  j["membership_functions"] = std::move(grid);
  j["consequents"] = vec_json(model.consequents());
  return j.dump(1) + "\n";
}

AnfisModel anfis_from_json(std::string_view text) {
  const json j = parse_kind(text, "anfis");
  return guarded([&] {
    AnfisSettings s;
    const auto& js = j.at("settings");
    s.mfs_per_input = js.at("mfs_per_input").get<std::size_t>();
    s.lr = js.at("lr").get<double>();
    s.lse_lambda = js.at("lse_lambda").get<double>();
    s.epochs = js.at("epochs").get<std::size_t>();
    std::vector<std::vector<GaussianMf>> mfs;
    for (const auto& row : j.at("membership_functions")) {
      std::vector<GaussianMf> r;
      for (const auto& mf : row) r.push_back({mf.at("center").get<double>(), mf.at("width").get<double>()});
      mfs.push_back(std::move(r));
    }
    AnfisModel m(std::move(mfs), s);
    const Vec q = vec_from(j.at("consequents"));
    if (q.size() != m.consequents().size()) throw Error("model json: wrong consequent count");
    m.consequents() = q;
    return m;
  });
}

}  // namespace postmetrics
