#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "postmetrics/error.hpp"
#include "postmetrics/experiment.hpp"
#include "text.hpp"

namespace postmetrics {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"", {"data_path", "output_dir", "models", "targets", "seeds"}},
      {"split", {"n_train", "shuffle"}},
      {"esn", {"reservoir_size", "spectral_radius", "input_scale", "washout", "ridge_lambda"}},
      {"svr", {"c", "epsilon", "gamma", "kkt_tol", "max_passes"}},
      {"anfis", {"mfs_per_input", "lr", "lse_lambda", "epochs"}},
      {"train", {"model", "target"}},
  };
  return keys;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = detail::trim(item);
    if (!t.empty()) items.emplace_back(t);
  }
  return items;
}

double to_real(const std::string& key, const std::string& text) {
  const auto v = detail::parse_double(text);
  if (!v) throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  return *v;
}

std::uint64_t to_count(const std::string& key, const std::string& text) {
  const auto t = detail::trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const auto t = detail::trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + text + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& text) {
  std::filesystem::path p(std::string(detail::trim(text)));
  return p.is_relative() && !base.empty() ? base / p : p;
}

void apply(RunConfig& c, const std::string& section, const std::string& key,
           const std::string& value, const std::filesystem::path& base) {
  const std::string name = section.empty() ? key : section + "." + key;
  if (section.empty()) {
    if (key == "data_path") {
      c.data_path = resolve(base, value);
    } else if (key == "output_dir") {
      c.output_dir = resolve(base, value);
    } else if (key == "models") {
      c.models.clear();
      for (const auto& item : split_list(value)) {
        const auto m = parse_model(item);
        if (!m || *m == ModelKind::kBaseline) throw ConfigError("config: unknown model '" + item + "'");
        c.models.push_back(*m);
      }
    } else if (key == "targets") {
      c.targets.clear();
      for (const auto& item : split_list(value)) {
        const auto t = parse_target(item);
        if (!t) throw ConfigError("config: unknown target '" + item + "'");
        c.targets.push_back(*t);
      }
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const auto& item : split_list(value)) c.seeds.push_back(to_count(name, item));
    }
  } else if (section == "split") {
    if (key == "n_train") c.split.n_train = to_count(name, value);
    if (key == "shuffle") c.split.shuffle = to_bool(name, value);
  } else if (section == "esn") {
    if (key == "reservoir_size") c.esn.reservoir_size = to_count(name, value);
    if (key == "spectral_radius") c.esn.spectral_radius = to_real(name, value);
    if (key == "input_scale") c.esn.input_scale = to_real(name, value);
    if (key == "washout") c.esn.washout = to_count(name, value);
    if (key == "ridge_lambda") c.esn.ridge_lambda = to_real(name, value);
  } else if (section == "svr") {
    if (key == "c") c.svr.c = to_real(name, value);
    if (key == "epsilon") c.svr.epsilon = to_real(name, value);
    if (key == "gamma") c.svr.gamma = to_real(name, value);
    if (key == "kkt_tol") c.svr.kkt_tol = to_real(name, value);
    if (key == "max_passes") c.svr.max_passes = to_count(name, value);
  } else if (section == "anfis") {
    if (key == "mfs_per_input") c.anfis.mfs_per_input = to_count(name, value);
    if (key == "lr") c.anfis.lr = to_real(name, value);
    if (key == "lse_lambda") c.anfis.lse_lambda = to_real(name, value);
    if (key == "epochs") c.anfis.epochs = to_count(name, value);
  } else if (section == "train") {
    if (key == "model") {
      const auto m = parse_model(std::string(detail::trim(value)));
      if (!m || *m == ModelKind::kBaseline) throw ConfigError("config: unknown model '" + value + "'");
      c.train_model = *m;
    }
    if (key == "target") {
      const auto t = parse_target(std::string(detail::trim(value)));
      if (!t) throw ConfigError("config: unknown target '" + value + "'");
      c.train_target = *t;
    }
  }
}

std::string join_models(const std::vector<ModelKind>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::string(model_name(v[i]));
  return out;
}

std::string join_targets(const std::vector<Target>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::string(target_name(v[i]));
  return out;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RunConfig config;
  const auto& keys = known_keys();
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (keys.count(name) && !name.empty() && node.data().empty()) continue;  // empty section
      if (!keys.at("").count(name)) throw ConfigError("config: unknown key '" + name + "'");
      apply(config, "", name, node.data(), base_dir);
      continue;
    }
    const auto section = keys.find(name);
    if (section == keys.end() || name.empty()) {
      throw ConfigError("config: unknown section [" + name + "]");
    }
    for (const auto& [key, leaf] : node) {
      if (!section->second.count(key)) {
        throw ConfigError("config: unknown key '" + key + "' in [" + name + "]");
      }
      apply(config, name, key, leaf.data(), base_dir);
    }
  }
  validate(config);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  return parse_run_config(in, path.parent_path());
}

void apply_environment(RunConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    config.output_dir = dir;
  }
}

void validate(const RunConfig& c) {
  if (c.models.empty()) throw ConfigError("config: at least one model is required");
  if (c.targets.empty()) throw ConfigError("config: at least one target is required");
  if (c.seeds.empty()) throw ConfigError("config: at least one seed is required");
  if (c.split.n_train == 0) throw ConfigError("config: split.n_train must be > 0");
  if (c.esn.reservoir_size == 0) throw ConfigError("config: esn.reservoir_size must be >= 1");
  if (!(c.esn.spectral_radius > 0.0)) throw ConfigError("config: esn.spectral_radius must be > 0");
  if (c.esn.washout >= c.split.n_train) throw ConfigError("config: esn.washout must be < split.n_train");
  if (!(c.esn.ridge_lambda >= 0.0)) throw ConfigError("config: esn.ridge_lambda must be >= 0");
  if (!(c.svr.c > 0.0)) throw ConfigError("config: svr.c must be > 0");
  if (!(c.svr.epsilon >= 0.0)) throw ConfigError("config: svr.epsilon must be >= 0");
  if (!(c.svr.gamma > 0.0)) throw ConfigError("config: svr.gamma must be > 0");
  if (!(c.svr.kkt_tol > 0.0)) throw ConfigError("config: svr.kkt_tol must be > 0");
  if (c.anfis.mfs_per_input == 0) throw ConfigError("config: anfis.mfs_per_input must be >= 1");
  if (!(c.anfis.lse_lambda >= 0.0)) throw ConfigError("config: anfis.lse_lambda must be >= 0");
  if (!(c.anfis.lr >= 0.0)) throw ConfigError("config: anfis.lr must be >= 0");
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream o;
  const auto g = [](double v) { return detail::format_sig(v, 17); };
  o << "data_path=" << c.data_path.filename().string() << '\n'
    << "models=" << join_models(c.models) << '\n'
    << "targets=" << join_targets(c.targets) << '\n'
    << "seeds=";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) o << (i ? "," : "") << c.seeds[i];
  o << '\n'
    << "split.n_train=" << c.split.n_train << '\n'
    << "split.shuffle=" << (c.split.shuffle ? "true" : "false") << '\n'
    << "esn.reservoir_size=" << c.esn.reservoir_size << '\n'
    << "esn.spectral_radius=" << g(c.esn.spectral_radius) << '\n'
    << "esn.input_scale=" << g(c.esn.input_scale) << '\n'
    << "esn.washout=" << c.esn.washout << '\n'
    << "esn.ridge_lambda=" << g(c.esn.ridge_lambda) << '\n'
    << "svr.c=" << g(c.svr.c) << '\n'
    << "svr.epsilon=" << g(c.svr.epsilon) << '\n'
    << "svr.gamma=" << g(c.svr.gamma) << '\n'
    << "svr.kkt_tol=" << g(c.svr.kkt_tol) << '\n'
    << "svr.max_passes=" << c.svr.max_passes << '\n'
    << "anfis.mfs_per_input=" << c.anfis.mfs_per_input << '\n'
    << "anfis.lr=" << g(c.anfis.lr) << '\n'
    << "anfis.lse_lambda=" << g(c.anfis.lse_lambda) << '\n'
    << "anfis.epochs=" << c.anfis.epochs << '\n';
  return o.str();
}

std::uint64_t config_digest(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace postmetrics
