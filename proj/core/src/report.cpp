#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "postmetrics/error.hpp"
#include "postmetrics/experiment.hpp"
#include "text.hpp"

namespace postmetrics {

namespace {

constexpr int kReportDigits = 6;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return detail::format_sig(v, kReportDigits);
}

double r6(double v) { return std::isnan(v) ? v : detail::round_sig(v, kReportDigits); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Cells in report order: SVR, ESN, ANFIS, baseline; targets in
// comments/likes/shares order.
std::vector<const CellReport*> ordered_cells(const EvalReport& report) {
  std::vector<const CellReport*> out;
  for (const auto& c : report.cells) out.push_back(&c);
  std::stable_sort(out.begin(), out.end(), [](const CellReport* a, const CellReport* b) {
    if (a->model != b->model) return a->model < b->model;
    return a->target < b->target;
  });
  return out;
}

std::vector<ModelKind> present_models(const EvalReport& report) {
  std::vector<ModelKind> out;
  for (const ModelKind k : {ModelKind::kSvr, ModelKind::kEsn, ModelKind::kAnfis,
                            ModelKind::kBaseline}) {
    if (std::any_of(report.cells.begin(), report.cells.end(),
                    [&](const CellReport& c) { return c.model == k; })) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<Target> present_targets(const EvalReport& report) {
  std::vector<Target> out;
  for (const Target t : kAllTargets) {
    if (std::any_of(report.cells.begin(), report.cells.end(),
                    [&](const CellReport& c) { return c.target == t; })) {
      out.push_back(t);
    }
  }
  return out;
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

void write_csv(std::ostream& out, const EvalReport& report) {
  out << "model,target,train_mse,test_mse,seed_median,seed_min,seed_max\n";
  for (const CellReport* c : ordered_cells(report)) {
    out << model_name(c->model) << ',' << target_name(c->target) << ',';
    if (c->failed()) {
      out << "failed,failed,failed,failed,failed\n";
      continue;
    }
    out << num(c->train_mse_median()) << ',' << num(c->test_mse_mean()) << ','
        << num(c->test_mse_median()) << ',' << num(c->test_mse_min()) << ','
        << num(c->test_mse_max()) << '\n';
  }
}

void write_markdown_table(std::ostream& out, const EvalReport& report, bool test) {
  const auto targets = present_targets(report);
  out << "| Method |";
  for (const Target t : targets) out << ' ' << capitalized(target_name(t)) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < targets.size(); ++i) out << "---|";
  out << '\n';
  for (const ModelKind k : present_models(report)) {
    out << "| " << model_label(k) << " |";
    for (const Target t : targets) {
      const CellReport* c = report.find(k, t);
      if (c == nullptr) {
        out << " - |";
      } else if (c->failed()) {
        out << " failed |";
      } else {
        out << ' ' << num(test ? c->test_mse_median() : c->train_mse_median()) << " |";
      }
    }
    out << '\n';
  }
}

void write_markdown(std::ostream& out, const EvalReport& report) {
  out << "# Prediction MSE on normalized targets\n\n"
      << "Test MSE, median over " << report.seeds.size() << " seed(s):\n\n";
  write_markdown_table(out, report, true);
  out << "\nTrain MSE, median over seeds:\n\n";
  write_markdown_table(out, report, false);
  out << "\n- split: n_train = " << report.split.n_train
      << ", shuffle = " << (report.split.shuffle ? "true" : "false") << '\n'
      << "- rows used: " << report.rows_used << " (dropped " << report.rows_dropped << ")\n"
      << "- seeds:";
  for (const auto s : report.seeds) out << ' ' << s;
  out << "\n- config digest: " << hex64(report.config_digest) << '\n';

  bool any_failed = false;
  for (const CellReport* c : ordered_cells(report)) {
    if (!c->failed()) continue;
    if (!any_failed) out << "\nFailed cells:\n\n";
    any_failed = true;
    out << "- " << model_name(c->model) << '/' << target_name(c->target) << ": "
        << c->first_error() << '\n';
  }
}

void write_json(std::ostream& out, const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["config_digest"] = hex64(report.config_digest);
  j["seeds"] = report.seeds;
  j["split"] = {{"n_train", report.split.n_train}, {"shuffle", report.split.shuffle}};
  j["rows_used"] = report.rows_used;
  j["rows_dropped"] = report.rows_dropped;
  ordered_json cells = ordered_json::array();
  for (const CellReport* c : ordered_cells(report)) {
    ordered_json jc;
    jc["model"] = model_name(c->model);
    jc["target"] = target_name(c->target);
    jc["status"] = c->failed() ? "failed" : "ok";
    jc["train_mse_median"] = r6(c->train_mse_median());
    jc["test_mse_mean"] = r6(c->test_mse_mean());
    jc["test_mse_median"] = r6(c->test_mse_median());
    jc["test_mse_min"] = r6(c->test_mse_min());
    jc["test_mse_max"] = r6(c->test_mse_max());
    ordered_json per_seed = ordered_json::array();
    for (const auto& s : c->seeds) {
      ordered_json js;
      js["seed"] = s.seed;
      js["ok"] = s.ok;
      if (s.ok) {
        js["train_mse"] = r6(s.train_mse);
        js["test_mse"] = r6(s.test_mse);
      } else {
        js["error"] = s.error;
      }
      per_seed.push_back(std::move(js));
    }
    jc["per_seed"] = std::move(per_seed);
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  out << j.dump(1) << '\n';
}

}  // namespace

void write_report(std::ostream& out, const EvalReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: write_csv(out, report); break;
    case ReportFormat::kMarkdown: write_markdown(out, report); break;
    case ReportFormat::kJson: write_json(out, report); break;
  }
}

void write_timings(std::ostream& out, const EvalReport& report) {
  out << "model,target,seed,seconds\n";
  for (const auto& t : report.timings) {
    out << model_name(t.model) << ',' << target_name(t.target) << ',' << t.seed << ','
        << detail::format_sig(t.seconds, 4) << '\n';
  }
}

std::filesystem::path emit_report(const EvalReport& report, ReportFormat format,
                                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::filesystem::path chosen;
  for (const auto& [fmt, name] : {std::pair{ReportFormat::kCsv, "report.csv"},
                                 std::pair{ReportFormat::kMarkdown, "report.md"},
                                 std::pair{ReportFormat::kJson, "report.json"}}) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_report(out, report, fmt);
    if (!out) throw Error("write failed for '" + path.string() + "'");
    if (fmt == format) chosen = path;
  }
  std::ofstream timing(dir / "timings.csv", std::ios::binary);
  if (!timing) throw Error("cannot write timings.csv in '" + dir.string() + "'");
  write_timings(timing, report);
  return chosen;
}

}  // namespace postmetrics
