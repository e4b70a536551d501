#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adclin/errors.hpp"
#include "adclin/harness.hpp"
#include "adclin/rng.hpp"
#include "adclin/serialization.hpp"

namespace adclin::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Failure while reading or writing files.
class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoFailure("write to '" + path.string() + "' failed");
}

void write_json(const fs::path& path, const json& doc) {
  write_file(path, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
}

json parse_json_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", what + " is not valid JSON: " + e.what());
  }
}

ExperimentConfig load_config(const CliInvocation& inv) {
  json doc = inv.config_path.empty() ? config_to_json(ExperimentConfig::defaults())
                                     : parse_json_document(read_file(inv.config_path), inv.config_path.string());
  for (const auto& o : inv.overrides) apply_override(doc, o);
  if (inv.threads) doc["threads"] = *inv.threads;
  return config_from_json(doc);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  return std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

json stats_json(const EnsembleSndr& s) {
  return json{{"mean_sndr_db", round_sig12(s.mean_db)},
              {"std_sndr_db", round_sig12(s.std_db)},
              {"min_sndr_db", round_sig12(s.min_db)},
              {"pooled_sndr_db", round_sig12(s.pooled_db)},
              {"mean_enob", round_sig12(enob(s.mean_db, s.mean_signal_power_db))}};
}

json rows_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j{{"type", r.type},
           {"branches", r.branches},
           {"mults", r.mults},
           {"adds", r.adds},
           {"valid", r.valid},
           {"pooled_sndr_db", r.valid ? json(round_sig12(r.pooled_sndr_db)) : json(nullptr)}};
    if (r.chosen_b_max) j["chosen_b_max"] = round_sig12(*r.chosen_b_max);
    if (!r.valid) j["error"] = r.error;
    out.push_back(std::move(j));
  }
  return out;
}

void write_error(const CliInvocation& inv, std::ostream& err, int code, std::string_view kind,
                 const std::string& message, const std::string& key = {}) {
  json e{{"code", code}, {"kind", kind}, {"message", message}};
  if (!key.empty()) e["key"] = key;
  const json doc{{"error", e}};
  err << doc.dump() << '\n';
  std::error_code ec;
  if (!inv.output_dir.empty() && fs::is_directory(inv.output_dir, ec)) {
    std::ofstream f(inv.output_dir / "error.json");
    if (f) f << doc.dump(2) << '\n';
  }
}

struct Outputs {
  std::vector<std::string> files;
  json extra = json::object();
};

Outputs run_subcommand(const CliInvocation& inv, const ExperimentConfig& cfg, const json& params_doc) {
  const fs::path dir = inv.output_dir;
  Outputs outs;
  auto emit = [&](const std::string& name, auto&& writer) {
    write_file(dir / name, writer);
    outs.files.push_back(name);
  };

  if (inv.subcommand == "gen") {
    SignalPair pair = [&] {
      if (inv.signal_index < 0) {
        TrainingSet t = make_training_set(cfg);
        return SignalPair{t.refs.front(), t.distorted.front()};
      }
      return make_eval_signal(cfg, static_cast<std::size_t>(inv.signal_index));
    }();
    emit("reference.csv", [&](std::ostream& o) { write_signal_csv(o, pair.reference); });
    emit("distorted.csv", [&](std::ostream& o) { write_signal_csv(o, pair.distorted); });
    outs.extra["signal_index"] = inv.signal_index;
    return outs;
  }

  Experiment exp(cfg);
  if (inv.subcommand == "design") {
    const int n = inv.branches.value_or(cfg.design.n_branches);
    DesignSolution d = inv.linearizer == "hammerstein" ? exp.design_hammerstein(n)
                                                       : exp.design_proposed(n, cfg.design.kind);
    const json doc = solution_to_json(d, cfg.seed);
    emit("params.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  } else if (inv.subcommand == "eval") {
    const LinearizerParams params = params_from_json(params_doc);
    const EvalSummary compensated = exp.evaluate(params);
    const EvalSummary baseline = exp.evaluate_uncompensated();
    const OpCount cost = mult_add_count(params);
    const SndrReport pooled{compensated.stats.pooled_db, compensated.stats.mean_signal_power_db,
                            compensated.stats.mean_signal_power_db - compensated.stats.pooled_db};
    json doc{{"type", params_doc.at("type")},
             {"mults", cost.multiplications},
             {"adds", cost.additions},
             {"ensemble_size", cfg.ensemble_size},
             {"compensated", stats_json(compensated.stats)},
             {"uncompensated", stats_json(baseline.stats)},
             {"mean_gain_db", round_sig12(compensated.stats.mean_db - baseline.stats.mean_db)},
             {"report", sndr_report_to_json(pooled)}};
    emit("eval.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    emit("eval_signals.csv", [&](std::ostream& o) {
      o << "index,sndr_db,uncompensated_sndr_db\n";
      char buf[96];
      for (std::size_t i = 0; i < compensated.per_signal.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", i, compensated.per_signal[i].sndr_db,
                      baseline.per_signal[i].sndr_db);
        o << buf;
      }
    });
  } else if (inv.subcommand == "sweep-branches" || inv.subcommand == "sweep-mults") {
    const bool by_mults = inv.subcommand == "sweep-mults";
    const std::vector<SweepRow> rows = by_mults ? exp.mult_sweep() : exp.branch_sweep();
    emit(by_mults ? "sweep_mults.csv" : "sweep_branches.csv", [&](std::ostream& o) { write_sweep_csv(o, rows); });
    outs.extra["rows"] = rows_json(rows);
    outs.extra["uncompensated"] = stats_json(exp.evaluate_uncompensated().stats);
  } else if (inv.subcommand == "spectrum") {
    const SpectrumCase sc = exp.spectrum_case(inv.branches.value_or(cfg.design.n_branches));
    emit("spectrum_before.csv", [&](std::ostream& o) { write_spectrum_csv(o, sc.before); });
    emit("spectrum_after.csv", [&](std::ostream& o) { write_spectrum_csv(o, sc.after); });
    const json doc = solution_to_json(sc.design, cfg.seed);
    emit("params.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  } else {
    throw ValidationError("unknown subcommand '" + inv.subcommand + "'");
  }
  return outs;
}

}  // namespace

int run_cli(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kSubcommands{"design", "eval", "sweep-branches", "sweep-mults", "spectrum",
                                                     "gen"};
  if (std::find(kSubcommands.begin(), kSubcommands.end(), inv.subcommand) == kSubcommands.end()) {
    write_error(inv, err, kUsage, "usage", "unknown subcommand '" + inv.subcommand + "'");
    return kUsage;
  }

  // Config and inputs are validated before any computation.
  ExperimentConfig cfg;
  json params_doc;
  try {
    cfg = load_config(inv);
    if (inv.subcommand == "eval") {
      if (inv.params_path.empty()) throw ConfigError("params", "eval requires --params");
      params_doc = parse_json_document(read_file(inv.params_path), inv.params_path.string());
      params_from_json(params_doc);
    }
    if (inv.subcommand == "design" && inv.linearizer != "proposed" && inv.linearizer != "hammerstein")
      throw ConfigError("linearizer", "expected proposed or hammerstein");
  } catch (const ConfigError& e) {
    write_error(inv, err, kConfigError, "config", e.what(), e.key());
    return kConfigError;
  } catch (const ValidationError& e) {
    write_error(inv, err, kConfigError, "config", e.what());
    return kConfigError;
  } catch (const IoFailure& e) {
    write_error(inv, err, kIoError, "io", e.what());
    return kIoError;
  }

  try {
    std::error_code ec;
    fs::create_directories(inv.output_dir, ec);
    if (ec || !fs::is_directory(inv.output_dir))
      throw IoFailure("cannot create output directory '" + inv.output_dir.string() + "'");

    const auto started = std::chrono::steady_clock::now();
    Outputs outs = run_subcommand(inv, cfg, params_doc);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    json meta{{"subcommand", inv.subcommand},
              {"artifact_version", kArtifactVersion},
              {"generator", kGeneratorName},
              {"seed", cfg.seed},
              {"config", config_to_json(cfg)},
              {"outputs", outs.files}};
    for (auto& [k, v] : outs.extra.items()) meta[k] = v;
    if (inv.include_timestamp) {
      meta["timestamp_unix"] = timestamp();
      meta["elapsed_seconds"] = round_sig12(seconds);
    }
    write_json(inv.output_dir / "metadata.json", meta);
    for (const auto& f : outs.files) out << (inv.output_dir / f).string() << '\n';
    return kOk;
  } catch (const IoFailure& e) {
    write_error(inv, err, kIoError, "io", e.what());
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    write_error(inv, err, kIoError, "io", e.what());
    return kIoError;
  } catch (const std::exception& e) {
    write_error(inv, err, kComputeError, "compute", e.what());
    return kComputeError;
  }
}

}  // namespace adclin::cli
