#include "adclin/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>

#include "adclin/errors.hpp"

namespace adclin {

using nlohmann::json;

double round_sig12(double value) {
  if (!std::isfinite(value)) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

namespace {

std::string join(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, std::string_view prefix) {
  if (!obj.is_object()) throw ConfigError(std::string(prefix), "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw ConfigError(join(prefix, key), "unknown key");
}

template <typename Fn>
auto rethrow_as_config(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(path, e.what());
  }
}

json report_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round_sig12(v);
}

}  // namespace

json params_to_json(const LinearizerParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ProposedParams>) {
          return json{{"type", "proposed"}, {"kind", std::string(to_string(p.kind))}, {"c0", p.c0},
                      {"delta_c1", p.delta_c1}, {"weights", p.weights}, {"biases", p.biases}};
        } else {
          return json{{"type", "hammerstein"}, {"c0", p.c0}, {"delta_c1", p.delta_c1},
                      {"weights", p.poly_weights}, {"biases", json::array()}};
        }
      },
      params);
}

LinearizerParams params_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "params document must be a JSON object");
  for (const char* key : {"type", "c0", "delta_c1", "weights"})
    if (!doc.contains(key)) throw ConfigError(key, "missing key");
  const std::string type = get_string(doc.at("type"), "type");
  const double c0 = get_number(doc.at("c0"), "c0");
  const double delta_c1 = get_number(doc.at("delta_c1"), "delta_c1");
  std::vector<double> weights = get_number_list(doc.at("weights"), "weights");
  if (type == "proposed") {
    if (!doc.contains("kind")) throw ConfigError("kind", "missing key");
    if (!doc.contains("biases")) throw ConfigError("biases", "missing key");
    ProposedParams p;
    p.c0 = c0;
    p.delta_c1 = delta_c1;
    p.weights = std::move(weights);
    p.biases = get_number_list(doc.at("biases"), "biases");
    p.kind = rethrow_as_config("kind", [&] { return parse_nonlinearity(get_string(doc.at("kind"), "kind")); });
    rethrow_as_config("weights", [&] {
      p.validate();
      return 0;
    });
    return p;
  }
  if (type == "hammerstein") {
    HammersteinParams p;
    p.c0 = c0;
    p.delta_c1 = delta_c1;
    p.poly_weights = std::move(weights);
    return p;
  }
  throw ConfigError("type", "expected \"proposed\" or \"hammerstein\"");
}

json solution_to_json(const DesignSolution& solution, std::uint64_t seed) {
  json j = params_to_json(solution.params);
  j["chosen_b_max"] = solution.chosen_b_max ? json(*solution.chosen_b_max) : json(nullptr);
  j["training_cost"] = solution.training_cost;
  j["lambda"] = solution.lambda;
  j["seed"] = seed;
  j["gram_condition_estimate"] = report_number(solution.gram_condition_estimate);
  return j;
}

json sndr_report_to_json(const SndrReport& report) {
  return json{{"sndr_db", report_number(report.sndr_db)}, {"px_db", report_number(report.signal_power_db)}};
}

json config_to_json(const ExperimentConfig& cfg) {
  json kinds = json::array();
  for (auto k : cfg.kinds) kinds.push_back(std::string(to_string(k)));
  std::vector<double> coeffs(cfg.distortion.coefficients().begin(), cfg.distortion.coefficients().end());
  return json{
      {"seed", cfg.seed},
      {"ensemble_size", cfg.ensemble_size},
      {"signal_length", cfg.signal_length},
      {"quant_bits", cfg.quant_bits},
      {"design",
       {{"n_branches", cfg.design.n_branches},
        {"kind", std::string(to_string(cfg.design.kind))},
        {"lambda", cfg.design.lambda},
        {"q_grid", cfg.design.q_grid},
        {"b_max_range", {cfg.design.b_max_lo, cfg.design.b_max_hi}},
        {"r_train", cfg.design.r_train},
        {"selection", std::string(to_string(cfg.design.selection))}}},
      {"distortion", {{"coefficients", coeffs}}},
      {"branch_sweep", cfg.branch_sweep},
      {"hammerstein_max_order", cfg.hammerstein_max_order},
      {"kinds", kinds},
      {"threads", cfg.threads},
  };
}

ExperimentConfig config_from_json(const json& doc) {
  reject_unknown(doc,
                 {"seed", "ensemble_size", "signal_length", "quant_bits", "design", "distortion", "branch_sweep",
                  "hammerstein_max_order", "kinds", "threads"},
                 "");
  ExperimentConfig cfg = ExperimentConfig::defaults();

  auto int_field = [&](const json& obj, const char* key, std::string_view prefix, auto& dst, long long lo) {
    if (!obj.contains(key)) return;
    const std::string path = join(prefix, key);
    const long long v = get_integer(obj.at(key), path);
    if (v < lo) throw ConfigError(path, "must be >= " + std::to_string(lo));
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
  };

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  int_field(doc, "ensemble_size", "", cfg.ensemble_size, 1);
  int_field(doc, "signal_length", "", cfg.signal_length, 1);
  int_field(doc, "quant_bits", "", cfg.quant_bits, 0);
  int_field(doc, "hammerstein_max_order", "", cfg.hammerstein_max_order, 1);
  int_field(doc, "threads", "", cfg.threads, 0);

  if (doc.contains("design")) {
    const json& d = doc.at("design");
    reject_unknown(d, {"n_branches", "kind", "lambda", "q_grid", "b_max_range", "r_train", "selection"}, "design");
    int_field(d, "n_branches", "design", cfg.design.n_branches, 1);
    int_field(d, "q_grid", "design", cfg.design.q_grid, 1);
    int_field(d, "r_train", "design", cfg.design.r_train, 1);
    if (d.contains("kind"))
      cfg.design.kind = rethrow_as_config(
          "design.kind", [&] { return parse_nonlinearity(get_string(d.at("kind"), "design.kind")); });
    if (d.contains("selection"))
      cfg.design.selection = rethrow_as_config("design.selection", [&] {
        return parse_selection_rule(get_string(d.at("selection"), "design.selection"));
      });
    if (d.contains("lambda")) {
      cfg.design.lambda = get_number(d.at("lambda"), "design.lambda");
      if (!(cfg.design.lambda >= 0.0)) throw ConfigError("design.lambda", "must be >= 0");
    }
    if (d.contains("b_max_range")) {
      const auto range = get_number_list(d.at("b_max_range"), "design.b_max_range");
      if (range.size() != 2 || !(range[0] > 0.0) || !(range[1] >= range[0]))
        throw ConfigError("design.b_max_range", "expected [lo, hi] with 0 < lo <= hi");
      cfg.design.b_max_lo = range[0];
      cfg.design.b_max_hi = range[1];
    }
  }
  if (doc.contains("distortion")) {
    const json& d = doc.at("distortion");
    reject_unknown(d, {"coefficients"}, "distortion");
    if (!d.contains("coefficients")) throw ConfigError("distortion.coefficients", "missing key");
    auto coeffs = get_number_list(d.at("coefficients"), "distortion.coefficients");
    cfg.distortion =
        rethrow_as_config("distortion.coefficients", [&] { return DistortionModel(std::move(coeffs)); });
  }
  if (doc.contains("branch_sweep")) {
    const json& b = doc.at("branch_sweep");
    if (!b.is_array()) throw ConfigError("branch_sweep", "expected an array of integers");
    cfg.branch_sweep.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string path = "branch_sweep[" + std::to_string(i) + "]";
      const long long n = get_integer(b[i], path);
      if (n < 1) throw ConfigError(path, "must be >= 1");
      cfg.branch_sweep.push_back(static_cast<int>(n));
    }
  }
  if (doc.contains("kinds")) {
    const json& k = doc.at("kinds");
    if (!k.is_array() || k.empty()) throw ConfigError("kinds", "expected a nonempty array of \"abs\"/\"relu\"");
    cfg.kinds.clear();
    for (std::size_t i = 0; i < k.size(); ++i) {
      const std::string path = "kinds[" + std::to_string(i) + "]";
      cfg.kinds.push_back(rethrow_as_config(path, [&] { return parse_nonlinearity(get_string(k[i], path)); }));
    }
  }
  rethrow_as_config("", [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError(std::string(assignment), "override must have the form key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError(key, "path does not name an object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

}  // namespace adclin
