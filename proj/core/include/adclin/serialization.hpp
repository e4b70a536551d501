#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "adclin/design.hpp"
#include "adclin/harness.hpp"
#include "adclin/linearizer.hpp"
#include "adclin/metrics.hpp"

namespace adclin {

/// Rounds to 12 significant decimal digits; used for every reported number.
double round_sig12(double value);

/// {"type", "kind", "c0", "delta_c1", "weights", "biases"}; doubles round-trip exactly.
nlohmann::json params_to_json(const LinearizerParams& params);
/// Throws ConfigError naming the offending key.
LinearizerParams params_from_json(const nlohmann::json& doc);

/// Params document extended with chosen_b_max, training_cost, lambda and seed.
nlohmann::json solution_to_json(const DesignSolution& solution, std::uint64_t seed);

/// {"sndr_db", "px_db"}; an infinite SNDR is written as the string "inf".
nlohmann::json sndr_report_to_json(const SndrReport& report);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Strict parse: unknown keys and wrong types raise ConfigError; absent keys keep the defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Applies `dotted.path=value`; value is parsed as JSON, falling back to a plain string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

}  // namespace adclin
