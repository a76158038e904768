#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "feller/checkers.hpp"

namespace feller {

/// Parsed check configuration. Schema errors are reported as ConfigError with
/// the JSON-pointer path of the offending field; rationals are written as
/// "p/q" strings so exact values round-trip.
struct RunConfig {
    std::string check;  // "e" | "asymptotic-e" | "asf"
    std::optional<Semigroup> semigroup;
    std::optional<Metric> metric;
    std::optional<Schedule> family_schedule;  // separating family for asf; default linear
    Point y;
    ProbeSchedule schedule;
    std::vector<TestFunction> functions;
    CheckOptions options;
    std::string format = "json";
    std::string out_dir;  // empty: resolved by the caller
    std::uint64_t seed = 0;
};

RunConfig parse_run_config(const nlohmann::ordered_json& doc);
RunConfig load_run_config(const std::string& path);

/// Dispatches to the checker named by cfg.check.
PropertyReport run_check(const RunConfig& cfg);

/// Spec fragments shared with the command line.
Metric parse_metric_spec(const nlohmann::ordered_json& j, const std::string& path);
Schedule parse_schedule_spec(const nlohmann::ordered_json& j, const std::string& path);

/// Cost spec for Wasserstein runs: {"metric": <metric spec>} evaluates the
/// raw metric, "truncate": true caps it at 1, and "family":
/// {"schedule": <spec>, "n": k} evaluates sigma_k = min(1, a_k * rho).
std::function<double(const Point&, const Point&)> parse_cost_spec(const nlohmann::ordered_json& j);

}  // namespace feller
