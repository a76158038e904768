#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "feller/checkers.hpp"

namespace feller {

/// Built-in demonstration runs. Each returns the structured document, the
/// underlying property reports (for CSV traces), and an exit code: 0 when
/// every embedded expectation held, 1 otherwise. Invalid overrides are
/// rejected with ConfigError before anything runs.
struct DemoOutput {
    int exit_code = 0;
    nlohmann::ordered_json json;
    std::vector<std::pair<std::string, PropertyReport>> reports;
};

/// Scaling semigroup with one contracting and one expanding weight: the
/// asymptotic-strong-Feller scan holds on probes below the closed-form decay
/// bound, while the asymptotic equicontinuity scan fails with an exact
/// geometric-growth certificate and a blow-up threshold prediction.
struct AsfDemoOverrides {
    std::optional<Rational> s1;           // contracting weight, default -1
    std::optional<Rational> s2;           // expanding weight, default +1
    std::optional<std::vector<double>> gammas;  // radius ladder, default {1, 0.1}
};

DemoOutput run_demo_asf_without_e(const AsfDemoOverrides& o = {});

/// Identity semigroup: equicontinuity holds on probes with per-radius maxima
/// exactly Lip(f) * gamma_k, while the separating family refutes the
/// asymptotic strong Feller property at any limit point with lower bound 1/2.
struct IdentityDemoOverrides {
    std::optional<Point> y;      // center, default (0.25, 0)
    std::optional<Point> z;      // refutation candidate, default (0.65, 0)
    std::optional<double> gamma; // refutation ball radius, default 0.5
};

DemoOutput run_demo_e_without_asf(const IdentityDemoOverrides& o = {});

}  // namespace feller
