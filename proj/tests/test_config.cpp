#include <string>

#include "doctest.h"
#include "feller/checkers.hpp"
#include "feller/config.hpp"
#include "feller/errors.hpp"
#include "feller/serialize.hpp"

using namespace feller;
using nlohmann::ordered_json;

namespace {

ordered_json base_config() {
    return ordered_json::parse(R"({
        "check": "e",
        "semigroup": {"kind": "identity", "dimension": 2},
        "metric": {"kind": "pnorm", "p": 2},
        "y": [0.25, 0],
        "schedules": {
            "times": {"kind": "ray", "direction": ["1"], "count": 5},
            "radii": [0.5, 0.25],
            "probes": {"kind": "default", "count": 4}
        },
        "functions": [{"kind": "truncated-norm-anchor", "anchor": [0, 0]}],
        "options": {"tol": 1e-6}
    })");
}

std::string error_path(const ordered_json& doc) {
    try {
        (void)parse_run_config(doc);
    } catch (const ConfigError& e) {
        return e.path;
    }
    return "";
}

}  // namespace

TEST_CASE("a full config document parses into a runnable check") {
    auto cfg = parse_run_config(base_config());
    CHECK(cfg.check == "e");
    REQUIRE(cfg.semigroup.has_value());
    CHECK(cfg.semigroup->kind() == SemigroupKind::Identity);
    CHECK(cfg.y == Point{0.25, 0.0});
    REQUIRE(cfg.schedule.times.size() == 5);
    CHECK(cfg.schedule.times[2] == SpanPoint({Rational(3)}));  // ray step i * direction
    CHECK(cfg.schedule.radii == std::vector<double>{0.5, 0.25});
    REQUIRE(cfg.schedule.probe_points.size() == 2);
    CHECK(cfg.schedule.probe_points[0].size() == 4);
    REQUIRE(cfg.functions.size() == 1);
    CHECK(cfg.functions[0].bounded());
    CHECK(cfg.options.tol == 1e-6);
    CHECK(cfg.format == "json");

    auto rep = run_check(cfg);
    CHECK(rep.property == Property::E);
    CHECK(rep.trace.size() == 2 * 5);
}

TEST_CASE("config errors point at the offending JSON path") {
    auto doc = base_config();
    doc["schedules"].erase("radii");
    try {
        (void)parse_run_config(doc);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.path == "/schedules/radii");
        CHECK(std::string(e.what()).find("required field is missing") != std::string::npos);
    }

    doc = base_config();
    doc["check"] = "wasserstein";
    CHECK(error_path(doc) == "/check");

    doc = base_config();
    doc["semigroup"]["kind"] = "brownian";
    CHECK(error_path(doc) == "/semigroup/kind");

    doc = base_config();
    doc["metric"]["p"] = 0.5;
    CHECK(error_path(doc) == "/metric/p");

    doc = base_config();
    doc["schedules"]["times"]["count"] = 0;
    CHECK(error_path(doc) == "/schedules/times/count");

    doc = base_config();
    doc["schedules"]["radii"] = ordered_json::array({0.25, 0.5});
    CHECK(error_path(doc) == "/schedules/radii");

    doc = base_config();
    doc["functions"] = ordered_json::array();
    CHECK(error_path(doc) == "/functions");

    doc = base_config();
    doc["format"] = "xml";
    CHECK(error_path(doc) == "/format");

    doc = base_config();
    doc["semigroup"] = {{"kind", "scaling"}, {"dimension", 2}, {"weights", {"1/0", "1"}}};
    CHECK(error_path(doc) == "/semigroup/weights/0");
}

TEST_CASE("scaling weights accept rational strings, integers and floats") {
    auto doc = base_config();
    doc["semigroup"] = {{"kind", "scaling"}, {"dimension", 2}, {"weights", {"-3/2", 1}}};
    doc["schedules"]["times"] = {{"kind", "ray"}, {"direction", {"1", "0"}}, {"count", 4}};
    auto cfg = parse_run_config(doc);
    REQUIRE(cfg.semigroup.has_value());
    CHECK(cfg.semigroup->as_scaling().weights.weight(0) == Rational(-3) / 2);
    CHECK(cfg.semigroup->as_scaling().weights.weight(1) == Rational(1));

    doc["semigroup"]["weights"] = {-0.5, 2};
    cfg = parse_run_config(doc);
    CHECK(cfg.semigroup->as_scaling().weights.weight(0) == Rational(-1) / 2);
}

TEST_CASE("sampled probes are reproducible from the seed") {
    auto doc = base_config();
    doc["schedules"]["probes"] = {{"kind", "random"}, {"count", 5}};
    doc["seed"] = 7;
    auto c1 = parse_run_config(doc);
    auto c2 = parse_run_config(doc);
    CHECK(c1.schedule.probe_points == c2.schedule.probe_points);
    CHECK(c1.seed == 7);

    doc["seed"] = 8;
    auto c3 = parse_run_config(doc);
    CHECK_FALSE(c1.schedule.probe_points == c3.schedule.probe_points);
}

TEST_CASE("explicit times and probes are honored verbatim") {
    auto doc = base_config();
    doc["schedules"]["times"] = ordered_json::parse(R"([["1"], ["2"], ["7/2"]])");
    doc["schedules"]["probes"] = ordered_json::parse(
        R"({"kind": "explicit", "points": [[[0.5, 0]], [[0.25, 0]]]})");
    auto cfg = parse_run_config(doc);
    REQUIRE(cfg.schedule.times.size() == 3);
    CHECK(cfg.schedule.times[2] == SpanPoint({Rational(7) / 2}));
    REQUIRE(cfg.schedule.probe_points.size() == 2);
    CHECK(cfg.schedule.probe_points[0][0] == Point{0.5, 0.0});

    // one probe set per radius is enforced
    doc["schedules"]["probes"]["points"] = ordered_json::parse(R"([[[0.5, 0]]])");
    CHECK(error_path(doc) == "/schedules/probes/points");
}

TEST_CASE("asf configs run through the family schedule") {
    auto doc = ordered_json::parse(R"({
        "check": "asf",
        "semigroup": {"kind": "identity", "dimension": 2},
        "metric": {"kind": "pnorm", "p": 2},
        "family": {"schedule": "linear"},
        "y": [0.25, 0],
        "schedules": {
            "times": {"kind": "ray", "direction": ["1"], "count": 12},
            "radii": [0.5],
            "probes": {"kind": "explicit", "points": [[[0.65, 0]]]}
        }
    })");
    auto cfg = parse_run_config(doc);
    CHECK(cfg.check == "asf");
    auto rep = run_check(cfg);
    CHECK(rep.property == Property::Asf);
    CHECK(rep.verdict == Verdict::FailsWithCertificate);
    REQUIRE(rep.certificate.has_value());
    CHECK(rep.certificate->lower_bound == 0.5);
}

TEST_CASE("kernel semigroups parse with exact row validation") {
    auto doc = ordered_json::parse(R"({
        "check": "asf",
        "semigroup": {
            "kind": "finite-kernel",
            "states": [[0, 0], [1, 0]],
            "matrix": [["1/2", "1/2"], ["1/4", "3/4"]]
        },
        "metric": {"kind": "pnorm", "p": 2},
        "family": {"schedule": "linear"},
        "y": [0, 0],
        "schedules": {
            "times": {"kind": "ray", "direction": ["1"], "count": 20},
            "radii": [1.0],
            "probes": {"kind": "explicit", "points": [[[1, 0]]]}
        }
    })");
    auto cfg = parse_run_config(doc);
    auto rep = run_check(cfg);
    CHECK(rep.verdict == Verdict::HoldsOnProbes);

    doc["semigroup"]["matrix"][0][0] = "1/3";  // row no longer sums to 1
    CHECK(error_path(doc) == "/semigroup");
}

TEST_CASE("cost specs build the advertised sigma") {
    auto sigma = parse_cost_spec(ordered_json::parse(R"({"metric": {"kind": "pnorm", "p": 1}})"));
    CHECK(sigma(Point{0.0, 0.0}, Point{2.0, 0.0}) == 2.0);

    sigma = parse_cost_spec(
        ordered_json::parse(R"({"metric": {"kind": "pnorm", "p": 1}, "truncate": true})"));
    CHECK(sigma(Point{0.0, 0.0}, Point{2.0, 0.0}) == 1.0);
    CHECK(sigma(Point{0.0, 0.0}, Point{0.25, 0.0}) == 0.25);

    sigma = parse_cost_spec(ordered_json::parse(
        R"({"metric": {"kind": "pnorm", "p": 1}, "family": {"schedule": "linear", "n": 3}})"));
    CHECK(sigma(Point{0.0, 0.0}, Point{0.25, 0.0}) == 0.75);

    CHECK_THROWS_AS((void)parse_cost_spec(ordered_json::parse(R"({"truncate": true})")),
                    ConfigError);
}

TEST_CASE("measures round-trip through JSON") {
    auto j = ordered_json::parse(R"({"atoms": [
        {"point": [0, 0], "mass": "1/3"},
        {"point": [1, 0], "mass": 0.5},
        {"point": [2, 0], "mass": 1}
    ]})");
    auto mu = measure_from_json(j);
    CHECK(mu.size() == 3);
    CHECK(mu.mode() == MassMode::Exact);
    CHECK(mu.atoms()[0].mass == Rational(1) / 3);
    CHECK(mu.atoms()[1].mass == Rational(1) / 2);
    CHECK(mu.atoms()[2].mass == Rational(1));

    auto back = measure_from_json(measure_json(mu));
    CHECK(back == mu);

    CHECK_THROWS_AS((void)measure_from_json(ordered_json::parse(R"({"atoms": []})")), DataError);
    CHECK_THROWS_AS(
        (void)measure_from_json(ordered_json::parse(R"({"atoms": [{"point": [0]}]})")), DataError);
    CHECK_THROWS_AS((void)measure_from_json(ordered_json::parse(
                        R"({"atoms": [{"point": [0], "mass": "-1"}]})")),
                    DataError);
}

TEST_CASE("reports serialize with a fixed field layout") {
    auto cfg = parse_run_config(base_config());
    auto rep = run_check(cfg);

    auto doc = report_json(rep);
    CHECK(doc.begin().key() == "property");
    CHECK(doc.at("property") == "e");
    CHECK(doc.at("tol") == 1e-6);
    CHECK(doc.at("summary").size() == 2);
    CHECK(doc.at("trace").size() == 10);
    CHECK(doc.at("trace")[0].contains("exact_exponent"));

    const std::string csv = report_csv(rep);
    CHECK(csv.rfind("property,gamma,n_or_m,value,exact_exponent\n", 0) == 0);
    // header plus one row per trace entry, newline-terminated
    std::size_t lines = 0;
    for (char ch : csv) lines += (ch == '\n') ? 1 : 0;
    CHECK(lines == 1 + rep.trace.size());
}

TEST_CASE("float formatting survives a round-trip") {
    // 17 significant digits reproduce every double exactly
    for (double v : {0.1, 0.5, 4.122307244877116e-08, 1e300, -2.0 / 3.0, 1e-300}) {
        CHECK(std::stod(fmt_double(v)) == v);
    }
    CHECK(fmt_double(0.5) == "0.5");
    CHECK(fmt_double(2.0) == "2");
}
