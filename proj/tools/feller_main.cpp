// Command-line front end: the two built-in demonstrations, configurable
// property checks, and Wasserstein distances between finite measures.
// Exit codes: 0 success / expectations met, 1 expectation mismatch,
// 2 configuration error, 3 data error.
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "feller/config.hpp"
#include "feller/demos.hpp"
#include "feller/errors.hpp"
#include "feller/serialize.hpp"
#include "feller/transport.hpp"

namespace {

namespace fs = std::filesystem;
using feller::OrderedJson;

std::string resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("FELLER_OUT"); env != nullptr && *env != '\0') return env;
    return ".";
}

std::string write_into(const std::string& dir, const std::string& name,
                       const std::string& content) {
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / name).string();
    feller::write_text(path, content);
    return path;
}

void print_expectations(const OrderedJson& doc) {
    for (const auto& e : doc.at("expectations")) {
        std::cout << (e.at("pass").get<bool>() ? "PASS" : "FAIL") << " "
                  << e.at("name").get<std::string>() << ": " << e.at("detail").get<std::string>()
                  << "\n";
    }
}

int emit_demo(const feller::DemoOutput& out, const std::string& stem, const std::string& dir,
              const std::string& format) {
    std::vector<std::string> written;
    written.push_back(write_into(dir, stem + ".json", out.json.dump(2) + "\n"));
    if (format == "csv")
        for (const auto& [name, rep] : out.reports)
            written.push_back(write_into(dir, stem + "." + name + ".csv", feller::report_csv(rep)));
    print_expectations(out.json);
    for (const auto& p : written) std::cout << "wrote " << p << "\n";
    std::cout << (out.exit_code == 0 ? "expectations met" : "expectation mismatch") << "\n";
    return out.exit_code;
}

OrderedJson parse_json_arg(const std::string& arg, const std::string& what) {
    std::string text = arg;
    if (!arg.empty() && arg.front() != '{') {
        std::ifstream in(arg);
        if (!in) throw feller::DataError("cannot open " + what + " file: " + arg);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    try {
        return OrderedJson::parse(text);
    } catch (const std::exception& e) {
        throw feller::ConfigError("/" + what, std::string("not valid JSON: ") + e.what());
    }
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const feller::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const feller::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov semigroup property checks with exact certificates"};
    app.require_subcommand(1);

    std::string out_flag;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_given = false;
    app.add_option("--out", out_flag, "Output directory (default: FELLER_OUT or the working directory)");
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "Seed for sampled probe points")
        ->each([&](const std::string&) { seed_given = true; });

    auto* demo = app.add_subcommand("demo", "Run a built-in demonstration");
    demo->require_subcommand(1);
    demo->fallthrough();

    auto* demo_asf = demo->add_subcommand(
        "asf-without-e", "Scaling semigroup: ASF holds on probes, asymptotic equicontinuity fails");
    demo_asf->fallthrough();
    std::string s1_arg, s2_arg;
    std::vector<double> gammas_arg;
    demo_asf->add_option("--s1", s1_arg, "Contracting weight (rational, default -1)");
    demo_asf->add_option("--s2", s2_arg, "Expanding weight (rational, default 1)");
    demo_asf->add_option("--gammas", gammas_arg, "Radius ladder (default 1 0.1)");

    auto* demo_e = demo->add_subcommand(
        "e-without-asf", "Identity semigroup: equicontinuity holds on probes, ASF is refuted");
    demo_e->fallthrough();
    std::vector<double> y_arg, z_arg;
    double gamma_arg = 0.0;
    bool gamma_given = false;
    demo_e->add_option("--y", y_arg, "Center point (default 0.25 0)");
    demo_e->add_option("--z", z_arg, "Refutation candidate (default 0.65 0)");
    demo_e->add_option("--gamma", gamma_arg, "Refutation ball radius (default 0.5)")
        ->each([&](const std::string&) { gamma_given = true; });

    auto* check = app.add_subcommand("check", "Run the check described by a JSON config");
    check->fallthrough();
    std::string config_path;
    check->add_option("config", config_path, "Path to the config document")->required();

    auto* wass = app.add_subcommand("wasserstein",
                                    "Distance between two finite measures under a cost spec");
    wass->fallthrough();
    std::string mu1_path, mu2_path, cost_arg;
    wass->add_option("--mu1", mu1_path, "First measure (JSON file)")->required();
    wass->add_option("--mu2", mu2_path, "Second measure (JSON file)")->required();
    wass->add_option("--cost", cost_arg, "Cost spec: inline JSON or a file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string out_dir = resolve_out_dir(out_flag);

    if (demo_asf->parsed())
        return guarded([&] {
            feller::AsfDemoOverrides ov;
            if (!s1_arg.empty()) ov.s1 = feller::parse_rational(s1_arg);
            if (!s2_arg.empty()) ov.s2 = feller::parse_rational(s2_arg);
            if (!gammas_arg.empty()) ov.gammas = gammas_arg;
            return emit_demo(feller::run_demo_asf_without_e(ov), "demo_asf_without_e", out_dir,
                             format);
        });

    if (demo_e->parsed())
        return guarded([&] {
            feller::IdentityDemoOverrides ov;
            if (!y_arg.empty()) ov.y = feller::Point(y_arg);
            if (!z_arg.empty()) ov.z = feller::Point(z_arg);
            if (gamma_given) ov.gamma = gamma_arg;
            return emit_demo(feller::run_demo_e_without_asf(ov), "demo_e_without_asf", out_dir,
                             format);
        });

    if (check->parsed())
        return guarded([&] {
            std::ifstream in(config_path);
            if (!in) throw feller::ConfigError("", "cannot open config file: " + config_path);
            OrderedJson doc;
            try {
                in >> doc;
            } catch (const std::exception& e) {
                throw feller::ConfigError("", std::string("config file is not valid JSON: ") +
                                                  e.what());
            }
            // Command-line flags win over the config document.
            if (seed_given) doc["seed"] = seed;
            if (app.count("--format") > 0) doc["format"] = format;
            feller::RunConfig cfg = feller::parse_run_config(doc);
            if (!out_flag.empty() || cfg.out_dir.empty()) cfg.out_dir = out_dir;
            const feller::PropertyReport rep = feller::run_check(cfg);
            const std::string path =
                cfg.format == "csv"
                    ? write_into(cfg.out_dir, "report.csv", feller::report_csv(rep))
                    : write_into(cfg.out_dir, "report.json",
                                 feller::report_json(rep).dump(2) + "\n");
            std::cout << feller::property_name(rep.property) << ": "
                      << feller::verdict_name(rep.verdict) << "\n";
            std::cout << "wrote " << path << "\n";
            return 0;
        });

    return guarded([&] {
        const feller::FiniteMeasure mu1 = feller::load_measure(mu1_path);
        const feller::FiniteMeasure mu2 = feller::load_measure(mu2_path);
        const auto sigma = feller::parse_cost_spec(parse_json_arg(cost_arg, "cost"));
        const auto cost = feller::CostMatrix::for_measures(mu1, mu2, sigma);
        const feller::GapResult gap = feller::duality_gap(cost, mu1, mu2);
        std::cout << feller::gap_json(gap).dump(2) << "\n";
        return 0;
    });
}
