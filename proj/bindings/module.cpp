// Python bindings for the semigroup property checkers. The surface is
// function-level: each entry point takes plain lists/strings and returns
// plain dicts or JSON text, so the Python side never has to manage C++
// object lifetimes. Exact rationals cross the boundary as "p/q" strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "feller/checkers.hpp"
#include "feller/config.hpp"
#include "feller/demos.hpp"
#include "feller/errors.hpp"
#include "feller/hamel.hpp"
#include "feller/rational.hpp"
#include "feller/semigroup.hpp"
#include "feller/serialize.hpp"
#include "feller/spaces.hpp"
#include "feller/transport.hpp"

namespace py = pybind11;

namespace {

feller::Rational rational_arg(const py::handle& h) {
    if (py::isinstance<py::str>(h)) return feller::parse_rational(h.cast<std::string>());
    if (py::isinstance<py::int_>(h)) return feller::Rational(h.cast<long long>());
    return feller::rational_from_double(h.cast<double>());
}

feller::SpanPoint span_arg(const std::vector<py::object>& coords) {
    feller::SpanPoint u;
    u.coords.reserve(coords.size());
    for (const auto& c : coords) u.coords.push_back(rational_arg(c));
    return u;
}

// Atom spec: (point, mass) where mass is "p/q", int, or float.
feller::FiniteMeasure measure_arg(const std::vector<std::pair<std::vector<double>, py::object>>& atoms,
                                  feller::MassMode mode) {
    std::vector<feller::FiniteMeasure::Atom> out;
    out.reserve(atoms.size());
    for (const auto& [pt, mass] : atoms) out.push_back({feller::Point(pt), rational_arg(mass)});
    return feller::FiniteMeasure(std::move(out), mode);
}

py::dict gap_dict(const feller::GapResult& g) {
    py::dict d;
    d["primal"] = g.primal;
    d["dual"] = g.dual;
    d["gap"] = g.gap;
    if (g.gap_exact) d["gap_exact"] = feller::rational_str(*g.gap_exact);
    else d["gap_exact"] = py::none();
    return d;
}

void translate_errors() {
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const feller::ConfigError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const feller::DataError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const feller::DimensionError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const feller::Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Markov semigroup regularity checks: e-property, asymptotic "
              "e-property, asymptotic strong Feller, with exact certificates.";
    translate_errors();

    m.def(
        "scaling_asf_bound",
        [](int n, double gamma, const std::string& s1) {
            return feller::scaling_asf_bound(n, gamma, feller::parse_rational(s1));
        },
        py::arg("n"), py::arg("gamma"), py::arg("s1") = "-1",
        "Decay bound gamma * n * e^(n*s1) certifying the asymptotic strong "
        "Feller property of the scaling semigroup (requires s1 < 0).");

    m.def(
        "blowup_value",
        [](const std::vector<double>& y, const std::vector<double>& x, long long mm,
           const std::string& s2) {
            if (mm < 0 || mm > std::numeric_limits<int>::max())
                throw feller::DataError("blowup_value: m out of range");
            auto cert = feller::blowup_certificate(feller::Point(y), feller::Point(x),
                                                   static_cast<int>(mm), feller::parse_rational(s2));
            py::dict d;
            d["exponent"] = feller::rational_str(cert.exponent);
            d["delta"] = cert.delta;
            d["value"] = cert.value;  // +inf past double range; exponent stays exact
            return d;
        },
        py::arg("y"), py::arg("x"), py::arg("m"), py::arg("s2") = "1",
        "Separation |‖y‖-‖x‖| * e^(m*s2) between trajectories after time (0, m), "
        "with the exponent m*s2 carried exactly.");

    m.def(
        "blowup_threshold",
        [](const std::vector<double>& y, const std::vector<double>& x, const std::string& s2,
           double target) {
            return feller::blowup_threshold(feller::Point(y), feller::Point(x),
                                            feller::parse_rational(s2), target);
        },
        py::arg("y"), py::arg("x"), py::arg("s2"), py::arg("target"),
        "Smallest m >= 0 whose blow-up value reaches target.");

    m.def(
        "wasserstein",
        [](const std::vector<std::pair<std::vector<double>, py::object>>& mu1,
           const std::vector<std::pair<std::vector<double>, py::object>>& mu2,
           const std::string& cost_spec, const std::string& mode) {
            feller::MassMode mm;
            if (mode == "exact") mm = feller::MassMode::Exact;
            else if (mode == "real") mm = feller::MassMode::Real;
            else throw feller::DataError("wasserstein: mode must be 'exact' or 'real'");
            auto a = measure_arg(mu1, mm);
            auto b = measure_arg(mu2, mm);
            auto sigma = feller::parse_cost_spec(nlohmann::ordered_json::parse(cost_spec));
            auto cost = feller::CostMatrix::for_measures(a, b, sigma);
            return gap_dict(feller::duality_gap(cost, a, b));
        },
        py::arg("mu1"), py::arg("mu2"), py::arg("cost_spec"), py::arg("mode") = "exact",
        "Wasserstein distance between two finite measures given as "
        "[(point, mass), ...] atom lists. Solves the primal transport problem "
        "and the dual potential problem independently and reports both values "
        "plus their gap. cost_spec is a JSON object such as "
        "'{\"metric\": {\"kind\": \"pnorm\", \"p\": 2}, \"truncate\": true}'.");

    m.def(
        "apply_scaling",
        [](const std::vector<py::object>& weights, const std::vector<py::object>& time,
           const std::vector<double>& x) {
            std::vector<feller::Rational> w;
            w.reserve(weights.size());
            for (const auto& h : weights) w.push_back(rational_arg(h));
            auto sg = feller::Semigroup::scaling(feller::AdditiveFunction::from_weights(w),
                                                 static_cast<int>(x.size()));
            auto out = sg.apply(span_arg(time), feller::Point(x));
            return out.c;
        },
        py::arg("weights"), py::arg("time"), py::arg("x"),
        "One trajectory step of the scaling semigroup: e^(f(time)) * x where f "
        "is the additive weight function on rational time coordinates.");

    m.def(
        "scaling_log_factor",
        [](const std::vector<py::object>& weights, const std::vector<py::object>& time) {
            std::vector<feller::Rational> w;
            w.reserve(weights.size());
            for (const auto& h : weights) w.push_back(rational_arg(h));
            auto f = feller::AdditiveFunction::from_weights(w);
            return feller::rational_str(feller::eval_additive(f, span_arg(time)));
        },
        py::arg("weights"), py::arg("time"),
        "Exact log of the scaling factor, f(time), as a rational string.");

    m.def(
        "check",
        [](const std::string& config_json) {
            auto cfg = feller::parse_run_config(nlohmann::ordered_json::parse(config_json));
            auto rep = feller::run_check(cfg);
            return feller::report_json(rep).dump(2);
        },
        py::arg("config_json"),
        "Run one property check from a JSON configuration string; returns the "
        "report as JSON text (same schema as the CLI's report.json).");

    m.def(
        "refute_identity_asf",
        [](const std::vector<double>& y, const std::vector<double>& z, double gamma, int max_n,
           const std::string& schedule, double p) {
            auto rho = feller::Metric::pnorm(p);
            feller::Schedule sched = schedule == "geometric" ? feller::Schedule::geometric()
                                                             : feller::Schedule::linear();
            if (schedule != "geometric" && schedule != "linear")
                throw feller::DataError("refute_identity_asf: schedule must be 'linear' or 'geometric'");
            feller::PseudoMetricFamily fam(rho, sched);
            auto ref = feller::identity_asf_refutation(fam, feller::Point(y), gamma,
                                                       {feller::Point(z)}, max_n);
            py::dict d;
            d["z"] = ref.z.c;
            d["base_distance"] = ref.base_distance;
            d["n0"] = ref.n0;
            d["values"] = ref.values;
            if (ref.reaches_one) d["reaches_one"] = *ref.reaches_one;
            else d["reaches_one"] = py::none();
            d["lower_bound"] = ref.lower_bound;
            return d;
        },
        py::arg("y"), py::arg("z"), py::arg("gamma"), py::arg("max_n") = 10,
        py::arg("schedule") = "linear", py::arg("p") = 2.0,
        "Refutation of the asymptotic strong Feller property for the identity "
        "semigroup: sigma_n(z, y) along n = 1..max_n, the first n crossing 1/2, "
        "and the first n reaching 1 exactly.");

    m.def(
        "demo_asf_without_e",
        []() {
            auto out = feller::run_demo_asf_without_e();
            return py::make_tuple(out.exit_code, out.json.dump(2));
        },
        "Scaling-semigroup demo: asymptotic strong Feller holds on probes, the "
        "e-property fails with a blow-up certificate. Returns (exit_code, json).");

    m.def(
        "demo_e_without_asf",
        []() {
            auto out = feller::run_demo_e_without_asf();
            return py::make_tuple(out.exit_code, out.json.dump(2));
        },
        "Identity-semigroup demo: e-property holds exactly, asymptotic strong "
        "Feller fails at a limit point. Returns (exit_code, json).");

    m.attr("__version__") = "0.1.0";
}
