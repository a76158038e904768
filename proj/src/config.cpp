#include "feller/config.hpp"

#include <cmath>
#include <fstream>

#include "feller/errors.hpp"

namespace feller {

namespace {

using Json = nlohmann::ordered_json;

const Json& field(const Json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
    if (!j.contains(key)) throw ConfigError(path + "/" + key, "required field is missing");
    return j.at(key);
}

std::string str_field(const Json& j, const std::string& path, const std::string& key) {
    const Json& v = field(j, path, key);
    if (!v.is_string()) throw ConfigError(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

double num_field(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

int int_field(const Json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

Rational rational_field(const Json& v, const std::string& path) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_number_unsigned()) return Rational(v.get<unsigned long long>());
        if (v.is_number_float()) return rational_from_double(v.get<double>());
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "expected a rational as \"p/q\" string or number");
}

Point point_field(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
    std::vector<double> c;
    for (std::size_t i = 0; i < v.size(); ++i) c.push_back(num_field(v[i], path + "/" + std::to_string(i)));
    try {
        return Point(std::move(c));
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

SpanPoint span_field(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty())
        throw ConfigError(path, "expected a nonempty array of rationals");
    SpanPoint u;
    for (std::size_t i = 0; i < v.size(); ++i)
        u.coords.push_back(rational_field(v[i], path + "/" + std::to_string(i)));
    return u;
}

Semigroup parse_semigroup_spec(const Json& j, const std::string& path) {
    const std::string kind = str_field(j, path, "kind");
    try {
        if (kind == "scaling") {
            const Json& w = field(j, path, "weights");
            if (!w.is_array() || w.empty())
                throw ConfigError(path + "/weights", "expected a nonempty array of rationals");
            std::vector<Rational> weights;
            for (std::size_t i = 0; i < w.size(); ++i)
                weights.push_back(rational_field(w[i], path + "/weights/" + std::to_string(i)));
            const int dim = int_field(field(j, path, "dimension"), path + "/dimension");
            bool any_signs = false;
            if (j.contains("allow_any_signs")) {
                if (!j.at("allow_any_signs").is_boolean())
                    throw ConfigError(path + "/allow_any_signs", "expected a boolean");
                any_signs = j.at("allow_any_signs").get<bool>();
            }
            return Semigroup::scaling(AdditiveFunction::from_weights(std::move(weights)), dim,
                                      any_signs);
        }
        if (kind == "identity")
            return Semigroup::identity(int_field(field(j, path, "dimension"), path + "/dimension"));
        if (kind == "finite-kernel") {
            const Json& st = field(j, path, "states");
            if (!st.is_array() || st.empty())
                throw ConfigError(path + "/states", "expected a nonempty array of points");
            std::vector<Point> states;
            for (std::size_t i = 0; i < st.size(); ++i)
                states.push_back(point_field(st[i], path + "/states/" + std::to_string(i)));
            const Json& mx = field(j, path, "matrix");
            if (!mx.is_array() || mx.size() != states.size())
                throw ConfigError(path + "/matrix", "expected one row per state");
            std::vector<std::vector<Rational>> matrix;
            for (std::size_t i = 0; i < mx.size(); ++i) {
                const std::string rp = path + "/matrix/" + std::to_string(i);
                if (!mx[i].is_array() || mx[i].size() != states.size())
                    throw ConfigError(rp, "expected one entry per state");
                std::vector<Rational> row;
                for (std::size_t k = 0; k < mx[i].size(); ++k)
                    row.push_back(rational_field(mx[i][k], rp + "/" + std::to_string(k)));
                matrix.push_back(std::move(row));
            }
            return Semigroup::finite_kernel(std::move(states), std::move(matrix));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/kind",
                      "unknown semigroup kind (expected scaling, identity, or finite-kernel)");
}

TestFunction parse_function_spec(const Json& j, const std::string& path) {
    const std::string kind = str_field(j, path, "kind");
    std::string name;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ConfigError(path + "/name", "expected a string");
        name = j.at("name").get<std::string>();
    }
    try {
        if (kind == "norm-anchor")
            return TestFunction::norm_anchor(point_field(field(j, path, "anchor"), path + "/anchor"),
                                             name);
        if (kind == "truncated-norm-anchor")
            return TestFunction::truncated_norm_anchor(
                point_field(field(j, path, "anchor"), path + "/anchor"), name);
        if (kind == "table") {
            const Json& pts = field(j, path, "points");
            if (!pts.is_array()) throw ConfigError(path + "/points", "expected an array of points");
            std::vector<Point> points;
            for (std::size_t i = 0; i < pts.size(); ++i)
                points.push_back(point_field(pts[i], path + "/points/" + std::to_string(i)));
            const Json& vals = field(j, path, "values");
            if (!vals.is_array() || vals.size() != points.size())
                throw ConfigError(path + "/values", "expected one value per point");
            std::vector<double> values;
            for (std::size_t i = 0; i < vals.size(); ++i)
                values.push_back(num_field(vals[i], path + "/values/" + std::to_string(i)));
            const double lip = num_field(field(j, path, "lipschitz"), path + "/lipschitz");
            return TestFunction::table(std::move(points), std::move(values), lip, name);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/kind",
                      "unknown test-function kind (expected norm-anchor, truncated-norm-anchor, "
                      "or table)");
}

}  // namespace

Metric parse_metric_spec(const Json& j, const std::string& path) {
    const std::string kind = str_field(j, path, "kind");
    try {
        if (kind == "pnorm") {
            const Json& p = field(j, path, "p");
            if (p.is_string() && p.get<std::string>() == "inf") return Metric::pnorm(Metric::kInfinity);
            const double pv = num_field(p, path + "/p");
            if (!(pv >= 1.0)) throw ConfigError(path + "/p", "p must be >= 1 or \"inf\"");
            return Metric::pnorm(pv);
        }
        if (kind == "table") {
            const Json& pts = field(j, path, "points");
            if (!pts.is_array()) throw ConfigError(path + "/points", "expected an array of points");
            std::vector<Point> points;
            for (std::size_t i = 0; i < pts.size(); ++i)
                points.push_back(point_field(pts[i], path + "/points/" + std::to_string(i)));
            const Json& ent = field(j, path, "entries");
            if (!ent.is_array() || ent.size() != points.size())
                throw ConfigError(path + "/entries", "expected one row per point");
            std::vector<std::vector<double>> entries;
            for (std::size_t i = 0; i < ent.size(); ++i) {
                const std::string rp = path + "/entries/" + std::to_string(i);
                if (!ent[i].is_array() || ent[i].size() != points.size())
                    throw ConfigError(rp, "expected one entry per point");
                std::vector<double> row;
                for (std::size_t k = 0; k < ent[i].size(); ++k)
                    row.push_back(num_field(ent[i][k], rp + "/" + std::to_string(k)));
                entries.push_back(std::move(row));
            }
            return Metric::table(std::move(points), std::move(entries));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/kind", "unknown metric kind (expected pnorm or table)");
}

Schedule parse_schedule_spec(const Json& j, const std::string& path) {
    try {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "linear") return Schedule::linear();
            if (s == "geometric") return Schedule::geometric();
            throw ConfigError(path, "unknown schedule name (expected linear or geometric)");
        }
        if (j.is_object() && j.contains("values")) {
            const Json& vals = j.at("values");
            if (!vals.is_array() || vals.empty())
                throw ConfigError(path + "/values", "expected a nonempty array of numbers");
            std::vector<double> values;
            for (std::size_t i = 0; i < vals.size(); ++i)
                values.push_back(num_field(vals[i], path + "/values/" + std::to_string(i)));
            return Schedule::table(std::move(values));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "expected \"linear\", \"geometric\", or {\"values\": [...]}");
}

std::function<double(const Point&, const Point&)> parse_cost_spec(const Json& j) {
    const std::string path = "/cost";
    Metric base = parse_metric_spec(field(j, "", "metric"), path + "/metric");
    if (j.contains("family")) {
        const Json& fam = j.at("family");
        Schedule sched = parse_schedule_spec(field(fam, path + "/family", "schedule"),
                                             path + "/family/schedule");
        const int n = int_field(field(fam, path + "/family", "n"), path + "/family/n");
        if (n < 1) throw ConfigError(path + "/family/n", "family index must be >= 1");
        PseudoMetricFamily family(std::move(base), std::move(sched));
        return [family, n](const Point& a, const Point& b) { return family.eval(n, a, b); };
    }
    bool truncate = false;
    if (j.contains("truncate")) {
        if (!j.at("truncate").is_boolean())
            throw ConfigError(path + "/truncate", "expected a boolean");
        truncate = j.at("truncate").get<bool>();
    }
    return [base, truncate](const Point& a, const Point& b) {
        const double d = base.eval(a, b);
        return truncate ? std::min(1.0, d) : d;
    };
}

RunConfig parse_run_config(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    RunConfig cfg;

    cfg.check = str_field(doc, "", "check");
    if (cfg.check != "e" && cfg.check != "asymptotic-e" && cfg.check != "asf")
        throw ConfigError("/check", "expected \"e\", \"asymptotic-e\", or \"asf\"");

    cfg.semigroup = parse_semigroup_spec(field(doc, "", "semigroup"), "/semigroup");
    cfg.metric = parse_metric_spec(field(doc, "", "metric"), "/metric");
    if (doc.contains("family"))
        cfg.family_schedule =
            parse_schedule_spec(field(doc.at("family"), "/family", "schedule"), "/family/schedule");
    cfg.y = point_field(field(doc, "", "y"), "/y");

    const Json& sch = field(doc, "", "schedules");
    const std::string sp = "/schedules";

    const Json& times = field(sch, sp, "times");
    if (times.is_array()) {
        for (std::size_t i = 0; i < times.size(); ++i)
            cfg.schedule.times.push_back(span_field(times[i], sp + "/times/" + std::to_string(i)));
    } else if (times.is_object()) {
        if (str_field(times, sp + "/times", "kind") != "ray")
            throw ConfigError(sp + "/times/kind", "unknown times generator (expected ray)");
        const SpanPoint dir = span_field(field(times, sp + "/times", "direction"),
                                         sp + "/times/direction");
        const int count = int_field(field(times, sp + "/times", "count"), sp + "/times/count");
        if (count < 1) throw ConfigError(sp + "/times/count", "count must be >= 1");
        for (int i = 1; i <= count; ++i) cfg.schedule.times.push_back(span_scale(Rational(i), dir));
    } else {
        throw ConfigError(sp + "/times", "expected an array of time points or a ray generator");
    }

    const Json& radii = field(sch, sp, "radii");
    if (!radii.is_array() || radii.empty())
        throw ConfigError(sp + "/radii", "expected a nonempty array of positive numbers");
    for (std::size_t i = 0; i < radii.size(); ++i)
        cfg.schedule.radii.push_back(num_field(radii[i], sp + "/radii/" + std::to_string(i)));
    for (std::size_t i = 0; i < cfg.schedule.radii.size(); ++i) {
        const double g = cfg.schedule.radii[i];
        if (!(g > 0.0) || !std::isfinite(g))
            throw ConfigError(sp + "/radii/" + std::to_string(i),
                              "radii must be positive and finite");
        if (i > 0 && !(g < cfg.schedule.radii[i - 1]))
            throw ConfigError(sp + "/radii", "radii must be strictly decreasing");
    }

    if (sch.contains("tail_start"))
        cfg.schedule.tail_start =
            static_cast<std::size_t>(int_field(sch.at("tail_start"), sp + "/tail_start"));
    if (sch.contains("tail_window")) {
        const int w = int_field(sch.at("tail_window"), sp + "/tail_window");
        if (w < 1) throw ConfigError(sp + "/tail_window", "tail window must be >= 1");
        cfg.schedule.tail_window = static_cast<std::size_t>(w);
    }

    if (doc.contains("seed")) {
        const Json& s = doc.at("seed");
        if (!s.is_number_unsigned() && !s.is_number_integer())
            throw ConfigError("/seed", "expected a nonnegative integer");
        cfg.seed = s.get<std::uint64_t>();
    }

    const Json& probes = field(sch, sp, "probes");
    const std::string pk = str_field(probes, sp + "/probes", "kind");
    try {
        if (pk == "explicit") {
            const Json& pts = field(probes, sp + "/probes", "points");
            if (!pts.is_array() || pts.size() != cfg.schedule.radii.size())
                throw ConfigError(sp + "/probes/points", "expected one probe array per radius");
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const std::string kp = sp + "/probes/points/" + std::to_string(k);
                if (!pts[k].is_array() || pts[k].empty())
                    throw ConfigError(kp, "expected a nonempty array of points");
                std::vector<Point> ball;
                for (std::size_t i = 0; i < pts[k].size(); ++i)
                    ball.push_back(point_field(pts[k][i], kp + "/" + std::to_string(i)));
                cfg.schedule.probe_points.push_back(std::move(ball));
            }
        } else if (pk == "default" || pk == "random") {
            const int count = int_field(field(probes, sp + "/probes", "count"),
                                        sp + "/probes/count");
            if (count < 1) throw ConfigError(sp + "/probes/count", "count must be >= 1");
            for (std::size_t k = 0; k < cfg.schedule.radii.size(); ++k) {
                const double g = cfg.schedule.radii[k];
                cfg.schedule.probe_points.push_back(
                    pk == "default"
                        ? default_probe_points(*cfg.metric, cfg.y, g, static_cast<std::size_t>(count))
                        : random_probe_points(*cfg.metric, cfg.y, g, static_cast<std::size_t>(count),
                                              cfg.seed + k));
            }
        } else {
            throw ConfigError(sp + "/probes/kind",
                              "unknown probe kind (expected default, random, or explicit)");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(sp + "/probes", e.what());
    }

    if (doc.contains("functions")) {
        const Json& fns = doc.at("functions");
        if (!fns.is_array()) throw ConfigError("/functions", "expected an array");
        for (std::size_t i = 0; i < fns.size(); ++i)
            cfg.functions.push_back(parse_function_spec(fns[i], "/functions/" + std::to_string(i)));
    }
    if (cfg.check != "asf" && cfg.functions.empty())
        throw ConfigError("/functions", "equicontinuity checks need at least one test function");

    if (doc.contains("options")) {
        const Json& o = doc.at("options");
        if (!o.is_object()) throw ConfigError("/options", "expected an object");
        if (o.contains("tol")) cfg.options.tol = num_field(o.at("tol"), "/options/tol");
        if (o.contains("eps0")) cfg.options.eps0 = num_field(o.at("eps0"), "/options/eps0");
        if (o.contains("asf_fail"))
            cfg.options.asf_fail = num_field(o.at("asf_fail"), "/options/asf_fail");
    }

    if (doc.contains("format")) {
        const Json& f = doc.at("format");
        if (!f.is_string() || (f != "json" && f != "csv"))
            throw ConfigError("/format", "expected \"json\" or \"csv\"");
        cfg.format = f.get<std::string>();
    }
    if (doc.contains("out")) {
        if (!doc.at("out").is_string()) throw ConfigError("/out", "expected a string");
        cfg.out_dir = doc.at("out").get<std::string>();
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("", std::string("config file is not valid JSON: ") + e.what());
    }
    return parse_run_config(doc);
}

PropertyReport run_check(const RunConfig& cfg) {
    if (cfg.check == "e")
        return check_e_property(*cfg.semigroup, *cfg.metric, cfg.y, cfg.schedule, cfg.functions,
                                cfg.options);
    if (cfg.check == "asymptotic-e")
        return check_asymptotic_e_property(*cfg.semigroup, *cfg.metric, cfg.y, cfg.schedule,
                                           cfg.functions, cfg.options);
    PseudoMetricFamily fam(*cfg.metric,
                           cfg.family_schedule ? *cfg.family_schedule : Schedule::linear());
    return check_asf(*cfg.semigroup, cfg.y, cfg.schedule, fam, cfg.options);
}

}  // namespace feller
