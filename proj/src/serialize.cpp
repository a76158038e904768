#include "feller/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "feller/errors.hpp"

namespace feller {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

OrderedJson point_json(const Point& p) {
    OrderedJson a = OrderedJson::array();
    for (double v : p.c) a.push_back(v);
    return a;
}

OrderedJson span_json(const SpanPoint& u) {
    OrderedJson a = OrderedJson::array();
    for (const auto& c : u.coords) a.push_back(rational_str(c));
    return a;
}

OrderedJson measure_json(const FiniteMeasure& mu) {
    OrderedJson j;
    j["mode"] = mu.mode() == MassMode::Exact ? "exact" : "real";
    OrderedJson atoms = OrderedJson::array();
    for (const auto& a : mu.atoms()) {
        OrderedJson atom;
        atom["point"] = point_json(a.point);
        atom["mass"] = rational_str(a.mass);
        atoms.push_back(std::move(atom));
    }
    j["atoms"] = std::move(atoms);
    return j;
}

namespace {

Rational mass_from_json(const OrderedJson& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_unsigned()) return Rational(v.get<unsigned long long>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    throw DataError("measure mass must be a number or a \"p/q\" string");
}

Point point_from_json(const OrderedJson& v) {
    if (!v.is_array() || v.empty()) throw DataError("point must be a nonempty array of numbers");
    std::vector<double> c;
    c.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw DataError("point coordinates must be numbers");
        c.push_back(e.get<double>());
    }
    return Point(std::move(c));
}

}  // namespace

FiniteMeasure measure_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw DataError("measure document must be a JSON object");
    MassMode mode = MassMode::Exact;
    if (j.contains("mode")) {
        const auto& m = j.at("mode");
        if (!m.is_string() || (m != "exact" && m != "real"))
            throw DataError("measure mode must be \"exact\" or \"real\"");
        mode = m == "exact" ? MassMode::Exact : MassMode::Real;
    }
    if (!j.contains("atoms") || !j.at("atoms").is_array() || j.at("atoms").empty())
        throw DataError("measure document needs a nonempty \"atoms\" array");
    std::vector<FiniteMeasure::Atom> atoms;
    for (const auto& a : j.at("atoms")) {
        if (!a.is_object() || !a.contains("point") || !a.contains("mass"))
            throw DataError("each atom needs \"point\" and \"mass\" fields");
        atoms.push_back({point_from_json(a.at("point")), mass_from_json(a.at("mass"))});
    }
    return FiniteMeasure(std::move(atoms), mode);
}

FiniteMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open measure file: " + path);
    OrderedJson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("measure file " + path + " is not valid JSON: " + e.what());
    }
    return measure_from_json(j);
}

namespace {

OrderedJson certificate_json(const Certificate& c) {
    OrderedJson j;
    j["witness"] = c.witness;
    j["witness_bounded"] = c.witness_bounded;
    j["probe"] = point_json(c.probe);
    j["slope"] = c.slope ? OrderedJson(rational_str(*c.slope)) : OrderedJson(nullptr);
    j["threshold_index"] = c.threshold_index;
    j["lower_bound"] = c.lower_bound;
    return j;
}

}  // namespace

OrderedJson report_json(const PropertyReport& rep) {
    OrderedJson j;
    j["property"] = property_name(rep.property);
    j["verdict"] = verdict_name(rep.verdict);
    j["note"] = rep.note;
    j["tol"] = rep.options.tol;
    j["eps0"] = rep.options.eps0;
    j["asf_fail"] = rep.options.asf_fail;
    j["tail_window"] = rep.tail_window;
    OrderedJson summary = OrderedJson::array();
    for (const auto& s : rep.summary) {
        OrderedJson row;
        row["gamma"] = s.gamma;
        row["full_max"] = s.full_max;
        row["tail_max"] = s.tail_max;
        summary.push_back(std::move(row));
    }
    j["summary"] = std::move(summary);
    OrderedJson trace = OrderedJson::array();
    for (const auto& r : rep.trace) {
        OrderedJson row;
        row["gamma"] = r.gamma;
        row["n_or_m"] = r.n_or_m;
        row["value"] = r.value;
        row["exact_exponent"] =
            r.exact_exponent ? OrderedJson(rational_str(*r.exact_exponent)) : OrderedJson(nullptr);
        trace.push_back(std::move(row));
    }
    j["trace"] = std::move(trace);
    j["certificate"] = rep.certificate ? certificate_json(*rep.certificate) : OrderedJson(nullptr);
    return j;
}

std::string report_csv(const PropertyReport& rep) {
    std::ostringstream os;
    os << "property,gamma,n_or_m,value,exact_exponent\n";
    const std::string prop = property_name(rep.property);
    for (const auto& r : rep.trace) {
        os << prop << ',' << fmt_double(r.gamma) << ',' << r.n_or_m << ',' << fmt_double(r.value)
           << ',' << (r.exact_exponent ? rational_str(*r.exact_exponent) : "") << '\n';
    }
    return os.str();
}

OrderedJson refutation_json(const AsfRefutation& ref) {
    OrderedJson j;
    j["z"] = point_json(ref.z);
    j["base_distance"] = ref.base_distance;
    j["n0"] = ref.n0;
    j["values"] = ref.values;
    j["reaches_one"] = ref.reaches_one ? OrderedJson(*ref.reaches_one) : OrderedJson(nullptr);
    j["lower_bound"] = ref.lower_bound;
    return j;
}

OrderedJson blowup_json(const BlowupCertificate& cert) {
    OrderedJson j;
    j["exponent"] = rational_str(cert.exponent);
    j["delta"] = cert.delta;
    j["value"] = std::isfinite(cert.value) ? OrderedJson(cert.value)
                                           : OrderedJson("overflow: exceeds double range");
    return j;
}

OrderedJson gap_json(const GapResult& gap) {
    OrderedJson j;
    j["primal"] = gap.primal;
    j["dual"] = gap.dual;
    j["gap"] = gap.gap;
    j["gap_exact"] = gap.gap_exact ? OrderedJson(rational_str(*gap.gap_exact)) : OrderedJson(nullptr);
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file: " + path);
    out << content;
    if (!out) throw DataError("failed writing output file: " + path);
}

}  // namespace feller
