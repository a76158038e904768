#include "feller/demos.hpp"

#include <cmath>

#include "feller/errors.hpp"
#include "feller/serialize.hpp"

namespace feller {

namespace {

using Json = nlohmann::ordered_json;

struct Expectation {
    std::string name;
    bool pass = false;
    std::string detail;
};

Json expectations_json(const std::vector<Expectation>& exps) {
    Json a = Json::array();
    for (const auto& e : exps) {
        Json row;
        row["name"] = e.name;
        row["pass"] = e.pass;
        row["detail"] = e.detail;
        a.push_back(std::move(row));
    }
    return a;
}

bool all_pass(const std::vector<Expectation>& exps) {
    for (const auto& e : exps)
        if (!e.pass) return false;
    return true;
}

SpanPoint time2(int a, int b) {
    SpanPoint u;
    u.coords = {Rational(a), Rational(b)};
    return u;
}

}  // namespace

DemoOutput run_demo_asf_without_e(const AsfDemoOverrides& o) {
    const Rational s1 = o.s1.value_or(Rational(-1));
    const Rational s2 = o.s2.value_or(Rational(1));
    if (s1 >= 0)
        throw ConfigError("/overrides/s1",
                          "the first weight must be negative: the probed times advance along the "
                          "first basis direction, which must contract");
    if (s2 <= 0)
        throw ConfigError("/overrides/s2",
                          "the second weight must be positive: the blow-up times advance along "
                          "the second basis direction, which must expand");
    const std::vector<double> gammas = o.gammas.value_or(std::vector<double>{1.0, 0.1});
    if (gammas.empty()) throw ConfigError("/overrides/gammas", "radius ladder must be nonempty");
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        if (!(gammas[k] > 0.0) || !std::isfinite(gammas[k]))
            throw ConfigError("/overrides/gammas", "radii must be positive and finite");
        if (k > 0 && !(gammas[k] < gammas[k - 1]))
            throw ConfigError("/overrides/gammas", "radii must be strictly decreasing");
    }

    const Semigroup sg = Semigroup::scaling(AdditiveFunction::from_weights({s1, s2}), 2);
    const Metric rho = Metric::euclidean();
    const PseudoMetricFamily fam(rho, Schedule::linear());
    const Point y{1.0, 0.0};
    constexpr int kSteps = 30;
    constexpr std::size_t kProbes = 8;

    // ASF scan along times n * b1 (contracting direction).
    ProbeSchedule asf_sched;
    for (int n = 1; n <= kSteps; ++n) asf_sched.times.push_back(time2(n, 0));
    asf_sched.radii = gammas;
    for (double g : gammas) asf_sched.probe_points.push_back(default_probe_points(rho, y, g, kProbes));
    const PropertyReport asf_rep = check_asf(sg, y, asf_sched, fam);

    // Asymptotic equicontinuity scan along times m * b2 (expanding direction),
    // witnessed by the unbounded distance-to-origin function.
    ProbeSchedule ae_sched;
    for (int m = 1; m <= kSteps; ++m) ae_sched.times.push_back(time2(0, m));
    ae_sched.radii = gammas;
    for (double g : gammas) ae_sched.probe_points.push_back(default_probe_points(rho, y, g, kProbes));
    const std::vector<TestFunction> fns{
        TestFunction::norm_anchor(Point{0.0, 0.0}, "dist-to-origin")};
    const PropertyReport ae_rep = check_asymptotic_e_property(sg, rho, y, ae_sched, fns);

    // Blow-up witness: a radial probe with a different norm, so the scale
    // factor e^{m*s2} multiplies a fixed nonzero gap.
    const Point x{1.1, 0.0};
    const BlowupCertificate sample = blowup_certificate(y, x, 10, s2);
    const double target = 1e6;
    const int m_star = blowup_threshold(y, x, s2, target);

    std::vector<Expectation> exps;
    exps.push_back({"asf-holds-on-probes", asf_rep.verdict == Verdict::HoldsOnProbes,
                    "verdict: " + verdict_name(asf_rep.verdict)});

    {
        bool ok = true;
        std::string detail = "every measured value is below gamma * n * e^{n*s1}";
        for (const auto& row : asf_rep.trace) {
            const double bound = scaling_asf_bound(row.n_or_m, row.gamma, s1);
            if (!(row.value <= bound)) {
                ok = false;
                detail = "violated at gamma=" + fmt_double(row.gamma) +
                         ", n=" + std::to_string(row.n_or_m) + ": " + fmt_double(row.value) +
                         " > " + fmt_double(bound);
                break;
            }
        }
        exps.push_back({"asf-below-decay-bound", ok, detail});
    }

    exps.push_back({"asymptotic-e-fails", ae_rep.verdict == Verdict::FailsWithCertificate,
                    "verdict: " + verdict_name(ae_rep.verdict)});

    {
        const bool has_slope = ae_rep.certificate && ae_rep.certificate->slope;
        const bool ok = has_slope && *ae_rep.certificate->slope == s2;
        exps.push_back({"asymptotic-e-exact-slope", ok,
                        has_slope ? "certified exponent slope " +
                                        rational_str(*ae_rep.certificate->slope) + " per step"
                                  : "certificate carries no slope"});
    }

    {
        const BlowupCertificate at = blowup_certificate(y, x, m_star, s2);
        const bool minimal =
            m_star == 0 || !(blowup_certificate(y, x, m_star - 1, s2).value >= target);
        const bool ok = at.value >= target && minimal;
        exps.push_back({"blowup-threshold-minimal", ok,
                        "m* = " + std::to_string(m_star) + " is the first step with value >= " +
                            fmt_double(target)});
    }

    DemoOutput out;
    out.exit_code = all_pass(exps) ? 0 : 1;
    Json j;
    j["demo"] = "asf-without-e";
    j["weights"] = Json::array({rational_str(s1), rational_str(s2)});
    j["y"] = point_json(y);
    j["gammas"] = gammas;
    j["expectations"] = expectations_json(exps);
    j["asf"] = report_json(asf_rep);
    j["asymptotic_e"] = report_json(ae_rep);
    Json blow;
    blow["x"] = point_json(x);
    blow["sample_m"] = 10;
    blow["sample"] = blowup_json(sample);
    blow["target"] = target;
    blow["m_star"] = m_star;
    blow["slope"] = rational_str(s2);
    j["blowup"] = std::move(blow);
    out.json = std::move(j);
    out.reports.emplace_back("asf", asf_rep);
    out.reports.emplace_back("asymptotic_e", ae_rep);
    return out;
}

DemoOutput run_demo_e_without_asf(const IdentityDemoOverrides& o) {
    const Point y = o.y.value_or(Point{0.25, 0.0});
    const Point z = o.z.value_or(Point{0.65, 0.0});
    const double gamma = o.gamma.value_or(0.5);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ConfigError("/overrides/gamma", "ball radius must be positive and finite");
    const Metric rho = Metric::euclidean();
    if (z == y || !(rho.eval(z, y) < gamma))
        throw ConfigError("/overrides/z",
                          "the refutation needs a limit point: supply a candidate distinct from "
                          "the center and strictly inside the gamma-ball (every neighbourhood of "
                          "a limit point contains a second point)");

    const Semigroup sg = Semigroup::identity(2);
    const PseudoMetricFamily fam(rho, Schedule::linear());
    constexpr int kLadder = 20;
    constexpr int kRefutationRange = 10;

    // Dyadic radii with probes at exactly that distance along the first axis,
    // so the per-radius maxima equal Lip(f) * gamma_k with no rounding.
    ProbeSchedule sched;
    sched.times.push_back(SpanPoint{{Rational(0)}});
    std::vector<Point> table_pts{y};
    for (int k = 1; k <= kLadder; ++k) {
        const double g = std::ldexp(1.0, -k);
        sched.radii.push_back(g);
        const Point right{y[0] + g, y[1]};
        const Point left{y[0] - g, y[1]};
        sched.probe_points.push_back({right, left});
        table_pts.push_back(right);
        table_pts.push_back(left);
    }
    std::vector<double> table_vals;
    table_vals.reserve(table_pts.size());
    for (const auto& p : table_pts) table_vals.push_back(rho.eval(p, y));
    const std::vector<TestFunction> fns{
        TestFunction::truncated_norm_anchor(Point{0.0, 0.0}, "min(1,dist-to-origin)"),
        TestFunction::table(table_pts, table_vals, 1.0, "dist-to-center-table")};

    const PropertyReport e_rep = check_e_property(sg, rho, y, sched, fns);
    const AsfRefutation ref = identity_asf_refutation(fam, y, gamma, {z}, kRefutationRange);

    std::vector<Expectation> exps;
    exps.push_back({"e-holds-on-probes", e_rep.verdict == Verdict::HoldsOnProbes,
                    "verdict: " + verdict_name(e_rep.verdict)});

    {
        bool ok = true;
        std::string detail = "per-radius maxima equal Lip(f) * gamma_k bit for bit";
        for (std::size_t k = 0; k < e_rep.summary.size(); ++k) {
            if (e_rep.summary[k].full_max != e_rep.summary[k].gamma) {
                ok = false;
                detail = "mismatch at gamma=" + fmt_double(e_rep.summary[k].gamma) + ": " +
                         fmt_double(e_rep.summary[k].full_max);
                break;
            }
        }
        exps.push_back({"e-decay-exact", ok, detail});
    }

    {
        const bool ok = ref.lower_bound == 0.5 && ref.n0 >= 1;
        exps.push_back({"refutation-lower-bound", ok,
                        "sigma_n(z, y) >= 1/2 from n0 = " + std::to_string(ref.n0)});
    }

    {
        // First n with sigma_n = 1 must be ceil(1 / rho(z, y)), decided on the
        // exactly rationalized distance.
        const Rational inv = Rational(1) / rational_from_double(ref.base_distance);
        const int expected = static_cast<int>(rational_ceil(inv).convert_to<long long>());
        const bool ok = ref.reaches_one && *ref.reaches_one == expected &&
                        ref.values.back() == 1.0;
        exps.push_back({"refutation-reaches-one", ok,
                        ref.reaches_one ? "sigma_n reaches 1 at n = " +
                                              std::to_string(*ref.reaches_one) + ", ceiling " +
                                              std::to_string(expected)
                                        : "sigma_n never reaches 1 on the probed range"});
    }

    DemoOutput out;
    out.exit_code = all_pass(exps) ? 0 : 1;
    Json j;
    j["demo"] = "e-without-asf";
    j["y"] = point_json(y);
    j["gamma"] = gamma;
    j["expectations"] = expectations_json(exps);
    j["e"] = report_json(e_rep);
    j["refutation"] = refutation_json(ref);
    out.json = std::move(j);
    out.reports.emplace_back("e", e_rep);
    return out;
}

}  // namespace feller
