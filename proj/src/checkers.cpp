#include "feller/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "feller/errors.hpp"
#include "feller/transport.hpp"

namespace feller {

namespace {

std::string point_str(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
    return os.str();
}

double norm2(const Point& p) {
    double s = 0.0;
    for (double v : p.c) s += v * v;
    return std::sqrt(s);
}

// Trend test for decay: each step may rise only by rounding slack.
bool nonincreasing(const std::vector<double>& d) {
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] > d[k - 1] * (1.0 + 1e-9) + 1e-15) return false;
    return true;
}

}  // namespace

void ProbeSchedule::validate(const Metric& rho, const Point& y) const {
    if (times.empty()) throw DataError("time schedule must be nonempty");
    if (radii.empty()) throw DataError("radius ladder must be nonempty");
    if (probe_points.size() != radii.size())
        throw DimensionError("one probe set per radius", radii.size(), probe_points.size());
    if (tail_start >= times.size())
        throw DataError("tail start index is past the end of the time schedule");
    if (tail_window == 0) throw DataError("tail window must be positive");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0) || !std::isfinite(radii[k]))
            throw DataError("radii must be positive and finite");
        if (k > 0 && !(radii[k] < radii[k - 1]))
            throw DataError("radii must be strictly decreasing");
        if (probe_points[k].empty()) throw DataError("every radius needs at least one probe point");
        for (const auto& x : probe_points[k])
            if (rho.eval(y, x) > radii[k])
                throw DataError("probe point " + point_str(x) + " falls outside the ball of radius " +
                                std::to_string(radii[k]));
    }
}

std::size_t ProbeSchedule::tail_begin() const {
    const std::size_t from_window = times.size() > tail_window ? times.size() - tail_window : 0;
    return std::max(tail_start, from_window);
}

std::vector<Point> default_probe_points(const Metric& rho, const Point& y, double gamma,
                                        std::size_t count) {
    if (rho.is_table())
        throw DataError("default probes need a p-norm metric; give explicit probe points instead");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DataError("probe radius must be positive");
    std::vector<Point> pts;
    if (count == 0) return pts;
    const std::size_t d = y.dim();
    if (d == 0) throw DataError("probe center must have at least one coordinate");
    const Point zero{std::vector<double>(d, 0.0)};
    const double nrm = rho.eval(y, zero);
    // Offsets scale as gamma*k/(k+1) < gamma, radial steps as gamma/((k+1)*|y|),
    // so every point stays strictly inside the ball with margin gamma/(k+1).
    for (std::size_t k = 1; pts.size() < count; ++k) {
        if (k > 64) throw DataError("too many default probes requested");
        const double scale = gamma * static_cast<double>(k) / static_cast<double>(k + 1);
        for (std::size_t i = 0; i < d && pts.size() < count; ++i)
            for (double sgn : {1.0, -1.0}) {
                if (pts.size() >= count) break;
                auto c = y.c;
                c[i] += sgn * scale;
                pts.push_back(Point(std::move(c)));
            }
        if (nrm > 0.0 && pts.size() < count) {
            const double s = gamma / (static_cast<double>(k + 1) * nrm);
            auto c = y.c;
            for (auto& v : c) v *= 1.0 + s;
            pts.push_back(Point(std::move(c)));  // radial: keeps |x| != |y|
        }
    }
    return pts;
}

std::vector<Point> random_probe_points(const Metric& rho, const Point& y, double gamma,
                                       std::size_t count, std::uint64_t seed) {
    if (rho.is_table())
        throw DataError("random probes need a p-norm metric; give explicit probe points instead");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DataError("probe radius must be positive");
    const std::size_t d = y.dim();
    if (d == 0) throw DataError("probe center must have at least one coordinate");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Point zero{std::vector<double>(d, 0.0)};
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t j = 1; pts.size() < count; ++j) {
        std::vector<double> u(d);
        double len = 0.0;
        do {
            for (auto& v : u) v = gauss(rng);
            len = rho.eval(Point(u), zero);
        } while (!(len > 0.0));
        const double r = gamma * static_cast<double>(j) / static_cast<double>(count + 1);
        auto c = y.c;
        for (std::size_t i = 0; i < d; ++i) c[i] += r * (u[i] / len);
        pts.push_back(Point(std::move(c)));
    }
    return pts;
}

TestFunction TestFunction::norm_anchor(Point anchor, std::string name) {
    TestFunction f;
    f.kind_ = Kind::NormAnchor;
    f.anchor_ = std::move(anchor);
    f.lipschitz_ = 1.0;
    f.bounded_ = false;
    f.name_ = name.empty() ? "dist" + point_str(f.anchor_) : std::move(name);
    return f;
}

TestFunction TestFunction::truncated_norm_anchor(Point anchor, std::string name) {
    TestFunction f;
    f.kind_ = Kind::TruncatedNormAnchor;
    f.anchor_ = std::move(anchor);
    f.lipschitz_ = 1.0;
    f.bounded_ = true;
    f.name_ = name.empty() ? "min(1,dist" + point_str(f.anchor_) + ")" : std::move(name);
    return f;
}

TestFunction TestFunction::table(std::vector<Point> points, std::vector<double> values,
                                 double lipschitz, std::string name) {
    if (points.size() != values.size())
        throw DimensionError("one value per table point", points.size(), values.size());
    if (points.empty()) throw DataError("test-function table must be nonempty");
    if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
        throw DataError("Lipschitz constant must be finite and nonnegative");
    for (double v : values)
        if (!std::isfinite(v)) throw DataError("test-function table values must be finite");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw DataError("test-function table points must be distinct");
    TestFunction f;
    f.kind_ = Kind::Table;
    f.table_points_ = std::move(points);
    f.table_values_ = std::move(values);
    f.lipschitz_ = lipschitz;
    f.bounded_ = true;
    f.name_ = name.empty() ? "table" : std::move(name);
    return f;
}

double TestFunction::eval(const Metric& rho, const Point& x) const {
    switch (kind_) {
        case Kind::NormAnchor:
            return rho.eval(x, anchor_);
        case Kind::TruncatedNormAnchor:
            return std::min(1.0, rho.eval(x, anchor_));
        case Kind::Table:
            for (std::size_t i = 0; i < table_points_.size(); ++i)
                if (table_points_[i] == x) return table_values_[i];
            throw DataError("test function '" + name_ + "' has no table value at " + point_str(x));
    }
    throw DataError("unreachable test-function kind");
}

void TestFunction::validate_lipschitz(const Metric& rho, const std::vector<Point>& sample) const {
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const double lhs = std::fabs(eval(rho, sample[i]) - eval(rho, sample[j]));
            const double rhs = lipschitz_ * rho.eval(sample[i], sample[j]);
            if (lhs > rhs * (1.0 + 1e-12) + 1e-15)
                throw DataError("test function '" + name_ +
                                "' violates its declared Lipschitz constant between " +
                                point_str(sample[i]) + " and " + point_str(sample[j]));
        }
}

std::string property_name(Property p) {
    switch (p) {
        case Property::E: return "e";
        case Property::AsymptoticE: return "asymptotic-e";
        case Property::Asf: return "asf";
    }
    return "?";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::HoldsOnProbes: return "HoldsOnProbes";
        case Verdict::FailsWithCertificate: return "FailsWithCertificate";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

std::vector<std::optional<Rational>> time_exponents(const Semigroup& sg,
                                                    const std::vector<SpanPoint>& times) {
    std::vector<std::optional<Rational>> exps(times.size());
    if (sg.kind() == SemigroupKind::Scaling)
        for (std::size_t i = 0; i < times.size(); ++i)
            exps[i] = sg.scale_factor(times[i]).exponent;
    return exps;
}

// Common difference of consecutive exponents over [from, times). Exact; used
// as the certificate's growth slope when the increments are constant.
std::optional<Rational> exponent_slope(const std::vector<std::optional<Rational>>& exps,
                                       std::size_t from) {
    if (exps.size() < from + 2) return std::nullopt;
    for (std::size_t i = from; i < exps.size(); ++i)
        if (!exps[i]) return std::nullopt;
    Rational step = *exps[from + 1] - *exps[from];
    for (std::size_t i = from + 1; i + 1 < exps.size(); ++i)
        if (*exps[i + 1] - *exps[i] != step) return std::nullopt;
    return step;
}

PropertyReport equicontinuity_scan(Property prop, const Semigroup& sg, const Metric& rho,
                                   const Point& y, const ProbeSchedule& sched,
                                   const std::vector<TestFunction>& fns, bool tail_scope,
                                   const CheckOptions& opt) {
    sched.validate(rho, y);
    if (fns.empty()) throw DataError("at least one test function is required");
    const std::size_t T = sched.times.size();
    const std::size_t K = sched.radii.size();
    const std::size_t F = fns.size();
    if (tail_scope && T - sched.tail_start < sched.tail_window)
        throw DataError("designated tail is shorter than the tail window");

    std::vector<Point> sample{y};
    for (const auto& ps : sched.probe_points) sample.insert(sample.end(), ps.begin(), ps.end());
    for (const auto& f : fns) f.validate_lipschitz(rho, sample);

    const auto exps = time_exponents(sg, sched.times);
    const std::size_t tail0 = sched.tail_begin();
    const std::size_t scope0 = tail_scope ? tail0 : 0;

    // U_t f(y) for every (function, time).
    std::vector<double> uy(F * T);
    for (std::size_t fi = 0; fi < F; ++fi) {
        const auto phi = [&rho, &f = fns[fi]](const Point& p) { return f.eval(rho, p); };
        for (std::size_t ti = 0; ti < T; ++ti) uy[fi * T + ti] = sg.dual_apply(sched.times[ti], phi, y);
    }

    PropertyReport rep;
    rep.property = prop;
    rep.options = opt;
    rep.tail_window = sched.tail_window;

    // Per (function, radius): max over scoped times and probes, its argmax
    // probe, and the first time label crossing eps0.
    std::vector<double> fn_max(F * K, 0.0);
    std::vector<std::size_t> fn_arg(F * K, 0);
    std::vector<int> fn_cross(F * K, 0);

    for (std::size_t k = 0; k < K; ++k) {
        double full_max = 0.0, tail_max = 0.0;
        for (std::size_t ti = 0; ti < T; ++ti) {
            double row = 0.0;
            for (std::size_t fi = 0; fi < F; ++fi) {
                const auto phi = [&rho, &f = fns[fi]](const Point& p) { return f.eval(rho, p); };
                double fn_row = 0.0;
                std::size_t fn_row_arg = 0;
                for (std::size_t pi = 0; pi < sched.probe_points[k].size(); ++pi) {
                    const double ux = sg.dual_apply(sched.times[ti], phi, sched.probe_points[k][pi]);
                    const double v = std::fabs(uy[fi * T + ti] - ux);
                    if (v > fn_row) {
                        fn_row = v;
                        fn_row_arg = pi;
                    }
                }
                row = std::max(row, fn_row);
                if (ti >= scope0) {
                    if (fn_row > fn_max[fi * K + k]) {
                        fn_max[fi * K + k] = fn_row;
                        fn_arg[fi * K + k] = fn_row_arg;
                    }
                    if (fn_cross[fi * K + k] == 0 && fn_row >= opt.eps0)
                        fn_cross[fi * K + k] = static_cast<int>(ti) + 1;
                }
            }
            rep.trace.push_back({sched.radii[k], static_cast<int>(ti) + 1, row, exps[ti]});
            full_max = std::max(full_max, row);
            if (ti >= tail0) tail_max = std::max(tail_max, row);
        }
        rep.summary.push_back({sched.radii[k], full_max, tail_max});
    }

    // Failure: one test function whose scoped maximum stays >= eps0 at every
    // radius, i.e. shrinking the ball never restores equicontinuity.
    for (std::size_t fi = 0; fi < F; ++fi) {
        bool fails = true;
        for (std::size_t k = 0; k < K && fails; ++k) fails = fn_max[fi * K + k] >= opt.eps0;
        if (!fails) continue;
        Certificate cert;
        cert.witness = fns[fi].name();
        cert.witness_bounded = fns[fi].bounded();
        cert.probe = sched.probe_points[K - 1][fn_arg[fi * K + (K - 1)]];
        cert.slope = exponent_slope(exps, scope0);
        cert.threshold_index = fn_cross[fi * K + (K - 1)];
        cert.lower_bound = opt.eps0;
        rep.certificate = std::move(cert);
        rep.verdict = Verdict::FailsWithCertificate;
        rep.note = "test function '" + fns[fi].name() +
                   "' keeps the scoped difference above eps0 at every probed radius";
        return rep;
    }

    std::vector<double> decision(K);
    for (std::size_t k = 0; k < K; ++k)
        decision[k] = tail_scope ? rep.summary[k].tail_max : rep.summary[k].full_max;
    if (decision[K - 1] <= opt.tol && nonincreasing(decision)) {
        rep.verdict = Verdict::HoldsOnProbes;
        rep.note = "probed differences decay below tol as the radius shrinks";
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "probed differences neither decay below tol nor certify a failure";
    }
    return rep;
}

}  // namespace

PropertyReport check_e_property(const Semigroup& sg, const Metric& rho, const Point& y,
                                const ProbeSchedule& sched, const std::vector<TestFunction>& fns,
                                const CheckOptions& opt) {
    return equicontinuity_scan(Property::E, sg, rho, y, sched, fns, /*tail_scope=*/false, opt);
}

PropertyReport check_asymptotic_e_property(const Semigroup& sg, const Metric& rho, const Point& y,
                                           const ProbeSchedule& sched,
                                           const std::vector<TestFunction>& fns,
                                           const CheckOptions& opt) {
    return equicontinuity_scan(Property::AsymptoticE, sg, rho, y, sched, fns, /*tail_scope=*/true,
                               opt);
}

PropertyReport check_asf(const Semigroup& sg, const Point& y, const ProbeSchedule& sched,
                         const PseudoMetricFamily& fam, const CheckOptions& opt) {
    sched.validate(fam.base(), y);
    const std::size_t T = sched.times.size();
    const std::size_t K = sched.radii.size();
    if (T - sched.tail_start < sched.tail_window)
        throw DataError("designated tail is shorter than the tail window");
    try {
        (void)fam.schedule().at(static_cast<int>(T));
    } catch (const Error& e) {
        throw DataError(std::string("pseudo-metric family does not cover the time schedule: ") +
                        e.what());
    }

    const auto exps = time_exponents(sg, sched.times);
    const std::size_t tail0 = sched.tail_begin();
    // The scaling semigroup multiplies every coordinate by the same factor,
    // and p-norms scale with it, so sigma_n between evolved Diracs has the
    // closed form min(1, a_n * e^{exponent} * rho(y, x)). Evaluating it this
    // way keeps the expression monotone in rho(y, x) and avoids materializing
    // points past double range.
    const bool scaling_closed_form =
        sg.kind() == SemigroupKind::Scaling && !fam.base().is_table();

    PropertyReport rep;
    rep.property = Property::Asf;
    rep.options = opt;
    rep.tail_window = sched.tail_window;

    std::vector<double> probe_tail_max(K > 0 ? sched.probe_points[K - 1].size() : 0, 0.0);
    std::vector<int> probe_cross(probe_tail_max.size(), 0);

    for (std::size_t k = 0; k < K; ++k) {
        double full_max = 0.0, tail_max = 0.0;
        for (std::size_t ti = 0; ti < T; ++ti) {
            const int n = static_cast<int>(ti) + 1;
            double row = 0.0;
            for (std::size_t pi = 0; pi < sched.probe_points[k].size(); ++pi) {
                const Point& x = sched.probe_points[k][pi];
                double g = 0.0;
                if (scaling_closed_form) {
                    const double base_dist = fam.base().eval(y, x);
                    const double factor = LogScaleFactor{*exps[ti]}.magnitude();
                    g = std::min(1.0, (fam.schedule().at(n) * factor) * base_dist);
                } else if (sg.has_pointwise_map()) {
                    g = fam.eval(n, sg.apply(sched.times[ti], y), sg.apply(sched.times[ti], x));
                } else {
                    const FiniteMeasure my =
                        sg.push(sched.times[ti], FiniteMeasure::dirac(y)).materialize();
                    const FiniteMeasure mx =
                        sg.push(sched.times[ti], FiniteMeasure::dirac(x)).materialize();
                    const auto cost = CostMatrix::for_measures(
                        my, mx, [&fam, n](const Point& a, const Point& b) { return fam.eval(n, a, b); });
                    g = wasserstein_primal(cost, my, mx).value;
                }
                row = std::max(row, g);
                if (k == K - 1 && ti >= tail0) {
                    probe_tail_max[pi] = std::max(probe_tail_max[pi], g);
                    if (probe_cross[pi] == 0 && g >= opt.asf_fail) probe_cross[pi] = n;
                }
            }
            rep.trace.push_back({sched.radii[k], n, row, exps[ti]});
            full_max = std::max(full_max, row);
            if (ti >= tail0) tail_max = std::max(tail_max, row);
        }
        rep.summary.push_back({sched.radii[k], full_max, tail_max});
    }

    bool fails = true;
    for (const auto& s : rep.summary) fails = fails && s.tail_max >= opt.asf_fail;
    if (fails) {
        std::size_t best = 0;
        for (std::size_t pi = 1; pi < probe_tail_max.size(); ++pi)
            if (probe_tail_max[pi] > probe_tail_max[best]) best = pi;
        Certificate cert;
        cert.witness = "separating-family distance";
        cert.witness_bounded = true;  // every sigma_n is capped at 1
        cert.probe = sched.probe_points[K - 1][best];
        cert.slope = exponent_slope(exps, tail0);
        cert.threshold_index = probe_cross[best];
        cert.lower_bound = opt.asf_fail;
        rep.certificate = std::move(cert);
        rep.verdict = Verdict::FailsWithCertificate;
        rep.note = "tail Wasserstein distances stay above the failure threshold at every radius";
        return rep;
    }

    std::vector<double> decision(K);
    for (std::size_t k = 0; k < K; ++k) decision[k] = rep.summary[k].tail_max;
    if (decision[K - 1] <= opt.tol && nonincreasing(decision)) {
        rep.verdict = Verdict::HoldsOnProbes;
        rep.note = "tail Wasserstein distances decay below tol as the radius shrinks";
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "tail Wasserstein distances neither decay below tol nor certify a failure";
    }
    return rep;
}

double scaling_asf_bound(int n, double gamma, const Rational& s1) {
    if (n < 1) throw DataError("decay bound needs n >= 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw DataError("gamma must be finite and nonnegative");
    if (s1 >= 0) throw DataError("decay bound needs a negative weight");
    // Shaped as (n * factor) * gamma to match the measured closed form
    // (a_n * factor) * dist: with dist <= gamma both roundings are monotone.
    const double factor = LogScaleFactor{s1 * n}.magnitude();
    return (static_cast<double>(n) * factor) * gamma;
}

BlowupCertificate blowup_certificate(const Point& y, const Point& x, int m, const Rational& s2) {
    if (y.dim() != x.dim()) throw DimensionError("blow-up points", y.dim(), x.dim());
    if (m < 0) throw DataError("step count must be nonnegative");
    if (s2 <= 0) throw DataError("blow-up needs a positive weight");
    BlowupCertificate c;
    c.delta = std::fabs(norm2(y) - norm2(x));
    if (c.delta == 0.0) throw DataError("blow-up witness needs |y| != |x|");
    c.exponent = s2 * m;
    c.value = c.delta * std::exp(rational_to_double(c.exponent));  // +inf past double range
    return c;
}

int blowup_threshold(const Point& y, const Point& x, const Rational& s2, double target) {
    if (!(target > 0.0) || !std::isfinite(target))
        throw DataError("target must be positive and finite");
    const BlowupCertificate base = blowup_certificate(y, x, 0, s2);
    const double delta = base.delta;
    const double s = rational_to_double(s2);
    const auto reached = [&](long long m) {
        // Same comparator a direct scan over m uses; the log form only takes
        // over once the value is past double range (hence past any target).
        if (std::log(delta) + static_cast<double>(m) * s > 709.0) return true;
        return delta * std::exp(static_cast<double>(m) * s) >= target;
    };
    double guess = std::ceil((std::log(target) - std::log(delta)) / s);
    if (!std::isfinite(guess)) guess = 0.0;
    long long m = guess < 0.0 ? 0 : static_cast<long long>(std::min(guess, 4e15));
    while (m > 0 && reached(m - 1)) --m;
    while (!reached(m)) ++m;
    if (m > std::numeric_limits<int>::max())
        throw DataError("blow-up threshold exceeds the integer range");
    return static_cast<int>(m);
}

AsfRefutation identity_asf_refutation(const PseudoMetricFamily& fam, const Point& y, double gamma,
                                      const std::vector<Point>& candidates, int max_n) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DataError("gamma must be positive and finite");
    if (max_n < 1) throw DataError("refutation range must contain at least n = 1");
    const Metric& rho = fam.base();
    const Point* z = nullptr;
    double dist = 0.0;
    for (const auto& cand : candidates) {
        if (cand == y) continue;
        const double d = rho.eval(cand, y);
        if (d > 0.0 && d < gamma) {
            z = &cand;
            dist = d;
            break;
        }
    }
    if (z == nullptr)
        throw DataError("no candidate point distinct from the center lies strictly inside the "
                        "gamma-ball; the refutation needs a limit point, whose every "
                        "neighbourhood contains a second point of the probed set");

    AsfRefutation out;
    out.z = *z;
    out.base_distance = dist;
    out.lower_bound = 0.5;
    const Rational rho_q = rational_from_double(dist);
    const Rational half(1, 2);
    for (int n = 1; n <= max_n; ++n) {
        out.values.push_back(fam.eval(n, *z, y));
        const Rational scaled = fam.schedule().at_exact(n) * rho_q;
        if (out.n0 == 0 && scaled >= half) out.n0 = n;
        if (!out.reaches_one && scaled >= 1) out.reaches_one = n;
    }
    if (out.n0 == 0)
        throw DataError("sigma_n stays below 1/2 over the probed range; extend max_n");
    return out;
}

}  // namespace feller
