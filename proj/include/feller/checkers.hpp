#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feller/rational.hpp"
#include "feller/semigroup.hpp"
#include "feller/spaces.hpp"

namespace feller {

/// Probe grid for equicontinuity-style checks: an ordered time schedule (with
/// a designated tail for limsup surrogates), a strictly decreasing ladder of
/// ball radii around the base point, and for each radius a finite set of
/// probe points inside that ball.
struct ProbeSchedule {
    std::vector<SpanPoint> times;
    std::size_t tail_start = 0;  // index into times where the tail begins
    std::vector<double> radii;   // strictly decreasing, positive
    std::vector<std::vector<Point>> probe_points;  // one set per radius
    std::size_t tail_window = 10;

    /// Checks the shape invariants and that every probe point lies in the
    /// closed ball of its radius around y.
    void validate(const Metric& rho, const Point& y) const;

    /// Index of the first time used by tail maxima: the designated tail,
    /// further narrowed to the last tail_window entries.
    std::size_t tail_begin() const;
};

/// Deterministic default probes in the closed ball B(y, gamma): canonical
/// coordinate offsets y +- gamma*k/(k+1)*e_i plus, when y != 0, the radial
/// family (1 + gamma/(n*|y|))*y whose points keep |x| != |y|. Requires a
/// p-norm metric; table metrics need explicit probe sets.
std::vector<Point> default_probe_points(const Metric& rho, const Point& y, double gamma,
                                        std::size_t count);

/// Seeded random probes: directions from a fixed-seed generator, radii spread
/// over (0, gamma). Same seed, same points.
std::vector<Point> random_probe_points(const Metric& rho, const Point& y, double gamma,
                                       std::size_t count, std::uint64_t seed);

/// Lipschitz test function: the distance to an anchor point, its truncation
/// at 1, or an explicit value table on a finite point set.
class TestFunction {
public:
    enum class Kind : std::uint8_t { NormAnchor, TruncatedNormAnchor, Table };

    static TestFunction norm_anchor(Point anchor, std::string name = "");
    static TestFunction truncated_norm_anchor(Point anchor, std::string name = "");
    static TestFunction table(std::vector<Point> points, std::vector<double> values,
                              double lipschitz, std::string name = "");

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double lipschitz() const { return lipschitz_; }
    bool bounded() const { return bounded_; }

    /// f(x). Anchor kinds measure distance with rho; table kinds require x
    /// to be one of the tabulated points.
    double eval(const Metric& rho, const Point& x) const;

    /// Asserts |f(a) - f(b)| <= L * rho(a, b) on all pairs from the sample,
    /// up to rounding slack. Throws DataError on a violation.
    void validate_lipschitz(const Metric& rho, const std::vector<Point>& sample) const;

private:
    TestFunction() = default;
    Kind kind_ = Kind::NormAnchor;
    std::string name_;
    double lipschitz_ = 1.0;
    bool bounded_ = false;
    Point anchor_;
    std::vector<Point> table_points_;
    std::vector<double> table_values_;
};

enum class Property : std::uint8_t { E, AsymptoticE, Asf };
enum class Verdict : std::uint8_t { HoldsOnProbes, FailsWithCertificate, Inconclusive };

std::string property_name(Property p);
std::string verdict_name(Verdict v);

/// One probed value: ball radius, 1-based time/family index, the measured
/// quantity, and (for scaling semigroups) the exact log of the scale factor
/// active at that time.
struct TraceRow {
    double gamma = 0.0;
    int n_or_m = 0;
    double value = 0.0;
    std::optional<Rational> exact_exponent;
};

/// Per-radius maxima of the trace: over the whole time schedule and over the
/// tail only. The tail max never exceeds the full max, which is the probed
/// form of "equicontinuity implies its asymptotic variant".
struct RadiusSummary {
    double gamma = 0.0;
    double full_max = 0.0;
    double tail_max = 0.0;
};

/// Replayable witness for a FailsWithCertificate verdict: which test function
/// or family failed, at which probe point, the exact per-step exponent slope
/// when the mechanism is geometric growth, the first time index crossing the
/// failure threshold, and the certified lower bound.
struct Certificate {
    std::string witness;
    bool witness_bounded = false;
    Point probe;
    std::optional<Rational> slope;
    int threshold_index = 0;
    double lower_bound = 0.0;
};

struct CheckOptions {
    double tol = 1e-6;      // decay target for HoldsOnProbes
    double eps0 = 1.0;      // divergence threshold for equicontinuity failure
    double asf_fail = 0.5;  // lower-bound threshold certified by ASF refutations
};

/// Verdicts are probe-relative by construction: HoldsOnProbes never claims a
/// proof, FailsWithCertificate always carries a replayable certificate.
struct PropertyReport {
    Property property = Property::E;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<TraceRow> trace;       // ordered by radius index, then time index
    std::vector<RadiusSummary> summary;
    std::optional<Certificate> certificate;
    CheckOptions options;
    std::size_t tail_window = 0;
    std::string note;
};

/// Equicontinuity of {U_t f} at y on probes: D_k = max over test functions,
/// all scheduled times and probes x in the radius-k ball of
/// |U_t f(y) - U_t f(x)|. HoldsOnProbes when the D_k trend decays below tol;
/// FailsWithCertificate when some single test function keeps D_k >= eps0 at
/// every radius.
PropertyReport check_e_property(const Semigroup& sg, const Metric& rho, const Point& y,
                                const ProbeSchedule& sched, const std::vector<TestFunction>& fns,
                                const CheckOptions& opt = {});

/// Same scan with the inner maximum restricted to the schedule's tail, the
/// finite surrogate of limsup over t.
PropertyReport check_asymptotic_e_property(const Semigroup& sg, const Metric& rho, const Point& y,
                                           const ProbeSchedule& sched,
                                           const std::vector<TestFunction>& fns,
                                           const CheckOptions& opt = {});

/// Asymptotic-strong-Feller scan at y: G(gamma, n) = max over probes x in the
/// radius-gamma ball of the sigma_n-Wasserstein distance between the Diracs
/// at y and x pushed to time t_n (n aligned 1..N with sched.times). Map
/// semigroups use the two-Dirac closed form; kernel semigroups go through the
/// transport solver. HoldsOnProbes when the per-radius tail maxima decay
/// below tol; FailsWithCertificate when some probe keeps the tail max >= the
/// asf_fail threshold at every radius.
PropertyReport check_asf(const Semigroup& sg, const Point& y, const ProbeSchedule& sched,
                         const PseudoMetricFamily& fam, const CheckOptions& opt = {});

/// Closed-form decay bound gamma * n * e^{n*s1} for the scaling semigroup
/// under the linear family: an upper bound for every measured G(gamma, n)
/// with probe distance <= gamma. Requires s1 < 0; the float expression is
/// shaped exactly like the measured fast-path value so the comparison is
/// rounding-safe.
double scaling_asf_bound(int n, double gamma, const Rational& s1);

/// Witness of equicontinuity blow-up for the scaling semigroup along times
/// with exact exponent m*s2: value = ||y| - |x|| * e^{m*s2} (Euclidean
/// norms). The exponent stays exact after the double value overflows.
struct BlowupCertificate {
    Rational exponent;   // m * s2
    double delta = 0.0;  // | |y| - |x| |
    double value = 0.0;  // delta * e^{m*s2}, +inf past double range
};

BlowupCertificate blowup_certificate(const Point& y, const Point& x, int m, const Rational& s2);

/// Smallest m >= 0 with blowup value >= target: the ceiling formula
/// (ln target - ln delta)/s2, fixed up locally with the same comparator a
/// direct scan over m would use.
int blowup_threshold(const Point& y, const Point& x, const Rational& s2, double target);

/// Certificate that the identity semigroup fails the ASF property for the
/// given separating family at a limit point y: a probe z != y inside the
/// gamma-ball with sigma_n(z, y) >= 1/2 for all n0 <= n <= N. Threshold
/// crossings are decided in exact arithmetic.
struct AsfRefutation {
    Point z;
    double base_distance = 0.0;       // rho(z, y)
    int n0 = 0;                       // first n with sigma_n(z, y) >= 1/2
    std::vector<double> values;       // sigma_n(z, y) for n = 1..N
    std::optional<int> reaches_one;   // first n with sigma_n(z, y) = 1 exactly
    double lower_bound = 0.5;
};

AsfRefutation identity_asf_refutation(const PseudoMetricFamily& fam, const Point& y, double gamma,
                                      const std::vector<Point>& candidates, int max_n);

}  // namespace feller
