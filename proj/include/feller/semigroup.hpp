#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "feller/hamel.hpp"
#include "feller/rational.hpp"
#include "feller/spaces.hpp"

namespace feller {

/// Exact log of a positive scale factor. The exponent is the certificate
/// currency for decay and blow-up: it composes additively with zero error,
/// while the magnitude e^exponent is only materialized on demand and may
/// overflow a double.
struct LogScaleFactor {
    Rational exponent;

    double magnitude() const;
    LogScaleFactor operator+(const LogScaleFactor& o) const { return {exponent + o.exponent}; }
    bool operator==(const LogScaleFactor& o) const { return exponent == o.exponent; }
};

/// A finite measure together with an exact log-scale applied to its atom
/// points: the represented measure has atoms at e^{log_scale} * point. Keeping
/// the exponent symbolic lets scaling-semigroup compositions stay exact where
/// plain doubles would drift or overflow.
struct ScaledMeasure {
    FiniteMeasure base;
    Rational log_scale = Rational(0);

    ScaledMeasure() = default;
    ScaledMeasure(FiniteMeasure m) : base(std::move(m)) {}  // NOLINT: implicit by design
    ScaledMeasure(FiniteMeasure m, Rational s) : base(std::move(m)), log_scale(std::move(s)) {}

    Rational total() const { return base.total(); }

    /// Atoms with the scale multiplied through, as plain doubles.
    FiniteMeasure materialize() const;

    bool operator==(const ScaledMeasure& o) const {
        return log_scale == o.log_scale && base == o.base;
    }
};

struct DualityCheck {
    double lhs = 0.0;  // integral of (U_t phi) d mu
    double rhs = 0.0;  // integral of phi d (P_t mu)
    bool equal = false;
    bool exact = false;  // whether the comparison was made in rational arithmetic
};

struct ScalingSpec {
    AdditiveFunction weights;
    int dimension;
};

struct IdentitySpec {
    int dimension;
};

struct DeterministicMapSpec {
    std::function<Point(const SpanPoint&, const Point&)> rule;
    int dimension;
    std::size_t time_dim;
};

struct FiniteKernelSpec {
    std::vector<Point> states;
    std::vector<std::vector<Rational>> matrix;  // row-stochastic, exact
};

enum class SemigroupKind : std::uint8_t { Scaling, Identity, DeterministicMap, FiniteKernel };

/// A Markov semigroup acting on finite measures by pushforward, with the dual
/// action on functions. Four variants: pointwise scaling by e^{f(u)} for an
/// additive weight function f, the identity semigroup, a user-supplied
/// deterministic flow, and a finite row-stochastic kernel in discrete time.
class Semigroup {
public:
    /// Scaling semigroup S_u(x) = e^{f(u)} x. The weight function must carry
    /// at least one negative and one positive weight so that both contraction
    /// and blow-up are realizable; pass allow_any_signs to construct
    /// deliberately degenerate instances.
    static Semigroup scaling(AdditiveFunction weights, int dimension,
                             bool allow_any_signs = false);

    static Semigroup identity(int dimension);

    /// Deterministic flow from a user rule. The semigroup law
    /// rule(u, rule(v, x)) == rule(u + v, x) is not decidable for a black box,
    /// so it is spot-checked on seeded random (u, v, x) triples at
    /// construction; violations throw DataError.
    static Semigroup deterministic_map(std::function<Point(const SpanPoint&, const Point&)> rule,
                                       int dimension, std::size_t time_dim,
                                       std::uint64_t validation_seed = 0);

    /// Discrete-time kernel on an explicit state set; rows must sum to 1
    /// exactly. Time points are one-dimensional with a nonnegative integer
    /// coordinate.
    static Semigroup finite_kernel(std::vector<Point> states,
                                   std::vector<std::vector<Rational>> matrix);

    SemigroupKind kind() const;
    int dimension() const;
    std::size_t time_dim() const;
    bool has_pointwise_map() const { return kind() != SemigroupKind::FiniteKernel; }

    const ScalingSpec& as_scaling() const { return std::get<ScalingSpec>(spec_); }
    const FiniteKernelSpec& as_kernel() const { return std::get<FiniteKernelSpec>(spec_); }

    /// S_u(x) for the map variants. Kernel semigroups have no pointwise map
    /// and negative time coordinates are rejected.
    Point apply(const SpanPoint& u, const Point& x) const;

    /// Exact exponent of the scale factor e^{f(u)} (scaling variant only).
    LogScaleFactor scale_factor(const SpanPoint& u) const;

    /// Image of the measure under time u; mass is preserved exactly.
    ScaledMeasure push(const SpanPoint& u, const ScaledMeasure& mu) const;

    /// (U_u phi)(x): phi(S_u x) for map variants, the kernel row average for
    /// the kernel variant (x must then be a state).
    double dual_apply(const SpanPoint& u, const std::function<double(const Point&)>& phi,
                      const Point& x) const;

    /// Both sides of the duality pairing: integral of U_u phi against mu and
    /// of phi against the pushforward. Compared exactly when mu carries exact
    /// masses, within 1e-12 * (1 + |lhs|) otherwise.
    DualityCheck duality_check(const SpanPoint& u, const std::function<double(const Point&)>& phi,
                               const FiniteMeasure& mu) const;

private:
    explicit Semigroup(std::variant<ScalingSpec, IdentitySpec, DeterministicMapSpec,
                                    FiniteKernelSpec> spec)
        : spec_(std::move(spec)) {}

    void require_time(const SpanPoint& u) const;
    std::size_t kernel_time(const SpanPoint& u) const;
    std::size_t state_index(const Point& x) const;

    std::variant<ScalingSpec, IdentitySpec, DeterministicMapSpec, FiniteKernelSpec> spec_;
};

/// Free-function spellings of the semigroup operations.
inline Point apply_map(const Semigroup& sg, const SpanPoint& u, const Point& x) {
    return sg.apply(u, x);
}
ScaledMeasure pushforward(const Semigroup& sg, const SpanPoint& u, const ScaledMeasure& mu);
inline double dual_apply(const Semigroup& sg, const SpanPoint& u,
                         const std::function<double(const Point&)>& phi, const Point& x) {
    return sg.dual_apply(u, phi, x);
}
inline DualityCheck duality_check(const Semigroup& sg, const SpanPoint& u,
                                  const std::function<double(const Point&)>& phi,
                                  const FiniteMeasure& mu) {
    return sg.duality_check(u, phi, mu);
}

}  // namespace feller
