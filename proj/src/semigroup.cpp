#include "feller/semigroup.hpp"

#include <cmath>
#include <random>

#include "feller/errors.hpp"

namespace feller {

double LogScaleFactor::magnitude() const { return std::exp(rational_to_double(exponent)); }

FiniteMeasure ScaledMeasure::materialize() const {
    if (log_scale == 0) return base;
    const double s = std::exp(rational_to_double(log_scale));
    if (!std::isfinite(s))
        throw DataError("scale factor e^" + rational_str(log_scale) +
                        " overflows a double; keep the measure in scaled form");
    std::vector<FiniteMeasure::Atom> atoms;
    atoms.reserve(base.size());
    for (const auto& a : base.atoms()) {
        std::vector<double> c(a.point.c);
        for (auto& v : c) v *= s;
        atoms.push_back({Point(std::move(c)), a.mass});
    }
    return FiniteMeasure(std::move(atoms), base.mode());
}

Semigroup Semigroup::scaling(AdditiveFunction weights, int dimension, bool allow_any_signs) {
    if (dimension < 1) throw DataError("scaling semigroup needs dimension >= 1");
    if (!allow_any_signs && !(weights.has_negative_weight() && weights.has_positive_weight()))
        throw DataError(
            "scaling weights must include a negative and a positive entry; "
            "the sign constraint is what makes both decay and blow-up realizable");
    return Semigroup(ScalingSpec{std::move(weights), dimension});
}

Semigroup Semigroup::identity(int dimension) {
    if (dimension < 1) throw DataError("identity semigroup needs dimension >= 1");
    return Semigroup(IdentitySpec{dimension});
}

Semigroup Semigroup::deterministic_map(std::function<Point(const SpanPoint&, const Point&)> rule,
                                       int dimension, std::size_t time_dim,
                                       std::uint64_t validation_seed) {
    if (dimension < 1) throw DataError("deterministic map needs dimension >= 1");
    if (time_dim < 1) throw DataError("deterministic map needs time dimension >= 1");
    if (!rule) throw DataError("deterministic map rule is empty");

    // Spot-check the semigroup law on sampled triples.
    std::mt19937_64 rng(validation_seed);
    std::uniform_int_distribution<int> coord(0, 4);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    for (int trial = 0; trial < 16; ++trial) {
        SpanPoint u = SpanPoint::zero(time_dim), v = SpanPoint::zero(time_dim);
        for (std::size_t i = 0; i < time_dim; ++i) {
            u.coords[i] = Rational(coord(rng));
            v.coords[i] = Rational(coord(rng));
        }
        std::vector<double> c(static_cast<std::size_t>(dimension));
        for (auto& x : c) x = pos(rng);
        Point p(c);
        Point lhs = rule(u, rule(v, p));
        Point rhs = rule(span_add(u, v), p);
        for (int i = 0; i < dimension; ++i) {
            double scale = 1.0 + std::fabs(rhs[static_cast<std::size_t>(i)]);
            if (std::fabs(lhs[static_cast<std::size_t>(i)] - rhs[static_cast<std::size_t>(i)]) >
                1e-9 * scale)
                throw DataError("deterministic map rule violates the semigroup law on a sampled "
                                "(u, v, x) triple");
        }
    }
    return Semigroup(DeterministicMapSpec{std::move(rule), dimension, time_dim});
}

Semigroup Semigroup::finite_kernel(std::vector<Point> states,
                                   std::vector<std::vector<Rational>> matrix) {
    const std::size_t k = states.size();
    if (k == 0) throw DataError("kernel needs at least one state");
    if (matrix.size() != k) throw DimensionError("kernel matrix row count", k, matrix.size());
    for (const auto& row : matrix) {
        if (row.size() != k) throw DimensionError("kernel matrix column count", k, row.size());
        Rational sum = 0;
        for (const auto& p : row) {
            if (p < 0) throw DataError("kernel entries must be nonnegative");
            sum += p;
        }
        if (sum != 1) throw DataError("kernel rows must sum to 1 exactly");
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (states[i] == states[j]) throw DataError("kernel states must be distinct");
    return Semigroup(FiniteKernelSpec{std::move(states), std::move(matrix)});
}

SemigroupKind Semigroup::kind() const {
    if (std::holds_alternative<ScalingSpec>(spec_)) return SemigroupKind::Scaling;
    if (std::holds_alternative<IdentitySpec>(spec_)) return SemigroupKind::Identity;
    if (std::holds_alternative<DeterministicMapSpec>(spec_)) return SemigroupKind::DeterministicMap;
    return SemigroupKind::FiniteKernel;
}

int Semigroup::dimension() const {
    switch (kind()) {
        case SemigroupKind::Scaling: return std::get<ScalingSpec>(spec_).dimension;
        case SemigroupKind::Identity: return std::get<IdentitySpec>(spec_).dimension;
        case SemigroupKind::DeterministicMap:
            return std::get<DeterministicMapSpec>(spec_).dimension;
        case SemigroupKind::FiniteKernel:
            return static_cast<int>(std::get<FiniteKernelSpec>(spec_).states.front().dim());
    }
    return 0;
}

std::size_t Semigroup::time_dim() const {
    switch (kind()) {
        case SemigroupKind::Scaling: return std::get<ScalingSpec>(spec_).weights.dim();
        case SemigroupKind::DeterministicMap:
            return std::get<DeterministicMapSpec>(spec_).time_dim;
        case SemigroupKind::FiniteKernel: return 1;
        case SemigroupKind::Identity: return 1;  // time is immaterial; accept 1-dim points
    }
    return 1;
}

void Semigroup::require_time(const SpanPoint& u) const {
    if (!u.nonnegative()) throw DataError("time point has a negative coordinate");
}

std::size_t Semigroup::kernel_time(const SpanPoint& u) const {
    require_time(u);
    if (u.dim() != 1)
        throw DimensionError("kernel time must live on a single basis element", 1, u.dim());
    const Rational& c = u.coords[0];
    if (denominator(c) != 1) throw DataError("kernel time coordinate must be an integer");
    BigInt n = numerator(c);
    if (n > 1'000'000) throw DataError("kernel time too large");
    return n.convert_to<std::size_t>();
}

std::size_t Semigroup::state_index(const Point& x) const {
    const auto& states = as_kernel().states;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == x) return i;
    throw DataError("point is not a kernel state");
}

Point Semigroup::apply(const SpanPoint& u, const Point& x) const {
    require_time(u);
    switch (kind()) {
        case SemigroupKind::Scaling: {
            const auto& s = std::get<ScalingSpec>(spec_);
            if (static_cast<int>(x.dim()) != s.dimension)
                throw DimensionError("point dimension", static_cast<std::size_t>(s.dimension),
                                     x.dim());
            const double factor = LogScaleFactor{eval_additive(s.weights, u)}.magnitude();
            if (!std::isfinite(factor))
                throw DataError("scale factor overflows a double; use scale_factor instead");
            std::vector<double> c(x.c);
            for (auto& v : c) v *= factor;
            return Point(std::move(c));
        }
        case SemigroupKind::Identity: return x;
        case SemigroupKind::DeterministicMap: {
            const auto& s = std::get<DeterministicMapSpec>(spec_);
            if (u.dim() != s.time_dim)
                throw DimensionError("time dimension", s.time_dim, u.dim());
            return s.rule(u, x);
        }
        case SemigroupKind::FiniteKernel:
            throw DataError("kernel semigroup has no pointwise map");
    }
    throw DataError("unreachable semigroup kind");
}

LogScaleFactor Semigroup::scale_factor(const SpanPoint& u) const {
    if (kind() != SemigroupKind::Scaling)
        throw DataError("scale_factor is only defined for the scaling semigroup");
    require_time(u);
    return LogScaleFactor{eval_additive(std::get<ScalingSpec>(spec_).weights, u)};
}

ScaledMeasure Semigroup::push(const SpanPoint& u, const ScaledMeasure& mu) const {
    require_time(u);
    switch (kind()) {
        case SemigroupKind::Scaling:
            return ScaledMeasure(mu.base, mu.log_scale + scale_factor(u).exponent);
        case SemigroupKind::Identity: return mu;
        case SemigroupKind::DeterministicMap: {
            FiniteMeasure flat = mu.materialize();
            std::vector<FiniteMeasure::Atom> atoms;
            atoms.reserve(flat.size());
            for (const auto& a : flat.atoms()) atoms.push_back({apply(u, a.point), a.mass});
            return ScaledMeasure(FiniteMeasure(std::move(atoms), flat.mode()));
        }
        case SemigroupKind::FiniteKernel: {
            const auto& s = std::get<FiniteKernelSpec>(spec_);
            const std::size_t steps = kernel_time(u);
            FiniteMeasure flat = mu.materialize();
            std::vector<Rational> mass(s.states.size());
            for (const auto& a : flat.atoms()) mass[state_index(a.point)] += a.mass;
            for (std::size_t step = 0; step < steps; ++step) {
                std::vector<Rational> next(s.states.size());
                for (std::size_t i = 0; i < mass.size(); ++i) {
                    if (mass[i] == 0) continue;
                    for (std::size_t j = 0; j < mass.size(); ++j)
                        next[j] += mass[i] * s.matrix[i][j];
                }
                mass = std::move(next);
            }
            std::vector<FiniteMeasure::Atom> atoms;
            for (std::size_t i = 0; i < mass.size(); ++i)
                if (mass[i] != 0) atoms.push_back({s.states[i], mass[i]});
            return ScaledMeasure(FiniteMeasure(std::move(atoms), flat.mode()));
        }
    }
    throw DataError("unreachable semigroup kind");
}

double Semigroup::dual_apply(const SpanPoint& u, const std::function<double(const Point&)>& phi,
                             const Point& x) const {
    if (kind() == SemigroupKind::FiniteKernel) {
        const auto& s = std::get<FiniteKernelSpec>(spec_);
        const std::size_t steps = kernel_time(u);
        std::vector<Rational> row(s.states.size());
        row[state_index(x)] = 1;
        for (std::size_t step = 0; step < steps; ++step) {
            std::vector<Rational> next(s.states.size());
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (row[i] == 0) continue;
                for (std::size_t j = 0; j < row.size(); ++j) next[j] += row[i] * s.matrix[i][j];
            }
            row = std::move(next);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            acc += rational_to_double(row[j]) * phi(s.states[j]);
        return acc;
    }
    return phi(apply(u, x));
}

DualityCheck Semigroup::duality_check(const SpanPoint& u,
                                      const std::function<double(const Point&)>& phi,
                                      const FiniteMeasure& mu) const {
    DualityCheck out;
    if (mu.mode() == MassMode::Exact && kind() == SemigroupKind::FiniteKernel) {
        // Both pairings computed independently in rational arithmetic: the
        // left side evolves phi backward through the kernel, the right side
        // evolves the masses forward. They agree by associativity alone.
        const auto& s = std::get<FiniteKernelSpec>(spec_);
        const std::size_t steps = kernel_time(u);
        const std::size_t k = s.states.size();
        std::vector<Rational> phi_q(k);
        for (std::size_t j = 0; j < k; ++j) {
            double v = phi(s.states[j]);
            if (!std::isfinite(v)) throw DataError("integrand returned a non-finite value");
            phi_q[j] = rational_from_double(v);
        }
        std::vector<Rational> mass(k);
        for (const auto& a : mu.atoms()) mass[state_index(a.point)] += a.mass;

        std::vector<Rational> evolved_phi = phi_q;
        std::vector<Rational> evolved_mass = mass;
        for (std::size_t step = 0; step < steps; ++step) {
            std::vector<Rational> nf(k), nm(k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) {
                    nf[i] += s.matrix[i][j] * evolved_phi[j];
                    nm[j] += evolved_mass[i] * s.matrix[i][j];
                }
            evolved_phi = std::move(nf);
            evolved_mass = std::move(nm);
        }
        Rational lhs = 0, rhs = 0;
        for (std::size_t i = 0; i < k; ++i) {
            lhs += mass[i] * evolved_phi[i];
            rhs += evolved_mass[i] * phi_q[i];
        }
        out.lhs = rational_to_double(lhs);
        out.rhs = rational_to_double(rhs);
        out.equal = (lhs == rhs);
        out.exact = true;
        return out;
    }

    auto dual_phi = [&](const Point& x) { return dual_apply(u, phi, x); };
    FiniteMeasure pushed = push(u, ScaledMeasure(mu)).materialize();
    if (mu.mode() == MassMode::Exact) {
        Rational lhs = mu.integrate_exact(dual_phi);
        Rational rhs = pushed.integrate_exact(phi);
        out.lhs = rational_to_double(lhs);
        out.rhs = rational_to_double(rhs);
        out.equal = (lhs == rhs);
        out.exact = true;
    } else {
        out.lhs = mu.integrate(dual_phi);
        out.rhs = pushed.integrate(phi);
        out.equal = std::fabs(out.lhs - out.rhs) <= 1e-12 * (1.0 + std::fabs(out.lhs));
        out.exact = false;
    }
    return out;
}

ScaledMeasure pushforward(const Semigroup& sg, const SpanPoint& u, const ScaledMeasure& mu) {
    return sg.push(u, mu);
}

}  // namespace feller
