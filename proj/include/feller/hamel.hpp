#pragma once

#include <string>
#include <vector>

#include "feller/rational.hpp"

namespace feller {

/// A point of the rational span of the basis underlying an AdditiveFunction:
/// coordinate i is the rational coefficient of basis element i. Span points
/// double as time parameters for semigroups, in which case every coordinate
/// must be nonnegative.
struct SpanPoint {
    std::vector<Rational> coords;

    SpanPoint() = default;
    explicit SpanPoint(std::vector<Rational> c) : coords(std::move(c)) {}

    static SpanPoint zero(std::size_t dim) { return SpanPoint(std::vector<Rational>(dim)); }

    std::size_t dim() const { return coords.size(); }
    bool nonnegative() const;
    bool is_zero() const;

    bool operator==(const SpanPoint& o) const { return coords == o.coords; }
};

/// An additive (Cauchy-equation) function restricted to the rational span of
/// a finite set of basis labels. Weight i is the function's value at basis
/// element i; by additivity and rational homogeneity that determines the
/// value at every span point exactly.
class AdditiveFunction {
public:
    AdditiveFunction(std::vector<std::string> labels, std::vector<Rational> weights);

    /// Labels b1, b2, ... generated automatically.
    static AdditiveFunction from_weights(std::vector<Rational> weights);

    std::size_t dim() const { return weights_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& weight(std::size_t i) const { return weights_.at(i); }

    bool has_negative_weight() const;
    bool has_positive_weight() const;

private:
    std::vector<std::string> labels_;
    std::vector<Rational> weights_;
};

/// Sum_i coords_i * weights_i, exact. Throws DimensionError on length mismatch.
Rational eval_additive(const AdditiveFunction& f, const SpanPoint& u);

/// Coordinatewise exact sum. Throws DimensionError on length mismatch.
SpanPoint span_add(const SpanPoint& u, const SpanPoint& v);

/// Coordinatewise exact product by a rational scalar.
SpanPoint span_scale(const Rational& q, const SpanPoint& u);

inline SpanPoint operator+(const SpanPoint& u, const SpanPoint& v) { return span_add(u, v); }

}  // namespace feller
