#include "feller/hamel.hpp"

#include <algorithm>
#include <unordered_set>

#include "feller/errors.hpp"

namespace feller {

bool SpanPoint::nonnegative() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return c >= 0; });
}

bool SpanPoint::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return c == 0; });
}

AdditiveFunction::AdditiveFunction(std::vector<std::string> labels, std::vector<Rational> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.size() != weights_.size())
        throw DimensionError("basis labels and weights differ in length", labels_.size(),
                             weights_.size());
    if (weights_.empty()) throw DataError("additive function needs at least one basis element");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_)
        if (!seen.insert(l).second) throw DataError("duplicate basis label '" + l + "'");
}

AdditiveFunction AdditiveFunction::from_weights(std::vector<Rational> weights) {
    std::vector<std::string> labels;
    labels.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) labels.push_back("b" + std::to_string(i + 1));
    return AdditiveFunction(std::move(labels), std::move(weights));
}

bool AdditiveFunction::has_negative_weight() const {
    return std::any_of(weights_.begin(), weights_.end(), [](const Rational& w) { return w < 0; });
}

bool AdditiveFunction::has_positive_weight() const {
    return std::any_of(weights_.begin(), weights_.end(), [](const Rational& w) { return w > 0; });
}

Rational eval_additive(const AdditiveFunction& f, const SpanPoint& u) {
    if (u.dim() != f.dim())
        throw DimensionError("span point does not match basis", f.dim(), u.dim());
    Rational acc = 0;
    for (std::size_t i = 0; i < u.dim(); ++i) acc += u.coords[i] * f.weight(i);
    return acc;
}

SpanPoint span_add(const SpanPoint& u, const SpanPoint& v) {
    if (u.dim() != v.dim())
        throw DimensionError("span points differ in dimension", u.dim(), v.dim());
    SpanPoint out = u;
    for (std::size_t i = 0; i < v.dim(); ++i) out.coords[i] += v.coords[i];
    return out;
}

SpanPoint span_scale(const Rational& q, const SpanPoint& u) {
    SpanPoint out = u;
    for (auto& c : out.coords) c *= q;
    return out;
}

}  // namespace feller
