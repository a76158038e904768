#include "feller/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "feller/errors.hpp"

namespace feller {

Point::Point(std::vector<double> coords) : c(std::move(coords)) {
    if (c.empty()) throw DataError("point needs at least one coordinate");
    for (double v : c)
        if (!std::isfinite(v)) throw DataError("point coordinate is not finite");
}

Metric Metric::pnorm(double p) {
    if (!(p >= 1.0))  // also rejects NaN
        throw DataError("p-norm parameter must satisfy p >= 1");
    Metric m;
    m.p_ = p;
    return m;
}

Metric Metric::table(std::vector<Point> points, std::vector<std::vector<double>> entries) {
    const std::size_t k = points.size();
    if (k == 0) throw DataError("table metric needs a nonempty point set");
    if (entries.size() != k)
        throw DimensionError("table metric row count", k, entries.size());
    for (const auto& row : entries)
        if (row.size() != k) throw DimensionError("table metric column count", k, row.size());
    for (std::size_t i = 0; i < k; ++i) {
        if (entries[i][i] != 0.0) throw DataError("table metric has nonzero diagonal");
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(entries[i][j]) || entries[i][j] < 0.0)
                throw DataError("table metric entries must be finite and nonnegative");
            if (entries[i][j] != entries[j][i]) throw DataError("table metric is not symmetric");
            if (i != j && entries[i][j] == 0.0)
                throw DataError("table metric vanishes on distinct points");
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l)
                if (entries[i][l] > entries[i][j] + entries[j][l])
                    throw DataError("table metric violates the triangle inequality");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (points[i] == points[j]) throw DataError("table metric points must be distinct");
    Metric m;
    m.table_points_ = std::move(points);
    m.table_entries_ = std::move(entries);
    return m;
}

std::size_t Metric::table_index(const Point& x) const {
    for (std::size_t i = 0; i < table_points_.size(); ++i)
        if (table_points_[i] == x) return i;
    throw DataError("point is not in the table metric's point set");
}

double Metric::eval(const Point& x, const Point& y) const {
    if (is_table()) return table_entries_[table_index(x)][table_index(y)];
    if (x.dim() != y.dim()) throw DimensionError("metric arguments", x.dim(), y.dim());
    if (p_ == kInfinity) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.dim(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
        return m;
    }
    if (p_ == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.dim(); ++i) s += std::fabs(x[i] - y[i]);
        return s;
    }
    if (p_ == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.dim(); ++i) {
            double d = x[i] - y[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += std::pow(std::fabs(x[i] - y[i]), p_);
    return std::pow(s, 1.0 / p_);
}

Schedule Schedule::linear() {
    Schedule s;
    s.name_ = "linear";
    return s;
}

Schedule Schedule::geometric() {
    Schedule s;
    s.name_ = "geometric";
    return s;
}

Schedule Schedule::table(std::vector<double> values) {
    if (values.empty()) throw DataError("schedule table must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] <= 0.0)
            throw DataError("schedule values must be finite and positive");
        if (i > 0 && values[i] < values[i - 1])
            throw DataError("schedule values must be nondecreasing");
    }
    Schedule s;
    s.name_ = "table";
    s.values_ = std::move(values);
    return s;
}

double Schedule::at(int n) const {
    if (n < 1) throw DataError("schedule index must be >= 1");
    if (name_ == "linear") return static_cast<double>(n);
    if (name_ == "geometric") return std::ldexp(1.0, n);  // 2^n
    if (static_cast<std::size_t>(n) > values_.size())
        throw DataError("schedule table probed beyond its range (n = " + std::to_string(n) + ")");
    return values_[static_cast<std::size_t>(n) - 1];
}

Rational Schedule::at_exact(int n) const {
    if (n < 1) throw DataError("schedule index must be >= 1");
    if (name_ == "linear") return Rational(n);
    if (name_ == "geometric") {
        BigInt v = BigInt(1) << n;
        return Rational(v);
    }
    return rational_from_double(at(n));
}

double PseudoMetricFamily::eval(int n, const Point& x, const Point& y) const {
    return std::min(1.0, schedule_.at(n) * base_.eval(x, y));
}

Rational PseudoMetricFamily::eval_exact(int n, const Point& x, const Point& y) const {
    Rational v = schedule_.at_exact(n) * rational_from_double(base_.eval(x, y));
    return v >= 1 ? Rational(1) : v;
}

std::vector<SeparationRow> totally_separating_probe(const PseudoMetricFamily& fam,
                                                    const std::vector<std::pair<Point, Point>>& pairs,
                                                    int max_n, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DataError("separation tolerance must lie in [0, 1)");
    if (max_n < 1) throw DataError("separation probe needs max_n >= 1");
    const Rational threshold = Rational(1) - rational_from_double(eps);
    std::vector<SeparationRow> rows;
    rows.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        double rho = fam.base().eval(x, y);
        if (rho == 0.0) throw DataError("separation is undefined for coinciding points");
        SeparationRow row{x, y, rho, std::nullopt};
        const Rational rho_q = rational_from_double(rho);
        for (int n = 1; n <= max_n; ++n) {
            Rational sigma = fam.schedule().at_exact(n) * rho_q;
            if (sigma > 1) sigma = 1;
            if (sigma >= threshold) {
                row.reached_at = n;
                break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

FiniteMeasure::FiniteMeasure(std::vector<Atom> atoms, MassMode mode) : mode_(mode) {
    for (auto& a : atoms) {
        if (a.mass < 0) throw DataError("measure atom with negative mass");
        auto it = std::find_if(atoms_.begin(), atoms_.end(),
                               [&](const Atom& b) { return b.point == a.point; });
        if (it != atoms_.end())
            it->mass += a.mass;
        else
            atoms_.push_back(std::move(a));
    }
}

Rational FiniteMeasure::total() const {
    Rational t = 0;
    for (const auto& a : atoms_) t += a.mass;
    return t;
}

double FiniteMeasure::integrate(const std::function<double(const Point&)>& phi) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        double v = phi(a.point);
        if (!std::isfinite(v)) throw DataError("integrand returned a non-finite value");
        acc += rational_to_double(a.mass) * v;
    }
    return acc;
}

Rational FiniteMeasure::integrate_exact(const std::function<double(const Point&)>& phi) const {
    Rational acc = 0;
    for (const auto& a : atoms_) {
        double v = phi(a.point);
        if (!std::isfinite(v)) throw DataError("integrand returned a non-finite value");
        acc += a.mass * rational_from_double(v);
    }
    return acc;
}

bool FiniteMeasure::operator==(const FiniteMeasure& o) const {
    if (atoms_.size() != o.atoms_.size()) return false;
    // Both sides are deduplicated, so compare as unordered atom sets.
    for (const auto& a : atoms_) {
        auto it = std::find_if(o.atoms_.begin(), o.atoms_.end(),
                               [&](const Atom& b) { return b.point == a.point; });
        if (it == o.atoms_.end() || it->mass != a.mass) return false;
    }
    return true;
}

}  // namespace feller
