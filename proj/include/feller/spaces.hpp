#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "feller/rational.hpp"

namespace feller {

/// A point of R^d. Entries must be finite.
struct Point {
    std::vector<double> c;

    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

    std::size_t dim() const { return c.size(); }
    double operator[](std::size_t i) const { return c[i]; }

    // Exact coordinatewise equality; used for atom deduplication and
    // table lookups, where points act as discrete identities.
    bool operator==(const Point& o) const { return c == o.c; }
};

/// Metric on R^d (p-norm induced) or on an explicit finite point set
/// (distance table). Table construction verifies the metric axioms on the
/// whole set, including the triangle inequality.
class Metric {
public:
    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    /// Metric induced by the p-norm, p in [1, inf].
    static Metric pnorm(double p);
    static Metric euclidean() { return pnorm(2.0); }

    /// Metric given by a symmetric table over a finite point set.
    static Metric table(std::vector<Point> points, std::vector<std::vector<double>> entries);

    bool is_table() const { return !table_points_.empty(); }
    double p() const { return p_; }
    const std::vector<Point>& table_points() const { return table_points_; }

    /// rho(x, y). Throws DimensionError on mismatched dimensions and
    /// DataError when a table metric is probed off its point set.
    double eval(const Point& x, const Point& y) const;

private:
    Metric() = default;
    double p_ = 2.0;
    std::vector<Point> table_points_;
    std::vector<std::vector<double>> table_entries_;
    std::size_t table_index(const Point& x) const;
};

inline double metric_eval(const Metric& m, const Point& x, const Point& y) { return m.eval(x, y); }

/// The scale sequence n -> a_n of a separating family: positive,
/// nondecreasing and (for the built-ins) unbounded.
class Schedule {
public:
    static Schedule linear();     // a_n = n
    static Schedule geometric();  // a_n = 2^n
    /// Explicit values a_1..a_N; validated positive and nondecreasing.
    /// Probing beyond the table is an error.
    static Schedule table(std::vector<double> values);

    double at(int n) const;
    Rational at_exact(int n) const;
    const std::string& name() const { return name_; }

private:
    Schedule() = default;
    std::string name_;
    std::vector<double> values_;  // empty for the closed-form kinds
};

/// Family of truncated pseudo-metrics sigma_n(x, y) = min(1, a_n * rho(x, y)).
/// Each sigma_n is a pseudo-metric bounded by 1, the family is pointwise
/// nondecreasing in n, and sigma_n(x, y) -> 1 for every pair of distinct
/// points, so the family separates points in the limit.
class PseudoMetricFamily {
public:
    PseudoMetricFamily(Metric base, Schedule schedule)
        : base_(std::move(base)), schedule_(std::move(schedule)) {}

    const Metric& base() const { return base_; }
    const Schedule& schedule() const { return schedule_; }

    double eval(int n, const Point& x, const Point& y) const;

    /// Same value with the comparison against 1 done in exact rational
    /// arithmetic on the (exactly rationalized) base distance.
    Rational eval_exact(int n, const Point& x, const Point& y) const;

private:
    Metric base_;
    Schedule schedule_;
};

inline double family_eval(const PseudoMetricFamily& fam, int n, const Point& x, const Point& y) {
    return fam.eval(n, x, y);
}

struct SeparationRow {
    Point x, y;
    double base_distance = 0.0;
    std::optional<int> reached_at;  // smallest n <= N with sigma_n >= 1 - eps
};

/// For each pair of distinct points, the smallest n <= max_n with
/// sigma_n(x, y) >= 1 - eps, decided in exact arithmetic. Pairs with x == y
/// are rejected. eps must lie in [0, 1).
std::vector<SeparationRow> totally_separating_probe(const PseudoMetricFamily& fam,
                                                    const std::vector<std::pair<Point, Point>>& pairs,
                                                    int max_n, double eps);

enum class MassMode : std::uint8_t { Exact, Real };

/// Finite-support positive measure as (point, mass) atoms. Masses are held
/// exactly in both modes (a double converts losslessly); the mode records
/// whether downstream consumers may use floating arithmetic. Equal atom
/// points are merged at construction so supports stay canonical.
class FiniteMeasure {
public:
    struct Atom {
        Point point;
        Rational mass;
    };

    FiniteMeasure() = default;
    FiniteMeasure(std::vector<Atom> atoms, MassMode mode = MassMode::Exact);

    static FiniteMeasure dirac(Point y) { return FiniteMeasure({{std::move(y), Rational(1)}}); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    MassMode mode() const { return mode_; }

    Rational total() const;

    /// Sum of mass_i * phi(point_i) in double arithmetic. Throws DataError if
    /// phi returns a non-finite value at an atom.
    double integrate(const std::function<double(const Point&)>& phi) const;

    /// Same pairing with phi's (finite double) values rationalized exactly.
    Rational integrate_exact(const std::function<double(const Point&)>& phi) const;

    bool operator==(const FiniteMeasure& o) const;

private:
    std::vector<Atom> atoms_;
    MassMode mode_ = MassMode::Exact;
};

inline Rational measure_total(const FiniteMeasure& mu) { return mu.total(); }
inline double integrate(const FiniteMeasure& mu, const std::function<double(const Point&)>& phi) {
    return mu.integrate(phi);
}

}  // namespace feller
