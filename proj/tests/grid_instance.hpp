#pragma once

// Random transport instances whose costs are exact in floating point:
// coordinates on the grid k/64, L1 distances, truncation min(1, n * rho).
// Sums of |k/64| stay well inside 53 bits, so no operation rounds and the
// rationalized cost matrix satisfies the triangle inequality exactly. Shared
// between the transport unit tests and the acceptance harness so both probe
// the same distribution.

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "feller/rational.hpp"
#include "feller/spaces.hpp"
#include "feller/transport.hpp"

inline double grid_l1(const feller::Point& a, const feller::Point& b) {
    return feller::Metric::pnorm(1.0).eval(a, b);
}

struct GridInstance {
    feller::FiniteMeasure mu1, mu2;
    feller::CostMatrix cost;
    std::vector<feller::Rational> a, b;                // masses in oracle order
    std::vector<std::vector<feller::Rational>> cells;  // costs in oracle order
};

inline GridInstance random_grid_instance(std::mt19937_64& rng, feller::MassMode mode) {
    using feller::FiniteMeasure;
    using feller::Point;
    using feller::Rational;

    std::uniform_int_distribution<int> coord(-64, 64), nsel(1, 3), msel(1, 9);
    std::uniform_int_distribution<int> shape(1, 3);

    // up to 6 union points, possibly shared between the two supports
    const int m = shape(rng), n = shape(rng);
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < m + n) {
        Point p{coord(rng) / 64.0, coord(rng) / 64.0};
        bool dup = false;
        for (const auto& q : pts) dup = dup || q == p;
        if (!dup) pts.push_back(p);
    }
    const bool share = (m + n > 2) && (coord(rng) % 2 == 0);

    std::vector<FiniteMeasure::Atom> atoms1, atoms2;
    std::vector<Point> supp1, supp2;
    for (int i = 0; i < m; ++i) supp1.push_back(pts[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) {
        // sharing reuses a mu1 point, shrinking the union below m + n
        const std::size_t idx = (share && j == 0) ? 0 : static_cast<std::size_t>(m + j);
        supp2.push_back(pts[idx]);
    }

    std::vector<Rational> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(n));
    Rational ta = 0, tb = 0;
    for (auto& q : a) { q = msel(rng); ta += q; }
    for (auto& q : b) { q = msel(rng); tb += q; }
    for (auto& q : a) q /= ta;  // both totals exactly 1
    for (auto& q : b) q /= tb;

    if (mode == feller::MassMode::Real) {
        // round masses through doubles; totals then match only approximately
        for (auto& q : a) q = feller::rational_from_double(feller::rational_to_double(q));
        for (auto& q : b) q = feller::rational_from_double(feller::rational_to_double(q));
    }

    for (int i = 0; i < m; ++i)
        atoms1.push_back({supp1[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(i)]});
    for (int j = 0; j < n; ++j)
        atoms2.push_back({supp2[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(j)]});
    FiniteMeasure mu1(atoms1, mode), mu2(atoms2, mode);

    const int trunc = nsel(rng);
    auto sigma = [trunc](const Point& x, const Point& y) {
        return std::min(1.0, trunc * grid_l1(x, y));
    };
    auto cost = feller::CostMatrix::for_measures(mu1, mu2, sigma);

    GridInstance inst{std::move(mu1), std::move(mu2), std::move(cost), {}, {}, {}};
    // oracle data in the (possibly merged) atom order of the two measures
    for (const auto& at : inst.mu1.atoms()) inst.a.push_back(at.mass);
    for (const auto& at : inst.mu2.atoms()) inst.b.push_back(at.mass);
    for (const auto& ai : inst.mu1.atoms()) {
        std::vector<Rational> row;
        for (const auto& bj : inst.mu2.atoms())
            row.push_back(feller::rational_from_double(sigma(ai.point, bj.point)));
        inst.cells.push_back(std::move(row));
    }
    return inst;
}
