#include <cmath>
#include <random>

#include "doctest.h"
#include "feller/errors.hpp"
#include "feller/rational.hpp"
#include "feller/spaces.hpp"
#include "feller/transport.hpp"
#include "grid_instance.hpp"
#include "oracles.hpp"

using namespace feller;

namespace {

double l1(const Point& a, const Point& b) { return grid_l1(a, b); }

}  // namespace

TEST_CASE("cost matrices validate the pseudo-metric axioms") {
    const std::vector<Point> pts = {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 2.0}};
    auto cost = CostMatrix::from_metric(pts, [](const Point& x, const Point& y) { return l1(x, y); });
    CHECK(cost.size() == 3);
    CHECK(cost.at(0, 1) == 1.0);
    CHECK(cost.at(1, 2) == 3.0);
    CHECK(cost.index_of(Point{0.0, 2.0}) == 2);
    CHECK_THROWS_AS((void)cost.index_of(Point{5.0, 5.0}), DataError);

    CHECK_THROWS_AS((void)CostMatrix::from_entries(pts, {{0, 1, 2}, {1, 0, 1}, {2.5, 1, 0}}),
                    DataError);  // asymmetric
    CHECK_THROWS_AS((void)CostMatrix::from_entries(pts, {{0.5, 1, 2}, {1, 0, 1}, {2, 1, 0}}),
                    DataError);  // nonzero diagonal
    CHECK_THROWS_AS((void)CostMatrix::from_entries(pts, {{0, 1, 9}, {1, 0, 1}, {9, 1, 0}}),
                    DataError);  // triangle violation
}

TEST_CASE("two Diracs: both routes return the cost between the points") {
    const Point x{0.0, 0.0}, y{0.3, 0.0};
    auto mu = FiniteMeasure::dirac(x);
    auto nu = FiniteMeasure::dirac(y);
    auto sigma = [](const Point& a, const Point& b) {
        return std::min(1.0, Metric::euclidean().eval(a, b));
    };
    auto cost = CostMatrix::for_measures(mu, nu, sigma);

    const double direct = sigma(x, y);
    auto primal = wasserstein_primal(cost, mu, nu);
    auto dual = wasserstein_dual(cost, mu, nu);
    CHECK(primal.value == direct);
    CHECK(dual.value == direct);
    REQUIRE(primal.value_exact.has_value());
    REQUIRE(dual.value_exact.has_value());
    CHECK(*primal.value_exact == *dual.value_exact);
    CHECK(dual.potential.is_exact);

    auto gap = duality_gap(cost, mu, nu);
    CHECK(gap.gap == 0.0);
    REQUIRE(gap.gap_exact.has_value());
    CHECK(*gap.gap_exact == 0);
}

TEST_CASE("identical measures are at distance zero") {
    FiniteMeasure mu({{Point{0.0, 0.0}, Rational(1) / 2}, {Point{1.0, 0.0}, Rational(1) / 2}});
    auto cost = CostMatrix::for_measures(mu, mu, [](const Point& x, const Point& y) { return l1(x, y); });
    auto gap = duality_gap(cost, mu, mu);
    CHECK(gap.primal == 0.0);
    CHECK(gap.dual == 0.0);
    REQUIRE(gap.gap_exact.has_value());
    CHECK(*gap.gap_exact == 0);
}

TEST_CASE("a hand-solved three-point instance") {
    // masses 1/2 at 0 and 1 versus 1/2 at 1 and 2 on the L1 line: optimal
    // plan shifts each half one unit, total cost 1
    FiniteMeasure mu({{Point{0.0}, Rational(1) / 2}, {Point{1.0}, Rational(1) / 2}});
    FiniteMeasure nu({{Point{1.0}, Rational(1) / 2}, {Point{2.0}, Rational(1) / 2}});
    auto cost = CostMatrix::for_measures(mu, nu, [](const Point& x, const Point& y) { return l1(x, y); });
    auto primal = wasserstein_primal(cost, mu, nu);
    REQUIRE(primal.value_exact.has_value());
    CHECK(*primal.value_exact == Rational(1));
    auto dual = wasserstein_dual(cost, mu, nu);
    REQUIRE(dual.value_exact.has_value());
    CHECK(*dual.value_exact == Rational(1));
}

TEST_CASE("transport plans satisfy the marginals exactly") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        auto inst = random_grid_instance(rng, MassMode::Exact);
        auto primal = wasserstein_primal(inst.cost, inst.mu1, inst.mu2);
        const auto& plan = primal.plan;
        REQUIRE(plan.rows == inst.mu1.size());
        REQUIRE(plan.cols == inst.mu2.size());
        for (std::size_t i = 0; i < plan.rows; ++i) {
            Rational row = 0;
            for (std::size_t j = 0; j < plan.cols; ++j) {
                CHECK(plan.at(i, j) >= 0);
                row += plan.at(i, j);
            }
            CHECK(row == inst.mu1.atoms()[i].mass);
        }
        for (std::size_t j = 0; j < plan.cols; ++j) {
            Rational col = 0;
            for (std::size_t i = 0; i < plan.rows; ++i) col += plan.at(i, j);
            CHECK(col == inst.mu2.atoms()[j].mass);
        }
    }
}

TEST_CASE("primal, dual and the enumeration oracle agree in exact mode") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = random_grid_instance(rng, MassMode::Exact);
        auto gap = duality_gap(inst.cost, inst.mu1, inst.mu2);
        REQUIRE(gap.gap_exact.has_value());
        CHECK(*gap.gap_exact == 0);

        auto primal = wasserstein_primal(inst.cost, inst.mu1, inst.mu2);
        REQUIRE(primal.value_exact.has_value());
        CHECK(*primal.value_exact == oracle::transport_min(inst.a, inst.b, inst.cells));
    }
}

TEST_CASE("floating mode closes the duality gap to 1e-9") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = random_grid_instance(rng, MassMode::Real);
        auto gap = duality_gap(inst.cost, inst.mu1, inst.mu2);
        CHECK(std::fabs(gap.gap) <= 1e-9);

        // oracle on the exactly rationalized (and rebalanced) masses
        std::vector<Rational> b = inst.b;
        Rational ta = 0, tb = 0;
        for (const auto& q : inst.a) ta += q;
        for (const auto& q : b) tb += q;
        for (auto& q : b) q *= ta / tb;
        const double want = rational_to_double(oracle::transport_min(inst.a, b, inst.cells));
        CHECK(std::fabs(gap.primal - want) <= 1e-9);
        CHECK(std::fabs(gap.dual - want) <= 1e-9);
    }
}

TEST_CASE("dual potentials are feasible for the cost") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = random_grid_instance(rng, MassMode::Exact);
        auto dual = wasserstein_dual(inst.cost, inst.mu1, inst.mu2);
        const auto& phi = dual.potential.values;
        REQUIRE(phi.size() == inst.cost.size());
        for (std::size_t i = 0; i < phi.size(); ++i)
            for (std::size_t j = 0; j < phi.size(); ++j)
                CHECK(phi[i] - phi[j] <= inst.cost.at(i, j) + 1e-9);
    }
}

TEST_CASE("unequal total masses are rejected in exact mode") {
    FiniteMeasure mu({{Point{0.0}, Rational(1)}});
    FiniteMeasure nu({{Point{1.0}, Rational(1) / 2}});
    auto cost = CostMatrix::for_measures(mu, nu, [](const Point& x, const Point& y) { return l1(x, y); });
    CHECK_THROWS_AS((void)wasserstein_primal(cost, mu, nu), DataError);
    CHECK_THROWS_AS((void)wasserstein_dual(cost, mu, nu), DataError);
}

TEST_CASE("real mode rescales near-equal totals instead of failing") {
    // totals differ by ~1e-16 after rounding through doubles
    FiniteMeasure mu({{Point{0.0}, rational_from_double(0.1 + 0.2)}}, MassMode::Real);
    FiniteMeasure nu({{Point{1.0}, rational_from_double(0.3)}}, MassMode::Real);
    auto cost = CostMatrix::for_measures(mu, nu, [](const Point& x, const Point& y) { return l1(x, y); });
    auto gap = duality_gap(cost, mu, nu);
    CHECK(std::fabs(gap.primal - 0.3) <= 1e-12);
    CHECK(std::fabs(gap.gap) <= 1e-12);
}

TEST_CASE("large union supports leave the exact dual but stay within 1e-9") {
    // 9 + 8 disjoint support points: primal still exact (<= 64), dual solved
    // in floating point (> 16), so the gap is small but not symbolically zero
    std::vector<FiniteMeasure::Atom> atoms1, atoms2;
    for (int i = 0; i < 9; ++i) atoms1.push_back({Point{i / 4.0, 0.0}, Rational(1) / 9});
    for (int j = 0; j < 8; ++j) atoms2.push_back({Point{j / 4.0, 1.0}, Rational(1) / 8});
    FiniteMeasure mu(atoms1), nu(atoms2);
    auto cost = CostMatrix::for_measures(mu, nu, [](const Point& x, const Point& y) { return l1(x, y); });
    auto primal = wasserstein_primal(cost, mu, nu);
    CHECK(primal.value_exact.has_value());
    auto dual = wasserstein_dual(cost, mu, nu);
    CHECK_FALSE(dual.value_exact.has_value());
    auto gap = duality_gap(cost, mu, nu);
    CHECK_FALSE(gap.gap_exact.has_value());
    CHECK(std::fabs(gap.gap) <= 1e-9);
}
