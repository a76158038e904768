#include <cmath>
#include <random>

#include "doctest.h"
#include "feller/errors.hpp"
#include "feller/rational.hpp"
#include "feller/spaces.hpp"

using namespace feller;

TEST_CASE("p-norm metrics evaluate the textbook values") {
    const Point o{0.0, 0.0}, p{3.0, 4.0};
    CHECK(Metric::euclidean().eval(o, p) == 5.0);
    CHECK(Metric::pnorm(1.0).eval(o, p) == 7.0);
    CHECK(Metric::pnorm(Metric::kInfinity).eval(o, p) == 4.0);
    CHECK(Metric::pnorm(2.0).eval(p, p) == 0.0);
    // symmetry
    CHECK(Metric::pnorm(1.5).eval(o, p) == Metric::pnorm(1.5).eval(p, o));
    CHECK_THROWS_AS((void)Metric::pnorm(0.5), DataError);
    CHECK_THROWS_AS((void)Metric::euclidean().eval(o, Point{1.0}), DimensionError);
}

TEST_CASE("table metrics verify the metric axioms up front") {
    const std::vector<Point> pts = {Point{0.0}, Point{1.0}, Point{2.0}};
    auto good = Metric::table(pts, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK(good.is_table());
    CHECK(good.eval(Point{0.0}, Point{2.0}) == 2.0);
    CHECK(good.eval(Point{2.0}, Point{0.0}) == 2.0);

    CHECK_THROWS_AS((void)Metric::table(pts, {{0, 1, 2}, {1, 0, 1}, {1, 1, 0}}), DataError);
    CHECK_THROWS_AS((void)Metric::table(pts, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}), DataError);
    CHECK_THROWS_AS((void)Metric::table(pts, {{0, 1, 2}, {1, 0.5, 1}, {2, 1, 0}}), DataError);
    CHECK_THROWS_AS((void)Metric::table(pts, {{0, 0, 2}, {0, 0, 1}, {2, 1, 0}}), DataError);
    CHECK_THROWS_AS((void)good.eval(Point{9.0}, Point{0.0}), DataError);
}

TEST_CASE("schedules expose a_n with range checks") {
    auto lin = Schedule::linear();
    CHECK(lin.at(3) == 3.0);
    CHECK(lin.at_exact(7) == Rational(7));
    auto geo = Schedule::geometric();
    CHECK(geo.at(4) == 16.0);
    CHECK(geo.at_exact(10) == Rational(1024));
    CHECK_THROWS_AS((void)lin.at(0), DataError);

    auto tab = Schedule::table({1.0, 2.0, 2.0, 5.0});
    CHECK(tab.at(3) == 2.0);
    CHECK_THROWS_AS((void)tab.at(5), DataError);
    CHECK_THROWS_AS((void)Schedule::table({1.0, 0.5}), DataError);
    CHECK_THROWS_AS((void)Schedule::table({-1.0}), DataError);
    CHECK_THROWS_AS((void)Schedule::table({}), DataError);
}

TEST_CASE("pseudo-metric family is the truncated scaled base metric") {
    PseudoMetricFamily fam(Metric::euclidean(), Schedule::linear());
    const Point y{0.25, 0.0}, z{0.65, 0.0};
    CHECK(fam.eval(1, y, z) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(fam.eval(3, y, z) == 1.0);
    CHECK(fam.eval(100, y, z) == 1.0);
    CHECK(fam.eval_exact(3, y, z) == Rational(1));
    // pointwise nondecreasing in n, bounded by 1
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
        double prev = 0.0;
        for (int n = 1; n <= 12; ++n) {
            const double v = fam.eval(n, a, b);
            CHECK(v >= prev);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("separation thresholds are exact ceilings for the linear family") {
    PseudoMetricFamily fam(Metric::euclidean(), Schedule::linear());
    const Point y{0.25, 0.0}, z{0.65, 0.0};

    auto rows = totally_separating_probe(fam, {{y, z}}, 10, 0.0);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].base_distance == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(rows[0].reached_at == 3);  // ceil(1/0.4)

    // eps = 0.5: first n with sigma_n >= 1/2
    rows = totally_separating_probe(fam, {{y, z}}, 10, 0.5);
    CHECK(rows[0].reached_at == 2);

    // out of reach within max_n
    rows = totally_separating_probe(fam, {{Point{0.0, 0.0}, Point{0.001, 0.0}}}, 5, 0.0);
    CHECK_FALSE(rows[0].reached_at.has_value());

    CHECK_THROWS_AS((void)totally_separating_probe(fam, {{y, y}}, 5, 0.0), DataError);
    CHECK_THROWS_AS((void)totally_separating_probe(fam, {{y, z}}, 5, 1.0), DataError);
    CHECK_THROWS_AS((void)totally_separating_probe(fam, {{y, z}}, 5, -0.1), DataError);
}

TEST_CASE("separation threshold equals ceil(1/rho) on random pairs") {
    PseudoMetricFamily fam(Metric::euclidean(), Schedule::linear());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 50; ++t) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
        const double rho = Metric::euclidean().eval(a, b);
        if (rho < 1e-3) continue;
        const auto rows = totally_separating_probe(fam, {{a, b}}, 4000, 0.0);
        REQUIRE(rows[0].reached_at.has_value());
        const BigInt want = rational_ceil(Rational(1) / rational_from_double(rho));
        CHECK(BigInt(*rows[0].reached_at) == want);
    }
}

TEST_CASE("finite measures merge duplicate atoms and integrate exactly") {
    FiniteMeasure mu({{Point{0.0, 0.0}, Rational(1) / 3},
                      {Point{1.0, 0.0}, Rational(1) / 6},
                      {Point{0.0, 0.0}, Rational(1) / 6}});
    CHECK(mu.size() == 2);
    CHECK(mu.total() == Rational(2) / 3);
    CHECK(mu.mode() == MassMode::Exact);

    // same atoms in a different order compare equal
    FiniteMeasure nu({{Point{1.0, 0.0}, Rational(1) / 6}, {Point{0.0, 0.0}, Rational(1) / 2}});
    CHECK(mu == nu);
    CHECK_FALSE(mu == FiniteMeasure::dirac(Point{0.0, 0.0}));

    CHECK(mu.integrate_exact([](const Point& p) { return p[0] + 2.0; }) == Rational(3) / 2);

    // dyadic masses keep the floating accumulation exact
    FiniteMeasure dyadic({{Point{0.0, 0.0}, Rational(1) / 4}, {Point{1.0, 0.0}, Rational(3) / 4}});
    CHECK(integrate(dyadic, [](const Point& p) { return p[0] + 2.0; }) == 2.75);

    CHECK_THROWS_AS(FiniteMeasure({{Point{0.0}, Rational(-1)}}), DataError);
}

TEST_CASE("points validate their coordinates") {
    CHECK_THROWS_AS(Point(std::vector<double>{}), DataError);
    CHECK_THROWS_AS(Point{std::numeric_limits<double>::quiet_NaN()}, DataError);
    CHECK(Point{1.0, 2.0}.dim() == 2);
    CHECK(Point{1.0, 2.0} == Point{1.0, 2.0});
    CHECK_FALSE(Point{1.0, 2.0} == Point{1.0, 2.000001});
}
