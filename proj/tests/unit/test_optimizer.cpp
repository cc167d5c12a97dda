#include <doctest.h>

#include "crs/errors.hpp"
#include "crs/optimizer.hpp"

#include <cmath>
#include <tuple>

using namespace crs;

namespace {

LinkTriple table_links(double alpha, double mu)
{
    return {{alpha, mu, 10.0}, {alpha, mu, 1.0}, {alpha, mu, 10.0}};
}

double db(double v)
{
    return std::pow(10.0, v / 10.0);
}

}  // namespace

TEST_CASE("grid construction")
{
    const GridSpec g{24, 1.0};
    CHECK(g.epsilon() == doctest::Approx(0.01));
    const auto pts = g.points();
    REQUIRE(pts.size() == 24);
    CHECK(pts.front() == doctest::Approx(0.01));
    CHECK(pts.back() == doctest::Approx(0.24));
    for (double a2 : pts) CHECK(a2 < 0.25);

    CHECK(GridSpec{3, 0.5}.points().back() == doctest::Approx(0.375));
    CHECK_THROWS_AS((GridSpec{0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((GridSpec{24, 0.4}.validate()), ConfigError);
    CHECK_THROWS_AS((GridSpec{24, -1.0}.validate()), ConfigError);
}

TEST_CASE("table rows at selected SNRs")
{
    CHECK(optimize_a2(db(0), 1.0, table_links(2, 1), {24, 1.0}).a2_opt == doctest::Approx(0.24));
    CHECK(optimize_a2(db(30), 1.0, table_links(2, 1), {24, 1.0}).a2_opt == doctest::Approx(0.06));
    CHECK(optimize_a2(db(30), 1.0, table_links(4, 1), {24, 1.0}).a2_opt == doctest::Approx(0.12));
}

TEST_CASE("singleton grid")
{
    for (double rho : {1.0, 100.0, 1e4}) {
        const auto r = optimize_a2(rho, 1.0, table_links(2, 2), {1, 1.0});
        CHECK(r.a2_opt == GridSpec{1, 1.0}.epsilon());
        CHECK(r.table.size() == 1);
    }
}

TEST_CASE("argmax lies strictly inside the feasible range and is the table maximum")
{
    for (double r1 : {0.5, 1.0, 2.0}) {
        for (double v : {0.0, 20.0, 40.0}) {
            const GridSpec g{12, r1};
            const auto r = optimize_a2(db(v), 1.0, table_links(3, 1), g);
            CHECK(r.a2_opt > 0.0);
            CHECK(r.a2_opt < std::pow(2.0, -2.0 * r1));
            for (const auto& row : r.table) CHECK(row.rate <= r.rate_opt);
        }
    }
}

TEST_CASE("ties go to the smaller coefficient")
{
    // At rho = 0 every grid point has rate 0.
    const auto r = optimize_a2(0.0, 1.0, table_links(2, 1), {8, 1.0});
    CHECK(r.rate_opt == 0.0);
    CHECK(r.a2_opt == doctest::Approx(GridSpec{8, 1.0}.epsilon()));
}

TEST_CASE("a finer grid never loses rate")
{
    for (double v : {5.0, 20.0, 35.0}) {
        for (int m : {6, 12, 24}) {
            const auto coarse = optimize_a2(db(v), 1.0, table_links(2, 2), {m, 1.0});
            const auto fine = optimize_a2(db(v), 1.0, table_links(2, 2), {2 * m + 1, 1.0});
            CHECK(fine.rate_opt >= coarse.rate_opt - 1e-9);
        }
    }
}

TEST_CASE("closed form and quadrature pick the same grid point")
{
    OptimizerOptions closed;
    closed.backend = Backend::closed_form;
    for (const auto& [alpha, mu, v] : {std::tuple{2.0, 1.0, 20.0}, {3.0, 1.0, 30.0}}) {
        const auto q = optimize_a2(db(v), 1.0, table_links(alpha, mu), {24, 1.0});
        const auto c = optimize_a2(db(v), 1.0, table_links(alpha, mu), {24, 1.0}, closed);
        CHECK(c.a2_opt == q.a2_opt);
        CHECK(c.rate_opt == doctest::Approx(q.rate_opt).epsilon(1e-6));
        CHECK(c.warnings.empty());
        for (const auto& row : c.table) CHECK(row.backend == Backend::closed_form);
    }
}

TEST_CASE("closed-form failures fall back to quadrature")
{
    OptimizerOptions closed;
    closed.backend = Backend::closed_form;
    const auto r = optimize_a2(db(20), 1.0, table_links(2.5, 1), {4, 1.0}, closed);
    CHECK(r.warnings.size() == 4);
    for (const auto& row : r.table) CHECK(row.backend == Backend::quadrature);
    CHECK(r.a2_opt == optimize_a2(db(20), 1.0, table_links(2.5, 1), {4, 1.0}).a2_opt);
}

TEST_CASE("Monte-Carlo backend")
{
    OptimizerOptions mc;
    mc.backend = Backend::monte_carlo;
    mc.mc = {200'000, 3, 0};
    const auto r = optimize_a2(db(0), 1.0, table_links(2, 1), {24, 1.0}, mc);
    CHECK(r.a2_opt == doctest::Approx(0.24));
    for (const auto& row : r.table) {
        CHECK(row.backend == Backend::monte_carlo);
        CHECK(row.error > 0.0);
    }
    CHECK(optimize_a2(db(0), 1.0, table_links(2, 1), {24, 1.0}, mc).rate_opt == r.rate_opt);
}
