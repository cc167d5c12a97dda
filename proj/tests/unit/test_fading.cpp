#include <doctest.h>

#include "crs/errors.hpp"
#include "crs/fading.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

using namespace crs;

namespace {

// Integral of gain_pdf over (0, x] on t = ln x, i.e. of x f(x) dt.
double pdf_mass_below(const LinkParams& p, double x)
{
    boost::math::quadrature::exp_sinh<double> q;
    const double lx = std::log(x);
    return q.integrate([&](double u) {
        const double x = std::exp(lx - u);
        return x > 0.0 ? x * gain_pdf(p, x) : 0.0;
    }, 1e-13);
}

double pdf_mass_above(const LinkParams& p, double x)
{
    boost::math::quadrature::exp_sinh<double> q;
    const double lx = std::log(x);
    return q.integrate([&](double u) {
        const double xt = std::exp(lx + u);
        return xt > 1e300 ? 0.0 : xt * gain_pdf(p, xt);
    }, 1e-13);
}

double quantile(const LinkParams& p, double q)
{
    const double w = boost::math::gamma_p_inv(p.mu, q);
    return std::pow(w * std::pow(p.omega, p.alpha) / p.mu, 2.0 / p.alpha);
}

double empirical_cdf(const LinkParams& p, double x, double scale, std::uint64_t seed, long n)
{
    RandomStream rng(seed, 0);
    long hits = 0;
    for (long i = 0; i < n; ++i) hits += scale * sample_gain(p, rng) <= x;
    return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

TEST_CASE("envelope density")
{
    CHECK(envelope_pdf({2, 1, 1}, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(envelope_pdf({2, 2, 1}, 0.0) == 0.0);
    // 3 x^2 / 8 exp(-x^3 / 8) at 1.5, cross-checked by its unit mass below.
    CHECK(envelope_pdf({3, 1, 2}, 1.5) == doctest::Approx(0.553344759510329435).epsilon(1e-13));
    boost::math::quadrature::exp_sinh<double> q;
    const double mass = q.integrate([](double x) { return envelope_pdf({3, 1, 2}, x); }, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(envelope_pdf({2, 1, 1}, -0.1), DomainError);
}

TEST_CASE("gain CDF examples")
{
    CHECK(gain_cdf({2, 1, 1}, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(gain_cdf({3.3, 0.7, 2}, 0.0) == 0.0);
    CHECK_THROWS_AS(gain_cdf({2, 1, 1}, -1.0), DomainError);

    // Monte-Carlo oracle, 10^7 draws, 3 standard errors.
    const LinkParams p{2.5, 1.8, 3.0};
    const long n = 10'000'000;
    const double emp = empirical_cdf(p, 5.0, 1.0, 11, n);
    const double exact = gain_cdf(p, 5.0);
    CHECK(std::abs(emp - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / n));
}

TEST_CASE("gain density examples")
{
    CHECK(gain_pdf({2, 1, 1}, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(gain_pdf({2, 2, 1}, 1.0) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-14));

    const LinkParams p{4, 0.5, 2};
    const double h = 1e-6;
    const double fd = (gain_cdf(p, 0.3 + h) - gain_cdf(p, 0.3 - h)) / (2 * h);
    CHECK(gain_pdf(p, 0.3) == doctest::Approx(fd).epsilon(1e-5));
    CHECK(gain_pdf(p, 0.3) == doctest::Approx(0.198910915803748568).epsilon(1e-13));

    CHECK_THROWS_AS(gain_pdf({1, 0.5, 1}, 0.0), DomainError);
    CHECK(gain_pdf({2, 2, 1}, 0.0) == 0.0);
    CHECK(gain_pdf({2, 1, 2}, 0.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(gain_pdf({2, 2, 1}, -1.0), DomainError);
}

TEST_CASE("scaled gain laws")
{
    CHECK(scaled_gain_cdf({2, 1, 1}, 0.5, 0.5) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(scaled_gain_cdf({3, 2, 4}, 0.3, 0.0) == 0.0);
    CHECK(scaled_gain_pdf({2, 1, 1}, 0.5, 1.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));

    const LinkParams near{2.7, 1.3, 1.9};
    CHECK(scaled_gain_pdf(near, 1.0 - 1e-12, 0.8) == doctest::Approx(gain_pdf(near, 0.8)).epsilon(1e-9));

    const LinkParams q{2, 3, 2};
    const double h = 1e-6;
    const double fd = (scaled_gain_cdf(q, 0.3, 0.4 + h) - scaled_gain_cdf(q, 0.3, 0.4 - h)) / (2 * h);
    CHECK(scaled_gain_pdf(q, 0.3, 0.4) == doctest::Approx(fd).epsilon(1e-5));

    const LinkParams m{3, 2, 1.5};
    const long n = 10'000'000;
    const double emp = empirical_cdf(m, 0.7, 0.2, 12, n);
    const double exact = scaled_gain_cdf(m, 0.2, 0.7);
    CHECK(std::abs(emp - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / n));

    CHECK_THROWS_AS(scaled_gain_cdf(m, 1.0, 0.1), DomainError);
    CHECK_THROWS_AS(scaled_gain_cdf(m, 0.0, 0.1), DomainError);

    // scaled_link describes the same law.
    const LinkParams s = scaled_link(m, 0.2);
    CHECK(gain_cdf(s, 0.7) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("density integrates to one and to the CDF")
{
    for (double alpha : {1.0, 2.0, 3.0, 4.0}) {
        for (double mu : {0.5, 1.0, 2.0, 4.0}) {
            for (double omega : {1.0, 10.0}) {
                const LinkParams p{alpha, mu, omega};
                const double med = quantile(p, 0.5);
                CHECK(std::abs(pdf_mass_below(p, med) + pdf_mass_above(p, med) - 1.0) <= 1e-8);
                for (int k = 0; k < 20; ++k) {
                    const double x = quantile(p, (k + 0.5) / 20.0);
                    CHECK(std::abs(gain_cdf(p, x) - pdf_mass_below(p, x)) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("special-case collapse")
{
    for (double omega : {0.5, 1.0, 3.0}) {
        for (double x : {1e-6, 0.01, 0.3, 1.0, 4.0, 30.0}) {
            const double expo = -std::expm1(-x / (omega * omega));
            CHECK(std::abs(gain_cdf({2, 1, omega}, x) - expo) <= 1e-12);
            for (double m : {2.0, 3.0, 5.0}) {
                CHECK(gain_cdf({2, m, omega}, x) ==
                      doctest::Approx(boost::math::gamma_p(m, m * x / (omega * omega))).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("sampling moments and distribution")
{
    const long n = 10'000'000;
    for (const auto& [p, mean] : {std::pair{LinkParams{2, 1, 1}, 1.0}, {LinkParams{2, 2, 1}, 1.0}}) {
        RandomStream rng(5, 3);
        double s = 0.0, s2 = 0.0;
        for (long i = 0; i < n; ++i) {
            const double v = sample_gain(p, rng);
            s += v;
            s2 += v * v;
        }
        const double m = s / n;
        const double se = std::sqrt((s2 / n - m * m) / n);
        CHECK(std::abs(m - mean) <= 3.0 * se);
    }

    // Kolmogorov-Smirnov against gain_cdf, 1% critical value 1.628 / sqrt(n).
    const LinkParams p{3, 1.5, 2};
    const int k = 100'000;
    RandomStream rng(21, 0);
    std::vector<double> xs(k);
    for (auto& x : xs) x = sample_gain(p, rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < k; ++i) {
        const double f = gain_cdf(p, xs[i]);
        d = std::max({d, f - static_cast<double>(i) / k, static_cast<double>(i + 1) / k - f});
    }
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(k)));
}

TEST_CASE("sampling is deterministic per seed and stream")
{
    const LinkParams p{2.2, 0.6, 1.7};
    RandomStream a(99, 7), b(99, 7), c(99, 8);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = sample_gain(p, a);
        CHECK(x == sample_gain(p, b));
        differs = differs || x != sample_gain(p, c);
    }
    CHECK(differs);
}

TEST_CASE("link validation and weak-link warning")
{
    CHECK_THROWS_AS((LinkParams{0, 1, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((LinkParams{2, -1, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((LinkParams{2, 1, NAN}.validate()), ConfigError);
    LinkTriple ok{{2, 1, 10}, {2, 1, 1}, {2, 1, 10}};
    CHECK(ok.warnings().empty());
    LinkTriple weak{{2, 1, 10}, {2, 1, 10}, {2, 1, 1}};
    CHECK_NOTHROW(weak.validate());
    CHECK(weak.warnings().size() == 1);
}
