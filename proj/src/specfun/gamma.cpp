#include "crs/errors.hpp"
#include "crs/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

namespace crs::specfun {

namespace {

constexpr double kPoleTolerance = 1e-12;
constexpr double kStirlingRadius = 10.0;

// B_{2k} / (2k (2k - 1)) for k = 1..8.
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,    1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0,
};

bool near_nonpositive_integer(double x)
{
    const double r = std::round(x);
    return r <= 0.0 && std::abs(x - r) < kPoleTolerance;
}

// Valid for |w| >= 10 and Re w > 0; truncation error < 1e-17.
complex stirling(complex w)
{
    const complex inv = 1.0 / w;
    const complex inv2 = inv * inv;
    complex series = 0.0;
    for (auto it = kStirling.rbegin(); it != kStirling.rend(); ++it) {
        series = series * inv2 + *it;
    }
    series *= inv;
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double real_lgamma(double x, int* sign)
{
#if defined(__GLIBC__)
    return ::lgamma_r(x, sign);
#else
    const double v = std::lgamma(x);
    *sign = (x > 0.0 || static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
    return v;
#endif
}

}  // namespace

complex log_gamma(complex z)
{
    const double re = z.real();
    const double im = z.imag();
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw DomainError("log_gamma: non-finite argument");
    }
    if (std::abs(im) < kPoleTolerance && near_nonpositive_integer(re)) {
        throw PoleError(fmt::format("log_gamma: pole at z = {}", re));
    }
    if (im == 0.0 && re > 0.0) {
        int sign = 1;
        return {real_lgamma(re, &sign), 0.0};
    }

    // Shift to the Stirling region with the recurrence
    // log Gamma(z) = log Gamma(z + N) - sum_k log(z + k). Each principal log
    // is analytic off (-inf, -k], so the sum keeps the principal branch.
    int shift = 0;
    if (re < 0.5) {
        shift = static_cast<int>(std::ceil(0.5 - re));
    }
    if (std::abs(im) < kStirlingRadius) {
        const double need = std::sqrt(kStirlingRadius * kStirlingRadius - im * im) - re;
        if (need > shift) {
            shift = static_cast<int>(std::ceil(need));
        }
    }
    complex correction = 0.0;
    for (int k = 0; k < shift; ++k) {
        correction += std::log(z + static_cast<double>(k));
    }
    return stirling(z + static_cast<double>(shift)) - correction;
}

double log_gamma_abs(double x)
{
    if (!std::isfinite(x)) {
        throw DomainError("log_gamma_abs: non-finite argument");
    }
    if (near_nonpositive_integer(x)) {
        throw PoleError(fmt::format("log_gamma_abs: pole at x = {}", x));
    }
    int sign = 1;
    return real_lgamma(x, &sign);
}

namespace {

constexpr double kSeriesTolerance = 1e-14;
constexpr int kMaxIterations = 100000;

void check_incomplete_args(double s, double x, const char* who)
{
    if (!(s > 0.0) || !std::isfinite(s) || !(x >= 0.0)) {
        throw DomainError(fmt::format("{}: requires s > 0 and x >= 0 (s = {}, x = {})",
                                      who, s, x));
    }
}

// sum_{n>=0} x^n / (s (s+1) ... (s+n)); gamma(s, x) = x^s e^-x * sum.
double lower_series(double s, double x)
{
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kSeriesTolerance) {
            return sum;
        }
    }
    throw ConvergenceError("incomplete gamma series did not converge");
}

// Modified Lentz evaluation of the continued fraction for
// Gamma(s, x) = x^s e^-x * cf.
double upper_fraction(double s, double x)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kSeriesTolerance) {
            return h;
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

double log_prefactor(double s, double x)
{
    return s * std::log(x) - x;
}

}  // namespace

double regularized_lower_gamma(double s, double x)
{
    check_incomplete_args(s, x, "regularized_lower_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double lg = log_gamma_abs(s);
    if (x < s + 1.0) {
        return std::exp(log_prefactor(s, x) - lg) * lower_series(s, x);
    }
    return 1.0 - std::exp(log_prefactor(s, x) - lg) * upper_fraction(s, x);
}

double regularized_upper_gamma(double s, double x)
{
    check_incomplete_args(s, x, "regularized_upper_gamma");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double lg = log_gamma_abs(s);
    if (x < s + 1.0) {
        return 1.0 - std::exp(log_prefactor(s, x) - lg) * lower_series(s, x);
    }
    return std::exp(log_prefactor(s, x) - lg) * upper_fraction(s, x);
}

double lower_incomplete_gamma(double s, double x)
{
    check_incomplete_args(s, x, "lower_incomplete_gamma");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        return std::exp(log_prefactor(s, x)) * lower_series(s, x);
    }
    const double lg = log_gamma_abs(s);
    if (std::isinf(x)) return std::exp(lg);
    return std::exp(lg) - std::exp(log_prefactor(s, x)) * upper_fraction(s, x);
}

double pochhammer(double x, double y)
{
    if (y == 0.0) {
        if (near_nonpositive_integer(x)) {
            throw PoleError(fmt::format("pochhammer: pole at x = {}", x));
        }
        return 1.0;
    }
    int sign_num = 1;
    int sign_den = 1;
    if (near_nonpositive_integer(x) || near_nonpositive_integer(x + y)) {
        throw PoleError(fmt::format("pochhammer: pole at x = {}, x + y = {}", x, x + y));
    }
    const double num = real_lgamma(x + y, &sign_num);
    const double den = real_lgamma(x, &sign_den);
    return sign_num * sign_den * std::exp(num - den);
}

std::vector<double> build_delta(int k, double y)
{
    if (k < 1) {
        throw DomainError(fmt::format("build_delta: k must be >= 1 (got {})", k));
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out.push_back((y + i) / k);
    }
    return out;
}

}  // namespace crs::specfun
