#include "crs/fading.hpp"

#include "crs/errors.hpp"
#include "crs/specfun.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace crs {

namespace {

void check_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(fmt::format("{} must be positive and finite (got {})", name, v));
    }
}

void check_a2(double a2)
{
    if (!(a2 > 0.0 && a2 < 1.0)) {
        throw DomainError(fmt::format("a2 must lie in (0, 1) (got {})", a2));
    }
}

// mu x^(alpha/2) / Omega^alpha
double gain_argument(const LinkParams& p, double x)
{
    return p.mu * std::pow(x / (p.omega * p.omega), 0.5 * p.alpha);
}

}  // namespace

void LinkParams::validate() const
{
    check_positive(alpha, "alpha");
    check_positive(mu, "mu");
    check_positive(omega, "omega");
}

void LinkTriple::validate() const
{
    sr.validate();
    sd.validate();
    rd.validate();
}

std::vector<std::string> LinkTriple::warnings() const
{
    std::vector<std::string> out;
    if (!(std::pow(sd.omega, sd.alpha) < std::pow(sr.omega, sr.alpha))) {
        out.push_back(fmt::format(
            "direct link is not weaker than the S-R link (Omega_sd^alpha_sd = {} >= {})",
            std::pow(sd.omega, sd.alpha), std::pow(sr.omega, sr.alpha)));
    }
    return out;
}

double envelope_pdf(const LinkParams& p, double x)
{
    p.validate();
    if (!(x >= 0.0)) throw DomainError(fmt::format("envelope_pdf: x = {} < 0", x));
    const double order = p.alpha * p.mu;
    const double log_norm = std::log(p.alpha) + p.mu * std::log(p.mu) -
                            order * std::log(p.omega) - specfun::log_gamma_abs(p.mu);
    if (x == 0.0) {
        if (order > 1.0) return 0.0;
        if (order == 1.0) return std::exp(log_norm);
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(log_norm + (order - 1.0) * std::log(x) -
                    p.mu * std::pow(x / p.omega, p.alpha));
}

double gain_cdf(const LinkParams& p, double x)
{
    p.validate();
    if (!(x >= 0.0)) throw DomainError(fmt::format("gain_cdf: x = {} < 0", x));
    if (std::isinf(x)) return 1.0;
    return specfun::regularized_lower_gamma(p.mu, gain_argument(p, x));
}

double gain_pdf(const LinkParams& p, double x)
{
    p.validate();
    const double k = p.half_order();
    if (x < 0.0 || (x == 0.0 && k < 1.0) || std::isnan(x)) {
        throw DomainError(fmt::format("gain_pdf: x = {} outside the support", x));
    }
    const double log_norm = std::log(0.5 * p.alpha) + p.mu * std::log(p.mu) -
                            2.0 * k * std::log(p.omega) - specfun::log_gamma_abs(p.mu);
    if (x == 0.0) return k > 1.0 ? 0.0 : std::exp(log_norm);
    if (std::isinf(x)) return 0.0;
    return std::exp(log_norm + (k - 1.0) * std::log(x) - gain_argument(p, x));
}

double scaled_gain_cdf(const LinkParams& p, double a2, double y)
{
    check_a2(a2);
    if (!(y >= 0.0)) throw DomainError(fmt::format("scaled_gain_cdf: y = {} < 0", y));
    return gain_cdf(p, y / a2);
}

double scaled_gain_pdf(const LinkParams& p, double a2, double y)
{
    check_a2(a2);
    return gain_pdf(p, y / a2) / a2;
}

LinkParams scaled_link(const LinkParams& p, double a2)
{
    if (!(a2 > 0.0) || !std::isfinite(a2)) {
        throw DomainError(fmt::format("scaled_link: scale must be positive (got {})", a2));
    }
    return {p.alpha, p.mu, std::sqrt(a2) * p.omega};
}

double sample_gain(const LinkParams& p, RandomStream& stream)
{
    const double g = stream.gamma(p.mu);
    return p.omega * p.omega * std::pow(g / p.mu, 2.0 / p.alpha);
}

}  // namespace crs
