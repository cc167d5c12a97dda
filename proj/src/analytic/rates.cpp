#include "crs/analytic.hpp"

#include "crs/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace crs {

namespace {

constexpr double kHalfOverLn2 = 0.5 / std::numbers::ln2;

// Re-throws the active exception with the term name prepended, keeping its type.
[[noreturn]] void rethrow_with_term(RateTerm t)
{
    const auto prefix = [t](const std::exception& e) {
        return fmt::format("{}: {}", to_string(t), e.what());
    };
    try {
        throw;
    } catch (const SeparationError& e) {
        throw SeparationError(prefix(e));
    } catch (const BudgetError& e) {
        throw BudgetError(prefix(e));
    } catch (const UnsupportedError& e) {
        throw UnsupportedError(prefix(e));
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(prefix(e));
    } catch (const PoleError& e) {
        throw PoleError(prefix(e));
    } catch (const DomainError& e) {
        throw DomainError(prefix(e));
    }
}

int integer_alpha(const LinkParams& p)
{
    const double r = std::round(p.alpha);
    if (r < 1.0 || std::abs(p.alpha - r) > 1e-12) {
        throw UnsupportedError(fmt::format(
            "closed-form rate terms need an integer alpha (got {})", p.alpha));
    }
    return static_cast<int>(r);
}

// ln(1 + rho e^t) without overflow for large t.
double log1p_scaled_exp(double log_rho, double t)
{
    const double l = log_rho + t;
    return l > 35.0 ? l + std::exp(-l) : std::log1p(std::exp(l));
}

// log of mu x^(alpha/2) / Omega^alpha at x = e^t.
double log_gain_argument(const LinkParams& p, double t)
{
    return std::log(p.mu) + 0.5 * p.alpha * (t - 2.0 * std::log(p.omega));
}

struct TermIntegrand {
    LinkParams density;
    std::optional<LinkParams> cdf;
    double log_rho;
    double log_norm;

    // ln(1 + rho x) * x f_A(x) * F_B(x) at x = e^t, where
    // x f_A(x) = (alpha/2) w^mu e^-w / Gamma(mu).
    double operator()(double t) const
    {
        const double lw = log_gain_argument(density, t);
        if (lw > 700.0) return 0.0;
        const double w = std::exp(lw);
        double v = log1p_scaled_exp(log_rho, t) * std::exp(log_norm + density.mu * lw - w);
        if (cdf && v != 0.0) {
            const double lwb = log_gain_argument(*cdf, t);
            if (lwb < 700.0) v *= specfun::regularized_lower_gamma(cdf->mu, std::exp(lwb));
        }
        return v;
    }
};

}  // namespace

std::string_view to_string(Backend b)
{
    switch (b) {
    case Backend::closed_form: return "closed-form";
    case Backend::quadrature: return "quadrature";
    case Backend::monte_carlo: return "mc";
    }
    return "?";
}

Backend parse_backend(std::string_view name)
{
    if (name == "closed-form") return Backend::closed_form;
    if (name == "quadrature") return Backend::quadrature;
    if (name == "mc") return Backend::monte_carlo;
    throw ConfigError(fmt::format("unknown backend '{}' (closed-form, quadrature, mc)", name));
}

std::string_view to_string(RateTerm t)
{
    static constexpr std::array<std::string_view, 12> names = {
        "I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I10", "I11", "I12"};
    return names[static_cast<std::size_t>(t) - 1];
}

TermSetup term_setup(RateTerm t, const SystemConfig& cfg, const LinkTriple& links)
{
    const double rho = cfg.rho;
    const double rho2 = cfg.a2 * cfg.rho;
    const LinkParams sr2 = scaled_link(links.sr, cfg.a2);
    switch (t) {
    case RateTerm::I1: return {links.sr, std::nullopt, rho};
    case RateTerm::I2: return {links.sr, links.sd, rho};
    case RateTerm::I3: return {links.sd, std::nullopt, rho};
    case RateTerm::I4: return {links.sd, links.sr, rho};
    case RateTerm::I5: return {links.sr, std::nullopt, rho2};
    case RateTerm::I6: return {links.sr, links.sd, rho2};
    case RateTerm::I7: return {links.sd, std::nullopt, rho2};
    case RateTerm::I8: return {links.sd, links.sr, rho2};
    case RateTerm::I9: return {sr2, std::nullopt, rho};
    case RateTerm::I10: return {sr2, links.rd, rho};
    case RateTerm::I11: return {links.rd, std::nullopt, rho};
    case RateTerm::I12: return {links.rd, sr2, rho};
    }
    throw DomainError("term_setup: unknown term");
}

specfun::MeijerGSpec build_rate_g_spec(const LinkParams& density)
{
    density.validate();
    const int k = integer_alpha(density);
    const double half = 0.5 * density.alpha * density.mu;
    const auto chi = specfun::build_delta(k, -half);
    const auto tail = specfun::build_delta(k, 1.0 - half);

    specfun::MeijerGSpec spec;
    spec.m = 2 + 2 * k;
    spec.n = k;
    spec.a = chi;
    spec.a.insert(spec.a.end(), tail.begin(), tail.end());
    spec.b = specfun::build_delta(2, 0.0);
    spec.b.insert(spec.b.end(), chi.begin(), chi.end());
    spec.b.insert(spec.b.end(), chi.begin(), chi.end());
    return spec;
}

double rate_g_argument(const LinkParams& density, double rho)
{
    const double a = density.alpha;
    return std::exp(2.0 * std::log(density.mu) - std::log(4.0) -
                    2.0 * a * std::log(density.omega) - a * std::log(rho));
}

double rate_g_prefactor(const LinkParams& density, double rho)
{
    const double a = density.alpha;
    const double mu = density.mu;
    return std::exp(mu * std::log(mu) - 0.5 * std::log(2.0) -
                    (a - 0.5) * std::log(2.0 * std::numbers::pi) -
                    a * mu * std::log(density.omega) - specfun::log_gamma_abs(mu) -
                    0.5 * a * mu * std::log(rho));
}

specfun::EGBFHFSpec build_rate_h_spec(const LinkParams& density, const LinkParams& cdf)
{
    density.validate();
    cdf.validate();
    specfun::EGBFHFSpec s;
    s.outer = {1.0 - density.mu, 2.0 / density.alpha, cdf.alpha / density.alpha};
    s.x_upper = {{1.0, 1.0}, {1.0, 1.0}};
    s.x_lower = {{1.0, 1.0}, {0.0, 1.0}};
    s.y_upper = {{1.0, 1.0}};
    s.y_lower = {{cdf.mu, 1.0}, {0.0, 1.0}};
    return s;
}

double rate_h_x(const LinkParams& density, double rho)
{
    return rho * density.omega * density.omega / std::pow(density.mu, 2.0 / density.alpha);
}

double rate_h_y(const LinkParams& density, const LinkParams& cdf)
{
    const double r = cdf.alpha / density.alpha;
    return std::exp(std::log(cdf.mu) + cdf.alpha * std::log(density.omega) -
                    r * std::log(density.mu) - cdf.alpha * std::log(cdf.omega));
}

Estimate rate_term_closed_form(const TermSetup& setup, const specfun::ContourPolicy& policy)
{
    if (setup.rho == 0.0) return {};
    if (!setup.cdf) {
        const auto spec = build_rate_g_spec(setup.density);
        const auto g = specfun::meijer_g(spec, rate_g_argument(setup.density, setup.rho), policy);
        const double pre = rate_g_prefactor(setup.density, setup.rho);
        return {pre * g.value, pre * g.error};
    }
    const auto spec = build_rate_h_spec(setup.density, *setup.cdf);
    const auto h = specfun::egbfhf(spec, rate_h_x(setup.density, setup.rho),
                                   rate_h_y(setup.density, *setup.cdf), policy);
    const double norm = std::exp(-specfun::log_gamma_abs(setup.density.mu) -
                                 specfun::log_gamma_abs(setup.cdf->mu));
    return {norm * h.value, norm * h.error};
}

Estimate rate_integrand_quadrature(const LinkParams& density,
                                   const std::optional<LinkParams>& cdf, double rho)
{
    density.validate();
    if (cdf) cdf->validate();
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw DomainError(fmt::format("rate_integrand_quadrature: rho = {}", rho));
    }
    if (rho == 0.0) return {};

    const TermIntegrand f{density, cdf, std::log(rho),
                          std::log(0.5 * density.alpha) - specfun::log_gamma_abs(density.mu)};
    const double w_median = boost::math::gamma_p_inv(density.mu, 0.5);
    const double t_median = 2.0 * std::log(density.omega) +
                            (2.0 / density.alpha) * (std::log(w_median) - std::log(density.mu));

    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double value = 0.0;
    double error = 0.0;
    try {
        double err_right = 0.0;
        double err_left = 0.0;
        const double right = integrator.integrate(
            [&](double u) { return f(t_median + u); }, 1e-12, &err_right);
        const double left = integrator.integrate(
            [&](double u) { return f(t_median - u); }, 1e-12, &err_left);
        value = left + right;
        error = err_left + err_right;
    } catch (const std::exception& e) {
        throw ConvergenceError(fmt::format("quadrature failed: {}", e.what()));
    }
    if (!std::isfinite(value) || error > std::max(1e-9, 1e-7 * std::abs(value))) {
        throw ConvergenceError(fmt::format(
            "quadrature error estimate {} exceeds max(1e-9, 1e-7 |{}|)", error, value));
    }
    return {value, error};
}

Estimate rate_term(RateTerm t, const SystemConfig& cfg, const LinkTriple& links, Backend backend,
                   const specfun::ContourPolicy& policy)
{
    try {
        const TermSetup s = term_setup(t, cfg, links);
        switch (backend) {
        case Backend::closed_form: return rate_term_closed_form(s, policy);
        case Backend::quadrature: return rate_integrand_quadrature(s.density, s.cdf, s.rho);
        case Backend::monte_carlo: break;
        }
    } catch (const ConvergenceError&) {
        rethrow_with_term(t);
    } catch (const DomainError&) {
        rethrow_with_term(t);
    }
    throw ConfigError("rate terms have no Monte-Carlo backend; use simulate_rates");
}

namespace {

struct SignedTerm {
    RateTerm term;
    double sign;
};

Estimate combine(std::initializer_list<SignedTerm> terms, const SystemConfig& cfg,
                 const LinkTriple& links, Backend backend, const specfun::ContourPolicy& policy)
{
    cfg.validate();
    links.validate();
    double sum = 0.0;
    double err = 0.0;
    for (const auto& [term, sign] : terms) {
        const Estimate e = rate_term(term, cfg, links, backend, policy);
        sum += sign * e.value;
        err += e.error;
    }
    Estimate out{kHalfOverLn2 * sum, kHalfOverLn2 * err};
    // Both rates are non-negative; a tiny negative sum is cancellation noise.
    if (out.value < 0.0 && out.value >= -(out.error + 1e-12)) out.value = 0.0;
    return out;
}

}  // namespace

Estimate avg_rate_s1(const SystemConfig& cfg, const LinkTriple& links, Backend backend,
                     const specfun::ContourPolicy& policy)
{
    using enum RateTerm;
    return combine({{I1, 1}, {I2, -1}, {I3, 1}, {I4, -1},
                    {I5, -1}, {I6, 1}, {I7, -1}, {I8, 1}},
                   cfg, links, backend, policy);
}

Estimate avg_rate_s2(const SystemConfig& cfg, const LinkTriple& links, Backend backend,
                     const specfun::ContourPolicy& policy)
{
    using enum RateTerm;
    return combine({{I9, 1}, {I10, -1}, {I11, 1}, {I12, -1}}, cfg, links, backend, policy);
}

RateReport average_rates(const SystemConfig& cfg, const LinkTriple& links, Backend backend,
                         const specfun::ContourPolicy& policy)
{
    if (backend == Backend::monte_carlo) {
        throw ConfigError("average_rates: use simulate_rates for the Monte-Carlo backend");
    }
    const Estimate s1 = avg_rate_s1(cfg, links, backend, policy);
    const Estimate s2 = avg_rate_s2(cfg, links, backend, policy);
    RateReport r;
    r.c_s1 = s1.value;
    r.c_s2 = s2.value;
    r.c_total = s1.value + s2.value;
    r.backend = backend;
    r.err_s1 = s1.error;
    r.err_s2 = s2.error;
    r.err_total = s1.error + s2.error;
    return r;
}

}  // namespace crs
