#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "crs/fading.hpp"
#include "crs/specfun.hpp"
#include "crs/system.hpp"

namespace crs {

/// How average rates are evaluated.
enum class Backend { closed_form, quadrature, monte_carlo };

std::string_view to_string(Backend b);
/// Accepts "closed-form", "quadrature" and "mc"; throws ConfigError otherwise.
Backend parse_backend(std::string_view name);

/// The twelve integrals the two rate theorems are assembled from.
enum class RateTerm { I1 = 1, I2, I3, I4, I5, I6, I7, I8, I9, I10, I11, I12 };

std::string_view to_string(RateTerm t);

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// One rate term as the integral  Int_0^inf ln(1 + rho x) f_A(x) [F_B(x)] dx,
/// with f_A the gain density of `density` and F_B the gain CDF of `cdf`
/// (absent for the pure Meijer-G terms). Scaled gains a2 lambda are
/// expressed through scaled_link().
struct TermSetup {
    LinkParams density;
    std::optional<LinkParams> cdf;
    double rho = 0.0;
};

TermSetup term_setup(RateTerm t, const SystemConfig& cfg, const LinkTriple& links);

/// G-function parameters of a density-only term. Requires integer alpha;
/// throws UnsupportedError otherwise.
specfun::MeijerGSpec build_rate_g_spec(const LinkParams& density);

/// Argument and prefactor matching build_rate_g_spec.
double rate_g_argument(const LinkParams& density, double rho);
double rate_g_prefactor(const LinkParams& density, double rho);

/// EGBFHF parameters and arguments of a density-times-CDF term.
specfun::EGBFHFSpec build_rate_h_spec(const LinkParams& density, const LinkParams& cdf);
double rate_h_x(const LinkParams& density, double rho);
double rate_h_y(const LinkParams& density, const LinkParams& cdf);

/// Special-function route for one term.
Estimate rate_term_closed_form(const TermSetup& setup, const specfun::ContourPolicy& policy = {});

/// Direct quadrature route: exp-sinh on t = ln x, split at the median of
/// the density link. Accepts when the estimated error is below
/// max(1e-9, 1e-7 |value|); throws ConvergenceError otherwise.
Estimate rate_integrand_quadrature(const LinkParams& density,
                                   const std::optional<LinkParams>& cdf, double rho);

Estimate rate_term(RateTerm t, const SystemConfig& cfg, const LinkTriple& links, Backend backend,
                   const specfun::ContourPolicy& policy = {});

/// Average rate of s1, (0.5 / ln 2) [(I1 - I2 + I3 - I4) - (I5 - I6 + I7 - I8)].
/// Failures are rethrown with the failing term named in the message.
Estimate avg_rate_s1(const SystemConfig& cfg, const LinkTriple& links,
                     Backend backend = Backend::quadrature,
                     const specfun::ContourPolicy& policy = {});

/// Average rate of s2, (0.5 / ln 2) [I9 - I10 + I11 - I12].
Estimate avg_rate_s2(const SystemConfig& cfg, const LinkTriple& links,
                     Backend backend = Backend::quadrature,
                     const specfun::ContourPolicy& policy = {});

struct RateReport {
    double c_s1 = 0.0;
    double c_s2 = 0.0;
    double c_total = 0.0;
    Backend backend = Backend::quadrature;
    double err_s1 = 0.0;
    double err_s2 = 0.0;
    double err_total = 0.0;
};

/// Both analytic rates. Backend::monte_carlo is rejected here; simulated
/// rates come from simulate_rates().
RateReport average_rates(const SystemConfig& cfg, const LinkTriple& links, Backend backend,
                         const specfun::ContourPolicy& policy = {});

// --------------------------------------------------------------- outage

/// Pr(O1) = F_sr(Phi1) + F_sd(Phi1) - F_sr(Phi1) F_sd(Phi1); 1 when infeasible.
double outage_s1(const SystemConfig& cfg, const LinkTriple& links);

/// Pr(O2) = F_sr(Phi_max) + F_rd(eta2 / rho) - product; 1 when infeasible.
double outage_s2(const SystemConfig& cfg, const LinkTriple& links);

/// High-SNR leading term of one gain CDF: w^mu / Gamma(mu + 1) with
/// w = mu x^(alpha/2) / Omega^alpha.
double asymptotic_gain_cdf(const LinkParams& p, double x);

/// Sum of the sr and sd leading terms at Phi1 (the product term is of
/// higher order). Returns 1 when s1 is infeasible.
double asymptotic_outage_s1(const SystemConfig& cfg, const LinkTriple& links);

/// Sum of the sr leading term at Phi_max and the rd leading term at eta2 / rho.
double asymptotic_outage_s2(const SystemConfig& cfg, const LinkTriple& links);

struct DiversityOrders {
    double d1 = 0.0;
    double d2 = 0.0;
};

/// d1 = 0.5 min(alpha_sr mu_sr, alpha_sd mu_sd), d2 = 0.5 min(alpha_sr mu_sr, alpha_rd mu_rd).
DiversityOrders diversity_orders(const LinkTriple& links);

struct OutageReport {
    double p_out1 = 0.0;
    double p_out2 = 0.0;
    double p_out1_asym = 0.0;
    double p_out2_asym = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

OutageReport outage_report(const SystemConfig& cfg, const LinkTriple& links);

}  // namespace crs
