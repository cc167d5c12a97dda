#include "crs/analytic.hpp"

#include "crs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace crs {

namespace {

double union_of_two(double f1, double f2)
{
    return f1 + f2 - f1 * f2;
}

}  // namespace

double outage_s1(const SystemConfig& cfg, const LinkTriple& links)
{
    cfg.validate();
    links.validate();
    if (!cfg.s1_feasible()) return 1.0;
    const double phi1 = cfg.phi1();
    return union_of_two(gain_cdf(links.sr, phi1), gain_cdf(links.sd, phi1));
}

double outage_s2(const SystemConfig& cfg, const LinkTriple& links)
{
    cfg.validate();
    links.validate();
    if (!cfg.s1_feasible()) return 1.0;
    return union_of_two(gain_cdf(links.sr, cfg.phi_max()), gain_cdf(links.rd, cfg.phi_rd()));
}

double asymptotic_gain_cdf(const LinkParams& p, double x)
{
    p.validate();
    if (!(x >= 0.0)) throw DomainError("asymptotic_gain_cdf: x < 0");
    if (x == 0.0) return 0.0;
    const double log_w = std::log(p.mu) + 0.5 * p.alpha * std::log(x) - p.alpha * std::log(p.omega);
    return std::exp(p.mu * log_w - std::lgamma(p.mu + 1.0));
}

double asymptotic_outage_s1(const SystemConfig& cfg, const LinkTriple& links)
{
    cfg.validate();
    links.validate();
    if (!cfg.s1_feasible()) return 1.0;
    const double phi1 = cfg.phi1();
    return asymptotic_gain_cdf(links.sr, phi1) + asymptotic_gain_cdf(links.sd, phi1);
}

double asymptotic_outage_s2(const SystemConfig& cfg, const LinkTriple& links)
{
    cfg.validate();
    links.validate();
    if (!cfg.s1_feasible()) return 1.0;
    return asymptotic_gain_cdf(links.sr, cfg.phi_max()) +
           asymptotic_gain_cdf(links.rd, cfg.phi_rd());
}

DiversityOrders diversity_orders(const LinkTriple& links)
{
    links.validate();
    const double sr = 2.0 * links.sr.half_order();
    return {0.5 * std::min(sr, 2.0 * links.sd.half_order()),
            0.5 * std::min(sr, 2.0 * links.rd.half_order())};
}

OutageReport outage_report(const SystemConfig& cfg, const LinkTriple& links)
{
    const DiversityOrders d = diversity_orders(links);
    return {outage_s1(cfg, links),           outage_s2(cfg, links),
            asymptotic_outage_s1(cfg, links), asymptotic_outage_s2(cfg, links),
            d.d1,                             d.d2};
}

}  // namespace crs
