#include "commands.hpp"

#include "crs/errors.hpp"
#include "crs/optimizer.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numeric>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace crs::cli {

namespace {

constexpr double kDefaultTolerance = specfun::ContourPolicy{}.tolerance;
constexpr double kSigmas = 4.0;

struct Group {
    std::string name;
    int checks = 0;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok) failures.push_back(what);
    }
};

LinkTriple rate_links(double alpha, double mu)
{
    return {{alpha, mu, 10.0}, {alpha, mu, 1.0}, {alpha, mu, 10.0}};
}

LinkTriple outage_links(double alpha, double mu)
{
    return {{alpha, mu, 10.0}, {alpha, mu, 10.0}, {alpha, mu, 1.0}};
}

LinkTriple perturbed(LinkTriple l, double delta)
{
    l.sr.alpha += delta;
    l.sd.alpha += delta;
    l.rd.alpha += delta;
    return l;
}

void identities(Group& g, const specfun::ContourPolicy& policy)
{
    const specfun::MeijerGSpec exp_spec{1, 0, {}, {0.0}};
    const specfun::MeijerGSpec log_spec{1, 2, {1.0, 1.0}, {1.0, 0.0}};
    for (int i = 0; i < 50; ++i) {
        const double x = std::pow(10.0, -2.0 + 4.0 * i / 49.0);
        const double e = specfun::meijer_g(exp_spec, x, policy).value;
        g.check(std::abs(e - std::exp(-x)) <= 1e-6 * std::exp(-x),
                fmt::format("exp identity at x = {}: {} vs {}", x, e, std::exp(-x)));
        const double l = specfun::meijer_g(log_spec, x, policy).value;
        g.check(std::abs(l - std::log1p(x)) <= 1e-6 * std::log1p(x),
                fmt::format("log identity at x = {}: {} vs {}", x, l, std::log1p(x)));
    }
}

void fading_normalization(Group& g)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double alpha : {1.0, 2.0, 3.0, 4.0}) {
        for (double mu : {0.5, 1.0, 2.0, 4.0}) {
            for (double omega : {1.0, 10.0}) {
                const LinkParams p{alpha, mu, omega};
                // x f(x) on t = ln x, split at the median.
                const auto xf = [&](double t) {
                    const double lw = std::log(mu) + 0.5 * alpha * (t - 2.0 * std::log(omega));
                    if (lw > 700.0) return 0.0;
                    return std::exp(std::log(0.5 * alpha) + mu * lw - std::exp(lw) - std::lgamma(mu));
                };
                const double wm = boost::math::gamma_p_inv(mu, 0.5);
                const double tm = 2.0 * std::log(omega) + (2.0 / alpha) * std::log(wm / mu);
                const double total =
                    integrator.integrate([&](double u) { return xf(tm + u); }, 1e-13) +
                    integrator.integrate([&](double u) { return xf(tm - u); }, 1e-13);
                g.check(std::abs(total - 1.0) <= 1e-8,
                        fmt::format("pdf mass {} for ({}, {}, {})", total, alpha, mu, omega));
                g.check(std::abs(gain_cdf(p, std::exp(tm)) - 0.5) <= 1e-10,
                        fmt::format("cdf at the median for ({}, {}, {})", alpha, mu, omega));
            }
        }
    }
}

void backend_agreement(Group& g, const specfun::ContourPolicy& policy)
{
    for (double alpha : {2.0, 3.0}) {
        for (double mu : {1.0, 2.0}) {
            for (double rho : {10.0, 1000.0}) {
                const auto links = rate_links(alpha, mu);
                const auto cfg = SystemConfig::make(rho, 0.1, 1.0, 1.0);
                const RateReport c = average_rates(cfg, links, Backend::closed_form, policy);
                const RateReport q = average_rates(cfg, links, Backend::quadrature);
                for (const auto& [name, a, b] :
                     {std::tuple{"c_s1", c.c_s1, q.c_s1}, {"c_s2", c.c_s2, q.c_s2}}) {
                    g.check(std::abs(a - b) <= std::max(1e-5, 1e-4 * std::abs(b)),
                            fmt::format("{} at ({}, {}, rho={}): {} vs {}", name, alpha, mu, rho,
                                        a, b));
                }
            }
        }
    }
}

void mc_rates(Group& g, const Scenario& s)
{
    const auto links = rate_links(2.0, 1.0);
    const auto cfg = SystemConfig::make(100.0, 0.17, 1.0, 1.0);
    const RateReport q = average_rates(cfg, links, Backend::quadrature);
    const SimulatedRates mc = simulate_rates(cfg, perturbed(links, s.inject_alpha_perturbation), s.mc);
    for (const auto& [name, est, ref] :
         {std::tuple{"c_s1", mc.c_s1, q.c_s1}, {"c_s2", mc.c_s2, q.c_s2}}) {
        g.check(std::abs(est.mean - ref) <= kSigmas * est.std_error,
                fmt::format("{}: simulated {} +/- {} vs analytic {}", name, est.mean,
                            est.std_error, ref));
    }
}

void mc_outage(Group& g, const Scenario& s)
{
    const auto links = outage_links(2.0, 1.0);
    for (double rho_db : {10.0, 20.0}) {
        const auto cfg = SystemConfig::make(db_to_linear(rho_db), 0.1, 1.0, 1.0);
        const SimulatedOutage mc =
            simulate_outage(cfg, perturbed(links, s.inject_alpha_perturbation), s.mc);
        const double p1 = outage_s1(cfg, links);
        const double p2 = outage_s2(cfg, links);
        g.check(std::abs(mc.p1.mean - p1) <= kSigmas * mc.p1.std_error,
                fmt::format("p_out1 at {} dB: {} vs {}", rho_db, mc.p1.mean, p1));
        g.check(std::abs(mc.p2.mean - p2) <= kSigmas * mc.p2.std_error,
                fmt::format("p_out2 at {} dB: {} vs {}", rho_db, mc.p2.mean, p2));
        const OutageAudit audit = audit_outage_forms(cfg, links, 100'000, s.mc.seed);
        g.check(audit.consistent(), fmt::format("threshold and rate forms differ at {} dB", rho_db));
    }
}

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

void diversity_slopes(Group& g)
{
    for (const auto& [alpha, mu] : {std::pair{2.0, 1.0}, {2.0, 2.0}, {3.0, 1.0}}) {
        const auto links = outage_links(alpha, mu);
        std::vector<double> x, y1, y2;
        for (int i = 0; i <= 10; ++i) {
            const double db = 30.0 + i;
            const auto cfg = SystemConfig::make(db_to_linear(db), 0.1, 1.0, 1.0);
            x.push_back(db / 10.0);
            y1.push_back(std::log10(outage_s1(cfg, links)));
            y2.push_back(std::log10(outage_s2(cfg, links)));
        }
        const DiversityOrders d = diversity_orders(links);
        const double s1 = slope(x, y1);
        const double s2 = slope(x, y2);
        g.check(std::abs(-s1 - d.d1) <= 0.1 * d.d1,
                fmt::format("({}, {}): slope {} vs -d1 = {}", alpha, mu, s1, -d.d1));
        g.check(std::abs(-s2 - d.d2) <= 0.1 * d.d2,
                fmt::format("({}, {}): slope {} vs -d2 = {}", alpha, mu, s2, -d.d2));
    }
}

void asymptote(Group& g)
{
    const auto links = outage_links(2.0, 1.0);
    const auto cfg = SystemConfig::make(db_to_linear(50.0), 0.1, 1.0, 1.0);
    const double ratio = asymptotic_outage_s1(cfg, links) / outage_s1(cfg, links);
    g.check(std::abs(ratio - 1.0) <= 0.05, fmt::format("asymptotic/exact = {}", ratio));
}

void table_row(Group& g)
{
    constexpr std::array<double, 8> expected = {0.24, 0.24, 0.24, 0.24, 0.17, 0.1, 0.06, 0.04};
    const auto links = rate_links(2.0, 1.0);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double db = 5.0 * static_cast<double>(i);
        const auto r = optimize_a2(db_to_linear(db), 1.0, links, GridSpec{24, 1.0});
        g.check(std::abs(r.a2_opt - expected[i]) < 1e-9,
                fmt::format("{} dB: a2_opt {} vs {}", db, r.a2_opt, expected[i]));
    }
}

}  // namespace

ValidateReport cmd_validate(const Scenario& s)
{
    s.mc.validate();
    specfun::ContourPolicy policy;
    policy.tolerance = s.tolerance;
    const bool tightened = s.tolerance < kDefaultTolerance;

    using Runner = std::function<void(Group&)>;
    const std::vector<std::pair<std::string, Runner>> groups = {
        {"special_function_identities", [&](Group& g) { identities(g, policy); }},
        {"fading_normalization", [&](Group& g) { fading_normalization(g); }},
        {"backend_agreement", [&](Group& g) { backend_agreement(g, policy); }},
        {"mc_rates", [&](Group& g) { mc_rates(g, s); }},
        {"mc_outage", [&](Group& g) { mc_outage(g, s); }},
        {"diversity_slopes", [&](Group& g) { diversity_slopes(g); }},
        {"asymptotic_outage", [&](Group& g) { asymptote(g); }},
        {"power_allocation_table", [&](Group& g) { table_row(g); }},
    };

    nlohmann::ordered_json report;
    report["scenario"] = s.name;
    report["seed"] = s.mc.seed;
    report["samples"] = s.mc.n;
    report["tolerance"] = s.tolerance;
    report["inject_alpha_perturbation"] = s.inject_alpha_perturbation;
    report["groups"] = nlohmann::ordered_json::array();
    bool passed = true;
    for (const auto& [name, run] : groups) {
        Group g{name, 0, {}};
        std::string status;
        try {
            run(g);
            status = g.failures.empty() ? "pass" : "fail";
        } catch (const ConvergenceError& e) {
            g.failures.push_back(e.what());
            status = tightened ? "warning" : "fail";
        }
        if (status == "fail") passed = false;
        nlohmann::ordered_json entry;
        entry["name"] = name;
        entry["status"] = status;
        entry["checks"] = g.checks;
        entry["failures"] = g.failures;
        report["groups"].push_back(entry);
    }
    report["status"] = passed ? "pass" : "fail";
    return {report.dump(2) + "\n", passed};
}

}  // namespace crs::cli
