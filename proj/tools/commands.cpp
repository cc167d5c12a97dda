#include "commands.hpp"

#include "crs/errors.hpp"
#include "crs/optimizer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

namespace crs::cli {

std::string format_number(double v)
{
    return fmt::format("{:.17g}", v);
}

namespace {

specfun::ContourPolicy policy_for(const Scenario& s)
{
    specfun::ContourPolicy p;
    p.tolerance = s.tolerance;
    return p;
}

OptimizerOptions optimizer_options(const Scenario& s)
{
    OptimizerOptions o;
    o.backend = s.backend;
    o.policy = policy_for(s);
    o.mc = s.mc;
    return o;
}

void write_header(std::ostringstream& out, const Scenario& s, std::string_view command)
{
    out << "# command = " << command << '\n';
    for (const auto& line : s.provenance()) out << "# " << line << '\n';
}

void write_row(std::ostringstream& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out << ',';
        out << cells[i];
    }
    out << '\n';
}

// Least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

std::string cmd_rate(const Scenario& s)
{
    s.validate();
    std::ostringstream out;
    write_header(out, s, "rate");
    write_row(out, {std::string(to_string(s.sweep.variable)), "alpha", "mu", "a2", "c_s1", "c_s2",
                    "c_noma_total", "c_oma", "backend", "err", "mc_stderr"});
    const auto policy = policy_for(s);
    for (const Family& f : s.effective_families()) {
        for (double v : s.sweep.values()) {
            const LinkTriple links = s.links_for(f, v);
            const double rho = s.rho_for(v);
            double a2 = s.a2_for(v);
            if (s.optimize_a2) {
                a2 = optimize_a2(rho, s.r2, links, GridSpec{s.grid_m, s.r1}, optimizer_options(s))
                         .a2_opt;
            }
            const SystemConfig cfg = SystemConfig::make(rho, a2, s.r1, s.r2);
            const SimulatedRates mc = simulate_rates(cfg, links, s.mc);
            double c1 = 0.0, c2 = 0.0, err = 0.0;
            if (s.backend == Backend::monte_carlo) {
                c1 = mc.c_s1.mean;
                c2 = mc.c_s2.mean;
                err = mc.c_s1.std_error + mc.c_s2.std_error;
            } else {
                const RateReport r = average_rates(cfg, links, s.backend, policy);
                c1 = r.c_s1;
                c2 = r.c_s2;
                err = r.err_total;
            }
            write_row(out, {format_number(v), format_number(links.sr.alpha),
                            format_number(links.sr.mu), format_number(a2), format_number(c1),
                            format_number(c2), format_number(c1 + c2),
                            format_number(mc.c_oma.mean), std::string(to_string(s.backend)),
                            format_number(err), format_number(mc.c_oma.std_error)});
        }
    }
    return out.str();
}

std::string cmd_outage(const Scenario& s)
{
    s.validate();
    if (s.sweep.variable != SweepVariable::rho_db) {
        throw ConfigError("the outage command sweeps rho_db only");
    }
    std::ostringstream out;
    write_header(out, s, "outage");
    write_row(out, {"rho_db", "alpha", "mu", "p_out1_closed", "p_out2_closed", "p_out1_mc",
                    "p_out2_mc", "p_out1_asym", "p_out2_asym", "d1", "d2"});
    std::vector<std::string> slopes;
    for (const Family& f : s.effective_families()) {
        std::vector<double> db, lp1, lp2;
        DiversityOrders d{};
        const double last = s.sweep.values().back();
        for (double v : s.sweep.values()) {
            const LinkTriple links = s.links_for(f, v);
            const SystemConfig cfg = SystemConfig::make(s.rho_for(v), s.a2_for(v), s.r1, s.r2);
            const OutageReport r = outage_report(cfg, links);
            const SimulatedOutage mc = simulate_outage(cfg, links, s.mc);
            d = {r.d1, r.d2};
            write_row(out, {format_number(v), format_number(links.sr.alpha),
                            format_number(links.sr.mu), format_number(r.p_out1),
                            format_number(r.p_out2), format_number(mc.p1.mean),
                            format_number(mc.p2.mean), format_number(r.p_out1_asym),
                            format_number(r.p_out2_asym), format_number(r.d1),
                            format_number(r.d2)});
            // Last two decades of rho.
            if (v >= last - 20.0 && r.p_out1 > 0.0 && r.p_out2 > 0.0) {
                db.push_back(v / 10.0);
                lp1.push_back(std::log10(r.p_out1));
                lp2.push_back(std::log10(r.p_out2));
            }
        }
        if (db.size() >= 2) {
            slopes.push_back(fmt::format(
                "# slope alpha={} mu={} rho_db=[{}, {}]: p_out1 {} (-d1 = {}), p_out2 {} (-d2 = {})",
                f.alpha, f.mu, db.front() * 10.0, db.back() * 10.0,
                format_number(ls_slope(db, lp1)), -d.d1, format_number(ls_slope(db, lp2)), -d.d2));
        }
    }
    for (const auto& line : slopes) out << line << '\n';
    return out.str();
}

std::string cmd_optimize(const Scenario& s)
{
    s.validate();
    if (s.sweep.variable != SweepVariable::rho_db) {
        throw ConfigError("the optimize command sweeps rho_db only");
    }
    std::ostringstream out;
    write_header(out, s, "optimize");
    write_row(out, {"alpha", "mu", "rho_db", "a2_opt", "rate_opt", "backend"});
    std::vector<std::string> warnings;
    for (const Family& f : s.effective_families()) {
        for (double v : s.sweep.values()) {
            const LinkTriple links = s.links_for(f, v);
            const OptimizeResult r = optimize_a2(s.rho_for(v), s.r2, links,
                                                 GridSpec{s.grid_m, s.r1}, optimizer_options(s));
            for (const auto& w : r.warnings) warnings.push_back(w);
            write_row(out, {format_number(links.sr.alpha), format_number(links.sr.mu),
                            format_number(v), format_number(r.a2_opt), format_number(r.rate_opt),
                            std::string(to_string(s.backend))});
        }
    }
    for (const auto& w : warnings) out << "# warning: " << w << '\n';
    return out.str();
}

}  // namespace crs::cli
