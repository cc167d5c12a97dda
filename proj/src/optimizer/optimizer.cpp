#include "crs/optimizer.hpp"

#include "crs/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <fmt/format.h>

namespace crs {

double GridSpec::epsilon() const
{
    return std::exp2(-2.0 * r1) / (m + 1);
}

std::vector<double> GridSpec::points() const
{
    validate();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m));
    const double eps = epsilon();
    for (int k = 1; k <= m; ++k) out.push_back(k * eps);
    return out;
}

void GridSpec::validate() const
{
    if (m < 1) throw ConfigError(fmt::format("grid size M must be >= 1 (got {})", m));
    if (!(r1 > 0.0) || !std::isfinite(r1)) {
        throw ConfigError(fmt::format("R1 must be positive (got {})", r1));
    }
    if (r1 < 0.5) {
        throw ConfigError(fmt::format(
            "R1 = {} < 0.5 puts grid points at a2 >= 1/2, violating a1 > a2", r1));
    }
}

namespace {

SweepRow evaluate_point(double a2, double rho, double r1, double r2, const LinkTriple& links,
                        const OptimizerOptions& o, std::vector<std::string>& warnings,
                        std::mutex& warnings_mutex)
{
    const SystemConfig cfg = SystemConfig::make(rho, a2, r1, r2);
    if (o.backend == Backend::monte_carlo) {
        // Same seed at every point: common random numbers across the grid.
        const SimulatedRates r = simulate_rates(cfg, links, o.mc);
        return {a2, r.c_s1.mean + r.c_s2.mean, r.c_s1.std_error + r.c_s2.std_error,
                Backend::monte_carlo};
    }
    try {
        const RateReport r = average_rates(cfg, links, o.backend, o.policy);
        return {a2, r.c_total, r.err_total, o.backend};
    } catch (const ConvergenceError& e) {
        if (o.backend != Backend::closed_form) throw;
        {
            const std::lock_guard lock(warnings_mutex);
            warnings.push_back(
                fmt::format("a2 = {}: closed form failed ({}); retried on quadrature", a2, e.what()));
        }
        const RateReport r = average_rates(cfg, links, Backend::quadrature);
        return {a2, r.c_total, r.err_total, Backend::quadrature};
    }
}

}  // namespace

OptimizeResult optimize_a2(double rho, double r2, const LinkTriple& links, const GridSpec& grid,
                           const OptimizerOptions& options)
{
    const std::vector<double> a2s = grid.points();
    links.validate();

    OptimizeResult result;
    result.table.resize(a2s.size());
    std::mutex warnings_mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= a2s.size() || failed.load()) return;
            try {
                result.table[i] = evaluate_point(a2s[i], rho, grid.r1, r2, links, options,
                                                 result.warnings, warnings_mutex);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    // Monte-Carlo points already parallelize internally.
    unsigned workers = options.workers > 0 ? options.workers
                                           : std::max(1u, std::thread::hardware_concurrency());
    if (options.backend == Backend::monte_carlo) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(a2s.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // Ascending a2 with strict comparison keeps the smaller a2 on ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.table.size(); ++i) {
        if (result.table[i].rate > result.table[best].rate) best = i;
    }
    result.a2_opt = result.table[best].a2;
    result.rate_opt = result.table[best].rate;
    std::sort(result.warnings.begin(), result.warnings.end());
    return result;
}

}  // namespace crs
