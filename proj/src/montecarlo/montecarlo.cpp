#include "crs/montecarlo.hpp"

#include "crs/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include <numbers>

#include <fmt/format.h>

namespace crs {

namespace {

// Welford accumulator with Chan's pairwise merge.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }

    MCEstimate estimate() const
    {
        if (n < 2) return {mean, 0.0, n};
        const double var = m2 / static_cast<double>(n - 1);
        return {mean, std::sqrt(var / static_cast<double>(n)), n};
    }
};

std::uint64_t samples_in_stream(std::uint64_t n, std::uint64_t stream)
{
    return n / kStreams + (stream < n % kStreams ? 1 : 0);
}

unsigned worker_count(unsigned requested)
{
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(stream_index) for every stream; streams are claimed dynamically
// but each writes only its own slot, so results do not depend on scheduling.
template <typename Body>
void for_each_stream(unsigned workers, Body&& body)
{
    workers = std::min<unsigned>(workers, kStreams);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const auto run = [&] {
        for (;;) {
            const std::uint64_t k = next.fetch_add(1);
            if (k >= kStreams || failed.load()) return;
            try {
                body(k);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct Draw {
    double sr, sd, rd;
};

Draw draw(const LinkTriple& links, RandomStream& rng)
{
    const double sr = sample_gain(links.sr, rng);
    const double sd = sample_gain(links.sd, rng);
    const double rd = sample_gain(links.rd, rng);
    return {sr, sd, rd};
}

double half_log2_1p(double v)
{
    return 0.5 * std::log1p(v) / std::numbers::ln2;
}

void prepare(const SystemConfig& cfg, const LinkTriple& links, const MCSettings& s)
{
    cfg.validate();
    links.validate();
    s.validate();
}

}  // namespace

void MCSettings::validate() const
{
    if (n < 10'000) {
        throw ConfigError(fmt::format("Monte-Carlo runs need at least 10^4 samples (got {})", n));
    }
}

SimulatedRates simulate_rates(const SystemConfig& cfg, const LinkTriple& links,
                              const MCSettings& s)
{
    prepare(cfg, links, s);
    const double rho = cfg.rho;
    const double rho2 = cfg.a2 * cfg.rho;
    std::vector<std::array<Moments, 3>> parts(kStreams);
    for_each_stream(worker_count(s.workers), [&](std::uint64_t k) {
        RandomStream rng(s.seed, k);
        auto& acc = parts[k];
        const std::uint64_t count = samples_in_stream(s.n, k);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Draw g = draw(links, rng);
            const double x = std::min(g.sr, g.sd);
            const double y = std::min(cfg.a2 * g.sr, g.rd);
            const double z = std::min(g.sr, g.sd + g.rd);
            acc[0].add(half_log2_1p(rho * x) - half_log2_1p(rho2 * x));
            acc[1].add(half_log2_1p(rho * y));
            acc[2].add(half_log2_1p(rho * z));
        }
    });
    std::array<Moments, 3> total;
    for (const auto& p : parts) {
        for (int j = 0; j < 3; ++j) total[j].merge(p[j]);
    }
    return {total[0].estimate(), total[1].estimate(), total[2].estimate()};
}

SimulatedOutage simulate_outage(const SystemConfig& cfg, const LinkTriple& links,
                                const MCSettings& s)
{
    prepare(cfg, links, s);
    const double phi1 = cfg.phi1();
    const double phi2 = cfg.phi2();
    const double phi_max = cfg.phi_max();
    const double phi_rd = cfg.phi_rd();

    struct Counts {
        std::uint64_t o1 = 0, e1 = 0, e2 = 0, e3 = 0, o2 = 0;
    };
    std::vector<Counts> parts(kStreams);
    for_each_stream(worker_count(s.workers), [&](std::uint64_t k) {
        RandomStream rng(s.seed, k);
        Counts c;
        const std::uint64_t count = samples_in_stream(s.n, k);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Draw g = draw(links, rng);
            c.o1 += (g.sr < phi1 || g.sd < phi1) ? 1 : 0;
            // Relay fails s1 / decodes s1 but fails s2 / both decoded, destination fails s2.
            const bool e1 = g.sr < phi1;
            const bool e2 = !e1 && g.sr < phi2;
            const bool e3 = !e1 && !e2 && g.rd < phi_rd;
            const bool threshold_form = g.sr < phi_max || g.rd < phi_rd;
            if ((e1 || e2 || e3) != threshold_form) {
                throw std::logic_error("simulate_outage: event and threshold forms of O2 differ");
            }
            c.e1 += e1;
            c.e2 += e2;
            c.e3 += e3;
            c.o2 += threshold_form;
        }
        parts[k] = c;
    });
    Counts t;
    for (const auto& c : parts) {
        t.o1 += c.o1;
        t.e1 += c.e1;
        t.e2 += c.e2;
        t.e3 += c.e3;
        t.o2 += c.o2;
    }
    if (t.e1 + t.e2 + t.e3 != t.o2) {
        throw std::logic_error("simulate_outage: E1, E2, E3 do not partition O2");
    }
    const auto binomial = [n = s.n](std::uint64_t hits) {
        const double p = static_cast<double>(hits) / static_cast<double>(n);
        // Sample std of 0/1 indicators with the n - 1 denominator.
        const double var = p * (1.0 - p) * static_cast<double>(n) / static_cast<double>(n - 1);
        return MCEstimate{p, std::sqrt(var / static_cast<double>(n)), n};
    };
    SimulatedOutage out;
    out.p1 = binomial(t.o1);
    out.p2 = binomial(t.o2);
    out.e1 = t.e1;
    out.e2 = t.e2;
    out.e3 = t.e3;
    return out;
}

OutageAudit audit_outage_forms(const SystemConfig& cfg, const LinkTriple& links,
                               std::uint64_t n, std::uint64_t seed)
{
    cfg.validate();
    links.validate();
    const double phi1 = cfg.phi1();
    const double phi_max = cfg.phi_max();
    const double phi_rd = cfg.phi_rd();
    const double rho = cfg.rho;

    OutageAudit a;
    a.n = n;
    RandomStream rng(seed, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        const Draw g = draw(links, rng);
        const auto s1_rate = [&](double lambda) {
            return half_log2_1p(cfg.a1 * rho * lambda / (cfg.a2 * rho * lambda + 1.0));
        };
        const bool relay_fails_s1 = s1_rate(g.sr) < cfg.r1;
        const bool dest_fails_s1 = s1_rate(g.sd) < cfg.r1;
        const bool relay_fails_s2 = half_log2_1p(cfg.a2 * rho * g.sr) < cfg.r2;
        const bool dest_fails_s2 = half_log2_1p(rho * g.rd) < cfg.r2;

        a.o1_threshold += (g.sr < phi1 || g.sd < phi1);
        a.o1_rate += (relay_fails_s1 || dest_fails_s1);
        a.o2_threshold += (g.sr < phi_max || g.rd < phi_rd);
        a.o2_rate += (relay_fails_s1 || relay_fails_s2 || dest_fails_s2);
    }
    return a;
}

MCEstimate avg_rate_oma(const SystemConfig& cfg, const LinkTriple& links, std::uint64_t n,
                        std::uint64_t seed)
{
    return simulate_rates(cfg, links, MCSettings{n, seed, 0}).c_oma;
}

}  // namespace crs
