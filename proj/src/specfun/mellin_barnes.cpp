#include "crs/errors.hpp"
#include "crs/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <fmt/format.h>

namespace crs::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Grid points more than e^-46 (~1e-20) below the peak magnitude are skipped.
constexpr double kPruneLog = 46.0;
// Distance kept between a one-sided contour and its nearest pole.
constexpr double kPoleClearance = 0.5;

bool near_integer(double x)
{
    return std::abs(x - std::round(x)) < 1e-12;
}

bool at_pole(complex z)
{
    if (std::abs(z.imag()) >= 1e-12) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) < 1e-12;
}

// log Gamma(z) in a denominator: returns -inf at a pole, i.e. a zero of 1/Gamma.
complex log_gamma_or_neg_inf(complex z)
{
    if (at_pole(z)) return {kNegInf, 0.0};
    return log_gamma(z);
}

// Running trapezoidal state shared by both evaluators. Sums hold
// sum_i w_i Re f_i and sum_i w_i |f_i| (|L_i| + 8) without the step factor.
struct Accumulator {
    double sum = 0.0;
    double noise = 0.0;
    std::size_t points = 0;

    void add(complex log_f, double weight)
    {
        if (!std::isfinite(log_f.real())) {
            ++points;
            return;
        }
        const complex f = std::exp(log_f);
        sum += weight * f.real();
        noise += weight * std::abs(f) * (std::abs(log_f) + 8.0);
        ++points;
    }
};

// Drives the refinement loop: round r uses h / 2^r and T * 2^r, and the
// evaluator callback adds only the points that round r introduces.
// `dims` is the number of contour integrals, so the step enters as h^dims.
template <typename AddRound>
ContourResult refine(const ContourPolicy& policy, int dims, AddRound&& add_round,
                     const char* who)
{
    Accumulator acc;
    double previous = 0.0;
    for (int r = 0; r < policy.max_rounds; ++r) {
        const double h = policy.step / std::ldexp(1.0, r);
        add_round(r, acc);
        const double weight = std::pow(h / kTwoPi, dims);
        const double value = weight * acc.sum;
        const double floor = weight * acc.noise * kEps;
        if (r > 0) {
            const double diff = std::abs(value - previous);
            if (diff <= policy.tolerance * std::abs(value) || diff <= 2.0 * floor) {
                return {value, std::max(diff, floor), r + 1, acc.points};
            }
            if (r + 1 == policy.max_rounds) {
                throw ConvergenceError(fmt::format(
                    "{}: rounds {} and {} disagree ({} vs {}, tolerance {})", who, r, r + 1,
                    previous, value, policy.tolerance));
            }
        }
        previous = value;
    }
    throw ConvergenceError(fmt::format("{}: no refinement rounds", who));
}

std::size_t grid_half_count(const ContourPolicy& policy, int round)
{
    const double ratio = policy.half_height / policy.step;
    return static_cast<std::size_t>(std::llround(ratio)) << (2 * round);
}

// ----------------------------------------------------------------- Meijer G

struct MeijerIntegrand {
    std::vector<double> b_num;   // Gamma(b_j - s), j < m
    std::vector<double> a_num;   // 1 - a_k for Gamma(1 - a_k + s), k < n
    std::vector<double> b_den;   // Gamma(1 - b_j + s), j >= m
    std::vector<double> a_den;   // Gamma(a_k - s), k >= n
    double log_z = 0.0;

    complex log_value(complex s) const
    {
        complex acc = s * log_z;
        for (double b : b_num) acc += log_gamma(b - s);
        for (double a1 : a_num) acc += log_gamma(a1 + s);
        for (double b : b_den) acc -= log_gamma_or_neg_inf(1.0 - b + s);
        for (double a : a_den) acc -= log_gamma_or_neg_inf(a - s);
        return acc;
    }

    // Real-axis log magnitude; +inf where a denominator vanishes so that the
    // saddle search steps over integrand zeros.
    double log_abs_real(double c) const
    {
        try {
            double acc = c * log_z;
            for (double b : b_num) acc += log_gamma_abs(b - c);
            for (double a1 : a_num) acc += log_gamma_abs(a1 + c);
            for (double b : b_den) acc -= log_gamma_abs(1.0 - b + c);
            for (double a : a_den) acc -= log_gamma_abs(a - c);
            return acc;
        } catch (const PoleError&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

double saddle(const MeijerIntegrand& f, double lo, double hi)
{
    constexpr double coarse = 0.25;
    double best_c = hi;
    double best_v = f.log_abs_real(hi);
    const int steps = static_cast<int>((hi - lo) / coarse);
    for (int i = 1; i <= steps; ++i) {
        const double c = hi - i * coarse;
        const double v = f.log_abs_real(c);
        if (v < best_v) {
            best_v = v;
            best_c = c;
        }
    }
    // Golden-section polish inside the bracketing coarse cell.
    double a = std::max(lo, best_c - coarse);
    double b = std::min(hi, best_c + coarse);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f.log_abs_real(x1);
    double f2 = f.log_abs_real(x2);
    for (int it = 0; it < 60 && b - a > 1e-6; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f.log_abs_real(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f.log_abs_real(x2);
        }
    }
    const double polished = 0.5 * (a + b);
    return f.log_abs_real(polished) <= best_v ? polished : best_c;
}

double choose_contour(const MeijerIntegrand& f)
{
    std::optional<double> lo;
    std::optional<double> hi;
    for (double a1 : f.a_num) {  // a_num holds 1 - a_k; left poles at a_k - 1 - l
        const double pole = -a1;
        lo = lo ? std::max(*lo, pole) : pole;
    }
    for (double b : f.b_num) {
        hi = hi ? std::min(*hi, b) : b;
    }
    if (lo && hi) {
        if (!(*lo < *hi)) {
            throw SeparationError(fmt::format(
                "meijer_g: empty contour strip ({}, {}); left and right poles interlock",
                *lo, *hi));
        }
        return 0.5 * (*lo + *hi);
    }
    constexpr double reach = 200.0;
    if (hi) {
        const double top = *hi - kPoleClearance;
        return saddle(f, top - reach, top);
    }
    // Only left poles: mirror the search to the right.
    const double bottom = *lo + kPoleClearance;
    MeijerIntegrand mirrored = f;
    mirrored.log_z = -f.log_z;
    // Under s -> -s the numerator families trade places unchanged, while
    // Gamma(1 - b + s) becomes Gamma(a' - s) with a' = 1 - b and vice versa.
    std::swap(mirrored.b_num, mirrored.a_num);
    mirrored.a_den.clear();
    mirrored.b_den.clear();
    for (double b : f.b_den) mirrored.a_den.push_back(1.0 - b);
    for (double a : f.a_den) mirrored.b_den.push_back(1.0 - a);
    return -saddle(mirrored, -bottom - reach, -bottom);
}

ContourResult meijer_contour(const MeijerIntegrand& f, const ContourPolicy& policy)
{
    const double c = choose_contour(f);
    const auto add_round = [&](int r, Accumulator& acc) {
        const std::size_t n_r = grid_half_count(policy, r);
        const std::size_t half = n_r / 2;
        const double h = policy.step / std::ldexp(1.0, r);
        if (acc.points + n_r > policy.point_budget) {
            throw BudgetError("meijer_g: contour grid exceeds the point budget");
        }
        for (std::size_t i = 0; i <= n_r; ++i) {
            if (r > 0 && i % 2 == 0 && i <= half) continue;
            const double tau = static_cast<double>(i) * h;
            acc.add(f.log_value({c, tau}), i == 0 ? 1.0 : 2.0);
        }
    };
    return refine(policy, 1, add_round, "meijer_g");
}

MeijerIntegrand make_integrand(const MeijerGSpec& spec, const std::vector<double>& a, double z)
{
    MeijerIntegrand f;
    f.log_z = std::log(z);
    for (int j = 0; j < spec.q(); ++j) {
        (j < spec.m ? f.b_num : f.b_den).push_back(spec.b[j]);
    }
    for (int k = 0; k < spec.p(); ++k) {
        (k < spec.n ? f.a_num : f.a_den).push_back(k < spec.n ? 1.0 - a[k] : a[k]);
    }
    return f;
}

}  // namespace

void ContourPolicy::validate() const
{
    if (!(half_height > 0.0) || !(step > 0.0)) {
        throw DomainError("ContourPolicy: T and h must be positive");
    }
    const double ratio = half_height / step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 100.0) {
        throw DomainError(fmt::format("ContourPolicy: T/h = {} must be an integer >= 100", ratio));
    }
    if (!(perturbation > 0.0) || !(perturbation < 1e-4)) {
        throw DomainError("ContourPolicy: perturbation must lie in (0, 1e-4)");
    }
    if (max_rounds < 2) {
        throw DomainError("ContourPolicy: at least two refinement rounds are required");
    }
    if (!(tolerance > 0.0)) {
        throw DomainError("ContourPolicy: tolerance must be positive");
    }
}

void MeijerGSpec::validate() const
{
    if (m < 0 || n < 0 || n > p() || m > q()) {
        throw DomainError(fmt::format("MeijerGSpec: invalid orders m={} n={} p={} q={}",
                                      m, n, p(), q()));
    }
    if (m + n == 0) {
        throw DomainError("MeijerGSpec: m + n must be positive");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(a.begin(), a.end(), finite) || !std::all_of(b.begin(), b.end(), finite)) {
        throw DomainError("MeijerGSpec: parameters must be finite");
    }
    if (2 * (m + n) <= p() + q()) {
        throw DomainError("MeijerGSpec: Mellin-Barnes integral diverges (m + n <= (p + q)/2)");
    }
}

ContourResult meijer_g(const MeijerGSpec& spec, double z, const ContourPolicy& policy)
{
    spec.validate();
    policy.validate();
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw DomainError(fmt::format("meijer_g: argument must be positive and finite (z = {})", z));
    }

    std::vector<int> coincident;
    for (int k = 0; k < spec.n; ++k) {
        for (int j = 0; j < spec.m; ++j) {
            if (near_integer(spec.a[k] - spec.b[j])) {
                coincident.push_back(k);
                break;
            }
        }
    }
    if (coincident.empty()) {
        return meijer_contour(make_integrand(spec, spec.a, z), policy);
    }

    const auto shifted = [&](double eps) {
        std::vector<double> a = spec.a;
        for (int k : coincident) a[k] += eps;
        return meijer_contour(make_integrand(spec, a, z), policy);
    };
    const ContourResult up = shifted(policy.perturbation);
    const ContourResult down = shifted(-policy.perturbation);
    ContourResult out;
    out.value = 0.5 * (up.value + down.value);
    out.error = std::max(up.error, down.error) +
                policy.perturbation * std::abs(up.value - down.value);
    out.rounds = std::max(up.rounds, down.rounds);
    out.points = up.points + down.points;
    return out;
}

// ------------------------------------------------------------------- EGBFHF

namespace {

struct InnerKernel {
    std::vector<HParam> d_num;  // Gamma(d - D s), j < m
    std::vector<HParam> c_num;  // Gamma(1 - c + C s), j < n
    std::vector<HParam> d_den;  // Gamma(1 - d + D s), j >= m
    std::vector<HParam> c_den;  // Gamma(c - C s), j >= n
    double log_arg = 0.0;

    InnerKernel(const std::vector<HParam>& upper, const std::vector<HParam>& lower, int m,
                int n, double arg)
        : log_arg(std::log(arg))
    {
        for (int j = 0; j < static_cast<int>(lower.size()); ++j) {
            (j < m ? d_num : d_den).push_back(lower[j]);
        }
        for (int j = 0; j < static_cast<int>(upper.size()); ++j) {
            (j < n ? c_num : c_den).push_back(upper[j]);
        }
    }

    complex log_value(complex s) const
    {
        complex acc = s * log_arg;
        for (const auto& p : d_num) acc += log_gamma(p.value - p.weight * s);
        for (const auto& p : c_num) acc += log_gamma(1.0 - p.value + p.weight * s);
        for (const auto& p : d_den) acc -= log_gamma_or_neg_inf(1.0 - p.value + p.weight * s);
        for (const auto& p : c_den) acc -= log_gamma_or_neg_inf(p.value - p.weight * s);
        return acc;
    }

    double contour(const char* axis) const
    {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& p : c_num) lo = std::max(lo, (p.value - 1.0) / p.weight);
        for (const auto& p : d_num) hi = std::min(hi, p.value / p.weight);
        if (!(lo < hi)) {
            throw SeparationError(fmt::format("egbfhf: empty {}-contour strip ({}, {})",
                                              axis, lo, hi));
        }
        return 0.5 * (lo + hi);
    }
};

}  // namespace

std::array<BlockOrder, 3> EGBFHFSpec::orders() const
{
    return {BlockOrder{1, 0, 1, 0},
            BlockOrder{x_m, x_n, static_cast<int>(x_upper.size()),
                       static_cast<int>(x_lower.size())},
            BlockOrder{y_m, y_n, static_cast<int>(y_upper.size()),
                       static_cast<int>(y_lower.size())}};
}

void EGBFHFSpec::validate() const
{
    constexpr std::array<BlockOrder, 3> supported = {
        BlockOrder{1, 0, 1, 0}, BlockOrder{1, 2, 2, 2}, BlockOrder{1, 1, 1, 2}};
    if (orders() != supported) {
        throw DomainError("EGBFHFSpec: only H^{1,0:1,2:1,1}_{1,0:2,2:1,2} is supported");
    }
    const auto ok = [](const HParam& p) {
        return std::isfinite(p.value) && p.weight > 0.0 && std::isfinite(p.weight);
    };
    for (const auto* block : {&x_upper, &x_lower, &y_upper, &y_lower}) {
        if (!std::all_of(block->begin(), block->end(), ok)) {
            throw DomainError("EGBFHFSpec: values must be finite and weights positive");
        }
    }
    if (!std::isfinite(outer.value) || !(outer.weight_x > 0.0) || !(outer.weight_y > 0.0)) {
        throw DomainError("EGBFHFSpec: outer weights must be positive");
    }
}

ContourResult egbfhf(const EGBFHFSpec& spec, double x, double y, const ContourPolicy& policy)
{
    spec.validate();
    policy.validate();
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError(fmt::format("egbfhf: arguments must be positive (x = {}, y = {})", x, y));
    }

    const InnerKernel kx(spec.x_upper, spec.x_lower, spec.x_m, spec.x_n, x);
    const InnerKernel ky(spec.y_upper, spec.y_lower, spec.y_m, spec.y_n, y);
    const double cs = kx.contour("x");
    const double ct = ky.contour("y");
    const double wx = spec.outer.weight_x;
    const double wy = spec.outer.weight_y;
    const double sigma = 1.0 - spec.outer.value + wx * cs + wy * ct;
    if (!(sigma > 0.0)) {
        throw SeparationError(fmt::format(
            "egbfhf: outer Gamma argument has Re = {} on the chosen contours", sigma));
    }
    std::vector<complex> lx;
    std::vector<complex> ly;
    const auto add_round = [&](int r, Accumulator& acc) {
        const std::size_t n_r = grid_half_count(policy, r);
        const std::size_t half = n_r / 2;
        const double h = policy.step / std::ldexp(1.0, r);
        const auto nn = static_cast<std::ptrdiff_t>(n_r);

        lx.resize(n_r + 1);
        ly.resize(2 * n_r + 1);
        double max_x = kNegInf;
        double max_y = kNegInf;
        for (std::size_t i = 0; i <= n_r; ++i) {
            lx[i] = kx.log_value({cs, static_cast<double>(i) * h});
            max_x = std::max(max_x, lx[i].real());
        }
        for (std::ptrdiff_t j = -nn; j <= nn; ++j) {
            auto& v = ly[static_cast<std::size_t>(j + nn)];
            v = ky.log_value({ct, static_cast<double>(j) * h});
            max_y = std::max(max_y, v.real());
        }
        // |Gamma(sigma + i v)| <= Gamma(sigma) for sigma > 0, so the outer
        // factor only lowers the separable bound.
        const double threshold = max_x + max_y - kPruneLog;

        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i <= n_r; ++i) {
            if (lx[i].real() + max_y >= threshold) rows.push_back(i);
        }
        std::vector<std::ptrdiff_t> cols;
        for (std::ptrdiff_t j = -nn; j <= nn; ++j) {
            if (ly[static_cast<std::size_t>(j + nn)].real() + max_x >= threshold) cols.push_back(j);
        }
        if (acc.points + rows.size() * cols.size() > policy.point_budget) {
            throw BudgetError(fmt::format("egbfhf: {} x {} grid exceeds the point budget of {}",
                                          rows.size(), cols.size(), policy.point_budget));
        }

        for (std::size_t i : rows) {
            const double tau = static_cast<double>(i) * h;
            const double weight = i == 0 ? 1.0 : 2.0;
            const bool row_seen = r > 0 && i % 2 == 0 && i <= half;
            for (std::ptrdiff_t j : cols) {
                if (row_seen && j % 2 == 0 && static_cast<std::size_t>(std::abs(j)) <= half) {
                    continue;
                }
                const complex& vy = ly[static_cast<std::size_t>(j + nn)];
                if (lx[i].real() + vy.real() < threshold) continue;
                const double v = static_cast<double>(j) * h;
                const complex outer = log_gamma({sigma, wx * tau + wy * v});
                acc.add(lx[i] + vy + outer, weight);
            }
        }
    };
    return refine(policy, 2, add_round, "egbfhf");
}

}  // namespace crs::specfun
