#include "crs/system.hpp"

#include "crs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace crs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double threshold(double num, double den)
{
    return den > 0.0 ? num / den : kInf;
}

}  // namespace

SystemConfig SystemConfig::make(double rho, double a2, double r1, double r2)
{
    SystemConfig c{rho, 1.0 - a2, a2, r1, r2};
    c.validate();
    return c;
}

void SystemConfig::validate() const
{
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw ConfigError(fmt::format("rho must be finite and >= 0 (got {})", rho));
    }
    if (!(a2 > 0.0) || !(a1 > a2) || std::abs(a1 + a2 - 1.0) > 1e-12) {
        throw ConfigError(fmt::format("power split needs a1 + a2 = 1 and a1 > a2 > 0 "
                                      "(a1 = {}, a2 = {})", a1, a2));
    }
    if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2)) {
        throw ConfigError(fmt::format("target rates must be positive (R1 = {}, R2 = {})", r1, r2));
    }
}

double SystemConfig::eta1() const { return std::exp2(2.0 * r1) - 1.0; }
double SystemConfig::eta2() const { return std::exp2(2.0 * r2) - 1.0; }

bool SystemConfig::s1_feasible() const { return a1 > eta1() * a2; }

double SystemConfig::phi1() const
{
    if (!s1_feasible()) return kInf;
    return threshold(eta1(), rho * (a1 - eta1() * a2));
}

double SystemConfig::phi2() const { return threshold(eta2(), a2 * rho); }

double SystemConfig::phi_max() const { return std::max(phi1(), phi2()); }

double SystemConfig::phi_rd() const { return threshold(eta2(), rho); }

}  // namespace crs
