#pragma once

#include <string>
#include <vector>

#include "crs/random.hpp"

namespace crs {

/// One alpha-mu fading link. `omega` is the alpha-root-mean envelope value.
struct LinkParams {
    double alpha = 2.0;
    double mu = 1.0;
    double omega = 1.0;

    /// Throws ConfigError unless all three are positive and finite.
    void validate() const;

    /// alpha * mu / 2, the exponent that governs the gain law near zero.
    double half_order() const { return 0.5 * alpha * mu; }
};

/// Source-relay, source-destination and relay-destination links.
struct LinkTriple {
    LinkParams sr;
    LinkParams sd;
    LinkParams rd;

    /// Validates each link. The direct link being weaker on average than
    /// the S-R link is a modelling assumption only, so a violation is
    /// reported through warnings() instead of an exception.
    void validate() const;

    std::vector<std::string> warnings() const;
};

/// Envelope density of |h|.
double envelope_pdf(const LinkParams& p, double x);

/// Gain CDF: P(mu, mu x^(alpha/2) / Omega^alpha).
double gain_cdf(const LinkParams& p, double x);

/// Gain density. At x = 0 returns the one-sided limit when it is finite;
/// throws DomainError where the density has a pole.
double gain_pdf(const LinkParams& p, double x);

/// CDF and density of a2 * lambda for 0 < a2 < 1.
double scaled_gain_cdf(const LinkParams& p, double a2, double y);
double scaled_gain_pdf(const LinkParams& p, double a2, double y);

/// Link whose gain law is that of a2 * lambda (alpha-mu with
/// Omega' = sqrt(a2) Omega).
LinkParams scaled_link(const LinkParams& p, double a2);

/// One gain draw: Omega^2 (G / mu)^(2 / alpha) with G ~ Gamma(mu, 1).
double sample_gain(const LinkParams& p, RandomStream& stream);

}  // namespace crs
