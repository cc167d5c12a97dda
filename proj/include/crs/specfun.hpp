#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace crs::specfun {

using complex = std::complex<double>;

/// Principal branch of log Gamma(z).
///
/// The branch cut runs along the non-positive real axis; elsewhere the
/// result is analytic, so its imaginary part is continuous along any path
/// that does not cross that half-line. This matches the `loggamma`
/// convention of SciPy and mpmath (it is *not* log(Gamma(z)) reduced to
/// (-pi, pi]). On the cut itself the sign of Im z selects the side.
///
/// Throws PoleError for z within 1e-12 of 0, -1, -2, ...
complex log_gamma(complex z);

/// log|Gamma(x)| for real x; throws PoleError at non-positive integers.
double log_gamma_abs(double x);

/// Lower incomplete gamma gamma(s, x), unregularized.
/// Throws DomainError for s <= 0 or x < 0.
double lower_incomplete_gamma(double s, double x);

/// P(s, x) = gamma(s, x) / Gamma(s); finite for every s > 0.
double regularized_lower_gamma(double s, double x);

/// Q(s, x) = 1 - P(s, x), computed without cancellation where it is small.
double regularized_upper_gamma(double s, double x);

/// Pochhammer symbol (x)_y = Gamma(x + y) / Gamma(x), evaluated in log space.
double pochhammer(double x, double y);

/// Delta(k, y) = { y/k, (y+1)/k, ..., (y+k-1)/k }.
std::vector<double> build_delta(int k, double y);

/// Truncation and refinement controls for Mellin-Barnes quadrature.
struct ContourPolicy {
    double half_height = 60.0;   // T: contour truncated to |Im s| <= T
    double step = 0.05;          // h: trapezoidal step along Im s
    double perturbation = 1e-6;  // epsilon for coincident parameter pairs
    int max_rounds = 4;          // refinement rounds (T *= 2, h /= 2 each)
    double tolerance = 1e-8;     // relative agreement between two rounds
    std::size_t point_budget = 200'000'000;  // max integrand evaluations

    /// Throws DomainError unless T/h is an integer >= 100, 0 < eps < 1e-4,
    /// rounds >= 2 and tolerance > 0.
    void validate() const;
};

/// Converged contour integral with its a-posteriori error estimate.
struct ContourResult {
    double value = 0.0;
    double error = 0.0;   // max(|last two rounds differ|, rounding floor)
    int rounds = 0;
    std::size_t points = 0;
};

/// Parameters of G^{m,n}_{p,q}(z | a; b).
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;  // p upper parameters
    std::vector<double> b;  // q lower parameters

    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }

    /// Throws DomainError on n > p, m > q, m + n == 0, non-finite
    /// entries, or a divergent integral (m + n <= (p + q) / 2).
    void validate() const;
};

/// Meijer G-function for real z > 0, by trapezoidal quadrature of
///
///   (1/2 pi i) Int prod_{j<m} Gamma(b_j - s) prod_{k<n} Gamma(1 - a_k + s)
///              / prod_{j>=m} Gamma(1 - b_j + s) prod_{k>=n} Gamma(a_k - s) z^s ds
///
/// along the vertical line Re s = c. With both pole families present c is
/// the midpoint of (max_{k<n} a_k - 1, min_{j<m} b_j); when only one family
/// exists c is the real-axis saddle of |integrand|, kept at least 1/2 away
/// from the nearest pole. Pairs with a_k - b_j integral are evaluated at
/// a_k +/- epsilon and averaged.
///
/// Throws SeparationError if the strip is empty, ConvergenceError if the
/// round limit is hit before two rounds agree.
ContourResult meijer_g(const MeijerGSpec& spec, double z,
                       const ContourPolicy& policy = {});

/// One (value; weight) entry of an inner H-function block.
struct HParam {
    double value;
    double weight;
};

/// One (value; weight_x, weight_y) entry of the bivariate outer block.
struct HOuterParam {
    double value;
    double weight_x;
    double weight_y;
};

/// Ordering indices of one H block.
struct BlockOrder {
    int m, n, p, q;
    friend bool operator==(const BlockOrder&, const BlockOrder&) = default;
};

/// Extended generalized bivariate Fox H-function
///
///   H^{1,0:m2,n2:m3,n3}_{1,0:p2,q2:p3,q3}[ (a: A1, A2) | -- | x-block | y-block | x, y ]
///     = (1/2 pi i)^2 Int Int Gamma(1 - a + A1 s + A2 t) theta_x(s) theta_y(t)
///                            x^s y^t ds dt
///
/// where each theta is the single-variable H kernel
///   prod_{j<m} Gamma(d_j - D_j s) prod_{j<n} Gamma(1 - c_j + C_j s)
///   / prod_{j>=m} Gamma(1 - d_j + D_j s) prod_{j>=n} Gamma(c_j - C_j s).
///
/// Only the signature H^{1,0:1,2:1,1}_{1,0:2,2:1,2} is accepted, which is the
/// one every cross term of the rate expressions uses.
struct EGBFHFSpec {
    HOuterParam outer{};
    std::vector<HParam> x_upper, x_lower;
    int x_m = 1, x_n = 2;
    std::vector<HParam> y_upper, y_lower;
    int y_m = 1, y_n = 1;

    /// Orders of the (outer, inner-x, inner-y) blocks.
    std::array<BlockOrder, 3> orders() const;

    /// Throws DomainError unless the orders match the supported signature,
    /// every weight is > 0 and every value is finite.
    void validate() const;
};

/// Double Mellin-Barnes integral by nested trapezoidal quadrature, same
/// refinement and error contract as meijer_g. Throws BudgetError when a
/// round would exceed policy.point_budget integrand evaluations.
ContourResult egbfhf(const EGBFHFSpec& spec, double x, double y,
                     const ContourPolicy& policy = {});

}  // namespace crs::specfun
