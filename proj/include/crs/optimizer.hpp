#pragma once

#include <string>
#include <vector>

#include "crs/analytic.hpp"
#include "crs/montecarlo.hpp"

namespace crs {

/// The M-point grid {eps, 2 eps, ..., M eps} with eps = 2^(-2 R1) / (M + 1).
struct GridSpec {
    int m = 24;
    double r1 = 1.0;

    double epsilon() const;
    std::vector<double> points() const;

    /// Throws ConfigError for m < 1, r1 <= 0, or r1 < 0.5 (the grid would
    /// then reach a2 >= 1/2 and break a1 > a2).
    void validate() const;
};

struct OptimizerOptions {
    Backend backend = Backend::quadrature;
    specfun::ContourPolicy policy{};
    MCSettings mc{};
    unsigned workers = 0;  // grid points evaluated concurrently; 0: hardware threads
};

struct SweepRow {
    double a2 = 0.0;
    double rate = 0.0;
    double error = 0.0;
    Backend backend = Backend::quadrature;  // backend that produced the row
};

struct OptimizeResult {
    double a2_opt = 0.0;
    double rate_opt = 0.0;
    std::vector<SweepRow> table;
    std::vector<std::string> warnings;
};

/// Exhaustive search of C_s1 + C_s2 over the grid. Ties go to the smaller a2.
/// A closed-form failure at a point is retried on quadrature (and recorded in
/// warnings); any other failure aborts the sweep.
OptimizeResult optimize_a2(double rho, double r2, const LinkTriple& links, const GridSpec& grid,
                           const OptimizerOptions& options = {});

}  // namespace crs
