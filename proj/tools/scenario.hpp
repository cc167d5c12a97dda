#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crs/analytic.hpp"
#include "crs/montecarlo.hpp"

namespace crs::cli {

enum class SweepVariable { rho_db, omega_sr_rd, a2 };

std::string_view to_string(SweepVariable v);

struct Sweep {
    SweepVariable variable = SweepVariable::rho_db;
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    /// Evenly spaced values; a single point requires start == stop.
    std::vector<double> values() const;
    void validate() const;
};

/// (alpha, mu) applied to all three links, one CSV block per family.
struct Family {
    double alpha = 2.0;
    double mu = 1.0;
};

struct Scenario {
    std::string name = "scenario";
    LinkTriple links{{2.0, 1.0, 10.0}, {2.0, 1.0, 1.0}, {2.0, 1.0, 10.0}};
    std::vector<Family> families;  // empty: links are used as given

    double rho_db = 20.0;  // used when rho is not the sweep variable
    double a2 = 0.1;
    double r1 = 1.0;
    double r2 = 1.0;

    Sweep sweep;
    MCSettings mc{1'000'000, 1, 0};
    Backend backend = Backend::quadrature;
    bool optimize_a2 = false;
    int grid_m = 24;
    double tolerance = 1e-8;  // contour agreement between refinement rounds

    std::string out;  // empty: stdout
    std::vector<std::string> notes;

    // validate command only: offset added to every alpha on the simulation side.
    double inject_alpha_perturbation = 0.0;

    /// Family list with the single configured link set as fallback.
    std::vector<Family> effective_families() const;

    /// Links of one family at one sweep value.
    LinkTriple links_for(const Family& f, double sweep_value) const;

    /// Linear transmit SNR at one sweep value.
    double rho_for(double sweep_value) const;

    double a2_for(double sweep_value) const;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;

    /// Fully resolved settings, one "section.key = value" line each.
    std::vector<std::string> provenance() const;
};

double db_to_linear(double db);

/// INI-style scenario; unknown sections or keys are rejected.
Scenario parse_scenario(std::istream& in, const std::string& name = "scenario");
Scenario load_scenario(const std::string& path);

}  // namespace crs::cli
