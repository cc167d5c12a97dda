#pragma once

namespace crs {

/// Transmit SNR, power split and target rates of the two-symbol system.
/// All SNR values are linear; dB conversion belongs to the front end.
struct SystemConfig {
    double rho = 1.0;
    double a1 = 0.9;
    double a2 = 0.1;
    double r1 = 1.0;
    double r2 = 1.0;

    /// Builds a config with a1 = 1 - a2 and validates it.
    static SystemConfig make(double rho, double a2, double r1, double r2);

    /// Throws ConfigError unless rho >= 0, a1 + a2 = 1, a1 > a2 > 0 and
    /// both target rates are positive.
    void validate() const;

    double eta1() const;
    double eta2() const;

    /// a1 > eta1 a2: the relay can decode s1 at all.
    bool s1_feasible() const;

    /// eta1 / (rho (a1 - eta1 a2)); +inf when infeasible or rho = 0.
    double phi1() const;
    /// eta2 / (a2 rho).
    double phi2() const;
    double phi_max() const;
    /// eta2 / rho, the relay-destination threshold.
    double phi_rd() const;
};

}  // namespace crs
