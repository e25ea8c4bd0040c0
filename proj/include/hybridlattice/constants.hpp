#pragma once

#include <numbers>

#include "hybridlattice/errors.hpp"

namespace hybridlattice {

// Unit conventions used throughout: frequencies in GHz (h = 1), magnetic
// fields in T, lengths in um, currents in uA.
struct PhysicalConstants {
    double mu0 = 4.0e-7 * std::numbers::pi;  // T m / A, exact
    double muB_over_h = 13.996;              // GHz / T
    double g_e = 2.0028;                     // electron g-factor
    double D_default = 2.87;                 // NV zero-field splitting, GHz

    // Zeeman slope g_e mu_B / h in GHz per Tesla.
    double zeeman_slope() const { return g_e * muB_over_h; }

    bool operator==(const PhysicalConstants&) const = default;
};

inline void validate(const PhysicalConstants& c) {
    const double mu0_exact = 4.0e-7 * std::numbers::pi;
    if (c.mu0 != mu0_exact)
        throw ConfigError("constants.mu0 must be 4*pi*1e-7 T m/A exactly");
    if (!(c.muB_over_h >= 13.9 && c.muB_over_h <= 14.1))
        throw ConfigError("constants.muB_over_h_GHz_per_T outside [13.9, 14.1]");
    if (!(c.g_e >= 2.0 && c.g_e <= 2.01))
        throw ConfigError("constants.g_e outside [2.0, 2.01]");
    if (!(c.D_default > 0.0))
        throw ConfigError("constants.D_GHz must be positive");
}

}  // namespace hybridlattice
