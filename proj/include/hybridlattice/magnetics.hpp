#pragma once

#include <vector>

#include "hybridlattice/chain_spec.hpp"
#include "hybridlattice/constants.hpp"

namespace hybridlattice::magnetics {

// Geometry-derived coupling summary for one qubit/ensemble pair.
struct CouplingEstimate {
    double field_at_midpoint = 0.0;     // |B| at z = L/2, T
    double single_spin_coupling = 0.0;  // J^(m), GHz
    double spin_count = 0.0;            // n
    double collective_coupling = 0.0;   // J = sqrt(n) J^(m), GHz
};

struct ProfilePoint {
    double z_over_L;
    double j_m;  // GHz
};

// Signed magnetic field (T) of the rectangular loop at in-plane distance z
// (um) from the near edge, on the symmetry line. Closed form with a 1/z pole
// at the edge; callers take the magnitude.
double loop_field(const FluxQubitSpec& qubit, double z_nv, const PhysicalConstants& constants);

// Single-spin coupling J^(m) = g_e (mu_B/h) |B| / sqrt(2) in GHz.
double single_spin_coupling(double field, const PhysicalConstants& constants);

// Number of NV centers in the crystal volume: density * height * L * length,
// with length defaulting to the qubit's long side.
double spin_count(const FluxQubitSpec& qubit, const SpinEnsembleSpec& ensemble);

// Collective coupling estimate with the field evaluated at the crystal
// midpoint z = L/2.
CouplingEstimate collective_coupling(const FluxQubitSpec& qubit,
                                     const SpinEnsembleSpec& ensemble,
                                     const PhysicalConstants& constants);

// J^(m) at each grid point z/L in (0, 1). Throws RangeError on points at or
// past the endpoints (the z = 0 end is singular).
std::vector<ProfilePoint> coupling_profile(const FluxQubitSpec& qubit, double L,
                                           const std::vector<double>& grid,
                                           const PhysicalConstants& constants);

// Fill chain.couplings from geometry when the config asked for it: qubit i
// gets its collective coupling to ensembles i and i+1. No-op when the matrix
// was given explicitly. Validates the resulting chain.
void resolve_couplings(ChainSpec& chain);

}  // namespace hybridlattice::magnetics
