#pragma once

#include <array>
#include <string>
#include <vector>

#include "hybridlattice/chain_spec.hpp"
#include "hybridlattice/operator_matrix.hpp"

namespace hybridlattice::dispersive {

// The two-qubit / three-ensemble unit the perturbative elimination is
// written for: couplings J = {J11, J12, J22, J23} with qubit 1 between
// ensembles 1 and 2, qubit 2 between ensembles 2 and 3.
struct UnitParams {
    std::array<double, 2> nu_q{};  // GHz
    std::array<double, 3> nu_s{};  // GHz
    std::array<double, 4> j{};     // GHz, {J11, J12, J22, J23}
    double m12 = 0.0;              // GHz; ignored by the elimination itself
};

// Extract the unit from a resolved chain. Throws DimensionError unless the
// chain has exactly 2 qubits and 3 ensembles.
UnitParams unit_from_chain(const ChainSpec& chain);

// Generator coefficients: one rotating (J/Delta) and one counter-rotating
// (J/Lambda) coefficient per coupled pair, with Delta = nu_q - nu_s and
// Lambda = nu_q + nu_s of that pair.
struct DispersiveCoeffs {
    std::array<double, 8> a{};       // {A1..A4 rotating, A5..A8 counter-rotating}
    std::array<double, 4> delta{};   // GHz, per pair {11, 12, 22, 23}
    std::array<double, 4> lambda{};  // GHz, per pair
    std::vector<std::string> warnings;  // detuning warnings, non-fatal
};

// Dressed mode frequencies and bilinear couplings of the eliminated model.
struct EffectiveParams {
    std::array<double, 3> nu_prime{};  // GHz
    std::array<double, 3> g_self{};    // GHz, one-mode squeezing strengths
    std::array<double, 2> g_hop{};     // GHz, {g12, g23}
};

// Validation summary: generator residual plus the spectral deviation between
// the effective model and the exact qubit-ground-sector spectrum, at J and
// at J/2, with their ratio.
struct DispersiveReport {
    double residual = 0.0;
    double deviation = 0.0;         // GHz
    double deviation_half_j = 0.0;  // GHz
    double scaling_ratio = 0.0;
    std::vector<std::string> warnings;
};

// Throws ResonanceError when any coupled pair has Delta <= 0; records a
// warning when Delta < warn_factor * J for a coupled pair.
DispersiveCoeffs dispersive_coefficients(const UnitParams& p, double warn_factor = 3.0);

// Anti-Hermitian generator on the full (2,2,d,d,d) space.
hilbert::OperatorMatrix build_generator(const DispersiveCoeffs& coeffs, int cutoff);

// Residual of the first-order cancellation H_I + [H0, V], measured in
// Frobenius norm relative to H_I after projecting out basis states with any
// mode at occupation >= cutoff - 1 (top-rung truncation artifacts).
double generator_residual(const UnitParams& p, int cutoff);

EffectiveParams effective_params(const UnitParams& p);

// Three-mode bilinear Hamiltonian on the (d,d,d) space, with one-mode
// squeezing and two-mode hopping plus pairing terms.
hilbert::OperatorMatrix build_effective_hamiltonian(const EffectiveParams& params, int cutoff);

// Excitation-conserving reduction: hopping terms only.
hilbert::OperatorMatrix build_rwa_hamiltonian(const EffectiveParams& params, int cutoff);

// Excitation energies E_i - E_0 (i = 1.. k_levels - 1) of the eigenstates
// whose squared overlap with the both-qubits-ground block exceeds 1/2.
std::vector<double> qubit_ground_sector_excitations(const hilbert::OperatorMatrix& full_h, int cutoff,
                                                    int k_levels);

// Deviation metric over the lowest k_levels eigenvalues of each spectrum,
// compared after aligning the ground energies.
DispersiveReport validate_dispersive(const UnitParams& p, int cutoff, int k_levels = 4);

}  // namespace hybridlattice::dispersive
