#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hybridlattice/chain_spec.hpp"
#include "hybridlattice/constants.hpp"

namespace hybridlattice::lattice {

// Uniform periodic array of coupled ensemble modes.
struct LatticeParams {
    double nu_s = 0.0;  // GHz
    double g = 0.0;     // GHz
    int n_sites = 64;   // used by the finite-chain and ground-energy grids
};

struct StabilityResult {
    bool stable = false;
    double margin = 0.0;  // nu_s - 8g, GHz
    bool gapless = false;  // margin == 0: stable boundary with a vanishing gap
};

struct BogoliubovCoeffs {
    double mu = 0.0;
    double nu = 0.0;
};

// Scan over the half Brillouin zone k in [0, pi); the (k, -k) pairing is
// handled internally and negative k mirrors E_k.
struct DispersionResult {
    std::vector<double> k_values;
    std::vector<double> e_full;  // GHz, only stable k when allow_unstable
    std::vector<double> e_tb;    // GHz
    std::vector<std::optional<double>> mu;  // empty at gapless points
    std::vector<std::optional<double>> nu;
    std::optional<double> gap;                    // GHz, min_k E_k (at k = 0)
    std::optional<double> ground_energy;          // GHz, over n_sites sites
    std::optional<double> ground_energy_density;  // GHz per site
    double margin = 0.0;                          // GHz
    bool stable = true;
    std::optional<std::pair<double, double>> unstable_k_range;
    std::vector<std::string> warnings;
};

struct ScanOptions {
    bool allow_unstable = false;
    bool tight_binding = true;
};

// Effective lattice coupling g = J^2 (1/(nu_q - nu_s) + 1/(nu_q + nu_s)).
double lattice_g(double j, double nu_q, double nu_s);

// Quasi-particle energy sqrt(nu_s^2 - 4 nu_s g (1 + cos k)). Throws
// UnstableMode carrying k when the radicand is negative.
double dispersion_full(const LatticeParams& p, double k);

// Tight-binding band nu_s - 2g(1 + cos k).
double dispersion_tb(const LatticeParams& p, double k);

// Ground-state energy of the n_sites chain: half the full-zone sum of
// E_k - [nu_s - 2g(1 + cos k)] over k = 2 pi m / N. The self-paired points
// k = 0 and k = pi are single squeezed modes contributing half a pair term
// each, which this weighting reproduces; it matches the real-space
// symplectic ground energy to machine precision.
double ground_state_energy(const LatticeParams& p);

// nu_s >= 8g, with the boundary counted stable but flagged gapless.
StabilityResult stability_check(const LatticeParams& p);

// Coefficients of the mode-pair rotation, real with sign(nu_k) = sign(B_k),
// B_k = -2g(1 + cos k). Throws DivergentCoefficients where E_k = 0.
BogoliubovCoeffs bogoliubov_coefficients(const LatticeParams& p, double k);

// Positive symplectic eigenvalues of the real-space quadratic form on
// n_sites sites with periodic boundary, sorted ascending. Independent of the
// closed-form dispersion; used as its oracle. n_sites in [2, 512].
std::vector<double> finite_chain_spectrum(const LatticeParams& p);

// Uniform scan of n_points values of k in [0, pi). Throws UnstableMode
// unless options.allow_unstable, in which case only stable k rows are
// emitted and the unstable interval is reported.
DispersionResult brillouin_scan(const LatticeParams& p, int n_points,
                                const ScanOptions& options = {});

// External field at which nu_s = D - g_e (mu_B/h) B drops to 8g; fields
// below keep the array stable. Throws NoStableField when 8g >= D.
double critical_field(const SpinEnsembleSpec& ensemble, double g,
                      const PhysicalConstants& constants);

}  // namespace hybridlattice::lattice
