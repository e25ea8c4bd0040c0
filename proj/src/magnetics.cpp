#include "hybridlattice/magnetics.hpp"

#include <cmath>
#include <numbers>

#include "hybridlattice/errors.hpp"
#include "hybridlattice/parallel.hpp"

namespace hybridlattice::magnetics {

double loop_field(const FluxQubitSpec& qubit, double z_nv, const PhysicalConstants& constants) {
    if (!(z_nv > 0.0)) throw SingularPosition(z_nv);
    // SI units inside the formula: uA -> A, um -> m.
    const double ip = qubit.persistent_current * 1e-6;
    const double a = qubit.loop_a * 1e-6;
    const double b = qubit.loop_b * 1e-6;
    const double z = z_nv * 1e-6;
    const double t1 = ((z + a) / b + b / (4.0 * (z + a))) / std::hypot(b / 2.0, a + z);
    const double t2 = (b / (4.0 * z) + z / b) / std::hypot(b / 2.0, z);
    return constants.mu0 * ip / std::numbers::pi * (t1 - t2);
}

double single_spin_coupling(double field, const PhysicalConstants& constants) {
    return constants.zeeman_slope() * std::abs(field) / std::numbers::sqrt2;
}

double spin_count(const FluxQubitSpec& qubit, const SpinEnsembleSpec& ensemble) {
    const double length = ensemble.crystal_length.value_or(qubit.loop_b);
    return ensemble.density * ensemble.crystal_height * ensemble.crystal_width_L * length;
}

CouplingEstimate collective_coupling(const FluxQubitSpec& qubit,
                                     const SpinEnsembleSpec& ensemble,
                                     const PhysicalConstants& constants) {
    const double n = spin_count(qubit, ensemble);
    if (!(n >= 1.0))
        throw ConfigError("spin count n = " + std::to_string(n) +
                          " < 1; check density_per_um3 and the crystal volume");
    CouplingEstimate est;
    est.spin_count = n;
    est.field_at_midpoint = std::abs(loop_field(qubit, ensemble.crystal_width_L / 2.0, constants));
    est.single_spin_coupling = single_spin_coupling(est.field_at_midpoint, constants);
    est.collective_coupling = std::sqrt(n) * est.single_spin_coupling;
    return est;
}

std::vector<ProfilePoint> coupling_profile(const FluxQubitSpec& qubit, double L,
                                           const std::vector<double>& grid,
                                           const PhysicalConstants& constants) {
    if (!(L > 0.0)) throw SingularPosition(L);
    for (double x : grid)
        if (!(x > 0.0 && x < 1.0))
            throw RangeError("profile grid point z/L = " + std::to_string(x) +
                             " outside the open interval (0, 1)");
    std::vector<ProfilePoint> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double b = loop_field(qubit, grid[i] * L, constants);
        out[i] = {grid[i], single_spin_coupling(b, constants)};
    });
    return out;
}

void resolve_couplings(ChainSpec& chain) {
    if (!chain.couplings_from_geometry || !chain.couplings.empty()) return;
    validate_chain(chain);  // counts only at this point; the matrix is empty
    const std::size_t nq = chain.qubits.size();
    const std::size_t ne = chain.ensembles.size();
    chain.couplings.assign(nq, std::vector<double>(ne, 0.0));
    for (std::size_t i = 0; i < nq; ++i) {
        chain.couplings[i][i] =
            collective_coupling(chain.qubits[i], chain.ensembles[i], chain.constants)
                .collective_coupling;
        chain.couplings[i][i + 1] =
            collective_coupling(chain.qubits[i], chain.ensembles[i + 1], chain.constants)
                .collective_coupling;
    }
    chain.couplings_from_geometry = false;
    validate_chain(chain);
}

}  // namespace hybridlattice::magnetics
