#include "hybridlattice/dispersive.hpp"

#include <algorithm>
#include <cmath>

#include "hybridlattice/hamiltonian.hpp"

namespace hybridlattice::dispersive {

using hilbert::OperatorMatrix;

// Coupled pairs (qubit, ensemble) in coefficient order.
static constexpr int kPairQubit[4] = {0, 0, 1, 1};
static constexpr int kPairEnsemble[4] = {0, 1, 1, 2};

UnitParams unit_from_chain(const ChainSpec& chain) {
    validate_chain(chain);
    if (chain.qubits.size() != 2 || chain.ensembles.size() != 3)
        throw DimensionError("the dispersive elimination is defined for the 2-qubit / "
                             "3-ensemble unit; got " +
                             std::to_string(chain.qubits.size()) + " qubits / " +
                             std::to_string(chain.ensembles.size()) + " ensembles");
    if (chain.couplings_from_geometry || chain.couplings.empty())
        throw ConfigError("couplings are not resolved; call magnetics::resolve_couplings first");
    UnitParams p;
    for (int i = 0; i < 2; ++i) p.nu_q[i] = chain.qubits[i].nu_q();
    for (int j = 0; j < 3; ++j)
        p.nu_s[j] = nu_s_from_field(chain.ensembles[j], chain.constants);
    for (int c = 0; c < 4; ++c) p.j[c] = chain.couplings[kPairQubit[c]][kPairEnsemble[c]];
    p.m12 = chain.mutual_inductance_coupling;
    return p;
}

DispersiveCoeffs dispersive_coefficients(const UnitParams& p, double warn_factor) {
    DispersiveCoeffs c;
    for (int k = 0; k < 4; ++k) {
        const int i = kPairQubit[k];
        const int j = kPairEnsemble[k];
        c.delta[k] = p.nu_q[i] - p.nu_s[j];
        c.lambda[k] = p.nu_q[i] + p.nu_s[j];
        if (p.j[k] != 0.0 && c.delta[k] <= 0.0) throw ResonanceError(i, j, c.delta[k]);
        if (p.j[k] != 0.0 && c.delta[k] < warn_factor * p.j[k])
            c.warnings.push_back("detuning qubit " + std::to_string(i + 1) + " / ensemble " +
                                 std::to_string(j + 1) + " is only " +
                                 std::to_string(c.delta[k] / p.j[k]) +
                                 " couplings wide; the elimination degrades below " +
                                 std::to_string(warn_factor));
        c.a[k] = (p.j[k] == 0.0) ? 0.0 : p.j[k] / c.delta[k];
        c.a[4 + k] = (p.j[k] == 0.0) ? 0.0 : p.j[k] / c.lambda[k];
    }
    return c;
}

OperatorMatrix build_generator(const DispersiveCoeffs& coeffs, int cutoff) {
    const std::vector<int> dims = {2, 2, cutoff, cutoff, cutoff};
    const OperatorMatrix a = hilbert::boson_annihilator(cutoff);
    const Eigen::MatrixXcd lower = a.data;
    const Eigen::MatrixXcd raise = a.data.adjoint();
    const int dim = 4 * cutoff * cutoff * cutoff;
    OperatorMatrix v{dims, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int k = 0; k < 4; ++k) {
        const int qs = kPairQubit[k];
        const int ms = 2 + kPairEnsemble[k];
        // Rotating part: A (sigma_- s^dag - sigma_+ s); counter-rotating
        // part: A' (sigma_- s - sigma_+ s^dag). Both are anti-Hermitian.
        if (coeffs.a[k] != 0.0) {
            v.data += coeffs.a[k] *
                      (hilbert::embed_product({{qs, hilbert::pauli_minus()}, {ms, raise}}, dims)
                           .data -
                       hilbert::embed_product({{qs, hilbert::pauli_plus()}, {ms, lower}}, dims)
                           .data);
        }
        if (coeffs.a[4 + k] != 0.0) {
            v.data += coeffs.a[4 + k] *
                      (hilbert::embed_product({{qs, hilbert::pauli_minus()}, {ms, lower}}, dims)
                           .data -
                       hilbert::embed_product({{qs, hilbert::pauli_plus()}, {ms, raise}}, dims)
                           .data);
        }
    }
    return v;
}

namespace {

// Diagonal 0/1 mask over the product space selecting the basis states whose
// every mode occupation stays below cutoff - 1.
Eigen::VectorXd truncation_safe_mask(int cutoff) {
    const int d3 = cutoff * cutoff * cutoff;
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(4 * d3);
    for (int q = 0; q < 4; ++q)
        for (int n1 = 0; n1 < cutoff; ++n1)
            for (int n2 = 0; n2 < cutoff; ++n2)
                for (int n3 = 0; n3 < cutoff; ++n3) {
                    if (n1 >= cutoff - 1 || n2 >= cutoff - 1 || n3 >= cutoff - 1) continue;
                    mask[((q * cutoff + n1) * cutoff + n2) * cutoff + n3] = 1.0;
                }
    return mask;
}

}  // namespace

double generator_residual(const UnitParams& p, int cutoff) {
    const DispersiveCoeffs coeffs = dispersive_coefficients(p);
    const CouplingMatrix j = {{p.j[0], p.j[1], 0.0}, {0.0, p.j[2], p.j[3]}};
    // The elimination is derived with the inductive qubit-qubit term dropped.
    const auto parts = hilbert::build_hamiltonian_parts(
        {p.nu_q[0], p.nu_q[1]}, {p.nu_s[0], p.nu_s[1], p.nu_s[2]}, j, 0.0, cutoff);
    const OperatorMatrix v = build_generator(coeffs, cutoff);
    Eigen::MatrixXcd residual = parts.interaction.data;
    residual.noalias() += parts.free.data * v.data;
    residual.noalias() -= v.data * parts.free.data;
    const Eigen::VectorXd mask = truncation_safe_mask(cutoff);
    const Eigen::MatrixXcd num = mask.asDiagonal() * residual * mask.asDiagonal();
    const Eigen::MatrixXcd den = mask.asDiagonal() * parts.interaction.data * mask.asDiagonal();
    const double den_norm = den.norm();
    if (den_norm == 0.0) return num.norm();
    return num.norm() / den_norm;
}

EffectiveParams effective_params(const UnitParams& p) {
    const DispersiveCoeffs c = dispersive_coefficients(p);
    const auto inv = [&](int k) { return 1.0 / c.delta[k] + 1.0 / c.lambda[k]; };
    EffectiveParams e;
    // Pair order {11, 12, 22, 23}; inverse-detuning sums per pair.
    e.g_self[0] = 0.5 * p.j[0] * p.j[0] * inv(0);
    e.g_self[2] = 0.5 * p.j[3] * p.j[3] * inv(3);
    e.g_self[1] = 0.5 * p.j[1] * p.j[1] * (inv(1) + inv(2));
    e.g_hop[0] = 0.5 * p.j[0] * p.j[1] * (inv(1) + inv(0));
    e.g_hop[1] = 0.5 * p.j[2] * p.j[3] * (inv(3) + inv(2));
    e.nu_prime[0] = p.nu_s[0] - 2.0 * e.g_self[0];
    e.nu_prime[2] = p.nu_s[2] - 2.0 * e.g_self[2];
    e.nu_prime[1] = p.nu_s[1] - p.j[1] * p.j[1] * inv(1) - p.j[2] * p.j[2] * inv(2);
    return e;
}

OperatorMatrix build_effective_hamiltonian(const EffectiveParams& params, int cutoff) {
    const std::vector<int> dims = {cutoff, cutoff, cutoff};
    const OperatorMatrix a = hilbert::boson_annihilator(cutoff);
    const Eigen::MatrixXcd lower = a.data;
    const Eigen::MatrixXcd raise = a.data.adjoint();
    const Eigen::MatrixXcd number = raise * lower;
    const Eigen::MatrixXcd squeeze = raise * raise + lower * lower;
    const int dim = cutoff * cutoff * cutoff;
    OperatorMatrix h{dims, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int j = 0; j < 3; ++j) {
        h.data += params.nu_prime[j] * hilbert::embed_product({{j, number}}, dims).data;
        h.data -= params.g_self[j] * hilbert::embed_product({{j, squeeze}}, dims).data;
    }
    for (int b = 0; b < 2; ++b) {
        const int j = b, k = b + 1;
        h.data -= params.g_hop[b] *
                  (hilbert::embed_product({{j, lower}, {k, raise}}, dims).data +
                   hilbert::embed_product({{j, raise}, {k, lower}}, dims).data +
                   hilbert::embed_product({{j, raise}, {k, raise}}, dims).data +
                   hilbert::embed_product({{j, lower}, {k, lower}}, dims).data);
    }
    return h;
}

OperatorMatrix build_rwa_hamiltonian(const EffectiveParams& params, int cutoff) {
    const std::vector<int> dims = {cutoff, cutoff, cutoff};
    const OperatorMatrix a = hilbert::boson_annihilator(cutoff);
    const Eigen::MatrixXcd lower = a.data;
    const Eigen::MatrixXcd raise = a.data.adjoint();
    const Eigen::MatrixXcd number = raise * lower;
    const int dim = cutoff * cutoff * cutoff;
    OperatorMatrix h{dims, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int j = 0; j < 3; ++j)
        h.data += params.nu_prime[j] * hilbert::embed_product({{j, number}}, dims).data;
    for (int b = 0; b < 2; ++b) {
        const int j = b, k = b + 1;
        h.data -= params.g_hop[b] *
                  (hilbert::embed_product({{j, lower}, {k, raise}}, dims).data +
                   hilbert::embed_product({{j, raise}, {k, lower}}, dims).data);
    }
    return h;
}

std::vector<double> qubit_ground_sector_excitations(const OperatorMatrix& full_h, int cutoff,
                                                    int k_levels) {
    const auto [evals, evecs] = hilbert::eigensolve_vectors(full_h);
    const int d3 = cutoff * cutoff * cutoff;
    // Both qubits in the ground state: block offset 3 * d^3 in the
    // (qubit_1, qubit_2, modes) ordering with |ground> the second level.
    const int offset = 3 * d3;
    std::vector<double> sector;
    for (Eigen::Index idx = 0; idx < evals.size(); ++idx) {
        const double weight = evecs.col(idx).segment(offset, d3).squaredNorm();
        if (weight > 0.5) sector.push_back(evals[idx]);
    }
    std::sort(sector.begin(), sector.end());
    if (static_cast<int>(sector.size()) < k_levels)
        throw DimensionError("qubit-ground sector holds fewer than the requested " +
                             std::to_string(k_levels) + " levels");
    std::vector<double> excitations(k_levels - 1);
    for (int i = 1; i < k_levels; ++i) excitations[i - 1] = sector[i] - sector[0];
    return excitations;
}

namespace {

double sector_deviation(const UnitParams& p, int cutoff, int k_levels) {
    const CouplingMatrix j = {{p.j[0], p.j[1], 0.0}, {0.0, p.j[2], p.j[3]}};
    const OperatorMatrix full = hilbert::build_full_hamiltonian(
        {p.nu_q[0], p.nu_q[1]}, {p.nu_s[0], p.nu_s[1], p.nu_s[2]}, j, 0.0, cutoff);
    const std::vector<double> exact = qubit_ground_sector_excitations(full, cutoff, k_levels);
    const OperatorMatrix eff = build_effective_hamiltonian(effective_params(p), cutoff);
    const auto spectrum = hilbert::eigensolve(eff);
    double dev = 0.0;
    for (int i = 1; i < k_levels; ++i) {
        const double eff_exc = spectrum.eigenvalues[i] - spectrum.eigenvalues[0];
        dev = std::max(dev, std::abs(exact[i - 1] - eff_exc));
    }
    return dev;
}

}  // namespace

DispersiveReport validate_dispersive(const UnitParams& p, int cutoff, int k_levels) {
    DispersiveReport report;
    report.warnings = dispersive_coefficients(p).warnings;
    report.residual = generator_residual(p, cutoff);
    report.deviation = sector_deviation(p, cutoff, k_levels);
    UnitParams half = p;
    for (double& jj : half.j) jj *= 0.5;
    report.deviation_half_j = sector_deviation(half, cutoff, k_levels);
    report.scaling_ratio =
        (report.deviation_half_j == 0.0) ? 0.0 : report.deviation / report.deviation_half_j;
    return report;
}

}  // namespace hybridlattice::dispersive
