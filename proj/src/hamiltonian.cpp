#include "hybridlattice/hamiltonian.hpp"

#include <string>

namespace hybridlattice::hilbert {

namespace {

std::vector<int> space_dims(std::size_t n_qubits, std::size_t n_ensembles, int cutoff) {
    std::vector<int> dims(n_qubits, 2);
    dims.insert(dims.end(), n_ensembles, cutoff);
    return dims;
}

}  // namespace

HamiltonianParts build_hamiltonian_parts(const std::vector<double>& nu_q,
                                         const std::vector<double>& nu_s,
                                         const CouplingMatrix& couplings, double m12,
                                         int cutoff) {
    const std::size_t nq = nu_q.size();
    const std::size_t ne = nu_s.size();
    if (ne != nq + 1)
        throw DimensionError("expected one more ensemble than qubits, got " +
                             std::to_string(nq) + " qubits / " + std::to_string(ne) +
                             " ensembles");
    for (double nu : nu_s)
        if (!(nu > 0.0)) throw NonPositiveSplitting(nu);
    if (couplings.size() != nq)
        throw DimensionError("coupling matrix has " + std::to_string(couplings.size()) +
                             " rows for " + std::to_string(nq) + " qubits");

    const std::vector<int> dims = space_dims(nq, ne, cutoff);
    const OperatorMatrix a = boson_annihilator(cutoff);  // checks cutoff >= 2
    const Eigen::MatrixXcd number = a.data.adjoint() * a.data;
    const Eigen::MatrixXcd position = a.data + a.data.adjoint();

    const int dim = [&] {
        int n = 1;
        for (int d : dims) n *= d;
        return n;
    }();
    OperatorMatrix h0{dims, Eigen::MatrixXcd::Zero(dim, dim)};
    OperatorMatrix hi{dims, Eigen::MatrixXcd::Zero(dim, dim)};

    for (std::size_t i = 0; i < nq; ++i)
        h0.data += 0.5 * nu_q[i] * embed_product({{int(i), pauli_z()}}, dims).data;
    for (std::size_t j = 0; j < ne; ++j)
        h0.data += nu_s[j] * embed_product({{int(nq + j), number}}, dims).data;

    for (std::size_t i = 0; i < nq; ++i) {
        if (couplings[i].size() != ne)
            throw DimensionError("coupling matrix row " + std::to_string(i) + " has " +
                                 std::to_string(couplings[i].size()) + " columns for " +
                                 std::to_string(ne) + " ensembles");
        for (std::size_t j = 0; j < ne; ++j) {
            const double jij = couplings[i][j];
            if (jij == 0.0) continue;
            hi.data += jij *
                       embed_product({{int(i), pauli_x()}, {int(nq + j), position}}, dims).data;
        }
    }
    // Mutual inductance acts between adjacent qubit loops.
    if (m12 != 0.0)
        for (std::size_t i = 0; i + 1 < nq; ++i)
            hi.data +=
                m12 * embed_product({{int(i), pauli_x()}, {int(i + 1), pauli_x()}}, dims).data;

    return {std::move(h0), std::move(hi)};
}

OperatorMatrix build_full_hamiltonian(const std::vector<double>& nu_q,
                                      const std::vector<double>& nu_s,
                                      const CouplingMatrix& couplings, double m12,
                                      int cutoff) {
    HamiltonianParts parts = build_hamiltonian_parts(nu_q, nu_s, couplings, m12, cutoff);
    OperatorMatrix h = std::move(parts.free);
    h.data += parts.interaction.data;
    return h;
}

OperatorMatrix build_full_hamiltonian(const ChainSpec& chain, int cutoff) {
    validate_chain(chain);
    if (chain.couplings_from_geometry || chain.couplings.empty())
        throw ConfigError("couplings are not resolved; call magnetics::resolve_couplings first");
    std::vector<double> nu_q, nu_s;
    for (const auto& q : chain.qubits) nu_q.push_back(q.nu_q());
    for (const auto& e : chain.ensembles) nu_s.push_back(nu_s_from_field(e, chain.constants));
    return build_full_hamiltonian(nu_q, nu_s, chain.couplings, chain.mutual_inductance_coupling,
                                  cutoff);
}

}  // namespace hybridlattice::hilbert
