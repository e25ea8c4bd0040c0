#pragma once

#include <vector>

#include "hybridlattice/chain_spec.hpp"
#include "hybridlattice/operator_matrix.hpp"

namespace hybridlattice::hilbert {

// Free part (qubit splittings and boson ladders) and interaction part
// (qubit-mode couplings and the mutual-inductance term) of the chain
// Hamiltonian, on the space (qubit_1 ... qubit_N, ensemble_1 ... ensemble_N+1)
// with each ensemble a truncated boson mode.
struct HamiltonianParts {
    OperatorMatrix free;
    OperatorMatrix interaction;
};

// Raw-parameter form used by tests and validators: nu_q per qubit, nu_s per
// ensemble, couplings[i][j] in GHz with the adjacency pattern of ChainSpec.
HamiltonianParts build_hamiltonian_parts(const std::vector<double>& nu_q,
                                         const std::vector<double>& nu_s,
                                         const CouplingMatrix& couplings, double m12,
                                         int cutoff);

OperatorMatrix build_full_hamiltonian(const std::vector<double>& nu_q,
                                      const std::vector<double>& nu_s,
                                      const CouplingMatrix& couplings, double m12,
                                      int cutoff);

// ChainSpec form: derives nu_q from each qubit spec and nu_s from each
// ensemble via the external field. Requires resolved couplings.
OperatorMatrix build_full_hamiltonian(const ChainSpec& chain, int cutoff);

}  // namespace hybridlattice::hilbert
