#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hybridlattice/errors.hpp"

namespace hybridlattice::hilbert {

// Dense complex operator on a tensor-product space. dims lists the subsystem
// dimensions in tensor order; data is (prod dims) x (prod dims).
struct OperatorMatrix {
    std::vector<int> dims;
    Eigen::MatrixXcd data;

    int total_dim() const {
        int n = 1;
        for (int d : dims) n *= d;
        return n;
    }
};

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending, GHz
    double ground_energy = 0.0;
};

// Truncated boson annihilator: a[m, m+1] = sqrt(m+1) on a d-level ladder.
OperatorMatrix boson_annihilator(int cutoff);

// Kronecker product c = a (x) b with concatenated dims.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

// identity (x) ... (x) op (x) ... (x) identity with op in the given slot.
OperatorMatrix embed(const OperatorMatrix& op, int slot, const std::vector<int>& dims);

// Product of single-subsystem operators on distinct slots, assembled in one
// Kronecker pass (equals the matrix product of the individual embeds, built
// without any large multiplication).
OperatorMatrix embed_product(const std::vector<std::pair<int, Eigen::MatrixXcd>>& ops,
                             const std::vector<int>& dims);

// max|H - H^dag| / max|H| (0 for the zero matrix).
double hermiticity_deviation(const OperatorMatrix& op);

// Full spectrum of a Hermitian operator, ascending. Inputs failing the
// 1e-12 relative Hermiticity tolerance raise HermiticityError. Detects
// numerically real matrices and uses the real symmetric solver.
SpectrumResult eigensolve(const OperatorMatrix& op);

// Eigenvalues and eigenvectors (columns, matching the ascending eigenvalues).
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> eigensolve_vectors(const OperatorMatrix& op);

// Collective raising operator s^dag = (1/J) sum_m w_m tau_+^(m) on the exact
// 2^n spin space, J = sqrt(sum w_m^2). Basis index bit for spin m is 0 when
// excited and 1 in the ground state, matching the qubit convention.
OperatorMatrix collective_spin_operator(int n, const std::vector<double>& weights);

// Pauli matrices in the {|excited>, |ground>} basis used throughout:
// sigma_z = diag(1, -1), sigma_+ = |excited><ground|.
Eigen::MatrixXcd pauli_z();
Eigen::MatrixXcd pauli_x();
Eigen::MatrixXcd pauli_plus();
Eigen::MatrixXcd pauli_minus();

}  // namespace hybridlattice::hilbert
