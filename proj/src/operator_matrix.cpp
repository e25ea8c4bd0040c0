#include "hybridlattice/operator_matrix.hpp"

#include <cmath>
#include <string>

namespace hybridlattice::hilbert {

OperatorMatrix boson_annihilator(int cutoff) {
    if (cutoff < 2)
        throw DimensionError("boson cutoff must be >= 2, got " + std::to_string(cutoff));
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int m = 0; m + 1 < cutoff; ++m) a(m, m + 1) = std::sqrt(double(m + 1));
    return {{cutoff}, std::move(a)};
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix out;
    out.dims = a.dims;
    out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
    const Eigen::Index ra = a.data.rows(), rb = b.data.rows();
    out.data.resize(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ra; ++j)
            out.data.block(i * rb, j * rb, rb, rb) = a.data(i, j) * b.data;
    return out;
}

OperatorMatrix embed(const OperatorMatrix& op, int slot, const std::vector<int>& dims) {
    if (slot < 0 || slot >= static_cast<int>(dims.size()))
        throw DimensionError("embed slot " + std::to_string(slot) + " out of range for " +
                             std::to_string(dims.size()) + " subsystems");
    if (op.data.rows() != dims[slot])
        throw DimensionError("embed: operator dimension " + std::to_string(op.data.rows()) +
                             " does not match subsystem dimension " +
                             std::to_string(dims[slot]));
    return embed_product({{slot, op.data}}, dims);
}

OperatorMatrix embed_product(const std::vector<std::pair<int, Eigen::MatrixXcd>>& ops,
                             const std::vector<int>& dims) {
    for (const auto& [s, m] : ops)
        if (s < 0 || s >= static_cast<int>(dims.size()))
            throw DimensionError("embed_product: slot " + std::to_string(s) + " out of range");
    OperatorMatrix out{{}, Eigen::MatrixXcd::Ones(1, 1)};
    for (int slot = 0; slot < static_cast<int>(dims.size()); ++slot) {
        const Eigen::MatrixXcd* factor = nullptr;
        for (const auto& [s, m] : ops) {
            if (s != slot) continue;
            if (factor != nullptr)
                throw DimensionError("embed_product: duplicate slot " + std::to_string(slot));
            if (m.rows() != dims[slot] || m.cols() != dims[slot])
                throw DimensionError("embed_product: operator in slot " + std::to_string(slot) +
                                     " has wrong dimension");
            factor = &m;
        }
        OperatorMatrix piece;
        if (factor)
            piece = {{dims[slot]}, *factor};
        else
            piece = {{dims[slot]}, Eigen::MatrixXcd::Identity(dims[slot], dims[slot])};
        out = kron(out, piece);
    }
    return out;
}

double hermiticity_deviation(const OperatorMatrix& op) {
    const double scale = op.data.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (op.data - op.data.adjoint()).cwiseAbs().maxCoeff() / scale;
}

namespace {

constexpr double kHermTol = 1e-12;

void require_hermitian(const OperatorMatrix& op) {
    const double dev = hermiticity_deviation(op);
    if (dev >= kHermTol) throw HermiticityError(dev);
}

bool numerically_real(const Eigen::MatrixXcd& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return m.imag().cwiseAbs().maxCoeff() < 1e-14 * scale;
}

}  // namespace

SpectrumResult eigensolve(const OperatorMatrix& op) {
    require_hermitian(op);
    Eigen::VectorXd evals;
    if (numerically_real(op.data)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.data.real(),
                                                              Eigen::EigenvaluesOnly);
        evals = solver.eigenvalues();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.data, Eigen::EigenvaluesOnly);
        evals = solver.eigenvalues();
    }
    SpectrumResult result;
    result.eigenvalues.assign(evals.data(), evals.data() + evals.size());
    result.ground_energy = result.eigenvalues.empty() ? 0.0 : result.eigenvalues.front();
    return result;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXcd> eigensolve_vectors(const OperatorMatrix& op) {
    require_hermitian(op);
    if (numerically_real(op.data)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.data.real());
        return {solver.eigenvalues(), solver.eigenvectors().cast<std::complex<double>>()};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.data);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

OperatorMatrix collective_spin_operator(int n, const std::vector<double>& weights) {
    if (n < 1 || n > 12)
        throw DimensionError("collective spin operator supports 1 <= n <= 12 spins, got " +
                             std::to_string(n));
    if (static_cast<int>(weights.size()) != n)
        throw DimensionError("expected " + std::to_string(n) + " weights, got " +
                             std::to_string(weights.size()));
    double norm2 = 0.0;
    for (double w : weights) norm2 += w * w;
    if (norm2 == 0.0) throw RangeError("collective spin weights are all zero");
    const double j_total = std::sqrt(norm2);

    const std::vector<int> dims(n, 2);
    const int dim = 1 << n;
    OperatorMatrix s_dag{dims, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int m = 0; m < n; ++m)
        s_dag.data += (weights[m] / j_total) * embed_product({{m, pauli_plus()}}, dims).data;
    return s_dag;
}

Eigen::MatrixXcd pauli_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Eigen::MatrixXcd pauli_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Eigen::MatrixXcd pauli_plus() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

Eigen::MatrixXcd pauli_minus() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

}  // namespace hybridlattice::hilbert
