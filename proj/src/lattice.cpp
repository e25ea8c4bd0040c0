#include "hybridlattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "hybridlattice/errors.hpp"
#include "hybridlattice/parallel.hpp"

namespace hybridlattice::lattice {

namespace {

void require_params(const LatticeParams& p) {
    if (!(p.nu_s > 0.0)) throw NonPositiveSplitting(p.nu_s);
    if (p.g < 0.0) throw RangeError("lattice coupling g must be >= 0, got " + std::to_string(p.g));
}

// E_k^2 = nu_s^2 - 4 nu_s g (1 + cos k), factored so the k = 0 value
// vanishes exactly at the stability boundary nu_s = 8g.
double radicand(const LatticeParams& p, double k) {
    return p.nu_s * (p.nu_s - 4.0 * p.g * (1.0 + std::cos(k)));
}

// Upper edge of the unstable k-interval [0, k*): cos k* = nu_s / (4g) - 1.
double unstable_k_edge(const LatticeParams& p) {
    const double c = p.nu_s / (4.0 * p.g) - 1.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

double lattice_g(double j, double nu_q, double nu_s) {
    if (!(nu_s > 0.0)) throw NonPositiveSplitting(nu_s);
    if (nu_q <= nu_s) throw ResonanceError(0, 0, nu_q - nu_s);
    return j * j * (1.0 / (nu_q - nu_s) + 1.0 / (nu_q + nu_s));
}

double dispersion_full(const LatticeParams& p, double k) {
    require_params(p);
    const double r = radicand(p, k);
    if (r < 0.0) throw UnstableMode(k);
    return std::sqrt(r);
}

double dispersion_tb(const LatticeParams& p, double k) {
    require_params(p);
    return p.nu_s - 2.0 * p.g * (1.0 + std::cos(k));
}

double ground_state_energy(const LatticeParams& p) {
    require_params(p);
    if (p.n_sites < 2)
        throw RangeError("ground-state energy needs at least 2 sites, got " +
                         std::to_string(p.n_sites));
    const StabilityResult s = stability_check(p);
    if (!s.stable) throw UnstableMode(0.0, unstable_k_edge(p));
    double sum = 0.0;
    for (int m = 0; m < p.n_sites; ++m) {
        const double k = 2.0 * std::numbers::pi * m / p.n_sites;
        const double r = std::max(radicand(p, k), 0.0);  // boundary rounding
        sum += std::sqrt(r) - dispersion_tb(p, k);
    }
    return 0.5 * sum;
}

StabilityResult stability_check(const LatticeParams& p) {
    require_params(p);
    StabilityResult r;
    r.margin = p.nu_s - 8.0 * p.g;
    r.stable = r.margin >= 0.0;
    r.gapless = r.margin == 0.0;
    return r;
}

BogoliubovCoeffs bogoliubov_coefficients(const LatticeParams& p, double k) {
    const double e = dispersion_full(p, k);
    if (e == 0.0) throw DivergentCoefficients(k);
    const double a = p.nu_s - 2.0 * p.g * (1.0 + std::cos(k));
    const double b = -2.0 * p.g * (1.0 + std::cos(k));
    BogoliubovCoeffs c;
    c.mu = std::sqrt((a / e + 1.0) / 2.0);
    const double sign = (b > 0.0) - (b < 0.0);
    c.nu = sign * std::sqrt(std::max(a / e - 1.0, 0.0) / 2.0);
    return c;
}

std::vector<double> finite_chain_spectrum(const LatticeParams& p) {
    require_params(p);
    const int n = p.n_sites;
    if (n < 2 || n > 512)
        throw RangeError("finite-chain site count must be in [2, 512], got " + std::to_string(n));

    // Quadratic form sum_j nu_s s_j^dag s_j - g (s_j^dag s_j^dag + h.c.)
    //               - g sum_<jl> (s_j^dag s_l + s_j^dag s_l^dag + h.c.)
    // normal-ordered into blocks F (particle-conserving) and G (pairing):
    //   F = (nu_s - 2g) I - g (T + T^t),  G = -2g I - g (T + T^t),
    // with T the periodic shift. Positive eigenvalues of [[F, G], [-G, -F]]
    // are the excitation energies; no momentum-space input is used.
    Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) shift(j, (j + 1) % n) += 1.0;
    const Eigen::MatrixXd ring = shift + shift.transpose();
    const Eigen::MatrixXd f =
        (p.nu_s - 2.0 * p.g) * Eigen::MatrixXd::Identity(n, n) - p.g * ring;
    const Eigen::MatrixXd g = -2.0 * p.g * Eigen::MatrixXd::Identity(n, n) - p.g * ring;

    Eigen::MatrixXd dyn(2 * n, 2 * n);
    dyn.topLeftCorner(n, n) = f;
    dyn.topRightCorner(n, n) = g;
    dyn.bottomLeftCorner(n, n) = -g;
    dyn.bottomRightCorner(n, n) = -f;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(dyn, /*computeEigenvectors=*/false);
    const Eigen::VectorXcd evals = solver.eigenvalues();
    const double scale = std::max(p.nu_s, 1.0);
    std::vector<double> all;
    all.reserve(2 * n);
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (std::abs(evals[i].imag()) > 1e-8 * scale)
            throw UnstableMode(0.0, unstable_k_edge(p));
        all.push_back(evals[i].real());
    }
    // Eigenvalues come in +/- pairs; the upper half is the spectrum.
    std::sort(all.begin(), all.end());
    return {all.begin() + n, all.end()};
}

DispersionResult brillouin_scan(const LatticeParams& p, int n_points,
                                const ScanOptions& options) {
    require_params(p);
    if (n_points < 2)
        throw RangeError("scan needs at least 2 k-points, got " + std::to_string(n_points));

    const StabilityResult stab = stability_check(p);
    DispersionResult result;
    result.stable = stab.stable;
    result.margin = stab.margin;
    if (!stab.stable) {
        const double k_edge = unstable_k_edge(p);
        result.unstable_k_range = {0.0, k_edge};
        if (!options.allow_unstable) throw UnstableMode(0.0, k_edge);
        result.warnings.push_back("unstable modes for k below " + std::to_string(k_edge) +
                                  " rad omitted from the scan");
    } else {
        result.ground_energy = ground_state_energy(p);
        result.ground_energy_density = *result.ground_energy / p.n_sites;
        if (stab.gapless)
            result.warnings.push_back(
                "stability boundary: the k = 0 mode is gapless and has no "
                "finite mode transformation");
    }

    std::vector<double> grid(n_points);
    for (int i = 0; i < n_points; ++i) grid[i] = std::numbers::pi * i / n_points;

    struct Row {
        bool keep = false;
        double e_full = 0.0, e_tb = 0.0;
        std::optional<double> mu, nu;
    };
    std::vector<Row> rows(n_points);
    parallel_for(static_cast<std::size_t>(n_points), [&](std::size_t i) {
        const double k = grid[i];
        if (radicand(p, k) < 0.0) return;  // only reachable with allow_unstable
        Row row;
        row.keep = true;
        row.e_full = dispersion_full(p, k);
        row.e_tb = dispersion_tb(p, k);
        try {
            const BogoliubovCoeffs c = bogoliubov_coefficients(p, k);
            row.mu = c.mu;
            row.nu = c.nu;
        } catch (const DivergentCoefficients&) {
            // gapless boundary point: energies exist, coefficients do not
        }
        rows[i] = row;
    });

    for (int i = 0; i < n_points; ++i) {
        if (!rows[i].keep) continue;
        result.k_values.push_back(grid[i]);
        result.e_full.push_back(rows[i].e_full);
        result.e_tb.push_back(rows[i].e_tb);
        result.mu.push_back(rows[i].mu);
        result.nu.push_back(rows[i].nu);
    }
    if (stab.stable && !result.e_full.empty())
        result.gap = *std::min_element(result.e_full.begin(), result.e_full.end());
    return result;
}

double critical_field(const SpinEnsembleSpec& ensemble, double g,
                      const PhysicalConstants& constants) {
    if (g < 0.0) throw RangeError("coupling g must be >= 0, got " + std::to_string(g));
    const double d = ensemble.zero_field_splitting;
    if (8.0 * g >= d) throw NoStableField(g, d);
    return (d - 8.0 * g) / constants.zeeman_slope();
}

}  // namespace hybridlattice::lattice
