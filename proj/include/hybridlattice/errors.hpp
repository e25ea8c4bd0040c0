#pragma once

#include <stdexcept>
#include <string>

namespace hybridlattice {

// Common base so callers can catch every library error with one handler.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration or input-validation problem; message names the offending key.
struct ConfigError : Error {
    using Error::Error;
};

// Derived two-level splitting nu_s = D - g_e (mu_B/h) B_ext came out <= 0,
// so the two-level reduction of the spin is invalid (level crossing).
struct NonPositiveSplitting : Error {
    double nu_s;
    explicit NonPositiveSplitting(double value)
        : Error("non-positive spin splitting nu_s = " + std::to_string(value) +
                " GHz (level crossing; reduce the external field)"),
          nu_s(value) {}
};

// Field evaluation requested at z <= 0 where the loop formula has a pole.
struct SingularPosition : Error {
    double z;
    explicit SingularPosition(double value)
        : Error("field position z = " + std::to_string(value) +
                " um is at or behind the loop edge singularity"),
          z(value) {}
};

// Matrix or Hilbert-space dimension mismatch.
struct DimensionError : Error {
    using Error::Error;
};

// Eigensolver input failed the Hermiticity tolerance.
struct HermiticityError : Error {
    double deviation;
    explicit HermiticityError(double dev)
        : Error("matrix is not Hermitian: max|H - H^dag| / max|H| = " +
                std::to_string(dev)),
          deviation(dev) {}
};

// Qubit-mode detuning vanished or changed sign; the perturbative
// elimination has a pole there.
struct ResonanceError : Error {
    int qubit;
    int ensemble;
    double delta;
    ResonanceError(int i, int j, double d)
        : Error("resonant pair: qubit " + std::to_string(i + 1) + " / ensemble " +
                std::to_string(j + 1) + " has detuning " + std::to_string(d) +
                " GHz <= 0"),
          qubit(i), ensemble(j), delta(d) {}
};

// Quasi-particle energy would be imaginary over the reported k-interval.
struct UnstableMode : Error {
    double k_min;
    double k_max;
    UnstableMode(double lo, double hi)
        : Error("unstable modes for k in [" + std::to_string(lo) + ", " +
                std::to_string(hi) + ") rad: nu_s^2 < 4 nu_s g (1 + cos k) there"),
          k_min(lo), k_max(hi) {}
    explicit UnstableMode(double k) : UnstableMode(k, k) {}
};

// Transformation coefficients diverge at a gapless point (E_k = 0).
struct DivergentCoefficients : Error {
    double k;
    explicit DivergentCoefficients(double kk)
        : Error("Bogoliubov coefficients diverge at k = " + std::to_string(kk) +
                " rad where E_k = 0"),
          k(kk) {}
};

// No external field yields a positive splitting satisfying nu_s >= 8g.
struct NoStableField : Error {
    NoStableField(double g, double d)
        : Error("no stable field: 8g = " + std::to_string(8.0 * g) +
                " GHz >= zero-field splitting D = " + std::to_string(d) + " GHz") {}
};

// Argument outside its documented range (grid points, site counts, ...).
struct RangeError : Error {
    using Error::Error;
};

}  // namespace hybridlattice
