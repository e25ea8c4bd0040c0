#include "cli_support.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hybridlattice/chain_spec.hpp"
#include "hybridlattice/constants.hpp"
#include "hybridlattice/dispersive.hpp"
#include "hybridlattice/errors.hpp"
#include "hybridlattice/hamiltonian.hpp"
#include "hybridlattice/lattice.hpp"
#include "hybridlattice/magnetics.hpp"
#include "hybridlattice/operator_matrix.hpp"
#include "hybridlattice/version.hpp"

namespace hybridlattice::cli {
namespace {

using nlohmann::ordered_json;

// ---- formatting ----

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string iso8601_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- output plumbing ----

// Routes data to stdout or to --out files and collects what the manifest
// needs. Data files carry no timestamps; the manifest sidecar does.
struct OutputSink {
    std::string command;
    std::string config_path;
    std::string out_path;  // empty: stdout, no manifest
    std::string format;
    ordered_json parameters = ordered_json::object();
    ordered_json chain;
    std::vector<std::string> written;

    void emit_csv(const std::string& text) {
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        write_file(format == "both" ? stem() + ".csv" : out_path, text);
    }

    void emit_json(const ordered_json& doc) {
        const std::string text = doc.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        write_file(format == "both" ? stem() + ".json" : out_path, text);
    }

    void finish() {
        if (out_path.empty()) return;
        ordered_json manifest;
        manifest["command"] = command;
        manifest["version"] = kVersion;
        manifest["generated_at"] = iso8601_now();
        manifest["config_path"] = config_path;
        manifest["format"] = format;
        manifest["parameters"] = parameters;
        manifest["chain"] = chain;
        manifest["outputs"] = written;
        std::ofstream out(out_path + ".manifest.json");
        if (!out) throw Error("cannot write " + out_path + ".manifest.json");
        out << manifest.dump(2) << "\n";
    }

  private:
    std::string stem() const {
        for (const char* ext : {".csv", ".json"}) {
            if (out_path.ends_with(ext)) return out_path.substr(0, out_path.size() - std::strlen(ext));
        }
        return out_path;
    }

    void write_file(const std::string& path, const std::string& text) {
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path);
        out << text;
        written.push_back(path);
    }
};

std::string resolve_format(const std::string& requested, const std::string& fallback,
                           const std::vector<std::string>& allowed, const std::string& command) {
    if (requested.empty()) return fallback;
    if (std::find(allowed.begin(), allowed.end(), requested) == allowed.end())
        throw ConfigError("--format " + requested + " is not supported by " + command);
    return requested;
}

// ---- parameter ranges ----

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(count));
        if (count == 1) {
            v[0] = lo;
            return v;
        }
        for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + i * (hi - lo) / (count - 1);
        return v;
    }
};

Range parse_range(const std::string& text, const std::string& flag) {
    const auto bad = [&](const std::string& why) {
        return ConfigError(flag + ": expected min:max:count, " + why + " (got \"" + text + "\")");
    };
    std::array<std::string, 3> part;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t colon = text.find(':', start);
        if (i < 2) {
            if (colon == std::string::npos) throw bad("missing a colon");
            part[static_cast<std::size_t>(i)] = text.substr(start, colon - start);
            start = colon + 1;
        } else {
            if (colon != std::string::npos) throw bad("too many colons");
            part[2] = text.substr(start);
        }
    }
    Range r;
    try {
        std::size_t used = 0;
        r.lo = std::stod(part[0], &used);
        if (used != part[0].size()) throw bad("min is not a number");
        r.hi = std::stod(part[1], &used);
        if (used != part[1].size()) throw bad("max is not a number");
        r.count = std::stoi(part[2], &used);
        if (used != part[2].size()) throw bad("count is not an integer");
    } catch (const std::logic_error&) {
        throw bad("values must be numeric");
    }
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw bad("bounds must be finite");
    if (r.count < 1) throw bad("count must be >= 1");
    if (r.hi < r.lo) throw bad("max must be >= min");
    if (r.count == 1 && r.hi != r.lo) throw bad("count 1 needs max == min");
    return r;
}

// ---- uniform-chain extraction ----

double require_uniform(const std::vector<double>& values, const std::string& what) {
    double lo = values.front();
    double hi = values.front();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if ((hi - lo) > 1e-6 * scale)
        throw ConfigError("lattice analysis requires a uniform chain: " + what + " differ (" +
                          fmt(lo) + " .. " + fmt(hi) + ")");
    return values.front();
}

struct UniformLattice {
    double nu_q = 0.0;
    double nu_s = 0.0;
    double j = 0.0;
    double g = 0.0;
};

double uniform_nu_s(const ChainSpec& chain) {
    std::vector<double> nu_s;
    nu_s.reserve(chain.ensembles.size());
    for (const auto& e : chain.ensembles) nu_s.push_back(nu_s_from_field(e, chain.constants));
    return require_uniform(nu_s, "ensemble splittings");
}

double uniform_nu_q(const ChainSpec& chain) {
    std::vector<double> nu_q;
    nu_q.reserve(chain.qubits.size());
    for (const auto& q : chain.qubits) nu_q.push_back(q.nu_q());
    return require_uniform(nu_q, "qubit splittings");
}

UniformLattice uniform_from_chain(const ChainSpec& chain) {
    UniformLattice u;
    u.nu_q = uniform_nu_q(chain);
    u.nu_s = uniform_nu_s(chain);
    std::vector<double> band;
    for (std::size_t i = 0; i < chain.qubits.size(); ++i) {
        band.push_back(chain.couplings[i][i]);
        band.push_back(chain.couplings[i][i + 1]);
    }
    u.j = require_uniform(band, "couplings");
    u.g = lattice::lattice_g(u.j, u.nu_q, u.nu_s);
    return u;
}

// ---- coupling-profile ----

int cmd_coupling_profile(const ChainSpec& chain, OutputSink& sink, int points) {
    std::vector<double> widths;
    widths.reserve(chain.ensembles.size());
    for (const auto& e : chain.ensembles) widths.push_back(e.crystal_width_L);
    const double L = require_uniform(widths, "crystal_width_L_um");

    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int j = 1; j <= points; ++j) grid[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) / (points + 1);

    std::vector<std::vector<magnetics::ProfilePoint>> profiles;
    profiles.reserve(chain.qubits.size());
    for (const auto& q : chain.qubits)
        profiles.push_back(magnetics::coupling_profile(q, L, grid, chain.constants));

    std::ostringstream csv;
    if (chain.qubits.size() == 1) {
        csv << "z_over_L,J_m_GHz\n";
    } else {
        csv << "z_over_L";
        for (std::size_t q = 0; q < chain.qubits.size(); ++q) csv << ",J_m_q" << (q + 1) << "_GHz";
        csv << "\n";
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << fmt(grid[i]);
        for (const auto& profile : profiles) csv << "," << fmt(profile[i].j_m);
        csv << "\n";
    }

    sink.parameters["points"] = points;
    sink.parameters["L_um"] = L;
    sink.emit_csv(csv.str());
    return 0;
}

// ---- effective-params ----

int cmd_effective_params(const ChainSpec& chain, OutputSink& sink) {
    const auto unit = dispersive::unit_from_chain(chain);
    const auto coeffs = dispersive::dispersive_coefficients(unit);
    const auto eff = dispersive::effective_params(unit);

    ordered_json doc;
    doc["unit"]["nu_q_GHz"] = unit.nu_q;
    doc["unit"]["nu_s_GHz"] = unit.nu_s;
    doc["unit"]["J_GHz"] = unit.j;
    doc["unit"]["mutual_inductance_coupling_GHz"] = unit.m12;
    doc["detunings"]["delta_GHz"] = coeffs.delta;
    doc["detunings"]["lambda_GHz"] = coeffs.lambda;
    std::array<double, 4> rot{};
    std::array<double, 4> counter{};
    for (int i = 0; i < 4; ++i) {
        rot[static_cast<std::size_t>(i)] = coeffs.a[static_cast<std::size_t>(i)];
        counter[static_cast<std::size_t>(i)] = coeffs.a[static_cast<std::size_t>(i + 4)];
    }
    doc["generator"]["a_rotating"] = rot;
    doc["generator"]["a_counter_rotating"] = counter;
    doc["effective"]["nu_prime_GHz"] = eff.nu_prime;
    doc["effective"]["g_self_GHz"] = eff.g_self;
    doc["effective"]["g_hop_GHz"] = eff.g_hop;
    doc["warnings"] = coeffs.warnings;

    sink.emit_json(doc);
    return 0;
}

// ---- dispersion ----

int cmd_dispersion(const ChainSpec& chain, OutputSink& sink, int sites, int points, bool tb_column,
                   bool allow_unstable, std::optional<double> ratio) {
    const UniformLattice u = uniform_from_chain(chain);
    lattice::LatticeParams p;
    p.nu_s = u.nu_s;
    p.g = u.g;
    p.n_sites = sites;
    lattice::ScanOptions options;
    options.allow_unstable = allow_unstable;
    options.tight_binding = true;
    const auto scan = lattice::brillouin_scan(p, points, options);

    std::ostringstream csv;
    csv << "k,E_full_GHz" << (tb_column ? ",E_tb_GHz" : "") << ",mu,nu\n";
    for (std::size_t i = 0; i < scan.k_values.size(); ++i) {
        csv << fmt(scan.k_values[i]) << "," << fmt(scan.e_full[i]);
        if (tb_column) csv << "," << fmt(scan.e_tb[i]);
        csv << ",";
        if (scan.mu[i]) csv << fmt(*scan.mu[i]);
        csv << ",";
        if (scan.nu[i]) csv << fmt(*scan.nu[i]);
        csv << "\n";
    }

    std::vector<std::string> warnings = scan.warnings;
    ordered_json summary;
    summary["nu_s_GHz"] = u.nu_s;
    summary["g_GHz"] = u.g;
    summary["gap_GHz"] = nullptr;
    if (scan.gap) summary["gap_GHz"] = *scan.gap;
    summary["E_g_GHz"] = nullptr;
    if (scan.ground_energy) summary["E_g_GHz"] = *scan.ground_energy;
    summary["E_g_per_site_GHz"] = nullptr;
    if (scan.ground_energy_density) summary["E_g_per_site_GHz"] = *scan.ground_energy_density;
    summary["stable"] = scan.stable;
    summary["margin_GHz"] = scan.margin;
    try {
        summary["B_crit_T"] = lattice::critical_field(chain.ensembles.front(), u.g, chain.constants);
    } catch (const NoStableField& e) {
        summary["B_crit_T"] = nullptr;
        warnings.push_back(e.what());
    }
    if (ratio) {
        const double r = *ratio;
        summary["nu_q_for_ratio_GHz"] =
            (u.j * u.j + std::sqrt(std::pow(u.j, 4) + r * r * std::pow(u.nu_s, 4))) / (r * u.nu_s);
    }
    if (scan.unstable_k_range)
        summary["unstable_k_range"] = {scan.unstable_k_range->first, scan.unstable_k_range->second};
    summary["warnings"] = warnings;

    if (sink.format == "csv" || sink.format == "both") sink.emit_csv(csv.str());
    if (sink.format == "json" || sink.format == "both") sink.emit_json(summary);

    sink.parameters["sites"] = sites;
    sink.parameters["points"] = points;
    sink.parameters["tight_binding"] = tb_column;
    sink.parameters["allow_unstable"] = allow_unstable;
    if (ratio) sink.parameters["solve_nu_q_for_ratio"] = *ratio;
    return 0;
}

// ---- validate ----

dispersive::UnitParams random_unit(std::mt19937& rng) {
    std::uniform_real_distribution<double> nu_q(4.0, 8.0);
    std::uniform_real_distribution<double> nu_s(0.6, 1.4);
    std::uniform_real_distribution<double> j(0.05, 0.3);
    dispersive::UnitParams p;
    for (auto& v : p.nu_q) v = nu_q(rng);
    for (auto& v : p.nu_s) v = nu_s(rng);
    for (auto& v : p.j) v = j(rng);
    p.m12 = 0.0;
    return p;
}

int cmd_validate(const ChainSpec& chain, OutputSink& sink, int cutoff, int levels, unsigned seed) {
    const auto unit = dispersive::unit_from_chain(chain);
    std::mt19937 rng(seed);
    ordered_json checks = ordered_json::array();
    std::vector<std::string> warnings;
    bool all_ok = true;
    const auto record = [&](ordered_json check, bool ok) {
        check["passed"] = ok;
        checks.push_back(std::move(check));
        all_ok = all_ok && ok;
    };

    // First-order cancellation of the qubit-mode coupling by the generator,
    // on the configured unit and on randomized detuned units.
    const double config_residual = dispersive::generator_residual(unit, cutoff);
    double max_random_residual = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto p = random_unit(rng);
        max_random_residual = std::max(max_random_residual, dispersive::generator_residual(p, cutoff));
    }
    {
        ordered_json check;
        check["name"] = "generator_residual";
        check["config_residual"] = config_residual;
        check["max_random_residual"] = max_random_residual;
        check["tolerance"] = 1e-10;
        record(std::move(check), config_residual < 1e-10 && max_random_residual < 1e-10);
    }

    // Effective-model spectrum against the exact qubit-ground sector, with
    // the quartic shrink of the deviation when the coupling is halved.
    const auto report = dispersive::validate_dispersive(unit, cutoff, levels);
    warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
    {
        ordered_json check;
        check["name"] = "effective_accuracy";
        check["deviation_GHz"] = report.deviation;
        check["deviation_tolerance_GHz"] = 2e-3;
        check["deviation_half_J_GHz"] = report.deviation_half_j;
        check["scaling_ratio"] = report.scaling_ratio;
        check["min_scaling_ratio"] = 6.0;
        record(std::move(check), report.deviation < 2e-3 && report.scaling_ratio >= 6.0);
    }

    // Closed-form band against the real-space symplectic spectrum on small
    // rings, for the configured lattice and randomized stable ones.
    {
        const UniformLattice u = uniform_from_chain(chain);
        std::vector<lattice::LatticeParams> sets;
        sets.push_back({u.nu_s, u.g, 0});
        std::uniform_real_distribution<double> nu_s(0.5, 2.0);
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (int i = 0; i < 5; ++i) {
            lattice::LatticeParams p;
            p.nu_s = nu_s(rng);
            p.g = frac(rng) * p.nu_s / 8.0 * 0.95;
            sets.push_back(p);
        }
        double max_diff = 0.0;
        for (auto p : sets) {
            for (int n : {2, 4, 8, 16}) {
                p.n_sites = n;
                const auto symplectic = lattice::finite_chain_spectrum(p);
                std::vector<double> closed(static_cast<std::size_t>(n));
                for (int m = 0; m < n; ++m)
                    closed[static_cast<std::size_t>(m)] =
                        lattice::dispersion_full(p, 2.0 * std::numbers::pi * m / n);
                std::sort(closed.begin(), closed.end());
                for (int m = 0; m < n; ++m)
                    max_diff = std::max(max_diff, std::abs(symplectic[static_cast<std::size_t>(m)] -
                                                           closed[static_cast<std::size_t>(m)]));
            }
        }
        ordered_json check;
        check["name"] = "bogoliubov_consistency";
        check["max_diff_GHz"] = max_diff;
        check["tolerance"] = 1e-10;
        record(std::move(check), max_diff < 1e-10);
    }

    // Tight-binding remainder bound 32 g^2 / nu_s in the weak-coupling regime.
    {
        bool ok = true;
        ordered_json rows = ordered_json::array();
        for (double r : {16.0, 50.0, 100.0}) {
            lattice::LatticeParams p;
            p.nu_s = 1.0;
            p.g = 1.0 / r;
            double sup = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double k = std::numbers::pi * i / 1000.0;
                sup = std::max(sup, std::abs(lattice::dispersion_full(p, k) - lattice::dispersion_tb(p, k)));
            }
            const double bound = 32.0 * p.g * p.g / p.nu_s;
            ok = ok && sup <= bound;
            rows.push_back({{"nu_s_over_g", r}, {"sup_GHz", sup}, {"bound_GHz", bound}});
        }
        ordered_json check;
        check["name"] = "tight_binding_bound";
        check["cases"] = rows;
        record(std::move(check), ok);
    }

    // Truncation convergence: the lowest part of the spectrum must be
    // insensitive to raising the boson cutoff.
    {
        const std::vector<double> nu_q{unit.nu_q[0], unit.nu_q[1]};
        const std::vector<double> nu_s{unit.nu_s[0], unit.nu_s[1], unit.nu_s[2]};
        const CouplingMatrix couplings{{unit.j[0], unit.j[1], 0.0}, {0.0, unit.j[2], unit.j[3]}};
        std::array<std::vector<double>, 2> lows;
        const std::array<int, 2> cutoffs{cutoff, cutoff + 2};
        for (std::size_t t = 0; t < 2; ++t) {
            const auto h = hilbert::build_full_hamiltonian(nu_q, nu_s, couplings, unit.m12, cutoffs[t]);
            const auto spectrum = hilbert::eigensolve(h);
            for (int i = 0; i < 5; ++i) lows[t].push_back(spectrum.eigenvalues[static_cast<std::size_t>(i)]);
        }
        double max_diff = 0.0;
        for (int i = 0; i < 5; ++i)
            max_diff = std::max(max_diff, std::abs(lows[0][static_cast<std::size_t>(i)] -
                                                   lows[1][static_cast<std::size_t>(i)]));
        ordered_json check;
        check["name"] = "cutoff_convergence";
        check["cutoffs"] = cutoffs;
        check["max_diff_GHz"] = max_diff;
        check["tolerance_GHz"] = 1e-4;
        record(std::move(check), max_diff < 1e-4);
    }

    ordered_json doc;
    doc["residual"] = config_residual;
    doc["deviation_GHz"] = report.deviation;
    doc["deviation_half_J_GHz"] = report.deviation_half_j;
    doc["scaling_ratio"] = report.scaling_ratio;
    doc["warnings"] = warnings;
    doc["checks"] = checks;
    doc["passed"] = all_ok;

    sink.parameters["cutoff"] = cutoff;
    sink.parameters["levels"] = levels;
    sink.parameters["seed"] = seed;
    sink.emit_json(doc);
    return all_ok ? 0 : 5;
}

// ---- stability-scan ----

int cmd_stability_scan(const ChainSpec& chain, OutputSink& sink, const std::string& nus_range,
                       const std::string& g_range, const std::string& j_range) {
    const bool has_g = !g_range.empty();
    const bool has_j = !j_range.empty();
    if (has_g == has_j)
        throw ConfigError("stability-scan: exactly one of --g-range and --J-range is required");

    std::vector<double> nus_values;
    if (nus_range.empty()) {
        nus_values.push_back(uniform_nu_s(chain));
    } else {
        nus_values = parse_range(nus_range, "--nus-range").values();
    }
    const std::vector<double> x_values =
        parse_range(has_g ? g_range : j_range, has_g ? "--g-range" : "--J-range").values();
    const double nu_q = has_j ? uniform_nu_q(chain) : 0.0;

    std::ostringstream csv;
    csv << "nu_s_GHz,g_GHz,stable,gap_GHz,B_crit_T\n";
    for (double nu_s : nus_values) {
        if (nu_s <= 0.0) throw NonPositiveSplitting(nu_s);
        for (double x : x_values) {
            const double g = has_g ? x : lattice::lattice_g(x, nu_q, nu_s);
            lattice::LatticeParams p;
            p.nu_s = nu_s;
            p.g = g;
            const auto stability = lattice::stability_check(p);
            csv << fmt(nu_s) << "," << fmt(g) << "," << (stability.stable ? "1" : "0") << ",";
            if (stability.stable) csv << fmt(lattice::dispersion_full(p, 0.0));
            csv << ",";
            try {
                csv << fmt(lattice::critical_field(chain.ensembles.front(), g, chain.constants));
            } catch (const NoStableField&) {
            } catch (const RangeError&) {
            }
            csv << "\n";
        }
    }

    if (!nus_range.empty()) sink.parameters["nus_range"] = nus_range;
    if (has_g) sink.parameters["g_range"] = g_range;
    if (has_j) sink.parameters["J_range"] = j_range;
    sink.emit_csv(csv.str());
    return 0;
}

}  // namespace

// ---- application ----

int run(int argc, char** argv) {
    CLI::App app{"hybrid flux-qubit / spin-ensemble chain analysis"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;
    unsigned int seed = 12345;
    app.add_option("--config", config_path, "chain configuration JSON file")->required();
    app.add_option("--out", out_path,
                   "output file; stdout when omitted, with a .manifest.json sidecar otherwise");
    app.add_option("--format", format, "csv, json, or both (commands reject formats they cannot render)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--seed", seed, "seed for randomized validation checks");

    auto* profile_cmd =
        app.add_subcommand("coupling-profile", "single-spin coupling across the gap between loops");
    int points = 99;
    profile_cmd->add_option("--points", points, "number of interior grid points")
        ->check(CLI::Range(1, 100000));
    profile_cmd->fallthrough();

    auto* effective_cmd = app.add_subcommand(
        "effective-params", "dressed-mode frequencies and couplings of the eliminated model");
    effective_cmd->fallthrough();

    auto* dispersion_cmd = app.add_subcommand(
        "dispersion", "quasi-particle band, transformation coefficients, and ground energy");
    int sites = 64;
    int dispersion_points = 128;
    bool tb_column = false;
    bool allow_unstable = false;
    double ratio = 0.0;
    dispersion_cmd->add_option("--sites", sites, "ring length for the ground-state energy")
        ->check(CLI::Range(2, 512));
    dispersion_cmd->add_option("--points", dispersion_points, "half-zone grid resolution")
        ->check(CLI::Range(2, 100000));
    dispersion_cmd->add_flag("--tight-binding", tb_column, "add the tight-binding band column");
    dispersion_cmd->add_flag("--allow-unstable", allow_unstable,
                             "emit the stable rows instead of failing on an unstable band");
    auto* ratio_opt =
        dispersion_cmd
            ->add_option("--solve-nu-q-for-ratio", ratio,
                         "also report the qubit splitting that sets g/nu_s to this value")
            ->check(CLI::PositiveNumber);
    dispersion_cmd->fallthrough();

    auto* validate_cmd = app.add_subcommand("validate", "run the numerical cross-check suite");
    int cutoff = 5;
    int levels = 4;
    validate_cmd->add_option("--cutoff", cutoff, "boson truncation dimension")->check(CLI::Range(2, 12));
    validate_cmd->add_option("--levels", levels, "eigenvalues compared in the accuracy check")
        ->check(CLI::Range(2, 16));
    validate_cmd->fallthrough();

    auto* scan_cmd = app.add_subcommand(
        "stability-scan", "stability, gap, and critical field over parameter ranges");
    std::string nus_range;
    std::string g_range;
    std::string j_range;
    scan_cmd->add_option("--nus-range", nus_range, "min:max:count for nu_s in GHz");
    scan_cmd->add_option("--g-range", g_range, "min:max:count for g in GHz");
    scan_cmd->add_option("--J-range", j_range, "min:max:count for the collective coupling J in GHz");
    scan_cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ChainSpec chain = parse_config(config_path);
        magnetics::resolve_couplings(chain);

        OutputSink sink;
        sink.config_path = config_path;
        sink.out_path = out_path;
        sink.chain = serialize_config(chain);

        int rc = 0;
        if (profile_cmd->parsed()) {
            sink.command = "coupling-profile";
            sink.format = resolve_format(format, "csv", {"csv"}, sink.command);
            rc = cmd_coupling_profile(chain, sink, points);
        } else if (effective_cmd->parsed()) {
            sink.command = "effective-params";
            sink.format = resolve_format(format, "json", {"json"}, sink.command);
            rc = cmd_effective_params(chain, sink);
        } else if (dispersion_cmd->parsed()) {
            sink.command = "dispersion";
            sink.format = resolve_format(format, "both", {"csv", "json", "both"}, sink.command);
            std::optional<double> solve_ratio;
            if (ratio_opt->count() > 0) solve_ratio = ratio;
            rc = cmd_dispersion(chain, sink, sites, dispersion_points, tb_column, allow_unstable,
                                solve_ratio);
        } else if (validate_cmd->parsed()) {
            sink.command = "validate";
            sink.format = resolve_format(format, "json", {"json"}, sink.command);
            rc = cmd_validate(chain, sink, cutoff, levels, seed);
        } else {
            sink.command = "stability-scan";
            sink.format = resolve_format(format, "csv", {"csv"}, sink.command);
            rc = cmd_stability_scan(chain, sink, nus_range, g_range, j_range);
        }
        sink.finish();
        return rc;
    } catch (const ResonanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const UnstableMode& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DivergentCoefficients& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NoStableField& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NonPositiveSplitting& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularPosition& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hybridlattice::cli
