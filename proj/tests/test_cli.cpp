#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string env_path(const char* name) {
    const char* value = std::getenv(name);
    REQUIRE(value != nullptr);
    return value;
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("hybridlattice-cli-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path out_file = work_dir() / ("stdout." + std::to_string(counter));
    const fs::path err_file = work_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    const std::string command = env_prefix + "\"" + env_path("HYBRIDLATTICE_BIN") + "\" " + args +
                                " > \"" + out_file.string() + "\" 2> \"" + err_file.string() + "\"";
    const int status = std::system(command.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string fig3() { return env_path("HYBRIDLATTICE_CONFIG_DIR") + "/fig3_chain.json"; }
std::string fig2() { return env_path("HYBRIDLATTICE_CONFIG_DIR") + "/fig2_profile.json"; }

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::vector<std::string> split_csv_line(const std::string& text, std::size_t line_index) {
    std::istringstream in(text);
    std::string line;
    for (std::size_t i = 0; i <= line_index; ++i) REQUIRE(std::getline(in, line));
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

// fig3 chain with one field rewritten, saved under the scratch directory
std::string variant_config(const std::string& tag, void (*mutate)(json&)) {
    json config = json::parse(slurp(fig3()));
    mutate(config);
    const fs::path path = work_dir() / (tag + ".json");
    std::ofstream out(path);
    out << config.dump(2);
    return path.string();
}

}  // namespace

// ---- global behavior ----

TEST_CASE("cli version and usage errors") {
    CHECK(run_cli("--version").exit_code == 0);
    CHECK_THAT(run_cli("--version").out, ContainsSubstring("1.0.0"));
    CHECK(run_cli("--help").exit_code == 0);

    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate --config \"" + fig3() + "\"").exit_code == 2);
    CHECK(run_cli("effective-params").exit_code == 2);  // --config is required
    CHECK(run_cli("effective-params --config /nonexistent/chain.json").exit_code == 2);
    CHECK(run_cli("dispersion --config \"" + fig3() + "\" --points 1").exit_code == 2);
    CHECK(run_cli("dispersion --config \"" + fig3() + "\" --format yaml").exit_code == 2);
}

// ---- coupling-profile ----

TEST_CASE("coupling profile renders one column per qubit") {
    const auto r = run_cli("coupling-profile --config \"" + fig2() + "\"");
    REQUIRE(r.exit_code == 0);
    CHECK(split_csv_line(r.out, 0) ==
          std::vector<std::string>{"z_over_L", "J_m_q1_GHz", "J_m_q2_GHz", "J_m_q3_GHz"});
    CHECK(count_lines(r.out) == 100);  // header + 99 interior points

    SECTION("single midpoint row") {
        const auto mid = run_cli("coupling-profile --config \"" + fig2() + "\" --points 1");
        REQUIRE(mid.exit_code == 0);
        const auto cells = split_csv_line(mid.out, 1);
        REQUIRE(cells.size() == 4);
        CHECK(std::stod(cells[0]) == 0.5);
        CHECK(std::stod(cells[1]) == Approx(4.5946567372515369e-06).epsilon(1e-12));
        CHECK(std::stod(cells[2]) == Approx(6.9723008638065401e-06).epsilon(1e-12));
        CHECK(std::stod(cells[3]) == Approx(1.2679772432292193e-05).epsilon(1e-12));
        CHECK(std::stod(cells[1]) < std::stod(cells[2]));
        CHECK(std::stod(cells[2]) < std::stod(cells[3]));
    }
    SECTION("csv only") {
        CHECK(run_cli("coupling-profile --config \"" + fig2() + "\" --format json").exit_code == 2);
    }
}

// ---- effective-params ----

TEST_CASE("effective parameters report") {
    const auto r = run_cli("effective-params --config \"" + fig3() + "\"");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);

    for (const auto& v : doc["detunings"]["delta_GHz"]) CHECK(v.get<double>() == 5.0);
    for (const auto& v : doc["detunings"]["lambda_GHz"]) CHECK(v.get<double>() == 7.0);
    for (const auto& v : doc["generator"]["a_rotating"])
        CHECK(v.get<double>() == Approx(0.05).margin(1e-15));
    for (const auto& v : doc["generator"]["a_counter_rotating"])
        CHECK(v.get<double>() == Approx(1.0 / 28.0).margin(1e-15));

    const auto& eff = doc["effective"];
    CHECK(eff["nu_prime_GHz"][0].get<double>() == Approx(0.9785714285714285).margin(1e-15));
    CHECK(eff["nu_prime_GHz"][1].get<double>() == Approx(0.9571428571428571).margin(1e-15));
    CHECK(eff["nu_prime_GHz"][2].get<double>() == Approx(0.9785714285714285).margin(1e-15));
    CHECK(eff["g_self_GHz"][0].get<double>() == Approx(3.0 / 280.0).margin(1e-16));
    CHECK(eff["g_self_GHz"][1].get<double>() == Approx(3.0 / 140.0).margin(1e-16));
    CHECK(eff["g_hop_GHz"][0].get<double>() == Approx(3.0 / 140.0).margin(1e-16));
    CHECK(eff["g_hop_GHz"][1].get<double>() == Approx(3.0 / 140.0).margin(1e-16));
    CHECK(doc["warnings"].empty());
}

// ---- dispersion ----

TEST_CASE("dispersion csv table") {
    const auto r = run_cli("dispersion --config \"" + fig3() +
                           "\" --points 16 --tight-binding --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(split_csv_line(r.out, 0) ==
          std::vector<std::string>{"k", "E_full_GHz", "E_tb_GHz", "mu", "nu"});
    CHECK(count_lines(r.out) == 17);
    const auto row = split_csv_line(r.out, 1);
    REQUIRE(row.size() == 5);
    CHECK(std::stod(row[0]) == 0.0);
    CHECK(std::stod(row[1]) == Approx(0.9102589898327995).epsilon(1e-14));
    CHECK(std::stod(row[2]) == Approx(0.9142857142857143).epsilon(1e-14));
    CHECK(std::stod(row[3]) == Approx(1.0011053173664974).epsilon(1e-12));
    CHECK(std::stod(row[4]) == Approx(-0.047030378049464215).epsilon(1e-12));

    SECTION("tight-binding column is opt-in") {
        const auto bare = run_cli("dispersion --config \"" + fig3() + "\" --points 4 --format csv");
        REQUIRE(bare.exit_code == 0);
        CHECK(split_csv_line(bare.out, 0) ==
              std::vector<std::string>{"k", "E_full_GHz", "mu", "nu"});
    }
}

TEST_CASE("dispersion json summary") {
    const auto r = run_cli("dispersion --config \"" + fig3() + "\" --format json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["nu_s_GHz"].get<double>() == Approx(1.0).margin(1e-12));
    CHECK(doc["g_GHz"].get<double>() == Approx(3.0 / 140.0).margin(1e-15));
    CHECK(doc["gap_GHz"].get<double>() == Approx(0.9102589898327995).epsilon(1e-13));
    CHECK(doc["E_g_GHz"].get<double>() == Approx(-0.04756168893257978).epsilon(1e-12));
    CHECK(doc["E_g_per_site_GHz"].get<double>() == Approx(-0.0007431513895715591).epsilon(1e-12));
    CHECK(doc["stable"].get<bool>());
    CHECK(doc["margin_GHz"].get<double>() == Approx(1.0 - 24.0 / 140.0).margin(1e-12));
    CHECK(doc["B_crit_T"].get<double>() == Approx(0.09627031688971495).epsilon(1e-12));
    CHECK_FALSE(doc.contains("unstable_k_range"));
    CHECK(doc["warnings"].empty());

    SECTION("solving the qubit splitting for a target ratio") {
        const auto s = run_cli("dispersion --config \"" + fig3() +
                               "\" --format json --solve-nu-q-for-ratio 0.02");
        REQUIRE(s.exit_code == 0);
        const json with_ratio = json::parse(s.out);
        const double nu_q = with_ratio["nu_q_for_ratio_GHz"].get<double>();
        const double nu_s = with_ratio["nu_s_GHz"].get<double>();
        const double g = 0.25 * 0.25 * (1.0 / (nu_q - nu_s) + 1.0 / (nu_q + nu_s));
        CHECK(g / nu_s == Approx(0.02).margin(1e-10));
    }
}

TEST_CASE("dispersion file output is deterministic") {
    const fs::path stem = work_dir() / "disp";
    const std::string args =
        "dispersion --config \"" + fig3() + "\" --points 32 --out \"" + stem.string() + "\"";
    REQUIRE(run_cli(args).exit_code == 0);
    const fs::path csv_path = stem.string() + ".csv";
    const fs::path json_path = stem.string() + ".json";
    const fs::path manifest_path = stem.string() + ".manifest.json";
    REQUIRE(fs::exists(csv_path));
    REQUIRE(fs::exists(json_path));
    REQUIRE(fs::exists(manifest_path));

    const std::string csv_first = slurp(csv_path);
    const std::string json_first = slurp(json_path);
    CHECK_THAT(csv_first, ContainsSubstring("k,E_full_GHz"));
    CHECK_THAT(csv_first, !ContainsSubstring("generated_at"));
    CHECK_THAT(json_first, !ContainsSubstring("generated_at"));

    const json manifest = json::parse(slurp(manifest_path));
    CHECK(manifest["command"] == "dispersion");
    CHECK(manifest["version"] == "1.0.0");
    CHECK(manifest["format"] == "both");
    CHECK(manifest["config_path"].get<std::string>() == fig3());
    CHECK(manifest["parameters"]["sites"] == 64);
    CHECK(manifest["parameters"]["points"] == 32);
    CHECK(manifest["chain"].contains("qubits"));
    CHECK(manifest["chain"].contains("couplings"));
    const auto outputs = manifest["outputs"].get<std::vector<std::string>>();
    REQUIRE(outputs.size() == 2);
    CHECK_THAT(outputs[0], ContainsSubstring("disp.csv"));
    CHECK_THAT(outputs[1], ContainsSubstring("disp.json"));
    const auto stamp = manifest["generated_at"].get<std::string>();
    REQUIRE(stamp.size() == 20);
    CHECK(stamp[4] == '-');
    CHECK(stamp[10] == 'T');
    CHECK(stamp[19] == 'Z');

    // reruns and thread-count changes must not alter the data bytes
    REQUIRE(run_cli(args).exit_code == 0);
    CHECK(slurp(csv_path) == csv_first);
    CHECK(slurp(json_path) == json_first);
    REQUIRE(run_cli(args, "HYBRIDLATTICE_THREADS=1 ").exit_code == 0);
    CHECK(slurp(csv_path) == csv_first);
    CHECK(slurp(json_path) == json_first);
}

// ---- validate ----

TEST_CASE("validation suite passes on the shipped chain") {
    const auto r = run_cli("validate --config \"" + fig3() + "\"");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["residual"].get<double>() < 1e-12);
    CHECK(doc["deviation_GHz"].get<double>() == Approx(0.0014581791587928716).epsilon(1e-8));
    CHECK(doc["scaling_ratio"].get<double>() == Approx(16.953950896776618).epsilon(1e-8));
    REQUIRE(doc["checks"].size() == 5);
    for (const auto& check : doc["checks"]) {
        CHECK(check.contains("name"));
        CHECK(check["passed"].get<bool>());
    }

    SECTION("a hopeless truncation is reported as failure") {
        const auto bad = run_cli("validate --config \"" + fig3() + "\" --cutoff 2");
        CHECK(bad.exit_code == 5);
        const json doc_bad = json::parse(bad.out);
        CHECK_FALSE(doc_bad["passed"].get<bool>());
    }
    SECTION("the randomized draws are reseedable") {
        CHECK(run_cli("validate --config \"" + fig3() + "\" --seed 7").exit_code == 0);
    }
}

// ---- failure modes ----

TEST_CASE("resonant chains exit with the resonance code") {
    const auto path = variant_config("resonant", [](json& config) {
        for (auto& q : config["qubits"]) q["tunneling_energy_GHz"] = 1.0;
    });
    const auto r = run_cli("effective-params --config \"" + path + "\"");
    CHECK(r.exit_code == 3);
    CHECK_THAT(r.err, ContainsSubstring("resonant pair"));
}

TEST_CASE("unstable lattices exit with the stability code") {
    const auto path = variant_config("unstable", [](json& config) {
        for (auto& e : config["ensembles"]) e["external_field_T"] = 0.098818498914323594;
    });
    const auto r = run_cli("dispersion --config \"" + path + "\" --format json");
    CHECK(r.exit_code == 4);
    CHECK_THAT(r.err, ContainsSubstring("unstable"));

    SECTION("the trimmed scan is opt-in") {
        const auto trimmed = run_cli("dispersion --config \"" + path +
                                     "\" --format json --allow-unstable");
        REQUIRE(trimmed.exit_code == 0);
        const json doc = json::parse(trimmed.out);
        CHECK_FALSE(doc["stable"].get<bool>());
        CHECK(doc["gap_GHz"].is_null());
        CHECK(doc["E_g_GHz"].is_null());
        REQUIRE(doc.contains("unstable_k_range"));
        CHECK(doc["unstable_k_range"][0].get<double>() == 0.0);
        CHECK(doc["unstable_k_range"][1].get<double>() == Approx(1.3697786011079265).epsilon(1e-9));
        REQUIRE_FALSE(doc["warnings"].empty());
        CHECK_THAT(doc["warnings"][0].get<std::string>(), ContainsSubstring("omitted"));
    }
}

// ---- stability-scan ----

TEST_CASE("stability scan sweeps either g or the collective coupling") {
    const auto r = run_cli("stability-scan --config \"" + fig3() + "\" --g-range 0:0.2:5");
    REQUIRE(r.exit_code == 0);
    CHECK(split_csv_line(r.out, 0) ==
          std::vector<std::string>{"nu_s_GHz", "g_GHz", "stable", "gap_GHz", "B_crit_T"});
    CHECK(count_lines(r.out) == 6);

    const auto first = split_csv_line(r.out, 1);
    REQUIRE(first.size() == 5);
    CHECK(std::stod(first[1]) == 0.0);
    CHECK(first[2] == "1");
    CHECK(std::stod(first[3]) == Approx(1.0).margin(1e-9));
    CHECK(std::stod(first[4]) == Approx(0.10238595374877571).epsilon(1e-12));

    const auto last = split_csv_line(r.out, 5);
    CHECK(std::stod(last[1]) == 0.2);
    CHECK(last[2] == "0");
    CHECK(last[3].empty());  // no gap for an unstable row

    SECTION("coupling sweep derives g from the chain's detunings") {
        const auto j = run_cli("stability-scan --config \"" + fig3() +
                               "\" --nus-range 0.5:1:2 --J-range 0.25:0.25:1");
        REQUIRE(j.exit_code == 0);
        CHECK(count_lines(j.out) == 3);
        CHECK(std::stod(split_csv_line(j.out, 1)[1]) ==
              Approx(0.02097902097902098).epsilon(1e-12));
        CHECK(std::stod(split_csv_line(j.out, 2)[1]) ==
              Approx(3.0 / 140.0).epsilon(1e-12));
    }
    SECTION("exactly one sweep axis") {
        CHECK(run_cli("stability-scan --config \"" + fig3() + "\"").exit_code == 2);
        CHECK(run_cli("stability-scan --config \"" + fig3() +
                      "\" --g-range 0:0.1:2 --J-range 0:0.1:2")
                  .exit_code == 2);
    }
    SECTION("range syntax is validated") {
        CHECK(run_cli("stability-scan --config \"" + fig3() + "\" --g-range 0:0.1").exit_code == 2);
        CHECK(run_cli("stability-scan --config \"" + fig3() + "\" --g-range 0.2:0.1:3").exit_code == 2);
        CHECK(run_cli("stability-scan --config \"" + fig3() + "\" --g-range 0:0.1:0").exit_code == 2);
    }
}
