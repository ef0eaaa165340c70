#include "adiapower/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace adiapower;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir() {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("adiapower_cli_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

fs::path write_config_file(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long count_lines(const std::string& text) {
    long n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

// Fields of the (1-based) `row`-th line of a CSV body.
std::vector<std::string> csv_row(const std::string& csv, int row) {
    std::istringstream in(csv);
    std::string line;
    for (int i = 0; i <= row; ++i) REQUIRE(std::getline(in, line));
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    return fields;
}

// Number printed directly after `prefix` in `text`.
double value_after(const std::string& text, const std::string& prefix) {
    const auto pos = text.find(prefix);
    REQUIRE_MESSAGE(pos != std::string::npos, "missing \"" << prefix << "\" in: " << text);
    return std::strtod(text.c_str() + pos + prefix.size(), nullptr);
}

const std::string kChirpLossless = R"({
    "schedule": {"variant": "linear_chirp", "kappa0": 4e4, "delta": 2e5,
                 "beta": 3e9, "t0": 1e-4},
    "t_end": 2e-4
})";

const std::string kChirpLossy = R"({
    "schedule": {"variant": "linear_chirp", "kappa0": 4e4, "delta": 2e5,
                 "beta": 3e9, "t0": 1e-4},
    "losses": {"gamma_S": 2e3, "gamma_D": 2e3, "gamma_W": 0.0},
    "t_end": 2e-4
})";

} // namespace

TEST_CASE("simulate: chirped lossless run end to end") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, kChirpLossless);
    const CliResult r = run_cli({"simulate", cfg.string(), "--out", (dir / "out").string()});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(r.err.empty());

    CHECK(value_after(r.out, "final E_D = ") == doctest::Approx(0.9784).epsilon(2e-3));
    CHECK(value_after(r.out, "final E_S = ") == doctest::Approx(0.0216).epsilon(0.1));
    CHECK(r.out.find("eta = undefined (gamma_W = 0)") != std::string::npos);
    CHECK(value_after(r.out, "r_max = ") == doctest::Approx(0.2344).epsilon(5e-3));
    CHECK(value_after(r.out, " at t = ") == doctest::Approx(3.333e-5).epsilon(1e-2));
    CHECK(r.out.find("-> satisfied") != std::string::npos);

    const std::string csv = read_file(dir / "out" / "trajectory.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "t,re_aS,im_aS,re_aD,im_aD,E_S,E_D,kappa,delta,theta,epsilon,r,acc_S,acc_D");
    CHECK(count_lines(csv) == 2002);
    CHECK_FALSE(fs::exists(dir / "out" / "trajectory.svg"));
    fs::remove_all(dir);
}

TEST_CASE("simulate: --svg adds the plot file") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, kChirpLossless);
    const CliResult r =
        run_cli({"simulate", cfg.string(), "--out", dir.string(), "--svg"});
    CHECK(r.exit_code == cli::kExitOk);
    const std::string svg = read_file(dir / "trajectory.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(r.out.find("trajectory.svg") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("simulate: extraction produces a numeric efficiency") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, R"({
        "schedule": {"variant": "linear_chirp", "kappa0": 4e4, "delta": 2e5,
                     "beta": 3e9, "t0": 1e-4},
        "losses": {"gamma_S": 2e3, "gamma_D": 2e3, "gamma_W": 1e4},
        "t_end": 2e-4
    })");
    const CliResult r = run_cli({"simulate", cfg.string(), "--out", dir.string()});
    CHECK(r.exit_code == cli::kExitOk);
    const double eta = value_after(r.out, "eta = ");
    CHECK(eta > 0.0);
    CHECK(eta < 1.0);
    CHECK(value_after(r.out, "useful_energy = ") > 0.0);
    fs::remove_all(dir);
}

TEST_CASE("simulate: diagnostics can be switched off") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, R"({
        "schedule": {"variant": "linear_chirp", "kappa0": 4e4, "delta": 2e5,
                     "beta": 3e9, "t0": 1e-4},
        "t_end": 2e-4,
        "output": {"emit_diagnostics": false}
    })");
    const CliResult r = run_cli({"simulate", cfg.string(), "--out", dir.string()});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(r.out.find("r_max") == std::string::npos);
    CHECK(r.out.find("hierarchy") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("simulate: repeated runs emit identical bytes") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, kChirpLossy);
    REQUIRE(run_cli({"simulate", cfg.string(), "--out", (dir / "a").string()}).exit_code == 0);
    REQUIRE(run_cli({"simulate", cfg.string(), "--out", (dir / "b").string()}).exit_code == 0);
    CHECK(read_file(dir / "a" / "trajectory.csv") == read_file(dir / "b" / "trajectory.csv"));
    fs::remove_all(dir);
}

TEST_CASE("simulate: failure exit codes") {
    const fs::path dir = fresh_dir();
    SUBCASE("missing config file") {
        const CliResult r = run_cli({"simulate", (dir / "nope.json").string()});
        CHECK(r.exit_code == cli::kExitConfigError);
        CHECK(r.err.find("config error:") != std::string::npos);
    }
    SUBCASE("unknown key") {
        const fs::path cfg = write_config_file(dir, R"({
            "schedule": {"variant": "static", "kappa0": 4e4}, "t_end": 1e-4, "oops": 1})");
        const CliResult r = run_cli({"simulate", cfg.string()});
        CHECK(r.exit_code == cli::kExitConfigError);
        CHECK(r.err.find("\"oops\"") != std::string::npos);
    }
    SUBCASE("empty window") {
        const fs::path cfg = write_config_file(dir, R"({
            "schedule": {"variant": "static", "kappa0": 4e4}, "t_end": 0.0})");
        CHECK(run_cli({"simulate", cfg.string()}).exit_code == cli::kExitConfigError);
    }
    SUBCASE("unresolvable dynamics") {
        const fs::path cfg = write_config_file(dir, R"({
            "schedule": {"variant": "static", "kappa0": 1e308}, "t_end": 1.0})");
        const CliResult r = run_cli({"simulate", cfg.string(), "--out", dir.string()});
        CHECK(r.exit_code == cli::kExitSolverFailure);
        CHECK(r.err.find("solver failure at t = ") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("sweep: default detuning study") {
    const fs::path dir = fresh_dir();
    const CliResult r = run_cli({"sweep", "fig4-near", "--out", dir.string()});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(r.out.find("(81 rows)") != std::string::npos);
    const std::string csv = read_file(dir / "fig4-near.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "delta,eta_ap,eta_static,useful_ap,useful_static");
    CHECK(count_lines(csv) == 82);
    CHECK(csv.find("\n-2e+05,") != std::string::npos);
    CHECK(csv.find("\n2e+05,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweep: grid overrides change the axis") {
    const fs::path dir = fresh_dir();
    const CliResult r = run_cli({"sweep", "fig4-far", "--out", dir.string(), "--grid-min",
                                 "-1e5", "--grid-max", "1e5", "--grid-n", "11"});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(r.out.find("(11 rows)") != std::string::npos);
    const std::string csv = read_file(dir / "fig4-far.csv");
    CHECK(count_lines(csv) == 12);
    CHECK(csv.find("\n-1e+05,") != std::string::npos);
    CHECK(csv.find("\n1e+05,") != std::string::npos);
    CHECK(csv.find("\n-2e+05,") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweep: robustness study with a reduced coupling axis") {
    const fs::path dir = fresh_dir();
    const CliResult r =
        run_cli({"sweep", "fig5", "--out", dir.string(), "--grid-n", "3"});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(r.out.find("(123 rows)") != std::string::npos); // 3 x 41
    const std::string csv = read_file(dir / "fig5.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "kappa0,gamma,eta_ap,eta_static");
    CHECK(count_lines(csv) == 124);
    CHECK(csv.find("\n10000,100,") != std::string::npos); // first grid point
    fs::remove_all(dir);
}

TEST_CASE("sweep: unknown study name") {
    const CliResult r = run_cli({"sweep", "fig9"});
    CHECK(r.exit_code == cli::kExitConfigError);
    CHECK(r.err.find("unknown study \"fig9\"") != std::string::npos);
}

TEST_CASE("diagnose: healthy chirped schedule") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, kChirpLossy);
    const CliResult r = run_cli({"diagnose", cfg.string()});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(value_after(r.out, "r_max = ") == doctest::Approx(0.2344).epsilon(5e-3));
    CHECK(value_after(r.out, " at t = ") == doctest::Approx(3.3333e-5).epsilon(3e-3));
    CHECK(value_after(r.out, "resonance crossing at t = ") ==
          doctest::Approx(3.3333e-5).epsilon(1e-6));
    CHECK(r.out.find("-> satisfied") != std::string::npos);
    CHECK(r.out.find("adiabaticity: ok") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("diagnose: resonant static schedule is marginal") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, R"({
        "schedule": {"variant": "static", "kappa0": 4e4},
        "losses": {"gamma_S": 2e3, "gamma_D": 2e3, "gamma_W": 0.0},
        "t_end": 2e-4
    })");
    const CliResult r = run_cli({"diagnose", cfg.string()});
    CHECK(r.exit_code == cli::kExitMarginal);
    CHECK(r.out.find("no resonance crossing") != std::string::npos);
    CHECK(r.out.find("-> violated") != std::string::npos);
    CHECK(r.out.find("adiabaticity: marginal") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("diagnose: loss rate above the coupling is marginal") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, R"({
        "schedule": {"variant": "linear_chirp", "kappa0": 4e4, "delta": 2e5,
                     "beta": 3e9, "t0": 1e-4},
        "losses": {"gamma_S": 5e4, "gamma_D": 2e3, "gamma_W": 0.0},
        "t_end": 2e-4
    })");
    const CliResult r = run_cli({"diagnose", cfg.string()});
    CHECK(r.exit_code == cli::kExitMarginal);
    CHECK(r.out.find("!< kappa0") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("diagnose: fast sweep rate is marginal despite a healthy hierarchy") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, R"({
        "schedule": {"variant": "linear_chirp", "kappa0": 2e4, "delta": 2e5,
                     "beta": 1e10, "t0": 1e-4},
        "losses": {"gamma_S": 2e3, "gamma_D": 2e3, "gamma_W": 0.0},
        "t_end": 2e-4
    })");
    const CliResult r = run_cli({"diagnose", cfg.string()});
    CHECK(r.exit_code == cli::kExitMarginal);
    CHECK(r.out.find("-> satisfied") != std::string::npos);
    CHECK(value_after(r.out, "r_max = ") == doctest::Approx(3.125).epsilon(1e-2));
    CHECK(r.out.find("adiabaticity: marginal") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cycles: cyclic config with repeated recharges") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, R"({
        "schedule": {"variant": "cyclic", "period": 5e-4,
                     "inner": {"variant": "linear_chirp", "kappa0": 4e4,
                               "delta": 2e5, "beta": 3e9, "t0": 1e-4}},
        "losses": {"gamma_S": 2e3, "gamma_D": 2e3, "gamma_W": 1e4},
        "t_end": 5e-4, "sample_count": 501
    })");
    const CliResult r = run_cli({"cycles", cfg.string(), "--n", "3", "--out", dir.string()});
    CHECK(r.exit_code == cli::kExitOk);
    CHECK(r.out.find("cycles = 3") != std::string::npos);
    CHECK(value_after(r.out, "period = ") == 5e-4);
    CHECK(value_after(r.out, "eta = ") == doctest::Approx(0.7467).epsilon(3e-3));

    const std::string csv = read_file(dir / "cycles.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "cycle,t_start,t_end,injected,acc_S_delta,acc_D_delta,useful,eta");
    CHECK(count_lines(csv) == 4);
    const std::vector<std::string> first = csv_row(csv, 1);
    REQUIRE(first.size() == 8);
    CHECK(first[0] == "0");
    CHECK(first[1] == "0");
    CHECK(std::strtod(first[2].c_str(), nullptr) == 5e-4);
    CHECK(std::strtod(first[3].c_str(), nullptr) == 1.0); // fresh source charge
    CHECK(std::strtod(first[7].c_str(), nullptr) == doctest::Approx(0.7467).epsilon(3e-3));
    const std::vector<std::string> last = csv_row(csv, 3);
    CHECK(last[0] == "2");
    CHECK(std::strtod(last[2].c_str(), nullptr) == doctest::Approx(1.5e-3).epsilon(1e-12));
    CHECK(fs::exists(dir / "trajectory.csv"));
    const std::string traj = read_file(dir / "trajectory.csv");
    CHECK(count_lines(traj) == 3 * 500 + 1 + 1); // samples plus header
    fs::remove_all(dir);
}

TEST_CASE("cycles: --trep wraps a plain schedule or overrides the period") {
    const fs::path dir = fresh_dir();
    SUBCASE("plain schedule requires --trep") {
        const fs::path cfg = write_config_file(dir, kChirpLossy);
        const CliResult bare = run_cli({"cycles", cfg.string(), "--n", "2"});
        CHECK(bare.exit_code == cli::kExitConfigError);
        CHECK(bare.err.find("--trep") != std::string::npos);
        const CliResult wrapped = run_cli(
            {"cycles", cfg.string(), "--n", "2", "--trep", "5e-4", "--out", dir.string()});
        CHECK(wrapped.exit_code == cli::kExitOk);
        CHECK(value_after(wrapped.out, "period = ") == 5e-4);
        CHECK(count_lines(read_file(dir / "cycles.csv")) == 3);
    }
    SUBCASE("cyclic schedule period can be overridden") {
        const fs::path cfg = write_config_file(dir, R"({
            "schedule": {"variant": "cyclic", "period": 2e-4,
                         "inner": {"variant": "linear_chirp", "kappa0": 4e4,
                                   "delta": 2e5, "beta": 3e9, "t0": 1e-4}},
            "t_end": 2e-4
        })");
        const CliResult r = run_cli(
            {"cycles", cfg.string(), "--n", "1", "--trep", "6e-4", "--out", dir.string()});
        CHECK(r.exit_code == cli::kExitOk);
        CHECK(value_after(r.out, "period = ") == 6e-4);
    }
    fs::remove_all(dir);
}

TEST_CASE("cycles: argument validation") {
    const fs::path dir = fresh_dir();
    const fs::path cfg = write_config_file(dir, kChirpLossy);
    CHECK(run_cli({"cycles", cfg.string(), "--n", "0", "--trep", "5e-4"}).exit_code ==
          cli::kExitConfigError);
    CHECK(run_cli({"cycles", cfg.string(), "--trep", "5e-4"}).exit_code ==
          cli::kExitConfigError); // --n is required
    const fs::path shifted = dir / "shifted.json";
    std::ofstream(shifted) << R"({
        "schedule": {"variant": "linear_chirp", "kappa0": 4e4, "delta": 2e5,
                     "beta": 3e9, "t0": 1e-4},
        "t_start": 1e-5, "t_end": 2e-4
    })";
    const CliResult r =
        run_cli({"cycles", shifted.string(), "--n", "2", "--trep", "5e-4"});
    CHECK(r.exit_code == cli::kExitConfigError);
    CHECK(r.err.find("t_start") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("top-level parsing") {
    SUBCASE("help exits cleanly") {
        const CliResult r = run_cli({"--help"});
        CHECK(r.exit_code == cli::kExitOk);
        CHECK(r.out.find("simulate") != std::string::npos);
        CHECK(r.out.find("sweep") != std::string::npos);
        CHECK(r.out.find("diagnose") != std::string::npos);
        CHECK(r.out.find("cycles") != std::string::npos);
    }
    SUBCASE("a subcommand is required") {
        CHECK(run_cli({}).exit_code == cli::kExitConfigError);
    }
    SUBCASE("unknown flags are rejected") {
        CHECK(run_cli({"simulate", "x.json", "--frobnicate"}).exit_code ==
              cli::kExitConfigError);
    }
}
