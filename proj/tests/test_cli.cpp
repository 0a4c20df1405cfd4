// Config boundary and CLI behavior: JSON parsing/serialization round trips,
// unit conversion, validation messages, CSV formatting guarantees, and smoke
// runs of the installed subcommands via the built binary.

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"

#include "rdr/config.hpp"
#include "rdr/hilbert.hpp"
#include "rdr/io.hpp"
#include "rdr/protocols.hpp"

using namespace rdr;

namespace {

std::string minimal_thermal_config() {
    return R"({
  "version": 1,
  "experiment": "thermal_reset",
  "seed": 42,
  "drives": {"abar_m": 2.0, "abar_r": 0.6}
})";
}

struct TempDir {
    std::filesystem::path path;
    TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("rdr_cli_" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RDR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("defaults match the device table") {
    RunConfig cfg = parse_config(minimal_thermal_config());
    CHECK(cfg.boundary.chi_m_hz == 28500.0);
    CHECK(cfg.boundary.chi_r_hz == 317500.0);
    CHECK(cfg.boundary.kappa_r_hz == 382000.0);
    CHECK(cfg.boundary.memory_lifetime_s == doctest::Approx(170e-6));
    CHECK(cfg.params.chi_m == doctest::Approx(kTwoPi * 0.0285));
    CHECK(cfg.params.chi_r == doctest::Approx(kTwoPi * 0.3175));
    CHECK(cfg.params.kappa_r == doctest::Approx(kTwoPi * 0.382));
    CHECK(cfg.params.kappa_m == doctest::Approx(1.0 / 170.0));
    CHECK(cfg.params.t1_q == doctest::Approx(25.0));
    CHECK(cfg.params.t2_echo_q == doctest::Approx(20.0));
    CHECK(cfg.params.omega_rabi == doctest::Approx(kTwoPi * 9.0));
    CHECK(cfg.seed == 42);
    CHECK(cfg.tol == 1e-8);
    CHECK(cfg.workers == 1);
    CHECK(cfg.t_final_us() == doctest::Approx(80.0));
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    const std::string text = R"({
  "version": 1,
  "experiment": "coupling_sweep",
  "seed": 99,
  "tol": 1e-6,
  "workers": 3,
  "output_dir": "results",
  "parameters": {"chi_m_hz": 30000, "dim_memory": 12, "dim_readout": 4},
  "drives": {"abar_r": 0.7},
  "experiment_options": {
    "t_final_s": 2e-05,
    "n_times": 9,
    "nbar_initial": 5.0,
    "n_displacement_samples": 100,
    "sweep_fractions": [0.25, 0.5, 1.0]
  }
})";
    RunConfig a = parse_config(text);
    const std::string round = serialize_config(a);
    RunConfig b = parse_config(round);
    CHECK(serialize_config(b) == round);
    CHECK(b.boundary.chi_m_hz == 30000.0);
    CHECK(b.boundary.dim_memory == 12);
    CHECK(b.seed == 99);
    CHECK(b.workers == 3);
    CHECK(b.sweep_fractions.size() == 3);
    CHECK(b.output_dir == "results");
}

TEST_CASE("unknown keys are rejected with their path") {
    const std::string bad = R"({
  "version": 1,
  "experiment": "thermal_reset",
  "drives": {"abar_m": 1.0, "abar_q": 2.0}
})";
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("drives.abar_q"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "thermal_reset",
                                          "drives": {"abar_m": 1}, "extra": 1})"),
                         doctest::Contains("extra"), std::invalid_argument);
}

TEST_CASE("drive family conflicts and missing drives are diagnosed") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "thermal_reset",
        "drives": {"abar_m": 1.0, "eps_m_hz": 500000}})"),
                         doctest::Contains("drives"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "thermal_reset",
        "drives": {"abar_m": 1.0, "abar_m_over_kappa_chi": 0.5}})"),
                         doctest::Contains("drives"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "thermal_reset"})"),
                         doctest::Contains("drives"), std::invalid_argument);
}

TEST_CASE("fractional coupling resolves against kappa_r / chi_m") {
    RunConfig cfg = parse_config(R"({
  "version": 1,
  "experiment": "thermal_reset",
  "drives": {"abar_m_over_kappa_chi": 0.5}
})");
    // abar_m chi_m = kappa_r / 2 at the matched point
    CHECK(cfg.drives.resolve_abar_m(cfg.params) ==
          doctest::Approx(0.5 * cfg.params.kappa_r / cfg.params.chi_m));
    CHECK(cfg.drives.resolve_abar_m(cfg.params) == doctest::Approx(6.70175).epsilon(1e-4));
    // readout amplitude unspecified -> matched fallback downstream
    CHECK(cfg.drives.resolve_abar_r(cfg.params) <= 0.0);
}

TEST_CASE("per-kind required fields") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "coupling_sweep",
        "drives": {"abar_r": 0.6}})"),
                         doctest::Contains("sweep_fractions"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "driven_ramsey"})"),
                         doctest::Contains("settings"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "driven_ramsey",
        "experiment_options": {"settings": [0.5, 1.0]}})"),
                         doctest::Contains("true_scale_hz"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"version": 1, "experiment": "nonsense",
        "drives": {"abar_m": 1}})"),
                         doctest::Contains("experiment"), std::invalid_argument);
}

TEST_CASE("format_double round-trips and to_csv validates width") {
    for (double v : {0.1, 1.0 / 3.0, 6.283185307179586, 1e-300, -42.5, 0.0}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(to_csv({"a", "b"}, {{1.0, 2.0}}) == "a,b\n1,2\n");
    CHECK_THROWS_AS(to_csv({"a", "b"}, {{1.0}}), std::runtime_error);
    auto [x, y] = parse_xy_csv("t,n\n0,1.5\n1,0.75\n");
    CHECK(x.size() == 2);
    CHECK(y[1] == 0.75);
    CHECK_THROWS_AS(parse_xy_csv("t,n\n0,oops\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_xy_csv(""), std::runtime_error);
}

TEST_CASE("fixed seed makes thermal CSV rows byte-identical") {
    ThermalResetConfig tc;
    tc.params = SystemParams::paper_defaults(8, 3);
    tc.nbar_initial = 0.8;
    tc.n_displacement_samples = 60;
    tc.seed = 1234;
    tc.t_final = 4.0;
    tc.n_times = 5;
    tc.dim_readout = 3;
    tc.tomo_points = 21;
    auto render = [&] {
        auto res = run_thermal_reset(tc);
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < res.times.size(); ++i)
            rows.push_back({res.times[i], res.nbar_direct[i], res.nbar_tomography[i]});
        return to_csv({"t", "nd", "nt"}, rows);
    };
    const std::string first = render();
    CHECK(render() == first);  // byte-for-byte
    tc.seed = 1235;
    CHECK(render() != first);  // and actually seed-sensitive
}

TEST_CASE("CLI smoke: simulate writes manifest, summary and CSV reproducibly") {
    TempDir dir("sim");
    const std::string config = R"({
  "version": 1,
  "experiment": "thermal_reset",
  "seed": 7,
  "parameters": {"dim_memory": 8, "dim_readout": 3},
  "drives": {"abar_m_over_kappa_chi": 0.5},
  "experiment_options": {
    "t_final_s": 4e-06,
    "n_times": 5,
    "nbar_initial": 0.8,
    "n_displacement_samples": 60
  }
})";
    write_text_file(dir.file("cfg.json"), config);
    REQUIRE(run_cli("simulate --config " + dir.file("cfg.json") + " --out " +
                    dir.file("a")) == 0);
    REQUIRE(run_cli("simulate --config " + dir.file("cfg.json") + " --out " +
                    dir.file("b")) == 0);
    CHECK(std::filesystem::exists(dir.file("a") + "/manifest.json"));
    CHECK(std::filesystem::exists(dir.file("a") + "/summary.json"));
    const std::string csv_a = read_text_file(dir.file("a") + "/thermal_reset.csv");
    CHECK(csv_a == read_text_file(dir.file("b") + "/thermal_reset.csv"));
    CHECK(csv_a.substr(0, csv_a.find('\n')) ==
          "time_us,nbar_direct,nbar_tomography,nbar_uncertainty");
    // seed override changes the sampled mixture
    REQUIRE(run_cli("simulate --config " + dir.file("cfg.json") + " --seed 8 --out " +
                    dir.file("c")) == 0);
    CHECK(csv_a != read_text_file(dir.file("c") + "/thermal_reset.csv"));
}

TEST_CASE("CLI smoke: fit and tomo on synthetic CSVs") {
    TempDir dir("fit");
    // piecewise curve with the crossover at t0 = 3
    std::vector<std::vector<double>> rows;
    const double A = 0.1, B = 1.2, g = 0.5, t0 = 3.0;
    for (int i = 0; i < 30; ++i) {
        const double t = 0.4 * i;
        const double n = t < t0 ? A + B + B * g * (t0 - t) : A + B * std::exp(-g * (t - t0));
        rows.push_back({t, n});
    }
    write_text_file(dir.file("curve.csv"), to_csv({"time_us", "nbar"}, rows));
    REQUIRE(run_cli("fit --in " + dir.file("curve.csv") + " --out " + dir.file("out")) == 0);
    const std::string report = read_text_file(dir.file("out") + "/summary.json");
    CHECK(report.find("\"max_rate\"") != std::string::npos);

    // thermal characteristic samples with nbar = 0.7
    std::vector<std::vector<double>> cs;
    for (int i = -15; i <= 15; ++i) {
        const double a = 0.1 * i;
        const double c = std::exp(-(0.7 + 0.5) * a * a);
        cs.push_back({a, 0.0, c, 0.0});
        cs.push_back({0.0, a, c, 0.0});
    }
    write_text_file(dir.file("char.csv"), to_csv({"re_alpha", "im_alpha", "re_C", "im_C"}, cs));
    REQUIRE(run_cli("tomo --in " + dir.file("char.csv") + " --out " + dir.file("out2")) == 0);
    const std::string tomo = read_text_file(dir.file("out2") + "/summary.json");
    CHECK(tomo.find("\"nbar\"") != std::string::npos);
}

TEST_CASE("CLI errors: bad config and missing input exit nonzero") {
    TempDir dir("err");
    write_text_file(dir.file("bad.json"), "{\"version\": 1}");
    CHECK(run_cli("simulate --config " + dir.file("bad.json")) != 0);
    CHECK(run_cli("tomo --in " + dir.file("absent.csv")) != 0);
    CHECK(run_cli("simulate") != 0);  // --config is required
}
