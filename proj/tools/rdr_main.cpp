// rdr: command-line front end for the Rabi-driven reset engine.
//
// Subcommands:
//   simulate   run an experiment described by a JSON config and write CSVs
//   calibrate  driven-Ramsey sideband calibration (simulated or from a CSV)
//   tomo       occupation estimate from a characteristic-function sample CSV
//   fit        piecewise linear-exponential fit of a cooling curve CSV
//
// Every run writes a manifest.json echoing the fully-resolved configuration
// (seed, tolerance, workers included) so outputs are attributable and
// reproducible. Failures emit a JSON error record on stderr and exit nonzero.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rdr/analysis.hpp"
#include "rdr/config.hpp"
#include "rdr/io.hpp"
#include "rdr/protocols.hpp"
#include "rdr/tomography.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string input_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> tol;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "JSON run configuration");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config and RDR_OUT)");
    cmd->add_option("--seed", flags.seed, "RNG seed override");
    cmd->add_option("--workers", flags.workers, "worker threads (overrides config and RDR_WORKERS)");
    cmd->add_option("--tol", flags.tol, "integrator relative tolerance override");
}

// Precedence: CLI flag > environment variable > config value.
void apply_overrides(rdr::RunConfig& cfg, const CommonFlags& flags) {
    if (const char* env = std::getenv("RDR_OUT")) cfg.output_dir = env;
    if (const char* env = std::getenv("RDR_WORKERS")) cfg.workers = std::stoi(env);
    if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
    if (flags.workers) cfg.workers = *flags.workers;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.tol) cfg.tol = *flags.tol;
    if (cfg.workers < 1) throw std::runtime_error("workers must be >= 1");
    if (cfg.tol <= 0) throw std::runtime_error("tol must be > 0");
}

rdr::RunConfig load_config(const CommonFlags& flags) {
    rdr::RunConfig cfg = rdr::parse_config(rdr::read_text_file(flags.config_path));
    apply_overrides(cfg, flags);
    return cfg;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

void write_manifest(const std::filesystem::path& out, const std::string& command,
                    const rdr::RunConfig& cfg) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = json::parse(rdr::serialize_config(cfg));
    rdr::write_text_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
}

void write_summary(const std::filesystem::path& out, json summary,
                   const std::string& frame = "") {
    if (!frame.empty()) summary["frame"] = frame;
    const std::string text = summary.dump(2) + "\n";
    rdr::write_text_file((out / "summary.json").string(), text);
    std::cout << text;
}

rdr::ThermalResetConfig thermal_config(const rdr::RunConfig& cfg) {
    rdr::ThermalResetConfig tc;
    tc.params = cfg.params;
    tc.nbar_initial = cfg.nbar_initial;
    tc.n_displacement_samples = cfg.n_displacement_samples;
    tc.seed = cfg.seed;
    tc.bath_occupation = cfg.bath_occupation;
    tc.abar_m = cfg.drives.resolve_abar_m(cfg.params);
    tc.abar_r = cfg.drives.resolve_abar_r(cfg.params);
    tc.t_final = cfg.t_final_us();
    tc.n_times = cfg.n_times;
    tc.dim_readout = cfg.boundary.dim_readout;
    tc.rtol = cfg.tol;
    return tc;
}

json piecewise_json(const rdr::PiecewiseFit& fit) {
    return json{{"A", fit.A},
                {"B", fit.B},
                {"gamma", fit.gamma},
                {"t0", fit.t0},
                {"max_rate", fit.max_rate()},
                {"residual_norm", fit.residual_norm}};
}

int run_thermal(const rdr::RunConfig& cfg, const std::filesystem::path& out) {
    auto res = rdr::run_thermal_reset(thermal_config(cfg));
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < res.times.size(); ++i)
        rows.push_back({res.times[i], res.nbar_direct[i], res.nbar_tomography[i],
                        res.nbar_uncertainty[i]});
    rdr::write_text_file((out / "thermal_reset.csv").string(),
                         rdr::to_csv({"time_us", "nbar_direct", "nbar_tomography",
                                      "nbar_uncertainty"},
                                     rows));
    json summary{{"nbar_final", res.nbar_final},
                 {"time_below_0p1_us", res.time_below_0p1},
                 {"max_cooling_rate", res.max_cooling_rate()},
                 {"free_decay_time_to_same_us", res.free_decay_time_to_same},
                 {"dim_memory", res.dim_memory},
                 {"reduced_dim", res.reduced_dim},
                 {"cooling_fit_ok", res.cooling_fit_ok}};
    if (res.cooling_fit_ok) summary["cooling_fit"] = piecewise_json(res.cooling_fit);
    write_summary(out, summary, "displaced_dressed");
    return 0;
}

int run_sweep(const rdr::RunConfig& cfg, const std::filesystem::path& out) {
    const rdr::ThermalResetConfig base = thermal_config(cfg);
    std::vector<double> couplings;
    for (double f : cfg.sweep_fractions) {
        if (f <= 0) throw std::runtime_error("sweep fractions must be > 0");
        couplings.push_back(f * cfg.params.kappa_r);
    }
    std::vector<rdr::CoolingRatePoint> points(couplings.size());
    // Deterministic: each index owns one coupling regardless of thread count.
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < couplings.size(); i = next.fetch_add(1)) {
            rdr::ThermalResetConfig c = base;
            c.abar_m = couplings[i] / cfg.params.chi_m;
            auto res = rdr::run_thermal_reset(c);
            points[i] = {couplings[i], res.max_cooling_rate()};
            std::vector<std::vector<double>> traj;
            for (size_t k = 0; k < res.times.size(); ++k)
                traj.push_back({res.times[k], res.nbar_direct[k], res.nbar_tomography[k]});
            rdr::write_text_file(
                (out / ("thermal_reset_" + std::to_string(i) + ".csv")).string(),
                rdr::to_csv({"time_us", "nbar_direct", "nbar_tomography"}, traj));
        }
    };
    const int n_threads = std::min<int>(cfg.workers, static_cast<int>(couplings.size()));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::vector<std::vector<double>> rows;
    size_t best = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        rows.push_back({cfg.sweep_fractions[i], points[i].coupling, points[i].max_rate});
        if (points[i].max_rate > points[best].max_rate) best = i;
    }
    rdr::write_text_file(
        (out / "cooling_sweep.csv").string(),
        rdr::to_csv({"fraction_of_kappa", "coupling_rad_per_us", "max_rate"}, rows));
    write_summary(out,
                  json{{"best_fraction", cfg.sweep_fractions[best]},
                       {"best_coupling", points[best].coupling},
                       {"best_rate", points[best].max_rate},
                       {"n_points", points.size()}},
                  "displaced_dressed");
    return 0;
}

int run_fock(const rdr::RunConfig& cfg, const std::filesystem::path& out) {
    auto res = rdr::run_fock_reset(cfg.params, cfg.drives.resolve_abar_m(cfg.params),
                                   cfg.drives.resolve_abar_r(cfg.params), cfg.t_final_us(),
                                   cfg.n_times, cfg.tol);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < res.times.size(); ++i)
        rows.push_back({res.times[i], res.nbar_m[i], res.vacuum_prob_m[i]});
    rdr::write_text_file((out / "fock_reset.csv").string(),
                         rdr::to_csv({"time_us", "nbar_m", "vacuum_prob_m"}, rows));
    write_summary(out, json{{"time_constant_us", res.time_constant},
                            {"speedup", res.speedup},
                            {"p0_rate", res.p0_fit.rate},
                            {"nbar_rate", res.nbar_fit.rate},
                            {"final_vacuum_prob",
                             res.final_state.rho.matrix()(0, 0).real()}},
                  "displaced_dressed");
    return 0;
}

int run_vacuum_rabi_cmd(const rdr::RunConfig& cfg, const std::filesystem::path& out) {
    const double abar_m = cfg.drives.resolve_abar_m(cfg.params);
    if (abar_m <= 0) throw std::runtime_error("vacuum_rabi requires a memory drive");
    auto res = rdr::run_vacuum_rabi(cfg.params, abar_m, cfg.t_final_us(), cfg.n_times, true,
                                    cfg.tol);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < res.times.size(); ++i)
        rows.push_back({res.times[i], res.dressed_sigma_z[i]});
    rdr::write_text_file((out / "vacuum_rabi.csv").string(),
                         rdr::to_csv({"time_us", "dressed_sigma_z"}, rows));
    write_summary(out,
                  json{{"abar_m", res.abar_m},
                       {"frequency_rad_per_us", res.frequency},
                       {"expected_frequency_rad_per_us", res.expected_frequency},
                       {"relative_error",
                        std::abs(res.frequency - res.expected_frequency) /
                            res.expected_frequency}},
                  "displaced_dressed");
    return 0;
}

int run_frame(const rdr::RunConfig& cfg, const std::filesystem::path& out) {
    const double abar_m = cfg.drives.resolve_abar_m(cfg.params);
    if (abar_m <= 0) throw std::runtime_error("frame_validation requires a memory drive");
    auto res = rdr::run_frame_validation(cfg.params, abar_m, cfg.t_final_us(), cfg.n_times,
                                         cfg.tol);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < res.times.size(); ++i)
        rows.push_back({res.times[i], res.fidelities[i]});
    rdr::write_text_file((out / "frame_validation.csv").string(),
                         rdr::to_csv({"time_us", "fidelity"}, rows));
    write_summary(out, json{{"min_fidelity", res.min_fidelity}}, "rotating_lab_vs_displaced");
    return 0;
}

json calibration_json(const rdr::StarkCalibration& cal) {
    json samples = json::array();
    for (const auto& s : cal.samples)
        samples.push_back(json{{"setting", s.setting},
                               {"shift", s.shift},
                               {"eps", s.eps},
                               {"excluded", s.excluded}});
    return json{{"scale", cal.scale},
                {"scale_std", std::sqrt(cal.scale_variance)},
                {"samples", samples}};
}

int run_ramsey(const rdr::RunConfig& cfg, const std::filesystem::path& out) {
    auto run = rdr::run_sideband_calibration(cfg.params, cfg.settings, cfg.true_scale(),
                                             cfg.t_final_us(), cfg.n_times, cfg.tol);
    std::vector<std::vector<double>> rows;
    for (const auto& p : run.points)
        rows.push_back({p.setting, p.frequency, p.measured_shift, p.predicted_shift});
    rdr::write_text_file((out / "calibration.csv").string(),
                         rdr::to_csv({"setting", "frequency_rad_per_us",
                                      "measured_shift_rad_per_us",
                                      "predicted_shift_rad_per_us"},
                                     rows));
    json summary = calibration_json(run.calibration);
    summary["true_scale"] = run.true_scale;
    summary["scale_relative_error"] =
        std::abs(run.calibration.scale - run.true_scale) / run.true_scale;
    write_summary(out, summary, "drive_frame");
    return 0;
}

int cmd_simulate(const CommonFlags& flags) {
    rdr::RunConfig cfg = load_config(flags);
    auto out = prepare_out_dir(cfg.output_dir);
    write_manifest(out, "simulate", cfg);
    switch (cfg.kind) {
        case rdr::ExperimentKind::ThermalReset: return run_thermal(cfg, out);
        case rdr::ExperimentKind::CouplingSweep: return run_sweep(cfg, out);
        case rdr::ExperimentKind::FockReset: return run_fock(cfg, out);
        case rdr::ExperimentKind::VacuumRabi: return run_vacuum_rabi_cmd(cfg, out);
        case rdr::ExperimentKind::FrameValidation: return run_frame(cfg, out);
        case rdr::ExperimentKind::DrivenRamsey: return run_ramsey(cfg, out);
    }
    throw std::runtime_error("unhandled experiment kind");
}

int cmd_calibrate(const CommonFlags& flags) {
    if (!flags.input_path.empty()) {
        // External shift data: columns (setting, shift in rad/us). Device
        // parameters come from the config when given, else the defaults.
        rdr::SystemParams params;
        std::string out_dir = "out";
        if (!flags.config_path.empty()) {
            rdr::RunConfig cfg = load_config(flags);
            params = cfg.params;
            out_dir = cfg.output_dir;
        } else {
            params = rdr::BoundaryParams{}.to_system_params();
            if (const char* env = std::getenv("RDR_OUT")) out_dir = env;
            if (!flags.out_dir.empty()) out_dir = flags.out_dir;
        }
        auto [settings, shifts] = rdr::parse_xy_csv(rdr::read_text_file(flags.input_path));
        std::vector<std::pair<double, double>> pairs;
        for (size_t i = 0; i < settings.size(); ++i) pairs.push_back({settings[i], shifts[i]});
        auto cal = rdr::calibrate_sideband(pairs, params.chi_r, params.omega_rabi,
                                           params.kappa_r);
        auto out = prepare_out_dir(out_dir);
        write_summary(out, calibration_json(cal), "drive_frame");
        return 0;
    }
    if (flags.config_path.empty())
        throw std::runtime_error("calibrate needs --config (simulated run) or --in (shift CSV)");
    rdr::RunConfig cfg = load_config(flags);
    if (cfg.kind != rdr::ExperimentKind::DrivenRamsey)
        throw std::runtime_error("calibrate expects a driven_ramsey config");
    auto out = prepare_out_dir(cfg.output_dir);
    write_manifest(out, "calibrate", cfg);
    return run_ramsey(cfg, out);
}

int cmd_tomo(const CommonFlags& flags) {
    auto samples = rdr::char_samples_from_csv(rdr::read_text_file(flags.input_path));
    auto est = rdr::extract_nbar(samples);
    std::string out_dir = !flags.out_dir.empty() ? flags.out_dir : "out";
    if (flags.out_dir.empty())
        if (const char* env = std::getenv("RDR_OUT")) out_dir = env;
    auto out = prepare_out_dir(out_dir);
    write_summary(out, json{{"nbar", est.nbar},
                            {"uncertainty", est.uncertainty},
                            {"points_kept", est.points_kept},
                            {"threshold", est.threshold_used},
                            {"residual", est.residual},
                            {"n_samples", samples.points.size()}},
                  "external_input");
    return 0;
}

int cmd_fit(const CommonFlags& flags) {
    auto [times, nbars] = rdr::parse_xy_csv(rdr::read_text_file(flags.input_path));
    auto fit = rdr::fit_piecewise_decay(times, nbars);
    std::string out_dir = !flags.out_dir.empty() ? flags.out_dir : "out";
    if (flags.out_dir.empty())
        if (const char* env = std::getenv("RDR_OUT")) out_dir = env;
    auto out = prepare_out_dir(out_dir);
    write_summary(out, piecewise_json(fit), "external_input");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rdr: Rabi-driven cavity reset simulation and analysis"};
    app.require_subcommand(1);

    CommonFlags sim_flags, cal_flags, tomo_flags, fit_flags;

    auto* simulate = app.add_subcommand("simulate", "run an experiment from a JSON config");
    add_common_flags(simulate, sim_flags, /*config_required=*/true);

    auto* calibrate = app.add_subcommand("calibrate", "sideband amplitude calibration");
    add_common_flags(calibrate, cal_flags, /*config_required=*/false);
    calibrate->add_option("--in", cal_flags.input_path, "CSV of (setting, shift) pairs");

    auto* tomo = app.add_subcommand("tomo", "occupation estimate from sampled C(alpha)");
    tomo->add_option("--in", tomo_flags.input_path, "characteristic-function CSV")->required();
    tomo->add_option("--out", tomo_flags.out_dir, "output directory");

    auto* fit = app.add_subcommand("fit", "piecewise cooling-curve fit");
    fit->add_option("--in", fit_flags.input_path, "CSV of (time_us, nbar) pairs")->required();
    fit->add_option("--out", fit_flags.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "simulate") return cmd_simulate(sim_flags);
        if (name == "calibrate") return cmd_calibrate(cal_flags);
        if (name == "tomo") return cmd_tomo(tomo_flags);
        if (name == "fit") return cmd_fit(fit_flags);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"command", name}}.dump() << "\n";
        return 1;
    }
    return 2;
}
