#include "rdr/config.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace rdr {
namespace {

using nlohmann::json;

constexpr double kHzToRad = kTwoPi * 1e-6;  // Hz -> rad/us

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

double number_at(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

int int_at(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return obj[key].get<int>();
}

std::vector<double> list_at(const json& obj, const std::string& path, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    if (!obj[key].is_array()) fail(path + "." + key, "expected a list of numbers");
    for (const auto& v : obj[key]) {
        if (!v.is_number()) fail(path + "." + key, "expected a list of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ThermalReset: return "thermal_reset";
        case ExperimentKind::FockReset: return "fock_reset";
        case ExperimentKind::VacuumRabi: return "vacuum_rabi";
        case ExperimentKind::DrivenRamsey: return "driven_ramsey";
        case ExperimentKind::CouplingSweep: return "coupling_sweep";
        case ExperimentKind::FrameValidation: return "frame_validation";
    }
    throw std::logic_error("unreachable experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (auto k : {ExperimentKind::ThermalReset, ExperimentKind::FockReset,
                   ExperimentKind::VacuumRabi, ExperimentKind::DrivenRamsey,
                   ExperimentKind::CouplingSweep, ExperimentKind::FrameValidation})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("config: experiment: unknown kind \"" + name + "\"");
}

SystemParams BoundaryParams::to_system_params() const {
    SystemParams p;
    p.chi_m = chi_m_hz * kHzToRad;
    p.chi_r = chi_r_hz * kHzToRad;
    p.kappa_r = kappa_r_hz * kHzToRad;
    p.kappa_m = 1.0 / (memory_lifetime_s * 1e6);
    p.t1_q = qubit_t1_s * 1e6;
    p.t2_echo_q = qubit_t2_echo_s * 1e6;
    p.omega_rabi = rabi_hz * kHzToRad;
    p.layout = SpaceLayout::qubit_memory_readout(dim_memory, dim_readout);
    return p;
}

double DriveConfig::resolve_abar_m(const SystemParams& p) const {
    if (abar_m) return *abar_m;
    if (abar_m_over_kappa_chi) return *abar_m_over_kappa_chi * p.kappa_r / p.chi_m;
    if (eps_m_hz)
        return std::abs(sideband_amplitude(*eps_m_hz * kHzToRad, p.omega_rabi, p.kappa_r).exact);
    return -1.0;
}

double DriveConfig::resolve_abar_r(const SystemParams& p) const {
    if (abar_r) return *abar_r;
    if (eps_r_hz)
        return std::abs(sideband_amplitude(*eps_r_hz * kHzToRad, p.omega_rabi, p.kappa_r).exact);
    return -1.0;
}

double RunConfig::true_scale() const { return true_scale_hz * kHzToRad; }

RunConfig parse_config(const std::string& text) {
    json root = json::parse(text);  // throws json::parse_error on bad syntax
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown_keys(root, "",
                        {"version", "experiment", "seed", "tol", "workers", "output_dir",
                         "parameters", "drives", "experiment_options"});

    RunConfig cfg;
    cfg.version = int_at(root, "", "version", 1);
    if (cfg.version != 1) fail("version", "unsupported config version");
    if (!root.contains("experiment") || !root["experiment"].is_string())
        fail("experiment", "missing or non-string");
    cfg.kind = experiment_kind_from_string(root["experiment"].get<std::string>());

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    cfg.tol = number_at(root, "", "tol", cfg.tol);
    if (cfg.tol <= 0) fail("tol", "must be > 0");
    cfg.workers = int_at(root, "", "workers", cfg.workers);
    if (cfg.workers < 1) fail("workers", "must be >= 1");
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) fail("output_dir", "expected a string");
        cfg.output_dir = root["output_dir"].get<std::string>();
    }

    if (root.contains("parameters")) {
        const json& p = root["parameters"];
        if (!p.is_object()) fail("parameters", "expected an object");
        reject_unknown_keys(p, "parameters",
                            {"chi_m_hz", "chi_r_hz", "kappa_r_hz", "memory_lifetime_s",
                             "qubit_t1_s", "qubit_t2_echo_s", "rabi_hz", "dim_memory",
                             "dim_readout"});
        BoundaryParams& b = cfg.boundary;
        b.chi_m_hz = number_at(p, "parameters", "chi_m_hz", b.chi_m_hz);
        b.chi_r_hz = number_at(p, "parameters", "chi_r_hz", b.chi_r_hz);
        b.kappa_r_hz = number_at(p, "parameters", "kappa_r_hz", b.kappa_r_hz);
        b.memory_lifetime_s = number_at(p, "parameters", "memory_lifetime_s", b.memory_lifetime_s);
        b.qubit_t1_s = number_at(p, "parameters", "qubit_t1_s", b.qubit_t1_s);
        b.qubit_t2_echo_s = number_at(p, "parameters", "qubit_t2_echo_s", b.qubit_t2_echo_s);
        b.rabi_hz = number_at(p, "parameters", "rabi_hz", b.rabi_hz);
        b.dim_memory = int_at(p, "parameters", "dim_memory", b.dim_memory);
        b.dim_readout = int_at(p, "parameters", "dim_readout", b.dim_readout);
    }
    cfg.params = cfg.boundary.to_system_params();
    cfg.params.check();

    if (root.contains("drives")) {
        const json& d = root["drives"];
        if (!d.is_object()) fail("drives", "expected an object");
        reject_unknown_keys(d, "drives",
                            {"abar_m", "abar_r", "abar_m_over_kappa_chi", "eps_m_hz", "eps_r_hz"});
        auto opt = [&](const char* key) -> std::optional<double> {
            if (!d.contains(key)) return std::nullopt;
            if (!d[key].is_number()) fail(std::string("drives.") + key, "expected a number");
            return d[key].get<double>();
        };
        cfg.drives.abar_m = opt("abar_m");
        cfg.drives.abar_r = opt("abar_r");
        cfg.drives.abar_m_over_kappa_chi = opt("abar_m_over_kappa_chi");
        cfg.drives.eps_m_hz = opt("eps_m_hz");
        cfg.drives.eps_r_hz = opt("eps_r_hz");
        if (cfg.drives.using_abar() && cfg.drives.using_eps())
            fail("drives", "give either abar targets or raw eps amplitudes, not both");
        if (cfg.drives.abar_m && cfg.drives.abar_m_over_kappa_chi)
            fail("drives.abar_m_over_kappa_chi", "conflicts with drives.abar_m");
    }

    if (root.contains("experiment_options")) {
        const json& o = root["experiment_options"];
        if (!o.is_object()) fail("experiment_options", "expected an object");
        reject_unknown_keys(o, "experiment_options",
                            {"t_final_s", "n_times", "nbar_initial", "n_displacement_samples",
                             "bath_occupation", "sweep_fractions", "settings", "true_scale_hz"});
        cfg.t_final_s = number_at(o, "experiment_options", "t_final_s", cfg.t_final_s);
        cfg.n_times = int_at(o, "experiment_options", "n_times", cfg.n_times);
        cfg.nbar_initial = number_at(o, "experiment_options", "nbar_initial", cfg.nbar_initial);
        cfg.n_displacement_samples = int_at(o, "experiment_options", "n_displacement_samples",
                                            cfg.n_displacement_samples);
        cfg.bath_occupation =
            number_at(o, "experiment_options", "bath_occupation", cfg.bath_occupation);
        cfg.sweep_fractions = list_at(o, "experiment_options", "sweep_fractions");
        cfg.settings = list_at(o, "experiment_options", "settings");
        cfg.true_scale_hz = number_at(o, "experiment_options", "true_scale_hz", cfg.true_scale_hz);
    }
    if (cfg.t_final_s <= 0) fail("experiment_options.t_final_s", "must be > 0");
    if (cfg.n_times < 2) fail("experiment_options.n_times", "must be >= 2");

    // per-experiment required fields
    switch (cfg.kind) {
        case ExperimentKind::ThermalReset:
        case ExperimentKind::FockReset:
        case ExperimentKind::VacuumRabi:
        case ExperimentKind::FrameValidation:
            if (cfg.drives.empty())
                fail("drives", "missing drive section for " + to_string(cfg.kind));
            break;
        case ExperimentKind::CouplingSweep:
            if (cfg.sweep_fractions.empty())
                fail("experiment_options.sweep_fractions", "must be a non-empty list");
            for (double f : cfg.sweep_fractions)
                if (f <= 0) fail("experiment_options.sweep_fractions", "fractions must be > 0");
            break;
        case ExperimentKind::DrivenRamsey:
            if (cfg.settings.empty())
                fail("experiment_options.settings", "must be a non-empty list");
            if (cfg.true_scale_hz <= 0)
                fail("experiment_options.true_scale_hz", "must be > 0");
            break;
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["version"] = cfg.version;
    root["experiment"] = to_string(cfg.kind);
    root["seed"] = cfg.seed;
    root["tol"] = cfg.tol;
    root["workers"] = cfg.workers;
    root["output_dir"] = cfg.output_dir;

    const BoundaryParams& b = cfg.boundary;
    root["parameters"] = {{"chi_m_hz", b.chi_m_hz},
                          {"chi_r_hz", b.chi_r_hz},
                          {"kappa_r_hz", b.kappa_r_hz},
                          {"memory_lifetime_s", b.memory_lifetime_s},
                          {"qubit_t1_s", b.qubit_t1_s},
                          {"qubit_t2_echo_s", b.qubit_t2_echo_s},
                          {"rabi_hz", b.rabi_hz},
                          {"dim_memory", b.dim_memory},
                          {"dim_readout", b.dim_readout}};

    json d = json::object();
    if (cfg.drives.abar_m) d["abar_m"] = *cfg.drives.abar_m;
    if (cfg.drives.abar_r) d["abar_r"] = *cfg.drives.abar_r;
    if (cfg.drives.abar_m_over_kappa_chi)
        d["abar_m_over_kappa_chi"] = *cfg.drives.abar_m_over_kappa_chi;
    if (cfg.drives.eps_m_hz) d["eps_m_hz"] = *cfg.drives.eps_m_hz;
    if (cfg.drives.eps_r_hz) d["eps_r_hz"] = *cfg.drives.eps_r_hz;
    if (!d.empty()) root["drives"] = d;

    json o;
    o["t_final_s"] = cfg.t_final_s;
    o["n_times"] = cfg.n_times;
    o["nbar_initial"] = cfg.nbar_initial;
    o["n_displacement_samples"] = cfg.n_displacement_samples;
    o["bath_occupation"] = cfg.bath_occupation;
    if (!cfg.sweep_fractions.empty()) o["sweep_fractions"] = cfg.sweep_fractions;
    if (!cfg.settings.empty()) o["settings"] = cfg.settings;
    if (cfg.true_scale_hz > 0) o["true_scale_hz"] = cfg.true_scale_hz;
    root["experiment_options"] = o;

    return root.dump(2) + "\n";
}

}  // namespace rdr
