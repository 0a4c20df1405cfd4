// Python bindings for the main operations: parameter tables, protocol runs,
// tomography estimates, and the fitting/calibration helpers.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdr/analysis.hpp"
#include "rdr/config.hpp"
#include "rdr/model.hpp"
#include "rdr/protocols.hpp"
#include "rdr/tomography.hpp"

namespace py = pybind11;
using namespace rdr;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rabi-driven cavity reset: simulation and analysis core";

    py::class_<SystemParams>(m, "SystemParams")
        .def_static("paper_defaults", &SystemParams::paper_defaults,
                    py::arg("dim_memory") = 30, py::arg("dim_readout") = 10)
        .def_readwrite("chi_m", &SystemParams::chi_m)
        .def_readwrite("chi_r", &SystemParams::chi_r)
        .def_readwrite("kappa_m", &SystemParams::kappa_m)
        .def_readwrite("kappa_r", &SystemParams::kappa_r)
        .def_readwrite("t1_q", &SystemParams::t1_q)
        .def_readwrite("t2_echo_q", &SystemParams::t2_echo_q)
        .def_readwrite("omega_rabi", &SystemParams::omega_rabi);

    m.def("sample_thermal_displacements", &sample_thermal_displacements, py::arg("nbar"),
          py::arg("count"), py::arg("seed"));

    py::class_<FrameValidationResult>(m, "FrameValidationResult")
        .def_readonly("times", &FrameValidationResult::times)
        .def_readonly("fidelities", &FrameValidationResult::fidelities)
        .def_readonly("min_fidelity", &FrameValidationResult::min_fidelity);
    m.def("run_frame_validation", &run_frame_validation, py::arg("params"), py::arg("abar_m"),
          py::arg("t_final"), py::arg("n_samples"), py::arg("rtol") = 1e-8);

    py::class_<VacuumRabiResult>(m, "VacuumRabiResult")
        .def_readonly("abar_m", &VacuumRabiResult::abar_m)
        .def_readonly("frequency", &VacuumRabiResult::frequency)
        .def_readonly("expected_frequency", &VacuumRabiResult::expected_frequency)
        .def_readonly("times", &VacuumRabiResult::times)
        .def_readonly("dressed_sigma_z", &VacuumRabiResult::dressed_sigma_z);
    m.def("run_vacuum_rabi", &run_vacuum_rabi, py::arg("params"), py::arg("abar_m"),
          py::arg("t_final"), py::arg("n_samples"), py::arg("dissipative") = true,
          py::arg("rtol") = 1e-8);

    py::class_<FockResetResult>(m, "FockResetResult")
        .def_readonly("times", &FockResetResult::times)
        .def_readonly("nbar_m", &FockResetResult::nbar_m)
        .def_readonly("vacuum_prob_m", &FockResetResult::vacuum_prob_m)
        .def_readonly("time_constant", &FockResetResult::time_constant)
        .def_readonly("speedup", &FockResetResult::speedup);
    m.def("run_fock_reset", &run_fock_reset, py::arg("params"), py::arg("abar_m"),
          py::arg("abar_r"), py::arg("t_final"), py::arg("n_samples"), py::arg("rtol") = 1e-8);

    py::class_<ThermalResetConfig>(m, "ThermalResetConfig")
        .def(py::init<>())
        .def_readwrite("params", &ThermalResetConfig::params)
        .def_readwrite("nbar_initial", &ThermalResetConfig::nbar_initial)
        .def_readwrite("n_displacement_samples", &ThermalResetConfig::n_displacement_samples)
        .def_readwrite("seed", &ThermalResetConfig::seed)
        .def_readwrite("bath_occupation", &ThermalResetConfig::bath_occupation)
        .def_readwrite("abar_m", &ThermalResetConfig::abar_m)
        .def_readwrite("abar_r", &ThermalResetConfig::abar_r)
        .def_readwrite("t_final", &ThermalResetConfig::t_final)
        .def_readwrite("n_times", &ThermalResetConfig::n_times)
        .def_readwrite("dim_readout", &ThermalResetConfig::dim_readout)
        .def_readwrite("tomo_points", &ThermalResetConfig::tomo_points)
        .def_readwrite("rtol", &ThermalResetConfig::rtol);
    py::class_<ThermalResetResult>(m, "ThermalResetResult")
        .def_readonly("times", &ThermalResetResult::times)
        .def_readonly("nbar_direct", &ThermalResetResult::nbar_direct)
        .def_readonly("nbar_tomography", &ThermalResetResult::nbar_tomography)
        .def_readonly("nbar_final", &ThermalResetResult::nbar_final)
        .def_readonly("time_below_0p1", &ThermalResetResult::time_below_0p1)
        .def_readonly("dim_memory", &ThermalResetResult::dim_memory)
        .def_readonly("reduced_dim", &ThermalResetResult::reduced_dim)
        .def("max_cooling_rate", &ThermalResetResult::max_cooling_rate);
    m.def("run_thermal_reset", &run_thermal_reset, py::arg("config"));

    py::class_<NbarEstimate>(m, "NbarEstimate")
        .def_readonly("nbar", &NbarEstimate::nbar)
        .def_readonly("uncertainty", &NbarEstimate::uncertainty)
        .def_readonly("points_kept", &NbarEstimate::points_kept);
    m.def(
        "extract_nbar_from_samples",
        [](const std::vector<std::pair<Complex, Complex>>& pts, double threshold) {
            CharSamples samples;
            for (const auto& [alpha, value] : pts) samples.points.push_back({alpha, value});
            return extract_nbar(samples, threshold);
        },
        py::arg("points"), py::arg("threshold") = 0.8,
        "Occupation estimate from (alpha, C(alpha)) pairs");
    m.def(
        "thermal_characteristic",
        [](double nbar, Complex alpha) { return thermal_characteristic(nbar, alpha); },
        py::arg("nbar"), py::arg("alpha"));

    py::class_<PiecewiseFit>(m, "PiecewiseFit")
        .def_readonly("A", &PiecewiseFit::A)
        .def_readonly("B", &PiecewiseFit::B)
        .def_readonly("gamma", &PiecewiseFit::gamma)
        .def_readonly("t0", &PiecewiseFit::t0)
        .def_readonly("residual_norm", &PiecewiseFit::residual_norm)
        .def("max_rate", &PiecewiseFit::max_rate)
        .def("eval", &PiecewiseFit::eval);
    m.def(
        "fit_piecewise_decay",
        [](const std::vector<double>& t, const std::vector<double>& n) {
            return fit_piecewise_decay(t, n);
        },
        py::arg("times"), py::arg("nbars"));

    py::class_<StarkShiftValue>(m, "StarkShiftValue")
        .def_readonly("exact", &StarkShiftValue::exact)
        .def_readonly("approximate", &StarkShiftValue::approximate);
    m.def("stark_shift", &stark_shift, py::arg("chi"), py::arg("eps"), py::arg("omega_rabi"),
          py::arg("kappa"));
    m.def(
        "shifted_rabi_frequency",
        [](double omega_rabi, double delta) {
            return shifted_rabi_frequency(omega_rabi, delta).omega;
        },
        py::arg("omega_rabi"), py::arg("delta"));
    m.def(
        "calibrate_sideband",
        [](const std::vector<std::pair<double, double>>& shift_samples, double chi,
           double omega_rabi, double kappa) {
            return calibrate_sideband(shift_samples, chi, omega_rabi, kappa).scale;
        },
        py::arg("shift_samples"), py::arg("chi"), py::arg("omega_rabi"), py::arg("kappa"),
        "Returns the fitted eps-per-setting scale");

    m.def(
        "parse_config",
        [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Validates a JSON config and returns its normalized echo");
}
