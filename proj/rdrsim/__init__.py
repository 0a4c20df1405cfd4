"""Rabi-driven cavity reset: simulation and analysis core."""

from ._core import (
    FockResetResult,
    FrameValidationResult,
    NbarEstimate,
    PiecewiseFit,
    StarkShiftValue,
    SystemParams,
    ThermalResetConfig,
    ThermalResetResult,
    VacuumRabiResult,
    calibrate_sideband,
    extract_nbar_from_samples,
    fit_piecewise_decay,
    parse_config,
    run_fock_reset,
    run_frame_validation,
    run_thermal_reset,
    run_vacuum_rabi,
    sample_thermal_displacements,
    shifted_rabi_frequency,
    stark_shift,
    thermal_characteristic,
)

__all__ = [
    "FockResetResult",
    "FrameValidationResult",
    "NbarEstimate",
    "PiecewiseFit",
    "StarkShiftValue",
    "SystemParams",
    "ThermalResetConfig",
    "ThermalResetResult",
    "VacuumRabiResult",
    "calibrate_sideband",
    "extract_nbar_from_samples",
    "fit_piecewise_decay",
    "parse_config",
    "run_fock_reset",
    "run_frame_validation",
    "run_thermal_reset",
    "run_vacuum_rabi",
    "sample_thermal_displacements",
    "shifted_rabi_frequency",
    "stark_shift",
    "thermal_characteristic",
]
