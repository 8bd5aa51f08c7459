from ._quadloco import (
    ConfigError,
    LyapunovCertificate,
    RunStatus,
    RunSummary,
    TerrainModel,
    build_certificate,
    fit_slope,
    footstep_target,
    run_scenario_file,
    run_scenario_json,
    slope_orientation,
)

__all__ = [
    "ConfigError",
    "LyapunovCertificate",
    "RunStatus",
    "RunSummary",
    "TerrainModel",
    "build_certificate",
    "fit_slope",
    "footstep_target",
    "run_scenario_file",
    "run_scenario_json",
    "slope_orientation",
]
