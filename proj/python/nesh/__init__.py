"""Quantized Nash-equilibrium seeking under DoS: python surface.

Everything numeric is delegated to the compiled extension so python and
CLI results agree exactly.
"""

from nesh._core import (
    DesignParams,
    DosInterval,
    DosParams,
    DosTrace,
    GameConstants,
    GameSpec,
    InfeasibleDesign,
    ProtocolMatrices,
    QuantResult,
    RunSummary,
    SimResult,
    StepRecord,
    Topology,
    UniformQuantizer,
    build_matrices,
    certify,
    count_successes,
    delta_feasible,
    generate_dos,
    h_max,
    rho_hbar,
    run,
    select_delta,
    spectral_norm,
    synthesize,
    ts_lower_bound,
    write_csv,
)

__all__ = [
    "DesignParams",
    "DosInterval",
    "DosParams",
    "DosTrace",
    "GameConstants",
    "GameSpec",
    "InfeasibleDesign",
    "ProtocolMatrices",
    "QuantResult",
    "RunSummary",
    "SimResult",
    "StepRecord",
    "Topology",
    "UniformQuantizer",
    "build_matrices",
    "certify",
    "count_successes",
    "delta_feasible",
    "generate_dos",
    "h_max",
    "rho_hbar",
    "run",
    "select_delta",
    "spectral_norm",
    "synthesize",
    "ts_lower_bound",
    "write_csv",
]

__version__ = "0.1.0"
