# SPDX-License-Identifier: Apache-2.0
"""Half-space kinetic and heat decay lab."""

from ._core import (
    CalibrationStaleError,
    CollisionKind,
    CollisionModel,
    ConfigError,
    Error,
    HeatMode,
    InsufficientDataError,
    NumericalError,
    PreconditionError,
    SchemeFailure,
    TruncationError,
    ZeroSignalError,
    collision_model,
    fit_decay,
    heat_decay,
    heat_half_line_kernel,
    nash_suite,
    parse_config,
    run_config,
    run_suite,
    sha256_hex,
    verify_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationStaleError",
    "CollisionKind",
    "CollisionModel",
    "ConfigError",
    "Error",
    "HeatMode",
    "InsufficientDataError",
    "NumericalError",
    "PreconditionError",
    "SchemeFailure",
    "TruncationError",
    "ZeroSignalError",
    "collision_model",
    "fit_decay",
    "heat_decay",
    "heat_half_line_kernel",
    "nash_suite",
    "parse_config",
    "run_config",
    "run_suite",
    "sha256_hex",
    "verify_manifest",
]
