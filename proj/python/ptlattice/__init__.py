"""Spectra and gain/loss thresholds of PT-symmetric tight-binding chains."""

from ._ptlattice import (
    BracketFailure,
    CheckResult,
    ConvergenceFailure,
    Error,
    ExponentFit,
    FragilityPoint,
    HoppingProfile,
    InsufficientData,
    InvalidSpec,
    LatticeSpec,
    NotRealizable,
    Spectrum,
    SweepRecord,
    ThresholdResult,
    __version__,
    find_gamma_c,
    fit_exponent,
    fragility_scan,
    log_grid,
    secular_residual,
    spectrum,
    sweep,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
