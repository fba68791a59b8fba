"""Generalized su(1,1) squeezed vacua: closed forms, statistics and a Fock-space oracle."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DivergenceError,
    InvalidParameterError,
    SqueezeLabError,
    TruncationError,
    UndefinedMandelQError,
    UndefinedTransitionError,
)
from .su11 import (  # noqa: E402
    DisentangledCoeffs,
    Regime,
    SqueezeParams,
    classify_regime,
    disentangle_conventional,
    disentangle_general,
    property_residual,
)

__all__ = [
    "DisentangledCoeffs",
    "DivergenceError",
    "InvalidParameterError",
    "Regime",
    "SqueezeLabError",
    "SqueezeParams",
    "TruncationError",
    "UndefinedMandelQError",
    "UndefinedTransitionError",
    "classify_regime",
    "disentangle_conventional",
    "disentangle_general",
    "property_residual",
]
