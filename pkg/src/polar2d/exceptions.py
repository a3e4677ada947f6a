"""Exception types raised across the package."""

import numpy as np


class DimensionError(ValueError):
    """An array has the wrong length or shape for the code/channel at hand."""


class ConfigError(ValueError):
    """An experiment or code configuration violates its invariants."""


class DecompositionError(np.linalg.LinAlgError):
    """A matrix factorisation failed or produced non-finite output."""
