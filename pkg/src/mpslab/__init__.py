"""mpslab: matrix product state workbench.

Exact and truncated MPS for finite qudit systems, dense spectral ground
truth, a critical transverse-field Ising scanner, the gamma-matrix ring
MPS of the filled-orbital fermion state, and an MPS-truncation grey
image codec.
"""

__version__ = "0.1.0"

from .errors import CorruptMps, InvalidInput, MpslabError, NumericalFailure, TooLarge
from .states import DenseState, SchmidtSpectrum
from .mps import Mps, PeriodicMps

__all__ = [
    "CorruptMps",
    "DenseState",
    "InvalidInput",
    "Mps",
    "MpslabError",
    "NumericalFailure",
    "PeriodicMps",
    "SchmidtSpectrum",
    "TooLarge",
    "__version__",
]
