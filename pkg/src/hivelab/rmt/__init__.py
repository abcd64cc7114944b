"""Random-matrix sampling, eigensolving, and the minor process."""

from .ensembles import (
    RIGIDITY_FLAG,
    RigidityReport,
    eigh,
    eigvals_batch,
    haar_isospectral,
    haar_unitary,
    minor_process,
    minor_spectra,
    rigidity_report,
    sample_gue,
    sample_gue_unit,
)
from .jacobi import ConvergenceError, EighResult, jacobi_eigh, round_robin
from .rng import RngStream
