"""Moments of functions on finite abelian groups computed from their Fourier spectra."""

from .convolution import CirculantOperator, autoconvolve, convolve, shift, sparse_convolve
from .errors import (
    ConsistencyError,
    FourierMomentsError,
    GroupMismatchError,
    InvalidIndexError,
    ParseError,
    ResourceLimitError,
    SideMismatchError,
    UnsupportedOperationError,
)
from .group import GroupSpec, Ordering, SubtractionTable, subtraction_table
from .io import load_dataset, read_function, read_spectrum, write_function, write_spectrum
from .models import (
    GraphBetSpec,
    binomial_reference_moments,
    complete_graph_reference_moments,
    complete_graph_spec,
    direct_effect_spectrum,
    graph_spectrum,
    histogram,
    petersen_spec,
)
from .moments import (
    MomentReport,
    direct_general_moment,
    direct_mean,
    direct_variance,
    fourier_central_moment,
    fourier_general_moment,
    fourier_raw_moment,
    fourier_variance,
    moment_report,
)
from .spectrum import (
    DenseFunction,
    Side,
    SparseSpectrum,
    basis,
    constant,
    dft,
    diminish,
    dot,
    idft,
    parseval_gap,
    reverse,
    to_dense,
    to_sparse,
)
from .symbolic import (
    SymbolicMoment,
    Term,
    annihilating_terms,
    contributions,
    evaluate,
    feasibility_residual,
    gaussian_targets,
    render,
    z2n_central_closed_form,
)
from .timeseries import lagged_moment, lagged_moment_fourier

__version__ = "0.1.0"
