"""Entanglement sudden death and birth for two cavities leaking into their reservoirs."""

from .amplitudes import AmplitudeSet, amplitudes, damping_amplitude
from .errors import (
    BadDims,
    BadPartition,
    CavityEntError,
    ConfigError,
    DomainError,
    NonConvergence,
    NonHermitian,
    NotNormalized,
)
from .events import (
    EventAnalysis,
    EventReport,
    analytic_times,
    analytic_times_qubit,
    analytic_times_qutrit,
    detect_crossings,
    find_events,
    simultaneity_condition,
)
from .measures import (
    closed_form_c1r1,
    concurrence_two_qubit,
    i_concurrence,
    lboe,
    multipartite_cn,
    x_state_lambda,
)
from .oracle import OracleConfig, compare_to_markov, simulate_single_excitation
from .series import SeriesSpec, parse_series, sweep
from .states import (
    PARTIES,
    DensityMatrix,
    FourPartyState,
    PartitionSpec,
    build_state,
    partial_transpose,
    realign,
    reduced_density,
)

__version__ = "0.1.0"
