"""Post-selected GHZ state generation in linear-optical multiport splitters."""

from .linalg import build_2n_port, build_dft, compose, embed_two_mode, is_unitary
from .fock import (
    InternalAssignment,
    InternalLabel,
    OutputPattern,
    PhotonFactor,
    enumerate_assignments,
    enumerate_patterns,
)
from .permanent import perm_naive, perm_ryser, transition_amplitude
from .evolve import (
    PhotonicState,
    PostselectedState,
    brute_force_output,
    full_distribution,
    ghz_fidelity,
    postselect,
    success_probability,
)
from .schemes import (
    SchemeInstance,
    SchemeName,
    closed_form,
    internal_survivors,
    make_2n_scheme,
    make_even_scheme,
    make_odd_scheme,
    make_pbs_cascade,
    make_scheme,
    make_single_mode_scheme,
    overlap,
    ztl_allowed,
)

__version__ = "0.1.0"
