"""GHZ generation schemes, suppression-law predictors and closed-form probabilities."""

from dataclasses import dataclass
from enum import Enum
from math import factorial, pi

import numpy as np

from . import linalg
from .evolve import PostselectedState, postselect
from .fock import InternalLabel, OutputPattern, PhotonFactor

_SQRT_HALF = 1 / np.sqrt(2)


class SchemeName(str, Enum):
    ODD_N = "odd"
    EVEN_N = "even"
    TWO_N_PORT = "2n"
    SINGLE_MODE = "single_mode"
    PBS_CASCADE = "pbs"


@dataclass(frozen=True)
class SchemeInstance:
    name: SchemeName
    n: int
    factors: tuple
    unitaries: object  # one matrix, or {InternalLabel: matrix} for label-dependent networks
    target_pattern: OutputPattern
    global_prefactor: complex = 1.0

    def run(self, threads=1) -> PostselectedState:
        return postselect(self.factors, self.unitaries, self.target_pattern, self.global_prefactor, threads)


def _phase(k, n):
    """theta_k = (k - 1) 2 pi / n for 1-based k."""
    return (k - 1) * 2 * pi / n


def _check_n(n, minimum=1):
    if int(n) != n or n < minimum:
        raise ValueError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _ones(n, modes=None):
    modes = n if modes is None else modes
    return OutputPattern((1,) * n + (0,) * (modes - n))


def make_odd_scheme(n, allow_even=False) -> SchemeInstance:
    """One photon per mode in ``(e^{-i theta_k}|mu> + e^{i theta_k}|eta>)/sqrt(2)`` into the DFT.

    Even ``n`` is rejected unless ``allow_even`` is set; then the same input is
    built to exhibit the even-N suppression (and the N = 4 exception).
    """
    n = _check_n(n)
    if n % 2 == 0 and not allow_even:
        raise ValueError(f"odd scheme needs odd n, got {n}")
    factors = tuple(
        PhotonFactor(k, np.exp(-1j * _phase(k, n)) * _SQRT_HALF, np.exp(1j * _phase(k, n)) * _SQRT_HALF)
        for k in range(1, n + 1)
    )
    return SchemeInstance(SchemeName.ODD_N, n, factors, linalg.build_dft(n), _ones(n))


def make_even_scheme(n, start=1) -> SchemeInstance:
    """Two photons ``(|mu> +- e^{i theta_kappa}|eta>)/sqrt(2)`` in every second input mode.

    Input modes are ``start, start + 2, ...``; ``start=1`` is the default,
    ``start=2`` the mirrored choice.
    """
    n = _check_n(n, 2)
    if n % 2:
        raise ValueError(f"even scheme needs even n, got {n}")
    if start not in (1, 2):
        raise ValueError(f"start mode must be 1 or 2, got {start}")
    factors = []
    for kappa in range(1, n // 2 + 1):
        mode = 2 * kappa - 2 + start
        e = np.exp(1j * _phase(kappa, n))
        factors.append(PhotonFactor(mode, _SQRT_HALF, e * _SQRT_HALF))
        factors.append(PhotonFactor(mode, _SQRT_HALF, -e * _SQRT_HALF))
    return SchemeInstance(SchemeName.EVEN_N, n, tuple(factors), linalg.build_dft(n), _ones(n))


def _plus_phase_factors(n):
    return tuple(
        PhotonFactor(k, _SQRT_HALF, np.exp(1j * _phase(k, n)) * _SQRT_HALF) for k in range(1, n + 1)
    )


def make_2n_scheme(n) -> SchemeInstance:
    """Photons in the first n inputs of the 2n-port; coincidences in the first n outputs."""
    n = _check_n(n)
    return SchemeInstance(SchemeName.TWO_N_PORT, n, _plus_phase_factors(n), linalg.build_2n_port(n), _ones(n, 2 * n))


def make_single_mode_scheme(n, l=1) -> SchemeInstance:
    """Same input as the 2n scheme into the DFT, all n photons post-selected in output ``l``."""
    n = _check_n(n)
    if not 1 <= l <= n:
        raise ValueError(f"output mode must lie in 1..{n}, got {l}")
    counts = [0] * n
    counts[l - 1] = n
    return SchemeInstance(SchemeName.SINGLE_MODE, n, _plus_phase_factors(n), linalg.build_dft(n), OutputPattern(counts))


_SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def make_pbs_cascade(n) -> SchemeInstance:
    """|+> photons through n-1 PBSs on neighbouring modes: mu transmitted, eta swapped.

    The reflection carries no phase, and the PBSs act in the order (1,2), (2,3), ...
    """
    n = _check_n(n, 2)
    swaps = [linalg.embed_two_mode(n, i, i + 1, _SWAP) for i in range(1, n)]

    unitaries = {InternalLabel.MU: np.eye(n, dtype=complex), InternalLabel.ETA: linalg.compose(*swaps)}
    factors = tuple(PhotonFactor(k, _SQRT_HALF, _SQRT_HALF) for k in range(1, n + 1))
    return SchemeInstance(SchemeName.PBS_CASCADE, n, factors, unitaries, _ones(n))


_BUILDERS = {
    SchemeName.ODD_N: make_odd_scheme,
    SchemeName.EVEN_N: make_even_scheme,
    SchemeName.TWO_N_PORT: make_2n_scheme,
    SchemeName.SINGLE_MODE: make_single_mode_scheme,
    SchemeName.PBS_CASCADE: make_pbs_cascade,
}


def make_scheme(name, n, **kwargs) -> SchemeInstance:
    return _BUILDERS[SchemeName(name)](n, **kwargs)


def ztl_allowed(pattern: OutputPattern, n: int) -> bool:
    """Zero transmission law: the mode indices of all photons must sum to 0 mod n."""
    return sum(pattern.output_modes()) % n == 0


def internal_survivors(scheme, n) -> set:
    """Eta-photon counts N2 that may survive coincidence post-selection."""
    scheme = SchemeName(scheme)
    if scheme is SchemeName.PBS_CASCADE:
        raise ValueError("no survivor predictor for the PBS cascade")
    if scheme is SchemeName.ODD_N and n % 2 == 0:
        if n % 4 == 0:
            return {n // 4, 3 * n // 4}
        return set()
    return {0, n}


def closed_form(name, n) -> float:
    name = name.upper()
    if name == "P_2N":
        return factorial(n) ** 2 / (2 ** (n - 1) * n ** (2 * n))
    if name == "P_PBS":
        if n < 2:
            raise ValueError("PBS cascade needs n >= 2")
        return 1 / 2 ** (n - 1)
    if name in ("P_TILDE_ODD", "P_SINGLE_MODE"):
        return factorial(n) / (2 ** (n - 1) * n**n)
    if name == "P_TILDE_EVEN":
        return factorial(n) / (2 ** (n / 2 - 1) * n**n)
    raise ValueError(f"unknown closed form {name!r}")


CLOSED_FORM_NAMES = ("P_2N", "P_PBS", "P_TILDE_ODD", "P_TILDE_EVEN", "P_SINGLE_MODE")


def overlap(p: PhotonFactor, q: PhotonFactor) -> complex:
    """Internal-state overlap <p|q>; the spatial mode is ignored."""
    return p.amp_mu.conjugate() * q.amp_mu + p.amp_eta.conjugate() * q.amp_eta
