"""Post-selection on output photon-number patterns.

Two independent routes compute the same amplitudes:

* :func:`postselect` evaluates one permanent per internal assignment;
* :func:`brute_force_output` multiplies out the creation-operator product
  after substituting ``a_F,k^+ -> sum_l U_F[k, l] b_F,l^+`` and reads off
  every Fock amplitude.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial, pi, sqrt

import numpy as np

from .fock import (
    InternalAssignment,
    InternalLabel,
    OutputPattern,
    enumerate_assignments,
    enumerate_patterns,
)
from .permanent import _label_unitaries, transition_amplitude, weighted_rows

BRUTE_FORCE_MAX_PHOTONS = 8
FULL_DISTRIBUTION_MAX_PHOTONS = 8


@dataclass(frozen=True)
class PostselectedState:
    """Unnormalized post-selected slice; its norm is the event probability."""

    pattern: OutputPattern
    amplitudes: dict = field(default_factory=dict)

    @property
    def probability(self) -> float:
        return success_probability(self)

    def amplitude(self, assignment: InternalAssignment) -> complex:
        return self.amplitudes.get(assignment, 0j)

    def eta_count_weights(self) -> dict:
        """Probability carried by each eta-photon count N2."""
        weights = {}
        for a, amp in self.amplitudes.items():
            weights[a.n_eta] = weights.get(a.n_eta, 0.0) + abs(amp) ** 2
        return weights

    def survivors(self, tol=1e-10) -> set:
        """Eta counts whose total probability exceeds ``tol``."""
        return {n2 for n2, w in self.eta_count_weights().items() if w > tol}


def _photon_count(factors):
    return len(factors)


def postselect(factors, unitaries, pattern, prefactor=1.0, threads=1) -> PostselectedState:
    """Amplitude of every internal assignment of ``pattern``.

    Assignments are independent; with ``threads > 1`` they are evaluated in a
    thread pool and merged in enumeration order, so the result does not
    depend on scheduling.
    """
    if pattern.total != _photon_count(factors):
        raise ValueError(f"pattern holds {pattern.total} photons, input has {len(factors)}")
    rows = weighted_rows(factors, unitaries)
    if pattern.modes != rows.shape[2]:
        raise ValueError(f"pattern spans {pattern.modes} modes, network has {rows.shape[2]}")
    assignments = list(enumerate_assignments(pattern))

    def amp(a):
        return transition_amplitude(factors, unitaries, pattern, a, prefactor, rows=rows)

    if threads > 1 and len(assignments) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(amp, assignments))
    else:
        values = [amp(a) for a in assignments]
    return PostselectedState(pattern, dict(zip(assignments, values)))


def success_probability(s: PostselectedState) -> float:
    return float(sum(abs(a) ** 2 for a in s.amplitudes.values()))


def ghz_fidelity(s: PostselectedState):
    """Best overlap with ``(|all mu> + e^{i phi} |all eta>)/sqrt(2)`` and the maximizing phase.

    "All mu" puts every detected photon of the pattern in ``mu``; for
    single-occupancy patterns these are the strings ``mu^N`` and ``eta^N``.
    The maximum over ``phi`` is ``(|a| + |b|)^2 / 2`` at ``phi = arg(b/a)``.
    Returns ``(0.0, 0.0)`` for a state with zero norm.
    """
    if s.pattern.total == 0:
        raise ValueError("GHZ fidelity needs at least one detected photon")
    p = success_probability(s)
    if p == 0.0:
        return 0.0, 0.0
    a = s.amplitude(InternalAssignment.uniform(s.pattern, InternalLabel.MU)) / sqrt(p)
    b = s.amplitude(InternalAssignment.uniform(s.pattern, InternalLabel.ETA)) / sqrt(p)
    fidelity = min(1.0, (abs(a) + abs(b)) ** 2 / 2)
    if a == 0 or b == 0:
        return fidelity, 0.0
    phase = float(np.angle(b / a)) % (2 * pi)
    if 2 * pi - phase < 1e-12:
        phase = 0.0
    return fidelity, phase


@dataclass(frozen=True)
class PhotonicState:
    """Complete output state over ``(label, mode)`` slots.

    Occupation vectors have ``2 * modes`` entries: mu occupations of modes
    1..M followed by eta occupations of modes 1..M.
    """

    modes: int
    amplitudes: dict

    def norm2(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def slice(self, pattern: OutputPattern) -> PostselectedState:
        """Post-selected component for ``pattern`` with the engine's assignment keys."""
        if pattern.modes != self.modes:
            raise ValueError(f"pattern spans {pattern.modes} modes, state has {self.modes}")
        out = {}
        for a in enumerate_assignments(pattern):
            out[a] = self.amplitudes.get(a.slot_occupations(), 0j)
        return PostselectedState(pattern, out)

    def distribution(self) -> dict:
        """Spatial pattern -> probability, internal labels traced out."""
        probs = {}
        for occ, amp in self.amplitudes.items():
            counts = tuple(m + h for m, h in zip(occ[: self.modes], occ[self.modes :]))
            probs[counts] = probs.get(counts, 0.0) + abs(amp) ** 2
        return {OutputPattern(k): v for k, v in probs.items()}


_BITS = 4  # per-slot counter width in the packed monomial key; holds up to 15 photons


def brute_force_output(factors, unitaries, prefactor=1.0) -> PhotonicState:
    """Expand ``prod_j sum_{F,l} amp_F,j U_F[k_j, l] b_F,l^+ |0>`` term by term."""
    n = _photon_count(factors)
    if n > BRUTE_FORCE_MAX_PHOTONS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_PHOTONS} photons, got {n}")
    us = _label_unitaries(unitaries)
    modes = us[InternalLabel.MU].shape[1]
    slots = 2 * modes

    poly = {0: complex(prefactor)}
    for f in factors:
        coeffs = []
        for label in InternalLabel:
            row = us[label][f.in_mode - 1] * f.amplitude(label)
            for l in range(modes):
                if row[l] != 0:
                    coeffs.append((1 << (_BITS * (label * modes + l)), row[l]))
        nxt = {}
        for key, c in poly.items():
            for step, u in coeffs:
                k2 = key + step
                nxt[k2] = nxt.get(k2, 0j) + c * u
        poly = nxt

    mask = (1 << _BITS) - 1
    sqrt_fact = [sqrt(factorial(q)) for q in range(n + 1)]
    state = {}
    for key, c in poly.items():
        occ = tuple((key >> (_BITS * s)) & mask for s in range(slots))
        # (b^+)^q |0> = sqrt(q!) |q>
        weight = 1.0
        for q in occ:
            weight *= sqrt_fact[q]
        state[occ] = c * weight
    return PhotonicState(modes, state)


def full_distribution(factors, unitaries, prefactor=1.0, threads=1) -> dict:
    """Probability of every spatial output pattern, via the permanent route."""
    n = _photon_count(factors)
    if n > FULL_DISTRIBUTION_MAX_PHOTONS:
        raise ValueError(f"exact enumeration limited to {FULL_DISTRIBUTION_MAX_PHOTONS} photons, got {n}")
    modes = _label_unitaries(unitaries)[InternalLabel.MU].shape[1]
    patterns = list(enumerate_patterns(n, modes))

    def prob(p):
        return postselect(factors, unitaries, p, prefactor).probability

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(prob, patterns))
    else:
        values = [prob(p) for p in patterns]
    return dict(zip(patterns, values))
