"""Matrix permanents and bosonic transition amplitudes."""

from functools import lru_cache
from itertools import permutations
from math import sqrt

import numpy as np
from numba import njit

from .fock import InternalAssignment, InternalLabel, OutputPattern

NAIVE_MAX_DIM = 10
RYSER_MAX_DIM = 30


def _as_square(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {m.shape}")
    return m


@lru_cache(maxsize=None)
def _permutation_table(n):
    return np.array(list(permutations(range(n))), dtype=np.intp).reshape(-1, n)


def perm_naive(m):
    """Permanent by summing over all n! permutations."""
    m = _as_square(m)
    n = m.shape[0]
    if n > NAIVE_MAX_DIM:
        raise ValueError(f"perm_naive limited to dim <= {NAIVE_MAX_DIM}, got {n}")
    if n == 0:
        return 1.0 + 0j
    table = _permutation_table(n)
    return complex(np.prod(m[np.arange(n), table], axis=1).sum())


@njit(cache=True, nogil=True)
def _ryser_gray(m):
    n = m.shape[0]
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    subset = 0
    for k in range(1, 1 << n):
        # Gray code flips the column at the lowest set bit of k
        j = 0
        while not (k >> j) & 1:
            j += 1
        subset ^= 1 << j
        if (subset >> j) & 1:
            for i in range(n):
                row_sums[i] += m[i, j]
        else:
            for i in range(n):
                row_sums[i] -= m[i, j]
        prod = 1.0 + 0j
        for i in range(n):
            prod *= row_sums[i]
        # parity of |subset| flips with every Gray step
        if k & 1:
            total -= prod
        else:
            total += prod
    if n & 1:
        return -total
    return total


def perm_ryser(m):
    """Permanent via Ryser's inclusion-exclusion with Gray-code row-sum updates."""
    m = _as_square(m)
    n = m.shape[0]
    if n > RYSER_MAX_DIM:
        raise ValueError(f"perm_ryser limited to dim <= {RYSER_MAX_DIM}, got {n}")
    if n == 0:
        return 1.0 + 0j
    return complex(_ryser_gray(np.ascontiguousarray(m)))


def _label_unitaries(unitaries):
    """Accept one matrix (label independent) or a mapping label -> matrix."""
    if isinstance(unitaries, dict):
        return {InternalLabel(k): np.asarray(v, dtype=complex) for k, v in unitaries.items()}
    u = np.asarray(unitaries, dtype=complex)
    return {InternalLabel.MU: u, InternalLabel.ETA: u}


def weighted_rows(factors, unitaries):
    """Array ``W[F, j, l] = U_F[k_j, l] * amp_F,j`` over labels, factors and output modes."""
    us = _label_unitaries(unitaries)
    rows = np.array([f.in_mode - 1 for f in factors], dtype=np.intp)
    w = np.empty((2, len(factors), us[InternalLabel.MU].shape[1]), dtype=complex)
    for label in InternalLabel:
        if rows.size and rows.max() >= us[label].shape[0]:
            raise ValueError("photon input mode outside the network")
        amps = np.array([f.amplitude(label) for f in factors], dtype=complex)
        w[label] = us[label][rows, :] * amps[:, None]
    return w


def _column_index(assignment):
    labels = []
    modes = []
    for label, occ in enumerate((assignment.mu, assignment.eta)):
        for l, c in enumerate(occ):
            labels.extend([label] * c)
            modes.extend([l] * c)
    return np.array(labels, dtype=np.intp), np.array(modes, dtype=np.intp)


def amplitude_matrix(factors, unitaries, assignment, rows=None):
    """Rows per input factor, columns per occupied output slot (repeated per occupation).

    ``rows`` may carry a precomputed :func:`weighted_rows` array.
    """
    w = weighted_rows(factors, unitaries) if rows is None else rows
    labels, modes = _column_index(assignment)
    if labels.size != w.shape[1]:
        raise ValueError(f"{w.shape[1]} input photons but {labels.size} output photons")
    if modes.size and modes.max() >= w.shape[2]:
        raise ValueError("assignment covers more modes than the network has")
    return w[labels, :, modes].T


def occupation_norm(assignment):
    """sqrt of the product of slot factorials."""
    norm = 1.0
    for c in assignment.slot_occupations():
        for q in range(2, c + 1):
            norm *= sqrt(q)
    return norm


def transition_amplitude(factors, unitaries, pattern, assignment, prefactor=1.0, rows=None):
    """``<pattern, assignment| prod_j (sum_F amp_F,j a_F,kj^+) |0>`` after the network."""
    if assignment.pattern != pattern:
        raise ValueError(f"assignment {assignment} does not split pattern {pattern}")
    m = amplitude_matrix(factors, unitaries, assignment, rows)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"amplitude matrix not square: {m.shape}")
    return prefactor * perm_ryser(m) / occupation_norm(assignment)
