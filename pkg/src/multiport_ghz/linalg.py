"""Unitaries for multiport networks.

Matrices follow the row-input convention: ``U[k, l]`` is the amplitude for a
photon entering input mode ``k`` to leave through output mode ``l``, so a
creation operator maps as ``a_k^+ -> sum_l U[k, l] b_l^+``. Public mode
indices are 1-based; storage is ordinary 0-based numpy.
"""

import numpy as np


def _check_dim(n):
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def _check_finite(m):
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def build_dft(n):
    """Symmetric multiport: ``U[k, l] = omega**(k*l) / sqrt(n)`` (0-based)."""
    n = _check_dim(n)
    k = np.arange(n)
    # reduce exponent mod n before exponentiating; keeps phases exact for large k*l
    exponent = np.outer(k, k) % n
    return np.exp(2j * np.pi * exponent / n) / np.sqrt(n)


def build_2n_port(n):
    """2n x 2n network ``[[A, 1 - J/n], [1 - J/n, -A^+]]`` with ``A = J/n``.

    ``A A^+ = J/n`` is a rank-one projector, so both square-root blocks
    are exactly ``1 - J/n``.
    """
    n = _check_dim(n)
    a = np.full((n, n), 1.0 / n, dtype=complex)
    root = np.eye(n, dtype=complex) - a
    return np.block([[a, root], [root, -a.conj().T]])


def embed_two_mode(n, i, j, g):
    """Place the 2x2 unitary ``g`` on modes ``i < j`` (1-based) of an n-mode identity."""
    n = _check_dim(n)
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise ValueError(f"expected a 2x2 block, got shape {g.shape}")
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= {n}, got i={i}, j={j}")
    if not is_unitary(g):
        raise ValueError("two-mode block is not unitary")
    m = np.eye(n, dtype=complex)
    idx = np.array([i - 1, j - 1])
    m[np.ix_(idx, idx)] = g
    return m


def compose(*stages):
    """Network for ``stages`` traversed left to right.

    In the row-input convention the photon sees ``stages[0]`` first, and the
    composite is the plain product ``stages[0] @ stages[1] @ ...``.
    """
    if not stages:
        raise ValueError("compose needs at least one matrix")
    out = np.asarray(stages[0], dtype=complex)
    for m in stages[1:]:
        m = np.asarray(m, dtype=complex)
        if m.shape != out.shape:
            raise ValueError(f"dimension mismatch: {out.shape} vs {m.shape}")
        out = out @ m
    return _check_finite(out)


def is_unitary(m, tol=1e-12):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if not np.all(np.isfinite(m)):
        return False
    residual = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(residual)) < tol)
