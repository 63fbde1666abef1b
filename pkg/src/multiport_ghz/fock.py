"""Photons with one binary internal degree of freedom, and output bookkeeping."""

from dataclasses import dataclass
from enum import IntEnum
from itertools import product
from typing import Iterator, Sequence

import numpy as np


class InternalLabel(IntEnum):
    MU = 0
    ETA = 1

    @property
    def symbol(self) -> str:
        return "m" if self is InternalLabel.MU else "h"


@dataclass(frozen=True)
class PhotonFactor:
    """One creation-operator factor ``amp_mu a_mu^+ + amp_eta a_eta^+`` on ``in_mode``.

    Several factors may share an input mode.
    """

    in_mode: int
    amp_mu: complex
    amp_eta: complex

    def __post_init__(self):
        if self.in_mode < 1:
            raise ValueError(f"in_mode is 1-based, got {self.in_mode}")
        norm = abs(self.amp_mu) ** 2 + abs(self.amp_eta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"internal state not normalized: |a_mu|^2 + |a_eta|^2 = {norm!r}")
        object.__setattr__(self, "amp_mu", complex(self.amp_mu))
        object.__setattr__(self, "amp_eta", complex(self.amp_eta))

    def amplitude(self, label: InternalLabel) -> complex:
        return self.amp_mu if label is InternalLabel.MU else self.amp_eta


@dataclass(frozen=True)
class OutputPattern:
    """Photon counts per output spatial mode, ``|n_1, ..., n_M>``."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if not counts:
            raise ValueError("pattern needs at least one mode")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative occupation in {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def modes(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def single_occupancy(self) -> bool:
        return all(c <= 1 for c in self.counts)

    def output_modes(self) -> list:
        """Ordered multiset of occupied modes (1-based), mode ``l`` repeated ``n_l`` times."""
        return [l + 1 for l, c in enumerate(self.counts) for _ in range(c)]

    def __str__(self):
        return "(" + ",".join(map(str, self.counts)) + ")"


@dataclass(frozen=True)
class InternalAssignment:
    """Per-mode split of a pattern's photons into mu and eta counts."""

    mu: tuple
    eta: tuple

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(c) for c in self.mu))
        object.__setattr__(self, "eta", tuple(int(c) for c in self.eta))
        if len(self.mu) != len(self.eta):
            raise ValueError("mu and eta occupations must cover the same modes")
        if any(c < 0 for c in self.mu + self.eta):
            raise ValueError("negative occupation")

    @classmethod
    def from_labels(cls, pattern: OutputPattern, labels: Sequence[InternalLabel]) -> "InternalAssignment":
        """Assignment for a single-occupancy pattern from one label per occupied mode."""
        if not pattern.single_occupancy:
            raise ValueError("label strings only describe single-occupancy patterns")
        occupied = [l for l, c in enumerate(pattern.counts) if c]
        if len(labels) != len(occupied):
            raise ValueError(f"expected {len(occupied)} labels, got {len(labels)}")
        mu = [0] * pattern.modes
        eta = [0] * pattern.modes
        for l, label in zip(occupied, labels):
            if InternalLabel(label) is InternalLabel.MU:
                mu[l] = 1
            else:
                eta[l] = 1
        return cls(tuple(mu), tuple(eta))

    @classmethod
    def uniform(cls, pattern: OutputPattern, label: InternalLabel) -> "InternalAssignment":
        zeros = (0,) * pattern.modes
        if label is InternalLabel.MU:
            return cls(pattern.counts, zeros)
        return cls(zeros, pattern.counts)

    @property
    def pattern(self) -> OutputPattern:
        return OutputPattern(tuple(m + h for m, h in zip(self.mu, self.eta)))

    @property
    def n_eta(self) -> int:
        return sum(self.eta)

    @property
    def n_mu(self) -> int:
        return sum(self.mu)

    def slot_occupations(self) -> tuple:
        """``(label, mode)`` slot counts, mu block first."""
        return self.mu + self.eta

    def columns(self) -> list:
        """Output slots ``(label, mode)`` with mode 1-based, repeated per occupation."""
        cols = []
        for label, occ in ((InternalLabel.MU, self.mu), (InternalLabel.ETA, self.eta)):
            for l, c in enumerate(occ):
                cols.extend([(label, l + 1)] * c)
        return cols

    def label_string(self) -> str:
        """``mmh...`` over occupied modes for single occupancy, else ``2m0h,1m1h,...``."""
        if all(m + h <= 1 for m, h in zip(self.mu, self.eta)):
            return "".join("m" if m else "h" for m, h in zip(self.mu, self.eta) if m + h)
        return ",".join(f"{m}m{h}h" for m, h in zip(self.mu, self.eta))

    def __str__(self):
        return self.label_string()


def enumerate_patterns(total_photons: int, modes: int) -> Iterator[OutputPattern]:
    """All compositions of ``total_photons`` into ``modes`` parts, lexicographically descending.

    >>> [p.counts for p in enumerate_patterns(2, 2)]
    [(2, 0), (1, 1), (0, 2)]
    """
    if total_photons < 0 or modes < 1:
        raise ValueError("need total_photons >= 0 and modes >= 1")

    def rec(remaining, slots):
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining, -1, -1):
            for rest in rec(remaining - first, slots - 1):
                yield (first,) + rest

    for counts in rec(total_photons, modes):
        yield OutputPattern(counts)


def enumerate_assignments(pattern: OutputPattern) -> Iterator[InternalAssignment]:
    """Every split ``n_mu,l + n_eta,l = n_l``; for all-ones patterns, mu/eta strings in binary order."""
    for mu in product(*[range(c, -1, -1) for c in pattern.counts]):
        eta = tuple(c - m for c, m in zip(pattern.counts, mu))
        yield InternalAssignment(mu, eta)


def count_assignments(pattern: OutputPattern) -> int:
    return int(np.prod([c + 1 for c in pattern.counts]))
