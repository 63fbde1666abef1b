"""Acceptance criteria, shared by ``multiport-ghz verify`` and the test suite.

Each criterion returns a :class:`CriterionResult`; the runtime budget is part
of the criterion. ``level="quick"`` trims the largest photon numbers and
sample counts, ``level="full"`` runs the stated ranges.
"""

import time
from dataclasses import dataclass, field
from math import factorial, pi

import numpy as np

from . import linalg
from .evolve import brute_force_output, full_distribution, ghz_fidelity, postselect
from .fock import OutputPattern, PhotonFactor
from .permanent import perm_naive, perm_ryser
from .schemes import (
    closed_form,
    make_2n_scheme,
    make_even_scheme,
    make_odd_scheme,
    make_pbs_cascade,
    make_single_mode_scheme,
    ztl_allowed,
)

SUPPRESSION_TOL = 1e-10


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool = True
    elapsed: float = 0.0
    limit: float = float("inf")
    failures: list = field(default_factory=list)

    def check(self, ok, message):
        if not ok:
            self.passed = False
            self.failures.append(message)
        return ok

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number:2d}. {self.title} ({self.elapsed * 1e3:.1f} ms, limit {self.limit:g} s)"
        for f in self.failures[:5]:
            text += f"\n         - {f}"
        if len(self.failures) > 5:
            text += f"\n         - ... {len(self.failures) - 5} more"
        return text


class _Timer:
    def __init__(self, result):
        self.result = result

    def __enter__(self):
        self.start = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        r = self.result
        r.elapsed = time.perf_counter() - self.start
        r.check(r.elapsed < r.limit, f"runtime {r.elapsed:.3f} s exceeds {r.limit} s")
        return False


def _indistinguishable(n):
    return [PhotonFactor(k, 1.0, 0.0) for k in range(1, n + 1)]


def _rel(a, b):
    return abs(a - b) / abs(b)


def _oracle_slice(scheme):
    return brute_force_output(scheme.factors, scheme.unitaries, scheme.global_prefactor).slice(scheme.target_pattern)


def _max_amp_diff(s1, s2):
    return max(abs(s1.amplitude(a) - s2.amplitude(a)) for a in s1.amplitudes)


def _warm_up():
    perm_ryser(np.eye(2, dtype=complex))


def hom_zero(level="full"):
    _warm_up()
    r = CriterionResult(1, "HOM zero: N=2 indistinguishable photons, P(1,1) < 1e-12", limit=1e-3)
    with _Timer(r):
        p = postselect(_indistinguishable(2), linalg.build_dft(2), OutputPattern((1, 1))).probability
    r.check(p < 1e-12, f"P(1,1) = {p:.3e}")
    return r


def ztl_certification(level="full"):
    r = CriterionResult(2, "ZTL certification, N=3..7 indistinguishable DFT inputs", limit=30.0)
    n_max = 7 if level == "full" else 5
    with _Timer(r):
        for n in range(3, n_max + 1):
            dist = full_distribution(_indistinguishable(n), linalg.build_dft(n))
            for pattern, p in dist.items():
                allowed = ztl_allowed(pattern, n)
                if not allowed:
                    r.check(p < SUPPRESSION_TOL, f"N={n} {pattern}: ZTL-forbidden but P={p:.3e}")
                r.check(
                    allowed == (p > SUPPRESSION_TOL),
                    f"N={n} {pattern}: ZTL verdict {'allowed' if allowed else 'suppressed'} but P={p:.3e}",
                )
    return r


def two_n_port(level="full"):
    r = CriterionResult(3, "2N-port: P = (N!)^2/(2^(N-1) N^(2N)), GHZ phase (-1)^(N+1), N=2..6", limit=120.0)
    with _Timer(r):
        for n in range(2, 7):
            s = make_2n_scheme(n).run()
            ref = closed_form("P_2N", n)
            r.check(_rel(s.probability, ref) < 1e-8, f"N={n}: P={s.probability!r} vs {ref!r}")
            fid, phi = ghz_fidelity(s)
            r.check(fid > 1 - 1e-10, f"N={n}: fidelity {fid!r}")
            r.check(abs(np.exp(1j * phi) - (-1) ** (n + 1)) < 1e-8, f"N={n}: phase {phi!r}")
    return r


def odd_scheme(level="full"):
    r = CriterionResult(4, "Odd-N scheme: GHZ support, |a|=|b|, oracle-matched probability, N=3,5,7", limit=60.0)
    with _Timer(r):
        for n in (3, 5, 7):
            scheme = make_odd_scheme(n)
            s = scheme.run()
            mu, eta = "m" * n, "h" * n
            for a, amp in s.amplitudes.items():
                if a.label_string() not in (mu, eta):
                    r.check(abs(amp) ** 2 < SUPPRESSION_TOL, f"N={n}: {a} carries {abs(amp) ** 2:.3e}")
            amps = {a.label_string(): v for a, v in s.amplitudes.items()}
            r.check(abs(abs(amps[mu]) - abs(amps[eta])) < 1e-10, f"N={n}: |a|={abs(amps[mu])!r} |b|={abs(amps[eta])!r}")
            fid, _ = ghz_fidelity(s)
            r.check(fid > 1 - 1e-10, f"N={n}: fidelity {fid!r}")
            oracle = _oracle_slice(scheme)
            r.check(abs(s.probability - oracle.probability) < 1e-10, f"N={n}: P={s.probability!r} oracle {oracle.probability!r}")
            if n == 3:
                r.check(abs(s.probability - 1 / 12) < 1e-10, f"N=3: P={s.probability!r} != 1/12")
    return r


def even_suppression(level="full"):
    r = CriterionResult(5, "Odd-scheme input at even N: N=6,10 suppressed; N=4 survivors {1,3}, P=1/8", limit=120.0)
    sizes = (6, 10) if level == "full" else (6,)
    with _Timer(r):
        for n in sizes:
            p = make_odd_scheme(n, allow_even=True).run().probability
            r.check(p < SUPPRESSION_TOL, f"N={n}: coincidence probability {p:.3e}")
        s = make_odd_scheme(4, allow_even=True).run()
        r.check(s.survivors(SUPPRESSION_TOL) == {1, 3}, f"N=4: survivors {sorted(s.survivors(SUPPRESSION_TOL))}")
        r.check(abs(s.probability - 1 / 8) < 1e-10, f"N=4: P={s.probability!r}")
    return r


def even_scheme(level="full"):
    r = CriterionResult(6, "Even-N scheme: N=2 P=1/2, N=4,6 GHZ + oracle, N=8..12 self-consistency", limit=300.0)
    n_max = 12 if level == "full" else 8
    with _Timer(r):
        p2 = make_even_scheme(2).run().probability
        r.check(abs(p2 - 0.5) < 1e-12, f"N=2: P={p2!r}")
        for n in (4, 6):
            scheme = make_even_scheme(n)
            s = scheme.run()
            fid, _ = ghz_fidelity(s)
            r.check(fid > 1 - 1e-10, f"N={n}: fidelity {fid!r}")
            oracle = _oracle_slice(scheme)
            r.check(abs(s.probability - oracle.probability) < 1e-10, f"N={n}: P={s.probability!r} oracle {oracle.probability!r}")
        for n in range(8, n_max + 1, 2):
            scheme = make_even_scheme(n)
            first = scheme.run()
            second = scheme.run(threads=4)
            r.check(first.amplitudes == second.amplitudes, f"N={n}: repeated evaluation differs")
            r.check(first.survivors(SUPPRESSION_TOL) == {0, n}, f"N={n}: survivors {sorted(first.survivors())}")
    return r


def single_mode(level="full"):
    r = CriterionResult(7, "Single-mode GHZ: P = N!/(2^(N-1) N^N), independent of output mode, N=2..7", limit=60.0)
    with _Timer(r):
        for n in range(2, 8):
            ref = closed_form("P_SINGLE_MODE", n)
            probs = [make_single_mode_scheme(n, l).run().probability for l in range(1, n + 1)]
            r.check(_rel(probs[0], ref) < 1e-8, f"N={n}: P={probs[0]!r} vs {ref!r}")
            spread = max(probs) - min(probs)
            r.check(spread < 1e-12, f"N={n}: output-mode spread {spread:.3e}")
    return r


def pbs_cascade(level="full"):
    r = CriterionResult(8, "PBS cascade: P = 1/2^(N-1), GHZ fidelity, N=2..6", limit=30.0)
    with _Timer(r):
        for n in range(2, 7):
            s = make_pbs_cascade(n).run()
            ref = closed_form("P_PBS", n)
            r.check(abs(s.probability - ref) < 1e-10, f"N={n}: P={s.probability!r} vs {ref!r}")
            fid, _ = ghz_fidelity(s)
            r.check(fid > 1 - 1e-10, f"N={n}: fidelity {fid!r}")
    return r


def kernel_oracle(level="full", seed=20230101):
    r = CriterionResult(9, "Kernel oracle: Ryser vs naive permanent, dims 1..8", limit=30.0)
    samples = 1000 if level == "full" else 100
    rng = np.random.default_rng(seed)
    with _Timer(r):
        for n in range(1, 9):
            worst = 0.0
            for _ in range(samples):
                m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                ref = perm_naive(m)
                worst = max(worst, abs(perm_ryser(m) - ref) / abs(ref))
            r.check(worst < 1e-10, f"dim {n}: worst relative error {worst:.3e}")
    return r


def _normalization_cases(n_max):
    for n in range(1, n_max + 1):
        yield make_odd_scheme(n, allow_even=True)
        if n % 2 == 0:
            yield make_even_scheme(n)
        yield make_2n_scheme(n)
        yield make_single_mode_scheme(n)
        if n >= 2:
            yield make_pbs_cascade(n)


def normalization(level="full"):
    r = CriterionResult(10, "Global normalization: full distributions sum to 1, every scheme, N<=6", limit=60.0)
    n_max = 6 if level == "full" else 4
    with _Timer(r):
        for scheme in _normalization_cases(n_max):
            total = sum(full_distribution(scheme.factors, scheme.unitaries, scheme.global_prefactor).values())
            r.check(abs(total - 1) < 1e-10, f"{scheme.name.value} N={scheme.n}: total {total!r}")
    return r


CRITERIA = (
    hom_zero,
    ztl_certification,
    two_n_port,
    odd_scheme,
    even_suppression,
    even_scheme,
    single_mode,
    pbs_cascade,
    kernel_oracle,
    normalization,
)


def run_all(level="full", report=print):
    results = []
    for criterion in CRITERIA:
        result = criterion(level)
        if level != "full":
            result.title += " [quick: reduced range]"
        report(result.line())
        results.append(result)
    return results
