"""Entanglement-induced state ordering under unilocal channels.

A unilocal channel ``E (x) id`` maps every input state to an output state;
plotting a measure before and after gives the ``[E_in, E_out]`` diagram.
Whenever two states swap order (``E(r1) > E(r2)`` but ``E(r1') < E(r2')``)
the channel does not preserve the ordering induced by the measure. This
module scans diagrams, groups points into horizontal fibers, searches for
swapping pairs, and checks the four-qubit example in which the maximally
entangled input ends up less entangled than a product-times-Bell input.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg as la
from . import measures as ms
from .channels import (
    KrausChannel,
    apply_matrix,
    random_channel,
    selective_check_channel,
    unilocal,
)
from .errors import DimensionError, DomainError
from .measures import MeasureKind
from .states import (
    FOUR_QUBIT_CUT,
    FOUR_QUBIT_DIMS,
    DensityMatrix,
    PureState,
    four_qubit_rho1,
    four_qubit_rho2,
    max_entangled,
    random_density,
    random_pure,
    schmidt_pure,
    werner,
)

log = logging.getLogger(__name__)

VIOLATION_MARGIN = 1e-4
FIBER_BIN_WIDTH = 1e-3
MONOTONE_TOL = 1e-7
FAMILIES = ("werner", "pure", "random")
DIAGRAM_MEASURES = (MeasureKind.CONCURRENCE, MeasureKind.TANGLE, MeasureKind.EOF, MeasureKind.NEGATIVITY)
_CONCURRENCE_MAPS = {
    MeasureKind.TANGLE: lambda c: c * c,
    MeasureKind.EOF: ms.eof_from_concurrence,
}


def worker_count() -> int:
    """Worker threads from ``ENTLAB_THREADS`` (default 1)."""
    raw = os.environ.get("ENTLAB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"ENTLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"ENTLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def pmap(fn: Callable, items: Sequence) -> list:
    """Order-preserving map, threaded when ``ENTLAB_THREADS > 1``."""
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for trial ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng([int(seed), int(index)])


def _as_two_qubit_channel(channel: KrausChannel, target: int = 0) -> KrausChannel:
    if channel.d_in == 2 and channel.d_out == 2:
        return unilocal(channel, target, (2, 2))
    if channel.d_in == 4 and channel.d_out == 4:
        return channel
    raise DimensionError(
        f"expected a qubit channel or a two-qubit channel, got {channel.d_in}->{channel.d_out}"
    )


def _measure_fn(measure) -> Callable[[np.ndarray], float]:
    kind = MeasureKind(measure)
    if kind not in DIAGRAM_MEASURES:
        raise DimensionError(f"measure {kind.value} is not available for two-qubit diagrams")
    return lambda m: ms.evaluate(kind, m)


@dataclass(frozen=True)
class DiagramPoint:
    family: str
    param: float
    measure: MeasureKind
    e_in: float
    e_out: float


def family_state(family: str, param: float, seed: int = 42) -> np.ndarray:
    """Two-qubit input matrix for one diagram sample."""
    if family == "werner":
        return werner(param).mat
    if family == "pure":
        return la.projector(schmidt_pure(param).vec)
    if family == "random":
        idx = int(param)
        rank = 1 + idx % 4
        if rank == 1:
            return la.projector(random_pure((2, 2), [seed, idx]).vec)
        return random_density((2, 2), rank, [seed, idx]).mat
    raise DomainError(f"unknown state family {family!r}")


def _samples(families: Iterable[str], grid: int, n_random: int) -> list[tuple[str, float]]:
    if grid < 1:
        raise DomainError("grid resolution must be >= 1")
    params = np.linspace(0.0, 1.0, grid) if grid > 1 else np.zeros(1)
    out = []
    for fam in families:
        if fam not in FAMILIES:
            raise DomainError(f"unknown state family {fam!r}")
        if fam == "random":
            out += [("random", float(i)) for i in range(n_random)]
        else:
            out += [(fam, float(p)) for p in params]
    return out


def _evaluate_samples(ch2, fn, samples, seed) -> list[tuple[float, float]]:
    def one(sample):
        fam, param = sample
        m = family_state(fam, param, seed)
        return fn(m), fn(apply_matrix(ch2, m))

    return pmap(one, samples)


def scan_diagram(
    channel: KrausChannel,
    measure="concurrence",
    families: Sequence[str] = ("werner", "pure"),
    grid: int = 200,
    seed: int = 42,
    n_random: int = 0,
) -> list[DiagramPoint]:
    """Sample the ``[E_in, E_out]`` diagram of a unilocal channel.

    Parameters
    ----------
    channel : KrausChannel
        Qubit channel (applied to the first qubit) or a full two-qubit map.
    measure : str or MeasureKind
        Concurrence, tangle, eof or negativity.
    families : sequence of str
        Any of ``"werner"`` (q on the grid), ``"pure"`` (Schmidt amplitude
        on the grid) and ``"random"`` (``n_random`` seeded states).
    grid : int
        Points per structured family on ``[0, 1]``; ``grid=1`` samples 0.
    """
    kind = MeasureKind(measure)
    fn = _measure_fn(kind)
    ch2 = _as_two_qubit_channel(channel)
    samples = _samples(families, grid, n_random)
    values = _evaluate_samples(ch2, fn, samples, seed)
    return [DiagramPoint(f, p, kind, ei, eo) for (f, p), (ei, eo) in zip(samples, values)]


@dataclass(frozen=True)
class HorizontalFiber:
    """Input values whose output falls in ``[lo, hi)``."""

    e_out_bin: tuple[float, float]
    e_in_values: tuple[float, ...]

    @property
    def e_in_range(self) -> tuple[float, float]:
        return min(self.e_in_values), max(self.e_in_values)


@dataclass(frozen=True)
class FiberReport:
    fibers: list[HorizontalFiber]
    overlaps: list[tuple[int, int]] = field(default_factory=list)


def fibers(points: Sequence[DiagramPoint], bin_width: float = FIBER_BIN_WIDTH) -> FiberReport:
    """Bucket points by output value and list overlapping fiber pairs.

    Two fibers overlap when their input-value ranges intersect; any such
    pair hosts states of (nearly) equal input entanglement but different
    output entanglement.
    """
    if not points:
        raise DomainError("fibers needs at least one point")
    buckets: dict[int, list[float]] = {}
    for pt in points:
        buckets.setdefault(int(math.floor(pt.e_out / bin_width + 1e-9)), []).append(pt.e_in)
    fib = [
        HorizontalFiber((k * bin_width, (k + 1) * bin_width), tuple(sorted(v)))
        for k, v in sorted(buckets.items())
    ]
    overlaps = []
    for i in range(len(fib)):
        lo_i, hi_i = fib[i].e_in_range
        for j in range(i + 1, len(fib)):
            lo_j, hi_j = fib[j].e_in_range
            if max(lo_i, lo_j) <= min(hi_i, hi_j):
                overlaps.append((i, j))
    return FiberReport(fib, overlaps)


@dataclass(frozen=True, eq=False)
class ViolationCertificate:
    """Pair of states whose order is reversed by ``channel``.

    ``rho1`` is the more entangled input, ``rho2`` the more entangled output:
    ``e_in1 > e_in2 + margin`` and ``e_out1 < e_out2 - margin``.
    """

    rho1: DensityMatrix
    rho2: DensityMatrix
    channel: KrausChannel
    measure: MeasureKind
    e_in1: float
    e_in2: float
    e_out1: float
    e_out2: float
    margin: float
    label1: tuple[str, float] = ("", 0.0)
    label2: tuple[str, float] = ("", 0.0)

    @property
    def strength(self) -> float:
        return min(self.e_in1 - self.e_in2, self.e_out2 - self.e_out1)

    def holds(self) -> bool:
        return self.e_in1 > self.e_in2 + self.margin and self.e_out1 < self.e_out2 - self.margin


def verify_certificate(cert: ViolationCertificate) -> bool:
    """Recompute all four values from scratch and re-check the margins."""
    fn = _measure_fn(cert.measure)
    ch2 = _as_two_qubit_channel(cert.channel)
    e_in1, e_in2 = fn(cert.rho1.mat), fn(cert.rho2.mat)
    e_out1 = fn(apply_matrix(ch2, cert.rho1.mat))
    e_out2 = fn(apply_matrix(ch2, cert.rho2.mat))
    return e_in1 > e_in2 + cert.margin and e_out1 < e_out2 - cert.margin


def _swap_at(e_in: np.ndarray, e_out: np.ndarray, order: np.ndarray, gap: float):
    """Some pair ``(i, j)`` with ``e_in[i] - e_in[j] >= gap`` and
    ``e_out[j] - e_out[i] >= gap``, or None. ``order`` sorts ``e_in``."""
    run_max, run_arg = -np.inf, -1
    lag = 0
    for i in order:
        while lag < len(order) and e_in[order[lag]] <= e_in[i] - gap:
            j = order[lag]
            if e_out[j] > run_max:
                run_max, run_arg = e_out[j], j
            lag += 1
        if run_arg >= 0 and run_max >= e_out[i] + gap:
            return int(i), int(run_arg)
    return None


def _best_swap(e_in: np.ndarray, e_out: np.ndarray, margin: float):
    """Strongest order reversal ``(i, j)`` exceeding ``margin``, or None.

    ``i`` has more input and less output than ``j``; strength is
    ``min(e_in[i] - e_in[j], e_out[j] - e_out[i])``, maximised by bisection.
    """
    order = np.argsort(e_in, kind="stable")
    lo = margin * (1.0 + 1e-9) + 1e-300
    pair = _swap_at(e_in, e_out, order, lo)
    if pair is None:
        return None
    hi = float(max(np.ptp(e_in), np.ptp(e_out))) + lo
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        found = _swap_at(e_in, e_out, order, mid)
        if found is None:
            hi = mid
        else:
            lo, pair = mid, found
        if hi - lo < 1e-12:
            break
    return pair


def _coarse_to_fine(n: int) -> list[float]:
    """``n`` grid points on [0, 1] in bit-reversed order, so any prefix is spread out."""
    if n <= 1:
        return [1.0] * n
    bits = max(1, (n - 1).bit_length())
    order = sorted(range(n), key=lambda i: int(format(i, f"0{bits}b")[::-1], 2))
    grid = np.linspace(0.0, 1.0, n)
    return [float(grid[i]) for i in order]


def _search_plan(strategy: str, budget: int) -> list[tuple[str, float]]:
    if strategy == "grid":
        n_fam = budget
    elif strategy == "random":
        n_fam = min(budget, max(2, budget // 10))
    else:
        raise DomainError(f"unknown search strategy {strategy!r}")
    n_p = n_fam // 2
    n_w = n_fam - n_p
    w = [("werner", q) for q in _coarse_to_fine(n_w)]
    p = [("pure", a) for a in _coarse_to_fine(n_p)]
    # interleave the two families so early stopping sees both
    mixed = [x for pair in zip(w, p) for x in pair] + w[len(p):]
    mixed += [("random", float(i)) for i in range(budget - n_fam)]
    return mixed


def find_violation(
    channel: KrausChannel,
    measure="concurrence",
    strategy: str = "grid",
    budget: int = 10_000,
    seed: int = 42,
    margin: float = VIOLATION_MARGIN,
    chunk: int = 512,
) -> ViolationCertificate | None:
    """Search for two states whose entanglement order the channel reverses.

    Structured families (Werner, Schmidt-form pure) are evaluated first,
    then seeded random states when ``strategy="random"``. Each evaluated
    state costs one unit of ``budget``. The search stops at the first chunk
    containing a reversal and returns the strongest one seen so far.

    Tangle and entanglement of formation are increasing functions of the
    concurrence, so their search runs on concurrence and the certificate
    values are mapped through that function.

    Returns
    -------
    ViolationCertificate or None
        None means no reversal was found within the budget, not that the
        channel preserves the ordering.
    """
    if budget < 1:
        raise DomainError("budget must be >= 1")
    kind = MeasureKind(measure)
    search_kind = MeasureKind.CONCURRENCE if kind in _CONCURRENCE_MAPS else kind
    fn = _measure_fn(search_kind)
    ch2 = _as_two_qubit_channel(channel)
    plan = _search_plan(strategy, budget)
    e_in = np.empty(len(plan))
    e_out = np.empty(len(plan))
    pair = None
    for start in range(0, len(plan), chunk):
        part = plan[start:start + chunk]
        vals = _evaluate_samples(ch2, fn, part, seed)
        e_in[start:start + len(part)] = [v[0] for v in vals]
        e_out[start:start + len(part)] = [v[1] for v in vals]
        n = start + len(part)
        pair = _best_swap(e_in[:n], e_out[:n], margin)
        if pair is not None:
            break
    if pair is None:
        return None
    i, j = pair
    vals = [e_in[i], e_in[j], e_out[i], e_out[j]]
    if kind in _CONCURRENCE_MAPS:
        vals = [_CONCURRENCE_MAPS[kind](v) for v in vals]
    cert = ViolationCertificate(
        DensityMatrix(family_state(*plan[i], seed=seed), (2, 2)),
        DensityMatrix(family_state(*plan[j], seed=seed), (2, 2)),
        channel,
        kind,
        *map(float, vals),
        margin=margin,
        label1=plan[i],
        label2=plan[j],
    )
    if not (cert.holds() and verify_certificate(cert)):
        log.warning("candidate certificate failed re-verification in %s units", kind.value)
        return None
    return cert


def four_qubit_counterexample() -> dict:
    """Check the four-qubit example of a maximally entangled state losing rank.

    Applies the selective-check channel to qubits A, A' of

    * ``rho1 = |00><00|_AB (x) P+_{A'B'}`` (left invariant), and
    * ``rho2 = P+_{AB} (x) P+_{A'B'}`` (mapped to
      ``rho1/2 + |11><11|_AB (x) I/4 / 2``),

    and quantifies entanglement across AA'|BB' with the negativity.
    """
    rho1, rho2 = four_qubit_rho1(), four_qubit_rho2()
    ch = unilocal(selective_check_channel(), (0, 1), FOUR_QUBIT_DIMS)
    out1 = apply_matrix(ch, rho1.mat)
    out2 = apply_matrix(ch, rho2.mat)
    one = la.projector(la.ket(1, 2))
    noise = la.permute_factors(la.tensor(one, one, np.eye(4) / 4.0), FOUR_QUBIT_DIMS, (0, 2, 1, 3))
    expected2 = 0.5 * rho1.mat + 0.5 * noise
    neg = {
        name: ms.negativity(m, FOUR_QUBIT_CUT, FOUR_QUBIT_DIMS)
        for name, m in (("rho1", rho1.mat), ("rho2", rho2.mat), ("rho1_out", out1), ("rho2_out", out2))
    }
    dev1 = float(np.linalg.norm(out1 - rho1.mat))
    dev2 = float(np.linalg.norm(out2 - expected2))
    checks = {
        "rho1_invariant": dev1 < 1e-10,
        "rho2_output_matches": dev2 < 1e-10,
        "convexity_bound": neg["rho2_out"] <= 0.5 * neg["rho1_out"] + 1e-9,
        "input_order": neg["rho2"] > neg["rho1"],
        "output_order_reversed": neg["rho2_out"] < neg["rho1_out"],
    }
    return {
        "rho1_deviation": dev1,
        "rho2_deviation": dev2,
        "negativity": neg,
        "checks": checks,
        "passed": all(checks.values()),
    }


def max_entangled_equivalence(
    channel: KrausChannel,
    trials: int = 100,
    seed: int = 42,
    measures: Sequence = DIAGRAM_MEASURES,
    tol: float = 1e-7,
) -> dict:
    """Spread of output entanglement over Haar-rotated maximally entangled inputs.

    Every input ``(U_A (x) U_B)|psi+>`` is maximally entangled; the report
    gives, per measure, the range of values after the unilocal channel.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    ch2 = _as_two_qubit_channel(channel)
    kinds = [MeasureKind(m) for m in measures]
    psi = max_entangled(2).vec

    def one(t):
        rng = trial_rng(seed, t)
        u = la.tensor(la.haar_unitary(2, rng), la.haar_unitary(2, rng))
        out = apply_matrix(ch2, la.projector(u @ psi))
        return [ms.evaluate(k, out) for k in kinds]

    vals = np.array(pmap(one, list(range(trials))))
    report = {}
    for col, k in enumerate(kinds):
        v = vals[:, col]
        report[k.value] = {
            "min": float(v.min()),
            "max": float(v.max()),
            "mean": float(v.mean()),
            "spread": float(v.max() - v.min()),
        }
    return {
        "trials": trials,
        "measures": report,
        "max_spread": max(r["spread"] for r in report.values()),
        "passed": all(r["spread"] < tol for r in report.values()),
    }


def _random_two_qubit(rng: np.random.Generator) -> np.ndarray:
    rank = int(rng.integers(1, 5))
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def axiom_suite(measure="concurrence", trials: int = 1000, seed: int = 42, pure_pairs: int | None = None) -> dict:
    """Sampled checks of the measure axioms for one two-qubit measure.

    Reports the worst deviation seen for local-unitary invariance,
    convexity and monotonicity under random unilocal channels, plus
    pure-state additivity of the entanglement entropy across AA'|BB'.
    """
    kind = MeasureKind(measure)
    fn = _measure_fn(kind)
    pure_pairs = max(1, trials // 10) if pure_pairs is None else pure_pairs

    def lu(t):
        rng = trial_rng(seed, t)
        rho = _random_two_qubit(rng)
        u = la.tensor(la.haar_unitary(2, rng), la.haar_unitary(2, rng))
        return abs(fn(u @ rho @ u.conj().T) - fn(rho))

    def convex(t):
        rng = trial_rng(seed + 1, t)
        a, b = _random_two_qubit(rng), _random_two_qubit(rng)
        p = float(rng.uniform())
        return fn(p * a + (1 - p) * b) - (p * fn(a) + (1 - p) * fn(b))

    def monotone(t):
        rng = trial_rng(seed + 2, t)
        rho = _random_two_qubit(rng)
        ch = random_channel(2, int(rng.integers(1, 5)), rng)
        side = int(rng.integers(0, 2))
        return fn(apply_matrix(unilocal(ch, side, (2, 2)), rho)) - fn(rho)

    def additive(t):
        rng = trial_rng(seed + 3, t)
        psi = random_pure((2, 2), rng)
        phi = random_pure((2, 2), rng)
        joint = la.permute_factors(la.tensor(psi.vec, phi.vec), FOUR_QUBIT_DIMS, (0, 2, 1, 3))
        total = ms.pure_entanglement(PureState(joint, FOUR_QUBIT_DIMS), FOUR_QUBIT_CUT)
        return abs(total - ms.pure_entanglement(psi) - ms.pure_entanglement(phi))

    idx = list(range(trials))
    results = {
        "lu_invariance": max(pmap(lu, idx)),
        "convexity": max(pmap(convex, idx)),
        "monotonicity": max(pmap(monotone, idx)),
        "additivity": max(pmap(additive, list(range(pure_pairs)))),
    }
    tolerances = {"lu_invariance": 1e-8, "convexity": 1e-8, "monotonicity": MONOTONE_TOL, "additivity": 1e-8}
    checks = {k: results[k] < tolerances[k] for k in results}
    return {
        "measure": kind.value,
        "trials": trials,
        "pure_pairs": pure_pairs,
        "worst": results,
        "tolerances": tolerances,
        "checks": checks,
        "passed": all(checks.values()),
    }
