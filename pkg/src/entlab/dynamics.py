"""Entanglement decay under the local depolarizing semigroup

    E_t[rho] = exp(-t/T) rho + (1 - exp(-t/T)) I/2

applied to the first qubit of a pair. ``P+`` evolves through the Werner
family with ``q = exp(-t/T)`` and loses all entanglement at ``T ln 3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import measures as ms
from .channels import KrausChannel, apply_matrix, depolarizing, unilocal
from .errors import BracketError, DimensionError, DomainError, NoDecayError
from .measures import MeasureKind
from .states import DensityMatrix, as_density

ZERO_CONCURRENCE = 1e-9
BRACKET_FACTOR = 50.0


def _check_times(T: float, t: float = 0.0) -> None:
    if not T > 0.0:
        raise DomainError(f"decay time T must be positive, got {T}")
    if t < 0.0:
        raise DomainError(f"elapsed time must be non-negative, got {t}")


@dataclass(frozen=True)
class SemigroupChannel:
    T: float
    t: float

    def __post_init__(self):
        _check_times(self.T, self.t)

    @property
    def p(self) -> float:
        return math.exp(-self.t / self.T)

    def kraus(self) -> KrausChannel:
        return depolarizing(self.p)


def channel_at(T: float, t: float) -> KrausChannel:
    """Depolarizing channel with ``p = exp(-t/T)``."""
    return SemigroupChannel(T, t).kraus()


def tsep_analytic(T: float) -> float:
    """Separation time ``T ln 3`` of ``P+`` under one-sided depolarization."""
    _check_times(T)
    return T * math.log(3.0)


def _evolved(T: float, t: float, rho: np.ndarray) -> np.ndarray:
    return apply_matrix(unilocal(channel_at(T, t), 0, (2, 2)), rho)


def tsep_numeric(T: float, initial, tol: float = 1e-6) -> float:
    """Bisection for the first time the concurrence reaches zero.

    The bracket is ``[0, 50 T]``; concurrence below 1e-9 counts as zero.

    Raises
    ------
    NoDecayError
        The initial state is already separable.
    BracketError
        Entanglement survives past the upper end of the bracket.
    """
    _check_times(T)
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    rho = as_density(initial)
    if rho.dims != (2, 2):
        raise DimensionError("separation time is defined here for two-qubit states")
    m = rho.mat
    if ms.concurrence(m) < ZERO_CONCURRENCE:
        raise NoDecayError("no decay to detect: initial state has zero concurrence")
    lo, hi = 0.0, BRACKET_FACTOR * T
    if ms.concurrence(_evolved(T, hi, m)) >= ZERO_CONCURRENCE:
        raise BracketError(f"concurrence still positive at t = {hi:g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ms.concurrence(_evolved(T, mid, m)) < ZERO_CONCURRENCE:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: DensityMatrix
    value: float


@dataclass(frozen=True)
class Trajectory:
    T: float
    measure: MeasureKind
    samples: tuple[TrajectorySample, ...]

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples])


def trajectory(T: float, initial, times: Sequence[float], measure="concurrence") -> Trajectory:
    """States and measure values along the depolarizing semigroup."""
    _check_times(T)
    times = [float(t) for t in times]
    if not times or any(b <= a for a, b in zip(times, times[1:])):
        raise DomainError("time grid must be non-empty and strictly increasing")
    if times[0] < 0.0:
        raise DomainError("times must be non-negative")
    kind = MeasureKind(measure)
    rho = as_density(initial)
    samples = []
    for t in times:
        out = _evolved(T, t, rho.mat)
        out = 0.5 * (out + out.conj().T)
        samples.append(TrajectorySample(t, DensityMatrix(out, rho.dims), ms.evaluate(kind, out)))
    return Trajectory(T, kind, tuple(samples))


def werner_concurrence_at(T: float, t: float) -> float:
    """Closed form ``max(0, (3 exp(-t/T) - 1)/2)`` along the P+ trajectory."""
    _check_times(T, t)
    return max(0.0, (3.0 * math.exp(-t / T) - 1.0) / 2.0)
