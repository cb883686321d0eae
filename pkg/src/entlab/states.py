"""Quantum states: validated density matrices, pure states and the families
used throughout the package (maximally entangled, Werner, Schmidt-form,
GHZ, the four-qubit pair and seeded random states).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import ContractError, DimensionError, DomainError, NotPSDError

TRACE_TOL = 1e-9
NORM_TOL = 1e-10

# four-qubit factor order: A, A', B, B' so the AA'|BB' cut is {0,1}|{2,3}
FOUR_QUBIT_DIMS = (2, 2, 2, 2)
FOUR_QUBIT_CUT = (2, 3)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix on ``dims``.

    Construction validates every invariant; pass ``check=False`` only for
    matrices already known to be valid.
    """

    mat: np.ndarray
    dims: tuple[int, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = la.as_matrix(self.mat)
        dims = la.check_shape(self.dims, m.shape[0])
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "dims", dims)
        if self.check:
            validate_density(m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def ptrace(self, keep) -> "DensityMatrix":
        kept = sorted({keep} if isinstance(keep, int) else set(keep))
        return DensityMatrix(
            la.partial_trace(self.mat, self.dims, kept),
            tuple(self.dims[k] for k in kept),
            check=False,
        )

    def purity(self) -> float:
        return float(np.real(np.vdot(self.mat, self.mat)))

    def eigvals(self) -> np.ndarray:
        return la.eigvals_desc(self.mat)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on ``dims``."""

    vec: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ContractError("state vector has non-finite entries")
        dims = la.check_shape(self.dims, v.size)
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ContractError(f"state vector norm {np.linalg.norm(v)!r} is not 1")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)
        object.__setattr__(self, "dims", dims)

    def dm(self) -> DensityMatrix:
        return DensityMatrix(la.projector(self.vec), self.dims, check=False)


def validate_density(m: np.ndarray) -> None:
    """Raise ``ContractError`` unless ``m`` is a valid density matrix."""
    if not la.is_hermitian(m):
        raise ContractError("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractError(f"density matrix trace {tr.real:.12g} != 1")
    w = la.eigvals_desc(m)
    if w[-1] < -la.TOL_PSD:
        raise NotPSDError(f"density matrix has eigenvalue {w[-1]:.3e}")


def as_density(state, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Coerce a PureState, DensityMatrix, or raw matrix to DensityMatrix."""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.dm()
    m = la.as_matrix(state)
    if dims is None:
        if m.shape == (4, 4):
            dims = (2, 2)
        else:
            raise DimensionError("dims required for raw matrices other than 4x4")
    return DensityMatrix(m, tuple(dims))


def max_entangled(d: int = 2) -> PureState:
    """``(1/sqrt(d)) sum_i |ii>`` on ``d x d``."""
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(v, (d, d))


def p_plus() -> DensityMatrix:
    return max_entangled(2).dm()


def werner(q: float) -> DensityMatrix:
    """``q P+ + (1-q) I/4`` on two qubits."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"Werner parameter must lie in [0, 1], got {q}")
    m = q * la.projector(max_entangled(2).vec) + (1.0 - q) * np.eye(4) / 4.0
    return DensityMatrix(m, (2, 2))


def schmidt_pure(alpha: float) -> PureState:
    """``alpha|00> + sqrt(1 - alpha^2)|11>``."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"Schmidt amplitude must lie in [0, 1], got {alpha}")
    v = np.zeros(4, dtype=complex)
    v[0] = alpha
    v[3] = np.sqrt(max(0.0, 1.0 - alpha * alpha))
    return PureState(v, (2, 2))


def ghz() -> PureState:
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1.0 / np.sqrt(2)
    return PureState(v, (2, 2, 2))


def _to_four_qubit_order(m: np.ndarray) -> np.ndarray:
    # built as A, B, A', B'; stored as A, A', B, B'
    return la.permute_factors(m, FOUR_QUBIT_DIMS, (0, 2, 1, 3))


def four_qubit_rho1() -> DensityMatrix:
    """``|0><0|_A (x) |0><0|_B (x) P+_{A'B'}`` in factor order A, A', B, B'."""
    zero = la.projector(la.ket(0, 2))
    m = la.tensor(zero, zero, la.projector(max_entangled(2).vec))
    return DensityMatrix(_to_four_qubit_order(m), FOUR_QUBIT_DIMS)


def four_qubit_rho2() -> DensityMatrix:
    """``P+_{AB} (x) P+_{A'B'}`` in factor order A, A', B, B'."""
    pp = la.projector(max_entangled(2).vec)
    return DensityMatrix(_to_four_qubit_order(la.tensor(pp, pp)), FOUR_QUBIT_DIMS)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure(dims: Sequence[int], seed) -> PureState:
    """Haar-random pure state: normalised standard complex Gaussian vector."""
    dims = la.check_shape(dims)
    rng = _rng(seed)
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), dims)


def random_density(dims: Sequence[int], rank: int | None = None, seed=None) -> DensityMatrix:
    """Mixed state from the induced measure.

    A Haar pure state on ``dims x rank`` with the ``rank``-dimensional
    ancilla traced out; ``rank = prod(dims)`` gives the Hilbert-Schmidt
    measure.
    """
    dims = la.check_shape(dims)
    d = int(np.prod(dims))
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise DomainError(f"rank must lie in [1, {d}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(0.5 * (m + m.conj().T), dims)
