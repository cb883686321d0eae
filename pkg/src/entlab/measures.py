"""Entanglement measures and entropies.

All logarithms are base 2, so entropies and entanglement of formation are
in ebits. Two-qubit measures (concurrence, tangle, entanglement of
formation) use Wootters' closed form; negativity and the separability
indicator work on any bipartite cut via the partial transpose.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from . import linalg as la
from .errors import DimensionError
from .states import DensityMatrix, PureState, as_density, ghz

ZERO_TOL = 1e-9


class MeasureKind(str, enum.Enum):
    CONCURRENCE = "concurrence"
    TANGLE = "tangle"
    EOF = "eof"
    NEGATIVITY = "negativity"
    DELTA = "delta"
    PURE_ENTROPY = "pure_entropy"

    @property
    def two_qubit_only(self) -> bool:
        return self in (MeasureKind.CONCURRENCE, MeasureKind.TANGLE, MeasureKind.EOF)


@dataclass(frozen=True)
class MeasureValue:
    kind: MeasureKind
    value: float


def _mat(rho) -> np.ndarray:
    if isinstance(rho, PureState):
        return la.projector(rho.vec)
    return la.as_matrix(rho)


def _dims(rho, default=None) -> tuple[int, ...]:
    dims = getattr(rho, "dims", None)
    if dims is not None:
        return tuple(dims)
    if default is not None:
        return tuple(default)
    n = _mat(rho).shape[0]
    if n == 4:
        return (2, 2)
    raise DimensionError("state dimensions are required for this matrix")


def _entropy_from_probs(p: np.ndarray) -> float:
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def binary_entropy(x: float) -> float:
    """``h(x) = -x log2 x - (1 - x) log2(1 - x)`` with ``h(0) = h(1) = 0``."""
    x = min(max(float(x), 0.0), 1.0)
    return _entropy_from_probs(np.array([x, 1.0 - x]))


def von_neumann_entropy(rho) -> float:
    w = np.clip(la.eigvals_desc(_mat(rho)), 0.0, None)
    return max(0.0, _entropy_from_probs(w))


def linear_entropy(rho) -> float:
    """``2 (1 - Tr rho^2)``."""
    m = _mat(rho)
    return float(2.0 * (1.0 - np.real(np.vdot(m, m))))


def _two_qubit(rho) -> np.ndarray:
    m = _mat(rho)
    if m.shape != (4, 4) or _dims(rho) != (2, 2):
        raise DimensionError(f"two-qubit measure needs a 2x2 state, got shape {m.shape}")
    return m


def wootters_lambdas(rho) -> np.ndarray:
    """Descending eigenvalues of ``rho (Y x Y) rho* (Y x Y)``."""
    return wootters_roots(rho) ** 2


def wootters_roots(rho) -> np.ndarray:
    """Square roots of :func:`wootters_lambdas`, computed without squaring."""
    return _backend.wootters_roots(_two_qubit(rho))


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)`` of a two-qubit state.

    The ``l_i`` are square roots of the spectrum of the R-matrix, obtained
    as singular values of ``W^T (Y x Y) W`` where ``rho = W W^dagger``.
    """
    s = wootters_roots(rho)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def tangle(rho) -> float:
    return concurrence(rho) ** 2


def eof_from_concurrence(c: float) -> float:
    tau = min(max(c * c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - tau)))


def eof(rho) -> float:
    """Two-qubit entanglement of formation in ebits."""
    return eof_from_concurrence(concurrence(rho))


def _cut_indices(dims: Sequence[int], cut) -> list[int]:
    n = len(dims)
    if cut is None:
        if n == 2:
            return [1]
        if n == 4:
            return [2, 3]
        raise DimensionError(f"no default bipartition for {n} factors; pass cut")
    cut = sorted({cut} if isinstance(cut, int) else set(cut))
    if not cut or len(cut) >= n or cut[0] < 0 or cut[-1] >= n:
        raise DimensionError(f"cut {cut} is not a proper bipartition of {n} factors")
    return cut


def pt_spectrum(rho, cut=None, dims=None) -> np.ndarray:
    """Descending spectrum of the partial transpose over the factors in ``cut``."""
    dims = _dims(rho, dims)
    cut = _cut_indices(dims, cut)
    return la.eigvals_desc(la.partial_transpose(_mat(rho), dims, cut))


def negativity(rho, cut=None, dims=None) -> float:
    """``2 * sum |negative eigenvalues of rho^T_cut|``; equals 1 for P+ on 2x2.

    ``cut`` lists the factors on one side of the bipartition (default:
    the second qubit of a pair, or B, B' of the four-qubit ordering).
    """
    w = pt_spectrum(rho, cut, dims)
    return float(2.0 * -np.sum(w[w < 0.0]))


@dataclass(frozen=True)
class SeparabilityVerdict:
    entangled: bool
    min_pt_eigenvalue: float
    exact: bool


def separability(rho, cut=None, dims=None, tol: float = la.TOL_PSD) -> SeparabilityVerdict:
    """PPT test. Exact (iff separable) when the cut is 2x2 or 2x3."""
    dims = _dims(rho, dims)
    side = _cut_indices(dims, cut)
    d_b = int(np.prod([dims[k] for k in side]))
    d_a = int(np.prod(dims)) // d_b
    mn = float(pt_spectrum(rho, side, dims)[-1])
    return SeparabilityVerdict(mn < -tol, mn, d_a * d_b <= 6)


def delta_measure(rho, cut=None, dims=None) -> int:
    """1 if the PPT test detects entanglement, else 0."""
    return int(separability(rho, cut, dims).entangled)


def pure_entanglement(psi: PureState, cut=None) -> float:
    """Entropy of entanglement (ebits) across ``cut``."""
    dims = psi.dims
    side = _cut_indices(dims, cut)
    rest = [k for k in range(len(dims)) if k not in side]
    reduced = la.partial_trace(la.projector(psi.vec), dims, rest)
    return von_neumann_entropy(reduced)


_EVALUATORS = {
    MeasureKind.CONCURRENCE: lambda r, cut: concurrence(r),
    MeasureKind.TANGLE: lambda r, cut: tangle(r),
    MeasureKind.EOF: lambda r, cut: eof(r),
    MeasureKind.NEGATIVITY: lambda r, cut: negativity(r, cut),
    MeasureKind.DELTA: lambda r, cut: float(delta_measure(r, cut)),
}


def evaluate(kind, rho, cut=None) -> float:
    """Value of measure ``kind`` for ``rho``."""
    kind = MeasureKind(kind)
    if kind is MeasureKind.PURE_ENTROPY:
        if not isinstance(rho, PureState):
            raise DimensionError("pure_entropy needs a PureState")
        return pure_entanglement(rho, cut)
    return _EVALUATORS[kind](rho, cut)


def measure_value(kind, rho, cut=None) -> MeasureValue:
    kind = MeasureKind(kind)
    return MeasureValue(kind, evaluate(kind, rho, cut))


def ghz_assistance_demo() -> dict:
    """Entanglement of assistance for the AB marginal of a GHZ state.

    Measuring C in the ``|+>, |->`` basis splits ``rho_AB`` into two
    maximally entangled states with probability 1/2 each.
    """
    psi = ghz()
    rho_ab = la.partial_trace(la.projector(psi.vec), psi.dims, [0, 1])
    t = psi.vec.reshape(4, 2)
    outcomes = []
    for sign, label in ((1.0, "+"), (-1.0, "-")):
        c_vec = np.array([1.0, sign]) / np.sqrt(2)
        branch = t @ c_vec.conj()
        prob = float(np.vdot(branch, branch).real)
        omega = la.projector(branch / np.sqrt(prob))
        outcomes.append((label, prob, omega))
    mixture = sum(p * w for _, p, w in outcomes)
    residual = float(np.linalg.norm(mixture - rho_ab))
    c_rho = concurrence(DensityMatrix(rho_ab, (2, 2)))
    c_out = {label: concurrence(DensityMatrix(w, (2, 2))) for label, _, w in outcomes}
    return {
        "concurrence_rho_ab": c_rho,
        "probabilities": {label: p for label, p, _ in outcomes},
        "concurrence_omega": c_out,
        "assisted_average": float(sum(p * c_out[label] for label, p, _ in outcomes)),
        "mixture_residual": residual,
        "rho_ab_separable": not separability(rho_ab, dims=(2, 2)).entangled,
    }


def assistance_lower_bound(rho, samples: int = 200, seed=42) -> float:
    """Best average concurrence over sampled pure-state decompositions.

    Decompositions are generated by measuring a purifying ancilla in Haar
    random bases. This is a lower bound on the entanglement of assistance,
    never its exact value.
    """
    rho = as_density(rho)
    w, v = la.herm_eig(rho.mat)
    keep = w > 1e-12
    w, v = w[keep], v[:, keep]
    r = w.size
    k = max(r, 4)
    rng = np.random.default_rng(seed)
    base = v * np.sqrt(w)  # columns sqrt(w_i) |e_i>
    best = 0.0
    for _ in range(samples):
        u = la.haar_unitary(k, rng)[:, :r]
        total = 0.0
        for j in range(k):
            branch = base @ u[j]
            p = float(np.vdot(branch, branch).real)
            if p > 1e-14:
                total += p * concurrence(la.projector(branch / np.sqrt(p)))
        best = max(best, total)
    return best
