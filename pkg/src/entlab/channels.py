"""Completely positive trace-preserving maps in Kraus form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import ContractError, DimensionError, DomainError
from .states import DensityMatrix, as_density, max_entangled

TP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_k K rho K^dagger``.

    Each Kraus operator is ``d_out x d_in``. Trace preservation is checked
    on construction unless ``check=False``.
    """

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int
    name: str = "custom"
    check: bool = True

    def __post_init__(self):
        ks = []
        for k in self.kraus:
            k = la.as_matrix(k).copy()
            if k.shape != (self.d_out, self.d_in):
                raise DimensionError(
                    f"Kraus operator of shape {k.shape}, expected {(self.d_out, self.d_in)}"
                )
            k.setflags(write=False)
            ks.append(k)
        if not ks:
            raise ContractError("a channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus", tuple(ks))
        if self.check:
            res = tp_residual(self)
            if res > TP_TOL:
                raise ContractError(f"Kraus operators are not trace preserving (residual {res:.3e})")

    def __call__(self, rho):
        return apply(self, rho)


def tp_residual(ch: KrausChannel) -> float:
    """Frobenius norm of ``sum K^dagger K - I``."""
    s = sum(k.conj().T @ k for k in ch.kraus)
    return float(np.linalg.norm(s - np.eye(ch.d_in)))


def apply_matrix(ch: KrausChannel, m: np.ndarray) -> np.ndarray:
    """Kraus action on a raw matrix, no validation."""
    out = np.zeros((ch.d_out, ch.d_out), dtype=complex)
    for k in ch.kraus:
        out += k @ m @ k.conj().T
    return out


def apply(ch: KrausChannel, rho) -> DensityMatrix:
    """Apply ``ch`` to a state whose full dimension equals ``ch.d_in``.

    The output keeps the input's factorisation when dimensions are preserved,
    otherwise it is labelled as a single factor.
    """
    rho = as_density(rho)
    if rho.dim != ch.d_in:
        raise DimensionError(f"channel expects dimension {ch.d_in}, state has {rho.dim}")
    out = apply_matrix(ch, rho.mat)
    dims = rho.dims if ch.d_out == ch.d_in else (ch.d_out,)
    return DensityMatrix(0.5 * (out + out.conj().T), dims)


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),), d, d, name="identity")


def unitary_channel(u) -> KrausChannel:
    u = la.as_matrix(u)
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-10):
        raise ContractError("matrix is not unitary")
    return KrausChannel((u,), u.shape[1], u.shape[0], name="unitary")


def depolarizing(p: float) -> KrausChannel:
    """Qubit channel ``rho -> p rho + (1 - p) I/2``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"depolarizing parameter must lie in [0, 1], got {p}")
    a = np.sqrt((1.0 + 3.0 * p) / 4.0)
    b = np.sqrt((1.0 - p) / 4.0)
    kraus = (a * la.I2, b * la.SIGMA_X, b * la.SIGMA_Y, b * la.SIGMA_Z)
    return KrausChannel(kraus, 2, 2, name="depolarizing")


def completely_depolarizing(d: int = 2) -> KrausChannel:
    """``X -> Tr(X) I/d`` via the ``d^2`` matrix units ``E_ij / sqrt(d)``."""
    kraus = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0 / np.sqrt(d)
            kraus.append(e)
    return KrausChannel(tuple(kraus), d, d, name="completely-depolarizing")


def selective_check_channel() -> KrausChannel:
    """Two-qubit map ``P0 (.) P0 (x) id + P1 (.) P1 (x) A`` on qubits A, A'.

    ``A[X] = Tr(X) I/2`` contracts A' to the maximally mixed state whenever
    A is found in ``|1>``; A' is untouched when A is in ``|0>``.
    """
    p0 = la.projector(la.ket(0, 2))
    p1 = la.projector(la.ket(1, 2))
    kraus = [la.tensor(p0, la.I2)]
    kraus += [la.tensor(p1, k) for k in completely_depolarizing(2).kraus]
    return KrausChannel(tuple(kraus), 4, 4, name="selective-check")


def unilocal(ch: KrausChannel, target: int | Sequence[int], dims: Sequence[int]) -> KrausChannel:
    """Extend ``ch`` to act on factor(s) ``target`` of ``dims``, identity elsewhere.

    ``target`` may be a contiguous run of factors (e.g. ``(0, 1)`` for a
    two-qubit channel on A, A').
    """
    dims = la.check_shape(dims)
    targets = [target] if isinstance(target, (int, np.integer)) else sorted(target)
    if targets != list(range(targets[0], targets[-1] + 1)):
        raise DimensionError("unilocal targets must be contiguous factors")
    if targets[0] < 0 or targets[-1] >= len(dims):
        raise DimensionError(f"target {targets} out of range for {len(dims)} factors")
    d_t = int(np.prod([dims[t] for t in targets]))
    if ch.d_in != d_t or ch.d_out != d_t:
        raise DimensionError(f"channel acts on dimension {ch.d_in}, target factors have {d_t}")
    left = int(np.prod(dims[: targets[0]]))
    right = int(np.prod(dims[targets[-1] + 1:]))
    kraus = tuple(la.tensor(np.eye(left), k, np.eye(right)) for k in ch.kraus)
    d = int(np.prod(dims))
    return KrausChannel(kraus, d, d, name=f"unilocal[{ch.name}]", check=False)


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second o first``."""
    if first.d_out != second.d_in:
        raise DimensionError("channel dimensions do not compose")
    kraus = tuple(b @ a for b in second.kraus for a in first.kraus)
    return KrausChannel(kraus, first.d_in, second.d_out, name=f"{second.name}o{first.name}", check=False)


def random_channel(d: int, n_kraus: int, seed) -> KrausChannel:
    """Random CPTP map from a Haar isometry ``C^d -> C^d (x) C^n_kraus``."""
    rng = np.random.default_rng(seed)
    u = la.haar_unitary(d * n_kraus, rng)
    iso = u[:, :d].reshape(d, n_kraus, d)
    kraus = tuple(iso[:, k, :].copy() for k in range(n_kraus))
    return KrausChannel(kraus, d, d, name="random")


def choi(ch: KrausChannel) -> DensityMatrix:
    """``(E (x) id)[P+]`` with P+ on ``d_in x d_in``; factors (d_out, d_in)."""
    pp = max_entangled(ch.d_in).dm()
    ext = KrausChannel(
        tuple(la.tensor(k, np.eye(ch.d_in)) for k in ch.kraus),
        ch.d_in**2,
        ch.d_out * ch.d_in,
        check=False,
    )
    out = apply_matrix(ext, pp.mat)
    return DensityMatrix(0.5 * (out + out.conj().T), (ch.d_out, ch.d_in))


def from_choi(c, d_in: int, d_out: int, tol: float = 1e-12) -> KrausChannel:
    """Kraus channel recovered from a Choi state (inverse of :func:`choi`)."""
    m = la.as_matrix(getattr(c, "mat", c)) * d_in
    w, v = la.herm_eig(m)
    kraus = []
    for val, vec in zip(w, v.T):
        if val > tol:
            # vec indexes (out, in); K[o, i] = sqrt(val) vec[o*d_in + i]
            kraus.append(np.sqrt(val) * vec.reshape(d_out, d_in))
    return KrausChannel(tuple(kraus), d_in, d_out, name="from-choi")


@dataclass(frozen=True)
class EBVerdict:
    """Entanglement-breaking test result.

    ``exact`` is False when PPT is only a necessary condition for a
    separable Choi state (dimensions beyond 2x2 / 2x3).
    """

    breaking: bool
    min_pt_eigenvalue: float
    exact: bool

    @property
    def label(self) -> str:
        return "exact" if self.exact else "PPT-necessary-only"


def ppt_is_exact(da: int, db: int) -> bool:
    return da * db <= 6


def is_entanglement_breaking(ch: KrausChannel, tol: float = la.TOL_PSD) -> EBVerdict:
    """Test whether the Choi state of ``ch`` has a positive partial transpose."""
    c = choi(ch)
    pt = la.partial_transpose(c.mat, c.dims, [1])
    mn = float(la.eigvals_desc(pt)[-1])
    return EBVerdict(mn >= -tol, mn, ppt_is_exact(ch.d_out, ch.d_in))


@dataclass(frozen=True)
class CPTPReport:
    tp_residual: float
    choi_min_eigenvalue: float
    tp_ok: bool
    cp_ok: bool

    @property
    def ok(self) -> bool:
        return self.tp_ok and self.cp_ok


def validate_cptp(ch: KrausChannel, tol: float = TP_TOL) -> CPTPReport:
    """Re-check trace preservation and Choi positivity numerically."""
    res = tp_residual(ch)
    cm = np.zeros((ch.d_out * ch.d_in,) * 2, dtype=complex)
    pp = la.projector(max_entangled(ch.d_in).vec)
    for k in ch.kraus:
        kk = la.tensor(k, np.eye(ch.d_in))
        cm += kk @ pp @ kk.conj().T
    mn = float(la.eigvals_desc(cm)[-1])
    return CPTPReport(res, mn, res <= tol, mn >= -la.TOL_PSD)
