"""Kraus-operator noise channels for single qubits and qubit registers."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qmat import (
    ALGEBRAIC_TOL,
    I2,
    LOWERING,
    SIGMA_Z,
    DimensionError,
    as_matrix,
    dagger,
    partial_trace,
    tensor_all,
)


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map ``rho -> sum_k E_k rho E_k^dagger`` on a fixed dimension.

    Completeness is checked at construction with ``check_tol``; pass
    ``check_tol=None`` to skip the check (only for deliberately invalid sets).
    """

    dim: int
    operators: tuple
    label: str = ""
    check_tol: float = field(default=1e-10, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(as_matrix(e) for e in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for e in ops:
            if e.shape != (self.dim, self.dim):
                raise DimensionError(
                    f"Kraus operator of shape {e.shape} does not match channel dim {self.dim}"
                )
            e.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        if self.check_tol is not None:
            err = self.completeness_error()
            if err > self.check_tol:
                raise ValueError(
                    f"Kraus set '{self.label}' is not trace preserving: "
                    f"|sum E^dag E - I| = {err:.3e}"
                )

    def __len__(self):
        return len(self.operators)

    def completeness_error(self) -> float:
        s = sum(dagger(e) @ e for e in self.operators)
        return float(np.abs(s - np.eye(self.dim)).max())

    def __call__(self, rho):
        return apply_channel(rho, self)


def check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel(dim, (np.eye(dim),), "I")


def ad_kraus(p: float) -> KrausChannel:
    """Amplitude damping: |1> decays to |0> with probability ``p``."""
    p = check_probability(p)
    e0 = np.diag([1.0, np.sqrt(1.0 - p)])
    e1 = np.sqrt(p) * LOWERING
    return KrausChannel(2, (e0, e1), "AD")


def pd_kraus(p: float) -> KrausChannel:
    """Phase damping; coherences shrink by sqrt(1 - p), populations untouched."""
    p = check_probability(p)
    e0 = np.diag([1.0, np.sqrt(1.0 - p)])
    e1 = np.diag([0.0, np.sqrt(p)])
    return KrausChannel(2, (e0, e1), "PD")


def pd_kraus_recombined(p: float) -> KrausChannel:
    """Phase damping written as a random phase flip: {sqrt(b) I, sqrt(1-b) Z}."""
    p = check_probability(p)
    beta = (1.0 + np.sqrt(1.0 - p)) / 2.0
    return KrausChannel(2, (np.sqrt(beta) * I2, np.sqrt(1.0 - beta) * SIGMA_Z), "PD")


def combined_kraus(p_ad: float, p_pd: float) -> KrausChannel:
    """Simultaneous amplitude and phase damping as a three-operator set.

    The dephasing operator carries 0 in its upper-left entry; with 1 there the
    set would not be trace preserving.
    """
    p_ad = check_probability(p_ad, "p_ad")
    p_pd = check_probability(p_pd, "p_pd")
    e0 = np.diag([1.0, np.sqrt((1.0 - p_ad) * (1.0 - p_pd))])
    e1 = np.diag([0.0, np.sqrt((1.0 - p_ad) * p_pd)])
    e2 = np.sqrt(p_ad) * LOWERING
    return KrausChannel(2, (e0, e1, e2), "AD+PD")


def combined_kraus_primed(p_ad: float, p_pd: float) -> KrausChannel:
    """Equivalent combined-noise set with an explicit Z-type dephasing error.

    Obtained from :func:`combined_kraus` by the orthogonal mixing
    ``[[x, y], [y, -x]] / sqrt(x^2 + y^2)`` of its first two operators, with
    ``x = 1 + sqrt((1-p_ad)(1-p_pd))`` and ``y = sqrt((1-p_ad) p_pd)``.
    """
    p_ad = check_probability(p_ad, "p_ad")
    p_pd = check_probability(p_pd, "p_pd")
    x = 1.0 + np.sqrt((1.0 - p_ad) * (1.0 - p_pd))
    y = np.sqrt((1.0 - p_ad) * p_pd)
    norm = np.hypot(x, y)
    e0 = (x / norm) * np.diag([1.0, x + y * y / x - 1.0])
    e1 = (y / norm) * SIGMA_Z
    e2 = np.sqrt(p_ad) * LOWERING
    return KrausChannel(2, (e0, e1, e2), "AD+PD'")


def kappa_pair(p_ad: float, kappa: float) -> float:
    """Dephasing probability reached when amplitude damping has reached ``p_ad``.

    ``kappa`` is the ratio of the dephasing rate to the damping rate, so
    ``p_pd = 1 - (1 - p_ad) ** kappa``.
    """
    p_ad = check_probability(p_ad, "p_ad")
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    return 1.0 - (1.0 - p_ad) ** kappa


def apply_channel(rho, ch: KrausChannel) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (ch.dim, ch.dim):
        raise DimensionError(f"state of shape {rho.shape} does not match channel dim {ch.dim}")
    return sum(e @ rho @ dagger(e) for e in ch.operators)


def apply_local(rho, ops: Sequence[np.ndarray], n_qubits: int, target: int) -> np.ndarray:
    """Apply single-qubit Kraus operators to one qubit of an n-qubit state.

    Equivalent to ``apply_channel(rho, lift_to_register(...))`` without ever
    building the 2^n-dimensional lifted operators.
    """
    if not 0 <= target < n_qubits:
        raise DimensionError(f"target {target} out of range for {n_qubits} qubits")
    d = 2 ** n_qubits
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise DimensionError(f"state of shape {rho.shape} is not a {n_qubits}-qubit state")
    left, right = 2 ** target, 2 ** (n_qubits - target - 1)
    t = rho.reshape(left, 2, right, left, 2, right)
    out = np.zeros_like(t)
    for e in ops:
        out += np.einsum("ab,ibjkcl,dc->iajkdl", e, t, e.conj(), optimize=True)
    return out.reshape(d, d)


def lift_to_register(ch: KrausChannel, n_qubits: int, target: int) -> KrausChannel:
    """Embed a single-qubit channel on qubit ``target`` of an n-qubit register."""
    if ch.dim != 2:
        raise DimensionError(f"only single-qubit channels can be lifted, got dim {ch.dim}")
    if not 0 <= target < n_qubits:
        raise DimensionError(f"target {target} out of range for {n_qubits} qubits")
    ops = []
    for e in ch.operators:
        factors = [I2] * n_qubits
        factors[target] = e
        ops.append(tensor_all(factors))
    return KrausChannel(2 ** n_qubits, tuple(ops), f"{ch.label}@{target}/{n_qubits}")


def compose(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Channel that applies ``b`` first and then ``a``."""
    if a.dim != b.dim:
        raise DimensionError(f"cannot compose channels of dims {a.dim} and {b.dim}")
    ops = tuple(ea @ eb for ea in a.operators for eb in b.operators)
    return KrausChannel(a.dim, ops, f"{a.label}*{b.label}")


def choi_matrix(ch: KrausChannel) -> np.ndarray:
    """Unnormalized Choi matrix ``sum_ij |i><j| (x) ch(|i><j|)``."""
    d = ch.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            out[i * d:(i + 1) * d, j * d:(j + 1) * d] = apply_channel(unit, ch)
    return out


def choi_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Largest entrywise difference between the two Choi matrices."""
    if a.dim != b.dim:
        raise DimensionError(f"cannot compare channels of dims {a.dim} and {b.dim}")
    return float(np.abs(choi_matrix(a) - choi_matrix(b)).max())


def equivalent(a: KrausChannel, b: KrausChannel, atol: float = ALGEBRAIC_TOL) -> bool:
    return choi_distance(a, b) <= atol


def choi_min_eigenvalue(choi) -> float:
    choi = as_matrix(choi)
    return float(np.linalg.eigvalsh(0.5 * (choi + dagger(choi))).min())


def choi_output_marginal(choi, dim: int) -> np.ndarray:
    """Trace over the output factor; equals the identity for trace-preserving maps."""
    return partial_trace(choi, [dim, dim], keep=[0])


def kraus_from_choi(choi, dim: int, label: str = "", min_eig: float = -1e-8) -> KrausChannel:
    """Kraus set from the spectral decomposition of a Choi matrix.

    Non-positive eigenvalues are treated as rounding noise and dropped;
    anything below ``min_eig`` means the map is not completely positive.
    """
    choi = as_matrix(choi)
    if choi.shape != (dim * dim, dim * dim):
        raise DimensionError(f"Choi matrix of shape {choi.shape} does not fit dim {dim}")
    w, v = np.linalg.eigh(0.5 * (choi + dagger(choi)))
    if w.min() < min_eig:
        raise ValueError(f"Choi matrix is not positive: min eigenvalue {w.min():.3e}")
    ops = []
    for lam, vec in zip(w, v.T):
        if lam <= 0.0:
            continue
        ops.append(np.sqrt(lam) * vec.reshape(dim, dim).T)
    return KrausChannel(dim, tuple(ops), label)
