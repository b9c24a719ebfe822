"""Concurrence and fidelity of two-qubit states."""

from dataclasses import dataclass

import numpy as np

from .qmat import SIGMA_Y, SPECTRAL_TOL, as_matrix, eigenvalues_general, strong_components

SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

_X_MASK = np.array(
    [[1, 0, 0, 1],
     [0, 1, 1, 0],
     [0, 1, 1, 0],
     [1, 0, 0, 1]], dtype=bool)


@dataclass(frozen=True)
class MetricPoint:
    p: float
    concurrence: float
    fidelity: float


def _check_two_qubit(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit density matrix, got {rho.shape}")
    return rho


def spin_flip(rho) -> np.ndarray:
    return SIGMA_YY @ np.conj(rho) @ SIGMA_YY


def state_factor(rho) -> np.ndarray:
    """W with rho = W W^dag, one column per strictly positive eigenvalue.

    The exact-zero pattern of rho is split into independent blocks first, so
    structurally absent components never pick up rounding-level columns.
    """
    rho = 0.5 * (rho + np.conj(rho).T)
    comps = strong_components(rho != 0)
    if len(comps) == 1:
        w, v = np.linalg.eigh(rho)
        keep = w > 0.0
        return v[:, keep] * np.sqrt(w[keep])
    cols = []
    for idx in comps:
        w, v = np.linalg.eigh(rho[idx[:, None], idx])
        for lam, vec in zip(w, v.T):
            if lam > 0.0:
                col = np.zeros(rho.shape[0], dtype=complex)
                col[idx] = np.sqrt(lam) * vec
                cols.append(col)
    if not cols:
        return np.zeros((rho.shape[0], 0), dtype=complex)
    return np.stack(cols, axis=1)


def wootters_lambdas(rho, tol: float = SPECTRAL_TOL) -> np.ndarray:
    """Square roots of the eigenvalues of rho * spin_flip(rho), descending.

    They are the singular values of tau = W^T (Y x Y) W for any factor
    rho = W W^dag, read off as the positive eigenvalues of the Hermitian
    dilation [[0, tau], [tau^dag, 0]]. Working with tau avoids taking square
    roots of rounding-level eigenvalues.
    """
    rho = _check_two_qubit(rho)
    w = state_factor(rho)
    r = w.shape[1]
    lam = np.zeros(4)
    if r == 0:
        return lam
    tau = w.T @ SIGMA_YY @ w
    dilation = np.zeros((2 * r, 2 * r), dtype=complex)
    dilation[:r, r:] = tau
    dilation[r:, :r] = np.conj(tau).T
    ev = eigenvalues_general(dilation)
    if np.abs(ev.imag).max() > tol:
        raise ValueError(f"dilation spectrum is not real: {ev}")
    top = np.sort(ev.real)[::-1][:r]
    lam[:r] = np.clip(top, 0.0, None)
    return lam


def concurrence(rho, tol: float = SPECTRAL_TOL) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4), clipped to at most 1."""
    lam = wootters_lambdas(rho, tol)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_spin_flip(rho, tol: float = SPECTRAL_TOL) -> float:
    """Concurrence straight from the non-Hermitian product rho * spin_flip(rho).

    Loses accuracy (about sqrt(machine epsilon)) when that product has
    eigenvalues at or near zero; kept as a cross-check.
    """
    rho = _check_two_qubit(rho)
    mu = eigenvalues_general(rho @ spin_flip(rho))
    if np.any(np.abs(mu.imag) > tol) or np.any(mu.real < -tol):
        raise ValueError(f"rho * spin_flip(rho) has an unphysical spectrum {mu}; is rho a state?")
    lam = np.sort(np.sqrt(np.clip(mu.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def is_xstate(rho, atol: float = 1e-12) -> bool:
    rho = _check_two_qubit(rho)
    return bool(np.all(np.abs(rho[~_X_MASK]) <= atol))


def concurrence_xstate(rho, atol: float = 1e-12) -> float:
    """Closed-form concurrence for states with only diagonal and anti-diagonal entries."""
    rho = _check_two_qubit(rho)
    if not is_xstate(rho, atol):
        raise ValueError("state is not of X form")
    d = np.clip(np.diag(rho).real, 0.0, None)
    a = abs(rho[0, 3]) - np.sqrt(d[1] * d[2])
    b = abs(rho[1, 2]) - np.sqrt(d[0] * d[3])
    return float(2.0 * max(0.0, a, b))


def fidelity_with_initial(rho, initial) -> float:
    """Overlap <psi0|rho|psi0> with the pure initial state.

    ``initial`` is either a :class:`~esdqec.pipeline.TwoQubitState` or a
    state vector.
    """
    rho = _check_two_qubit(rho)
    v = getattr(initial, "vector", initial)
    v = np.asarray(v, dtype=complex)
    f = np.vdot(v, rho @ v)
    return float(min(1.0, max(0.0, f.real)))


def deltas(corrected: MetricPoint, uncorrected: MetricPoint, atol: float = 1e-12):
    """(corrected - uncorrected) for concurrence and fidelity at the same p."""
    if abs(corrected.p - uncorrected.p) > atol:
        raise ValueError(f"points are at different p: {corrected.p} vs {uncorrected.p}")
    return (corrected.concurrence - uncorrected.concurrence,
            corrected.fidelity - uncorrected.fidelity)
