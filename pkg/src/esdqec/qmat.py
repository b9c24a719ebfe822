"""Dense complex linear algebra on small registers.

Matrices are plain ``numpy.ndarray`` values with ``complex128`` dtype; nothing
here mutates its inputs. Tolerances are always explicit keyword arguments.
"""

import cmath
import math
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 1024

SPECTRAL_TOL = 1e-10
ALGEBRAIC_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
LOWERING = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


class DimensionError(ValueError):
    pass


class EigenConvergenceError(ArithmeticError):
    pass


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a 2-D complex array, rejecting anything above MAX_DIM."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if max(a.shape) > MAX_DIM:
        raise DimensionError(f"dimension {max(a.shape)} exceeds {MAX_DIM}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def ket(bits: str) -> np.ndarray:
    """Computational basis vector for a bitstring; qubit 0 is the leftmost bit."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def normalized(v, atol: float = ALGEBRAIC_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm <= atol:
        raise ValueError("cannot normalize a null vector")
    return v / norm


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def allclose(a, b, atol: float) -> bool:
    """Entrywise comparison with an explicit absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def is_hermitian(m, atol: float = ALGEBRAIC_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and allclose(m, dagger(m), atol)


def tensor(a, b, *rest) -> np.ndarray:
    """Kronecker product of two or more matrices (or vectors)."""
    out = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    for m in rest:
        out = np.kron(out, np.asarray(m, dtype=complex))
    if max(out.shape) > MAX_DIM:
        raise DimensionError(f"tensor product dimension {max(out.shape)} exceeds {MAX_DIM}")
    return out


def tensor_all(factors: Iterable) -> np.ndarray:
    factors = list(factors)
    if len(factors) == 1:
        return np.asarray(factors[0], dtype=complex)
    return tensor(*factors)


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` gives the subsystem dimensions in tensor order. The kept
    subsystems stay in their original relative order.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    n = len(dims)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"rho must be square, got {rho.shape}")
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(f"dims {dims} do not multiply to {rho.shape[0]}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {n} subsystems")
    drop = [k for k in range(n) if k not in keep]

    t = rho.reshape(dims + dims)
    # trace pairs from the highest index down so earlier axis numbers stay valid
    for k in sorted(drop, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def _hessenberg(a: np.ndarray) -> np.ndarray:
    """Householder reduction to upper Hessenberg form (similarity transform).

    Columns that are already reduced are skipped, so exact zeros survive.
    """
    h = a.copy()
    n = h.shape[0]
    for k in range(n - 2):
        v = h[k + 1:, k].copy()
        tail2 = float(np.vdot(v[1:], v[1:]).real)
        if tail2 == 0.0:
            continue
        x0 = complex(v[0])
        a0 = abs(x0)
        norm = math.sqrt(a0 * a0 + tail2)
        v[0] = x0 + (x0 / a0 if a0 != 0 else 1.0) * norm
        v /= math.sqrt(float(np.vdot(v, v).real))
        vc = v.conj()
        h[k + 1:, :] -= 2.0 * v[:, None] * (vc @ h[k + 1:, :])[None, :]
        h[:, k + 1:] -= 2.0 * (h[:, k + 1:] @ v)[:, None] * vc[None, :]
        h[k + 2:, k] = 0.0
    return h


def _eig2(a: complex, b: complex, c: complex, d: complex):
    # roots of the 2x2 characteristic polynomial without cancellation in the smaller one
    mean = 0.5 * (a + d)
    half = 0.5 * (a - d)
    disc = cmath.sqrt(half * half + b * c)
    big = mean + disc if abs(mean + disc) >= abs(mean - disc) else mean - disc
    if big == 0:
        return 0j, 0j
    return big, (a * d - b * c) / big


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    # eigenvalue of [[a, b], [c, d]] closest to d
    half = 0.5 * (a - d)
    disc = cmath.sqrt(half * half + b * c)
    mu1 = d - (b * c) / (half + disc) if (half + disc) != 0 else d
    mu2 = d - (b * c) / (half - disc) if (half - disc) != 0 else d
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


_EPS = float(np.finfo(float).eps)
_TINY = float(np.finfo(float).tiny)


def _hessenberg_qr_eigenvalues(h: np.ndarray, max_sweeps_per_eig: int) -> list:
    """Single-shift complex QR iteration with deflation on a Hessenberg block.

    Backward stable: eigenvalues are exact for a matrix within about
    eps * max|h| of the input.
    """
    n = h.shape[0]
    H = h.tolist()
    eps = _EPS
    scale = max(max(abs(x) for row in H for x in row), _TINY)
    eigs = [0j] * n
    hi = n - 1
    sweeps = 0
    while hi >= 0:
        if hi == 0:
            eigs[0] = H[0][0]
            break
        lo = hi
        while lo > 0:
            sub = abs(H[lo][lo - 1])
            ref = abs(H[lo - 1][lo - 1]) + abs(H[lo][lo])
            if ref == 0.0:
                # zero diagonal (e.g. Hermitian dilations): compare with the neighbouring subdiagonals
                if lo >= 2:
                    ref += abs(H[lo - 1][lo - 2])
                if lo < hi:
                    ref += abs(H[lo + 1][lo])
            # the Hessenberg step already carries an absolute error of order eps * scale
            if sub <= eps * ref or sub <= eps * scale:
                H[lo][lo - 1] = 0j
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = H[hi][hi]
            hi -= 1
            sweeps = 0
            continue
        if lo == hi - 1:
            eigs[lo], eigs[hi] = _eig2(H[lo][lo], H[lo][hi], H[hi][lo], H[hi][hi])
            hi -= 2
            sweeps = 0
            continue

        sweeps += 1
        if sweeps > max_sweeps_per_eig:
            raise EigenConvergenceError(
                f"QR iteration did not converge within {max_sweeps_per_eig} sweeps "
                f"(active block {lo}..{hi})"
            )
        if sweeps % 11 == 0:
            # exceptional shift to break symmetric stalls
            mu = H[hi][hi] + 0.75 * abs(H[hi][hi - 1]) * (1 + 1j)
        else:
            mu = _wilkinson_shift(H[hi - 1][hi - 1], H[hi - 1][hi], H[hi][hi - 1], H[hi][hi])

        for i in range(lo, hi + 1):
            H[i][i] -= mu
        rotations = []
        for k in range(lo, hi):
            x, y = H[k][k], H[k + 1][k]
            r = math.hypot(abs(x), abs(y))
            if r == 0.0:
                c, s = 1.0 + 0j, 0j
            else:
                c, s = x / r, y / r
            cc, sc = c.conjugate(), s.conjugate()
            rk, rk1 = H[k], H[k + 1]
            for j in range(k, hi + 1):
                u, w = rk[j], rk1[j]
                rk[j] = cc * u + sc * w
                rk1[j] = -s * u + c * w
            rotations.append((k, c, s))
        for k, c, s in rotations:
            for i in range(lo, min(k + 2, hi) + 1):
                row = H[i]
                u, w = row[k], row[k + 1]
                row[k] = u * c + w * s
                row[k + 1] = -u * s.conjugate() + w * c.conjugate()
        for i in range(lo, hi + 1):
            H[i][i] += mu
    return eigs


def strong_components(pattern: np.ndarray) -> list:
    """Strongly connected components of a small directed adjacency pattern."""
    n = pattern.shape[0]
    rows, cols = np.nonzero(pattern)
    reach = [1 << i for i in range(n)]
    for i, j in zip(rows.tolist(), cols.tolist()):
        reach[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = reach[i]
            for j in range(n):
                if acc >> j & 1:
                    acc |= reach[j]
            if acc != reach[i]:
                reach[i] = acc
                changed = True
    comps, seen = [], 0
    for i in range(n):
        if seen >> i & 1:
            continue
        members = [j for j in range(n) if reach[i] >> j & 1 and reach[j] >> i & 1]
        for j in members:
            seen |= 1 << j
        comps.append(np.array(members))
    return comps


def _ldexp(z: np.ndarray, e: int) -> np.ndarray:
    return np.ldexp(z.real, e) + 1j * np.ldexp(z.imag, e)


def eigenvalues_general(m, max_sweeps_per_eig: int = 60) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a small square complex matrix.

    The sparsity pattern is first split into strongly connected components,
    which permutes the matrix to block upper-triangular form; each diagonal
    block is reduced to Hessenberg form and solved by shifted QR iteration.
    Raises :class:`EigenConvergenceError` when a block exceeds the sweep budget.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"matrix must be square, got {a.shape}")
    if n > 8:
        raise DimensionError(f"eigenvalues_general supports dimension <= 8, got {n}")
    if n == 0:
        return np.zeros(0, dtype=complex)
    if not np.isfinite(a.sum()):
        raise ValueError("matrix has non-finite entries")

    top = float(np.abs(a).max())
    if top == 0.0:
        return np.zeros(n, dtype=complex)
    # power-of-two rescaling is exact and keeps deflation thresholds away from underflow
    shift = math.frexp(top)[1]
    a = _ldexp(a, -shift)
    comps = strong_components(a != 0)
    if len(comps) == 1:
        block = _hessenberg(a) if n > 2 else a
        return _ldexp(np.array(_hessenberg_qr_eigenvalues(block, max_sweeps_per_eig), dtype=complex), shift)
    out = []
    for idx in comps:
        block = a[idx[:, None], idx]
        if len(idx) == 1:
            out.append(complex(block[0, 0]))
            continue
        if len(idx) > 2:
            block = _hessenberg(block)
        out.extend(_hessenberg_qr_eigenvalues(block, max_sweeps_per_eig))
    return _ldexp(np.array(out, dtype=complex), shift)
