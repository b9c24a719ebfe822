"""One-logical-qubit error-correcting codes described as plain data.

Each code carries its two codewords, the single-qubit error generators it is
built to correct, one (projector, recovery) pair per syndrome class and the
projector onto whatever is left over. The syndrome structure is derived by
:func:`build_syndromes` rather than typed in by hand.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qmat import (
    I2,
    LOWERING,
    SIGMA_Z,
    as_matrix,
    dagger,
    ket,
    normalized,
    partial_trace,
    projector,
    tensor_all,
)


class CodeConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Syndrome:
    label: str
    projector: np.ndarray  # M_k
    recovery: np.ndarray  # R_k, maps the syndrome subspace back onto the codespace
    norms: tuple = (1.0, 1.0)  # norms of the raw error images of |0_L>, |1_L>


@dataclass(frozen=True)
class QecCode:
    name: str
    n_physical: int
    logical0: np.ndarray
    logical1: np.ndarray
    error_generators: tuple  # (label, 2x2 matrix)
    syndromes: tuple
    residual_projector: np.ndarray

    @property
    def dim(self) -> int:
        return 2 ** self.n_physical

    @property
    def encoder(self) -> np.ndarray:
        """Isometry V = |0_L><0| + |1_L><1|, shape (2^n, 2)."""
        return np.stack([self.logical0, self.logical1], axis=1)

    def syndrome_vectors(self) -> np.ndarray:
        """Rows are the normalized images of both codewords, class by class."""
        rows = []
        for s in self.syndromes:
            rows.append(dagger(s.recovery) @ self.logical0)
            rows.append(dagger(s.recovery) @ self.logical1)
        return np.array(rows)

    def residual_rank(self, tol: float = 1e-8) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.residual_projector) > 0.5 - tol))


def _on_qubit(g: np.ndarray, j: int, n: int) -> np.ndarray:
    factors = [I2] * n
    factors[j] = g
    return tensor_all(factors)


def build_syndromes(logical0, logical1, generators, tol: float = 1e-10):
    """Derive syndrome projectors, recoveries and the residual projector.

    For every generator ``g`` and every position ``j`` the error images
    ``g_j|0_L>`` and ``g_j|1_L>`` are normalized. The codewords plus all images
    must form an orthonormal family; classes whose span coincides exactly with
    an earlier class are merged. Returns ``(syndromes, residual_projector)``
    with the codespace as syndrome 0.
    """
    l0 = np.asarray(logical0, dtype=complex)
    l1 = np.asarray(logical1, dtype=complex)
    dim = l0.shape[0]
    n = int(round(np.log2(dim)))
    if 2 ** n != dim or l1.shape != l0.shape:
        raise CodeConstructionError("codewords must be equal-length qubit-register vectors")
    if abs(np.vdot(l0, l0) - 1) > tol or abs(np.vdot(l1, l1) - 1) > tol or abs(np.vdot(l0, l1)) > tol:
        raise CodeConstructionError("codewords are not orthonormal")

    classes = [("no-error", l0, l1, (1.0, 1.0))]
    for label, g in generators:
        g = as_matrix(g)
        for j in range(n):
            gj = _on_qubit(g, j, n)
            a, b = gj @ l0, gj @ l1
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            if na <= tol or nb <= tol:
                raise CodeConstructionError(f"{label} on qubit {j} annihilates a codeword")
            a, b = a / na, b / nb
            duplicate = False
            for other_label, u, v, _ in classes:
                if abs(abs(np.vdot(u, a)) - 1) <= tol and abs(abs(np.vdot(v, b)) - 1) <= tol:
                    duplicate = True  # same subspace and same pairing: nothing new to detect
                    break
            if not duplicate:
                classes.append((f"{label}@{j}", a, b, (float(na), float(nb))))

    named = [(f"{lab}:0", u) for lab, u, _, _ in classes] + [(f"{lab}:1", v) for lab, _, v, _ in classes]
    vecs = np.array([v for _, v in named])
    gram = vecs.conj() @ vecs.T
    off = np.abs(gram - np.eye(len(named)))
    if off.max() > tol:
        i, j = np.unravel_index(np.argmax(off), off.shape)
        raise CodeConstructionError(
            f"syndrome vectors {named[i][0]} and {named[j][0]} are not orthonormal "
            f"(overlap {gram[i, j]:.3e})"
        )

    syndromes = []
    for lab, u, v, norms in classes:
        m = projector(u) + projector(v)
        r = np.outer(l0, u.conj()) + np.outer(l1, v.conj())
        syndromes.append(Syndrome(lab, m, r, norms))
    residual = np.eye(dim) - sum(s.projector for s in syndromes)
    return tuple(syndromes), residual


def _make_code(name, l0, l1, generators) -> QecCode:
    l0, l1 = normalized(l0), normalized(l1)
    syndromes, residual = build_syndromes(l0, l1, generators)
    for arr in [l0, l1, residual] + [s.projector for s in syndromes] + [s.recovery for s in syndromes]:
        arr.setflags(write=False)
    return QecCode(name, int(round(np.log2(len(l0)))), l0, l1, tuple(generators), syndromes, residual)


@lru_cache(maxsize=None)
def leung4_code() -> QecCode:
    """Four-qubit amplitude-damping code; corrects one decay on any qubit."""
    l0 = (ket("0000") + ket("1111")) / np.sqrt(2)
    l1 = (ket("0011") + ket("1100")) / np.sqrt(2)
    return _make_code("leung4", l0, l1, [("AD", LOWERING)])


@lru_cache(maxsize=None)
def phase3_code() -> QecCode:
    """Three-qubit phase-flip code |---> / |+++>; corrects one Z error."""
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    l0 = tensor_all([minus] * 3)
    l1 = tensor_all([plus] * 3)
    return _make_code("phase3", l0, l1, [("Z", SIGMA_Z)])


_LAFLAMME0 = [("00000", 1), ("11100", 1), ("10011", -1), ("01111", -1),
              ("11010", 1), ("00110", 1), ("01001", 1), ("10101", 1)]
_LAFLAMME1 = [("00011", -1), ("11111", 1), ("10000", -1), ("01100", 1),
              ("11001", 1), ("00101", -1), ("01010", -1), ("10110", 1)]


@lru_cache(maxsize=None)
def laflamme5_code() -> QecCode:
    """Five-qubit code, here set up against one Z or one decay on any qubit."""
    l0 = sum(sign * ket(bits) for bits, sign in _LAFLAMME0) / (2 * np.sqrt(2))
    l1 = sum(sign * ket(bits) for bits, sign in _LAFLAMME1) / (2 * np.sqrt(2))
    return _make_code("laflamme5", l0, l1, [("Z", SIGMA_Z), ("AD", LOWERING)])


CODES = {
    "leung4": leung4_code,
    "phase3": phase3_code,
    "laflamme5": laflamme5_code,
}


def get_code(name: str) -> QecCode:
    try:
        return CODES[name]()
    except KeyError:
        raise ValueError(f"unknown code {name!r}; choose from {sorted(CODES)}") from None


def encode_qubit(state, code: QecCode) -> np.ndarray:
    state = as_matrix(state)
    if state.shape != (2, 2):
        raise ValueError(f"expected a single-qubit operator, got shape {state.shape}")
    v = code.encoder
    return v @ state @ dagger(v)


def decoded_recoveries(code: QecCode) -> list:
    """Operators V^dag R_k M_k taking each syndrome subspace to the logical qubit."""
    vdag = dagger(code.encoder)
    return [vdag @ s.recovery @ s.projector for s in code.syndromes]


def recover(rho_err, code: QecCode) -> np.ndarray:
    """Syndrome measurement, recovery and decoding back to one qubit.

    Weight that lands in the residual subspace cannot be attributed to any
    correctable error, so it is replaced by the maximally mixed qubit.
    Linear in ``rho_err``; non-Hermitian inputs are allowed.
    """
    rho_err = as_matrix(rho_err)
    if rho_err.shape != (code.dim, code.dim):
        raise ValueError(f"state of shape {rho_err.shape} does not live on {code.n_physical} qubits")
    out = sum(k @ rho_err @ dagger(k) for k in decoded_recoveries(code))
    lost = np.trace(code.residual_projector @ rho_err)
    return out + lost * I2 / 2


def recover_register(rho, code: QecCode, dim_before: int, dim_after: int) -> np.ndarray:
    """Apply :func:`recover` to one code block inside a larger register.

    ``dim_before`` and ``dim_after`` are the total dimensions of the
    subsystems to the left and right of the block; they are left untouched.
    """
    d = code.dim
    left, right = dim_before, dim_after
    t = np.asarray(rho, dtype=complex).reshape(left, d, right, left, d, right)
    out = np.zeros((left, 2, right, left, 2, right), dtype=complex)
    for k in decoded_recoveries(code):
        out += np.einsum("ab,ibjkcl,dc->iajkdl", k, t, k.conj(), optimize=True)
    # residual branch: trace out the block after projecting, then re-insert I/2
    p = code.residual_projector
    projected = np.einsum("ab,ibjkcl,cd->iajkdl", p, t, p, optimize=True)
    mat = projected.reshape(left * d * right, left * d * right)
    rest = partial_trace(mat, [left, d, right], keep=[0, 2]).reshape(left, right, left, right)
    out += np.einsum("ijkl,ac->iajkcl", rest, I2 / 2)
    return out.reshape(left * 2 * right, left * 2 * right)
