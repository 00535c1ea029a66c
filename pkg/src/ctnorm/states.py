"""Multipartite qudit density matrices and the example states used throughout.

Party 1 is the leftmost (most significant) tensor factor.  Parties are
numbered from 1 in every public function.
"""
from dataclasses import dataclass
from functools import reduce
from itertools import product
import math

import numpy as np

from .errors import DimensionCapError, InvalidDimensionError, InvalidStateError

DEFAULT_DIM_CAP = 14.0  # n * log2(d); 2**14 = 16384 rows
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
POS_TOL = 1e-8


def check_dims(n, d, cap=None):
    cap = DEFAULT_DIM_CAP if cap is None else cap
    if n < 1 or d < 2:
        raise InvalidDimensionError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    if n * math.log2(d) > cap + 1e-12:
        raise DimensionCapError(
            f"n={n}, d={d} gives a {d ** n}x{d ** n} matrix; "
            f"n*log2(d)={n * math.log2(d):.3g} exceeds dimension cap {cap}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n: int
    d: int
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        dim = self.d ** self.n
        if data.shape != (dim, dim):
            raise InvalidDimensionError(
                f"matrix shape {data.shape} does not match n={self.n}, d={self.d}")
        if np.abs(data - data.conj().T).max() > HERM_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        tr = np.trace(data)
        if abs(tr - 1) > TRACE_TOL:
            raise InvalidStateError(f"density matrix has trace {tr.real:.12g}, expected 1")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self):
        return self.d ** self.n

    def validate_positive(self, tol=POS_TOL):
        lo = np.linalg.eigvalsh(self.data).min()
        if lo < -tol:
            raise InvalidStateError(f"density matrix has negative eigenvalue {lo:.3g}")
        return self

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        if other.d != self.d:
            raise InvalidDimensionError("tensor product needs equal local dimension")
        return DensityMatrix(self.n + other.n, self.d, np.kron(self.data, other.data))

    def conjugate_by(self, u: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(self.n, self.d, u @ self.data @ u.conj().T)


def from_ket(psi, n, d) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d ** n:
        raise InvalidDimensionError(f"ket has {psi.size} amplitudes, expected {d ** n}")
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise InvalidStateError("zero vector is not a state")
    psi = psi / nrm
    return DensityMatrix(n, d, np.outer(psi, psi.conj()))


def basis_ket(digits, d):
    """Computational basis vector ``|digits[0] digits[1] ...>``."""
    idx = 0
    for q in digits:
        idx = idx * d + q
    v = np.zeros(d ** len(digits), dtype=complex)
    v[idx] = 1
    return v


def make_ghz(n, d, cap=None) -> DensityMatrix:
    if n < 2:
        raise InvalidDimensionError("GHZ state needs n >= 2")
    check_dims(n, d, cap)
    psi = sum(basis_ket([i] * n, d) for i in range(d))
    return from_ket(psi, n, d)


def make_w(n, cap=None) -> DensityMatrix:
    if n < 2:
        raise InvalidDimensionError("W state needs n >= 2")
    check_dims(n, 2, cap)
    psi = sum(basis_ket([int(j == i) for j in range(n)], 2) for i in range(n))
    return from_ket(psi, n, 2)


def validate_adjacency(adjacency) -> np.ndarray:
    a = np.asarray(adjacency)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidStateError("adjacency must be a square matrix")
    if not np.isin(a, (0, 1)).all():
        raise InvalidStateError("adjacency entries must be 0 or 1")
    if (a != a.T).any():
        raise InvalidStateError("adjacency must be symmetric")
    if np.diag(a).any():
        raise InvalidStateError("adjacency must have zero diagonal")
    return a.astype(int)


def edges_to_adjacency(edges, n=None) -> np.ndarray:
    """Adjacency matrix from 1-based edges; ``n`` defaults to the largest vertex."""
    edges = [(int(a), int(b)) for a, b in edges]
    top = max((max(e) for e in edges), default=0)
    n = top if n is None else n
    if n < 1 or top > n or any(min(e) < 1 for e in edges):
        raise InvalidStateError(f"edge list {edges} does not fit {n} vertices")
    a = np.zeros((n, n), dtype=int)
    for u, v in edges:
        if u == v:
            raise InvalidStateError(f"self-loop on vertex {u}")
        a[u - 1, v - 1] = a[v - 1, u - 1] = 1
    return a


def parse_edge_list(text: str) -> list:
    """``"1-2,2-3"`` -> ``[(1, 2), (2, 3)]``."""
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        try:
            a, b = tok.split("-")
            out.append((int(a), int(b)))
        except ValueError:
            raise InvalidStateError(f"bad edge {tok!r}; expected form 'a-b'") from None
    return out


def make_graph_state(adjacency, cap=None) -> DensityMatrix:
    a = validate_adjacency(adjacency)
    n = a.shape[0]
    check_dims(n, 2, cap)
    dim = 2 ** n
    # |+>^n with a CZ phase (-1)^(b_u b_v) for every edge
    bits = (np.arange(dim)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    iu, iv = np.nonzero(np.triu(a))
    parity = (bits[:, iu] & bits[:, iv]).sum(axis=1) % 2
    psi = (1 - 2 * parity).astype(complex)
    return from_ket(psi, n, 2)


def make_ame43() -> DensityMatrix:
    """4-qutrit AME state (1/3) sum_{i,j} |i, j, i+j, i+2j> (mod 3)."""
    psi = sum(basis_ket([i, j, (i + j) % 3, (i + 2 * j) % 3], 3)
              for i, j in product(range(3), repeat=2))
    rho = from_ket(psi, 4, 3)
    mixed1, mixed2 = np.eye(3) / 3, np.eye(9) / 9
    for p in range(1, 5):
        if np.abs(partial_trace(rho, [p]).data - mixed1).max() > 1e-12:
            raise InvalidStateError("AME fixture failed its one-party check")
    for p, q in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)):
        if np.abs(partial_trace(rho, [p, q]).data - mixed2).max() > 1e-12:
            raise InvalidStateError("AME fixture failed its two-party check")
    return rho


def make_product(n, d, local_kets=None, cap=None) -> DensityMatrix:
    """Pure product state; defaults to ``|0...0>``."""
    check_dims(n, d, cap)
    if local_kets is None:
        local_kets = [basis_ket([0], d)] * n
    if len(local_kets) != n:
        raise InvalidStateError(f"need {n} local kets, got {len(local_kets)}")
    kets = [np.asarray(k, dtype=complex).reshape(-1) for k in local_kets]
    if any(k.size != d for k in kets):
        raise InvalidDimensionError(f"every local ket must have {d} amplitudes")
    return from_ket(reduce(np.kron, kets), n, d)


def maximally_mixed(n, d, cap=None) -> DensityMatrix:
    check_dims(n, d, cap)
    return DensityMatrix(n, d, np.eye(d ** n) / d ** n)


def _check_subset(keep, n):
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise InvalidStateError("party subset must be nonempty")
    if keep[0] < 1 or keep[-1] > n:
        raise InvalidStateError(f"parties {keep} out of range 1..{n}")
    return keep


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the (1-based) parties in ``keep``, order preserved."""
    keep = _check_subset(keep, rho.n)
    if len(keep) == rho.n:
        return rho
    n, d = rho.n, rho.d
    k0 = [p - 1 for p in keep]
    drop = [p for p in range(n) if p not in k0]
    t = rho.data.reshape((d,) * (2 * n))
    t = t.transpose(k0 + drop + [n + p for p in k0] + [n + p for p in drop])
    dk, dr = d ** len(k0), d ** len(drop)
    red = np.einsum("ijkj->ik", t.reshape(dk, dr, dk, dr))
    return DensityMatrix(len(k0), d, red)


def mix_with_white_noise(rho: DensityMatrix, p: float) -> DensityMatrix:
    if not 0 <= p <= 1:
        raise InvalidStateError(f"mixing weight p={p} outside [0, 1]")
    return DensityMatrix(rho.n, rho.d, p * rho.data + (1 - p) * np.eye(rho.dim) / rho.dim)


def purity(rho: DensityMatrix) -> float:
    return float(np.vdot(rho.data, rho.data).real)
