"""Correlation tensor elements, full-body subset norms and the C_x sums.

Two independent routes to the norm table are kept:

* direct: enumerate every element ``Tr[rho_a (x) g_i]`` of each marginal;
* Moebius: invert ``d^|b| Tr(rho_b^2) = 1 + sum_{0 != c <= b} ||tau_c||^2``
  over the subset lattice, which needs only 2^n marginal purities.
"""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .basis import GeneratorBasis, build_basis
from .errors import InvalidCutoffError, InvalidDimensionError, NumericalIntegrityError
from .states import DensityMatrix, partial_trace

IMAG_TOL = 1e-9
CLAMP_TOL = 1e-10


def all_subsets(n, nonempty=True):
    """Subsets of ``{1..n}`` as sorted tuples, by size then lexicographically."""
    start = 1 if nonempty else 0
    for m in range(start, n + 1):
        yield from combinations(range(1, n + 1), m)


def subset_key(alpha) -> tuple:
    return tuple(sorted(set(int(a) for a in alpha)))


@dataclass
class NormTable:
    n: int
    d: int
    entries: dict = field(default_factory=dict)

    def __getitem__(self, alpha):
        return self.entries[subset_key(alpha)]

    def __iter__(self):
        return iter(self.entries)

    @property
    def full_body(self) -> float:
        return self.entries[tuple(range(1, self.n + 1))]

    def size_sum(self, m) -> float:
        return sum(v for a, v in self.entries.items() if len(a) == m)

    def total(self) -> float:
        return sum(self.entries.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "norms": {",".join(map(str, a)): float(v) for a, v in self.entries.items()},
        }

    @classmethod
    def from_dict(cls, obj) -> "NormTable":
        entries = {subset_key(k.split(",")): float(v) for k, v in obj["norms"].items()}
        return cls(int(obj["n"]), int(obj["d"]), entries)


@dataclass(frozen=True)
class CxValue:
    x: int
    value: float


def _basis_for(rho, basis):
    if basis is None:
        return build_basis(rho.d)
    if basis.d != rho.d:
        raise InvalidDimensionError(f"basis has d={basis.d}, state has d={rho.d}")
    return basis


def _check_real(t):
    im = np.abs(np.imag(t)).max()
    if im > IMAG_TOL:
        raise NumericalIntegrityError(
            f"correlation element has imaginary part {im:.3g}; input is not Hermitian")
    return np.real(t)


def correlation_tensor(rho: DensityMatrix, basis: GeneratorBasis = None) -> np.ndarray:
    """Every element ``T[i1..in] = Tr[rho (x)_k g_ik]`` as a ``(d^2,)*n`` real array."""
    basis = _basis_for(rho, basis)
    n, d = rho.n, rho.d
    g = basis.stack()
    t = rho.data.reshape((d,) * (2 * n))
    # peel off one party per step: contract its row/column axes with g[i, col, row]
    for k in range(n):
        m = n - k
        t = np.tensordot(t, g, axes=([0, m], [2, 1]))
    return _check_real(t)


def tensor_element(rho: DensityMatrix, basis: GeneratorBasis, idx) -> float:
    basis = _basis_for(rho, basis)
    n, d = rho.n, rho.d
    idx = tuple(int(i) for i in idx)
    if len(idx) != n or min(idx) < 0 or max(idx) >= d * d:
        raise InvalidDimensionError(f"index {idx} invalid for n={n}, d={d}")
    t = rho.data.reshape((d,) * (2 * n))
    for k in range(n):
        m = n - k
        t = np.tensordot(t, basis[idx[k]], axes=([0, m], [1, 0]))
    return float(_check_real(t))


def subset_norm_direct(rho: DensityMatrix, basis: GeneratorBasis, alpha) -> float:
    """``||tau_alpha||^2`` by enumerating every full-support element of the marginal."""
    basis = _basis_for(rho, basis)
    marg = partial_trace(rho, alpha)
    t = correlation_tensor(marg, basis)
    core = t[(slice(1, None),) * marg.n]
    return float(np.sum(core ** 2))


def norm_table_direct(rho: DensityMatrix, basis: GeneratorBasis = None) -> NormTable:
    basis = _basis_for(rho, basis)
    entries = {a: subset_norm_direct(rho, basis, a) for a in all_subsets(rho.n)}
    return NormTable(rho.n, rho.d, entries)


def norm_table_from_tensor(t: np.ndarray, n: int, d: int) -> NormTable:
    """Group squared elements of a full correlation tensor by their support."""
    sq = t ** 2
    entries = {}
    for alpha in all_subsets(n):
        sl = tuple(slice(1, None) if (p + 1) in alpha else 0 for p in range(n))
        entries[alpha] = float(np.sum(sq[sl]))
    return NormTable(n, d, entries)


def marginal_purities(rho: DensityMatrix) -> dict:
    """``Tr(rho_b^2)`` for every subset ``b`` (the empty set maps to 1)."""
    n = rho.n
    full = tuple(range(1, n + 1))
    marg = {full: rho}
    for beta in sorted(all_subsets(n), key=len, reverse=True):
        if beta in marg:
            continue
        # trace one party out of the smallest already-known superset
        parent = tuple(sorted(beta + (min(set(full) - set(beta)),)))
        src = marg[parent]
        pos = [parent.index(b) + 1 for b in beta]
        marg[beta] = partial_trace(src, pos)
    out = {(): 1.0}
    for beta, m in marg.items():
        out[beta] = float(np.vdot(m.data, m.data).real)
    return out


def norm_table_moebius(rho: DensityMatrix, basis: GeneratorBasis = None) -> NormTable:
    if basis is not None:
        _basis_for(rho, basis)
    n, d = rho.n, rho.d
    pur = marginal_purities(rho)
    lifted = {b: d ** len(b) * v for b, v in pur.items()}
    entries = {}
    for alpha in all_subsets(n):
        acc = 0.0
        for m in range(len(alpha) + 1):
            sign = -1.0 if (len(alpha) - m) % 2 else 1.0
            for beta in combinations(alpha, m):
                acc += sign * lifted[beta]
        if acc < 0:
            if acc < -CLAMP_TOL:
                raise NumericalIntegrityError(
                    f"norm of subset {alpha} came out negative ({acc:.3g})")
            acc = 0.0
        entries[alpha] = acc
    return NormTable(n, d, entries)


def norm_table(rho: DensityMatrix, basis: GeneratorBasis = None) -> NormTable:
    """Default whole-table route (Moebius)."""
    return norm_table_moebius(rho, basis)


def cx(table: NormTable, x: int) -> CxValue:
    if not 0 <= x <= table.n:
        raise InvalidCutoffError(f"cutoff x={x} outside 0..{table.n}")
    return CxValue(x, sum(v for a, v in table.entries.items() if len(a) >= x))
