"""Normalized SU(d) generator sets.

Every generator satisfies ``Tr[g_i g_j] = d * delta_ij`` and index 0 is the
identity.  The index order is part of the report format and must not change:

    0                       identity
    1 .. P                  symmetric pair operators   |j><k| + |k><j|,  j < k
    P+1 .. 2P               antisymmetric pair ops    -i|j><k| + i|k><j|, j < k
    2P+1 .. d^2-1           diagonal operators, support 2, 3, ..., d

with ``P = d(d-1)/2`` and pairs in lexicographic order.  For ``d = 2`` this is
exactly ``(I, X, Y, Z)``.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidDimensionError

MAX_LOCAL_DIM = 7


@dataclass(frozen=True)
class GeneratorBasis:
    d: int
    generators: tuple

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def stack(self) -> np.ndarray:
        """All generators as one ``(d**2, d, d)`` array."""
        return np.stack(self.generators)

    def label(self, i: int) -> str:
        """Short human-readable name of generator ``i`` (e.g. ``S01``, ``D2``)."""
        obs = _classify(self.d)
        if i == 0:
            return "I"
        o = obs[i - 1]
        if o.kind == "diagonal":
            return f"D{o.level}"
        tag = "S" if o.kind == "symmetric" else "A"
        return f"{tag}{o.pair[0]}{o.pair[1]}"


class Observable(NamedTuple):
    index: int
    pair: Optional[tuple]
    kind: str  # "diagonal", "symmetric" or "antisymmetric"
    level: int = 0  # diagonal operators only: 1 .. d-1


def _classify(d):
    pairs = list(combinations(range(d), 2))
    out = [Observable(1 + m, p, "symmetric") for m, p in enumerate(pairs)]
    off = 1 + len(pairs)
    out += [Observable(off + m, p, "antisymmetric") for m, p in enumerate(pairs)]
    off += len(pairs)
    out += [Observable(off + l - 1, None, "diagonal", l) for l in range(1, d)]
    return out


def build_basis(d: int, max_d: int = MAX_LOCAL_DIM) -> GeneratorBasis:
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimensionError(f"local dimension must be an integer >= 2, got {d!r}")
    if d > max_d:
        raise InvalidDimensionError(f"local dimension {d} exceeds cap max_d={max_d}")
    d = int(d)
    scale = np.sqrt(d / 2)
    gens = [np.eye(d, dtype=complex)]
    for o in _classify(d):
        g = np.zeros((d, d), dtype=complex)
        if o.kind == "symmetric":
            j, k = o.pair
            g[j, k] = g[k, j] = 1
        elif o.kind == "antisymmetric":
            j, k = o.pair
            g[j, k] = -1j
            g[k, j] = 1j
        else:
            l = o.level
            diag = np.zeros(d)
            diag[:l] = 1
            diag[l] = -l
            g[np.diag_indices(d)] = np.sqrt(2 / (l * (l + 1))) * diag
        gens.append(scale * g)
    for g in gens:
        g.setflags(write=False)
    return GeneratorBasis(d, tuple(gens))


def dichotomic_observables(basis: GeneratorBasis) -> list:
    """Classify generators 1..d^2-1 by the local measurement that yields them.

    Diagonal operators all come from a single d-outcome measurement in the
    computational basis.  Every other operator acts on the two-level subspace
    spanned by one eigenstate pair ``(j, k)`` and needs its own setting.
    """
    return _classify(basis.d)


def reconstruct(coeffs, basis: GeneratorBasis) -> np.ndarray:
    """Inverse of ``coeffs[i] = Tr[H g_i]``: returns ``(1/d) sum_i coeffs[i] g_i``."""
    return np.tensordot(np.asarray(coeffs), basis.stack(), axes=1) / basis.d
