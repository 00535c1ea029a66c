"""Graph-state norm tables by stabilizer enumeration (qubits only).

A Pauli string is stored as bit masks ``x`` and ``z`` (bit ``n-1-q`` for
qubit ``q``, matching the dense ordering) plus a phase exponent ``k`` so that
the operator is ``i^k * prod_q X_q^{x_q} Z_q^{z_q}``.  For a graph state each
stabilizer has expectation +-1 and every other Pauli string has expectation
0, so ``||tau_alpha||^2`` is the number of stabilizers supported exactly on
``alpha``.
"""
from dataclasses import dataclass
from collections import Counter

from .correlations import NormTable, all_subsets
from .errors import InvalidStateError
from .states import validate_adjacency


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    k: int = 0

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliString":
        n = len(label)
        x = z = 0
        ys = 0
        for q, c in enumerate(label.upper()):
            bit = 1 << (n - 1 - q)
            if c in "XY":
                x |= bit
            if c in "ZY":
                z |= bit
            if c == "Y":
                ys += 1
            elif c not in "IXZ":
                raise ValueError(f"bad Pauli letter {c!r}")
        # Y = i X Z
        return cls(n, x, z, (ys + (0 if sign > 0 else 2)) % 4)

    def __mul__(self, other: "PauliString") -> "PauliString":
        # (X^a Z^b)(X^c Z^e) = (-1)^{b.c} X^{a+c} Z^{b+e}
        flip = bin(self.z & other.x).count("1")
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z,
                           (self.k + other.k + 2 * flip) % 4)

    def commutes(self, other: "PauliString") -> bool:
        """Symplectic product is zero."""
        return (bin(self.x & other.z).count("1") + bin(self.z & other.x).count("1")) % 2 == 0

    @property
    def support(self) -> tuple:
        """1-based qubits on which the string acts nontrivially."""
        m = self.x | self.z
        return tuple(q + 1 for q in range(self.n) if m >> (self.n - 1 - q) & 1)

    @property
    def weight(self) -> int:
        return bin(self.x | self.z).count("1")

    @property
    def sign(self) -> int:
        """Real sign in front of the Hermitian label; raises if not +-1."""
        r = (self.k - bin(self.x & self.z).count("1")) % 4
        if r % 2:
            raise InvalidStateError("Pauli string has an imaginary phase")
        return 1 if r == 0 else -1

    @property
    def label(self) -> str:
        out = []
        for q in range(self.n):
            bit = 1 << (self.n - 1 - q)
            out.append("IZXY"[bool(self.x & bit) * 2 + bool(self.z & bit)])
        return "".join(out)

    def basis_index(self) -> tuple:
        """Generator indices in the d=2 basis ordering (I, X, Y, Z)."""
        return tuple("IXYZ".index(c) for c in self.label)


@dataclass(frozen=True)
class StabilizerGroup:
    n: int
    elements: tuple

    @classmethod
    def from_generators(cls, generators) -> "StabilizerGroup":
        gens = list(generators)
        n = gens[0].n
        for i, g in enumerate(gens):
            for h in gens[i + 1:]:
                if not g.commutes(h):
                    raise InvalidStateError(f"generators {g.label} and {h.label} anticommute")
        elems = [PauliString(n, 0, 0, 0)]
        for g in gens:
            elems = elems + [e * g for e in elems]
        seen = {(e.x, e.z) for e in elems}
        if len(seen) != 2 ** len(gens):
            raise InvalidStateError("generators are not independent")
        for e in elems:
            _ = e.sign  # raises on an imaginary phase
        return cls(n, tuple(elems))

    @classmethod
    def from_graph(cls, adjacency) -> "StabilizerGroup":
        a = validate_adjacency(adjacency)
        n = a.shape[0]
        gens = []
        for i in range(n):
            x = 1 << (n - 1 - i)
            z = 0
            for j in range(n):
                if a[i, j]:
                    z |= 1 << (n - 1 - j)
            gens.append(PauliString(n, x, z, 0))
        return cls.from_generators(gens)

    def __len__(self):
        return len(self.elements)


def weight_enumerator(group: StabilizerGroup) -> dict:
    counts = Counter(e.weight for e in group.elements)
    return {m: counts.get(m, 0) for m in range(group.n + 1)}


def group_norm_table(group: StabilizerGroup) -> NormTable:
    counts = Counter(e.support for e in group.elements)
    entries = {a: float(counts.get(a, 0)) for a in all_subsets(group.n)}
    return NormTable(group.n, 2, entries)


def graph_norm_table(adjacency) -> NormTable:
    return group_norm_table(StabilizerGroup.from_graph(adjacency))


def expected_elements(group: StabilizerGroup) -> dict:
    """Map from d=2 generator index tuple to its +-1 expectation value."""
    return {e.basis_index(): e.sign for e in group.elements}
