"""Closed-form separability and dimensionality bounds on correlation norms.

Every bound is returned on the squared scale, i.e. as a bound on
``||tau||^2`` or on ``C_x``, never on ``||tau||``.  Values are computed in
exact rational arithmetic and carried as both a ``Fraction`` and a float.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterDomainError

TAGS = (
    "purity-ksep",
    "improved-ksep",
    "fullbody-single",
    "cutoff-partition",
    "cutoff-bisep-max",
    "cutoff-half",
    "cutoff-nminus1",
    "dim-vector",
)

# quantity each tag bounds: "full" = full-body norm^2, otherwise the cutoff x
FULLBODY_TAGS = {"purity-ksep", "improved-ksep", "fullbody-single"}
CUTOFF_TAGS = {"cutoff-partition", "cutoff-bisep-max", "cutoff-half", "cutoff-nminus1"}


@dataclass(frozen=True)
class BoundSpec:
    tag: str
    n: int
    d: int
    k: int = None
    x: int = None
    k1: int = None
    ranks: tuple = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ParameterDomainError(f"unknown bound tag {self.tag!r}")
        if self.ranks is not None:
            object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))

    @property
    def label(self) -> str:
        params = []
        if self.k is not None:
            params.append(f"k={self.k}")
        if self.k1 is not None:
            params.append(f"k1={self.k1}")
        if self.x is not None:
            params.append(f"x={self.x}")
        if self.ranks is not None:
            params.append("ranks=" + "-".join(map(str, self.ranks)))
        return self.tag + (f"[{','.join(params)}]" if params else "")

    def cutoff(self) -> int:
        """The cutoff x of the quantity this bound constrains (n means full body)."""
        if self.tag in FULLBODY_TAGS:
            return self.n
        if self.tag == "dim-vector":
            return 2
        if self.tag == "cutoff-half":
            return self.n // 2 + 1
        if self.tag == "cutoff-nminus1":
            return self.n - 1
        return self.x

    def to_dict(self) -> dict:
        out = {"tag": self.tag, "n": self.n, "d": self.d}
        for key in ("k", "x", "k1"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.ranks is not None:
            out["ranks"] = list(self.ranks)
        return out


@dataclass(frozen=True)
class BoundValue:
    exact: Fraction
    spec: BoundSpec
    notes: str = ""
    value: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.exact))


def _check_nd(n, d, n_min=1):
    if int(n) != n or int(d) != d or n < n_min or d < 2:
        raise ParameterDomainError(f"need integer n >= {n_min} and d >= 2, got n={n}, d={d}")


def equipartition_max(f, n, k):
    """Largest product ``f(|b_1|) ... f(|b_k|)`` over k-partitions of n parties.

    ``f`` must satisfy ``f(x)^2 >= f(x+y) f(x-y)``; the maximum then sits on
    the most even split: R blocks of size ceil(n/k), the rest floor(n/k).
    """
    if not 1 <= k <= n:
        raise ParameterDomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    q, r = divmod(n, k)
    lo = f(q)
    hi = f(q + 1) if r else 1
    return hi ** r * lo ** (k - r)


def purity_block(d):
    """Largest ``||tau||^2`` of any m-party state: ``d^m - 1``."""
    return lambda m: Fraction(d) ** m - 1


def improved_block(d):
    """``(d^2 - 1) d^(m-2)``, the Schmidt-improved block bound."""
    return lambda m: (Fraction(d) ** 2 - 1) * Fraction(d) ** (m - 2)


def bound_purity_ksep(n, d, k) -> BoundValue:
    _check_nd(n, d)
    val = equipartition_max(purity_block(d), n, k)
    return BoundValue(val, BoundSpec("purity-ksep", n, d, k=k),
                      f"full-body norm^2 of {k}-separable states; "
                      "equipartition of block bound d^m-1")


def bound_improved_ksep(n, d, k) -> BoundValue:
    _check_nd(n, d)
    if not 1 <= k <= n:
        raise ParameterDomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    val = equipartition_max(improved_block(d), n, k)
    notes = ("full-body norm^2 of k-separable states; block bound (d^2-1)d^(m-2); "
             "variant with '(d^(m-2) - 1)' factors read as a typo")
    if n // k == 1:
        notes += ("; single-party blocks use the literal factor (d^2-1)/d, "
                  "looser than the purity value d-1")
    return BoundValue(val, BoundSpec("improved-ksep", n, d, k=k), notes)


def bound_fullbody_single(n, d) -> BoundValue:
    _check_nd(n, d, n_min=2)
    d = Fraction(d)
    schmidt = d ** (n - 2) * (d ** 2 - 1)
    comb = d ** n - n * (d ** (n - 2) - 1) / (n - 1)
    which = "Schmidt bound d^(n-2)(d^2-1)" if schmidt <= comb else \
        "combinatorial bound d^n - n(d^(n-2)-1)/(n-1)"
    return BoundValue(min(schmidt, comb), BoundSpec("fullbody-single", n, int(d)),
                      f"full-body norm^2 of any state; smaller of two bounds: {which}; "
                      "combinatorial bound applied to the full-body tensor although "
                      "its statement says non-full-body")


def _partition_value(n, d, x, k1):
    k2 = n - k1
    val = (d ** k1 - 1) * (d ** k2 - 1)
    for kj in (k1, k2):
        if kj >= x:
            val += d ** kj - 1
    return Fraction(val)


def _check_cutoff(n, x):
    if x is None or not 0 <= x <= n:
        raise ParameterDomainError(f"cutoff x={x} outside 0..{n}")


def bound_cutoff_partition(n, d, x, k1) -> BoundValue:
    _check_nd(n, d, n_min=2)
    _check_cutoff(n, x)
    if not 1 <= k1 <= n - 1:
        raise ParameterDomainError(f"need 1 <= k1 <= n-1, got k1={k1}")
    return BoundValue(_partition_value(n, d, x, k1),
                      BoundSpec("cutoff-partition", n, d, x=x, k1=k1),
                      f"C_{x} of states separable across a ({k1}|{n - k1}) bipartition")


def bound_cutoff_bisep_max(n, d, x) -> BoundValue:
    _check_nd(n, d, n_min=2)
    _check_cutoff(n, x)
    best_k1 = max(range(1, n // 2 + 1), key=lambda k1: (_partition_value(n, d, x, k1), -k1))
    return BoundValue(_partition_value(n, d, x, best_k1),
                      BoundSpec("cutoff-bisep-max", n, d, x=x),
                      f"C_{x} of biseparable states; max over bipartitions "
                      f"attained at ({best_k1}|{n - best_k1})")


def bound_cutoff_half(n, d) -> BoundValue:
    _check_nd(n, d, n_min=2)
    if n % 2:
        raise ParameterDomainError("the C_(n/2+1) corollary is stated for even n only")
    notes = f"C_{n // 2 + 1} of biseparable states: d^n - d"
    if n == 2:
        notes += "; for n=2 cutoff-bisep-max[x=2] = (d-1)^2 is tighter"
    return BoundValue(Fraction(d) ** n - d, BoundSpec("cutoff-half", n, d), notes)


def bound_cutoff_nminus1(n, d) -> BoundValue:
    _check_nd(n, d, n_min=3)
    D = Fraction(d)
    a = D ** n - D ** (n // 2) - D ** ((n + 1) // 2) + 1
    b = (D - 1) * (D ** (n - 1) - 1) + D ** (n - 1) - 1 \
        - Fraction(n, n - 1) * (D ** (n - 3) - 1)
    notes = (f"C_{n - 1} of biseparable states: max[A, B], A={a}, B={b}; "
             "B refines the (1|n-1) term of the bipartition bound and is not "
             "reproducible from cutoff-bisep-max")
    if n % 2:
        notes += "; odd n: A uses d^floor(n/2) + d^ceil(n/2)"
    if (n, d) == (4, 2):
        notes += "; the published worked example quotes 37/3 for this case"
    return BoundValue(max(a, b), BoundSpec("cutoff-nminus1", n, d), notes)


def bound_dim_vector(n, d, ranks) -> BoundValue:
    _check_nd(n, d)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != n or any(not 1 <= r <= d for r in ranks):
        raise ParameterDomainError(f"need {n} local ranks in 1..{d}, got {ranks}")
    val = Fraction(d) ** n + n - 1 - sum(Fraction(d, r) for r in ranks)
    return BoundValue(val, BoundSpec("dim-vector", n, d, ranks=ranks),
                      f"C_2 of states decomposable with local ranks {ranks}")


def compute_bound(spec: BoundSpec) -> BoundValue:
    t = spec.tag
    if t == "purity-ksep":
        return bound_purity_ksep(spec.n, spec.d, spec.k)
    if t == "improved-ksep":
        return bound_improved_ksep(spec.n, spec.d, spec.k)
    if t == "fullbody-single":
        return bound_fullbody_single(spec.n, spec.d)
    if t == "cutoff-partition":
        return bound_cutoff_partition(spec.n, spec.d, spec.x, spec.k1)
    if t == "cutoff-bisep-max":
        return bound_cutoff_bisep_max(spec.n, spec.d, spec.x)
    if t == "cutoff-half":
        return bound_cutoff_half(spec.n, spec.d)
    if t == "cutoff-nminus1":
        return bound_cutoff_nminus1(spec.n, spec.d)
    return bound_dim_vector(spec.n, spec.d, spec.ranks)


def default_criteria(n, d, ranks=None) -> list:
    """Every bound that applies to an (n, d) system."""
    out = [BoundSpec("purity-ksep", n, d, k=k) for k in range(2, n + 1)]
    out.append(BoundSpec("improved-ksep", n, d, k=2))
    if n >= 2:
        out.append(BoundSpec("fullbody-single", n, d))
        out += [BoundSpec("cutoff-bisep-max", n, d, x=x) for x in range(2, n + 1)]
    if n >= 2 and n % 2 == 0:
        out.append(BoundSpec("cutoff-half", n, d))
    if n >= 3:
        out.append(BoundSpec("cutoff-nminus1", n, d))
    if ranks is not None:
        out.append(BoundSpec("dim-vector", n, d, ranks=tuple(ranks)))
    return out
