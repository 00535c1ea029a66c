"""Entanglement verdicts, white-noise sweeps and sequential acquisition."""
from dataclasses import dataclass, field
import csv
import io

import numpy as np

from .basis import GeneratorBasis, build_basis, dichotomic_observables
from .bounds import BoundSpec, BoundValue, CUTOFF_TAGS, FULLBODY_TAGS, compute_bound
from .correlations import NormTable, correlation_tensor, cx, norm_table
from .errors import InvalidDimensionError, InvalidStateError, ParameterDomainError
from .sampling import haar_unitary
from .states import DensityMatrix, mix_with_white_noise, purity

VIOLATION_TOL = 1e-9
SCHEDULES = ("lexicographic", "setting-grouped", "greedy-expected", "pruned")
PRUNE_EPSILON = 0.05


@dataclass(frozen=True)
class CriterionResult:
    spec: BoundSpec
    bound: BoundValue
    measured: float
    violated: bool

    @property
    def verdict(self) -> str:
        return "violated" if self.violated else "not-violated"

    def to_dict(self) -> dict:
        return {
            "criterion": self.spec.label,
            "spec": self.spec.to_dict(),
            "bound": self.bound.value,
            "bound_exact": str(self.bound.exact),
            "measured": self.measured,
            "quantity": quantity_name(self.spec),
            "verdict": self.verdict,
            "notes": self.bound.notes,
        }


@dataclass
class DetectionReport:
    state: dict
    table: NormTable
    results: list
    claims: list

    def to_dict(self) -> dict:
        return {
            "state": self.state,
            "norm_table": self.table.to_dict(),
            "criteria": [r.to_dict() for r in self.results],
            "claims": list(self.claims),
        }


def quantity_name(spec: BoundSpec) -> str:
    if spec.tag in FULLBODY_TAGS:
        return "full-body norm^2"
    return f"C_{spec.cutoff()}"


def measured_quantity(table: NormTable, spec: BoundSpec) -> float:
    if spec.tag in FULLBODY_TAGS:
        return table.full_body
    return cx(table, spec.cutoff()).value


def _claim(spec: BoundSpec) -> list:
    t = spec.tag
    if t in ("purity-ksep", "improved-ksep"):
        out = [f"not {spec.k}-separable"]
        if spec.k == 2:
            out.append("genuinely multipartite entangled")
        return out
    if t == "fullbody-single":
        return ["full-body norm exceeds a bound valid for every state: input inconsistent"]
    if t == "cutoff-partition":
        return [f"not separable across any ({spec.k1}|{spec.n - spec.k1}) bipartition"]
    if t in ("cutoff-bisep-max", "cutoff-half", "cutoff-nminus1"):
        return ["genuinely multipartite entangled"]
    return ["rank vector (" + ",".join(map(str, spec.ranks)) + ") excluded"]


def _check_spec(rho, spec):
    if spec.n != rho.n or spec.d != rho.d:
        raise InvalidDimensionError(
            f"criterion {spec.label} is for n={spec.n}, d={spec.d}; "
            f"state has n={rho.n}, d={rho.d}")


def evaluate(rho: DensityMatrix, criteria, state=None, table=None) -> DetectionReport:
    for spec in criteria:
        _check_spec(rho, spec)
    table = norm_table(rho) if table is None else table
    results, claims = [], []
    for spec in criteria:
        bound = compute_bound(spec)
        q = measured_quantity(table, spec)
        hit = q > bound.value + VIOLATION_TOL
        results.append(CriterionResult(spec, bound, q, hit))
        if hit:
            claims += [c for c in _claim(spec) if c not in claims]
    state = {"n": rho.n, "d": rho.d} if state is None else state
    return DetectionReport(state, table, results, claims)


# -- noise sweeps ----------------------------------------------------------

@dataclass
class NoiseSweepResult:
    grid: np.ndarray
    labels: list
    quantities: dict
    bounds: dict
    thresholds: dict
    full_body: np.ndarray
    cx_values: np.ndarray  # shape (len(grid), n + 1): C_0 .. C_n
    max_scaling_error: float

    def verdict(self, label, i) -> str:
        return "violated" if self.quantities[label][i] > self.bounds[label] + VIOLATION_TOL \
            else "not-violated"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["p"]
        for lab in self.labels:
            header += [f"{lab}:quantity", f"{lab}:bound", f"{lab}:verdict"]
        w.writerow(header)
        for i, p in enumerate(self.grid):
            row = [repr(float(p))]
            for lab in self.labels:
                row += [repr(float(self.quantities[lab][i])), repr(self.bounds[lab]),
                        self.verdict(lab, i)]
            w.writerow(row)
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "thresholds": {lab: self.thresholds[lab] for lab in self.labels},
            "bounds": {lab: self.bounds[lab] for lab in self.labels},
            "max_scaling_error": self.max_scaling_error,
        }


def parse_grid(text: str) -> np.ndarray:
    """``"a:b:step"`` -> inclusive grid from a to b."""
    try:
        a, b, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise ParameterDomainError(f"bad grid {text!r}; expected a:b:step") from None
    if step <= 0 or b < a:
        raise ParameterDomainError(f"bad grid {text!r}")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return np.round(a + step * np.arange(count), 12)


def _bisect(q1, bound, lo, hi, tol=1e-12):
    # q(p) = p^2 q1 is increasing on [0, 1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid * mid * q1 > bound:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def noise_sweep(rho_pure: DensityMatrix, criteria, grid) -> NoiseSweepResult:
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or grid.min() < 0 or grid.max() > 1:
        raise ParameterDomainError("noise grid must be nonempty and inside [0, 1]")
    if abs(purity(rho_pure) - 1) > 1e-8:
        raise InvalidStateError("noise sweep needs a pure base state")
    for spec in criteria:
        _check_spec(rho_pure, spec)
    n = rho_pure.n
    base = norm_table(rho_pure)
    labels = [s.label for s in criteria]
    bounds = {s.label: compute_bound(s).value for s in criteria}
    pure_q = {s.label: measured_quantity(base, s) for s in criteria}
    quantities = {lab: np.zeros(grid.size) for lab in labels}
    cxv = np.zeros((grid.size, n + 1))
    err = 0.0
    for i, p in enumerate(grid):
        t = norm_table(mix_with_white_noise(rho_pure, float(p)))
        cxv[i] = [cx(t, x).value for x in range(n + 1)]
        for s in criteria:
            q = measured_quantity(t, s)
            quantities[s.label][i] = q
            err = max(err, abs(q - p * p * pure_q[s.label]))
    thresholds = {}
    for s in criteria:
        lab = s.label
        above = np.nonzero(quantities[lab] > bounds[lab] + VIOLATION_TOL)[0]
        if above.size == 0:
            thresholds[lab] = None
            continue
        i = int(above[0])
        lo = float(grid[i - 1]) if i > 0 else 0.0
        thresholds[lab] = _bisect(pure_q[lab], bounds[lab], lo, float(grid[i]))
    return NoiseSweepResult(grid, labels, quantities, bounds, thresholds,
                            cxv[:, n].copy(), cxv, err)


# -- frame misalignment and sequential acquisition ------------------------

def party_seeds(seed, n) -> list:
    return [int(seed) + p for p in range(1, n + 1)]


def misalign(rho: DensityMatrix, seed=None, seeds=None) -> DensityMatrix:
    """Rotate every party by its own Haar unitary.

    ``seed`` expands to per-party seeds ``seed + party``; ``seeds`` gives them
    explicitly.  With neither, the state is returned unchanged.
    """
    if seeds is None:
        if seed is None:
            return rho
        seeds = party_seeds(seed, rho.n)
    if len(seeds) != rho.n:
        raise ParameterDomainError(f"need {rho.n} seeds, got {len(seeds)}")
    u = np.ones((1, 1), dtype=complex)
    for s in seeds:
        u = np.kron(u, haar_unitary(rho.d, np.random.default_rng(s)))
    return rho.conjugate_by(u)


@dataclass(frozen=True)
class AcquisitionStep:
    index: tuple
    value: float
    lower_bound: float


@dataclass
class AcquisitionRecord:
    target: BoundSpec
    bound: float
    true_quantity: float
    schedule: str
    seed: object
    steps: list = field(default_factory=list)
    stop_reason: str = ""
    skipped: int = 0
    epsilon: float = PRUNE_EPSILON

    @property
    def lower_bound(self) -> float:
        return self.steps[-1].lower_bound if self.steps else 0.0

    def to_dict(self) -> dict:
        n = self.target.n
        return {
            "target": self.target.to_dict(),
            "criterion": self.target.label,
            "bound": self.bound,
            "true_quantity": self.true_quantity,
            "schedule": self.schedule,
            "misalignment": {
                "identity": self.seed is None,
                "seed": self.seed,
                "party_seeds": None if self.seed is None else party_seeds(self.seed, n),
            },
            "epsilon": self.epsilon,
            "stop_reason": self.stop_reason,
            "steps_taken": len(self.steps),
            "skipped": self.skipped,
            "lower_bound": self.lower_bound,
            "steps": [{"index": list(s.index), "value": s.value, "lower_bound": s.lower_bound}
                      for s in self.steps],
        }


def _setting_codes(basis: GeneratorBasis) -> np.ndarray:
    # identity and diagonal operators share the computational-basis setting (code 0)
    codes = np.zeros(basis.d ** 2, dtype=int)
    for o in dichotomic_observables(basis):
        if o.kind != "diagonal":
            codes[o.index] = o.index
    return codes


def _schedule_order(schedule, flat, idx, t_expected, basis):
    if schedule == "lexicographic":
        return flat
    if schedule == "setting-grouped":
        codes = _setting_codes(basis)[idx]  # (count, n)
        keys = [flat] + [codes[:, j] for j in reversed(range(codes.shape[1]))]
        keys.append(np.count_nonzero(codes, axis=1))
        return flat[np.lexsort(keys)]
    mag = np.round(np.abs(t_expected.reshape(-1)[flat]), 12)
    return flat[np.argsort(-mag, kind="stable")]


def sequential_acquire(rho: DensityMatrix, target: BoundSpec, seed=None,
                       schedule="greedy-expected", budget=None,
                       epsilon=PRUNE_EPSILON, basis=None) -> AcquisitionRecord:
    """Reveal correlation elements of a misaligned copy of ``rho`` one by one.

    The running sum of squared revealed elements lower-bounds the target
    quantity; the run stops as soon as it exceeds the target's bound.
    """
    if schedule not in SCHEDULES:
        raise ParameterDomainError(f"unknown schedule {schedule!r}; choose from {SCHEDULES}")
    if target.tag not in FULLBODY_TAGS | CUTOFF_TAGS:
        raise ParameterDomainError(f"{target.tag} is not a full-body or cutoff criterion")
    if budget is not None and budget < 1:
        raise ParameterDomainError("budget must be >= 1")
    _check_spec(rho, target)
    basis = build_basis(rho.d) if basis is None else basis
    n, d = rho.n, rho.d
    bound = compute_bound(target).value
    x = target.cutoff()

    t_true = correlation_tensor(misalign(rho, seed), basis)
    t_exp = correlation_tensor(rho, basis) if schedule in ("greedy-expected", "pruned") else None

    shape = (d * d,) * n
    idx_all = np.stack(np.unravel_index(np.arange(d ** (2 * n)), shape), axis=1)
    support = np.count_nonzero(idx_all, axis=1)
    flat = np.nonzero(support >= max(x, 1))[0]
    order = _schedule_order(schedule, flat, idx_all[flat], t_exp, basis)

    vals = t_true.reshape(-1)
    rec = AcquisitionRecord(target, bound, float(np.sum(vals[flat] ** 2)), schedule, seed,
                            epsilon=epsilon)
    blocked = []  # (a, i, b, j) from near-maximal two-party correlations
    level = (d - 1) * (1 - epsilon)
    lb = 0.0
    for f in order:
        idx = tuple(int(v) for v in idx_all[f])
        if schedule == "pruned" and blocked:
            parties = [p for p in range(n) if idx[p]]
            if len(parties) == 2 and any(
                    (a, b) == tuple(parties) and ((idx[a] == i) != (idx[b] == j))
                    for a, i, b, j in blocked):
                rec.skipped += 1
                continue
        v = float(vals[f])
        lb += v * v
        rec.steps.append(AcquisitionStep(idx, v, lb))
        if schedule == "pruned" and abs(v) >= level:
            parties = [p for p in range(n) if idx[p]]
            if len(parties) == 2:
                a, b = parties
                blocked.append((a, idx[a], b, idx[b]))
        if lb > bound + VIOLATION_TOL:
            rec.stop_reason = "bound-violated"
            return rec
        if budget is not None and len(rec.steps) >= budget:
            rec.stop_reason = "budget-exhausted"
            return rec
    rec.stop_reason = "index-space-exhausted"
    return rec
