"""State specifications, matrix text files and report writers.

Matrix file: first line ``"n d"``, then ``d**n`` lines of ``d**n`` entries
``re,im`` separated by single spaces.

StateSpec JSON: ``{"kind": ..., <kind fields>}`` with kinds

    ghz          n, d
    w            n
    graph        adjacency (0/1 rows) or edges ("1-2,2-3" or [[1,2],[2,3]])
    ame43        -
    product      n, d, optional digits (computational basis labels)
    matrix-file  path (relative paths resolve against the spec file)
    mix          base (nested spec), p
"""
from dataclasses import dataclass, field
import json
import os
from pathlib import Path
import tempfile

import numpy as np

from . import states
from .errors import InvalidStateError

KINDS = ("ghz", "w", "graph", "ame43", "product", "matrix-file", "mix")
_REQUIRED = {
    "ghz": ("n", "d"),
    "w": ("n",),
    "graph": (),
    "ame43": (),
    "product": ("n", "d"),
    "matrix-file": ("path",),
    "mix": ("base", "p"),
}


@dataclass
class StateSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidStateError(f"unknown state kind {self.kind!r}; choose from {KINDS}")
        missing = [k for k in _REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise InvalidStateError(f"state kind {self.kind!r} needs fields {missing}")
        if self.kind == "graph" and not ({"adjacency", "edges"} & set(self.params)):
            raise InvalidStateError("graph state needs 'adjacency' or 'edges'")
        if self.kind == "mix":
            base = self.params["base"]
            if isinstance(base, dict):
                self.params["base"] = StateSpec.from_dict(base)
            p = float(self.params["p"])
            if not 0 <= p <= 1:
                raise InvalidStateError(f"mixing weight p={p} outside [0, 1]")

    @classmethod
    def from_dict(cls, obj) -> "StateSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidStateError("state spec must be a JSON object with a 'kind'")
        params = {k: v for k, v in obj.items() if k != "kind"}
        return cls(obj["kind"], params)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for k, v in self.params.items():
            out[k] = v.to_dict() if isinstance(v, StateSpec) else v
        return out

    def adjacency(self) -> np.ndarray:
        if "adjacency" in self.params:
            return states.validate_adjacency(self.params["adjacency"])
        edges = self.params["edges"]
        if isinstance(edges, str):
            edges = states.parse_edge_list(edges)
        return states.edges_to_adjacency(edges, self.params.get("n"))


def build_state(spec: StateSpec, base_dir=None, cap=None) -> states.DensityMatrix:
    p = spec.params
    if spec.kind == "ghz":
        return states.make_ghz(int(p["n"]), int(p["d"]), cap=cap)
    if spec.kind == "w":
        return states.make_w(int(p["n"]), cap=cap)
    if spec.kind == "graph":
        return states.make_graph_state(spec.adjacency(), cap=cap)
    if spec.kind == "ame43":
        return states.make_ame43()
    if spec.kind == "product":
        n, d = int(p["n"]), int(p["d"])
        digits = p.get("digits")
        kets = None if digits is None else [states.basis_ket([int(q)], d) for q in digits]
        return states.make_product(n, d, kets, cap=cap)
    if spec.kind == "matrix-file":
        path = Path(p["path"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return read_matrix_file(path, cap=cap)
    base = build_state(p["base"], base_dir, cap)
    return states.mix_with_white_noise(base, float(p["p"]))


def load_state_spec(path) -> StateSpec:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidStateError(f"{path}: not valid JSON ({e})") from None
    return StateSpec.from_dict(obj)


def read_matrix_file(path, cap=None) -> states.DensityMatrix:
    """Parse a matrix file and validate it fully, positivity included."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    lines = [ln for ln in lines if ln.strip()]
    try:
        n, d = (int(t) for t in lines[0].split())
    except (ValueError, IndexError):
        raise InvalidStateError(f"{path}: first line must be 'n d'") from None
    states.check_dims(n, d, cap)
    dim = d ** n
    if len(lines) != dim + 1:
        raise InvalidStateError(f"{path}: expected {dim} matrix rows, found {len(lines) - 1}")
    m = np.zeros((dim, dim), dtype=complex)
    for r, ln in enumerate(lines[1:]):
        ents = ln.split()
        if len(ents) != dim:
            raise InvalidStateError(f"{path}: row {r + 1} has {len(ents)} entries, expected {dim}")
        for c, e in enumerate(ents):
            try:
                re_, im_ = e.split(",")
                m[r, c] = complex(float(re_), float(im_))
            except ValueError:
                raise InvalidStateError(f"{path}: bad entry {e!r} in row {r + 1}") from None
    return states.DensityMatrix(n, d, m).validate_positive()


def format_matrix(rho: states.DensityMatrix) -> str:
    rows = [f"{rho.n} {rho.d}"]
    for row in rho.data:
        rows.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    return "\n".join(rows) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    # float repr is the shortest string that round-trips the double exactly
    return json.dumps(obj, indent=2, default=_jsonable) + "\n"


def write_atomic(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
