"""JSON interchange for algebras, bimodules and maps.

Structure constants are stored sparsely as ``[i, j, k, c]`` entries with
``c`` reduced mod ``p``; labels that are tuples are written as lists and
read back as tuples.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .algebra import AlgebraMap, BasedAlgebra
from .modules import Bimodule

__all__ = [
    "algebra_to_dict",
    "algebra_from_dict",
    "bimodule_to_dict",
    "bimodule_from_dict",
    "map_to_dict",
    "dumps",
    "write_json",
    "read_json",
]

FORMAT = "qhforge-algebra"


def _label_out(lab):
    if isinstance(lab, (tuple, list)):
        return [_label_out(x) for x in lab]
    if isinstance(lab, np.integer):
        return int(lab)
    return lab


def _label_in(lab):
    if isinstance(lab, list):
        return tuple(_label_in(x) for x in lab)
    return lab


def _sparse(t: np.ndarray) -> list:
    idx = np.argwhere(t)
    return [[*map(int, ix), int(t[tuple(ix)])] for ix in idx]


def _dense(entries, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=np.int64)
    for *ix, c in entries:
        out[tuple(ix)] = c
    return out


def algebra_to_dict(a: BasedAlgebra, components: dict | None = None) -> dict:
    out = {
        "format": FORMAT,
        "name": a.name,
        "p": a.p,
        "dim": a.dim,
        "unit": a.unit.tolist(),
        "mult": _sparse(a.mult),
        "idempotents": [{"label": _label_out(lab), "vector": v.tolist()} for lab, v in a.idempotents],
        "grading": a.grading,
    }
    if components:
        out["components"] = [
            {"component": _label_out(name), "start": int(s), "stop": int(e)} for name, (s, e) in components.items()
        ]
    return out


def algebra_from_dict(d: dict) -> BasedAlgebra:
    if d.get("format", FORMAT) != FORMAT:
        raise ValueError(f"not an algebra document: {d.get('format')}")
    p, n = int(d["p"]), int(d["dim"])
    mult = _dense(d["mult"], (n, n, n))
    idem = [(_label_in(x["label"]), x["vector"]) for x in d.get("idempotents", [])] or None
    alg = BasedAlgebra(p, mult, d["unit"], idem, d.get("grading"), d.get("name", ""))
    if "components" in d:
        alg.components = {_label_in(c["component"]): (c["start"], c["stop"]) for c in d["components"]}
    return alg


def bimodule_to_dict(m: Bimodule, witness=None) -> dict:
    out = {
        "format": "qhforge-bimodule",
        "dim": m.dim,
        "left_action": _sparse(m.left.action),
        "right_action": _sparse(m.right.action),
    }
    if witness is not None:
        out["witness"] = np.asarray(witness, dtype=np.int64).tolist()
    return out


def bimodule_from_dict(d: dict, left: BasedAlgebra, right: BasedAlgebra | None = None) -> Bimodule:
    right = right or left
    k = int(d["dim"])
    la = _dense(d["left_action"], (left.dim, k, k))
    ra = _dense(d["right_action"], (right.dim, k, k))
    return Bimodule(left, right, la, ra, validate=True)


def map_to_dict(f: AlgebraMap) -> dict:
    return {"kind": f.kind, "source_dim": f.source.dim, "target_dim": f.target.dim, "matrix": f.matrix.tolist()}


def _default(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _clean(x):
    # tuple keys and labels become JSON-friendly before dumping
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else json.dumps(_label_out(k), default=_default)): _clean(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps(obj, fmt: str = "json") -> str:
    """Deterministic rendering: sorted keys for JSON, ``key: value`` lines for text."""
    obj = _clean(obj)
    if fmt == "json":
        return json.dumps(obj, sort_keys=True, indent=1, default=_default) + "\n"
    if fmt == "text":
        lines = []

        def walk(prefix, x):
            if isinstance(x, dict):
                for k in sorted(x):
                    walk(f"{prefix}.{k}" if prefix else str(k), x[k])
            else:
                lines.append(f"{prefix}: {json.dumps(x, sort_keys=True, default=_default)}")

        walk("", obj)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_json(path: str, obj, fmt: str = "json") -> None:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    text = dumps(obj, fmt)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str):
    with open(path) as fh:
        return json.load(fh)
