"""Command-line front end: ``qhforge build-schur | verify | cn | export-quiver``.

Exit codes: 0 success (for ``verify``: an explicit isomorphism), 1 invalid
input or resource limit, 2 degree outside the verified family, 3 invariants
match but the search stopped short, 4 refuted, 5 an acceptance check failed.  Every output document has a
``status`` and, for nonzero exits, a ``reason``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .algebra import field_algebra
from .glue import GluedWindowSpec, cn, cn_quotient_epi, field_spec
from .grmorita import verify_grmorita
from .io import (
    algebra_from_dict,
    algebra_to_dict,
    bimodule_from_dict,
    bimodule_to_dict,
    dumps,
    map_to_dict,
    read_json,
    write_json,
)
from .modules import ext1, projective, quotient_module, radical_submodule
from .qh import WeightPoset
from .schur import MAX_R, build_schur
from .structure import NonSplitError, cartan_matrix, decompose, radical_power

EXIT_OK, EXIT_INPUT, EXIT_NOT_APPLICABLE, EXIT_INCOMPLETE, EXIT_REFUTED, EXIT_ACCEPTANCE = 0, 1, 2, 3, 4, 5
VERDICT_EXIT = {"isomorphic": EXIT_OK, "invariants-match": EXIT_INCOMPLETE, "refuted": EXIT_REFUTED,
                "not-applicable": EXIT_NOT_APPLICABLE}


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    r: int | None = None
    n: int | None = None
    depth: int = 1
    seed: int = 0
    budget: int = 10**6
    out: str | None = None
    format: str = "json"
    input: str | None = None
    timings: bool = False
    only: list | None = None


class InputError(Exception):
    pass


def _threads():
    """Worker cap from ``QHFORGE_THREADS``; applied to native thread pools when available."""
    raw = os.environ.get("QHFORGE_THREADS")
    if not raw:
        return contextlib.nullcontext()
    try:
        n = int(raw)
        if n < 1:
            raise ValueError
    except ValueError:
        raise InputError(f"QHFORGE_THREADS must be a positive integer, got {raw!r}")
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return contextlib.nullcontext()
    return threadpool_limits(limits=n)


def _emit(cfg: RunConfig, doc: dict) -> None:
    if cfg.out:
        write_json(cfg.out, doc, cfg.format)
    else:
        sys.stdout.write(dumps(doc, cfg.format))


# -- commands ----------------------------------------------------------------

def cmd_build_schur(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.p is None or cfg.r is None:
        raise InputError("build-schur needs --p and --r")
    try:
        s = build_schur(cfg.p, cfg.r)
    except MemoryError as exc:
        return EXIT_INPUT, {"status": "error", "reason": f"resource limit: {exc}", "max_r": MAX_R}
    doc = algebra_to_dict(s.algebra)
    doc.update({"status": "ok", "r": cfg.r, "weights": s.weights})
    return EXIT_OK, doc


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.p is None or cfg.r is None:
        raise InputError("verify needs --p and --r")
    try:
        res = verify_grmorita(cfg.p, cfg.r, seed=cfg.seed, budget=cfg.budget, timings=cfg.timings)
    except MemoryError as exc:
        return EXIT_INPUT, {"status": "error", "reason": f"resource limit: {exc}"}
    code = VERDICT_EXIT[res.verdict]
    doc = {"status": "ok" if code == EXIT_OK else res.verdict, "verdict": res.verdict, "exit_code": code,
           "transcript": res.transcript}
    if code:
        doc["reason"] = res.reason
    return code, doc


def _load_spec(cfg: RunConfig) -> GluedWindowSpec:
    src = cfg.input or "F"
    if src.upper() == "F":
        if cfg.p is None:
            raise InputError("the F shorthand needs --p")
        return field_spec(cfg.p)
    doc = read_json(src)
    if "algebra" not in doc or "bimodule" not in doc or "witness" not in doc["bimodule"]:
        raise InputError("input must hold 'algebra' and 'bimodule' with a 'witness'")
    a = algebra_from_dict(doc["algebra"])
    t = bimodule_from_dict(doc["bimodule"], a)
    poset = WeightPoset.from_json(dumps(doc["poset"])) if "poset" in doc else None
    spec = GluedWindowSpec(a, t, np.array(doc["bimodule"]["witness"], dtype=np.int64), poset)
    try:
        spec.validate()
    except ValueError as exc:
        raise InputError(f"invalid self-dual witness: {exc}")
    return spec


def cmd_cn(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.n is None or cfg.n < 1:
        raise InputError("cn needs --n >= 1")
    if cfg.depth < 0:
        raise InputError("--depth must be nonnegative")
    spec = _load_spec(cfg)
    chain, dims = [], [spec.base.dim]
    window = t = None
    composite = None
    for _ in range(cfg.depth):
        window, t, nxt = cn(spec, cfg.n, seed=cfg.seed)
        epi = cn_quotient_epi(window)
        composite = epi if composite is None else epi.compose(composite)
        chain.append({"map": map_to_dict(epi), "multiplicative": epi.is_multiplicative(),
                      "surjective": epi.is_surjective()})
        dims.append(window.dim)
        spec = nxt
    doc = {"status": "ok", "n": cfg.n, "depth": cfg.depth, "dims": dims, "epimorphisms": chain}
    if window is None:
        doc["algebra"] = algebra_to_dict(spec.base)
    else:
        doc["algebra"] = algebra_to_dict(window.algebra, window.components)
        doc["bimodule"] = bimodule_to_dict(t.bimodule, t.witness)
        doc["poset"] = json.loads(spec.poset.to_json())
        doc["composite"] = {"multiplicative": composite.is_multiplicative(),
                            "surjective": composite.is_surjective(), "target_dim": composite.target.dim}
    return EXIT_OK, doc


def quiver_data(a) -> dict:
    """Vertices, ``dim Ext^1(L(x), L(y))`` arrow counts, Cartan matrix and radical layers."""
    d = decompose(a)
    labels, cart = cartan_matrix(a)
    simples = {}
    for lab in labels:
        pm = projective(a, d.reps[lab])
        simples[lab] = quotient_module(pm, radical_submodule(pm))
    arrows = []
    for x in labels:
        for y in labels:
            k = ext1(simples[x], simples[y]).dim
            if k:
                arrows.append({"from": x, "to": y, "count": int(k)})
    layers, m = [a.dim], 1
    while layers[-1]:
        layers.append(int(radical_power(a, m).shape[0]))
        m += 1
    out = {"vertices": labels, "arrows": arrows, "cartan": np.asarray(cart).tolist(),
           "radical_layers": layers, "simple_dims": [d.simple_dims[l] for l in labels]}
    if a.grading is not None:
        out["graded_dims"] = [a.grading.count(k) for k in range(max(a.grading) + 1)]
    return out


def cmd_export_quiver(cfg: RunConfig) -> tuple[int, dict]:
    if not cfg.input:
        raise InputError("export-quiver needs --input")
    if cfg.input.upper() == "F":
        a = field_algebra(cfg.p or 2, label=1)
    else:
        doc = read_json(cfg.input)
        a = algebra_from_dict(doc.get("algebra", doc))
    out = quiver_data(a)
    out["status"] = "ok"
    return EXIT_OK, out


def cmd_acceptance(cfg: RunConfig) -> tuple[int, dict]:
    from .acceptance import run_all

    res = run_all(cfg.only)
    failed = [k for k, v in res.items() if not v["ok"]]
    doc = {"status": "ok" if not failed else "failed", "criteria": res, "failed": failed}
    if failed:
        doc["reason"] = "failing acceptance checks: " + ", ".join(failed)
    return (EXIT_ACCEPTANCE if failed else EXIT_OK), doc


COMMANDS = {"build-schur": cmd_build_schur, "verify": cmd_verify, "cn": cmd_cn, "export-quiver": cmd_export_quiver,
            "acceptance": cmd_acceptance}


def parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="qhforge", description="Quasi-hereditary algebra computations over GF(p).")
    top.add_argument("--version", action="version", version=f"qhforge {__version__}")
    sub = top.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (written atomically); stdout when omitted")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for randomized steps (default 0)")
    common.add_argument("--p", type=int, help="characteristic")
    b = sub.add_parser("build-schur", parents=[common], help="structure constants of S(2, r)")
    b.add_argument("--r", type=int, required=True)
    v = sub.add_parser("verify", parents=[common], help="graded Morita check for S(2, r)")
    v.add_argument("--r", type=int, required=True)
    v.add_argument("--budget", type=int, default=10**6, help="search-node limit")
    v.add_argument("--timings", action="store_true", help="include wall-clock seconds per phase")
    c = sub.add_parser("cn", parents=[common], help="iterate the C_n construction")
    c.add_argument("--input", default="F", help="'F' or a JSON file with algebra, bimodule and witness")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--depth", type=int, default=1)
    e = sub.add_parser("export-quiver", parents=[common], help="Ext quiver and Cartan data of an algebra")
    e.add_argument("--input", required=True, help="algebra JSON (or 'F' with --p)")
    a = sub.add_parser("acceptance", parents=[common], help="run the acceptance checks into one transcript")
    a.add_argument("--only", type=int, nargs="+", help="criterion numbers to run (default: all)")
    return top


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    if cfg.seed < 0 or cfg.seed >= 2**64:
        cfg_err = {"status": "error", "reason": "seed must fit in 64 unsigned bits"}
        _emit(cfg, cfg_err)
        return EXIT_INPUT
    if cfg.budget < 0:
        _emit(cfg, {"status": "error", "reason": "budget must be nonnegative"})
        return EXIT_INPUT
    try:
        with _threads():
            code, doc = COMMANDS[cfg.command](cfg)
    except InputError as exc:
        code, doc = EXIT_INPUT, {"status": "error", "reason": str(exc)}
    except NonSplitError as exc:
        code, doc = EXIT_INPUT, {"status": "error", "reason": f"algebra does not split over GF(p): {exc}"}
    except (ValueError, OSError) as exc:
        code, doc = EXIT_INPUT, {"status": "error", "reason": f"{type(exc).__name__}: {exc}"}
    doc = {"command": cfg.command, **doc}
    _emit(cfg, doc)
    if code and cfg.out:
        print(f"qhforge {cfg.command}: exit {code}: {doc.get('reason', '')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
