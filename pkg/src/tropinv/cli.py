"""Command line front end.

Input files are JSON objects::

    {"field": "puiseux", "coefficients": ["1", "-t^2", "-t^2"], "n": [2, 3]}
    {"field": "padic:5", "roots": ["1", "5", "-5"]}

``coefficients`` lists ``a_1..a_d`` for ``f = x^d - a_1 x^(d-1) + ...``;
``roots`` is the alternative (required by ``compare``).  ``field``
defaults to ``puiseux``.  Reports go to stdout as JSON, or to ``--json``.

Exit codes: 0 success, 2 input error, 3 capability error, 4 internal
inconsistency (including a failed ``compare``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__, cache
from .classify import ClassificationResult, classify_general, classify_table, tropical_invariants
from .errors import InconsistencyError, InputError, ParseError, TropinvError
from .newton import NewtonInput, lower_hull
from .oracle import expand_to_coefficients, tree_from_roots
from .skeleton import build_skeleton, minimal_model, skeleton_report
from .sympoly import EdgeWeightedGraph
from .tables import rows_for
from .tree import filtration_type, isomorphic
from .valued_field import PUISEUX, FieldElement, FieldModel, format_trop, parse_element

__all__ = ["Job", "load_job", "main"]


class Job:
    """A parsed input file."""

    def __init__(self, model: FieldModel, coefficients: list[FieldElement] | None,
                 roots: list[FieldElement] | None, ns: list[int]):
        self.model = model
        self.coefficients = coefficients
        self.roots = roots
        self.ns = ns

    @property
    def d(self) -> int:
        return len(self.roots if self.roots is not None else self.coefficients)

    def coeffs(self) -> list[FieldElement]:
        """Coefficients, expanding the roots when only those were given."""
        if self.coefficients is not None:
            return self.coefficients
        return expand_to_coefficients(self.roots)


def _model(spec: Any) -> FieldModel:
    if spec is None or spec == "puiseux":
        return PUISEUX
    if isinstance(spec, str) and spec.startswith("padic:"):
        try:
            return FieldModel("padic", int(spec[6:]))
        except ValueError:
            raise InputError(f"bad field {spec!r}") from None
    if isinstance(spec, dict):
        return FieldModel(spec.get("kind", ""), spec.get("p"))
    raise InputError(f"bad field {spec!r}; use \"puiseux\" or \"padic:<p>\"")


def _locate(text: str, literal: str) -> tuple[int, int] | None:
    """1-based line and column of a JSON string literal's first character."""
    pos = text.find(json.dumps(literal))
    if pos < 0:
        return None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col + 1


def _elements(values: Any, key: str, model: FieldModel, text: str) -> list[FieldElement]:
    if not isinstance(values, list) or not values:
        raise InputError(f"{key!r} must be a nonempty list")
    out = []
    for v in values:
        if isinstance(v, int) and not isinstance(v, bool):
            v = str(v)
        if not isinstance(v, str):
            raise InputError(f"{key!r} entries must be strings, got {v!r}")
        try:
            out.append(parse_element(v, model))
        except ParseError as exc:
            where = _locate(text, v)
            if where is None:
                raise
            raise ParseError(str(exc).rsplit(" at ", 1)[0] + f" in {v!r}",
                             where[1] + exc.column - 1, where[0]) from None
    return out


def load_job(path: str | Path, require_roots: bool = False) -> Job:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.colno, exc.lineno) from None
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    model = _model(obj.get("field"))
    has_c, has_r = "coefficients" in obj, "roots" in obj
    if require_roots and not has_r:
        raise InputError("this command needs \"roots\"")
    if not require_roots and has_c == has_r:
        raise InputError("give exactly one of \"coefficients\" and \"roots\"")
    coeffs = _elements(obj["coefficients"], "coefficients", model, text) if has_c and not require_roots else None
    roots = _elements(obj["roots"], "roots", model, text) if has_r else None
    ns = obj.get("n", [])
    if isinstance(ns, int):
        ns = [ns]
    if not isinstance(ns, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in ns):
        raise InputError("\"n\" must be a positive integer or a list of them")
    job = Job(model, coeffs, roots, ns)
    if "d" in obj and obj["d"] != job.d:
        raise InputError(f"\"d\" is {obj['d']} but {job.d} values were given")
    return job


def _ns(arg: str | None, job: Job) -> list[int]:
    if arg:
        try:
            ns = [int(x) for x in arg.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"bad --n {arg!r}") from None
        if not ns or min(ns) < 1:
            raise InputError("--n needs positive integers")
        return ns
    if not job.ns:
        raise InputError("no exponent n given (use --n or an \"n\" field)")
    return job.ns


def _classify(a: list[FieldElement], method: str, cache_dir: str | None) -> ClassificationResult:
    if method == "auto":
        method = "table" if len(a) in (3, 4, 5) else "general"
    if method == "table":
        return classify_table(a, cache_dir=cache_dir)
    return classify_general(a, cache_dir=cache_dir)


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(args: argparse.Namespace) -> dict:
    job = load_job(args.input)
    a = job.coeffs()
    graphs = [args.graph] if args.graph else (["K2", "K3"] if job.d == 5 else ["K2"])
    out = {}
    for name in graphs:
        g = EdgeWeightedGraph.parse(job.d, name)
        b = tropical_invariants(a, g, args.cache)
        out[name] = {"graph": g.key(), "b": [format_trop(x) for x in b],
                     "polygon": lower_hull(NewtonInput(b)).to_json()}
    return {"d": job.d, "field": str(job.model), "invariants": out}


def cmd_tree(args: argparse.Namespace) -> dict:
    job = load_job(args.input)
    return _classify(job.coeffs(), args.method, args.cache).to_json()


def cmd_skeleton(args: argparse.Namespace) -> dict:
    job = load_job(args.input)
    res = _classify(job.coeffs(), args.method, args.cache)
    reports = [skeleton_report(res.tree, n) for n in _ns(args.n, job)]
    if args.dot:
        text = "".join(minimal_model(build_skeleton(res.tree, r["n"])).to_dot(f"minimal_n{r['n']}")
                       for r in reports)
        Path(args.dot).write_text(text)
    return {"type": res.label, "variant": res.variant, "d": job.d, "skeleta": reports}


def cmd_compare(args: argparse.Namespace) -> dict:
    job = load_job(args.input, require_roots=True)
    oracle = tree_from_roots(job.roots)
    res = _classify(expand_to_coefficients(job.roots), args.method, args.cache)
    ok = isomorphic(oracle, res.tree)
    out: dict = {"result": "PASS" if ok else "FAIL", "type": res.label, "variant": res.variant,
                 "oracle": {"filtration": str(filtration_type(oracle)), **oracle.to_json()},
                 "classified": {"filtration": str(res.filtration), **res.tree.to_json()}}
    if not ok:
        out["diff"] = {"oracle_shape": repr(oracle.shape), "classified_shape": repr(res.tree.shape)}
    return out


def cmd_genpoly(args: argparse.Namespace) -> dict:
    g = EdgeWeightedGraph.parse(args.d, args.graph or "K2")
    F = cache.get(g, args.cache)
    directory = Path(args.cache) if args.cache else cache.default_cache_dir()
    path = cache.write(F, directory)
    return {"d": F.d, "graph": F.graph.key(), "degree": F.degree, "file": str(path),
            "monomials": [len(c) for c in F.coeffs]}


def cmd_halfspaces(args: argparse.Namespace) -> dict:
    return {"d": args.d, "rows": [row.to_json() for row in rows_for(args.d)]}


# ---------------------------------------------------------------------------
# text rendering


def _render(command: str, report: dict) -> str:
    if command == "tree":
        lines = [f"type {report['type']}" + (f" ({report['variant']})" if report["variant"] else ""),
                 f"filtration {report['filtration']}",
                 "branch heights " + ", ".join(report["branch_heights"])]
        for e in report["edges"]:
            lines.append(f"  edge {e['from']} -> {e['to']}  length {e['length']}  leaves {e['leaves']}")
        return "\n".join(lines)
    if command == "skeleton":
        lines = [f"type {report['type']}"]
        for s in report["skeleta"]:
            m = s["minimal"]
            gen = " ".join(str(v["genus"]) for v in m["vertices"])
            lines.append(f"n={s['n']}  g={s['genus']}  betti={m['betti']}  vertex genera [{gen}]  "
                         f"good reduction {s['potential_good_reduction']}")
        return "\n".join(lines)
    if command == "halfspaces":
        lines = []
        for r in report["rows"]:
            hs = " ".join(f"I(P{h['i']},P{h['j']})" + ("" if h["graph"] == "K2" else "[K3]") for h in r["halfspaces"])
            ls = "; ".join(x["formula"] for x in r["lengths"])
            lines.append(f"{r['type']:8} {hs:40} {ls}")
        return "\n".join(lines)
    return json.dumps(report, indent=2, sort_keys=True)


COMMANDS = {
    "invariants": cmd_invariants,
    "tree": cmd_tree,
    "skeleton": cmd_skeleton,
    "compare": cmd_compare,
    "genpoly": cmd_genpoly,
    "halfspaces": cmd_halfspaces,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropinv", description="Trees and skeleta of y^n = f(x) from tropical invariants.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, with_input: bool = True) -> None:
        if with_input:
            sp.add_argument("--input", required=True, help="JSON job file")
        sp.add_argument("--cache", help="generating-polynomial cache directory")
        sp.add_argument("--json", help="write the report here instead of stdout")
        sp.add_argument("--text", action="store_true", help="short human-readable report")

    sp = sub.add_parser("invariants", help="tropical invariants and Newton polygons")
    common(sp)
    sp.add_argument("--graph", help="K2, K3, ... or an edge list like 1-2:1,1-3:2")

    for name, helptext in (("tree", "classify the tree"), ("skeleton", "skeleta of y^n = f(x)"),
                           ("compare", "oracle tree from roots versus classification")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--method", choices=("auto", "table", "general"), default="auto")
        if name == "skeleton":
            sp.add_argument("--n", help="comma-separated exponents")
            sp.add_argument("--dot", help="write the minimal skeleta as DOT")

    sp = sub.add_parser("genpoly", help="compute and cache a generating polynomial")
    common(sp, with_input=False)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--graph", default="K2")

    sp = sub.add_parser("halfspaces", help="the half-space tables")
    common(sp, with_input=False)
    sp.add_argument("--d", type=int, required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except TropinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    text = _render(args.command, report) if args.text else json.dumps(report, indent=2, sort_keys=True)
    if args.json:
        Path(args.json).write_text(text + "\n")
    else:
        print(text)
    if args.command == "compare" and report["result"] != "PASS":
        return InconsistencyError.exit_code
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
