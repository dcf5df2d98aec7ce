"""Run the worked examples end to end and print a short report.

    python3 demos/run_examples.py

Each example starts from roots, expands to coefficients, classifies from
the coefficients alone and builds the skeleta of y^n = f(x).
"""

from __future__ import annotations

from pathlib import Path

from tropinv.classify import classify_general, classify_table, j_trop
from tropinv.oracle import tree_from_roots
from tropinv.skeleton import build_skeleton, minimal_model
from tropinv.tree import isomorphic
from tropinv.cli import load_job

INPUTS = Path(__file__).parent / "inputs"


def run(name: str) -> None:
    job = load_job(INPUTS / name)
    model = job.model
    a = job.coeffs()
    oracle = tree_from_roots(job.roots) if job.roots is not None else None
    ns = job.ns or [2]
    res = classify_table(a) if len(a) in (3, 4, 5) else classify_general(a)
    print(f"{name}: d={len(a)} field={model} type {res.label}" + (f" ({res.variant})" if res.variant else ""))
    print(f"  branch heights {[str(h) for h in res.heights]}")
    for e in res.edges:
        print(f"  edge {e.lower} -> {e.upper}: length {e.length}, {e.leaves} leaves beyond")
    if len(a) == 3:
        J = j_trop(a)
        print(f"  val(c2^3/c3^2) = {J.valuation}, verdict {J.verdict}")
    if oracle is not None:
        print(f"  tree from roots agrees: {isomorphic(oracle, res.tree)}")
    for n in ns:
        g = minimal_model(build_skeleton(res.tree, n))
        genera = [v.genus for v in g.vertices]
        lengths = [str(e.length) for e in g.edges]
        print(f"  n={n}: minimal skeleton genera {genera}, edge lengths {lengths}, betti {g.betti}")


if __name__ == "__main__":
    for name in ("cubic.json", "quintic_f1.json", "quintic_f2.json", "genus2.json", "picard.json"):
        run(name)
