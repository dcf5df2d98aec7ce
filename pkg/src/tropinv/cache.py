"""Text serialization and on-disk caching of generating polynomials.

File layout::

    d=<d> degree=<r> graph=<{i,j}:w,...> version=<n>
    <coeffs[0]>
    ...
    <coeffs[r]>

Each coefficient line lists monomials in decreasing graded-lex order as
``±C a1^e1 ... ad^ed`` (variables with exponent zero omitted), separated by
single spaces; the zero polynomial is written ``0``.
"""

from __future__ import annotations

import os
import re
from importlib import resources
from pathlib import Path

from .errors import InputError
from .multipoly import MultiPoly
from .sympoly import EdgeWeightedGraph, GeneratingPolynomial, generating_polynomial

FORMAT_VERSION = 1
ENV_VAR = "TROPINV_CACHE"

_HEADER = re.compile(r"^d=(\d+) degree=(\d+) graph=(\S+) version=(\d+)$")


class StaleCacheError(InputError):
    """A cache file written by an incompatible format version."""


def format_poly(p: MultiPoly) -> str:
    if not p:
        return "0"
    out = []
    for e, c in p.items():
        factors = [f"a{i + 1}^{x}" for i, x in enumerate(e) if x]
        out.append(" ".join([f"{'+' if c > 0 else '-'}{abs(c)}"] + factors))
    return " ".join(out)


def parse_poly(line: str, nvars: int) -> MultiPoly:
    line = line.strip()
    if line == "0":
        return MultiPoly.zero(nvars)
    terms: dict[tuple[int, ...], int] = {}
    expo: list[int] | None = None
    coef = 0
    for tok in line.split():
        if tok[0] in "+-":
            if expo is not None:
                terms[tuple(expo)] = terms.get(tuple(expo), 0) + coef
            coef, expo = int(tok), [0] * nvars
        else:
            m = re.fullmatch(r"a(\d+)\^(\d+)", tok)
            if not m or expo is None:
                raise InputError(f"bad monomial token {tok!r}")
            expo[int(m.group(1)) - 1] += int(m.group(2))
    if expo is not None:
        terms[tuple(expo)] = terms.get(tuple(expo), 0) + coef
    return MultiPoly(nvars, terms)


def dumps(F: GeneratingPolynomial) -> str:
    header = f"d={F.d} degree={F.degree} graph={F.graph.key()} version={FORMAT_VERSION}"
    return "\n".join([header] + [format_poly(c) for c in F.coeffs]) + "\n"


def loads(text: str) -> GeneratingPolynomial:
    lines = text.splitlines()
    if not lines:
        raise InputError("empty generating-polynomial file")
    m = _HEADER.match(lines[0].strip())
    if not m:
        if lines[0].startswith("d=") and "version=" not in lines[0]:
            raise StaleCacheError("cache header carries no format version")
        raise InputError(f"malformed cache header {lines[0]!r}")
    d, r, graph, version = int(m.group(1)), int(m.group(2)), m.group(3), int(m.group(4))
    if version != FORMAT_VERSION:
        raise StaleCacheError(f"cache format version {version}, expected {FORMAT_VERSION}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != r + 1:
        raise InputError(f"expected {r + 1} coefficient lines, found {len(body)}")
    g = EdgeWeightedGraph.parse(d, graph)
    return GeneratingPolynomial(d, g, tuple(parse_poly(ln, d) for ln in body))


def file_name(g: EdgeWeightedGraph) -> str:
    c = g.canonical()
    edges = "_".join(f"{i}-{j}.{w}" for (i, j), w in c.weights)
    return f"d{c.d}__{edges}.gp"


def _shipped(name: str) -> str | None:
    try:
        ref = resources.files("tropinv").joinpath("data", name)
        return ref.read_text() if ref.is_file() else None
    except (FileNotFoundError, ModuleNotFoundError):
        return None


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "tropinv"


def write(F: GeneratingPolynomial, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / file_name(F.graph)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(dumps(F))
    tmp.replace(path)
    return path


def get(g: EdgeWeightedGraph, cache_dir: Path | str | None = None, use_shipped: bool = True) -> GeneratingPolynomial:
    """Generating polynomial of the canonical relabeling of ``g``.

    Lookup order: ``cache_dir`` (or the default user cache), then the data
    files shipped with the package, then computation.  Fresh results are
    written to the cache directory; stale files are recomputed.
    """
    canon = g.canonical()
    name = file_name(canon)
    directory = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = directory / name
    if path.is_file():
        try:
            F = loads(path.read_text())
            if F.graph == canon:
                return F
        except StaleCacheError:
            pass
    if use_shipped:
        text = _shipped(name)
        if text is not None:
            return loads(text)
    F = generating_polynomial(canon)
    try:
        write(F, directory)
    except OSError:
        pass
    return F
