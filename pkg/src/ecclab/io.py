"""Edge-list text format.

First non-comment line is ``n m``, followed by ``m`` lines ``u v`` (0-based).
Anything after ``#`` on a line is ignored.  ``format_edge_list`` writes the
canonical form: edges as ``u v`` with ``u < v``, sorted lexicographically, so
canonical text survives a parse/format round trip byte for byte.
"""

from __future__ import annotations

from pathlib import Path

from .graph import Graph, build_graph


class EdgeListError(ValueError):
    pass


def parse_edge_list(text: str) -> Graph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise EdgeListError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((lineno, int(fields[0]), int(fields[1])))
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer field in {raw!r}") from None
    if not rows:
        raise EdgeListError("missing 'n m' header")
    _, n, m = rows[0]
    body = rows[1:]
    if n < 0 or m < 0:
        raise EdgeListError(f"header has negative counts: n={n} m={m}")
    if len(body) != m:
        raise EdgeListError(f"header declares {m} edges but {len(body)} were given")
    try:
        return build_graph(n, [(u, v) for _, u, v in body])
    except ValueError as exc:
        raise EdgeListError(str(exc)) from None


def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
