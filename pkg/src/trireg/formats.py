"""graph6 and edge-list serialisation.

Edge-list documents look like::

    # optional comments
    4 3
    0 1
    0 2
    1 3

The header gives ``n m``; edges follow as ``u v`` with ``u < v`` in sorted
order.  Several documents may be concatenated, since the header delimits them.
"""

from __future__ import annotations

from dataclasses import dataclass

from trireg.errors import EmptyGraph, FormatError, TriregError
from trireg.graph import Graph, from_edge_list

GRAPH6_HEADER = ">>graph6<<"
FORMATS = ("g6", "el")


def _size_prefix(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr((n >> s & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr((n >> s & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def encode_graph6(G: Graph) -> str:
    n = G.n
    if n == 0:
        raise EmptyGraph("graph6 needs at least one vertex")
    rows = G.rows
    out = [_size_prefix(n)]
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = rows[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def decode_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    if not s:
        raise FormatError("empty graph6 string")
    if any(not 63 <= ord(ch) <= 126 for ch in s):
        raise FormatError("graph6 characters must lie in the range 63..126")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] != 63:
        n, body = vals[0], vals[1:]
    elif len(vals) >= 4 and vals[1] != 63:
        n = vals[1] << 12 | vals[2] << 6 | vals[3]
        body = vals[4:]
    elif len(vals) >= 8 and vals[1] == 63:
        n = 0
        for v in vals[2:8]:
            n = n << 6 | v
        body = vals[8:]
    else:
        raise FormatError("truncated graph6 size prefix")
    if n == 0:
        raise EmptyGraph("graph6 string describes the empty graph")
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise FormatError(f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}")
    pad = len(body) * 6 - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise FormatError("graph6 padding bits must be zero")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return from_edge_list(n, edges)


def encode_edge_list(G: Graph) -> str:
    edges = G.edges()
    lines = [f"{G.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _ints(line: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise FormatError(f"expected two integers, got {line!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"expected two integers, got {line!r}") from None


def decode_edge_lists(text: str) -> list[Graph]:
    lines = list(_content_lines(text))
    graphs = []
    i = 0
    while i < len(lines):
        n, m = _ints(lines[i])
        if n < 0 or m < 0:
            raise FormatError("negative counts in edge-list header")
        if i + 1 + m > len(lines):
            raise FormatError(f"edge list promises {m} edges but the input ends early")
        edges = [_ints(line) for line in lines[i + 1 : i + 1 + m]]
        try:
            G = from_edge_list(n, edges)
        except TriregError as exc:
            raise FormatError(str(exc)) from None
        if G.edge_count() != m:
            raise FormatError(f"edge list header says {m} edges but {G.edge_count()} are distinct")
        graphs.append(G)
        i += 1 + m
    return graphs


def decode_edge_list(text: str) -> Graph:
    graphs = decode_edge_lists(text)
    if len(graphs) != 1:
        raise FormatError(f"expected exactly one edge-list document, found {len(graphs)}")
    return graphs[0]


def sniff_format(text: str) -> str:
    for line in _content_lines(text):
        parts = line.split()
        return "el" if len(parts) == 2 and all(p.lstrip("-").isdigit() for p in parts) else "g6"
    raise FormatError("no graph found in input")


def decode_many(text: str, fmt: str | None = None) -> list[Graph]:
    fmt = fmt or sniff_format(text)
    if fmt == "el":
        return decode_edge_lists(text)
    if fmt == "g6":
        return [decode_graph6(line) for line in text.splitlines() if line.strip()]
    raise FormatError(f"unknown format {fmt!r}")


def encode(G: Graph, fmt: str) -> str:
    if fmt == "g6":
        return encode_graph6(G) + "\n"
    if fmt == "el":
        return encode_edge_list(G)
    raise FormatError(f"unknown format {fmt!r}")


@dataclass(frozen=True)
class GraphDocument:
    format: str  # "g6" | "el"
    payload: str

    @classmethod
    def from_graph(cls, G: Graph, fmt: str) -> "GraphDocument":
        return cls(fmt, encode(G, fmt))

    def decode(self) -> Graph:
        if self.format == "g6":
            return decode_graph6(self.payload)
        return decode_edge_list(self.payload)

    def canonical(self) -> "GraphDocument":
        return GraphDocument.from_graph(self.decode(), self.format)
