"""graph6 and edge-list text ingestion/serialisation.

graph6 follows the standard byte layout: a size header, then the upper
triangle of the adjacency matrix packed column by column into 6-bit groups,
each offset by 63.  The edge-list format is one ``u v`` pair per line
(0-based); a line holding a single integer declares the vertex count so that
trailing isolated vertices survive a round trip.  Blank lines and ``#``
comments are ignored.
"""

from __future__ import annotations

from .errors import ParseError
from .graphs import Graph

_HEADER = ">>graph6<<"


def _decode_size(data: str) -> tuple[int, int]:
    """Return (n, index of first adjacency byte)."""
    if not data:
        raise ParseError("empty graph6 string", offset=0)
    c0 = ord(data[0])
    if c0 != 126:  # '~'
        if not 63 <= c0 <= 126:
            raise ParseError(f"size byte {data[0]!r} out of range", offset=0)
        return c0 - 63, 1
    if len(data) >= 2 and ord(data[1]) == 126:
        if len(data) < 8:
            raise ParseError("truncated 8-byte size header", offset=len(data))
        n = 0
        for i in range(2, 8):
            c = ord(data[i])
            if not 63 <= c <= 126:
                raise ParseError(f"size byte {data[i]!r} out of range", offset=i)
            n = (n << 6) | (c - 63)
        return n, 8
    if len(data) < 4:
        raise ParseError("truncated 4-byte size header", offset=len(data))
    n = 0
    for i in range(1, 4):
        c = ord(data[i])
        if not 63 <= c <= 126:
            raise ParseError(f"size byte {data[i]!r} out of range", offset=i)
        n = (n << 6) | (c - 63)
    return n, 4


def parse_graph6(text: str) -> Graph:
    data = text.strip()
    if data.startswith(_HEADER):
        data = data[len(_HEADER):]
    n, pos = _decode_size(data)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise ParseError(
            f"expected {nbytes} adjacency bytes for n={n}, got {len(body)}",
            offset=pos + min(len(body), nbytes),
        )
    bits = []
    for i, ch in enumerate(body):
        c = ord(ch)
        if not 63 <= c <= 126:
            raise ParseError(f"adjacency byte {ch!r} out of range", offset=pos + i)
        val = c - 63
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph.from_edges(n, edges)


def serialize_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    elif n <= 258047:
        head = "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))
    else:
        head = "~~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (30, 24, 18, 12, 6, 0))
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = "".join(
        chr(sum(b << (5 - k) for k, b in enumerate(bits[i:i + 6])) + 63)
        for i in range(0, len(bits), 6)
    )
    return head + body


def parse_edgelist(text: str) -> Graph:
    declared_n = 0
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            try:
                declared_n = max(declared_n, int(parts[0]))
            except ValueError:
                raise ParseError(f"bad vertex count {parts[0]!r}", offset=lineno)
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", offset=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", offset=lineno)
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", offset=lineno)
        if u == v:
            raise ParseError(f"loop {u} {v} not allowed", offset=lineno)
        edges.append((u, v))
    n = max(declared_n, max((max(u, v) + 1 for u, v in edges), default=0))
    return Graph.from_edges(n, edges)


def serialize_edgelist(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges)
    return "\n".join(lines) + "\n"
