"""graph6 encoding (McKay's format).

Header ``N(n)``: one byte ``n + 63`` for ``n <= 62``; ``~`` plus three
6-bit groups up to 258047.  The body packs the upper triangle column by
column (``x(0,1), x(0,2), x(1,2), x(0,3), ...``) six bits per byte, each
byte offset by 63, zero-padded on the right.
"""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .graph import Graph, from_edges

HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    pass


def _size_bytes(n: int) -> bytes:
    if n < 0:
        raise Graph6Error("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    raise Graph6Error(f"graph6 supports n <= 258047, got {n}")


def encode(g: Graph) -> str:
    n = g.n
    bits = []
    for j in range(1, n):
        col = g.adjacency[j]
        for i in range(j):
            bits.append(col >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = bytes(
        63 + (bits[i] << 5 | bits[i + 1] << 4 | bits[i + 2] << 3
              | bits[i + 3] << 2 | bits[i + 4] << 1 | bits[i + 5])
        for i in range(0, len(bits), 6)
    )
    return (_size_bytes(n) + body).decode("ascii")


def decode(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    data = s.encode("ascii")
    if not data:
        raise Graph6Error("empty graph6 string")
    if any(b < 63 or b > 126 for b in data):
        raise Graph6Error("graph6 bytes must lie in 63..126")
    if data[0] == 126:
        if len(data) < 4 or data[1] == 126:
            raise Graph6Error("unsupported graph6 size header")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise Graph6Error(f"body length {len(body)} does not match n={n}")
    pairs = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[idx // 6] - 63
            if byte >> (5 - idx % 6) & 1:
                pairs.append((i, j))
            idx += 1
    return from_edges(n, pairs)


def read_file(handle: TextIO) -> Iterator[Graph]:
    """Graphs from a stream of graph6 lines; blank lines are skipped."""
    for line in handle:
        line = line.strip()
        if line:
            yield decode(line)


def write_file(handle: TextIO, graphs: Iterable[Graph], header: bool = False) -> None:
    if header:
        handle.write(HEADER)
    for g in graphs:
        handle.write(encode(g) + "\n")
