"""Simple undirected graphs, BFS metric data, and per-edge distance partitions.

Vertices are dense indices 0..n-1; external names are kept in a label table
so reports can speak the caller's language while all algebra runs on indices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional


class GraphError(ValueError):
    """Malformed graph input or a violated operation precondition."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph without loops.

    `adj[v]` is the neighbor set of `v`. Connectivity is not an invariant;
    operations that need it check it and raise GraphError otherwise.
    """

    n: int
    adj: tuple[frozenset[int], ...]
    labels: tuple[str, ...]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"unknown vertex label {label!r}") from None

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n


def make_graph(n: int, edges: Iterable[tuple[int, int]],
               labels: Optional[Iterable[str]] = None) -> Graph:
    """Build a validated Graph from index pairs. Duplicate edges collapse."""
    if n < 1:
        raise GraphError("graph needs at least one vertex")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"loop edge at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    if labels is None:
        label_tuple = tuple(str(i) for i in range(n))
    else:
        label_tuple = tuple(str(x) for x in labels)
        if len(label_tuple) != n:
            raise GraphError("label count does not match vertex count")
        if len(set(label_tuple)) != n:
            raise GraphError("vertex labels must be distinct")
    return Graph(n, tuple(frozenset(s) for s in nbrs), label_tuple)


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated vertex pairs, one edge per line.

    `#` starts a comment. Vertices are named by their tokens; the vertex set
    is the union of mentioned tokens, ordered numerically when every token is
    a decimal integer and lexicographically otherwise.
    """
    pairs: list[tuple[str, str]] = []
    tokens: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two vertex tokens, got {len(parts)}")
        u, v = parts
        if u == v:
            raise GraphError(f"line {lineno}: loop edge {u!r}")
        pairs.append((u, v))
        tokens.update(parts)
    if not tokens:
        raise GraphError("no edges found")
    if all(_is_int(t) for t in tokens):
        ordered = sorted(tokens, key=int)
    else:
        ordered = sorted(tokens)
    index = {t: i for i, t in enumerate(ordered)}
    return make_graph(len(ordered), [(index[u], index[v]) for u, v in pairs], ordered)


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# graph6 byte format (6-bit chunks offset by 63, upper triangle column-major)
# ---------------------------------------------------------------------------

def parse_graph6(data: bytes | str) -> Graph:
    """Decode a single graph6 record into a Graph.

    Supports the one-byte size header (n <= 62) and the '~' + 3 byte
    extension. Rejects bad lengths, out-of-range bytes and nonzero padding,
    reporting the byte offset.
    """
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    if not data:
        raise GraphError("empty graph6 input")
    if data[0] == 126:  # '~'
        if len(data) >= 2 and data[1] == 126:
            raise GraphError("graph6 offset 1: 8-byte size header not supported")
        if len(data) < 4:
            raise GraphError("graph6 offset 0: truncated extended size header")
        n = 0
        for off in range(1, 4):
            b = data[off] - 63
            if not 0 <= b < 64:
                raise GraphError(f"graph6 offset {off}: byte out of range")
            n = (n << 6) | b
        body = data[4:]
    else:
        n = data[0] - 63
        if not 0 <= n <= 62:
            raise GraphError("graph6 offset 0: size byte out of range")
        body = data[1:]
    if n < 1:
        raise GraphError("graph6 encodes an empty vertex set")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    header = len(data) - len(body)
    if len(body) != nbytes:
        raise GraphError(
            f"graph6 offset {header}: body has {len(body)} bytes, expected {nbytes}")
    bits: list[int] = []
    for off, byte in enumerate(body):
        val = byte - 63
        if not 0 <= val < 64:
            raise GraphError(f"graph6 offset {header + off}: byte out of range")
        for k in range(5, -1, -1):
            bits.append((val >> k) & 1)
    if any(bits[nbits:]):
        raise GraphError(f"graph6 offset {header + nbytes - 1}: nonzero padding bits")
    edges = []
    pos = 0
    for col in range(1, n):
        for row in range(col):
            if bits[pos]:
                edges.append((row, col))
            pos += 1
    return make_graph(n, edges)


def to_graph6(g: Graph) -> str:
    """Encode a Graph as a graph6 string (inverse of parse_graph6)."""
    n = g.n
    if n <= 62:
        head = bytes([n + 63])
    elif n <= 258047:
        head = bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    else:
        raise GraphError("graph too large for graph6 encoding")
    bits: list[int] = []
    for col in range(1, n):
        for row in range(col):
            bits.append(1 if g.has_edge(row, col) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = bytearray()
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        body.append(val + 63)
    return (head + bytes(body)).decode("ascii")


# ---------------------------------------------------------------------------
# BFS metric data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalMetric:
    """Distances from a base vertex: dist array, eccentricity, spheres."""

    base: int
    dist: tuple[int, ...]
    ecc: int
    spheres: tuple[tuple[int, ...], ...]

    def sphere(self, i: int) -> tuple[int, ...]:
        if 0 <= i <= self.ecc:
            return self.spheres[i]
        return ()


def local_metric(g: Graph, x: int) -> LocalMetric:
    """BFS distances from x. Requires g connected."""
    if not 0 <= x < g.n:
        raise GraphError(f"base vertex {x} out of range")
    dist = [-1] * g.n
    dist[x] = 0
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    if min(dist) < 0:
        missing = dist.index(-1)
        raise GraphError(f"graph is disconnected: vertex {g.labels[missing]} unreachable")
    ecc = max(dist)
    spheres: list[list[int]] = [[] for _ in range(ecc + 1)]
    for v, d in enumerate(dist):
        spheres[d].append(v)
    return LocalMetric(x, tuple(dist), ecc, tuple(tuple(s) for s in spheres))


# ---------------------------------------------------------------------------
# Distance partition with respect to an edge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistancePartition:
    """Cells (i, j) -> vertices at distance i from x and j from y, for an
    edge {x, y}. Cells with |i - j| >= 2 are empty by the triangle
    inequality and are not stored; `cell` returns () for them.
    """

    x: int
    y: int
    ecc_x: int
    ecc_y: int
    cells: Mapping[tuple[int, int], tuple[int, ...]]

    def cell(self, i: int, j: int) -> tuple[int, ...]:
        return self.cells.get((i, j), ())


def distance_partition(g: Graph, x: int, y: int) -> DistancePartition:
    """Intersection cells of the spheres around the two ends of edge {x, y}."""
    if not g.has_edge(x, y):
        raise GraphError(f"vertices {g.labels[x]} and {g.labels[y]} are not adjacent")
    mx = local_metric(g, x)
    my = local_metric(g, y)
    cells: dict[tuple[int, int], list[int]] = {}
    for v in range(g.n):
        cells.setdefault((mx.dist[v], my.dist[v]), []).append(v)
    frozen = {key: tuple(vs) for key, vs in cells.items()}
    # triangle inequality across an edge keeps |i-j| <= 1; anything else
    # would mean the BFS is broken
    assert all(abs(i - j) <= 1 for (i, j) in frozen)
    return DistancePartition(x, y, mx.ecc, my.ecc, frozen)


# ---------------------------------------------------------------------------
# Structural report on the partition cells around a base vertex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeighborThreshold:
    """Per-neighbor record: the threshold level t splitting levels with a
    nonempty upward cell from those without, and the nonemptiness pattern
    of the three cell diagonals.

    threshold is None when the two-clause pattern fails to hold: that is,
    when some level above the longest valid prefix still has a nonempty
    upward cell.
    """

    y: int
    threshold: Optional[int]
    up_nonempty: tuple[bool, ...]    # D(i, i+1) for 0 <= i <= ecc(x)
    mid_nonempty: tuple[bool, ...]   # D(i, i)   for 0 <= i <= ecc(x)
    down_nonempty: tuple[bool, ...]  # D(i, i-1) for 0 <= i <= ecc(x)


@dataclass(frozen=True)
class StructureReport:
    x: int
    ecc: int
    vacuous: bool                    # deg(x) < 2: analysis has no content
    is_tree: bool
    per_neighbor: tuple[NeighborThreshold, ...]
    down_cells_all_nonempty: bool    # D(i, i-1) nonempty for all y and 1 <= i <= ecc
    up_blocks_mid: bool              # nonempty D(i, i+1) forces empty D(j, j) for j <= i, all neighbors
    mid_runs_contiguous: bool        # nonempty D(j, j) pulls D(i, i) nonempty for threshold < i <= j
    thresholds_defined: bool
    threshold_constant: Optional[bool]  # all defined and equal; None if some undefined

    def threshold(self, y: int) -> Optional[int]:
        for rec in self.per_neighbor:
            if rec.y == y:
                return rec.threshold
        raise GraphError(f"vertex {y} is not a neighbor of the base vertex")


def structure_report(g: Graph, x: int) -> StructureReport:
    """Evaluate the cell-pattern predicates of the distance partitions
    around x, one partition per neighbor y.
    """
    metric = local_metric(g, x)
    d = metric.ecc
    nbrs = g.neighbors(x)
    vacuous = len(nbrs) < 2
    parts = {y: distance_partition(g, x, y) for y in nbrs}

    records = []
    for y in nbrs:
        part = parts[y]
        up = tuple(bool(part.cell(i, i + 1)) for i in range(d + 1))
        mid = tuple(bool(part.cell(i, i)) for i in range(d + 1))
        down = tuple(bool(part.cell(i, i - 1)) for i in range(d + 1))
        # longest prefix where the upward cell is nonempty and every mid
        # cell (over all neighbors z) is empty
        t = 0
        while (t + 1 <= d and up[t + 1]
               and all(not parts[z].cell(t + 1, t + 1) for z in nbrs)):
            t += 1
        defined = all(not up[i] for i in range(t + 1, d + 1))
        records.append(NeighborThreshold(y, t if defined else None, up, mid, down))

    down_ok = all(rec.down_nonempty[i] for rec in records for i in range(1, d + 1))

    up_blocks = True
    for i in range(1, d + 1):
        if any(rec.up_nonempty[i] for rec in records):
            if any(rec.mid_nonempty[j] for rec in records for j in range(1, i + 1)):
                up_blocks = False
                break

    contiguous = True
    for rec in records:
        if rec.threshold is None:
            continue
        top = max((j for j in range(1, d + 1) if rec.mid_nonempty[j]), default=None)
        if top is not None:
            if not all(rec.mid_nonempty[i] for i in range(rec.threshold + 1, top + 1)):
                contiguous = False
                break

    defined_all = all(rec.threshold is not None for rec in records)
    constant: Optional[bool]
    if defined_all and records:
        constant = len({rec.threshold for rec in records}) == 1
    else:
        constant = None

    return StructureReport(
        x=x,
        ecc=d,
        vacuous=vacuous,
        is_tree=(g.edge_count == g.n - 1),
        per_neighbor=tuple(records),
        down_cells_all_nonempty=down_ok,
        up_blocks_mid=up_blocks,
        mid_runs_contiguous=contiguous,
        thresholds_defined=defined_all,
        threshold_constant=constant,
    )


# ---------------------------------------------------------------------------
# Exhaustive corpus generation (labeled connected graphs)
# ---------------------------------------------------------------------------

def connected_graphs(n: int) -> Iterator[Graph]:
    """Yield every connected labeled graph on n vertices, in adjacency
    bitmask order. Intended for exhaustive validation at n <= 7.
    """
    if n < 1:
        raise GraphError("n must be positive")
    if n == 1:
        yield make_graph(1, [])
        return
    pair_list = [(u, v) for v in range(1, n) for u in range(v)]
    nbits = len(pair_list)
    for mask in range(1 << nbits):
        edges = [pair_list[k] for k in range(nbits) if mask >> k & 1]
        if len(edges) < n - 1:
            continue
        g = make_graph(n, edges)
        if g.is_connected():
            yield g
