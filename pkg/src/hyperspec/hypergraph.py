"""k-uniform hypergraphs: representation, ``.hg`` I/O, connectivity,
odd-bipartition certificates, Cartesian products and seeded generators."""

from __future__ import annotations

import hashlib
import io
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Optional

import numpy as np

from . import gf2
from .rng import SplitMix64

CERTIFICATE = "certificate"
INFEASIBLE = "infeasible-witness"

DEFAULT_ATTEMPTS = 1000
_ENUMERATE_LIMIT = 200_000


class HypergraphError(ValueError):
    """Invalid hypergraph data or malformed ``.hg`` input."""


class GenerationError(ValueError):
    """Generator parameters are infeasible or the attempt budget ran out."""


@dataclass(frozen=True)
class Hypergraph:
    """A simple k-uniform hypergraph on vertices ``1..n``.

    Edges are canonicalized on construction: vertices ascending within an
    edge, edges sorted lexicographically.  Duplicate edges are rejected.
    """

    n: int
    k: int
    edges: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise HypergraphError(f"vertex count must be a positive integer, got {self.n!r}")
        if not isinstance(self.k, (int, np.integer)) or self.k < 2:
            raise HypergraphError(f"uniformity must be an integer >= 2, got {self.k!r}")
        canon = []
        for e in self.edges:
            vs = tuple(sorted(int(v) for v in e))
            if len(vs) != self.k:
                raise HypergraphError(f"edge {list(e)} has {len(vs)} vertices, expected {self.k}")
            if len(set(vs)) != self.k:
                raise HypergraphError(f"edge {list(e)} repeats a vertex")
            if vs[0] < 1 or vs[-1] > self.n:
                raise HypergraphError(f"edge {list(e)} has a vertex outside 1..{self.n}")
            canon.append(vs)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise HypergraphError(f"duplicate edge {list(a)}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_array(self) -> np.ndarray:
        """Edges as a ``(|E|, k)`` array of 0-based vertex indices."""
        if not self.edges:
            return np.zeros((0, self.k), dtype=np.intp)
        return np.asarray(self.edges, dtype=np.intp) - 1

    def serialize(self, comments: Iterable[str] = ()) -> str:
        lines = [f"c {c}" for c in comments]
        lines.append(f"p hg {self.n} {self.k}")
        lines.extend("e " + " ".join(map(str, e)) for e in self.edges)
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """Short stable hash of the canonical serialization."""
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:16]

    def without_edge(self, index: int) -> "Hypergraph":
        return Hypergraph(self.n, self.k, self.edges[:index] + self.edges[index + 1:])


def parse_hypergraph(text) -> Hypergraph:
    """Parse ``.hg`` text (str, bytes or a text/binary stream)."""
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise HypergraphError(f"input is not UTF-8: {exc}") from None
    header = None
    edges = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise HypergraphError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "hg":
                raise HypergraphError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise HypergraphError(f"line {lineno}: malformed header {line!r}") from None
        elif tag == "e":
            if header is None:
                raise HypergraphError(f"line {lineno}: edge before header")
            try:
                vs = [int(v) for v in parts[1:]]
            except ValueError:
                raise HypergraphError(f"line {lineno}: non-integer vertex in {line!r}") from None
            if len(vs) != header[1]:
                raise HypergraphError(f"line {lineno}: edge has {len(vs)} vertices, expected {header[1]}")
            edges.append(vs)
        else:
            raise HypergraphError(f"line {lineno}: unknown record {tag!r}")
    if header is None:
        raise HypergraphError("missing 'p hg <n> <k>' header")
    try:
        return Hypergraph(header[0], header[1], tuple(edges))
    except HypergraphError as exc:
        raise HypergraphError(f"invalid hypergraph: {exc}") from None


def read_hypergraph(path) -> Hypergraph:
    with open(path, "rb") as fh:
        return parse_hypergraph(fh.read())


def degrees(G: Hypergraph) -> np.ndarray:
    d = np.zeros(G.n, dtype=np.int64)
    for e in G.edges:
        for v in e:
            d[v - 1] += 1
    return d


def components(G: Hypergraph) -> np.ndarray:
    """Component index (0-based, in order of first vertex) for each vertex."""
    incident = [[] for _ in range(G.n)]
    for idx, e in enumerate(G.edges):
        for v in e:
            incident[v - 1].append(idx)
    label = np.full(G.n, -1, dtype=np.int64)
    seen_edge = [False] * len(G.edges)
    current = 0
    for start in range(G.n):
        if label[start] >= 0:
            continue
        label[start] = current
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for idx in incident[u]:
                if seen_edge[idx]:
                    continue
                seen_edge[idx] = True
                for v in G.edges[idx]:
                    if label[v - 1] < 0:
                        label[v - 1] = current
                        queue.append(v - 1)
        current += 1
    return label


def is_connected(G: Hypergraph) -> tuple[bool, np.ndarray]:
    label = components(G)
    return bool(np.all(label == 0)), label


@dataclass(frozen=True)
class Bipartition:
    """Outcome of the odd-bipartition search.

    ``kind == "certificate"``: every edge meets ``v1`` in an odd number of
    vertices.  ``kind == "infeasible-witness"``: ``witness`` lists 0-based
    edge indices of an odd-size edge family covering every vertex an even
    number of times; it is empty when ``reason`` explains the failure
    instead (``"k-odd"`` or ``"trivial"``).
    """

    kind: str
    v1: frozenset = frozenset()
    witness: tuple = ()
    reason: Optional[str] = None

    @property
    def is_certificate(self) -> bool:
        return self.kind == CERTIFICATE

    def signs(self, n: int) -> np.ndarray:
        """The sign diagonal: -1 on ``v1``, +1 elsewhere."""
        s = np.ones(n)
        for v in self.v1:
            s[v - 1] = -1.0
        return s

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "v1": sorted(self.v1),
            "witness": list(self.witness),
            "reason": self.reason,
        }


def is_valid_certificate(G: Hypergraph, v1: Iterable[int]) -> bool:
    """Check the odd-intersection condition directly, edge by edge."""
    v1 = set(v1)
    if not v1 or len(v1) >= G.n or not v1 <= set(range(1, G.n + 1)):
        return False
    return all(len(v1.intersection(e)) % 2 == 1 for e in G.edges)


def is_valid_witness(G: Hypergraph, witness: Iterable[int]) -> bool:
    witness = list(witness)
    if len(witness) % 2 == 0 or len(set(witness)) != len(witness):
        return False
    cover = np.zeros(G.n, dtype=np.int64)
    for idx in witness:
        for v in G.edges[idx]:
            cover[v - 1] += 1
    return bool(np.all(cover % 2 == 0))


def odd_bipartition(G: Hypergraph) -> Bipartition:
    """Decide odd-bipartiteness by solving ``M s = 1`` over GF(2).

    ``M`` is the edge-vertex incidence matrix.  For odd k the answer is
    always negative (the notion requires k even) and ``reason="k-odd"``.
    """
    if G.k % 2 == 1:
        return Bipartition(INFEASIBLE, reason="k-odd")
    if not G.edges:
        # any single vertex works, but only if a proper nonempty subset exists
        if G.n >= 2:
            return Bipartition(CERTIFICATE, v1=frozenset({1}))
        return Bipartition(INFEASIBLE, reason="trivial")
    rows = []
    for e in G.edges:
        r = 0
        for v in e:
            r |= 1 << (v - 1)
        rows.append(r)
    sol = gf2.solve(rows, [1] * len(rows), G.n)
    if sol.solution is None:
        return Bipartition(INFEASIBLE, witness=tuple(gf2.bits(sol.witness)))
    v1 = frozenset(i + 1 for i in gf2.bits(sol.solution))
    return Bipartition(CERTIFICATE, v1=v1)


def vertex_index(i: int, j: int, m: int) -> int:
    """Label of the pair ``(i, j)`` in the lexicographic flattening (1-based)."""
    return (i - 1) * m + j


def cartesian_product(G: Hypergraph, H: Hypergraph) -> Hypergraph:
    if G.k != H.k:
        raise HypergraphError(f"uniformity mismatch: {G.k} vs {H.k}")
    m = H.n
    edges = []
    for i in range(1, G.n + 1):
        for e in H.edges:
            edges.append(tuple(vertex_index(i, j, m) for j in e))
    for j in range(1, m + 1):
        for e in G.edges:
            edges.append(tuple(vertex_index(i, j, m) for i in e))
    return Hypergraph(G.n * m, G.k, tuple(edges))


def product_certificate(G: Hypergraph, v1_g: Iterable[int], H: Hypergraph, v1_h: Iterable[int]) -> frozenset:
    """``(V1(G) x V1(H))`` together with the product of the complements."""
    a, b = set(v1_g), set(v1_h)
    out = set()
    for i in range(1, G.n + 1):
        for j in range(1, H.n + 1):
            if (i in a) == (j in b):
                out.add(vertex_index(i, j, H.n))
    return frozenset(out)


# -- generators ---------------------------------------------------------------


@dataclass(frozen=True)
class Generated:
    graph: Hypergraph
    kind: str
    seed: int
    connected: bool
    attempts: int
    v1: Optional[frozenset] = None
    meta: dict = field(default_factory=dict)

    def comments(self) -> list[str]:
        out = [
            f"kind {self.kind}",
            f"seed {self.seed}",
            f"n {self.graph.n} k {self.graph.k} m {self.graph.num_edges}",
            f"connected {str(self.connected).lower()}",
            f"attempts {self.attempts}",
        ]
        if self.v1 is not None:
            out.append("v1 " + " ".join(map(str, sorted(self.v1))))
        return out


def _random_subset(rng: SplitMix64, n: int, k: int) -> tuple:
    return tuple(sorted(v + 1 for v in rng.sample(range(n), k)))


def odd_subset_count(n: int, k: int, s: int) -> int:
    """Number of k-subsets of [n] meeting a fixed s-set in an odd number of points."""
    return sum(comb(s, r) * comb(n - s, k - r) for r in range(1, k + 1, 2))


def _draw_edges(rng, n, k, m, accept, available, max_draws=None):
    """m distinct k-subsets satisfying ``accept``; ``available`` counts them."""
    if m > available:
        return None
    if comb(n, k) <= _ENUMERATE_LIMIT:
        pool = [tuple(v + 1 for v in c) for c in combinations(range(n), k)]
        pool = [e for e in pool if accept(e)]
        return rng.sample(pool, m)
    max_draws = max_draws or 1000 * (m + 1)
    chosen = set()
    out = []
    for _ in range(max_draws):
        if len(out) == m:
            break
        e = _random_subset(rng, n, k)
        if e in chosen or not accept(e):
            continue
        chosen.add(e)
        out.append(e)
    return out if len(out) == m else None


def generate(kind: str, n: int, k: int, m: int, seed: int, attempts: int = DEFAULT_ATTEMPTS) -> Generated:
    """Seeded random k-uniform hypergraph.

    ``kind`` is ``"uniform-random"`` or ``"odd-bipartite"``.  Instances are
    redrawn until one is connected or ``attempts`` runs out; the last draw is
    returned either way, with ``connected`` reporting the outcome.
    """
    if kind in ("random", "uniform"):
        kind = "uniform-random"
    if kind in ("oddbip", "odd_bipartite"):
        kind = "odd-bipartite"
    if kind not in ("uniform-random", "odd-bipartite"):
        raise GenerationError(f"unknown generator kind {kind!r}")
    if k < 2 or n < k:
        raise GenerationError(f"need 2 <= k <= n, got n={n}, k={k}")
    if m < 0 or m > comb(n, k):
        raise GenerationError(f"m={m} exceeds the {comb(n, k)} available {k}-subsets")
    if attempts < 1:
        raise GenerationError("attempts must be positive")
    if kind == "odd-bipartite":
        if k % 2:
            raise GenerationError("odd-bipartite hypergraphs need even k")
        if n < 2:
            raise GenerationError("odd-bipartite hypergraphs need n >= 2")
        sizes = [s for s in range(1, n) if odd_subset_count(n, k, s) >= m]
        if not sizes:
            raise GenerationError(f"no vertex split admits {m} odd-meeting {k}-subsets")

    rng = SplitMix64(seed)
    last = None
    for attempt in range(1, attempts + 1):
        v1 = None
        if kind == "uniform-random":
            edges = _draw_edges(rng, n, k, m, lambda e: True, comb(n, k))
        else:
            size = sizes[rng.below(len(sizes))]
            v1 = frozenset(v + 1 for v in rng.sample(range(n), size))
            edges = _draw_edges(
                rng, n, k, m,
                lambda e: len(v1.intersection(e)) % 2 == 1,
                odd_subset_count(n, k, size),
            )
            if edges is None:
                continue
        if edges is None:
            raise GenerationError("edge sampling budget exhausted")
        G = Hypergraph(n, k, tuple(edges))
        connected, _ = is_connected(G)
        last = Generated(G, kind, seed, connected, attempt, v1)
        if connected:
            return last
    if last is None:
        raise GenerationError(f"attempt budget of {attempts} exhausted without a valid draw")
    return last


# -- named small instances ------------------------------------------------------


def single_edge(k: int = 4, n: Optional[int] = None) -> Hypergraph:
    return Hypergraph(n or k, k, (tuple(range(1, k + 1)),))


def triad() -> Hypergraph:
    """Three 4-edges on six vertices, every vertex in exactly two edges."""
    return Hypergraph(6, 4, ((1, 2, 3, 4), (3, 4, 5, 6), (1, 2, 5, 6)))


def cycle(n: int) -> Hypergraph:
    return Hypergraph(n, 2, tuple((i, i % n + 1) for i in range(1, n + 1)))


def path(n: int) -> Hypergraph:
    return Hypergraph(n, 2, tuple((i, i + 1) for i in range(1, n)))
