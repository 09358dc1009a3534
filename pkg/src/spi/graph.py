"""Construction of Spi(2nu, q): all nontrivial subspaces of GF(q)^(2nu), with
A -- B whenever A K tB = 0.  Loops (A -- A, i.e. A totally isotropic) are kept
apart from the loop-free adjacency so degrees count non-loop neighbours only.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gf import make_field
from .linalg import (
    Matrix,
    Subspace,
    canonicalize,
    format_rows,
    normalize,
    parse_rows,
    projective_points,
    span_vectors,
)
from .symplectic import SympSpace, SympType, inner, type_of

MAX_AMBIENT_DIM = 8
MAX_VERTICES = 200_000
CACHE_FORMAT_VERSION = 1


class GraphSizeError(ValueError):
    pass


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def expected_vertex_count(nu: int, q: int) -> int:
    return sum(gaussian_binomial(2 * nu, m, q) for m in range(1, 2 * nu))


def enumerate_subspaces(sp: SympSpace, max_ambient_dim: int = MAX_AMBIENT_DIM) -> list[Subspace]:
    """Every subspace of dimension 1..2nu-1 exactly once, in RREF.

    Order: dimension, then pivot columns (lexicographic), then the free
    entries read row-major, lexicographic by element code.
    """
    n, spec, q = sp.dim, sp.spec, sp.q
    if n > max_ambient_dim:
        raise GraphSizeError(f"ambient dimension {n} exceeds the bound {max_ambient_dim}")
    if expected_vertex_count(sp.nu, q) > MAX_VERTICES:
        raise GraphSizeError(f"Spi({n},{q}) has more than {MAX_VERTICES} vertices")
    out = []
    for m in range(1, n):
        for piv in itertools.combinations(range(n), m):
            pset = set(piv)
            slots = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pset]
            for vals in itertools.product(range(q), repeat=len(slots)):
                rows = [[0] * n for _ in range(m)]
                for i, pc in enumerate(piv):
                    rows[i][pc] = 1
                for (i, c), x in zip(slots, vals):
                    rows[i][c] = x
                out.append(Subspace(spec, tuple(tuple(r) for r in rows), n))
    return out


def _bitset(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row[::-1].astype(np.uint8)).tobytes(), "big") >> ((-len(row)) % 8)


def bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class SpiGraph:
    """Materialized Spi(2nu, q).

    ``adj`` is the symmetric loop-free adjacency as a boolean matrix and
    ``nbrs`` the same rows as Python int bitsets; ``loops[v]`` flags A K tA = 0.
    """

    def __init__(self, space: SympSpace, vertices: list[Subspace], adj: np.ndarray,
                 loops: np.ndarray, types: list[SympType]):
        self.space = space
        self.vertices = vertices
        self.adj = adj
        self.loops = loops
        self.types = types
        self.index = {v: i for i, v in enumerate(vertices)}
        self.nbrs = [_bitset(adj[i]) for i in range(len(vertices))]
        self._points = None

    # basic shape
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def nu(self) -> int:
        return self.space.nu

    @property
    def q(self) -> int:
        return self.space.q

    def dims(self) -> np.ndarray:
        return np.array([v.dim for v in self.vertices])

    def degree(self, v: int) -> int:
        return int(self.adj[v].sum())

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    def loop_count(self) -> int:
        return int(self.loops.sum())

    def edges(self, include_loops: bool = True) -> list[tuple[int, int]]:
        """Unordered edges (u, v), u <= v; u == v encodes a loop."""
        us, vs = np.nonzero(np.triu(self.adj, 1))
        out = list(zip(us.tolist(), vs.tolist()))
        if include_loops:
            out += [(int(v), int(v)) for v in np.nonzero(self.loops)[0]]
        out.sort()
        return out

    def vertex_lookup(self, P: Subspace) -> int:
        if P.ambient_dim != self.space.dim:
            raise ValueError("subspace is not in this graph's ambient space")
        P = canonicalize(P.matrix(), self.space.dim)
        if P.dim == 0 or P.dim == self.space.dim:
            raise ValueError("trivial subspaces are not vertices")
        return self.index[P]

    def lookup_rows(self, rows) -> int:
        return self.vertex_lookup(canonicalize(Matrix.of(self.space.spec, rows, self.space.dim)))

    def label(self, v: int) -> str:
        t = self.types[v]
        return f"d{self.vertices[v].dim}t({t.m},{t.s})#{v}"

    # point incidence, used to lift maps on vectors to vertex permutations
    @property
    def points(self):
        if self._points is None:
            self._points = _PointData(self)
        return self._points

    def point_ids(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.dim == 1]

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.space.spec.p, self.space.spec.e, self.nu)).encode())
        for v in self.vertices:
            h.update(format_rows(v.basis).encode())
            h.update(b"|")
        h.update(np.packbits(self.adj).tobytes())
        h.update(np.packbits(self.loops).tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        return (isinstance(other, SpiGraph) and self.space == other.space
                and self.vertices == other.vertices and np.array_equal(self.adj, other.adj)
                and np.array_equal(self.loops, other.loops) and self.types == other.types)

    __hash__ = None


class _PointData:
    def __init__(self, G: SpiGraph):
        sp = G.space
        self.vectors = projective_points(sp.spec, sp.dim)
        self.index = {v: i for i, v in enumerate(self.vectors)}
        self.masks = [incidence_mask(sp, P, self.index) for P in G.vertices]
        self.by_mask = {m: i for i, m in enumerate(self.masks)}

    def lift(self, point_perm) -> list[int]:
        """Vertex permutation induced by a permutation of the projective points
        that comes from a semilinear bijection."""
        out = []
        for m in self.masks:
            img = 0
            for b in bits(m):
                img |= 1 << point_perm[b]
            out.append(self.by_mask[img])
        return out


def incidence_mask(sp: SympSpace, P: Subspace, point_index) -> int:
    mask = 0
    for v in span_vectors(sp.spec, P.basis, sp.dim):
        if any(v):
            mask |= 1 << point_index[normalize(sp.spec, v)]
    return mask


def build_graph(sp: SympSpace) -> SpiGraph:
    vertices = enumerate_subspaces(sp)
    pts = projective_points(sp.spec, sp.dim)
    pidx = {v: i for i, v in enumerate(pts)}
    npts = len(pts)

    inc = np.zeros((len(vertices), npts), dtype=np.float64)
    for i, P in enumerate(vertices):
        for b in bits(incidence_mask(sp, P, pidx)):
            inc[i, b] = 1.0
    nonorth = np.array([[inner(sp, a, b) != 0 for b in pts] for a in pts], dtype=np.float64)
    # A K tB == 0 iff no point of A is non-orthogonal to a point of B.
    clash = (inc @ nonorth) @ inc.T
    both = clash == 0
    loops = np.diagonal(both).copy()
    adj = both.copy()
    np.fill_diagonal(adj, False)
    types = [type_of(sp, P) for P in vertices]
    return SpiGraph(sp, vertices, adj, loops, types)


def spi(p: int, e: int, nu: int) -> SpiGraph:
    return build_graph(SympSpace(nu, make_field(p, e)))


@dataclass
class PointSubgraph:
    """Induced subgraph on the 1-dimensional vertices."""

    graph: SpiGraph
    ids: list[int]

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def adj(self) -> np.ndarray:
        return self.graph.adj[np.ix_(self.ids, self.ids)]

    @property
    def loops(self) -> np.ndarray:
        return self.graph.loops[self.ids]

    def nbrs(self) -> list[int]:
        a = self.adj
        return [_bitset(a[i]) for i in range(self.n)]


def point_subgraph(G: SpiGraph) -> PointSubgraph:
    return PointSubgraph(G, G.point_ids())


# --- persistence ------------------------------------------------------------

def cache_path(cache_dir, p: int, e: int, nu: int) -> Path:
    return Path(cache_dir) / f"spi_p{p}_e{e}_nu{nu}_v{CACHE_FORMAT_VERSION}.json"


def _payload(G: SpiGraph) -> dict:
    spec = G.space.spec
    return {
        "p": spec.p, "e": spec.e, "nu": G.nu,
        "vertices": [format_rows(v.basis) for v in G.vertices],
        "types": [[t.m, t.s] for t in G.types],
        "loops": [int(x) for x in np.nonzero(G.loops)[0]],
        "adjacency": [format(b, "x") for b in G.nbrs],
    }


def save_graph(G: SpiGraph, path) -> Path:
    payload = _payload(G)
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    doc = {"format_version": CACHE_FORMAT_VERSION,
           "checksum": hashlib.sha256(body.encode()).hexdigest(),
           "graph": payload}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    tmp.replace(path)
    return path


class CacheError(ValueError):
    pass


def load_graph(path) -> SpiGraph:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheError(f"unreadable cache file {path}: {exc}") from exc
    if doc.get("format_version") != CACHE_FORMAT_VERSION:
        raise CacheError(f"cache format {doc.get('format_version')} != {CACHE_FORMAT_VERSION}")
    payload = doc["graph"]
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if hashlib.sha256(body.encode()).hexdigest() != doc.get("checksum"):
        raise CacheError(f"checksum mismatch in {path}")
    sp = SympSpace(payload["nu"], make_field(payload["p"], payload["e"]))
    n = len(payload["vertices"])
    vertices = [Subspace(sp.spec, tuple(tuple(r) for r in parse_rows(t)), sp.dim)
                for t in payload["vertices"]]
    adj = np.zeros((n, n), dtype=bool)
    for i, h in enumerate(payload["adjacency"]):
        for j in bits(int(h, 16)):
            adj[i, j] = True
    loops = np.zeros(n, dtype=bool)
    loops[payload["loops"]] = True
    types = [SympType(m, s) for m, s in payload["types"]]
    return SpiGraph(sp, vertices, adj, loops, types)


def to_dot(G: SpiGraph) -> str:
    lines = [f'graph "Spi({G.space.dim},{G.q})" {{']
    for v in range(G.n):
        lines.append(f'  {v} [label="{G.label(v)}"];')
    for u, v in G.edges(include_loops=True):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
