"""Permutation groups on the vertex set of a SpiGraph.

A permutation is a tuple ``p`` with ``i -> p[i]``.  Words of generator
indices are applied left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import apply_aut
from .graph import SpiGraph
from .linalg import Matrix, normalize, vec_mat
from .symplectic import (
    AutDescriptor,
    SympMatrix,
    act_descriptor,
    act_matrix,
    all_descriptors,
    diag_matrix,
    multiplier,
    transvections,
    type_of,
)
from .linalg import subspace_sum

Perm = tuple[int, ...]


class NotAnAutomorphism(ValueError):
    pass


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(a: Perm, b: Perm) -> Perm:
    """a, then b."""
    return tuple([b[x] for x in a])


def inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def is_identity(a: Perm) -> bool:
    return all(i == x for i, x in enumerate(a))


def check_perm(a, n: int | None = None) -> Perm:
    a = tuple(int(x) for x in a)
    if sorted(a) != list(range(len(a))) or (n is not None and len(a) != n):
        raise ValueError("not a permutation of the domain")
    return a


def perm_order(a: Perm) -> int:
    from math import lcm
    seen = [False] * len(a)
    out = 1
    for i in range(len(a)):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = a[j]
                k += 1
            out = lcm(out, k)
    return out


def replay(gens, word, x):
    for g in word:
        x = gens[g][x]
    return x


# --- induced permutations ---------------------------------------------------

def _lift_vector_map(G: SpiGraph, fn) -> Perm:
    spec = G.space.spec
    pts = G.points
    point_perm = [pts.index[normalize(spec, fn(v))] for v in pts.vectors]
    return tuple(pts.lift(point_perm))


def perm_from_linear(G: SpiGraph, T: Matrix) -> Perm:
    """Vertex permutation of any matrix with T K tT = lam K."""
    if multiplier(G.space, T) is None:
        raise NotAnAutomorphism("matrix does not preserve the form up to a scalar")
    spec, n = G.space.spec, G.space.dim
    return _lift_vector_map(G, lambda v: vec_mat(spec, v, T.rows, n))


def perm_from_matrix(G: SpiGraph, T: SympMatrix, method: str = "points") -> Perm:
    """sigma_T : A -> AT as a vertex permutation.

    ``points`` maps projective points and reads each subspace off its point
    set; ``subspaces`` canonicalizes every A T directly.  Both agree.
    """
    if not isinstance(T, SympMatrix) or not T.certified:
        raise ValueError("an uncertified matrix cannot act as a symplectic map")
    if method == "subspaces":
        return tuple(G.vertex_lookup(act_matrix(G.space, T, P)) for P in G.vertices)
    spec, n = G.space.spec, G.space.dim
    return _lift_vector_map(G, lambda v: vec_mat(spec, v, T.rows, n))


def perm_from_descriptor(G: SpiGraph, d: AutDescriptor, method: str = "points") -> Perm:
    sp = G.space
    if method == "subspaces":
        return tuple(G.vertex_lookup(act_descriptor(sp, d, P)) for P in G.vertices)
    act_descriptor(sp, d, G.vertices[0])  # validates the descriptor
    spec, n = sp.spec, sp.dim
    D = diag_matrix(sp, d.k)

    def fn(v):
        v = tuple(apply_aut(spec, d.pi, x) for x in v)
        v = vec_mat(spec, v, D.rows, n)
        if d.T is not None:
            v = vec_mat(spec, v, d.T.rows, n)
        return v

    return _lift_vector_map(G, fn)


def transvection_perms(G: SpiGraph) -> list[Perm]:
    return [perm_from_matrix(G, T) for T in transvections(G.space)]


def descriptor_perms(G: SpiGraph) -> list[Perm]:
    return [perm_from_descriptor(G, d) for d in all_descriptors(G.space)]


# --- Schreier-Sims ----------------------------------------------------------

@dataclass
class PermGroup:
    degree: int
    generators: list[Perm]
    base: list[int]
    strong_generators: list[Perm]
    transversals: list[dict[int, Perm]]

    @property
    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def contains(self, g: Perm) -> bool:
        h, j = _sift(self.base, self.transversals, tuple(g), 0)
        return j == len(self.base) and is_identity(h)


def _orbit_transversal(point: int, gens: list[Perm], n: int) -> dict[int, Perm]:
    trans = {point: identity(n)}
    queue = [point]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in trans:
                trans[y] = mul(trans[x], g)
                queue.append(y)
    return trans


def _sift(base, transversals, g: Perm, start: int):
    for j in range(start, len(base)):
        x = g[base[j]]
        u = transversals[j].get(x)
        if u is None:
            return g, j
        g = mul(g, inv(u))
    return g, len(base)


def schreier_sims(gens, degree: int | None = None) -> PermGroup:
    """Deterministic incremental Schreier-Sims."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree is required without generators")
        degree = len(gens[0])
    gens = [check_perm(g, degree) for g in gens]
    strong = [g for g in gens if not is_identity(g)]
    base: list[int] = []
    for g in strong:
        if all(g[b] == b for b in base):
            base.append(next(i for i, x in enumerate(g) if i != x))

    def level_gens(i):
        return [g for g in strong if all(g[b] == b for b in base[:i])]

    distr = [level_gens(i) for i in range(len(base))]
    trans = [_orbit_transversal(base[i], distr[i], degree) for i in range(len(base))]

    i = len(base) - 1
    while i >= 0:
        restart = False
        for x, u in list(trans[i].items()):
            for g in distr[i]:
                ug = mul(u, g)
                s = mul(ug, inv(trans[i][ug[base[i]]]))
                if is_identity(s):
                    continue
                h, j = _sift(base, trans, s, i + 1)
                if j == len(base) and is_identity(h):
                    continue
                if j == len(base):
                    base.append(next(k for k, y in enumerate(h) if k != y))
                    distr.append([])
                    trans.append({})
                strong.append(h)
                for lvl in range(i + 1, j + 1):
                    distr[lvl].append(h)
                    trans[lvl] = _orbit_transversal(base[lvl], distr[lvl], degree)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return PermGroup(degree, gens, base, strong, trans)


def group_order(gens, degree: int | None = None) -> int:
    gens = list(gens)
    if not gens:
        return 1
    return schreier_sims(gens, degree).order


# --- orbits -----------------------------------------------------------------

@dataclass
class OrbitPartition:
    gens: list[Perm]
    class_of: list[int]
    reps: list[int]
    parent: list[tuple[int, int] | None]  # element -> (predecessor, generator index)

    @property
    def num_classes(self) -> int:
        return len(self.reps)

    def classes(self) -> list[list[int]]:
        out = [[] for _ in self.reps]
        for x, c in enumerate(self.class_of):
            out[c].append(x)
        return out

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.classes()}


def orbits(gens, n: int) -> OrbitPartition:
    gens = [tuple(g) for g in gens]
    class_of = [-1] * n
    parent: list[tuple[int, int] | None] = [None] * n
    reps: list[int] = []
    for s in range(n):
        if class_of[s] >= 0:
            continue
        c = len(reps)
        reps.append(s)
        class_of[s] = c
        queue = [s]
        for x in queue:
            for gi, g in enumerate(gens):
                y = g[x]
                if class_of[y] < 0:
                    class_of[y] = c
                    parent[y] = (x, gi)
                    queue.append(y)
    return OrbitPartition(gens, class_of, reps, parent)


def vertex_orbits(gens, n: int) -> OrbitPartition:
    return orbits(gens, n)


def _word_from_rep(part: OrbitPartition, x: int) -> list[int]:
    word = []
    while part.parent[x] is not None:
        x, gi = part.parent[x]
        word.append(gi)
    return word[::-1]


def witness_word(part: OrbitPartition, a: int, b: int) -> list[int]:
    """Generator indices whose left-to-right product maps a to b."""
    if part.class_of[a] != part.class_of[b]:
        raise ValueError(f"{a} and {b} lie in different orbits")
    if a == b:
        return []
    orders = {}
    back = []
    for gi in reversed(_word_from_rep(part, a)):
        if gi not in orders:
            orders[gi] = perm_order(part.gens[gi])
        back += [gi] * (orders[gi] - 1)
    word = back + _word_from_rep(part, b)
    if replay(part.gens, word, a) != b:
        raise AssertionError("witness word failed to replay")  # pragma: no cover
    return word


def edge_domain(G: SpiGraph) -> tuple[list[tuple[int, int]], dict[tuple[int, int], int]]:
    edges = G.edges(include_loops=True)
    return edges, {e: i for i, e in enumerate(edges)}


def edge_perm(edges, eindex, g: Perm) -> Perm:
    out = []
    for u, v in edges:
        a, b = g[u], g[v]
        key = (a, b) if a <= b else (b, a)
        try:
            out.append(eindex[key])
        except KeyError:
            raise NotAnAutomorphism(f"edge {(u, v)} maps to non-edge {key}") from None
    return tuple(out)


def edge_orbits(G: SpiGraph, gens) -> tuple[list[tuple[int, int]], OrbitPartition]:
    """Orbits on unordered edges, loops included as (v, v)."""
    edges, eindex = edge_domain(G)
    eperms = [edge_perm(edges, eindex, g) for g in gens]
    return edges, orbits(eperms, len(edges))


def edge_triple(G: SpiGraph, u: int, v: int):
    """(sorted endpoint types, type of the sum)."""
    tu, tv = G.types[u], G.types[v]
    pair = tuple(sorted([(tu.m, tu.s), (tv.m, tv.s)]))
    if u == v:
        ts = tu
    else:
        ts = type_of(G.space, subspace_sum(G.vertices[u], G.vertices[v]))
    return pair, (ts.m, ts.s)


def partition_by_key(keys) -> set[frozenset[int]]:
    groups: dict = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, set()).add(i)
    return {frozenset(s) for s in groups.values()}
