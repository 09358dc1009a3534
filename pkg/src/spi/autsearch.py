"""Automorphism group of a SpiGraph by individualization-refinement.

The search seeds its colouring with loop flags and degrees only, so the
group it returns does not presuppose anything about subspace types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import groups
from .graph import SpiGraph
from .symplectic import all_descriptors, similitude_matrix

MAX_SEARCH_VERTICES = 3000


class SearchBoundExceeded(ValueError):
    pass


@dataclass
class AutResult:
    generators: list[tuple[int, ...]]
    order: int
    initial_invariant: str = "loop flag, degree"
    base: list[int] = field(default_factory=list)
    orbit_lengths: list[int] = field(default_factory=list)
    leaves_visited: int = 0


def is_automorphism(G: SpiGraph, sigma) -> bool:
    s = np.asarray(sigma)
    if s.shape != (G.n,):
        raise ValueError(f"permutation has length {len(s)}, graph has {G.n} vertices")
    if not np.array_equal(np.sort(s), np.arange(G.n)):
        raise ValueError("not a permutation")
    return bool(np.array_equal(G.loops[s], G.loops)
                and np.array_equal(G.adj[np.ix_(s, s)], G.adj))


def _rank(keys: np.ndarray) -> np.ndarray:
    _, inv = np.unique(keys, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def initial_coloring(G: SpiGraph) -> np.ndarray:
    keys = np.column_stack([G.loops.astype(np.int64), G.degrees().astype(np.int64)])
    return _rank(keys)


def cells(colors: np.ndarray) -> list[list[int]]:
    out = [[] for _ in range(int(colors.max()) + 1)] if len(colors) else []
    for v, c in enumerate(colors.tolist()):
        out[c].append(v)
    return out


def _refine(A: np.ndarray, colors: np.ndarray):
    """Coarsest equitable refinement plus the quotient counts of its cells."""
    n = len(colors)
    k = int(colors.max()) + 1
    while True:
        onehot = np.zeros((n, k), dtype=np.float32)
        onehot[np.arange(n), colors] = 1.0
        counts = (A @ onehot).astype(np.int64)
        new = _rank(np.column_stack([colors, counts]))
        knew = int(new.max()) + 1
        if knew == k:
            return colors, counts
        colors, k = new, knew


def refine(G: SpiGraph, colors) -> np.ndarray:
    return _refine(G.adj.astype(np.float32), np.asarray(colors, dtype=np.int64))[0]


def individualize(colors: np.ndarray, v: int) -> np.ndarray:
    new = colors * 2 + 1
    new[v] = colors[v] * 2
    return _rank(new)


def _invariant(colors: np.ndarray, counts: np.ndarray, loops: np.ndarray) -> bytes:
    k = int(colors.max()) + 1
    first = np.full(k, -1)
    for v in range(len(colors) - 1, -1, -1):
        first[colors[v]] = v
    sizes = np.bincount(colors, minlength=k)
    return sizes.tobytes() + counts[first].tobytes() + loops[first].tobytes()


def _target(colors: np.ndarray) -> list[int] | None:
    """First largest non-singleton cell."""
    sizes = np.bincount(colors)
    if sizes.max() <= 1:
        return None
    c = int(np.argmax(sizes))
    return np.nonzero(colors == c)[0].tolist()


def aut_group(G: SpiGraph, max_vertices: int = MAX_SEARCH_VERTICES) -> AutResult:
    if G.n > max_vertices:
        raise SearchBoundExceeded(
            f"graph has {G.n} vertices; the automorphism search is bounded at {max_vertices}")
    A = G.adj.astype(np.float32)
    loops = G.loops.astype(np.int64)

    def node(colors):
        colors, counts = _refine(A, colors)
        return colors, _invariant(colors, counts, loops)

    # first path
    path = []
    colors, inv = node(initial_coloring(G))
    invs = [inv]
    while (cell := _target(colors)) is not None:
        v = cell[0]
        path.append((colors, cell, v))
        colors, inv = node(individualize(colors, v))
        invs.append(inv)
    leaf0 = colors
    depth = len(path)
    lab0 = np.argsort(leaf0)

    leaves = 0

    def search(colors, d):
        nonlocal leaves
        if d == depth:
            leaves += 1
            gamma = np.empty(G.n, dtype=np.int64)
            gamma[lab0] = np.argsort(colors)
            return gamma if is_automorphism(G, gamma) else None
        for u in _target(colors):
            child, inv = node(individualize(colors, u))
            if inv != invs[d + 1]:
                continue
            found = search(child, d + 1)
            if found is not None:
                return found
        return None

    gens: list[tuple[int, ...]] = []
    lengths = [0] * depth
    for level in reversed(range(depth)):
        colors, cell, v = path[level]
        orbit = _orbit(v, gens)
        for w in cell:
            if w in orbit:
                continue
            child, inv = node(individualize(colors, w))
            if inv != invs[level + 1]:
                continue
            gamma = search(child, level + 1)
            if gamma is not None:
                gens.append(tuple(int(x) for x in gamma))
                orbit = _orbit(v, gens)
        lengths[level] = len(orbit)

    return AutResult(gens, math.prod(lengths), base=[v for _, _, v in path],
                     orbit_lengths=lengths, leaves_visited=leaves)


def _orbit(v: int, gens) -> set[int]:
    seen = {v}
    queue = [v]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def closed_form_order(nu: int, q: int, e: int) -> int:
    """The closed-form |Aut| stated for Spi(2nu, q)."""
    if nu == 1:
        return math.factorial(q + 1)
    prod = math.prod(q ** (2 * i) - 1 for i in range(1, nu + 1))
    return q ** (2 * nu) * prod * e // 2


def symplectic_group_order(nu: int, q: int) -> int:
    """|Sp_{2nu}(q)| = q^(nu^2) prod (q^(2i) - 1)."""
    return q ** (nu * nu) * math.prod(q ** (2 * i) - 1 for i in range(1, nu + 1))


def verify_factorization(G: SpiGraph, aut: AutResult | None = None) -> dict:
    """Compare the searched Aut with the groups generated by the known maps."""
    sp = G.space
    spec = sp.spec
    aut = aut if aut is not None else aut_group(G)
    for g in aut.generators:
        if not is_automorphism(G, g):
            raise groups.NotAnAutomorphism("search produced a non-automorphism")

    t_perms = groups.transvection_perms(G)
    e_perms = [groups.perm_from_descriptor(G, d) for d in all_descriptors(sp)]
    for g in t_perms + e_perms:
        if not is_automorphism(G, g):
            raise groups.NotAnAutomorphism("an induced map fails to preserve the graph")
    frame = [G.vertex_lookup(X) for X in sp.frame_points()]
    e_fix_frame = all(g[f] == f for g in e_perms for f in frame)

    sp_order = groups.group_order(t_perms, G.n)
    sp_e_order = groups.group_order(t_perms + e_perms, G.n)
    formula = closed_form_order(sp.nu, G.q, spec.e)

    # Similitudes scale the form and still preserve orthogonality.
    from .gf import primitive_element
    sim = groups.perm_from_linear(G, similitude_matrix(sp, primitive_element(spec)))
    extended_order = groups.group_order(t_perms + e_perms + [sim], G.n)

    nontrivial_e = {tuple(g) for g in e_perms}
    return {
        "params": {"p": spec.p, "e": spec.e, "q": G.q, "nu": sp.nu},
        "order": aut.order,
        "num_generators": len(aut.generators),
        "generators": [list(g) for g in aut.generators],
        "comparisons": {
            "sp_order": sp_order,
            "sp_plus_e_order": sp_e_order,
            "similitude_extended_order": extended_order,
            "formula_value": formula,
            "distinct_e_permutations": len(nontrivial_e),
            "match_flags": {
                "sp_plus_e_equals_aut": sp_e_order == aut.order,
                "sp_order_divides_aut": aut.order % sp_order == 0,
                "e_fixes_frame": e_fix_frame,
                "similitude_extended_equals_aut": extended_order == aut.order,
                "formula_equals_aut": formula == aut.order,
            },
            "reported_only": ["formula_equals_aut", "similitude_extended_equals_aut"],
        },
    }
