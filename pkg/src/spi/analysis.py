"""Distance, degree, clique and census measurements on Spi(2nu, q).

Loops never enter distances or degrees.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gf import prime_power
from .graph import SpiGraph, bits, gaussian_binomial, point_subgraph
from .linalg import format_rows
from .symplectic import SympType, dual


@dataclass
class DistanceReport:
    connected: bool
    diameter: int | None  # None means infinite
    witness_pair: tuple[int, int]
    witness_path: list[int]
    eccentricity_histogram: dict = field(default_factory=dict)


@dataclass
class InvariantSignature:
    point_count: int
    point_clique_number: int
    recovered_nu: int
    recovered_q: int


def components(G: SpiGraph) -> list[list[int]]:
    seen = 0
    out = []
    for s in range(G.n):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= G.nbrs[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(list(bits(comp)))
    return out


def is_connected(G: SpiGraph) -> bool:
    return len(components(G)) == 1


def bfs_path(G: SpiGraph, a: int, b: int) -> list[int] | None:
    """A shortest a-b path (lowest-index parents), or None."""
    parent = {a: a}
    frontier = [a]
    while frontier and b not in parent:
        nxt = []
        for u in frontier:
            for v in bits(G.nbrs[u]):
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        frontier = sorted(nxt)
    if b not in parent:
        return None
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def distance(G: SpiGraph, a: int, b: int) -> int | None:
    path = bfs_path(G, a, b)
    return None if path is None else len(path) - 1


def eccentricities(G: SpiGraph, threads: int = 1, chunk: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex eccentricity (-1 if some vertex is unreachable) and the
    lowest-index farthest vertex, by breadth-first search from every source."""
    n = G.n
    A = G.adj.astype(np.float32)
    starts = list(range(0, n, chunk))

    def run(lo):
        hi = min(n, lo + chunk)
        k = hi - lo
        frontier = np.zeros((k, n), dtype=bool)
        frontier[np.arange(k), np.arange(lo, hi)] = True
        seen = frontier.copy()
        far = np.arange(lo, hi)
        ecc = np.zeros(k, dtype=np.int64)
        level = 0
        while frontier.any():
            level += 1
            nxt = (frontier.astype(np.float32) @ A) > 0
            nxt &= ~seen
            seen |= nxt
            grew = nxt.any(axis=1)
            ecc[grew] = level
            far[grew] = nxt[grew].argmax(axis=1)
            frontier = nxt
        ecc[~seen.all(axis=1)] = -1
        return ecc, far

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(lo) for lo in starts]
    ecc = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, dtype=np.int64)
    far = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=np.int64)
    return ecc, far


def diameter(G: SpiGraph, threads: int = 1) -> DistanceReport:
    comps = components(G)
    if len(comps) > 1:
        a, b = comps[0][0], comps[1][0]
        return DistanceReport(False, None, (a, b), [], {})
    ecc, far = eccentricities(G, threads=threads)
    hist = {int(k): int(v) for k, v in sorted(Counter(ecc.tolist()).items())}
    if G.n <= 1:
        return DistanceReport(True, 0, (0, 0), [0] if G.n else [], hist)
    src = int(np.argmax(ecc))
    dst = int(far[src])
    path = bfs_path(G, src, dst)
    return DistanceReport(True, int(ecc[src]), (src, dst), path, hist)


def is_path(G: SpiGraph, path) -> bool:
    return all(G.adj[u, v] for u, v in zip(path, path[1:]))


def degree_profile(G: SpiGraph) -> dict:
    deg = G.degrees()
    dims = G.dims()
    hist = Counter(deg.tolist())
    degree_one = {int(v) for v in np.nonzero(deg == 1)[0]}
    hyperplanes = {int(v) for v in np.nonzero(dims == 2 * G.nu - 1)[0]}
    return {
        "histogram": {int(k): int(v) for k, v in sorted(hist.items())},
        "degree_one": sorted(degree_one),
        "degree_one_is_codim_one": degree_one == hyperplanes,
    }


def max_clique(nbrs: list[int], candidates: int | None = None) -> list[int]:
    """Exact maximum clique by branch and bound with a greedy colouring bound."""
    n = len(nbrs)
    if candidates is None:
        candidates = (1 << n) - 1
    best: list[int] = []

    def colour_order(P: int):
        order, bounds = [], []
        colour = 0
        uncoloured = P
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~nbrs[v] & ~(1 << v)
                uncoloured &= ~(1 << v)
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(R: list[int], P: int):
        nonlocal best
        order, bounds = colour_order(P)
        for v, c in zip(reversed(order), reversed(bounds)):
            if len(R) + c <= len(best):
                return
            R.append(v)
            newP = P & nbrs[v]
            if newP:
                expand(R, newP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    if candidates:
        expand([], candidates)
    return sorted(best)


def max_clique_points(G: SpiGraph) -> tuple[int, list[int]]:
    """Clique number of the point subgraph, with a witness as vertex ids of G."""
    sub = point_subgraph(G)
    local = max_clique(sub.nbrs())
    return len(local), [sub.ids[i] for i in local]


def type_census(G: SpiGraph) -> dict[SympType, int]:
    c = Counter(G.types)
    return dict(sorted(c.items(), key=lambda kv: (kv[0].m, kv[0].s)))


def census_consistent(G: SpiGraph) -> bool:
    census = type_census(G)
    n = 2 * G.nu
    for m in range(1, n):
        if sum(v for t, v in census.items() if t.m == m) != gaussian_binomial(n, m, G.q):
            return False
    return sum(census.values()) == G.n


def point_count_formula(nu: int, q: int) -> int:
    return (q ** (2 * nu) - 1) // (q - 1)


def clique_formula(nu: int, q: int) -> int:
    return (q ** nu - 1) // (q - 1)


def solve_signature(point_count: int, clique_number: int) -> tuple[int, int]:
    """The unique (nu, q) with q a prime power and the two point/clique counts."""
    found = []
    for q in range(2, point_count + 1):
        if prime_power(q) is None:
            continue
        nu = 1
        while (q ** (2 * nu) - 1) // (q - 1) <= point_count:
            if (point_count_formula(nu, q) == point_count
                    and clique_formula(nu, q) == clique_number):
                found.append((nu, q))
            nu += 1
    if len(found) != 1:
        raise ValueError(f"counts ({point_count}, {clique_number}) match {found or 'no'} parameters")
    return found[0]


def invariant_signature(G: SpiGraph) -> InvariantSignature:
    points = len(G.point_ids())
    clique, _ = max_clique_points(G)
    nu, q = solve_signature(points, clique)
    return InvariantSignature(points, clique, nu, q)


def subspace_text(G: SpiGraph, v: int) -> str:
    return format_rows(G.vertices[v].basis)


def frame_witness(G: SpiGraph) -> tuple[list[int], int, int]:
    """A = [e_1..e_{2nu-1}], B = [e_1..e_{nu-1}, e_{nu+1}..e_{2nu}] and the
    path A -- [e_nu] -- [e_1] -- [e_{2nu}] -- B."""
    sp = G.space
    nu, n = sp.nu, sp.dim
    A = sp.subspace(*[sp.e(i) for i in range(1, n)])
    B = sp.subspace(*[sp.e(i) for i in range(1, n + 1) if i != nu])
    a, b = G.vertex_lookup(A), G.vertex_lookup(B)
    mids = [sp.subspace(sp.e(nu)), sp.subspace(sp.e(1)), sp.subspace(sp.e(n))]
    return [a] + [G.vertex_lookup(X) for X in mids] + [b], a, b


def analysis_report(G: SpiGraph, threads: int = 1) -> dict:
    sp = G.space
    spec = sp.spec
    comps = components(G)
    dist = diameter(G, threads=threads)
    degs = degree_profile(G)
    census = type_census(G)
    sig = invariant_signature(G)
    points = census.get(SympType(1, 0), 0)

    checks = {
        "connected_iff_nu_ge_2": (len(comps) == 1) == (G.nu >= 2),
        "point_count_formula": points == point_count_formula(G.nu, G.q),
        "degree_one_is_codim_one": degs["degree_one_is_codim_one"] if G.nu >= 2 else True,
        "loops_are_isotropic": all(bool(G.loops[v]) == (G.types[v].s == 0) for v in range(G.n)),
        "census_matches_gaussian_binomials": census_consistent(G),
        "signature_recovers_parameters": (sig.recovered_nu, sig.recovered_q) == (G.nu, G.q),
    }
    if G.nu >= 2:
        checks["diameter_is_4"] = dist.diameter == 4
        path, a, b = frame_witness(G)
        checks["witness_path_valid"] = is_path(G, path) and distance(G, a, b) == 4
        checks["codim_one_dual_is_unique_neighbour"] = all(
            G.nbrs[v] == 1 << G.vertex_lookup(dual(sp, G.vertices[v]))
            for v in degs["degree_one"])
    else:
        checks["components_are_points"] = len(comps) == G.q + 1

    return {
        "params": {"p": spec.p, "e": spec.e, "q": G.q, "nu": G.nu},
        "vertex_count": G.n,
        "edge_count": G.edge_count(),
        "loop_count": G.loop_count(),
        "components": len(comps),
        "diameter": dist.diameter if dist.diameter is not None else "inf",
        "witness_pair": [subspace_text(G, v) for v in dist.witness_pair],
        "witness_path": [subspace_text(G, v) for v in dist.witness_path],
        "eccentricity_histogram": {str(k): v for k, v in dist.eccentricity_histogram.items()},
        "degree_histogram": {str(k): v for k, v in degs["histogram"].items()},
        "census": [{"m": t.m, "s": t.s, "count": c} for t, c in census.items()],
        "signature": {"point_count": sig.point_count, "point_clique_number": sig.point_clique_number,
                      "nu": sig.recovered_nu, "q": sig.recovered_q},
        "checks": checks,
        "all_pass": all(checks.values()),
    }
