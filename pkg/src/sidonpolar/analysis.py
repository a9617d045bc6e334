"""Certifiers for the combinatorial claims about G_{q,theta}, ER_q and friends.

Every check returns a Certificate: a named verdict with a witness that can be
re-checked by hand (a 4-cycle, a bad pair, an embedding, ...).
"""
from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

from .graphs import Graph, bits
from .search import exact_mis, greedy_independent
from .sidon import SidonSet

EXACT_MIS_CAP = int(os.environ.get("SIDONPOLAR_MIS_CAP", "64"))
ISO_CAP = 16


class AnalysisError(ValueError):
    pass


class AdjacentPair(AnalysisError):
    pass


class NoWitnessFound(AnalysisError):
    pass


class SearchSpaceExceeded(RuntimeError):
    pass


class TooLarge(AnalysisError):
    pass


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    return x


@dataclass
class Certificate:
    claim_id: str
    params: dict
    passed: bool | None  # None = inconclusive
    witness: object = None
    stats: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return {True: "pass", False: "fail", None: "inconclusive"}[self.passed]

    def to_dict(self) -> dict:
        return jsonable(
            {
                "claim": self.claim_id,
                "params": self.params,
                "verdict": self.verdict,
                "witness": self.witness,
                "stats": self.stats,
            }
        )

    def __bool__(self) -> bool:
        return self.passed is True


# ---------------------------------------------------------------------------
# C4-freeness and saturation


def _c4_chunk(rows, us):
    for u in us:
        ru = rows[u]
        for v in range(u + 1, len(rows)):
            if (ru & rows[v]).bit_count() >= 2:
                return (u, v)
    return None


def _saturation_chunk(rows, us):
    worst = None
    n = len(rows)
    for u in us:
        ru = rows[u]
        for v in range(u + 1, n):
            if ru >> v & 1:
                continue
            c = _paths3(rows, u, v)
            if worst is None or c < worst[0]:
                worst = (c, u, v)
    return worst


def _chunks(n: int, jobs: int):
    # interleaved so each worker sees a similar mix of long and short rows
    return [list(range(k, n, jobs)) for k in range(jobs)]


def _run_chunks(fn, rows, jobs: int):
    if jobs <= 1:
        return [fn(rows, range(len(rows)))]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futs = [ex.submit(fn, rows, us) for us in _chunks(len(rows), jobs)]
        return [f.result() for f in futs]


def four_cycle_at(G: Graph, u: int, v: int):
    w1, w2 = list(bits(G.rows[u] & G.rows[v]))[:2]
    return (u, w1, v, w2)


def is_c4_free(G: Graph, jobs: int = 1, claim_id: str = "c4free") -> Certificate:
    hits = [h for h in _run_chunks(_c4_chunk, G.rows, jobs) if h is not None]
    params = {"graph": G.name, "n": G.n, "edges": G.edge_count()}
    if hits:
        u, v = min(hits)
        return Certificate(claim_id, params, False, four_cycle_at(G, u, v))
    return Certificate(claim_id, params, True)


def _paths3(rows, u: int, v: int) -> int:
    rv = rows[v]
    return sum((rows[x] & rv).bit_count() for x in bits(rows[u]))


def paths_of_length_three(G: Graph, u: int, v: int) -> int:
    """Number of paths u-x-y-v (u, v non-adjacent)."""
    return _paths3(G.rows, u, v)


def count_c4_through_pair(G: Graph, u: int, v: int) -> int:
    """4-cycles through both u and v in G + uv.

    Those using the new edge are the u-x-y-v paths; any others have u, v
    opposite, one per pair of common neighbours (zero in a C4-free graph).
    """
    if u == v or G.has_edge(u, v):
        raise AdjacentPair(f"{u} and {v} are adjacent or equal")
    return _paths3(G.rows, u, v) + comb(G.common_neighbors(u, v), 2)


def is_c4_saturated(G: Graph, jobs: int = 1, claim_id: str = "c4saturated") -> Certificate:
    free = is_c4_free(G, jobs)
    params = {"graph": G.name, "n": G.n, "edges": G.edge_count()}
    if not free:
        return Certificate(claim_id, params, False, {"not_c4_free": free.witness})
    results = [r for r in _run_chunks(_saturation_chunk, G.rows, jobs) if r is not None]
    if not results:  # complete graph
        return Certificate(claim_id, params, True, stats={"non_edges": 0})
    c, u, v = min(results)
    stats = {"min_new_c4_over_non_edges": c}
    if c == 0:
        return Certificate(claim_id, params, False, {"non_edge": (u, v)}, stats)
    return Certificate(claim_id, params, True, stats=stats)


def min_new_c4_count(G: Graph) -> tuple[int, tuple[int, int]] | None:
    r = _saturation_chunk(G.rows, range(G.n))
    return None if r is None else (r[0], (r[1], r[2]))


# ---------------------------------------------------------------------------
# Triples a - b + c = x


def triple_count(S: SidonSet, x: int) -> int:
    n = S.n
    A = S.elements
    members = set(A)
    count = 0
    for a in A:
        for b in A:
            if a == b:
                continue
            c = (x - a + b) % n
            if c != b and c in members:
                count += 1
    return count


def triple_counts_bruteforce(A, n: int) -> list[int]:
    """Bucket all |A|^3 ordered triples with a != b, b != c by a - b + c."""
    out = [0] * n
    for a, b, c in itertools.product(A, repeat=3):
        if a != b and b != c:
            out[(a - b + c) % n] += 1
    return out


def certify_triples(S: SidonSet) -> Certificate:
    q, n = S.q, S.n
    oracle = triple_counts_bruteforce(S.elements, n)
    counts = [triple_count(S, x) for x in range(n)]
    mismatch = [x for x in range(n) if counts[x] != oracle[x]]
    outside = [x for x in range(n) if x not in S]
    low = [x for x in outside if counts[x] < q - 1]
    stats = {"min_count_outside_A": min(counts[x] for x in outside), "required": q - 1}
    ok = not mismatch and not low
    witness = None if ok else {"oracle_mismatch": mismatch[:5], "below_q_minus_1": low[:5]}
    return Certificate("triple-counts", {"q": q}, ok, witness, stats)


# ---------------------------------------------------------------------------
# Distances


def bfs_distances(G: Graph, s: int) -> list[int]:
    dist = [-1] * G.n
    dist[s] = 0
    seen = frontier = 1 << s
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in bits(frontier):
            nxt |= G.rows[v]
        nxt &= ~seen
        for v in bits(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def all_pairs_distances(G: Graph) -> list[list[int]]:
    return [bfs_distances(G, s) for s in range(G.n)]


def diameter(G: Graph, dists=None) -> int | None:
    dists = dists or all_pairs_distances(G)
    if any(d < 0 for row in dists for d in row):
        return None
    return max(max(row) for row in dists)


def predicted_distance(S: SidonSet, x: int, y: int) -> int:
    n, q = S.n, S.q
    if x == y:
        return 0
    if (x + y) % n in S:
        return 1
    if (x - y) % (q + 1):  # x - y not in H
        return 2
    return 3


def distance_certify(G: Graph, S: SidonSet) -> Certificate:
    q, n = S.q, S.n
    dists = all_pairs_distances(G)
    hist = {1: 0, 2: 0, 3: 0}
    bad = None
    for x in range(n):
        for y in range(x + 1, n):
            d = dists[x][y]
            if d != predicted_distance(S, x, y):
                bad = bad or {"pair": (x, y), "distance": d, "predicted": predicted_distance(S, x, y)}
            hist[d] = hist.get(d, 0) + 1
    H = S.H
    h_ok = all(dists[x][y] == 3 for x, y in itertools.combinations(H, 2))
    coset_ok = True
    for i in range(q + 1):
        coset = [(h + i) % n for h in H]
        for x, y in itertools.combinations(coset, 2):
            if G.common_neighbors(x, y):
                coset_ok = False
                bad = bad or {"coset": i, "pair": (x, y), "common_neighbours": G.common_neighbors(x, y)}
    diam = diameter(G, dists)
    diam_ok = diam == 3 if q >= 3 else diam is not None and diam <= 3
    ok = bad is None and h_ok and diam_ok
    stats = {"histogram": hist, "diameter": diam, "H_pairs_at_3": h_ok, "cosets_no_common_nbr": coset_ok}
    return Certificate("distance-trichotomy", {"q": q}, ok, bad, stats)


# ---------------------------------------------------------------------------
# Small-graph isomorphism


def _invariants(G: Graph) -> list[tuple]:
    deg = G.degrees()
    return [(deg[v], tuple(sorted(deg[w] for w in bits(G.rows[v])))) for v in range(G.n)]


def small_graph_isomorphic(G: Graph, H: Graph, max_n: int = ISO_CAP) -> list[int] | None:
    """An adjacency-preserving bijection V(G) -> V(H) as a list, or None.

    Backtracking over vertices of G (BFS order), candidates restricted to the
    same degree / neighbour-degree class.
    """
    if G.n != H.n:
        return None
    if G.n > max_n:
        raise TooLarge(f"n={G.n} exceeds {max_n}")
    if G.edge_count() != H.edge_count():
        return None
    inv_g, inv_h = _invariants(G), _invariants(H)
    if sorted(inv_g) != sorted(inv_h):
        return None
    n = G.n
    order: list[int] = []
    seen = 0
    for start in sorted(range(n), key=lambda v: (-G.degree(v), v)):
        if seen >> start & 1:
            continue
        queue = [start]
        seen |= 1 << start
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in bits(G.rows[v] & ~seen):
                seen |= 1 << w
                queue.append(w)
    by_class: dict = {}
    for h in range(n):
        by_class.setdefault(inv_h[h], []).append(h)

    image = [-1] * n
    used = 0

    def extend(k: int) -> bool:
        nonlocal used
        if k == n:
            return True
        v = order[k]
        for h in by_class[inv_g[v]]:
            if used >> h & 1:
                continue
            if all(G.has_edge(v, order[j]) == H.has_edge(h, image[order[j]]) for j in range(k)):
                image[v] = h
                used |= 1 << h
                if extend(k + 1):
                    return True
                used &= ~(1 << h)
                image[v] = -1
        return False

    return list(image) if extend(0) else None


def is_isomorphism(G: Graph, H: Graph, mapping) -> bool:
    if sorted(mapping) != list(range(H.n)) or G.n != H.n:
        return False
    return all(
        G.has_edge(u, v) == H.has_edge(mapping[u], mapping[v]) for u, v in itertools.combinations(range(G.n), 2)
    )


# ---------------------------------------------------------------------------
# Petersen graph


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, name="Petersen")


@dataclass
class PetersenWitness:
    q: int
    ijk: tuple[int, int, int]
    st: tuple[int, int]
    vertices: dict  # name -> vertex index of G3
    edges: list  # 15 pairs of names
    g3_edges_ok: bool = False
    isomorphic_ok: bool = False
    er_edges_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return self.g3_edges_ok and self.isomorphic_ok and self.er_edges_ok is not False

    def to_dict(self) -> dict:
        return {
            "i,j,k": self.ijk,
            "s,t": self.st,
            "vertices": self.vertices,
            "edges": self.edges,
            "edges_in_G3": self.g3_edges_ok,
            "isomorphic_to_petersen": self.isomorphic_ok,
            "edges_in_ER_q_via_phi": self.er_edges_ok,
        }


PETERSEN_NAMED_EDGES = [
    ("u1", "w1"), ("w1", "u2"), ("u2", "v1"), ("v1", "w2"), ("w2", "v2"), ("v2", "u1"),
    ("z0", "w1"), ("z0", "w2"), ("zi", "u1"), ("zi", "v1"), ("zj", "u2"), ("zj", "v2"),
    ("y", "z0"), ("y", "zi"), ("y", "zj"),
]  # fmt: skip


def petersen_candidates(S: SidonSet):
    """All ((i, j, k), (s, t)) with i + j = k, s != t and s + t = -(m_i + m_j - m_k) mod q-1."""
    q = S.q
    for i in range(1, q + 1):
        for j in range(i + 1, q + 1):
            k = i + j
            if k > q:
                break
            r = -(S.m(i) + S.m(j) - S.m(k)) % (q - 1)
            for s in range(q - 1):
                t = (r - s) % (q - 1)
                if s != t:
                    yield (i, j, k), (s, t)


def petersen_embed(assembly, er: Graph | None = None) -> PetersenWitness:
    """Ten vertices of G3 carrying a Petersen graph, built from a 6-cycle of G_{q,theta}.

    `assembly` is an iso.G3Assembly; if `er` (alt form ER_q) is given the
    witness is also pushed through phi and checked edge by edge there.
    """
    S: SidonSet = assembly.sidon
    q, n = S.q, S.n
    G3: Graph = assembly.g3
    ref = petersen_graph()
    for (i, j, k), (s, t) in petersen_candidates(S):
        ai, aj = S.a(i), S.a(j)
        names = {
            "u1": (ai + s * (q + 1)) % n,
            "v1": (ai + t * (q + 1)) % n,
            "w1": ((q - 1 - s) * (q + 1)) % n,
            "u2": (aj + s * (q + 1)) % n,
            "v2": (aj + t * (q + 1)) % n,
            "w2": ((q - 1 - t) * (q + 1)) % n,
            "z0": assembly.z(0),
            "zi": assembly.z(i),
            "zj": assembly.z(j),
            "y": assembly.y,
        }
        if len(set(names.values())) != 10:
            continue
        w = PetersenWitness(q, (i, j, k), (s, t), names, PETERSEN_NAMED_EDGES)
        w.g3_edges_ok = all(G3.has_edge(names[a], names[b]) for a, b in PETERSEN_NAMED_EDGES)
        key = list(names)
        sub = Graph.from_edges(10, [(key.index(a), key.index(b)) for a, b in PETERSEN_NAMED_EDGES])
        w.isomorphic_ok = small_graph_isomorphic(sub, ref) is not None
        if er is not None:
            idx = {pt: v for v, pt in enumerate(er.labels)}
            pts = {name: idx[assembly.phi(v)] for name, v in names.items()}
            w.er_edges_ok = all(er.has_edge(pts[a], pts[b]) for a, b in PETERSEN_NAMED_EDGES)
        if w.ok:
            return w
    raise NoWitnessFound(f"no admissible (i,j,k,s,t) for q={q}")


def petersen_brute_search(G: Graph, node_cap: int = 5_000_000, max_n: int = 64) -> list[int] | None:
    """Injective map V(Petersen) -> V(G) carrying edges to edges, or None if none exists."""
    if G.n > max_n:
        raise TooLarge(f"n={G.n} exceeds {max_n}")
    P = petersen_graph()
    order = [0, 1, 4, 5, 2, 3, 6, 9, 7, 8]  # each vertex after its first neighbour
    earlier = [[u for u in order[:k] if P.has_edge(order[k], u)] for k in range(10)]
    deg3 = 0
    for v in range(G.n):
        if G.degree(v) >= 3:
            deg3 |= 1 << v
    image = [-1] * 10
    nodes = 0

    def extend(k: int, used: int) -> bool:
        nonlocal nodes
        if k == 10:
            return True
        nodes += 1
        if nodes > node_cap:
            raise SearchSpaceExceeded(f"more than {node_cap} search nodes")
        cand = deg3 & ~used
        for u in earlier[k]:
            cand &= G.rows[image[u]]
        for v in bits(cand):
            image[order[k]] = v
            if extend(k + 1, used | 1 << v):
                return True
        image[order[k]] = -1
        return False

    return list(image) if extend(0, 0) else None


def is_subgraph_embedding(H: Graph, G: Graph, mapping) -> bool:
    return len(set(mapping)) == H.n and all(G.has_edge(mapping[u], mapping[v]) for u, v in H.edges())


# ---------------------------------------------------------------------------
# Independence number


@dataclass
class IndependenceResult:
    alpha: int
    witness: list[int]
    method: str  # "exact" | "lower-bound-only"
    sumset_ok: bool | None = None

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "witness": self.witness, "method": self.method, "sumset_formula_ok": self.sumset_ok}


def is_independent(G: Graph, vs) -> bool:
    mask = 0
    for v in vs:
        mask |= 1 << v
    return all(not (G.rows[v] & mask) for v in vs)


def sumset_condition(I, S: SidonSet) -> bool:
    """((I + I) minus 2.I) avoids A, with sums taken mod q^2 - 1."""
    n = S.n
    sums = {(x + y) % n for x in I for y in I}
    doubles = {(2 * x) % n for x in I}
    return not any(s in S for s in sums - doubles)


def mis_by_enumeration(G: Graph) -> int:
    """alpha(G) by sweeping all 2^n vertex subsets (n <= 22)."""
    n = G.n
    if n > 22:
        raise TooLarge(f"n={n} too large for subset enumeration")
    indep = bytearray(1 << n)
    indep[0] = 1
    best = 0
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        if indep[rest] and not (G.rows[v] & rest):
            indep[mask] = 1
            c = mask.bit_count()
            if c > best:
                best = c
    return best


def max_independent_set(
    G: Graph, budget: int | None = None, sidon: SidonSet | None = None, cap: int | None = None
) -> IndependenceResult:
    cap = EXACT_MIS_CAP if cap is None else cap
    if G.n > cap:
        w = greedy_independent(G.rows, G.n, sorted(range(G.n), key=lambda v: (G.degree(v), v)))
        res = IndependenceResult(len(w), w, "lower-bound-only")
    else:
        size, w, exact = exact_mis(G.rows, G.n, budget)
        res = IndependenceResult(size, w, "exact" if exact else "lower-bound-only")
    if not is_independent(G, res.witness):
        raise AssertionError("MIS witness is not independent")
    if sidon is not None:
        res.sumset_ok = sumset_condition([G.labels[v] for v in res.witness], sidon)
    return res


# ---------------------------------------------------------------------------
# Triangle-free induced subgraphs


def triangle_count(G: Graph, vs) -> int:
    mask = 0
    for v in vs:
        mask |= 1 << v
    total = 0
    for v in vs:
        for w in bits(G.rows[v] & mask):
            total += (G.rows[v] & G.rows[w] & mask).bit_count()
    return total // 6


def triangle_free_induced_search(G: Graph, restarts: int = 8, seed: int = 0) -> list[int]:
    """Greedy with random restarts; the result always induces no triangle."""
    rng = random.Random(seed)
    best: list[int] = []
    for r in range(max(1, restarts)):
        order = list(range(G.n))
        if r:
            rng.shuffle(order)
        J, mask = [], 0
        for v in order:
            nb = G.rows[v] & mask
            if not any(G.rows[w] & nb for w in bits(nb)):
                J.append(v)
                mask |= 1 << v
        if len(J) > len(best):
            best = J
    best = sorted(best)
    if triangle_count(G, best):
        raise AssertionError("triangle in greedy output")
    return best


# ---------------------------------------------------------------------------
# Kovari-Sos-Turan bound


@dataclass(frozen=True)
class KSTBound:
    """The value (n^{3/2} + n)/2, compared exactly against rationals."""

    n: int

    def admits(self, e) -> bool:
        """e <= (n*sqrt(n) + n)/2, decided in exact arithmetic."""
        lhs = 2 * Fraction(e) - self.n  # compare with n^{3/2}
        return lhs <= 0 or lhs * lhs <= self.n**3

    @property
    def exact(self) -> Fraction | None:
        r = isqrt(self.n)
        return Fraction(self.n * r + self.n, 2) if r * r == self.n else None

    @property
    def floor(self) -> int:
        # largest integer e with admits(e)
        lo, hi = 0, self.n * self.n
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.admits(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def __ge__(self, e) -> bool:
        return self.admits(e)

    def __lt__(self, e) -> bool:
        return not self.admits(e)

    def __float__(self) -> float:
        return (self.n**1.5 + self.n) / 2


def kst_bound(n: int) -> KSTBound:
    if n < 1:
        raise AnalysisError("n must be >= 1")
    return KSTBound(n)
