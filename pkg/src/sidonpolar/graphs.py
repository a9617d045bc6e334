"""Dense simple graphs on bitset rows, and the graph families built from A(q, theta)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .fields import FieldCtx, build_base_field, prime_power, subfield
from .sidon import SidonSet, halving_multiplier, lindstrom_shift, two_power_exponent


class GraphError(ValueError):
    pass


class OddQ(GraphError):
    pass


class NotEvenPowerPrime(GraphError):
    pass


class TooLargeForGraph6(GraphError):
    pass


def bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(eq=False)
class Graph:
    """Undirected simple graph; rows[v] is the neighbourhood of v as an int bitmask."""

    n: int
    rows: list[int] = field(repr=False)
    labels: list = field(default_factory=list, repr=False)
    name: str = ""

    @classmethod
    def empty(cls, n: int, labels=None, name: str = "") -> "Graph":
        return cls(n, [0] * n, list(labels) if labels is not None else list(range(n)), name)

    @classmethod
    def from_edges(cls, n: int, edges, labels=None, name: str = "") -> "Graph":
        g = cls.empty(n, labels, name)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def copy(self, name: str | None = None) -> "Graph":
        return Graph(self.n, list(self.rows), list(self.labels), self.name if name is None else name)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"loop at {u}")
        self.rows[u] |= 1 << v
        self.rows[v] |= 1 << u

    def add_vertex(self, label=None) -> int:
        self.rows.append(0)
        self.labels.append(label)
        self.n += 1
        return self.n - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self):
        for u in range(self.n):
            for v in bits(self.rows[u] >> (u + 1)):
                yield (u, u + 1 + v)

    def common_neighbors(self, u: int, v: int) -> int:
        return (self.rows[u] & self.rows[v]).bit_count()

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def induced(self, keep, name: str = "") -> "Graph":
        """Induced subgraph on `keep` (ordered as given), relabelled 0..k-1."""
        keep = list(keep)
        pos = {v: k for k, v in enumerate(keep)}
        g = Graph.empty(len(keep), [self.labels[v] for v in keep], name or self.name)
        for k, v in enumerate(keep):
            row = 0
            for w in bits(self.rows[v]):
                j = pos.get(w)
                if j is not None:
                    row |= 1 << j
            g.rows[k] = row
        return g

    def delete(self, drop, name: str = "") -> "Graph":
        drop = set(drop)
        return self.induced([v for v in range(self.n) if v not in drop], name)

    def is_symmetric(self) -> bool:
        return all(not (r >> v & 1) for v, r in enumerate(self.rows)) and all(
            self.has_edge(v, u) for u, v in self.edges()
        )

    def index_of(self, label) -> int:
        return self.labels.index(label)


# ---------------------------------------------------------------------------
# Cayley sum graphs


@dataclass
class CayleyMeta:
    sidon: SidonSet
    absolute_points: list[int]
    special_x: int | None = None


def absolute_points(S: SidonSet) -> list[int]:
    n = S.n
    return [y for y in range(n) if (2 * y) % n in S]


def cayley_sum_graph(S: SidonSet) -> tuple[Graph, CayleyMeta]:
    """G_{q,theta}: vertices Z_{q^2-1}, x ~ y iff x != y and x + y in A."""
    n = S.n
    g = Graph.empty(n, name=f"G_{S.q}")
    for x in range(n):
        row = 0
        for a in S.elements:
            y = (a - x) % n
            if y != x:
                row |= 1 << y
        g.rows[x] = row
    special = None
    if two_power_exponent(S.q) is not None and S.ctx is not None:
        special = lindstrom_shift(S.ctx, S).x_special
    return g, CayleyMeta(S, absolute_points(S), special)


def expected_cayley_edges(q: int) -> Fraction:
    if q % 2:
        return Fraction(q**3, 2) - q + Fraction(1, 2)
    return Fraction(q**3, 2) - q


# ---------------------------------------------------------------------------
# Erdos-Renyi orthogonal polarity graphs


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """Normalized points of PG(2, q) (first nonzero coordinate 1), lexicographic order."""
    pts = [(0, 0, 1)]
    pts += [(0, 1, z) for z in range(q)]
    pts += [(1, y, z) for y in range(q) for z in range(q)]
    return pts


def normalize(F: FieldCtx, pt) -> tuple[int, int, int]:
    for c in pt:
        if c:
            inv = F.inv(c)
            return tuple(F.mul(inv, x) for x in pt)
    raise GraphError("the zero vector is not a projective point")


def dot_form(F: FieldCtx, x, y) -> bool:
    s = F.add(F.add(F.mul(x[0], y[0]), F.mul(x[1], y[1])), F.mul(x[2], y[2]))
    return s == 0


def alt_form(F: FieldCtx, x, y) -> bool:
    """x0*y2 + x2*y0 == x1*y1."""
    return F.add(F.mul(x[0], y[2]), F.mul(x[2], y[0])) == F.mul(x[1], y[1])


FORMS = {"dot": dot_form, "alt": alt_form}


def er_graph(F: FieldCtx, form: str = "dot") -> Graph:
    adj = FORMS[form]
    pts = projective_points(F.q)
    g = Graph.empty(len(pts), pts, name=f"ER_{F.q}[{form}]")
    for u, v in itertools.combinations(range(len(pts)), 2):
        if adj(F, pts[u], pts[v]):
            g.add_edge(u, v)
    return g


def expected_er_edges(q: int) -> Fraction:
    return Fraction(q * (q + 1) ** 2, 2)


# ---------------------------------------------------------------------------
# H_{q,theta} for q a power of 2


def h_graph(G: Graph, meta: CayleyMeta) -> Graph:
    """Delete the special vertex and its neighbourhood (the q absolute points)."""
    q = meta.sidon.q
    if two_power_exponent(q) is None:
        raise OddQ(f"H_(q,theta) needs q a power of 2, got {q}")
    x = meta.special_x
    if x is None:
        raise OddQ("missing special vertex")
    return G.delete([x, *G.neighbors(x)], name=f"H_{q}")


def special_vertex_ok(G: Graph, meta: CayleyMeta) -> bool:
    """The special vertex's neighbourhood is exactly the absolute-point set."""
    x = meta.special_x
    return x is not None and set(G.neighbors(x)) == set(meta.absolute_points)


def halved_A(S: SidonSet) -> list[int]:
    h = halving_multiplier(S.q)
    return sorted((h * a) % S.n for a in S.elements)


# ---------------------------------------------------------------------------
# Subfield-deletion construction on q^2 - 1 vertices


def subfield_bound(q: int) -> Fraction:
    """q^3/2 + q^{3/2}/2 - 3q/2 + q^{1/2}/2 - 2 for q a perfect square."""
    r = isqrt(q)
    if r * r != q:
        raise NotEvenPowerPrime(f"{q} is not a square")
    return Fraction(q**3 + r**3 - 3 * q + r, 2) - 2


@dataclass
class SubfieldReport:
    q: int
    root: int
    copy_vertices: list[int]
    independent: list[int]
    deleted: list[int]
    copy_alpha: int
    deleted_edges: int
    edges: int
    bound: Fraction

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "sqrt_q": self.root,
            "copy_size": len(self.copy_vertices),
            "copy_alpha": self.copy_alpha,
            "kept_independent": self.independent,
            "deleted_count": len(self.deleted),
            "deleted_internal_edges": self.deleted_edges,
            "edges": self.edges,
            "bound": str(self.bound),
            "meets_bound": self.edges >= self.bound,
        }


def subfield_construction(p: int, t: int, form: str = "dot") -> tuple[Graph, SubfieldReport]:
    from .search import exact_mis

    if t < 1:
        raise NotEvenPowerPrime("t must be >= 1")
    F = build_base_field(p, 2 * t)
    q, r = F.q, p**t
    er = er_graph(F, form)
    sub = set(subfield(F, r))
    copy = [v for v, pt in enumerate(er.labels) if all(c in sub for c in pt)]
    H = er.induced(copy)
    size, witness, _ = exact_mis(H.rows, H.n)
    keep = sorted(copy[k] for k in witness[: r - 1])
    keep_set = set(keep)
    S = [v for v in copy if v not in keep_set]
    out = er.delete(S, name=f"ER_{q}-S")
    eS = er.induced(S).edge_count()
    rep = SubfieldReport(q, r, copy, keep, S, size, eS, out.edge_count(), subfield_bound(q))
    return out, rep


def subfield_params(q: int) -> tuple[int, int]:
    p, m = prime_power(q)
    if m % 2:
        raise NotEvenPowerPrime(f"{q} is not an even power of a prime")
    return p, m // 2


# ---------------------------------------------------------------------------
# Export


def _g6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise TooLargeForGraph6(f"n={n} too large for graph6")


def to_graph6(G: Graph) -> bytes:
    out = bytearray(_g6_size(G.n))
    acc = nb = 0
    for j in range(1, G.n):
        row = G.rows[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nb += 1
            if nb == 6:
                out.append(acc + 63)
                acc = nb = 0
    if nb:
        out.append((acc << (6 - nb)) + 63)
    return bytes(out)


def to_dimacs(G: Graph) -> bytes:
    lines = [f"c {G.name}" if G.name else None, f"p edge {G.n} {G.edge_count()}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in G.edges()]
    return ("\n".join(x for x in lines if x is not None) + "\n").encode()


def _label_str(label) -> str:
    if isinstance(label, (tuple, list)):
        return "(" + ",".join(str(c) for c in label) + ")"
    return str(label)


def to_edge_list(G: Graph, labelled: bool = False) -> bytes:
    if labelled:
        rows = [f"{_label_str(G.labels[u])} {_label_str(G.labels[v])}" for u, v in G.edges()]
    else:
        rows = [f"{u} {v}" for u, v in G.edges()]
    return "\n".join(rows).encode()


def export(G: Graph, fmt: str = "graph6") -> bytes:
    if fmt == "graph6":
        return to_graph6(G)
    if fmt == "dimacs":
        return to_dimacs(G)
    if fmt == "edges":
        return to_edge_list(G)
    if fmt == "labelled":
        return to_edge_list(G, labelled=True)
    raise GraphError(f"unknown format {fmt!r}")


def from_graph6(data: bytes) -> Graph:
    data = data.strip()
    if data[0] == 126:
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    stream = (((c - 63) >> k) & 1 for c in body for k in range(5, -1, -1))
    g = Graph.empty(n)
    for j in range(1, n):
        for i in range(j):
            if next(stream):
                g.add_edge(i, j)
    return g
