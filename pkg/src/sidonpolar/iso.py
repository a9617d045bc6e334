"""Grow G_{q,theta} into a graph on q^2+q+1 vertices and map it onto ER_q.

Step 1 adds z_0..z_q, with z_i joined to the coset H+i.  Step 2 adds y joined
to every z_i.  Step 3 joins z_j to z_{q+1-j} for 1 <= j <= q//2.  The map phi
sends the result onto the points of PG(2,q) under the form
x0*y2 + x2*y0 = x1*y1; verify_isomorphism checks it pair by pair.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .analysis import Certificate, is_c4_free
from .fields import ExtFieldCtx
from .graphs import Graph, er_graph, normalize
from .sidon import SidonSet


class IsoError(ValueError):
    pass


class StageC4Violation(IsoError):
    def __init__(self, stage: str, witness):
        super().__init__(f"{stage} contains a 4-cycle {witness}")
        self.stage = stage
        self.witness = witness


class UnlabeledVertex(IsoError):
    pass


class IndexOutOfRange(IsoError):
    pass


def partner(q: int, i: int) -> int:
    """q + 1 - i, reduced into 1..q."""
    return (q + 1 - i - 1) % q + 1


@dataclass(eq=False)
class G3Assembly:
    sidon: SidonSet
    ctx: ExtFieldCtx
    g: Graph
    g1: Graph
    g2: Graph
    g3: Graph
    stage_certs: list[Certificate] = field(default_factory=list)

    @property
    def q(self) -> int:
        return self.sidon.q

    @property
    def n_cayley(self) -> int:
        return self.sidon.n

    def z(self, i: int) -> int:
        return self.n_cayley + i

    @property
    def y(self) -> int:
        return self.n_cayley + self.q + 1

    @property
    def odd(self) -> bool:
        return self.ctx.base.p != 2

    @property
    def delta(self) -> int | None:
        """(alpha - 1)/2 in GF(q); only for odd q."""
        if not self.odd:
            return None
        F = self.ctx.base
        return F.mul(F.inv(F.from_int(2)), F.sub(self.ctx.alpha, 1))

    def stage_edges(self) -> dict:
        e = self.g.edge_count()
        return {
            "G": e,
            "G1": self.g1.edge_count(),
            "G2": self.g2.edge_count(),
            "G3": self.g3.edge_count(),
            "added_G1": self.g1.edge_count() - e,
            "added_G2": self.g2.edge_count() - self.g1.edge_count(),
            "added_G3": self.g3.edge_count() - self.g2.edge_count(),
        }

    def phi(self, v: int) -> tuple[int, int, int]:
        return phi(self, v)

    def phi_table(self) -> list:
        return [(_label_json(self.g3.labels[v]), list(self.phi(v))) for v in range(self.g3.n)]


def _label_json(label):
    return list(label) if isinstance(label, tuple) else label


def build_g3(G: Graph, S: SidonSet, ctx: ExtFieldCtx | None = None) -> G3Assembly:
    ctx = ctx or S.ctx
    if ctx is None:
        raise IsoError("Sidon set carries no field context")
    q, n = S.q, S.n
    certs = []

    def check(stage: Graph, name: str):
        cert = is_c4_free(stage, claim_id=f"c4free[{name}]")
        certs.append(cert)
        if not cert:
            raise StageC4Violation(name, cert.witness)

    g1 = G.copy(name=f"G1_{q}")
    for i in range(q + 1):
        z = g1.add_vertex(("z", i))
        for t in range(q - 1):
            g1.add_edge(z, (i + t * (q + 1)) % n)
    check(g1, "G1")

    g2 = g1.copy(name=f"G2_{q}")
    y = g2.add_vertex(("y",))
    for i in range(q + 1):
        g2.add_edge(y, n + i)
    check(g2, "G2")

    g3 = g2.copy(name=f"G3_{q}")
    for j in range(1, q // 2 + 1):
        g3.add_edge(n + j, n + partner(q, j))
    check(g3, "G3")
    return G3Assembly(S, ctx, G, g1, g2, g3, certs)


def expected_stage_edges(q: int, e_g: int) -> dict:
    return {"G1": e_g + q * q - 1, "G2": e_g + q * q + q, "G3": e_g + q * q + q + q // 2}


def phi(asm: G3Assembly, v: int) -> tuple[int, int, int]:
    """Image of a G3 vertex as a normalized point of PG(2, q)."""
    S, F = asm.sidon, asm.ctx.base
    q, n = S.q, S.n
    mu, alpha = asm.ctx.mu, asm.ctx.alpha
    add, sub, neg = F.add, F.sub, F.neg
    if not 0 <= v < asm.g3.n:
        raise UnlabeledVertex(f"vertex {v} not in G3")
    odd = asm.odd
    if v < n:
        i = v % (q + 1)
        if i == 0:
            # v = (q - 1 - t)(q + 1)
            t = (q - 1 - v // (q + 1)) % (q - 1)
            mt = F.power(mu, t)
            pt = (0, 1, sub(mt, 1) if odd else add(mt, 1))
        else:
            t = ((v - S.a(i)) % n) // (q + 1)
            mt, b = F.power(mu, t), S.b(i)
            if odd:
                pt = (1, sub(mt, 1), sub(add(add(neg(mt), alpha), b), asm.delta))
            else:
                pt = (1, add(mt, 1), add(add(b, 1), mt))
    elif v == asm.y:
        pt = (0, 1, neg(1))
    else:
        i = v - n
        if i == 0:
            pt = (0, 0, 1)
        elif odd:
            pt = (1, neg(1), sub(neg(S.b(i)), asm.delta))
        else:
            pt = (1, 1, S.b(i))
    return normalize(F, pt)


def verify_isomorphism(asm: G3Assembly, er: Graph | None = None) -> Certificate:
    """Exhaustive check that phi is an isomorphism G3 -> ER_q (alt form)."""
    q = asm.q
    er = er if er is not None else er_graph(asm.ctx.base, "alt")
    params = {"q": q, "alpha": asm.ctx.alpha, "beta": asm.ctx.beta, "case": "odd" if asm.odd else "even"}
    index = {pt: k for k, pt in enumerate(er.labels)}
    images = [asm.phi(v) for v in range(asm.g3.n)]
    img_idx = [index.get(pt) for pt in images]
    if None in img_idx or len(set(img_idx)) != er.n or asm.g3.n != er.n:
        dup = [v for v in range(len(images)) if images.index(images[v]) != v]
        return Certificate("phi-isomorphism", params, False, {"not_bijective": dup[:5]})
    g3 = asm.g3
    for u, v in itertools.combinations(range(g3.n), 2):
        if g3.has_edge(u, v) != er.has_edge(img_idx[u], img_idx[v]):
            return Certificate(
                "phi-isomorphism",
                params,
                False,
                {"pair": (u, v), "labels": (g3.labels[u], g3.labels[v]), "images": (images[u], images[v])},
            )
    # induced-subgraph restriction on the Cayley vertices
    n = asm.n_cayley
    induced_ok = all(
        asm.g.has_edge(u, v) == er.has_edge(img_idx[u], img_idx[v]) for u, v in itertools.combinations(range(n), 2)
    )
    stats = {"pairs_checked": g3.n * (g3.n - 1) // 2, "induced_pairs_checked": n * (n - 1) // 2}
    return Certificate("phi-isomorphism", params, induced_ok, None, stats)


def adjacency_criterion(S: SidonSet, ctx: ExtFieldCtx, i: int, t1: int, j: int, t2: int) -> bool:
    """Whether (a_i + t1(q+1)) + (a_j + t2(q+1)) lies in A, decided in GF(q).

    The sum lies in A exactly when b_i + b_j = mu^{t1+t2} - alpha.
    """
    q = S.q
    if not (1 <= i <= q and 1 <= j <= q and 0 <= t1 <= q - 2 and 0 <= t2 <= q - 2):
        raise IndexOutOfRange((i, t1, j, t2))
    F = ctx.base
    return F.add(S.b(i), S.b(j)) == F.sub(F.power(ctx.mu, t1 + t2), ctx.alpha)


def partner_sums(S: SidonSet, ctx: ExtFieldCtx) -> list[int]:
    """alpha + b_i + b_{q+1-i} for each i; all zero when the z-pairing is consistent."""
    F = ctx.base
    return [F.add(ctx.alpha, F.add(S.b(i), S.b(partner(S.q, i)))) for i in range(1, S.q + 1)]
