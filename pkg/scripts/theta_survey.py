#!/usr/bin/env python3
"""For each q, try every primitive theta^2 = alpha*theta + beta and compare the
resulting Cayley sum graphs: edge count, saturation, the phi certificate, and
whether the graphs are pairwise isomorphic (networkx VF2, small q only)."""
import argparse

import networkx as nx

from sidonpolar.analysis import is_c4_saturated
from sidonpolar.fields import NoPrimitiveQuadratic, field_for_q, quadratic_ext
from sidonpolar.graphs import cayley_sum_graph
from sidonpolar.iso import build_g3, verify_isomorphism
from sidonpolar.sidon import bose_chowla


def to_nx(G):
    h = nx.Graph()
    h.add_nodes_from(range(G.n))
    h.add_edges_from(G.edges())
    return h


def survey(q, iso_cap):
    F = field_for_q(q)
    rows, graphs = [], []
    for alpha in range(q):
        for beta in range(1, q):
            try:
                ctx = quadratic_ext(F, alpha, beta)
            except NoPrimitiveQuadratic:
                continue
            S = bose_chowla(ctx)
            G, _ = cayley_sum_graph(S)
            sat = bool(is_c4_saturated(G))
            iso = bool(verify_isomorphism(build_g3(G, S, ctx))) if (q % 2 or alpha == 1) else None
            rows.append((alpha, beta, G.edge_count(), sat, iso))
            graphs.append(to_nx(G))
    classes = None
    if q <= iso_cap:
        classes = []
        for g in graphs:
            for c in classes:
                if nx.is_isomorphic(g, c[0]):
                    c.append(g)
                    break
            else:
                classes.append([g])
    return rows, classes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="*", default=[3, 4, 5, 7, 8, 9])
    ap.add_argument("--iso-cap", type=int, default=9, help="largest q for pairwise isomorphism classes")
    args = ap.parse_args()
    for q in args.q:
        rows, classes = survey(q, args.iso_cap)
        print(f"q={q}: {len(rows)} primitive thetas")
        for alpha, beta, e, sat, iso in rows:
            print(f"  alpha={alpha} beta={beta}  edges={e}  saturated={sat}  phi={iso}")
        if classes is not None:
            print(f"  isomorphism classes of G_(q,theta): {len(classes)} (sizes {[len(c) for c in classes]})")


if __name__ == "__main__":
    main()
