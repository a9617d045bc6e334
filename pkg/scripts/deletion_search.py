#!/usr/bin/env python3
"""Local search over (q+2)-vertex deletions of ER_q, maximising the edges kept.

Deleting S leaves e(ER_q) - sum(deg S) + e(S) edges, so the score of S is
e(S) - sum(deg S).  Used to probe how far the subfield construction is from
the best deletion of the same size.
"""
import argparse
import math
import random
from fractions import Fraction
from math import isqrt

from sidonpolar.fields import field_for_q
from sidonpolar.graphs import er_graph, subfield_bound, subfield_construction, subfield_params


def score(G, S):
    mask = 0
    for v in S:
        mask |= 1 << v
    inner = sum((G.rows[v] & mask).bit_count() for v in S) // 2
    return inner - sum(G.degree(v) for v in S)


def anneal(G, k, moves, rng, t0=2.0):
    S = rng.sample(range(G.n), k)
    cur = best = score(G, S)
    best_S = list(S)
    for step in range(moves):
        temp = t0 * (1 - step / moves) + 1e-3
        i = rng.randrange(k)
        v = rng.randrange(G.n)
        if v in S:
            continue
        old = S[i]
        S[i] = v
        new = score(G, S)
        if new >= cur or rng.random() < math.exp((new - cur) / temp):
            cur = new
            if cur > best:
                best, best_S = cur, list(S)
        else:
            S[i] = old
    return best, sorted(best_S)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=9)
    ap.add_argument("--restarts", type=int, default=30)
    ap.add_argument("--moves", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    q = args.q
    r = isqrt(q)
    G = er_graph(field_for_q(q), "dot")
    e0 = G.edge_count()
    out, rep = subfield_construction(*subfield_params(q))
    rng = random.Random(args.seed)
    best = -10**9
    for _ in range(args.restarts):
        s, S = anneal(G, q + 2, args.moves, rng)
        best = max(best, s)
    print(f"q={q}  e(ER_q)={e0}")
    print(f"subfield construction: {out.edge_count()} edges")
    print(f"closed form q^3/2 + q^(3/2)/2 - 5q/2 + 3 sqrt(q)/2 = {Fraction(q**3 + r**3 - 5 * q + 3 * r, 2)}")
    print(f"target bound: {subfield_bound(q)}")
    print(f"best deletion found by annealing: {e0 + best} edges")


if __name__ == "__main__":
    main()
