"""Exact maximum independent set by branch and bound over bitset rows.

Independent sets of G are cliques of the complement; we run a greedy-colouring
bounded clique search on the complement.  Vertices are processed max-degree-first
(degree in G), ties broken by index.
"""
from __future__ import annotations

import os

from .graphs import bits

MIS_BUDGET = int(os.environ.get("SIDONPOLAR_MIS_BUDGET", "2000000"))


class BudgetExceeded(RuntimeError):
    pass


def greedy_independent(rows, n: int, order=None) -> list[int]:
    chosen, blocked = [], 0
    for v in order if order is not None else range(n):
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= rows[v] | (1 << v)
    return chosen


def exact_mis(rows, n: int, budget: int | None = None) -> tuple[int, list[int], bool]:
    """Return (size, witness, exact).

    `exact` is False when the node budget ran out; the witness is then the best
    independent set found so far.
    """
    if n == 0:
        return 0, [], True
    budget = MIS_BUDGET if budget is None else budget
    perm = sorted(range(n), key=lambda v: (-rows[v].bit_count(), v))
    pos = {v: k for k, v in enumerate(perm)}
    full = (1 << n) - 1
    # complement adjacency in permuted coordinates
    comp = []
    for v in perm:
        r = 0
        for w in bits(rows[v]):
            r |= 1 << pos[w]
        comp.append(full & ~r & ~(1 << pos[v]))

    local_rows = [full & ~comp[k] & ~(1 << k) for k in range(n)]
    best = greedy_independent(local_rows, n)
    nodes = 0

    def colour_order(P):
        order = []
        colour = 0
        U = P
        while U:
            colour += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                U ^= low
                Q ^= low
                Q &= ~comp[v]
                order.append((v, colour))
        return order

    def expand(R, P):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded
        for v, c in reversed(colour_order(P)):
            if len(R) + c <= len(best):
                return
            R.append(v)
            newP = P & comp[v]
            if newP:
                expand(R, newP)
            elif len(R) > len(best):
                best[:] = R
            R.pop()
            P &= ~(1 << v)

    exact = True
    try:
        expand([], full)
    except BudgetExceeded:
        exact = False
    witness = sorted(perm[k] for k in best)
    return len(witness), witness, exact
