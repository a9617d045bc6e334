"""Bose-Chowla Sidon sets A(q, theta) in Z_{q^2-1} and the Lindstrom shift data."""
from __future__ import annotations

from dataclasses import dataclass, field

from .fields import ExtFieldCtx


class SidonError(ValueError):
    pass


class InternalSizeMismatch(SidonError):
    pass


class LabelCollision(SidonError):
    pass


class OddQNoSpecialVertex(SidonError):
    pass


@dataclass(frozen=True)
class Label:
    i: int  # residue mod q+1, in 1..q
    m: int  # a_i = i + m*(q+1)
    b: int  # theta^{a_i} = theta + b

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.i, self.m, self.b)


@dataclass(frozen=True, eq=False)
class SidonSet:
    q: int
    elements: tuple[int, ...]
    labels: tuple[Label, ...] = field(repr=False)
    ctx: ExtFieldCtx | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.q * self.q - 1

    @property
    def H(self) -> list[int]:
        return [t * (self.q + 1) for t in range(self.q - 1)]

    def a(self, i: int) -> int:
        """The element a_i with residue i mod q+1."""
        return self.labels[i - 1].i + self.labels[i - 1].m * (self.q + 1)

    def b(self, i: int) -> int:
        return self.labels[i - 1].b

    def m(self, i: int) -> int:
        return self.labels[i - 1].m

    def __contains__(self, x: int) -> bool:
        return x % self.n in self._members

    @property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def mask(self) -> int:
        """Bitmask of A over Z_n."""
        out = 0
        for a in self.elements:
            out |= 1 << a
        return out

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "A": list(self.elements),
            "labels": [lab.as_tuple() for lab in self.labels],
            "H": self.H,
        }


def canonical_labels(elements, q: int, ctx: ExtFieldCtx | None = None) -> list[Label]:
    """Label each a in A as (i, m_i, b_i) with a = i + m_i(q+1), sorted by i.

    Raises LabelCollision if two elements share a residue mod q+1, or an element is
    divisible by q+1.
    """
    by_res: dict[int, int] = {}
    for a in elements:
        i = a % (q + 1)
        if i == 0 or i in by_res:
            raise LabelCollision(f"element {a} has residue {i} mod {q + 1}")
        by_res[i] = a
    out = []
    for i in sorted(by_res):
        a = by_res[i]
        b = -1
        if ctx is not None:
            c0, c1 = ctx.pow(a)
            if c1 != 1:
                raise LabelCollision(f"theta^{a} - theta is not in the base field")
            b = c0
        out.append(Label(i, a // (q + 1), b))
    return out


def bose_chowla(ctx: ExtFieldCtx) -> SidonSet:
    q = ctx.q
    A = tuple(a for a, (_, c1) in enumerate(ctx.pow_table) if c1 == 1)
    if len(A) != q:
        raise InternalSizeMismatch(f"|A| = {len(A)}, expected {q}")
    return SidonSet(q, A, tuple(canonical_labels(A, q, ctx)), ctx)


def verify_sidon(A, n: int):
    """Return (True, None) if all sums a+b (a <= b) are distinct mod n.

    Otherwise (False, ((a, b), (c, d))) for the smallest colliding sum.
    """
    A = sorted(set(x % n for x in A))
    seen: list = [None] * n
    collisions = {}
    for x, a in enumerate(A):
        for b in A[x:]:
            s = (a + b) % n
            if seen[s] is None:
                seen[s] = (a, b)
            elif s not in collisions:
                collisions[s] = (seen[s], (a, b))
    if collisions:
        return False, collisions[min(collisions)]
    return True, None


def difference_set(A, n: int) -> set[int]:
    return {(a - b) % n for a in A for b in A}


def difference_spectrum(S: SidonSet) -> dict:
    """Compare A - A with Z_n minus the nonzero multiples of q+1."""
    q, n = S.q, S.n
    diffs = difference_set(S.elements, n)
    expected = set(range(n)) - {t * (q + 1) for t in range(1, q - 1)}
    return {
        "ok": diffs == expected,
        "missing": sorted(expected - diffs),
        "extra": sorted(diffs - expected),
    }


@dataclass(frozen=True)
class LindstromData:
    q: int
    c: int
    B: tuple[int, ...]
    shift_ok: bool  # A - c == B
    frobenius_ok: bool  # p*B == B
    x_special: int | None = None
    special_ok: bool | None = None  # x + 2^{2k-1} A == A

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "B": list(self.B),
            "A_minus_c_eq_B": self.shift_ok,
            "pB_eq_B": self.frobenius_ok,
            "x_special": self.x_special,
            "x_plus_halfA_eq_A": self.special_ok,
        }


def two_power_exponent(q: int) -> int | None:
    """k with q == 2**k, or None."""
    if q < 2 or q & (q - 1):
        return None
    return q.bit_length() - 1


def halving_multiplier(q: int) -> int:
    """2^{2k-1} for q = 2^k; the inverse of 2 modulo q^2-1."""
    k = two_power_exponent(q)
    if k is None:
        raise OddQNoSpecialVertex(f"q={q} is not a power of 2")
    return 2 ** (2 * k - 1)


def lindstrom_shift(ctx: ExtFieldCtx, S: SidonSet, want_special: bool | None = None) -> LindstromData:
    q, n, p = ctx.q, ctx.order, ctx.base.p
    if want_special is None:
        want_special = two_power_exponent(q) is not None
    elif want_special and two_power_exponent(q) is None:
        raise OddQNoSpecialVertex(f"special vertex only exists for q a power of 2, got {q}")

    # theta^c + theta = theta^q; theta^q != theta for primitive theta
    c = ctx.dlog(ctx.sub(ctx.pow(q), (0, 1)))
    # B = {b : theta^b + theta^{bq} = -1}, i.e. trace(theta^b) = -1; in
    # characteristic 2 this is theta^b + theta^{bq} = 1.
    minus_one = (ctx.base.neg(1), 0)
    B = tuple(b for b in range(n) if ctx.add(ctx.pow(b), ctx.pow(b * q)) == minus_one)
    Bset = set(B)
    shift_ok = {(a - c) % n for a in S.elements} == Bset
    frob_ok = {(p * b) % n for b in B} == Bset

    x = special_ok = None
    if want_special:
        h = halving_multiplier(q)
        x = (c - h * c) % n
        special_ok = {(x + h * a) % n for a in S.elements} == set(S.elements)
    return LindstromData(q, c, B, shift_ok, frob_ok, x, special_ok)
