"""Table-driven arithmetic in GF(p^m) and in its quadratic extension GF(q^2).

Base-field elements are integers 0..q-1 read as base-p coefficient vectors
(digit k is the coefficient of x^k).  Extension elements are pairs (c0, c1)
standing for c0 + c1*theta, where theta^2 = alpha*theta + beta.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

MAX_DEGREE = int(os.environ.get("SIDONPOLAR_MAX_DEGREE", "4"))
MAX_Q = int(os.environ.get("SIDONPOLAR_MAX_Q", "64"))


class FieldError(ValueError):
    pass


class NonPrime(FieldError):
    pass


class NotPrimePower(FieldError):
    pass


class DegreeTooLarge(FieldError):
    pass


class NoPrimitiveQuadratic(FieldError):
    pass


class ZeroHasNoLog(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q == p**m, by trial factorization."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
        if p * p > q:
            p = q
            break
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, m


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(x % p)
        x //= p
    return out


def _from_digits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _monics(deg: int, p: int):
    """All monic polynomials of the given degree, as low-to-high coefficient lists."""
    for low in itertools.product(range(p), repeat=deg):
        yield list(low) + [1]


def reducible_monics(deg: int, p: int) -> set[tuple[int, ...]]:
    """Every monic degree-`deg` polynomial that factors into lower-degree monics."""
    red = set()
    for d in range(1, deg // 2 + 1):
        for f in _monics(d, p):
            for g in _monics(deg - d, p):
                red.add(tuple(_polymul(f, g, p)))
    return red


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over Z_p.

    Coefficients are compared low-to-high, i.e. (c0, c1, ..., c_{m-1}).
    For m == 1 this is plain x.
    """
    red = reducible_monics(m, p)
    for f in _monics(m, p):
        if tuple(f) not in red:
            return tuple(f)
    raise FieldError(f"no irreducible of degree {m} over Z_{p}")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(p^m) with full addition/multiplication tables."""

    p: int
    m: int
    modulus: tuple[int, ...]
    add_table: tuple[tuple[int, ...], ...] = field(repr=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False)
    neg_table: tuple[int, ...] = field(repr=False)
    inv_table: tuple[int | None, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        r = self.inv_table[a]
        if r is None:
            raise ZeroDivisionError("0 has no inverse")
        return r

    def power(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = self.mul_table[r][a]
        return r

    def from_int(self, k: int) -> int:
        """Image of the integer k under Z -> GF(q)."""
        return k % self.p

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q}, modulus={self.modulus})"


def build_base_field(p: int, m: int = 1, max_degree: int | None = None) -> FieldCtx:
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    cap = MAX_DEGREE if max_degree is None else max_degree
    if m < 1 or m > cap:
        raise DegreeTooLarge(f"degree {m} outside 1..{cap}")
    modulus = smallest_irreducible(p, m) if m > 1 else (0, 1)
    q = p**m
    digits = [_digits(x, p, m) for x in range(q)]

    add = tuple(
        tuple(_from_digits([(a + b) % p for a, b in zip(digits[x], digits[y])], p) for y in range(q))
        for x in range(q)
    )

    def reduce(poly):
        poly = list(poly)
        for k in range(len(poly) - 1, m - 1, -1):
            c = poly[k]
            if c:
                # x^k = x^(k-m) * (x^m) and x^m = -(modulus low part)
                for j in range(m):
                    poly[k - m + j] = (poly[k - m + j] - c * modulus[j]) % p
                poly[k] = 0
        return poly[:m] + [0] * (m - len(poly[:m]))

    mul = tuple(
        tuple(_from_digits(reduce(_polymul(digits[x], digits[y], p)), p) for y in range(q))
        for x in range(q)
    )
    neg = tuple(next(y for y in range(q) if add[x][y] == 0) for x in range(q))
    inv = tuple(None if x == 0 else next(y for y in range(q) if mul[x][y] == 1) for x in range(q))
    return FieldCtx(p, m, modulus, add, mul, neg, inv)


def field_for_q(q: int, max_q: int | None = None) -> FieldCtx:
    cap = MAX_Q if max_q is None else max_q
    p, m = prime_power(q)
    if q > cap:
        raise DegreeTooLarge(f"q={q} exceeds cap {cap}")
    return build_base_field(p, m)


def subfield(base: FieldCtx, order: int) -> list[int]:
    """Elements of the subfield of GF(q) with `order` elements (fixed by x -> x^order)."""
    return [x for x in base.elements if base.power(x, order) == x]


@dataclass(frozen=True, eq=False)
class ExtFieldCtx:
    """GF(q^2) = GF(q)[theta] with theta primitive, plus power/log tables."""

    base: FieldCtx
    alpha: int
    beta: int
    pow_table: tuple[tuple[int, int], ...] = field(repr=False)
    dlog_table: dict = field(repr=False)

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def order(self) -> int:
        return self.q * self.q - 1

    @property
    def mu(self) -> int:
        """theta^{-(q+1)}, which lies in the base field."""
        c0, c1 = self.pow(-(self.q + 1))
        assert c1 == 0
        return c0

    def mul(self, x, y):
        return ext_mul(self.base, self.alpha, self.beta, x, y)

    def add(self, x, y):
        F = self.base
        return (F.add(x[0], y[0]), F.add(x[1], y[1]))

    def sub(self, x, y):
        F = self.base
        return (F.sub(x[0], y[0]), F.sub(x[1], y[1]))

    def pow(self, a: int) -> tuple[int, int]:
        return self.pow_table[a % self.order]

    def dlog(self, x) -> int:
        x = tuple(x)
        if x == (0, 0):
            raise ZeroHasNoLog("0 has no discrete log")
        return self.dlog_table[x]

    def describe(self) -> dict:
        return {
            "p": self.base.p,
            "m": self.base.m,
            "q": self.q,
            "modulus": list(self.base.modulus),
            "alpha": self.alpha,
            "beta": self.beta,
            "theta_order": len(self.pow_table),
        }


def ext_mul(F: FieldCtx, alpha: int, beta: int, x, y):
    a0, a1 = x
    b0, b1 = y
    hi = F.mul(a1, b1)
    c0 = F.add(F.mul(a0, b0), F.mul(hi, beta))
    c1 = F.add(F.add(F.mul(a0, b1), F.mul(a1, b0)), F.mul(hi, alpha))
    return (c0, c1)


def theta_powers(F: FieldCtx, alpha: int, beta: int) -> list[tuple[int, int]] | None:
    """Powers theta^0, theta^1, ... up to the first repeat of 1; None if theta is not primitive."""
    n = F.q * F.q - 1
    one = (1, 0)
    x = one
    out = []
    for _ in range(n):
        out.append(x)
        x = ext_mul(F, alpha, beta, x, (0, 1))
        if x == one:
            break
    if x != one or len(out) != n:
        return None
    return out


def quadratic_ext(F: FieldCtx, alpha: int, beta: int) -> ExtFieldCtx:
    powers = theta_powers(F, alpha, beta)
    if powers is None:
        raise NoPrimitiveQuadratic(f"theta^2 = {alpha}*theta + {beta} is not a primitive quadratic over GF({F.q})")
    dlog = {x: a for a, x in enumerate(powers)}
    return ExtFieldCtx(F, alpha, beta, tuple(powers), dlog)


def find_primitive_quadratic(F: FieldCtx) -> ExtFieldCtx:
    # even q: theta^2 = theta + beta (alpha fixed to 1)
    alphas = [1] if F.p == 2 else list(F.elements)
    for alpha in alphas:
        for beta in range(1, F.q):
            if theta_powers(F, alpha, beta) is not None:
                return quadratic_ext(F, alpha, beta)
    raise NoPrimitiveQuadratic(f"no primitive quadratic over GF({F.q})")


def extension_for_q(q: int, alpha: int | None = None, beta: int | None = None) -> ExtFieldCtx:
    F = field_for_q(q)
    if alpha is None and beta is None:
        return find_primitive_quadratic(F)
    if alpha is None or beta is None:
        raise FieldError("alpha and beta must be given together")
    if not (0 <= alpha < q and 0 <= beta < q):
        raise FieldError("alpha, beta must be field elements 0..q-1")
    return quadratic_ext(F, alpha, beta)
