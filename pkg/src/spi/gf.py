"""Exact arithmetic in GF(p^e).

Elements are integer codes 0..q-1: the base-p digits of a code are the
coefficients (low degree first) of a polynomial reduced modulo the field's
defining polynomial.  Codes 0 and 1 are always the zero and one elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

MAX_ORDER = 1 << 16
LOG_TABLE_LIMIT = 1 << 12
DENSE_TABLE_LIMIT = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q == p**e, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 and is_prime(p) else None


# --- polynomials over GF(p): coefficient lists, low degree first -----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    e = len(m) - 1
    if e == 1:
        return True
    if m[0] == 0:
        return False
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(m, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # itertools.product yields tuples with the first (constant) coefficient
    # most significant: exactly the low-degree-first lexicographic order.
    for low in itertools.product(range(p), repeat=e):
        m = list(low) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


@dataclass(frozen=True)
class FieldAut:
    """The Frobenius power a -> a^(p^j)."""

    j: int

    @property
    def is_identity(self) -> bool:
        return self.j == 0


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]
    _exp: tuple[int, ...] | None = field(default=None, repr=False, compare=False)
    _log: tuple[int, ...] | None = field(default=None, repr=False, compare=False)
    add_table: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False, compare=False)
    mul_table: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False, compare=False)
    neg_table: tuple[int, ...] = field(default=(), repr=False, compare=False)
    inv_table: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p ** self.e

    def __str__(self) -> str:
        return f"GF({self.q})"

    # digit codec
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        code = 0
        for d in reversed(list(ds)):
            code = code * self.p + d
        return code

    def check(self, a: int) -> int:
        if not (isinstance(a, int) and 0 <= a < self.q):
            raise FieldError(f"{a!r} is not an element of {self}")
        return a

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return self.add_table[a][b]
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        return self.from_digits((x + y) % p for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return self.mul_table[a][b]
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return _schoolbook_mul(self.p, self.modulus, self.digits(a), self.digits(b), self)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return self.inv_table[a]

    def pow(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def elements(self) -> range:
        return range(self.q)


def _schoolbook_mul(p, modulus, da, db, spec) -> int:
    prod = [0] * (len(da) + len(db) - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    r = _poly_mod(prod, list(modulus), p)
    return spec.from_digits(r + [0] * (spec.e - len(r)))


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    """Build GF(p^e) over the smallest monic irreducible modulus.

    Deterministic: the same (p, e) always yields an identical field.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e!r}")
    q = p ** e
    if q > MAX_ORDER:
        raise FieldError(f"GF({q}) exceeds the supported order {MAX_ORDER}")

    modulus = _smallest_irreducible(p, e)
    bare = FieldSpec(p, e, modulus)

    exp = log = None
    if q <= LOG_TABLE_LIMIT and q > 2:
        exp, log = _log_tables(bare)

    neg = []
    for a in range(q):
        neg.append(bare.from_digits((-d) % p for d in bare.digits(a)))

    spec = FieldSpec(p, e, modulus, _exp=exp, _log=log, neg_table=tuple(neg))
    inv = [0] * q
    if q == 2:
        inv[1] = 1
    elif log is not None:
        for a in range(1, q):
            inv[a] = exp[(-log[a]) % (q - 1)]
    else:
        for a in range(1, q):
            inv[a] = spec.pow(a, q - 2)
    spec = FieldSpec(p, e, modulus, _exp=exp, _log=log, neg_table=tuple(neg), inv_table=tuple(inv))

    if q <= DENSE_TABLE_LIMIT:
        add_t = tuple(tuple(spec.add(a, b) for b in range(q)) for a in range(q))
        mul_t = tuple(tuple(spec.mul(a, b) for b in range(q)) for a in range(q))
        spec = FieldSpec(p, e, modulus, _exp=exp, _log=log, add_table=add_t, mul_table=mul_t,
                         neg_table=tuple(neg), inv_table=tuple(inv))
    return spec


def _log_tables(spec: FieldSpec):
    q = spec.q
    for g in range(2, q):
        exp = [1]
        x = 1
        for _ in range(q - 2):
            x = _schoolbook_mul(spec.p, spec.modulus, spec.digits(x), spec.digits(g), spec)
            if x == 1:
                break
            exp.append(x)
        if len(exp) == q - 1:
            log = [0] * q
            for i, v in enumerate(exp):
                log[v] = i
            return tuple(exp), tuple(log)
    raise FieldError(f"no primitive element found in {spec}")  # pragma: no cover


def primitive_element(spec: FieldSpec) -> int:
    """Smallest generator of the multiplicative group."""
    if spec.q == 2:
        return 1
    for g in range(2, spec.q):
        if len({spec.pow(g, k) for k in range(spec.q - 1)}) == spec.q - 1:
            return g
    raise FieldError("no primitive element")  # pragma: no cover


def arith(spec: FieldSpec, op: str, a: int, b: int) -> int:
    spec.check(a)
    spec.check(b)
    try:
        fn = {"add": spec.add, "sub": spec.sub, "mul": spec.mul}[op]
    except KeyError:
        raise FieldError(f"unknown operation {op!r}") from None
    return fn(a, b)


def inverse(spec: FieldSpec, a: int) -> int:
    return spec.inv(spec.check(a))


def list_auts(spec: FieldSpec) -> list[FieldAut]:
    return [FieldAut(j) for j in range(spec.e)]


def apply_aut(spec: FieldSpec, pi: FieldAut, a: int) -> int:
    if pi.j == 0:
        return a
    return spec.pow(a, spec.p ** pi.j)


def compose_auts(spec: FieldSpec, pi1: FieldAut, pi2: FieldAut) -> FieldAut:
    """pi1 after pi2."""
    return FieldAut((pi1.j + pi2.j) % spec.e)
