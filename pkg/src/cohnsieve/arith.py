"""Exact integer primitives: valuations, integer roots, perfect powers, primes.

Everything here works on plain Python ints, which are already unbounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import List, Optional, Tuple

from .errors import PreconditionError

# Deterministic Miller-Rabin witnesses, correct for every n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MAX_PRIME_BITS = 64

DIRECT = "direct"
LTE_ODD = "lte-odd"
LTE_2_ODD_K = "lte-2-odd-k"
LTE_2_EVEN_K = "lte-2-even-k"
DERIVATIONS = (DIRECT, LTE_ODD, LTE_2_ODD_K, LTE_2_EVEN_K)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n < 2:
        return False
    if n.bit_length() > _MAX_PRIME_BITS:
        raise PreconditionError(f"primality check limited to {_MAX_PRIME_BITS}-bit inputs")
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """An int that has passed :func:`is_prime` at construction."""

    def __new__(cls, value: int) -> "Prime":
        if isinstance(value, Prime):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"Prime expects an int, got {type(value).__name__}")
        if value.bit_length() > _MAX_PRIME_BITS:
            raise PreconditionError(f"{value} exceeds the {_MAX_PRIME_BITS}-bit prime limit")
        if not is_prime(value):
            raise PreconditionError(f"{value} is not prime")
        return int.__new__(cls, value)

    @classmethod
    def _trusted(cls, value: int) -> "Prime":
        # Only for values produced by the sieve below.
        return int.__new__(cls, value)

    def __repr__(self) -> str:
        return f"Prime({int(self)})"


@dataclass(frozen=True)
class ValuationFact:
    """``prime ** valuation`` exactly divides ``subject``.

    ``subject`` is ``None`` when it was too large to materialize; the
    valuation is still exact in that case.
    """

    prime: int
    valuation: int
    subject: Optional[int]
    derivation: str = DIRECT

    def __int__(self) -> int:
        return self.valuation

    def check(self) -> bool:
        """Re-derive the fact from ``subject`` by division."""
        if self.subject is None:
            return True
        pv = self.prime ** self.valuation
        return self.subject % pv == 0 and self.subject % (pv * self.prime) != 0


def _valuation(p: int, n: int) -> int:
    # n > 0, p prime. Squaring ladder: divide by p^(2^i) for the largest
    # rungs first so huge n costs O(log v) big divisions.
    if p == 2:
        return (n & -n).bit_length() - 1
    if n % p:
        return 0
    ladder = [p]
    while True:
        top = ladder[-1]
        if top.bit_length() * 2 > n.bit_length() + 1:
            break
        sq = top * top
        if n % sq:
            break
        ladder.append(sq)
    v = 0
    for i in range(len(ladder) - 1, -1, -1):
        q, r = divmod(n, ladder[i])
        if r == 0:
            n = q
            v += 1 << i
    return v


def nu(p: int, n: int) -> ValuationFact:
    """p-adic valuation of a positive integer ``n``."""
    p = Prime(p)
    if n == 0:
        raise PreconditionError("valuation undefined for zero")
    if n < 0:
        raise PreconditionError("valuation expects a positive integer")
    return ValuationFact(int(p), _valuation(int(p), n), n, DIRECT)


def valuation(p: int, n: int) -> int:
    """Shorthand for ``nu(p, n).valuation``; also accepts negative ``n``."""
    if n == 0:
        raise PreconditionError("valuation undefined for zero")
    return _valuation(int(Prime(p)), abs(n))


def iroot(n: int, e: int) -> Tuple[int, bool]:
    """Return ``(floor(n ** (1/e)), exact)`` using integer Newton iteration."""
    if e < 2:
        raise PreconditionError("exponent too small")
    if n < 0:
        raise PreconditionError("iroot expects a nonnegative integer")
    if n < 2:
        return n, True
    if e == 2:
        r = isqrt(n)
        return r, r * r == n
    if e >= n.bit_length():
        # 2**e > n, so the root is 1
        return 1, False
    # Start above the root; Newton from above decreases monotonically to floor.
    x = 1 << -(-n.bit_length() // e)
    while True:
        y = ((e - 1) * x + n // x ** (e - 1)) // e
        if y >= x:
            break
        x = y
    return x, x ** e == n


def _prime_exponents(limit: int) -> List[int]:
    return [int(p) for p in primes_up_to(limit)]


def perfect_power(n: int) -> Optional[Tuple[int, int]]:
    """Return ``(x, e)`` with ``x ** e == n``, x minimal and e maximal, or None."""
    if n <= 1:
        raise PreconditionError("degenerate input")
    base, exp = n, 1
    while True:
        for e in _prime_exponents(base.bit_length()):
            r, exact = iroot(base, e)
            if exact:
                base, exp = r, exp * e
                break
        else:
            break
    if exp == 1:
        return None
    return base, exp


def primes_up_to(limit: int) -> List[Prime]:
    """All primes ``<= limit``, ascending (sieve of Eratosthenes)."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return [Prime._trusted(i) for i, flag in enumerate(sieve) if flag]


def multiplicative_order(c: int, p: int) -> int:
    """Order of ``c`` modulo prime ``p``; ``c`` must be a unit mod ``p``."""
    if c % p == 0:
        raise PreconditionError(f"{c} is not invertible modulo {p}")
    d, x = 1, c % p
    while x != 1:
        x = x * c % p
        d += 1
    return d
