"""Lifting-the-exponent: closed-form valuations of ``a**k - b**k``."""
from __future__ import annotations

from .arith import (
    LTE_2_EVEN_K,
    LTE_2_ODD_K,
    LTE_ODD,
    Prime,
    ValuationFact,
    _valuation,
    multiplicative_order,
)
from .errors import PreconditionError

DEFAULT_SUBJECT_BUDGET_BITS = 1 << 20


def lte_valuation(
    a: int,
    b: int,
    k: int,
    p: int,
    *,
    subject_budget_bits: int = DEFAULT_SUBJECT_BUDGET_BITS,
) -> ValuationFact:
    """Valuation of ``|a**k - b**k|`` at ``p``, given ``p | a - b`` and ``p`` coprime to ``ab``.

    The subject is materialized only when its size estimate fits within
    ``subject_budget_bits``; the returned valuation never depends on it.
    """
    p = int(Prime(p))
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    if a == b:
        raise PreconditionError("a equals b, so a^k - b^k is zero")
    if (a - b) % p:
        raise PreconditionError("p does not divide a-b")
    if a % p == 0:
        raise PreconditionError("p divides a")
    if b % p == 0:
        raise PreconditionError("p divides b")

    if p != 2:
        v = _valuation(p, abs(a - b)) + _valuation(p, k)
        tag = LTE_ODD
    elif k % 2:
        v = _valuation(2, abs(a - b))
        tag = LTE_2_ODD_K
    else:
        if a == -b:
            raise PreconditionError("a^k - b^k is zero (a = -b, k even)")
        v = _valuation(2, abs(a * a - b * b)) + _valuation(2, k // 2)
        tag = LTE_2_EVEN_K

    size = k * max(abs(a).bit_length(), abs(b).bit_length())
    subject = abs(a**k - b**k) if size <= subject_budget_bits else None
    return ValuationFact(p, v, subject, tag)


def nu_power_minus_one(c: int, k: int, p: int) -> int:
    """Valuation of ``c**k - 1`` at ``p`` for ``c >= 2``, ``k >= 1``, without forming ``c**k``.

    Reduces to :func:`lte_valuation` through the multiplicative order of
    ``c`` modulo ``p`` (for ``p = 2``, ``c`` odd, directly).
    """
    p = int(Prime(p))
    if c < 2 or k < 1:
        raise PreconditionError("need c >= 2 and k >= 1")
    if c % p == 0:
        return 0
    if p == 2:
        return lte_valuation(c, 1, k, 2, subject_budget_bits=0).valuation
    d = multiplicative_order(c, p)
    if k % d:
        return 0
    return lte_valuation(c**d, 1, k // d, p, subject_budget_bits=0).valuation
