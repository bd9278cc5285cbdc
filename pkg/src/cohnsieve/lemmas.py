"""Divisibility constraints on ``k`` for ``(2^k - 1)(3^k - 1) = y^q``, ``q`` an odd prime.

Every inequality that involves logarithms is decided by an equivalent
comparison of integer powers.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

from .arith import Prime, _valuation, primes_up_to
from .errors import InvariantViolation, PreconditionError

SCHEMA = 1
SMALL_PRIMES = (2, 3, 5, 7)

PM1_DIVIDES_K = "pm1-divides-k"
P_EXPONENT_BOUND = "p-exponent-bound"


def _odd_prime(q: int) -> int:
    q = int(Prime(q))
    if q == 2:
        raise PreconditionError(
            "q must be odd (squares are left to the brute-force search with n = 2)"
        )
    return q


@dataclass
class ConstraintSet:
    """Minimum exponent of each prime in ``k`` for a ``q``-th power solution."""

    q: int
    bounds: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for p in self.bounds:
            if p > self.q:
                raise PreconditionError(f"constraint prime {p} exceeds q={self.q}")
        if self.bounds.get(2, self.q - 2) != self.q - 2:
            raise PreconditionError("exponent of 2 must equal q-2")
        for p in (3, 5, 7):
            if self.bounds.get(p, self.q - 1) != self.q - 1:
                raise PreconditionError(f"exponent of {p} must equal q-1")

    def modulus(self) -> int:
        """Expand the product of prime powers. Only sensible for small q."""
        m = 1
        for p, e in self.bounds.items():
            m *= p**e
        return m

    def admits(self, k: int) -> bool:
        return all(_valuation(p, k) >= e for p, e in self.bounds.items())

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "bounds": {str(p): e for p, e in sorted(self.bounds.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConstraintSet":
        return cls(int(d["q"]), {int(p): int(e) for p, e in d["bounds"].items()})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def small_prime_constraints(q: int) -> ConstraintSet:
    """Exponents forced on 2, 3, 5, 7 by the mod-``p^q`` argument.

    ``nu_2(k) >= q - 2`` always; ``nu_p(k) >= q - 1`` for each ``p`` in
    {3, 5, 7} with ``p <= q``.
    """
    q = _odd_prime(q)
    bounds = {2: q - 2}
    for p in (3, 5, 7):
        if p <= q:
            bounds[p] = q - 1
    return ConstraintSet(q, bounds)


def min_large_exponent(p: int, q: int) -> int:
    """Least ``v >= 0`` with ``v > (q - (p - 1) * log 6 / log p) / 2``, for ``p >= 11``.

    ``v`` qualifies iff ``q - 2v <= 0`` or ``p**(q - 2v) < 6**(p - 1)``.
    """
    p = int(Prime(p))
    if p < 11:
        raise PreconditionError("lemma applies to p >= 11 only")
    q = _odd_prime(q)
    cap = 6 ** (p - 1)

    def qualifies(v: int) -> bool:
        return q - 2 * v <= 0 or p ** (q - 2 * v) < cap

    # Float only seeds the search; the exact test walks to the boundary.
    v = max(0, math.floor((q - (p - 1) * math.log(6) / math.log(p)) / 2) + 1)
    while v > 0 and qualifies(v - 1):
        v -= 1
    while not qualifies(v):
        v += 1
    return v


def _lcm_pm1_exponents(q: int) -> Dict[int, int]:
    # exponents of lcm{p - 1 : p prime <= q}
    out: Dict[int, int] = {}
    for p in primes_up_to(q):
        m = int(p) - 1
        for r in primes_up_to(m):
            r = int(r)
            if m % r == 0:
                out[r] = max(out.get(r, 0), _valuation(r, m))
    return out


@lru_cache(maxsize=None)
def _k_lower_bound(q: int) -> Tuple[Tuple[int, int], ...]:
    bounds = dict(small_prime_constraints(q).bounds)
    for p in primes_up_to(q):
        p = int(p)
        if p >= 11:
            bounds[p] = max(1, min_large_exponent(p, q))
    for r, e in _lcm_pm1_exponents(q).items():
        bounds[r] = max(bounds.get(r, 0), e)
    return tuple(sorted(bounds.items()))


def k_lower_bound(q: int) -> ConstraintSet:
    """Factored divisor ``M(q)`` of every ``k`` that could give a ``q``-th power.

    Exponent-wise maximum of the small-prime constraints, the large-prime
    bound (at least 1) for each prime ``11 <= p <= q``, and the exponents of
    ``lcm{p - 1 : p <= q}``.
    """
    q = _odd_prime(q)
    return ConstraintSet(q, dict(_k_lower_bound(q)))


@dataclass(frozen=True)
class Comparison:
    label: str
    lhs: int
    op: str
    rhs: int
    holds: bool

    @classmethod
    def of(cls, label: str, lhs: int, op: str, rhs: int) -> "Comparison":
        return cls(label, lhs, op, rhs, _OPS[op](lhs, rhs))

    def rederive(self) -> bool:
        return _OPS[self.op](self.lhs, self.rhs)


_OPS = {
    "<=": lambda x, y: x <= y,
    "<": lambda x, y: x < y,
    ">=": lambda x, y: x >= y,
    ">": lambda x, y: x > y,
}


@dataclass(frozen=True)
class AuditStep:
    p: int
    claim: str
    exponent: int
    checks: Tuple[Comparison, ...]


@dataclass(frozen=True)
class AuditTrail:
    q: int
    steps: Tuple[AuditStep, ...]

    @property
    def passed(self) -> bool:
        return all(c.holds for s in self.steps for c in s.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "passed": self.passed,
            "steps": [
                {
                    "p": s.p,
                    "claim": s.claim,
                    "exponent": s.exponent,
                    "checks": [
                        {"label": c.label, "lhs": c.lhs, "op": c.op, "rhs": c.rhs, "holds": c.holds}
                        for c in s.checks
                    ],
                }
                for s in self.steps
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AuditTrail":
        steps = tuple(
            AuditStep(
                int(s["p"]),
                s["claim"],
                int(s["exponent"]),
                tuple(
                    Comparison(c["label"], int(c["lhs"]), c["op"], int(c["rhs"]), bool(c["holds"]))
                    for c in s["checks"]
                ),
            )
            for s in d["steps"]
        )
        return cls(int(d["q"]), steps)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def induction_audit(q: int) -> AuditTrail:
    """Replay the induction over primes ``p <= q`` that ends in ``q | k``.

    Each step records exact comparisons showing ``(p - 1) | k`` from the
    exponents already secured for smaller primes, then the exponent secured
    for ``p`` itself. Raises :class:`InvariantViolation` on the first
    comparison that fails.
    """
    q = _odd_prime(q)
    small = small_prime_constraints(q).bounds
    secured: Dict[int, int] = {}
    steps: List[AuditStep] = []

    for p in primes_up_to(q):
        p = int(p)
        checks: List[Comparison] = []
        m = p - 1
        for r in sorted(secured):
            checks.append(Comparison.of(f"nu_{r}({m}) <= secured nu_{r}(k)", _valuation(r, m), "<=", secured[r]))
            if r in SMALL_PRIMES:
                # log(m)/log r <= q - 2, i.e. r^(q-2) >= m
                checks.append(Comparison.of(f"{r}^(q-2) >= {m}", r ** (q - 2), ">=", m))
            elif r * r > q:
                checks.append(Comparison.of(f"{r}^2 > {m}", r * r, ">", m))
            else:
                checks.append(Comparison.of(f"{r}^secured > q", r ** secured[r], ">", q))

        if p in SMALL_PRIMES:
            claim, exponent = P_EXPONENT_BOUND, small[p]
        else:
            claim = PM1_DIVIDES_K
            exponent = max(1, min_large_exponent(p, q))
            # p <= q forces the large-prime bound to be at least 1
            checks.append(Comparison.of(f"{p}^q >= 6^{m}", p**q, ">=", 6**m))
        checks.append(Comparison.of(f"secured nu_{p}(k) >= 1", exponent, ">=", 1))

        for c in checks:
            if not c.holds:
                raise InvariantViolation(f"audit q={q}, step p={p}: {c.label} fails ({c.lhs} {c.op} {c.rhs})")
        secured[p] = exponent
        steps.append(AuditStep(p, claim, exponent, tuple(checks)))

    return AuditTrail(q, tuple(steps))


@dataclass(frozen=True)
class EndgameWitness:
    """The quantities of the final contradiction, for ``q | k``.

    ``Z`` (the would-be root) is never built; ``t`` is held at its least
    possible value 1.
    """

    k: int
    q: int
    a: int
    b: int
    X: int
    Y: int
    t_min: int = 1


def endgame_witness(k: int, q: int) -> EndgameWitness:
    q = _odd_prime(q)
    if k % q:
        raise PreconditionError("endgame requires q | k")
    if k < q:
        raise PreconditionError("requires k >= q")
    X, Y = 2 ** (k // q), 3 ** (k // q)
    return EndgameWitness(k, q, 2**k - 1, 3**k - 1, X, Y)


def endgame_contradiction(k: int, q: int) -> bool:
    """True when ``b < a^2`` and ``q^q (ab)^(q-1) > (a + b + 1)^q`` for a = 2^k-1, b = 3^k-1.

    The second inequality is the root-free form of
    ``q (ab)^((q-1)/q) t > a + b + 1`` at ``t = 1``; the left side only grows
    with ``t``.
    """
    w = endgame_witness(k, q)
    a, b = w.a, w.b
    if not (w.X**q - 1 == a and w.Y**q - 1 == b and 0 < w.X < w.Y):
        raise InvariantViolation(f"endgame witness inconsistent at k={k}, q={q}")
    return b < a * a and q**q * (a * b) ** (q - 1) > (a + b + 1) ** q
