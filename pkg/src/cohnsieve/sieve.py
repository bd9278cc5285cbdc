"""Search for ``(a^k - 1)(b^k - 1) = x^n``: a brute-force oracle and a pruned pipeline.

The brute-force search is ground truth. The pruned search for the family
(2, 3) may only skip work the oracle would also find empty; the test suite
checks that against the oracle.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .arith import Prime, _valuation, iroot
from .errors import PreconditionError
from .lemmas import SCHEMA, k_lower_bound
from .lte import lte_valuation, nu_power_minus_one

log = logging.getLogger(__name__)

SOLUTION = "solution"
PRUNED = "pruned"
EXHAUSTED = "exhausted"
UNRESOLVED = "unresolved-by-budget"

BRUTE = "brute"
PRUNED_MODE = "pruned"

# Exact-root fallback refuses N above this many bits.
FALLBACK_BUDGET_BITS = 10**6
WORKERS_ENV = "COHNSIEVE_WORKERS"


@dataclass(frozen=True)
class EquationFamily:
    a: int
    b: int

    def __post_init__(self):
        if not (2 <= self.a < self.b):
            raise PreconditionError(f"family needs 2 <= a < b, got ({self.a}, {self.b})")

    def value(self, k: int) -> int:
        return (self.a**k - 1) * (self.b**k - 1)

    def bits_estimate(self, k: int) -> int:
        return k * (self.a.bit_length() + self.b.bit_length())


PAPER_FAMILY = EquationFamily(2, 3)


@dataclass(frozen=True)
class Reject:
    """Why a filter ruled out ``k``: ``valuation`` of ``prime`` is incompatible.

    For ``constraint`` rejections ``valuation`` is ``nu_p(k)`` and ``required``
    the minimum exponent; for valuation rejections it is ``nu_p(N)`` and
    ``required`` is the exponent it had to be divisible by.
    """

    filter: str
    prime: int
    valuation: int
    required: int

    def to_dict(self) -> dict:
        return {"filter": self.filter, "prime": self.prime, "actual": self.valuation, "required": self.required}

    @classmethod
    def from_dict(cls, d: dict) -> "Reject":
        return cls(d["filter"], d["prime"], d["actual"], d["required"])


@dataclass(frozen=True)
class Solution:
    k: int
    x: int
    n: int


@dataclass(frozen=True)
class SearchOutcome:
    k: int
    status: str
    q: Optional[int] = None
    reason: Optional[Reject] = None
    reps: Tuple[Tuple[int, int], ...] = ()

    def to_dict(self) -> dict:
        d: dict = {"k": self.k}
        if self.q is not None:
            d["q"] = self.q
        d["status"] = self.status
        if self.reason is not None:
            d["reason"] = self.reason.to_dict()
        if self.reps:
            d["x"], d["n"] = self.reps[0]
            if len(self.reps) > 1:
                d["more"] = [list(r) for r in self.reps[1:]]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SearchOutcome":
        reps: List[Tuple[int, int]] = []
        if "x" in d:
            reps.append((d["x"], d["n"]))
            reps.extend(tuple(r) for r in d.get("more", ()))
        reason = Reject.from_dict(d["reason"]) if "reason" in d else None
        return cls(d["k"], d["status"], d.get("q"), reason, tuple(reps))


@dataclass
class SearchReport:
    family: EquationFamily
    k_max: int
    n_range: Tuple[int, int]
    mode: str
    outcomes: List[SearchOutcome] = field(default_factory=list)
    q_set: Tuple[int, ...] = ()

    @property
    def solutions(self) -> List[Solution]:
        return [Solution(o.k, x, n) for o in self.outcomes if o.status == SOLUTION for x, n in o.reps]

    def counts(self) -> dict:
        out: dict = {}
        for o in self.outcomes:
            out[o.status] = out.get(o.status, 0) + 1
        return dict(sorted(out.items()))

    def fallback_fraction(self) -> float:
        """Share of outcomes that needed the exact root test (or were refused by budget)."""
        if not self.outcomes:
            return 0.0
        reached = sum(o.status != PRUNED for o in self.outcomes)
        return reached / len(self.outcomes)

    def header(self) -> dict:
        h = {
            "schema": SCHEMA,
            "type": "header",
            "family": [self.family.a, self.family.b],
            "k_max": self.k_max,
            "n_range": list(self.n_range),
            "mode": self.mode,
        }
        if self.q_set:
            h["q_set"] = list(self.q_set)
        return h

    def summary(self) -> dict:
        return {
            "type": "summary",
            "counts": self.counts(),
            "solutions": [[s.k, s.x, s.n] for s in self.solutions],
        }

    def to_jsonl(self) -> str:
        lines = [self.header()]
        lines.extend(o.to_dict() for o in self.outcomes)
        lines.append(self.summary())
        return "".join(json.dumps(d, separators=(",", ":")) + "\n" for d in lines)

    @classmethod
    def from_jsonl(cls, text: str) -> "SearchReport":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        head = rows[0]
        if head.get("type") != "header" or head.get("schema") != SCHEMA:
            raise ValueError("not a search report (missing schema header)")
        outcomes = [SearchOutcome.from_dict(r) for r in rows[1:] if "type" not in r]
        return cls(
            EquationFamily(*head["family"]),
            head["k_max"],
            tuple(head["n_range"]),
            head["mode"],
            outcomes,
            tuple(head.get("q_set", ())),
        )

    def to_table(self) -> str:
        fam = self.family
        out = [
            f"# ({fam.a}^k-1)({fam.b}^k-1) = x^n  k<={self.k_max}  n in [{self.n_range[0]}, {self.n_range[1]}]  mode={self.mode}",
            f"{'k':>8}  {'q':>4}  {'status':<22}  detail",
        ]
        for o in self.outcomes:
            if o.reps:
                detail = ", ".join(f"x={x} n={n}" for x, n in o.reps)
            elif o.reason is not None:
                r = o.reason
                detail = f"{r.filter}: p={r.prime} actual={r.valuation} required={r.required}"
            else:
                detail = ""
            q = "" if o.q is None else str(o.q)
            out.append(f"{o.k:>8}  {q:>4}  {o.status:<22}  {detail}".rstrip())
        sols = self.solutions
        out.append(f"# solutions: {len(sols)}" + "".join(f"  (k={s.k}, x={s.x}, n={s.n})" for s in sols))
        return "\n".join(out) + "\n"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise PreconditionError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise PreconditionError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def _chunks(k_max: int, workers: int) -> List[Tuple[int, int]]:
    size = max(1, -(-k_max // (workers * 4)))
    return [(lo, min(k_max, lo + size - 1)) for lo in range(1, k_max + 1, size)]


def _run_chunks(fn, args: tuple, k_max: int, workers: int) -> List[SearchOutcome]:
    # Contiguous k-chunks; results are concatenated in chunk order, so the
    # report is identical for any worker count.
    chunks = _chunks(k_max, workers)
    if workers == 1:
        results = []
        for i, (lo, hi) in enumerate(chunks, 1):
            results.append(fn(*args, lo, hi))
            log.info("k <= %d done (%d/%d chunks)", hi, i, len(chunks))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, *args, lo, hi) for lo, hi in chunks]
            results = []
            for i, f in enumerate(futures, 1):
                results.append(f.result())
                log.info("k <= %d done (%d/%d chunks)", chunks[i - 1][1], i, len(chunks))
    return [o for chunk in results for o in chunk]


def _brute_chunk(family: EquationFamily, exponents: Tuple[int, ...], lo: int, hi: int) -> List[SearchOutcome]:
    out = []
    for k in range(lo, hi + 1):
        N = family.value(k)
        reps = []
        for n in exponents:
            # x >= 2 forces 2^n <= N < 2^bit_length
            if n >= N.bit_length():
                break
            x, exact = iroot(N, n)
            if exact:
                reps.append((x, n))
        out.append(SearchOutcome(k, SOLUTION if reps else EXHAUSTED, reps=tuple(reps)))
    return out


def brute_force_search(
    family: EquationFamily,
    k_max: int,
    n_min: int,
    n_max: int,
    *,
    only: Optional[Iterable[int]] = None,
    workers: int = 1,
) -> SearchReport:
    """Test every ``n`` in ``[n_min, n_max]`` for every ``k <= k_max`` by exact integer roots.

    ``only`` restricts the exponents tried to a subset of the range.
    """
    if k_max < 1:
        raise PreconditionError("k_max must be at least 1")
    if n_min < 2:
        raise PreconditionError("n_min must be at least 2")
    if n_max < n_min:
        raise PreconditionError("n_max must be at least n_min")
    exponents = tuple(range(n_min, n_max + 1))
    if only is not None:
        keep = set(only)
        exponents = tuple(n for n in exponents if n in keep)
    outcomes = _run_chunks(_brute_chunk, (family, exponents), k_max, workers)
    return SearchReport(family, k_max, (n_min, n_max), BRUTE, outcomes)


def _check_q(q: int) -> int:
    q = int(Prime(q))
    if q == 2:
        raise PreconditionError("use brute force for squares")
    return q


def qth_power_filter(k: int, q: int, primes: Sequence[int] = (2, 3)) -> Optional[Reject]:
    """Reject ``k`` when ``(2^k - 1)(3^k - 1)`` cannot be a ``q``-th power.

    A ``q``-th power has every valuation divisible by ``q``. ``nu_2`` comes
    from ``3^k - 1`` alone and ``nu_3`` from ``2^k - 1`` alone (zero for odd
    ``k``). Returns None on pass, which says nothing about being a power.
    ``primes`` may add 5 and/or 7; both are off by default because the
    constraint filter already forces the ``4 | k`` and ``6 | k`` they need.
    """
    q = _check_q(q)
    if k < 1:
        raise PreconditionError("k must be positive")
    for p in primes:
        if p == 2:
            v = lte_valuation(3, 1, k, 2, subject_budget_bits=0).valuation
        elif p == 3:
            v = lte_valuation(4, 1, k // 2, 3, subject_budget_bits=0).valuation if k % 2 == 0 else 0
        elif p in (5, 7):
            v = nu_power_minus_one(2, k, p) + nu_power_minus_one(3, k, p)
        else:
            raise PreconditionError(f"qth_power_filter has no rule for p={p}")
        if v % q:
            return Reject("qth-power", p, v, q)
    return None


def constraint_filter(k: int, q: int) -> Optional[Reject]:
    """Reject ``k`` unless it meets every prime-exponent floor of ``k_lower_bound(q)``."""
    q = _check_q(q)
    if k < 1:
        raise PreconditionError("k must be positive")
    for p, e in k_lower_bound(q).bounds.items():
        v = _valuation(p, k)
        if v < e:
            return Reject("constraint", p, v, e)
    return None


def valuation_filter(family: EquationFamily, k: int, n: int, primes: Sequence[int] = (2, 3, 5, 7)) -> Optional[Reject]:
    """Family-independent filter: ``N = x^n`` needs ``n | nu_p(N)`` for every prime ``p``."""
    if n < 2:
        raise PreconditionError("n must be at least 2")
    for p in primes:
        v = nu_power_minus_one(family.a, k, p) + nu_power_minus_one(family.b, k, p)
        if v % n:
            return Reject("valuation", p, v, n)
    return None


def _exact_test(family: EquationFamily, k: int, q: int, budget_bits: int) -> SearchOutcome:
    if family.bits_estimate(k) > budget_bits:
        return SearchOutcome(k, UNRESOLVED, q)
    x, exact = iroot(family.value(k), q)
    if exact and x >= 2:
        return SearchOutcome(k, SOLUTION, q, reps=((x, q),))
    return SearchOutcome(k, EXHAUSTED, q)


def _pruned_chunk(
    family: EquationFamily, q_set: Tuple[int, ...], budget_bits: int, lo: int, hi: int
) -> List[SearchOutcome]:
    lemma_pipeline = family == PAPER_FAMILY
    out = []
    for k in range(lo, hi + 1):
        for q in q_set:
            if lemma_pipeline:
                reason = constraint_filter(k, q) or qth_power_filter(k, q)
            else:
                reason = valuation_filter(family, k, q)
            if reason is not None:
                out.append(SearchOutcome(k, PRUNED, q, reason))
            else:
                out.append(_exact_test(family, k, q, budget_bits))
    return out


def pruned_search(
    family: EquationFamily,
    k_max: int,
    q_set: Iterable[int],
    *,
    workers: int = 1,
    budget_bits: int = FALLBACK_BUDGET_BITS,
) -> SearchReport:
    """Odd-prime exponents only; one outcome per ``(k, q)``, ascending.

    For the family (2, 3) each pair goes through :func:`constraint_filter`
    then :func:`qth_power_filter`; other families get only
    :func:`valuation_filter`. Survivors are settled by an exact root.
    """
    if k_max < 1:
        raise PreconditionError("k_max must be at least 1")
    qs = tuple(sorted({_check_q(q) for q in q_set}))
    if not qs:
        raise PreconditionError("q_set must be nonempty")
    outcomes = _run_chunks(_pruned_chunk, (family, qs, budget_bits), k_max, workers)
    return SearchReport(family, k_max, (qs[0], qs[-1]), PRUNED_MODE, outcomes, qs)
