"""Exit criteria. Each test records one PASS/FAIL line, shown in the pytest summary."""
import json
import math
import time

import pytest

from conftest import ACCEPTANCE_LINES
from cohnsieve.arith import nu, primes_up_to
from cohnsieve.lemmas import AuditTrail, endgame_contradiction, induction_audit, min_large_exponent
from cohnsieve.lte import lte_valuation
from cohnsieve.sieve import EquationFamily, Solution, brute_force_search, pruned_search, valuation_filter


@pytest.fixture
def criterion():
    state = {}

    def record(name, ok, detail=""):
        state["line"] = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else "")
        print(state["line"])
        return ok

    yield record
    if "line" in state:
        ACCEPTANCE_LINES.append(state["line"])


def timed(fn):
    t = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - t


def test_ac1_no_solutions_for_2_3(criterion):
    report, secs = timed(lambda: brute_force_search(EquationFamily(2, 3), 40, 2, 20))
    ok = report.solutions == [] and len(report.outcomes) == 40 and secs < 10
    assert criterion("AC1 brute (2,3) k<=40 n in [2,20]: zero solutions, <10s", ok, f"{secs:.2f}s")


def test_ac2_oracle_finds_known_solutions(criterion):
    s25 = brute_force_search(EquationFamily(2, 5), 20, 2, 2).solutions
    s35 = brute_force_search(EquationFamily(3, 5), 20, 2, 10).solutions
    ok = [(s.k, s.x) for s in s25] == [(1, 2)] and Solution(1, 2, 3) in s35
    assert criterion("AC2 oracle: (2,5) n=2 -> {(1,2)}; (3,5) contains (1,2,3)", ok, f"(2,5)={s25} (3,5)={s35}")


def test_ac3_lte_matches_direct_valuation(criterion):
    def scan():
        checked = mismatches = 0
        for p in (2, 3, 5, 7, 11, 13):
            for a in range(-30, 31):
                for b in range(-30, 31):
                    if a == b or (a - b) % p or a % p == 0 or b % p == 0:
                        continue
                    for k in range(1, 13):
                        d = a**k - b**k
                        if d == 0:
                            continue
                        checked += 1
                        if lte_valuation(a, b, k, p).valuation != nu(p, abs(d)).valuation:
                            mismatches += 1
        return checked, mismatches

    (checked, mismatches), secs = timed(scan)
    ok = checked > 0 and mismatches == 0 and secs < 30
    assert criterion("AC3 LTE == direct nu, |a|,|b|<=30, k<=12", ok, f"{checked} cases, {mismatches} mismatches, {secs:.2f}s")


def test_ac4_lemma2_scan(criterion):
    def scan():
        violations = 0
        for q in (3, 5, 7):
            for k in range(1, 5001):
                v = lte_valuation(3, 1, k, 2, subject_budget_bits=0).valuation
                if v % q == 0 and nu(2, k).valuation < q - 2:
                    violations += 1
        return violations

    violations, secs = timed(scan)
    ok = violations == 0 and secs < 5
    assert criterion("AC4 q | nu_2(3^k-1) => nu_2(k) >= q-2, k<=5000", ok, f"{violations} violations, {secs:.2f}s")


def test_ac5_pruning_soundness(criterion):
    qs = [3, 5, 7, 11]
    f23 = EquationFamily(2, 3)
    pruned = pruned_search(f23, 2000, qs)
    brute = brute_force_search(f23, 2000, 3, 11, only=qs)
    same_23 = pruned.solutions == brute.solutions == []

    f35 = EquationFamily(3, 5)
    oracle = brute_force_search(f35, 200, 2, 20)
    kept = all(valuation_filter(f35, s.k, s.n) is None for s in oracle.solutions)
    odd = [s for s in oracle.solutions if s.n in qs]
    same_35 = pruned_search(f35, 200, qs).solutions == odd
    ok = same_23 and kept and same_35 and len(oracle.solutions) > 0
    detail = f"(2,3) pruned={len(pruned.solutions)} brute={len(brute.solutions)}; (3,5) oracle={oracle.solutions}"
    assert criterion("AC5 pruned == brute on (2,3); generic filters keep (3,5) solutions", ok, detail)


def test_ac6_exact_bound_vs_float(criterion):
    disagreements = compared = 0
    for p in primes_up_to(200):
        if p < 11:
            continue
        for q in primes_up_to(200)[1:]:
            f = 0.5 * (q - (p - 1) * math.log(6) / math.log(p))
            if abs(f - round(f)) <= 1e-6:
                continue
            compared += 1
            if min_large_exponent(p, q) != max(0, math.floor(f) + 1):
                disagreements += 1
    spots = min_large_exponent(11, 11) == 2 and min_large_exponent(13, 13) == 3
    ok = disagreements == 0 and spots and compared > 0
    assert criterion("AC6 min_large_exponent exact == float, 11<=p<=200, q<=200", ok, f"{compared} pairs, {disagreements} disagreements")


def test_ac7_endgame(criterion):
    def scan():
        return [(k, q) for q in (3, 5, 7, 11, 13) for k in range(q, 201, q) if not endgame_contradiction(k, q)]

    failures, secs = timed(scan)
    ok = failures == [] and secs < 5
    assert criterion("AC7 endgame inequality, odd q<=13, q|k, k<=200", ok, f"failures={failures}, {secs:.2f}s")


def test_ac8_induction_audit(criterion):
    bad = []
    for q in primes_up_to(101)[1:]:
        trail = induction_audit(q)
        again = AuditTrail.from_dict(json.loads(trail.to_json()))
        if not (trail.passed and again == trail and again.to_json() == trail.to_json()):
            bad.append(int(q))
    assert criterion("AC8 induction audit passes and round-trips, odd q<=101", bad == [], f"bad={bad}")
