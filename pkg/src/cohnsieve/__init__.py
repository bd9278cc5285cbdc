"""Exact tools for the exponential equation (a^k - 1)(b^k - 1) = x^n."""
from .arith import Prime, ValuationFact, iroot, is_prime, nu, perfect_power, primes_up_to
from .errors import InvariantViolation, PreconditionError
from .lemmas import (
    AuditTrail,
    ConstraintSet,
    EndgameWitness,
    endgame_contradiction,
    endgame_witness,
    induction_audit,
    k_lower_bound,
    min_large_exponent,
    small_prime_constraints,
)
from .lte import lte_valuation, nu_power_minus_one
from .sieve import (
    EquationFamily,
    SearchOutcome,
    SearchReport,
    brute_force_search,
    constraint_filter,
    pruned_search,
    qth_power_filter,
    valuation_filter,
)

__version__ = "0.1.0"
