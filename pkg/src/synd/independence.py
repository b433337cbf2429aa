"""Multiplicative independence of growth rates and the density classifier
for pairs of growth types.

Two rates are multiplicatively independent when no positive powers agree.
A pair of growth types (d, alpha), (e, beta) makes the ratio set
{alpha^n n^d / (beta^m m^e)} dense in the positive reals exactly when one
of three conditions holds; the classifier reports which one, or a
certified dependence witness when none does.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .errors import RateUnresolved
from .growth import (GrowthType, compare_rates, letter_growth,
                     substitution_growth)

DEFAULT_K_MAX = 24

INDEPENDENT_CASE_1 = "independent-case-1"
INDEPENDENT_CASE_2 = "independent-case-2"
INDEPENDENT_CASE_3 = "independent-case-3"
DEPENDENT = "dependent"
UNKNOWN = "unknown"

_INDEPENDENT = {INDEPENDENT_CASE_1, INDEPENDENT_CASE_2, INDEPENDENT_CASE_3}


@dataclass(frozen=True)
class IndependenceVerdict:
    """Classifier outcome.

    ``witness`` carries (k, l) with alpha^k = beta^l for dependent pairs;
    ``bound`` records the search bound when independence is only
    established up to bounded exponents; ``reason`` explains unknowns.
    """

    status: str
    witness: tuple = None
    bound: int = None
    reason: str = None
    notes: tuple = field(default=())

    @property
    def independent(self):
        return self.status in _INDEPENDENT

    def to_json(self):
        out = {"status": self.status, "independent": self.independent}
        if self.witness is not None:
            out["witness"] = {"k": self.witness[0], "l": self.witness[1]}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.reason:
            out["reason"] = self.reason
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _prime_signature(m):
    return dict(sympy.factorint(m))


def _integer_dependence(a, b):
    """Minimal positive (k, l) with a^k = b^l, or None, for integers >= 1."""
    if a == 1 and b == 1:
        return (1, 1)
    if a == 1 or b == 1:
        return None
    ea, eb = _prime_signature(a), _prime_signature(b)
    if set(ea) != set(eb):
        return None
    ratio = None
    for p, exponent in ea.items():
        current = Fraction(exponent, eb[p])
        if ratio is None:
            ratio = current
        elif current != ratio:
            return None
    k, l = ratio.denominator, ratio.numerator
    assert a ** k == b ** l
    return (k, l)


def multiplicatively_independent(alpha, beta, k_max=DEFAULT_K_MAX):
    """Decide whether alpha^k = beta^l forces k = 0 or l = 0.

    Exact-integer pairs are decided completely through prime signatures.
    Algebraic rates are searched up to ``k_max`` on both exponents; a
    candidate coincidence is confirmed only by an exact common factor of
    the characteristic polynomials of the corresponding matrix powers,
    and a clean search returns independence up to the recorded bound.
    """
    if alpha.kind == "zero" or beta.kind == "zero":
        raise RateUnresolved("zero rates have no multiplicative structure")
    ia, ib = alpha.exact_integer(), beta.exact_integer()
    if ia is not None and ib is not None:
        witness = _integer_dependence(ia, ib)
        if witness is not None:
            return IndependenceVerdict(DEPENDENT, witness=witness)
        return IndependenceVerdict(INDEPENDENT_CASE_1)
    for total in range(2, 2 * k_max + 1):
        for k in range(max(1, total - k_max), min(k_max, total - 1) + 1):
            l = total - k
            pa = alpha.pow(k)
            pb = beta.pow(l)
            if compare_rates(pa, pb) == 0:
                return IndependenceVerdict(DEPENDENT, witness=(k, l))
    return IndependenceVerdict(INDEPENDENT_CASE_1, bound=k_max)


def independent_growth_types(g1, g2, k_max=DEFAULT_K_MAX,
                             strict_paper=False):
    """Density classification of the pair of growth types.

    Case 1: both rates exceed one and are multiplicatively independent.
    Case 2: both rates exceed one, dependent rates, distinct degrees.
    Case 3: exactly one rate equals one with the matching degree
    condition, or both rates equal one with both degrees positive.
    Anything else is not dense: a dependence witness when one exists,
    otherwise an explained unknown.

    ``strict_paper`` applies the literal reading under which a rate equal
    to one is multiplicatively independent of everything; the resulting
    misclassification of bounded-against-exponential pairs is flagged in
    the notes.
    """
    d, alpha = g1.degree, g1.rate
    e, beta = g2.degree, g2.rate
    if alpha.kind == "zero" or beta.kind == "zero":
        return IndependenceVerdict(
            UNKNOWN, reason="a mortal growth type has no density behavior")
    alpha_exp = alpha.kind != "one"
    beta_exp = beta.kind != "one"
    if strict_paper and not (alpha_exp and beta_exp):
        if alpha_exp or beta_exp:
            return IndependenceVerdict(
                INDEPENDENT_CASE_1,
                notes=("literal reading: a rate equal to one is "
                       "multiplicatively independent of every rate, but "
                       "the ratio set is not dense when the bounded side "
                       "has degree zero",))
    if alpha_exp and beta_exp:
        verdict = multiplicatively_independent(alpha, beta, k_max)
        if verdict.independent:
            return IndependenceVerdict(INDEPENDENT_CASE_1,
                                       bound=verdict.bound)
        if d != e:
            return IndependenceVerdict(INDEPENDENT_CASE_2,
                                       witness=verdict.witness)
        return verdict
    if not alpha_exp and not beta_exp:
        if d >= 1 and e >= 1:
            return IndependenceVerdict(INDEPENDENT_CASE_3)
        return IndependenceVerdict(DEPENDENT, witness=(1, 1))
    # exactly one exponential side
    if (not alpha_exp and d != 0) or (not beta_exp and e != 0):
        return IndependenceVerdict(INDEPENDENT_CASE_3)
    return IndependenceVerdict(
        UNKNOWN,
        reason="one growth type is bounded with degree zero: the ratio "
               "set accumulates only at zero or infinity")


@dataclass(frozen=True)
class SubstitutionIndependence:
    """Independence report for two analyzed substitutions."""

    verdict: IndependenceVerdict
    growth1: GrowthType
    growth2: GrowthType
    outside_theorem_scope: bool

    def to_json(self):
        return {"verdict": self.verdict.to_json(),
                "growth1": self.growth1.to_json(),
                "growth2": self.growth2.to_json(),
                "outside_theorem_scope": self.outside_theorem_scope}


def substitutions_independent(analysis1, analysis2, k_max=DEFAULT_K_MAX,
                              strict_paper=False):
    """Classify two substitutions by their growth types.

    Pairs in which both substitutions grow polynomially fall outside the
    bounded-gap theorem's hypotheses; the verdict is still computed but
    flagged ``outside_theorem_scope``.
    """
    g1 = substitution_growth(analysis1)
    g2 = substitution_growth(analysis2)
    verdict = independent_growth_types(g1, g2, k_max=k_max,
                                       strict_paper=strict_paper)
    both_polynomial = g1.rate.kind == "one" and g2.rate.kind == "one"
    return SubstitutionIndependence(verdict, g1, g2, both_polynomial)


def classify_substitutions(sigma1, sigma2, k_max=DEFAULT_K_MAX,
                           strict_paper=False):
    """Convenience wrapper: analyze growth, then classify."""
    return substitutions_independent(letter_growth(sigma1),
                                     letter_growth(sigma2),
                                     k_max=k_max, strict_paper=strict_paper)
