"""Ultimate-periodicity detection and the combined two-substitution check.

Periodicity of an unbounded stream is a semi-decision: verdicts here are
verified on the scanned prefix, never claimed as proofs.  The combined
pipeline cross-checks two substitutive descriptions of one sequence:
stream agreement, growth and independence classification, gap reports,
period detection, and the arithmetic-progression description of a
detected period.
"""

import itertools
from dataclasses import dataclass

import numpy

from .errors import StreamsDiffer
from .gaps import factor_gap_report, letter_gap_report
from .growth import letter_growth
from .independence import substitutions_independent
from .streams import sliding_blocks
from .substitution import fixed_point, project


@dataclass(frozen=True)
class PeriodVerdict:
    """Either a verified (preperiod, period) pair or the evidence that no
    period up to the bound fits the scanned prefix."""

    periodic: bool
    preperiod: int = None
    period: int = None
    prefix: int = None
    max_period: int = None
    witnesses: tuple = None  # per rejected period: (period, mismatch index)

    def to_json(self):
        if self.periodic:
            return {"periodic": True, "preperiod": self.preperiod,
                    "period": self.period, "prefix": self.prefix}
        return {"periodic": False, "max_period": self.max_period,
                "prefix": self.prefix,
                "witnesses": [list(w) for w in (self.witnesses or ())]}


def _as_array(stream, prefix):
    symbols = stream.prefix(prefix)
    index = {}
    coded = numpy.empty(len(symbols), dtype=numpy.int64)
    for i, s in enumerate(symbols):
        if s not in index:
            index[s] = len(index)
        coded[i] = index[s]
    return symbols, coded


def detect_ultimate_period(stream, prefix, max_period):
    """Smallest period (then smallest preperiod) consistent with the
    scanned prefix.

    A candidate period p is accepted when the shift-by-p agreement holds
    from some preperiod no larger than half the prefix up to the end of
    the scanned window; rejected candidates contribute their latest
    mismatch position as a witness.
    """
    if prefix < 4 * max_period:
        raise ValueError("prefix must be at least four times max_period")
    _, coded = _as_array(stream, prefix)
    witnesses = []
    for p in range(1, max_period + 1):
        mismatches = numpy.flatnonzero(coded[p:] != coded[:-p])
        if mismatches.size == 0:
            return PeriodVerdict(True, 0, p, prefix)
        last = int(mismatches[-1])
        preperiod = last + 1
        if preperiod <= prefix // 2:
            return PeriodVerdict(True, preperiod, p, prefix)
        witnesses.append((p, last))
    return PeriodVerdict(False, prefix=prefix, max_period=max_period,
                         witnesses=tuple(witnesses))


@dataclass(frozen=True)
class PowerWord:
    """A word whose powers occur in the scanned prefix."""

    word: tuple
    exponent: int
    position: int

    def to_json(self):
        return {"word": [str(x) for x in self.word],
                "exponent": self.exponent,
                "position": self.position}


def power_word_scan(stream, prefix, max_len=8):
    """Shortest word with the largest observed power (at least a cube).

    For every candidate length the scan finds the longest run of
    positions agreeing with their shift, which bounds the exponent of the
    repeating word there; candidates are ranked by exponent, then by
    length, then genealogically.  Returns None when no word reaches
    exponent three within the prefix.
    """
    symbols, coded = _as_array(stream, prefix)
    best = None  # (-exponent, length, word, position)
    for width in range(1, max_len + 1):
        if 3 * width > prefix:
            break
        matches = coded[width:] == coded[:-width]
        run = 0
        candidates = []  # (exponent, start position of the power)
        best_exponent = 0
        for i, flag in enumerate(matches):
            run = run + 1 if flag else 0
            exponent = 1 + (run // width)
            if exponent >= 3 and exponent >= best_exponent:
                start = i + 1 + width - (run // width) * width - width
                if exponent > best_exponent:
                    candidates = []
                    best_exponent = exponent
                candidates.append((exponent, start))
        if best_exponent < 3:
            continue
        ranked = min(candidates,
                     key=lambda c: tuple(symbols[c[1]:c[1] + width]))
        entry = (-best_exponent, width,
                 tuple(symbols[ranked[1]:ranked[1] + width]), ranked[1])
        if best is None or entry < best:
            best = entry
    if best is None:
        return None
    exponent, width, word, position = -best[0], best[1], best[2], best[3]
    assert symbols[position:position + width * exponent] == word * exponent
    return PowerWord(word, exponent, position)


@dataclass(frozen=True)
class Progressions:
    """A periodic 0/1 stream as residues plus exceptional positions."""

    modulus: int
    preperiod: int
    residues: tuple  # residues r with bit 1 at positions preperiod + r mod m
    exceptional: tuple  # positions < preperiod carrying bit 1

    def reconstruct(self, length):
        out = [0] * length
        for position in self.exceptional:
            if position < length:
                out[position] = 1
        for i in range(self.preperiod, length):
            if (i - self.preperiod) % self.modulus in self.residues:
                out[i] = 1
        return tuple(out)

    def to_json(self):
        return {"modulus": self.modulus, "preperiod": self.preperiod,
                "residues": list(self.residues),
                "exceptional": list(self.exceptional)}


def _bit(symbol):
    return 1 if symbol in (1, "1") else 0


def progressions_of(verdict, stream, prefix):
    """Residue description of a verified ultimately periodic 0/1 stream."""
    if not verdict.periodic:
        raise ValueError("verdict does not assert periodicity")
    bits = [_bit(s) for s in stream.prefix(prefix)]
    preperiod, period = verdict.preperiod, verdict.period
    residues = tuple(r for r in range(period)
                     if preperiod + r < len(bits)
                     and bits[preperiod + r] == 1)
    exceptional = tuple(i for i in range(min(preperiod, len(bits)))
                        if bits[i] == 1)
    return Progressions(period, preperiod, residues, exceptional)


@dataclass(frozen=True)
class CobhamReport:
    """Outcome of the combined pipeline over two substitutive descriptions."""

    prefix: int
    agreed: bool
    independence: object
    condition: str
    theorem_case: bool
    outside_theorem_scope: bool
    letter_reports: tuple
    factor_reports: tuple
    power_word: object
    period: PeriodVerdict
    progressions: object

    def to_json(self):
        return {
            "schema": 1,
            "prefix": self.prefix,
            "agreed": self.agreed,
            "independence": self.independence.to_json(),
            "condition": self.condition,
            "theorem_case": self.theorem_case,
            "outside_theorem_scope": self.outside_theorem_scope,
            "letters": [r.to_json() for r in self.letter_reports],
            "factors": [r.to_json() for r in self.factor_reports],
            "power_word": self.power_word.to_json()
            if self.power_word else None,
            "period": self.period.to_json(),
            "progressions": self.progressions.to_json()
            if self.progressions else None,
        }


def cobham_check(spec1, spec2, prefix=10 ** 5, max_period=None, k_max=24,
                 samples=12):
    """Cross-check two substitutive descriptions of one sequence.

    ``spec1`` and ``spec2`` are (substitution, seed, morphism) triples
    whose projected fixed points must agree on ``prefix`` symbols
    (:class:`StreamsDiffer` reports the first mismatch otherwise).  The
    report then records the independence classification, which density
    condition holds, letter and factor gap reports, the period verdict,
    and, for a periodic 0/1 stream, its arithmetic progressions.
    """
    sigma1, seed1, phi1 = spec1
    sigma2, seed2, phi2 = spec2
    if max_period is None:
        max_period = max(2, prefix // 8)
    max_period = min(max_period, prefix // 4)
    inner1 = fixed_point(sigma1, seed1)
    inner2 = fixed_point(sigma2, seed2)
    x1 = project(phi1, inner1) if phi1 is not None else inner1
    x2 = project(phi2, inner2) if phi2 is not None else inner2

    cursor2 = x2.cursor()
    for index, first in enumerate(itertools.islice(x1.cursor(), prefix)):
        second = next(cursor2)
        if first != second:
            raise StreamsDiffer(index, first, second)

    analysis1 = letter_growth(sigma1)
    analysis2 = letter_growth(sigma2)
    independence = substitutions_independent(analysis1, analysis2,
                                             k_max=k_max)
    condition = independence.verdict.status
    poly1 = independence.growth1.rate.kind == "one"
    poly2 = independence.growth2.rate.kind == "one"
    theorem_case = (independence.verdict.independent
                    and (poly1 != poly2))

    power_word = None
    if poly1 != poly2:
        poly_sigma, poly_seed = ((sigma1, seed1) if poly1
                                 else (sigma2, seed2))
        power_word = power_word_scan(fixed_point(poly_sigma, poly_seed),
                                     min(prefix, 10 ** 4))

    alphabet = sorted(set(x1.prefix(min(prefix, 10 ** 3))), key=str)
    letter_reports = tuple(
        letter_gap_report(x1, letter, prefix, samples=samples)
        for letter in alphabet)
    seen_pairs = []
    for pair in sliding_blocks(x1, 2).prefix(min(prefix, 10 ** 3) - 1):
        if pair not in seen_pairs:
            seen_pairs.append(pair)
    factor_reports = tuple(
        factor_gap_report(x1, pair, prefix, samples=samples)
        for pair in sorted(seen_pairs, key=str))

    period = detect_ultimate_period(x1, prefix, max_period)
    progressions = None
    if period.periodic and set(alphabet) <= {0, 1, "0", "1"}:
        progressions = progressions_of(period, x1, prefix)

    return CobhamReport(prefix, True, independence, condition, theorem_case,
                        independence.outside_theorem_scope, letter_reports,
                        factor_reports, power_word, period, progressions)
