"""Gap statistics on symbolic streams.

The central quantity is the length of the longest block of prefix
symbols drawn from a target set, together with occurrence gaps of single
letters or factors.  Scaling of the longest block against the prefix
length follows one of five regimes determined by the growth types of the
substitution and of the letters feeding the block; the fits here check a
stream empirically against a declared regime.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy

from .errors import CaseMismatch
from .gapsupport import checkpoints_geometric  # re-export convenience
from .growth import letter_growth
from .streams import SymbolStream, sliding_blocks
from .substitution import stabilization_power, power as subst_power

BOUNDED = "bounded-gaps"
GROWING = "growing-gaps"
INCONCLUSIVE = "inconclusive"


def max_uniform_block(stream, target_set, n):
    """Length of the longest contiguous block of symbols from
    ``target_set`` within the first ``n + 1`` symbols (positions 0..n)."""
    if n < 1:
        raise ValueError("prefix bound must be at least 1")
    target_set = frozenset(target_set)
    best = 0
    run = 0
    for symbol in itertools.islice(stream.cursor(), n + 1):
        if symbol in target_set:
            run += 1
            if run > best:
                best = run
        else:
            run = 0
    return best


def gap_of_word(word, morphism, target):
    """Largest window length of ``word`` whose image avoids ``target``.

    The morphism is applied letter by letter (letter-to-letter or
    erasing); a window contributes when no letter of it maps onto the
    target.
    """
    best = 0
    run = 0
    for letter in word:
        if target in morphism.images[letter]:
            run = 0
        else:
            run += 1
            if run > best:
                best = run
    return best


@dataclass(frozen=True)
class GapReport:
    """Occurrence-gap statistics of a target within a stream prefix."""

    target: object
    prefix: int
    occurrences: int
    max_gap: int
    samples: tuple  # (checkpoint, max gap within that checkpoint)
    verdict: str

    def to_json(self):
        return {"target": str(self.target),
                "prefix": self.prefix,
                "occurrences": self.occurrences,
                "max_gap": self.max_gap,
                "samples": [list(s) for s in self.samples],
                "verdict": self.verdict}


def _verdict(samples, occurrences):
    if occurrences < 2:
        return INCONCLUSIVE
    values = [v for _, v in samples]
    half = values[len(values) // 2:]
    if len(set(half)) == 1:
        return BOUNDED
    if len(values) >= 3 and values[-3] < values[-2] < values[-1]:
        return GROWING
    return INCONCLUSIVE


def letter_gap_report(stream, target, n, samples=12):
    """Scan the first ``n`` symbols and report the gaps between consecutive
    occurrences of ``target``.

    The running maximal gap is recorded at geometrically spaced
    checkpoints; the verdict is bounded when it stabilized over the last
    half of the checkpoints, growing when the final checkpoints strictly
    increase, and inconclusive otherwise.
    """
    marks = checkpoints_geometric(n, samples)
    occurrences = 0
    last_seen = None
    max_gap = 0
    recorded = []
    mark_iter = iter(marks)
    next_mark = next(mark_iter)
    for position, symbol in enumerate(itertools.islice(stream.cursor(), n)):
        if symbol == target:
            if last_seen is not None:
                gap = position - last_seen
                if gap > max_gap:
                    max_gap = gap
            last_seen = position
            occurrences += 1
        while next_mark is not None and position + 1 >= next_mark:
            recorded.append((next_mark, max_gap))
            next_mark = next(mark_iter, None)
    while next_mark is not None:
        recorded.append((next_mark, max_gap))
        next_mark = next(mark_iter, None)
    return GapReport(target, n, occurrences, max_gap, tuple(recorded),
                     _verdict(recorded, occurrences))


def factor_gap_report(stream, factor, n, samples=12):
    """Gap report for a factor, via its sliding-window indicator stream."""
    factor = tuple(factor)
    if not factor:
        raise ValueError("factor must be non-empty")
    width = len(factor)

    def indicator():
        for window in sliding_blocks(stream, width).cursor():
            yield 1 if window == factor else 0

    indicator_stream = SymbolStream(indicator,
                                    f"indicator of {factor!r}")
    scan = max(n - width + 1, 1)
    report = letter_gap_report(indicator_stream, 1, scan, samples=samples)
    return GapReport(factor, n, report.occurrences, report.max_gap,
                     report.samples, report.verdict)


@dataclass(frozen=True)
class ScalingFit:
    """Regression of the longest-uniform-block statistic against one of
    the five scaling regimes."""

    case: int
    params: dict
    checkpoints: tuple  # (N, M(N))
    exponent: float
    admissible: tuple
    tolerance: float
    passed: bool
    predictor: str

    def to_json(self):
        return {"case": self.case,
                "params": {k: float(v) for k, v in self.params.items()},
                "checkpoints": [list(c) for c in self.checkpoints],
                "exponent": self.exponent,
                "admissible": list(self.admissible),
                "tolerance": self.tolerance,
                "passed": self.passed,
                "predictor": self.predictor}


def _case_conditions(case, d, d_prime, alpha, alpha_prime):
    if case == 1:
        return alpha == alpha_prime and d == d_prime
    if case == 2:
        return alpha == alpha_prime > 1 and d_prime < d
    if case == 3:
        return alpha > alpha_prime > 1
    if case == 4:
        return alpha > alpha_prime == 1
    if case == 5:
        return alpha == alpha_prime == 1 and d_prime < d
    return False


def scaling_fit(stream, target_set, case, params, n_max, tolerance=0.1,
                min_checkpoint=256):
    """Sample the longest-uniform-block statistic at powers of two and
    regress it against the declared regime's predictor.

    Cases 1, 2, 3 and 5 are fitted log-log against the prefix length
    (case 2 after dividing out the linear term); case 4 is fitted against
    the iterated logarithm.  The fit passes when the exponent lies in the
    regime's admissible interval widened by the tolerance.
    """
    d = int(params.get("d", 0))
    d_prime = int(params.get("d_prime", 0))
    alpha = float(params.get("alpha", 1))
    alpha_prime = float(params.get("alpha_prime", 1))
    if case not in (1, 2, 3, 4, 5):
        raise CaseMismatch(f"unknown case {case}")
    if not _case_conditions(case, d, d_prime, alpha, alpha_prime):
        raise CaseMismatch(
            f"parameters d={d}, d'={d_prime}, alpha={alpha}, "
            f"alpha'={alpha_prime} do not satisfy case {case}")

    target_set = frozenset(target_set)
    marks = []
    mark = 2
    while mark <= n_max:
        marks.append(mark)
        mark *= 2
    samples = []
    best = 0
    run = 0
    mark_iter = iter(marks)
    next_mark = next(mark_iter)
    for position, symbol in enumerate(itertools.islice(stream.cursor(),
                                                       n_max + 1)):
        if symbol in target_set:
            run += 1
            if run > best:
                best = run
        else:
            run = 0
        while next_mark is not None and position == next_mark:
            samples.append((next_mark, best))
            next_mark = next(mark_iter, None)
    while next_mark is not None:
        samples.append((next_mark, best))
        next_mark = next(mark_iter, None)

    usable = [(N, M) for N, M in samples if N >= min_checkpoint and M >= 2]
    if len(usable) < 3:
        raise CaseMismatch(
            "not enough usable checkpoints for a fit; increase n_max")
    ns = numpy.array([N for N, _ in usable], dtype=float)
    ms = numpy.array([M for _, M in usable], dtype=float)

    if case == 2:
        xs = numpy.log(numpy.log(ns))
        ys = numpy.log(ms / ns)
        predictor = "log log N vs log(M/N)"
        admissible = (d_prime - d, d_prime - d)
    elif case == 4:
        xs = numpy.log(numpy.log(ns))
        ys = numpy.log(ms)
        predictor = "log log N vs log M"
        admissible = (float(d_prime), float(d_prime) + 1.0)
    else:
        xs = numpy.log(ns)
        ys = numpy.log(ms)
        predictor = "log N vs log M"
        if case == 1:
            admissible = (1.0, 1.0)
        elif case == 3:
            ratio = math.log(alpha_prime) / math.log(alpha)
            admissible = (ratio, ratio)
        else:
            admissible = (d_prime / d, (d_prime + 1) / d)
    slope = float(numpy.polyfit(xs, ys, 1)[0])
    passed = admissible[0] - tolerance <= slope <= admissible[1] + tolerance
    return ScalingFit(case, {"d": d, "d_prime": d_prime, "alpha": alpha,
                             "alpha_prime": alpha_prime},
                      tuple(samples), slope, admissible, tolerance, passed,
                      predictor)


@dataclass(frozen=True)
class KPrimeReport:
    """Empirical check of the iterated-image gap bound.

    ``k_prime`` is the smallest constant making
    gap(sigma^n(a)) <= K' n^{d'} alpha'^n (or K' n^{d'+1} when alpha' is
    one) hold for every letter over the scanned range.
    """

    target: object
    d_prime: int
    alpha_prime: float
    avoiding_letters: tuple
    n_max: int
    gaps: dict  # letter -> tuple of gap(sigma^n(letter)), n = 1..n_max
    k_prime: float
    ratios: tuple  # per n: max over letters of gap / bound
    ratio_non_increasing: bool

    def to_json(self):
        return {"target": str(self.target),
                "d_prime": self.d_prime,
                "alpha_prime": self.alpha_prime,
                "avoiding_letters": sorted(str(a)
                                           for a in self.avoiding_letters),
                "n_max": self.n_max,
                "gaps": {str(a): list(v) for a, v in self.gaps.items()},
                "k_prime": self.k_prime,
                "ratios": list(self.ratios),
                "ratio_non_increasing": self.ratio_non_increasing}


def _avoiding_letters(sigma, morphism, target):
    """Letters whose iterated images avoid the target infinitely often:
    computed on the stabilized power, where the letter content of all
    further iterates is already invariant."""
    n_stab = stabilization_power(sigma)
    stable = subst_power(sigma, n_stab) if n_stab > 1 else sigma
    out = []
    for a in sigma.alphabet:
        content = set(stable.images[a])
        if all(target not in morphism.images[c] for c in content):
            out.append(a)
    return tuple(out)


def kprime_check(sigma, morphism, target, n_max=12, d_prime=None,
                 alpha_prime=None):
    """Measure gap(sigma^n(a)) for every letter and fit the bound constant.

    When ``d_prime``/``alpha_prime`` are not supplied they are taken from
    the maximal growth type among the letters whose images avoid the
    target.
    """
    if sigma.is_erasing():
        raise CaseMismatch("gap bounds require a non-erasing substitution")
    avoiding = _avoiding_letters(sigma, morphism, target)
    if d_prime is None or alpha_prime is None:
        analysis = letter_growth(sigma)
        best = None
        for a in avoiding:
            t = analysis.growth(a)
            if t is None:
                continue
            if best is None or best < t:
                best = t
        if best is None:
            inferred_d, inferred_alpha = 0, 1.0
        else:
            inferred_d = best.degree
            inferred_alpha = float(best.rate.approx)
        d_prime = inferred_d if d_prime is None else d_prime
        alpha_prime = inferred_alpha if alpha_prime is None else alpha_prime

    gaps = {}
    words = {a: (a,) for a in sigma.alphabet}
    per_n = []
    for n in range(1, n_max + 1):
        words = {a: sigma(words[a]) for a in sigma.alphabet}
        level = {}
        for a in sigma.alphabet:
            level[a] = gap_of_word(words[a], morphism, target)
        per_n.append(level)
    for a in sigma.alphabet:
        gaps[a] = tuple(per_n[n - 1][a] for n in range(1, n_max + 1))

    ratios = []
    for n in range(1, n_max + 1):
        if alpha_prime > 1:
            bound = (n ** d_prime) * (alpha_prime ** n)
        else:
            bound = float(n ** (d_prime + 1))
        worst = max(per_n[n - 1].values())
        ratios.append(worst / bound)
    k_prime = max(ratios)
    tail = ratios[-5:]
    non_increasing = all(tail[i] >= tail[i + 1] - 1e-12
                         for i in range(len(tail) - 1))
    return KPrimeReport(target, int(d_prime), float(alpha_prime), avoiding,
                        n_max, gaps, k_prime, tuple(ratios), non_increasing)
