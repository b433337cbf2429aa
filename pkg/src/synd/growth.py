"""Growth-type analysis of substitutions and automata.

The length of the n-th iterated image of a letter behaves like
``c * n^d * alpha^n`` where ``alpha`` is the Perron root of a
communicating class of the expansion graph and ``d`` counts extremal
classes along a reachability path.  Everything structural here is exact:
communicating classes, periods and characteristic polynomials use
integer arithmetic, and Perron roots are carried as shrinkable rational
enclosures certified by Collatz-Wielandt bounds.  Floating point appears
only in diagnostic coefficient estimates.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy

from .errors import Erasing, NotTrim, UnresolvedComparison
from .substitution import Substitution, power

_X = sympy.Symbol("x")
_MAX_POWER_ITERATIONS = 200_000


def _to_rational(f):
    return sympy.Rational(f.numerator, f.denominator)


class AlgebraicRate:
    """An exponential growth rate: zero, one, or the Perron root of a
    primitive integer matrix.

    Root rates carry the exact block, its exact integer characteristic
    polynomial, and a rational enclosure ``[lo, hi]`` that can be
    tightened on demand by further power iteration.  Root rates are
    always strictly greater than one.
    """

    def __init__(self, kind, block=None):
        if kind not in ("zero", "one", "root"):
            raise ValueError(f"unknown rate kind {kind!r}")
        self.kind = kind
        self.block = None
        self._lo = self._hi = None
        self._vector = None
        self._charpoly = None
        if kind == "root":
            block = tuple(tuple(int(x) for x in row) for row in block)
            size = len(block)
            if any(len(row) != size for row in block):
                raise ValueError("block must be square")
            self.block = block
            if size == 1:
                value = Fraction(block[0][0])
                if value <= 1:
                    raise ValueError("root rates must exceed one")
                self._lo = self._hi = value
            else:
                self._vector = [1] * size
                self._lo, self._hi = Fraction(1), None
                self._iterate(64)
                while self._lo <= 1:
                    self._iterate(16)

    @staticmethod
    def zero():
        return AlgebraicRate("zero")

    @staticmethod
    def one():
        return AlgebraicRate("one")

    @staticmethod
    def from_block(block):
        """Rate of a non-zero communicating-class block: one for the
        trivial loop, a root enclosure otherwise."""
        if len(block) == 1 and block[0][0] == 1:
            return AlgebraicRate("one")
        return AlgebraicRate("root", block)

    @staticmethod
    def from_integer(m):
        if m < 1:
            raise ValueError("integer rates must be positive")
        if m == 1:
            return AlgebraicRate("one")
        return AlgebraicRate("root", ((m,),))

    def _iterate(self, steps):
        m = self.block
        size = len(m)
        v = self._vector
        for _ in range(steps):
            w = [sum(m[i][j] * v[j] for j in range(size)) for i in range(size)]
            ratios = [Fraction(w[i], v[i]) for i in range(size)]
            lo, hi = min(ratios), max(ratios)
            if lo > self._lo:
                self._lo = lo
            if self._hi is None or hi < self._hi:
                self._hi = hi
            shrink = gcd(*w) if size > 1 else w[0]
            v = [x // shrink for x in w] if shrink > 1 else w
        self._vector = v

    def refine(self, eps):
        """Tighten the enclosure until its width is at most ``eps``."""
        if self.kind != "root":
            return
        eps = Fraction(eps)
        iterations = 0
        while self._hi - self._lo > eps:
            self._iterate(8)
            iterations += 8
            if iterations > _MAX_POWER_ITERATIONS:
                raise UnresolvedComparison(
                    "power iteration budget exhausted")

    @property
    def enclosure(self):
        if self.kind == "zero":
            return Fraction(0), Fraction(0)
        if self.kind == "one":
            return Fraction(1), Fraction(1)
        return self._lo, self._hi

    @property
    def approx(self):
        lo, hi = self.enclosure
        return (lo + hi) / 2

    @property
    def error(self):
        lo, hi = self.enclosure
        return (hi - lo) / 2

    @property
    def charpoly(self):
        """Exact integer characteristic polynomial, leading coefficient first."""
        if self.kind == "zero":
            return (1, 0)
        if self.kind == "one":
            return (1, -1)
        if self._charpoly is None:
            poly = sympy.Matrix(self.block).charpoly(_X)
            self._charpoly = tuple(int(c) for c in poly.all_coeffs())
        return self._charpoly

    def exact_integer(self):
        """The rate as an exact integer when it is one, else None."""
        if self.kind == "zero":
            return 0
        if self.kind == "one":
            return 1
        self.refine(Fraction(1, 4))
        lo, hi = self.enclosure
        poly = sympy.Poly(self.charpoly, _X)
        candidate = None
        m = -(-lo.numerator // lo.denominator)  # ceil(lo)
        while m <= hi:
            if poly.eval(m) == 0:
                candidate = int(m)
                break
            m += 1
        if candidate is None:
            return None
        if poly.count_roots(_to_rational(lo), _to_rational(hi)) == 1:
            return candidate
        return None

    def pow(self, k):
        """The rate raised to the k-th power (exact block power)."""
        if k < 1:
            raise ValueError("power must be at least 1")
        if self.kind in ("zero", "one") or k == 1:
            return self
        m = sympy.Matrix(self.block) ** k
        out = AlgebraicRate("root",
                            tuple(tuple(int(x) for x in m.row(i))
                                  for i in range(m.rows)))
        lo, hi = self.enclosure
        out._lo = max(out._lo, lo ** k)
        if out._hi is None or hi ** k < out._hi:
            out._hi = hi ** k
        return out

    def __repr__(self):
        if self.kind != "root":
            return f"AlgebraicRate({self.kind})"
        return f"AlgebraicRate(root~{float(self.approx):.6f})"

    def to_json(self):
        return {"kind": self.kind,
                "approx": float(self.approx),
                "error": float(self.error),
                "charpoly": list(self.charpoly)}


_KIND_ORDER = {"zero": 0, "one": 1, "root": 2}


def compare_rates(a, b):
    """Total comparison of rates: -1, 0 or 1.

    Root rates are compared through their rational enclosures, shrinking
    on demand; when enclosures refuse to separate, equality is certified
    exactly through a common factor of the two characteristic
    polynomials whose real root lies in both enclosures.  Raises
    :class:`UnresolvedComparison` instead of guessing.
    """
    ka, kb = _KIND_ORDER[a.kind], _KIND_ORDER[b.kind]
    if ka != kb:
        return -1 if ka < kb else 1
    if a.kind != "root":
        return 0
    if a is b:
        return 0
    for bits in (64, 128, 256):
        eps = Fraction(1, 2 ** bits)
        a.refine(eps)
        b.refine(eps)
        if a._hi < b._lo:
            return -1
        if b._hi < a._lo:
            return 1
    pa = sympy.Poly(a.charpoly, _X)
    pb = sympy.Poly(b.charpoly, _X)
    g = sympy.gcd(pa, pb)
    if g.degree() >= 1:
        lo = max(a._lo, b._lo)
        hi = min(a._hi, b._hi)
        if (lo <= hi
                and pa.count_roots(_to_rational(a._lo), _to_rational(a._hi)) == 1
                and pb.count_roots(_to_rational(b._lo), _to_rational(b._hi)) == 1
                and g.count_roots(_to_rational(lo), _to_rational(hi)) >= 1):
            return 0
    eps = Fraction(1, 2 ** 512)
    a.refine(eps)
    b.refine(eps)
    if a._hi < b._lo:
        return -1
    if b._hi < a._lo:
        return 1
    raise UnresolvedComparison(
        "cannot decide rate comparison within the precision budget")


def rates_certified_equal(a, b):
    return compare_rates(a, b) == 0


class GrowthType:
    """A pair (degree, rate); ordered by rate first, then degree."""

    def __init__(self, degree, rate):
        self.degree = int(degree)
        self.rate = rate

    def __eq__(self, other):
        return (isinstance(other, GrowthType)
                and self.degree == other.degree
                and compare_rates(self.rate, other.rate) == 0)

    def __lt__(self, other):
        c = compare_rates(self.rate, other.rate)
        if c != 0:
            return c < 0
        return self.degree < other.degree

    def __le__(self, other):
        return self == other or self < other

    def __repr__(self):
        if self.rate.kind == "root":
            return f"GrowthType({self.degree}, ~{float(self.rate.approx):.6f})"
        return f"GrowthType({self.degree}, {self.rate.kind})"

    def to_json(self):
        return {"degree": self.degree, "rate": self.rate.to_json()}


class LetterGraph:
    """The expansion graph of a substitution: an edge a -> b of
    multiplicity k records k occurrences of b in the image of a, so the
    number of length-n paths from a equals the n-th iterated image
    length of a."""

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        self.edges = {a: dict(edges.get(a, {})) for a in self.nodes}

    def edge_labels(self, node):
        """Outgoing edges of ``node`` labelled by image position (from 1)."""
        raise NotImplementedError

    def path_count(self, node, n):
        """Exact number of length-``n`` paths starting at ``node``."""
        values = {a: 1 for a in self.nodes}
        for _ in range(n):
            values = {a: sum(m * values[b] for b, m in self.edges[a].items())
                      for a in self.nodes}
        return values[node]


def growth_automaton(sigma):
    """The expansion graph of a substitution, with a positional labelling."""
    edges = {}
    labels = {}
    for a in sigma.alphabet:
        counts = {}
        labelled = []
        for position, b in enumerate(sigma.images[a], start=1):
            counts[b] = counts.get(b, 0) + 1
            labelled.append((position, b))
        edges[a] = counts
        labels[a] = labelled
    graph = LetterGraph(sigma.alphabet, edges)
    graph.edge_labels = lambda node: list(labels[node])
    return graph


def _tarjan(nodes, successors):
    """Strongly connected components, emitted successors-first."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = [0]
    components = []
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = counter[0]
                    counter[0] += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(successors(child))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(tuple(component))
    return components


def _class_period(component, edges):
    """gcd of cycle lengths within a communicating class (0 for a class
    with no internal edge)."""
    members = set(component)
    intra = {a: [b for b in edges[a] if b in members] for a in component}
    if not any(intra.values()):
        return 0
    root = component[0]
    level = {root: 0}
    todo = [root]
    g = 0
    while todo:
        a = todo.pop()
        for b in intra[a]:
            if b not in level:
                level[b] = level[a] + 1
                todo.append(b)
            g = gcd(g, level[a] + 1 - level[b])
    return abs(g)


def _graph_classes(nodes, edges):
    comps = _tarjan(nodes, lambda a: edges[a].keys())
    comp_of = {}
    for ci, comp in enumerate(comps):
        for node in comp:
            comp_of[node] = ci
    succ = [set() for _ in comps]
    for a in nodes:
        for b in edges[a]:
            if comp_of[a] != comp_of[b]:
                succ[comp_of[a]].add(comp_of[b])
    return comps, comp_of, succ


def regularization_power(sigma):
    """lcm of the periods of the non-zero communicating classes.

    After replacing the substitution by this power, every class block of
    the expansion graph is primitive or zero.
    """
    graph = growth_automaton(sigma)
    comps, _, _ = _graph_classes(graph.nodes, graph.edges)
    p = 1
    for comp in comps:
        t = _class_period(comp, graph.edges)
        if t > 1:
            p = p * t // gcd(p, t)
    return p


def _analyze_expansion(nodes, edges):
    """Shared condensation dynamic program.

    ``edges[a][b]`` is the multiplicity of a -> b; the graph must already
    be regularized (every class aperiodic).  Returns per-node growth
    types (None for eventually-zero path counts).
    """
    comps, comp_of, succ = _graph_classes(nodes, edges)
    n_comps = len(comps)
    rates = []
    for comp in comps:
        members = set(comp)
        block = [[edges[a].get(b, 0) for a in comp] for b in comp]
        if not any(any(row) for row in block):
            rates.append(AlgebraicRate.zero())
        else:
            rates.append(AlgebraicRate.from_block(block))
    # unify equal rates across classes and rank them
    rep_ids = []
    reps = []
    for rate in rates:
        for rid, rep in enumerate(reps):
            if compare_rates(rate, rep) == 0:
                rep_ids.append(rid)
                break
        else:
            rep_ids.append(len(reps))
            reps.append(rate)
    order = sorted(range(len(reps)), key=lambda i: _RateKey(reps[i]))
    rank_of_rep = {rid: order.index(rid) for rid in range(len(reps))}
    rank = [rank_of_rep[rep_ids[ci]] for ci in range(n_comps)]
    zero_rank = next((rank_of_rep[rid] for rid, rep in enumerate(reps)
                      if rep.kind == "zero"), None)

    # Tarjan emits successors first, so a single pass suffices
    max_rank = [0] * n_comps
    for ci in range(n_comps):
        best = rank[ci]
        for di in succ[ci]:
            best = max(best, max_rank[di])
        max_rank[ci] = best

    chains = {}
    for r in set(max_rank):
        chain = [0] * n_comps
        for ci in range(n_comps):
            best = max((chain[di] for di in succ[ci]), default=0)
            chain[ci] = best + (1 if rank[ci] == r else 0)
        chains[r] = chain

    result = {}
    for node in nodes:
        ci = comp_of[node]
        r = max_rank[ci]
        if zero_rank is not None and r == zero_rank:
            result[node] = None  # eventually-zero counts
        else:
            degree = chains[r][ci] - 1
            result[node] = GrowthType(degree, reps[order[r]])
    return result


class _RateKey:
    def __init__(self, rate):
        self.rate = rate

    def __lt__(self, other):
        return compare_rates(self.rate, other.rate) < 0


@dataclass(frozen=True)
class Estimate:
    """A numeric estimate with a heuristic error bar."""

    value: Fraction
    error: Fraction

    def __float__(self):
        return float(self.value)

    def to_json(self):
        return {"value": float(self.value), "error": float(self.error)}


class GrowthAnalysis:
    """Per-letter growth types of a substitution (after regularization).

    ``p`` is the regularization power; all reported growth data refers to
    the substitution raised to that power (which has the same fixed
    points).  Mortal letters are flagged instead of typed.
    """

    def __init__(self, sigma, p, powered, letter_types, mortal):
        self.substitution = sigma
        self.p = p
        self.powered = powered
        self.letter_types = letter_types
        self.mortal = frozenset(mortal)
        growing_types = {a: t for a, t in letter_types.items()
                         if t is not None}
        if growing_types:
            theta = None
            for t in growing_types.values():
                if theta is None or compare_rates(t.rate, theta) > 0:
                    theta = t.rate
            self.theta = theta
            self.degree = max(t.degree for t in growing_types.values()
                              if compare_rates(t.rate, theta) == 0)
            self.a_max = frozenset(
                a for a, t in growing_types.items()
                if t.degree == self.degree
                and compare_rates(t.rate, theta) == 0)
        else:
            self.theta = AlgebraicRate.zero()
            self.degree = 0
            self.a_max = frozenset()
        self._coefficients = None

    def growth(self, letter):
        """Growth type of ``letter``; None when the letter is mortal."""
        return self.letter_types[letter]

    def is_growing(self, letter):
        t = self.letter_types.get(letter)
        if t is None:
            return False
        return t.rate.kind != "one" or t.degree >= 1

    @property
    def coefficients(self):
        """Per-letter limits of |sigma^n(a)| / (n^d alpha^n), estimated by
        Aitken extrapolation of exact length counts.  Diagnostic only."""
        if self._coefficients is None:
            self._coefficients = _estimate_coefficients(self)
        return self._coefficients

    def to_json(self):
        letters = []
        for a in self.substitution.alphabet:
            t = self.letter_types[a]
            entry = {"letter": str(a), "mortal": a in self.mortal}
            if t is not None:
                entry["degree"] = t.degree
                entry["rate"] = t.rate.to_json()
            letters.append(entry)
        return {"p": self.p,
                "D": self.degree,
                "Theta": self.theta.to_json(),
                "A_max": sorted(str(a) for a in self.a_max),
                "letters": letters}


def image_lengths(sigma, n):
    """Exact iterated image lengths |sigma^n(a)| for every letter, computed
    from the expansion matrix (never by expanding words)."""
    graph = growth_automaton(sigma)
    values = {a: 1 for a in graph.nodes}
    for _ in range(n):
        values = {a: sum(m * values[b] for b, m in graph.edges[a].items())
                  for a in graph.nodes}
    return values


def letter_growth(sigma):
    """Full growth analysis: regularize, split into communicating classes,
    and run the condensation dynamic program."""
    if sigma._analysis is not None:
        return sigma._analysis
    p = regularization_power(sigma)
    powered = power(sigma, p)
    graph = growth_automaton(powered)
    letter_types = _analyze_expansion(graph.nodes, graph.edges)
    mortal = {a for a, t in letter_types.items() if t is None}
    analysis = GrowthAnalysis(sigma, p, powered, letter_types, mortal)
    sigma._analysis = analysis
    return analysis


def substitution_growth(analysis):
    """The growth type of the substitution itself: the maximal letter type."""
    return GrowthType(analysis.degree, analysis.theta)


def _estimate_coefficients(analysis, anchors=(40, 50, 60)):
    powered = analysis.powered
    graph = growth_automaton(powered)
    snapshots = {}
    values = {a: Fraction(1) for a in graph.nodes}
    for n in range(1, max(anchors) + 1):
        values = {a: sum(m * values[b] for b, m in graph.edges[a].items())
                  for a in graph.nodes}
        if n in anchors:
            snapshots[n] = dict(values)
    out = {}
    eps = Fraction(1, 2 ** 128)
    for a in powered.alphabet:
        t = analysis.letter_types[a]
        if t is None:
            continue
        t.rate.refine(eps)
        mid = t.rate.approx
        samples = []
        for n in anchors:
            samples.append(Fraction(snapshots[n][a])
                           / (Fraction(n) ** t.degree * mid ** n))
        r1, r2, r3 = samples
        denominator = r1 + r3 - 2 * r2
        if denominator == 0:
            value = r3
            error = abs(r3 - r2)
        else:
            value = (r1 * r3 - r2 * r2) / denominator
            error = abs(value - r3) + abs(r3 - r2)
        out[a] = Estimate(value, error)
    return out


def lambda_coefficient(analysis, word):
    """The normalized limit length of iterated images of ``word``: the sum
    of the coefficients of its maximal-growth letters.  Additive under
    concatenation by construction."""
    for letter in word:
        if letter not in analysis.substitution.images:
            raise ValueError(f"letter {letter!r} not in the alphabet")
    coefficients = analysis.coefficients
    value = Fraction(0)
    error = Fraction(0)
    for letter in word:
        if letter in analysis.a_max:
            estimate = coefficients[letter]
            value += estimate.value
            error += estimate.error
    return Estimate(value, error)


class AutomatonGrowth:
    """Growth analysis of a trim automaton's counting sequences."""

    def __init__(self, dfa, p, state_types, system):
        self.dfa = dfa
        self.p = p
        self.state_types = state_types
        self.system = system

    def to_json(self):
        states = []
        for q in range(self.dfa.n_states):
            t = self.state_types[q]
            entry = {"state": self.dfa.names[q]}
            if t is None:
                entry["mortal"] = True
            else:
                entry["degree"] = t.degree
                entry["rate"] = t.rate.to_json()
            states.append(entry)
        return {"p": self.p,
                "growth": self.system.to_json() if self.system else None,
                "states": states,
                "substitution_growth":
                    associated_substitution_growth(self.system).to_json()
                    if self.system else None}


def automaton_growth(d):
    """Growth type of the word-counting sequences of a trim automaton.

    Runs the same condensation dynamic program on the automaton's
    transition multigraph; the system growth is the largest state growth
    type.  Returns the analysis with per-state types.
    """
    if not d.is_trim():
        raise NotTrim("growth analysis requires a trim automaton")
    edges = {q: {} for q in range(d.n_states)}
    for (q, _), t in d.transitions.items():
        edges[q][t] = edges[q].get(t, 0) + 1
    nodes = tuple(range(d.n_states))
    comps, _, _ = _graph_classes(nodes, edges)
    p = 1
    for comp in comps:
        t = _class_period(comp, edges)
        if t > 1:
            p = p * t // gcd(p, t)
    if p > 1:
        powered = {q: {} for q in nodes}
        for q in nodes:
            frontier = {q: 1}
            for _ in range(p):
                nxt = {}
                for node, mult in frontier.items():
                    for b, m in edges[node].items():
                        nxt[b] = nxt.get(b, 0) + mult * m
                frontier = nxt
            powered[q] = frontier
        edges = powered
    state_types = _analyze_expansion(nodes, edges)
    growing = [t for t in state_types.values() if t is not None]
    system = None
    for t in growing:
        if system is None or system < t:
            system = t
    return AutomatonGrowth(d, p, state_types, system)


def associated_substitution_growth(gt):
    """Growth type of the substitution read off an automaton with the
    given growth type: unchanged for exponential rates, degree + 1 for
    rate one (the fresh prolongation letter adds one extremal class)."""
    if gt.rate.kind == "one":
        return GrowthType(gt.degree + 1, gt.rate)
    return gt
