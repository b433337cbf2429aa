"""Deterministic finite automata over totally ordered alphabets.

Automata may be partial: a missing transition simply blocks the word.
States carry dense integer identities; human-readable names are kept as
metadata and survive the structural operations.  All values are treated
as immutable after construction, so every operation below is pure and
safe for concurrent readers.
"""

import threading
from collections import deque

from .errors import AlphabetMismatch, EmptyLanguage, NotComplete, NotTrim


class Dfa:
    """A possibly partial DFA ``(states, initial, finals, alphabet, delta)``.

    ``alphabet`` is an ordered tuple of distinct symbols; the order is the
    one used for genealogical enumeration.  ``transitions`` maps
    ``(state, symbol)`` to a state, with at most one entry per pair.
    """

    def __init__(self, n_states, initial, finals, alphabet, transitions,
                 names=None):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet symbols must be distinct")
        if not 0 <= initial < n_states:
            raise ValueError(f"initial state {initial} out of range")
        finals = frozenset(finals)
        if not all(0 <= q < n_states for q in finals):
            raise ValueError("final state out of range")
        delta = {}
        for (q, a), t in dict(transitions).items():
            if not (0 <= q < n_states and 0 <= t < n_states):
                raise ValueError(f"transition ({q},{a})->{t} out of range")
            if a not in alphabet:
                raise ValueError(f"transition symbol {a!r} not in alphabet")
            delta[(q, a)] = t
        self.n_states = n_states
        self.initial = initial
        self.finals = finals
        self.alphabet = alphabet
        self.transitions = delta
        if names is None:
            names = tuple(f"q{i}" for i in range(n_states))
        else:
            names = tuple(names)
            if len(names) != n_states:
                raise ValueError("one name per state required")
        self.names = names
        # memo for count_words: _counts[n][q], filled level by level
        self._counts = [[1 if q in finals else 0 for q in range(n_states)]]
        self._counts_lock = threading.Lock()

    @classmethod
    def from_named(cls, alphabet, initial, finals, transitions):
        """Build from name-based data; states are discovered in insertion order."""
        order = []
        seen = set()

        def intern(name):
            if name not in seen:
                seen.add(name)
                order.append(name)
            return name

        intern(initial)
        for (q, a), t in transitions.items():
            intern(q)
            intern(t)
        for q in finals:
            intern(q)
        index = {name: i for i, name in enumerate(order)}
        delta = {(index[q], a): index[t] for (q, a), t in transitions.items()}
        return cls(len(order), index[initial], {index[q] for q in finals},
                   alphabet, delta, names=order)

    def delta(self, q, a):
        """Target of the transition, or None when undefined."""
        return self.transitions.get((q, a))

    def defined(self, q):
        """Transitions from ``q`` as (symbol, target) pairs in alphabet order."""
        for a in self.alphabet:
            t = self.transitions.get((q, a))
            if t is not None:
                yield a, t

    def accepts(self, word):
        q = self.initial
        for a in word:
            q = self.transitions.get((q, a))
            if q is None:
                return False
        return q in self.finals

    def is_complete(self):
        return all((q, a) in self.transitions
                   for q in range(self.n_states) for a in self.alphabet)

    def accessible_states(self):
        seen = {self.initial}
        todo = deque([self.initial])
        while todo:
            q = todo.popleft()
            for _, t in self.defined(q):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    def coaccessible_states(self):
        reverse = {q: set() for q in range(self.n_states)}
        for (q, _), t in self.transitions.items():
            reverse[t].add(q)
        seen = set(self.finals)
        todo = deque(seen)
        while todo:
            q = todo.popleft()
            for s in reverse[q]:
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
        return seen

    def is_trim(self):
        keep = self.accessible_states() & self.coaccessible_states()
        return len(keep) == self.n_states

    def has_cycle(self):
        """True when the transition graph contains a cycle (infinite language
        once the automaton is trim)."""
        color = [0] * self.n_states  # 0 unvisited, 1 on stack, 2 done
        for start in range(self.n_states):
            if color[start]:
                continue
            stack = [(start, iter([t for _, t in self.defined(start)]))]
            color[start] = 1
            while stack:
                q, it = stack[-1]
                advanced = False
                for t in it:
                    if color[t] == 1:
                        return True
                    if color[t] == 0:
                        color[t] = 1
                        stack.append((t, iter([u for _, u in self.defined(t)])))
                        advanced = True
                        break
                if not advanced:
                    color[q] = 2
                    stack.pop()
        return False

    def __repr__(self):
        return (f"Dfa({self.n_states} states, alphabet="
                f"{''.join(map(str, self.alphabet))}, "
                f"{len(self.transitions)} transitions)")


def _restrict(d, keep):
    """Sub-automaton of ``d`` on the state set ``keep`` (must contain initial)."""
    order = sorted(keep)
    index = {q: i for i, q in enumerate(order)}
    delta = {(index[q], a): index[t]
             for (q, a), t in d.transitions.items()
             if q in keep and t in keep}
    return Dfa(len(order), index[d.initial],
               {index[q] for q in d.finals if q in keep},
               d.alphabet, delta, names=[d.names[q] for q in order])


def trim(d):
    """Restriction of ``d`` to accessible and co-accessible states.

    The accepted language is unchanged.  Raises :class:`EmptyLanguage`
    when no final state is reachable from the initial state.
    """
    keep = d.accessible_states() & d.coaccessible_states()
    if d.initial not in keep:
        raise EmptyLanguage("no final state is reachable from the initial state")
    return _restrict(d, keep)


def canonical_form(d):
    """Renumber states by breadth-first discovery over the alphabet order.

    Two isomorphic trim automata have identical canonical forms, which
    makes isomorphism a structural equality test.
    """
    order = [d.initial]
    index = {d.initial: 0}
    todo = deque([d.initial])
    while todo:
        q = todo.popleft()
        for _, t in d.defined(q):
            if t not in index:
                index[t] = len(order)
                order.append(t)
                todo.append(t)
    if len(order) != d.n_states:
        raise NotTrim("canonical form requires an accessible automaton")
    delta = {(index[q], a): index[t] for (q, a), t in d.transitions.items()}
    return Dfa(d.n_states, 0, {index[q] for q in d.finals}, d.alphabet,
               delta, names=[d.names[q] for q in order])


def isomorphic(d1, d2):
    """Isomorphism of trim automata via canonical-form equality."""
    c1, c2 = canonical_form(d1), canonical_form(d2)
    return (c1.alphabet == c2.alphabet and c1.n_states == c2.n_states
            and c1.finals == c2.finals and c1.transitions == c2.transitions)


def minimize(d):
    """The canonical automaton of ``L(d)``: trim, minimal, same language.

    Moore partition refinement over the trim part; undefined transitions
    are a distinguished class of their own, which makes the refinement
    correct for partial automata.
    """
    d = trim(d)
    cls = [1 if q in d.finals else 0 for q in range(d.n_states)]
    n_classes = len(set(cls))
    while True:
        signatures = {}
        new_cls = [0] * d.n_states
        for q in range(d.n_states):
            sig = (cls[q], tuple(
                -1 if d.delta(q, a) is None else cls[d.delta(q, a)]
                for a in d.alphabet))
            if sig not in signatures:
                signatures[sig] = len(signatures)
            new_cls[q] = signatures[sig]
        if len(signatures) == n_classes:
            break
        cls, n_classes = new_cls, len(signatures)
    representative = {}
    for q in range(d.n_states):
        representative.setdefault(cls[q], q)
    delta = {}
    for (q, a), t in d.transitions.items():
        delta[(cls[q], a)] = cls[t]
    quotient = Dfa(n_classes, cls[d.initial],
                   {cls[q] for q in d.finals}, d.alphabet, delta,
                   names=[d.names[representative[c]] for c in range(n_classes)])
    return canonical_form(quotient)


def complete(d, sink_name="sink"):
    """Total-transition version of ``d``: missing edges go to a non-final sink."""
    if d.is_complete():
        return d
    sink = d.n_states
    delta = dict(d.transitions)
    for q in range(d.n_states + 1):
        for a in d.alphabet:
            delta.setdefault((q, a), sink)
    return Dfa(d.n_states + 1, d.initial, d.finals, d.alphabet, delta,
               names=list(d.names) + [sink_name])


class StateMap:
    """A total map between the states of two automata (onto the target)."""

    def __init__(self, source, target, mapping):
        mapping = tuple(mapping)
        if len(mapping) != source.n_states:
            raise ValueError("mapping must cover every source state")
        if set(mapping) != set(range(target.n_states)):
            raise ValueError("mapping must be onto the target states")
        self.source = source
        self.target = target
        self.mapping = mapping

    def __call__(self, q):
        return self.mapping[q]

    def __repr__(self):
        return f"StateMap({list(self.mapping)})"


def product_l_automaton(m, canonical):
    """Product of a complete accessible automaton with a canonical automaton.

    States are the pairs (canonical state, m state); transitions exist
    exactly where the canonical side is defined.  The result accepts
    ``L(m) ∩ L(canonical)`` and maps onto ``canonical`` by first
    projection, so it is an L-automaton for the canonical language.
    Returns the product and that projection.
    """
    if m.alphabet != canonical.alphabet:
        raise AlphabetMismatch(
            f"{m.alphabet!r} != {canonical.alphabet!r}")
    if not m.is_complete():
        raise NotComplete("the recognizer must be complete")
    nm, nc = m.n_states, canonical.n_states

    def pair(qc, qm):
        return qc * nm + qm

    delta = {}
    for qc in range(nc):
        for qm in range(nm):
            for a in canonical.alphabet:
                tc = canonical.delta(qc, a)
                if tc is None:
                    continue
                delta[(pair(qc, qm), a)] = pair(tc, m.delta(qm, a))
    finals = {pair(qc, qm) for qc in canonical.finals for qm in m.finals}
    names = [f"({canonical.names[qc]},{m.names[qm]})"
             for qc in range(nc) for qm in range(nm)]
    product = Dfa(nc * nm, pair(canonical.initial, m.initial), finals,
                  canonical.alphabet, delta, names=names)
    projection = StateMap(product, canonical,
                          [q // nm for q in range(nc * nm)])
    return product, projection


def _phi_conditions_hold(m, canonical, phi):
    for q in range(m.n_states):
        for a in m.alphabet:
            t = m.delta(q, a)
            tc = canonical.delta(phi[q], a)
            if (t is None) != (tc is None):
                return False
            if t is not None and phi[t] != tc:
                return False
    if phi[m.initial] != canonical.initial:
        return False
    if set(phi) != set(range(canonical.n_states)):
        return False
    return all(phi[q] in canonical.finals for q in m.finals)


def check_l_automaton(m, canonical):
    """The transition-compatible onto map from ``m`` to ``canonical``.

    The map sends the initial state to the initial state, finals into
    finals, preserves transitions, and preserves definedness in both
    directions.  On the accessible part it is propagated (where it is
    unique); states unreachable from the initial state are resolved by
    constraint propagation over the canonical states with the same
    definedness pattern, with a small backtracking search for the rare
    ambiguous leftovers.  Returns None when no such map exists.
    """
    if m.alphabet != canonical.alphabet:
        raise AlphabetMismatch(f"{m.alphabet!r} != {canonical.alphabet!r}")
    phi = {m.initial: canonical.initial}
    todo = deque([m.initial])
    while todo:
        q = todo.popleft()
        for a in m.alphabet:
            t = m.delta(q, a)
            tc = canonical.delta(phi[q], a)
            if (t is None) != (tc is None):
                return None
            if t is None:
                continue
            if t in phi:
                if phi[t] != tc:
                    return None
            else:
                phi[t] = tc
                todo.append(t)

    def pattern(auto, q):
        return tuple(auto.delta(q, a) is not None for a in auto.alphabet)

    canonical_patterns = {c: pattern(canonical, c)
                          for c in range(canonical.n_states)}
    candidates = {}
    for q in range(m.n_states):
        if q in phi:
            continue
        options = {c for c in range(canonical.n_states)
                   if canonical_patterns[c] == pattern(m, q)}
        if q in m.finals:
            options &= canonical.finals
        candidates[q] = options

    def propagate(assigned, pools):
        changed = True
        while changed:
            changed = False
            for q, options in pools.items():
                for a in m.alphabet:
                    t = m.delta(q, a)
                    if t is None:
                        continue
                    if t in assigned:
                        options = {c for c in options
                                   if canonical.delta(c, a) == assigned[t]}
                    elif t in pools:
                        targets = {canonical.delta(c, a) for c in options}
                        if not pools[t] <= targets:
                            pools[t] = pools[t] & targets
                            changed = True
                if len(options) < len(pools[q]):
                    pools[q] = options
                    changed = True
                if not options:
                    return False
                if len(options) == 1:
                    c = next(iter(options))
                    assigned[q] = c
                    del pools[q]
                    changed = True
                    break
        return True

    def solve(assigned, pools):
        if not propagate(assigned, pools):
            return None
        if not pools:
            full = [assigned[q] for q in range(m.n_states)]
            return full if _phi_conditions_hold(m, canonical, full) else None
        q = min(pools, key=lambda s: (len(pools[s]), s))
        for c in sorted(pools[q]):
            next_assigned = dict(assigned)
            next_assigned[q] = c
            next_pools = {s: set(p) for s, p in pools.items() if s != q}
            solution = solve(next_assigned, next_pools)
            if solution is not None:
                return solution
        return None

    solution = solve(dict(phi), {q: set(p) for q, p in candidates.items()})
    if solution is None:
        return None
    return StateMap(m, canonical, solution)


def count_words(d, q, n):
    """Exact number of length-``n`` words accepted from state ``q``.

    Computed with unbounded integers by the recurrence
    ``u_q(0) = [q is final]``, ``u_q(n) = sum over defined (q,a) of
    u_delta(q,a)(n-1)``; levels are memoized on the automaton.
    """
    if not 0 <= q < d.n_states:
        raise ValueError(f"state {q} out of range")
    if n < 0:
        raise ValueError("length must be non-negative")
    counts = d._counts
    if n >= len(counts):
        with d._counts_lock:
            while n >= len(counts):
                prev = counts[-1]
                counts.append([
                    sum(prev[t] for _, t in d.defined(state))
                    for state in range(d.n_states)])
    return counts[n][q]


def incidence_matrix(d):
    """Square integer matrix ``m[i][j]`` counting symbols with delta(j, a) = i."""
    m = [[0] * d.n_states for _ in range(d.n_states)]
    for (j, _), i in d.transitions.items():
        m[i][j] += 1
    return m
