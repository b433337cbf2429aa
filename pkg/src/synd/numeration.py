"""Abstract numeration systems: genealogical enumeration, rep/val, and
characteristic sequences of recognizable sets.

An abstract numeration system enumerates an infinite regular language in
genealogical order (shorter words first, ties broken by the alphabet
order); the word at index n represents the integer n.  All conversions
run on exact big-integer path counts, so indices far beyond machine
words are handled exactly.
"""

from .automata import count_words, minimize
from .errors import AlphabetMismatch, FiniteLanguage, NotComplete, NotInLanguage
from .streams import SymbolStream


class AbstractNumerationSystem:
    """An infinite regular language with its canonical automaton.

    The input automaton is minimized on construction; finite languages
    are rejected because they cannot number all of the naturals.
    """

    def __init__(self, dfa):
        canonical = minimize(dfa)
        if not canonical.has_cycle():
            raise FiniteLanguage(
                "the language is finite; a numeration system needs an "
                "infinite language")
        self.canonical = canonical
        self.alphabet = canonical.alphabet

    def __repr__(self):
        return f"AbstractNumerationSystem({self.canonical!r})"


def _counts(system, q, n):
    return count_words(system.canonical, q, n)


def enumerate_words(system, count):
    """The first ``count`` words of the language in genealogical order.

    Streams one length at a time with a depth-first walk over defined
    transitions in alphabet order, descending only into subtrees that
    still contain accepted words of the target length.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    out = []
    d = system.canonical
    length = 0
    while len(out) < count:
        # depth-first over (state, remaining) with count-based pruning
        stack = [(d.initial, length, ())]
        while stack and len(out) < count:
            q, remaining, word = stack.pop()
            if remaining == 0:
                if q in d.finals:
                    out.append(word)
                continue
            for a, t in reversed(list(d.defined(q))):
                if _counts(system, t, remaining - 1) > 0:
                    stack.append((t, remaining - 1, word + (a,)))
        length += 1
    return out


def rep(system, n):
    """The word representing ``n``: the (n+1)-th word in genealogical order.

    Length skipping via cumulative counts, then digit-by-digit descent
    using the per-state counts; never enumerates.
    """
    if n < 0:
        raise ValueError("index must be non-negative")
    d = system.canonical
    remaining = n
    length = 0
    while True:
        here = _counts(system, d.initial, length)
        if remaining < here:
            break
        remaining -= here
        length += 1
    word = []
    q = d.initial
    for position in range(length):
        for a, t in d.defined(q):
            below = _counts(system, t, length - position - 1)
            if remaining < below:
                word.append(a)
                q = t
                break
            remaining -= below
        else:
            raise AssertionError("descent exhausted the alphabet")
    return tuple(word)


def val(system, word):
    """The index of ``word`` in the genealogical enumeration.

    The word must belong to the language; its index is the number of
    accepted words that are shorter, plus the number of accepted words of
    the same length passing through a strictly smaller symbol at some
    position.
    """
    d = system.canonical
    word = tuple(word)
    states = [d.initial]
    for a in word:
        t = d.delta(states[-1], a)
        if t is None:
            raise NotInLanguage(f"{''.join(map(str, word))!r} is not accepted")
        states.append(t)
    if states[-1] not in d.finals:
        raise NotInLanguage(f"{''.join(map(str, word))!r} is not accepted")
    total = sum(_counts(system, d.initial, j) for j in range(len(word)))
    for i, letter in enumerate(word):
        q = states[i]
        for a, t in d.defined(q):
            if a == letter:
                break
            total += _counts(system, t, len(word) - 1 - i)
    return total


class RecognizableSet:
    """A set of integers given by a recognizer for its representations.

    The recognizer must be complete and accessible over the system's
    alphabet; membership of n is decided by running rep(n) through it.
    """

    def __init__(self, system, recognizer):
        if recognizer.alphabet != system.alphabet:
            raise AlphabetMismatch(
                f"{recognizer.alphabet!r} != {system.alphabet!r}")
        if not recognizer.is_complete():
            raise NotComplete("the recognizer must be complete")
        if len(recognizer.accessible_states()) != recognizer.n_states:
            raise NotComplete("the recognizer must be accessible")
        self.system = system
        self.recognizer = recognizer

    def contains(self, n):
        return self.recognizer.accepts(rep(self.system, n))


def characteristic_stream(recognizable):
    """The 0/1 stream whose i-th symbol tells whether i is in the set.

    Equivalent to running every representation through the recognizer, in
    genealogical order; implemented as a single product walk so the
    stream is lazy and restartable.
    """
    system = recognizable.system
    d = system.canonical
    r = recognizable.recognizer

    def gen():
        length = 0
        while True:
            stack = [(d.initial, r.initial, length)]
            while stack:
                q, qr, remaining = stack.pop()
                if remaining == 0:
                    if q in d.finals:
                        yield 1 if qr in r.finals else 0
                    continue
                for a, t in reversed(list(d.defined(q))):
                    if _counts(system, t, remaining - 1) > 0:
                        stack.append((t, r.delta(qr, a), remaining - 1))
            length += 1

    return SymbolStream(gen, f"characteristic stream over {d!r}")
