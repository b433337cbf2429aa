"""Substitutions, morphisms, fixed points and block recodings.

A substitution maps every letter of an alphabet to a word over the same
alphabet (the empty word is allowed, so substitutions may be erasing).
Iterating a substitution from a prolongable seed letter generates an
unbounded fixed-point sequence; morphisms project such sequences onto
other alphabets.  Letters can be any hashable values: single characters,
automaton state names, or block tuples.
"""

import itertools
from math import gcd

from .errors import (BlockNotInFixedPoint, Erasing, InvalidMap, NotGrowing,
                     NotProlongable, SeedMortal, Stalled, SymbolClash)
from .streams import SymbolStream

DEFAULT_STALL_BOUND = 10 ** 6
BLOCK_SCAN_BOUND = 10 ** 6


class Substitution:
    """An alphabet together with a total letter-to-word image map."""

    def __init__(self, alphabet, images):
        self.alphabet = tuple(alphabet)
        known = set(self.alphabet)
        if len(known) != len(self.alphabet):
            raise ValueError("alphabet letters must be distinct")
        self.images = {}
        for letter in self.alphabet:
            if letter not in images:
                raise ValueError(f"no image for letter {letter!r}")
            image = tuple(images[letter])
            for x in image:
                if x not in known:
                    raise ValueError(
                        f"image of {letter!r} uses unknown letter {x!r}")
            self.images[letter] = image
        self._analysis = None  # growth analysis cache (immutable value)

    def __call__(self, word):
        """Apply to a word (any iterable of letters); returns a tuple."""
        out = []
        for letter in word:
            out.extend(self.images[letter])
        return tuple(out)

    def is_erasing(self):
        return any(not image for image in self.images.values())

    def iterate(self, word, n):
        """Apply the substitution ``n`` times to ``word``."""
        word = tuple(word)
        for _ in range(n):
            word = self(word)
        return word

    def __eq__(self, other):
        return (isinstance(other, Substitution)
                and self.alphabet == other.alphabet
                and self.images == other.images)

    def __hash__(self):
        return hash((self.alphabet,
                     tuple(self.images[a] for a in self.alphabet)))

    def __repr__(self):
        rules = ", ".join(
            f"{a}->{''.join(map(str, self.images[a])) or 'ε'}"
            for a in self.alphabet)
        return f"Substitution({rules})"


class Morphism:
    """A map from a source alphabet into words over a target alphabet."""

    def __init__(self, source, target, images):
        self.source = tuple(source)
        self.target = tuple(target)
        known = set(self.target)
        self.images = {}
        for letter in self.source:
            if letter not in images:
                raise ValueError(f"no image for letter {letter!r}")
            image = tuple(images[letter])
            for x in image:
                if x not in known:
                    raise ValueError(
                        f"image of {letter!r} uses unknown letter {x!r}")
            self.images[letter] = image

    @property
    def letter_to_letter(self):
        return all(len(image) == 1 for image in self.images.values())

    @classmethod
    def identity(cls, alphabet):
        alphabet = tuple(alphabet)
        return cls(alphabet, alphabet, {a: (a,) for a in alphabet})

    def __call__(self, word):
        out = []
        for letter in word:
            out.extend(self.images[letter])
        return tuple(out)

    def __repr__(self):
        rules = ", ".join(
            f"{a}->{''.join(map(str, self.images[a])) or 'ε'}"
            for a in self.source)
        return f"Morphism({rules})"


def canonical_substitution(d, seed="s"):
    """Read a substitution off a DFA's transition table.

    The fresh letter ``seed`` maps to ``seed`` followed by the initial
    state; every state maps to the concatenation of its transition
    targets in alphabet order, undefined transitions contributing the
    empty word.  Applied to the canonical automaton of a language this
    yields the language's canonical substitution.
    """
    if seed in d.names:
        raise SymbolClash(f"{seed!r} is already a state name")
    letters = [seed] + list(d.names)
    images = {seed: (seed, d.names[d.initial])}
    for q in range(d.n_states):
        images[d.names[q]] = tuple(
            d.names[d.delta(q, a)] for a in d.alphabet
            if d.delta(q, a) is not None)
    return Substitution(letters, images)


def char_morphism(m, phi, canonical_finals, seed="s"):
    """The 0/1/erasing projection that turns the fixed point of the
    substitution of an L-automaton into a characteristic sequence.

    With ``F''`` the preimage of the canonical finals under ``phi``:
    the seed erases, finals of ``m`` map to 1, states of ``F''`` that are
    not final map to 0, and everything else erases.
    """
    if phi.source is not m:
        raise InvalidMap("state map does not belong to this automaton")
    canonical_finals = frozenset(canonical_finals)
    if not canonical_finals <= set(range(phi.target.n_states)):
        raise InvalidMap("finals are not states of the canonical automaton")
    images = {seed: ()}
    for q in range(m.n_states):
        if q in m.finals:
            images[m.names[q]] = (1,)
        elif phi(q) in canonical_finals:
            images[m.names[q]] = (0,)
        else:
            images[m.names[q]] = ()
    return Morphism([seed] + list(m.names), (0, 1), images)


def is_growing_letter(sigma, letter):
    """True when the iterated image lengths of ``letter`` tend to infinity."""
    from .growth import letter_growth

    analysis = letter_growth(sigma)
    return analysis.is_growing(letter)


def fixed_point(sigma, seed):
    """The fixed-point stream obtained by iterating from ``seed``.

    Requires the image of ``seed`` to start with ``seed`` and the iterated
    image lengths to be unbounded; both are validated up front.  The
    stream is produced by incremental expansion: the output is its own
    expansion frontier, so generation is linear in the prefix length.
    """
    image = sigma.images.get(seed)
    if image is None:
        raise ValueError(f"{seed!r} is not a letter of the substitution")
    if not image or image[0] != seed:
        raise NotProlongable(
            f"image of {seed!r} does not start with {seed!r}")
    if not is_growing_letter(sigma, seed):
        raise NotGrowing(f"iterated images of {seed!r} stay bounded")
    images = sigma.images

    def gen():
        out = list(images[seed])
        emit = 0
        expand = 1  # out equals the image of the first `expand` symbols
        while True:
            if emit < len(out):
                yield out[emit]
                emit += 1
            else:
                if expand >= len(out):
                    raise NotGrowing("expansion stalled")  # defensive
                out.extend(images[out[expand]])
                expand += 1

    return SymbolStream(gen, f"fixed point of {sigma!r} at {seed!r}")


def project(morphism, stream, stall_bound=DEFAULT_STALL_BOUND):
    """Image of a stream under a morphism, concatenating letter images.

    Erasing images are allowed; if ``stall_bound`` consecutive input
    symbols produce no output the stream raises :class:`Stalled`.
    """
    images = morphism.images

    def gen():
        stall = 0
        for symbol in stream.cursor():
            image = images[symbol]
            if image:
                stall = 0
                yield from image
            else:
                stall += 1
                if stall >= stall_bound:
                    raise Stalled(
                        f"{stall_bound} consecutive symbols erased")

    return SymbolStream(gen, f"projection of {stream.description}")


def power(sigma, k):
    """The substitution sigma^k (images composed ``k`` times)."""
    if k < 1:
        raise ValueError("power must be at least 1")
    if k == 1:
        return sigma
    images = {a: sigma.iterate((a,), k) for a in sigma.alphabet}
    return Substitution(sigma.alphabet, images)


def mortal_letters(sigma):
    """Letters whose iterated image is eventually empty, with the least
    power that kills them all.

    Fixpoint iteration on the "image entirely mortal" predicate; the
    returned power never exceeds the alphabet size.
    """
    death = {}
    changed = True
    while changed:
        changed = False
        for letter in sigma.alphabet:
            if letter in death:
                continue
            image = sigma.images[letter]
            if all(x in death for x in image):
                death[letter] = 1 + max(
                    (death[x] for x in image), default=0)
                changed = True
    level = max(death.values(), default=0)
    return frozenset(death), level


def eliminate_erasing(sigma, seed):
    """A non-erasing substitution with the same projected fixed point.

    With ``B`` the mortal letters and ``l`` their dying time: the returned
    morphism ``zeta`` erases ``B`` and fixes the other letters, and the
    returned substitution ``tau`` maps each surviving letter ``c`` to
    ``zeta(sigma^max(l,1)(c))``.  Then ``zeta`` of the fixed point of
    ``sigma`` at ``seed`` is the fixed point of ``tau`` at ``seed``.
    """
    mortal, level = mortal_letters(sigma)
    if seed in mortal:
        raise SeedMortal(f"{seed!r} has an eventually empty image")
    survivors = [a for a in sigma.alphabet if a not in mortal]
    zeta = Morphism(sigma.alphabet, survivors,
                    {a: (() if a in mortal else (a,))
                     for a in sigma.alphabet})
    steps = max(level, 1)
    tau = Substitution(survivors,
                       {c: zeta(sigma.iterate((c,), steps))
                        for c in survivors})
    return tau, zeta


def _image_letter_sets(sigma):
    return {a: frozenset(sigma.images[a]) for a in sigma.alphabet}


def _set_step(letter_sets, subset):
    out = set()
    for letter in subset:
        out |= letter_sets[letter]
    return frozenset(out)


def stabilization_power(sigma):
    """The least power ``N`` after which the letter sets of iterated images
    are invariant: the letters of ``(sigma^N)^n(a)`` equal the letters of
    ``sigma^N(a)`` for every letter ``a`` and every ``n >= 1``.

    Candidates are multiples of the lcm of the per-letter eventual periods
    of the set sequence ``letters(sigma^n(a))``; everything runs on the
    subset abstraction, never on expanded words.
    """
    if sigma.is_erasing():
        raise Erasing("stabilization requires a non-erasing substitution")
    letter_sets = _image_letter_sets(sigma)
    size = len(sigma.alphabet)
    period_lcm = 1
    max_preperiod = 0
    for letter in sigma.alphabet:
        seen = {}
        current = frozenset([letter])
        n = 0
        while current not in seen:
            seen[current] = n
            current = _set_step(letter_sets, current)
            n += 1
        preperiod = seen[current]
        period = n - preperiod
        period_lcm = period_lcm * period // gcd(period_lcm, period)
        max_preperiod = max(max_preperiod, preperiod)
    candidate = period_lcm
    while True:
        ok = True
        for letter in sigma.alphabet:
            reference = frozenset([letter])
            for _ in range(candidate):
                reference = _set_step(letter_sets, reference)
            current = reference
            for _ in range(size + 1):
                for _ in range(candidate):
                    current = _set_step(letter_sets, current)
                if current != reference:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return candidate
        candidate += period_lcm


def block_substitution(sigma, stream, n, scan_bound=BLOCK_SCAN_BOUND):
    """Recode a fixed point by overlapping length-``n`` blocks.

    The block alphabet consists of the length-``n`` factors occurring in
    ``stream``, discovered lazily from the initial block and closed under
    the block substitution; each discovered block is checked against the
    factor set of the stream (within ``scan_bound`` symbols).  Returns
    the block substitution together with the first-letter projection,
    which intertwines it with ``sigma``.
    """
    if sigma.is_erasing():
        raise Erasing("block recoding requires a non-erasing substitution")
    if n < 1:
        raise ValueError("block length must be at least 1")
    start = stream.prefix(n)
    if len(start) < n:
        raise ValueError("stream shorter than one block")
    start = tuple(start)

    factors = set()
    cursor = stream.cursor()
    window = tuple(itertools.islice(cursor, n))
    factors.add(window)
    scanned = [n]

    def factor_of_stream(block):
        nonlocal window
        if block in factors:
            return True
        while scanned[0] < scan_bound:
            symbol = next(cursor)
            scanned[0] += 1
            window = window[1:] + (symbol,)
            factors.add(window)
            if block == window:
                return True
        return False

    def expand(block):
        word = sigma(block)
        width = len(sigma.images[block[0]])
        return tuple(word[i:i + n] for i in range(width))

    images = {}
    todo = [start]
    order = [start]
    known = {start}
    while todo:
        block = todo.pop()
        blocks = expand(block)
        images[block] = blocks
        for produced in blocks:
            if produced in known:
                continue
            if not factor_of_stream(produced):
                raise BlockNotInFixedPoint(
                    f"block {produced!r} not found in the first "
                    f"{scan_bound} symbols")
            known.add(produced)
            order.append(produced)
            todo.append(produced)

    sigma_n = Substitution(order, images)
    rho = Morphism(order, sigma.alphabet,
                   {block: (block[0],) for block in order})
    for block in order:
        if rho(sigma_n.images[block]) != sigma(rho((block,))):
            raise BlockNotInFixedPoint(
                f"intertwining failed on block {block!r}")  # unreachable
    return sigma_n, rho
