"""Lazy, restartable symbol streams.

A :class:`SymbolStream` wraps a zero-argument generator factory.  Every
cursor obtained from the stream replays the same deterministic sequence,
so two cursors over the same definition agree symbol by symbol and a
stream can be re-read as often as needed.  Streams are unbounded; callers
take prefixes.
"""

import itertools


class SymbolStream:
    """An unbounded sequence of symbols defined by a pure generator factory."""

    def __init__(self, factory, description=""):
        self._factory = factory
        self.description = description

    def cursor(self):
        """Return a fresh iterator positioned at the first symbol."""
        return self._factory()

    def __iter__(self):
        return self.cursor()

    def prefix(self, n):
        """The first ``n`` symbols as a tuple."""
        return tuple(itertools.islice(self.cursor(), n))

    def __repr__(self):
        return f"SymbolStream({self.description or '...'})"

    @staticmethod
    def constant(symbol):
        def gen():
            while True:
                yield symbol

        return SymbolStream(gen, f"constant {symbol!r}")

    @staticmethod
    def eventually_periodic(preperiod, cycle):
        """The stream ``preperiod`` followed by ``cycle`` repeated forever."""
        if not cycle:
            raise ValueError("cycle must be non-empty")
        pre = tuple(preperiod)
        cyc = tuple(cycle)

        def gen():
            yield from pre
            while True:
                yield from cyc

        return SymbolStream(gen, f"{pre}({cyc})^w")


def sliding_blocks(stream, n):
    """Stream of overlapping length-``n`` windows of ``stream`` (as tuples)."""

    def gen():
        cursor = stream.cursor()
        window = tuple(itertools.islice(cursor, n))
        if len(window) < n:
            return
        yield window
        for symbol in cursor:
            window = window[1:] + (symbol,)
            yield window

    return SymbolStream(gen, f"{n}-blocks of {stream.description}")
