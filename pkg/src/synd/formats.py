"""Text and JSON readers/writers for automata, substitutions and morphisms.

DFA text format, one item per line::

    alphabet: a<b
    initial: A
    finals: A B
    trans: A a A
    trans: A b B
    trans: B b B

The JSON equivalent uses the same field names (``alphabet`` may be either
the ``a<b`` string or a list).  Both parsers reject duplicate transitions.

Substitution / morphism rule files hold one rule per line, ``a -> aab``;
``a -> .`` denotes the empty image.  Images containing multi-character
letters are written space-separated.
"""

import json

from .automata import Dfa
from .errors import ParseError


def _split_alphabet(text):
    symbols = [s.strip() for s in text.split("<")]
    if any(not s for s in symbols):
        raise ParseError(f"bad alphabet {text!r}")
    return symbols


def parse_dfa_text(text):
    alphabet = None
    initial = None
    finals = None
    transitions = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line=lineno)
        key, _, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if key == "alphabet":
            try:
                alphabet = _split_alphabet(rest)
            except ParseError as exc:
                raise ParseError(str(exc), line=lineno) from None
        elif key == "initial":
            initial = rest
        elif key == "finals":
            finals = rest.split()
        elif key == "trans":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("expected 'trans: state symbol state'",
                                 line=lineno)
            q, a, t = parts
            if (q, a) in transitions:
                raise ParseError(f"duplicate transition ({q}, {a})",
                                 line=lineno)
            transitions[(q, a)] = t
        else:
            raise ParseError(f"unknown key {key!r}", line=lineno)
    if alphabet is None or initial is None or finals is None:
        raise ParseError("alphabet, initial and finals are all required")
    _check_symbols(alphabet, transitions)
    return Dfa.from_named(alphabet, initial, finals, transitions)


def parse_dfa_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", line=exc.lineno) from None
    try:
        alphabet = data["alphabet"]
        initial = data["initial"]
        finals = data["finals"]
        trans = data["trans"]
    except (KeyError, TypeError):
        raise ParseError("fields alphabet, initial, finals, trans required") from None
    if isinstance(alphabet, str):
        alphabet = _split_alphabet(alphabet)
    transitions = {}
    for entry in trans:
        if len(entry) != 3:
            raise ParseError(f"bad transition entry {entry!r}")
        q, a, t = entry
        if (q, a) in transitions:
            raise ParseError(f"duplicate transition ({q}, {a})")
        transitions[(q, a)] = t
    _check_symbols(alphabet, transitions)
    return Dfa.from_named(alphabet, initial, finals, transitions)


def _check_symbols(alphabet, transitions):
    known = set(alphabet)
    for (_, a) in transitions:
        if a not in known:
            raise ParseError(f"transition symbol {a!r} not in alphabet")


def load_dfa(path):
    """Read a DFA file, dispatching on a .json suffix."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    if str(path).endswith(".json"):
        return parse_dfa_json(text)
    return parse_dfa_text(text)


def dump_dfa_text(d):
    lines = ["alphabet: " + "<".join(str(a) for a in d.alphabet),
             f"initial: {d.names[d.initial]}",
             "finals: " + " ".join(d.names[q] for q in sorted(d.finals))]
    for q in range(d.n_states):
        for a, t in d.defined(q):
            lines.append(f"trans: {d.names[q]} {a} {d.names[t]}")
    return "\n".join(lines) + "\n"


def parse_rules(text):
    """Rule lines ``letter -> image`` as an ordered mapping letter -> word."""
    images = {}
    order = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise ParseError("expected 'letter -> image'", line=lineno)
        left, _, right = line.partition("->")
        letter = left.strip()
        if not letter:
            raise ParseError("empty left-hand side", line=lineno)
        if letter in images:
            raise ParseError(f"duplicate rule for {letter!r}", line=lineno)
        body = right.strip()
        if body == ".":
            image = ()
        elif " " in body:
            image = tuple(body.split())
        else:
            image = tuple(body)
        images[letter] = image
        order.append(letter)
    if not images:
        raise ParseError("no rules found")
    return images, order


def load_substitution(path):
    from .substitution import Substitution

    with open(path, encoding="utf-8") as handle:
        images, order = parse_rules(handle.read())
    alphabet = list(order)
    for image in images.values():
        for letter in image:
            if letter not in images:
                raise ParseError(
                    f"letter {letter!r} appears in an image but has no rule")
    return Substitution(alphabet, images)


def load_morphism(path):
    from .substitution import Morphism

    with open(path, encoding="utf-8") as handle:
        images, order = parse_rules(handle.read())
    target = []
    for image in images.values():
        for letter in image:
            if letter not in target:
                target.append(letter)
    return Morphism(order, target or ["0"], images)


def dump_rules(images, order=None):
    order = list(images) if order is None else order
    lines = []
    for letter in order:
        image = images[letter]
        if not image:
            body = "."
        elif any(len(str(x)) > 1 for x in image):
            body = " ".join(str(x) for x in image)
        else:
            body = "".join(str(x) for x in image)
        lines.append(f"{letter} -> {body}")
    return "\n".join(lines) + "\n"
