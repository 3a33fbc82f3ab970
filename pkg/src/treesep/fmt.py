"""Shared helpers for the line-oriented automaton text formats.

All formats share the same skeleton: an ``alphabet:`` section with one
``letter/arity`` (or bare ``letter``) line per letter, single-line sections
like ``states:`` or ``accepting:``, then one line per transition.  Blank
lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import re

from .errors import FormatError
from .trees import RankedAlphabet

_TRANS = re.compile(r"^(?P<lhs>.+?)->(?P<rhs>.+)$")


def logical_lines(text: str):
    """Yield (lineno, stripped-line) with comments and blanks removed."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def split_document(text: str):
    """Split into (alphabet letters dict or None, headers dict, transition lines).

    Headers are lines of the form ``name: value...``; transition lines are
    everything containing ``->``.  Alphabet entries are the lines between
    ``alphabet:`` and the next header.
    """
    letters = None
    headers = {}
    transitions = []
    in_alphabet = False
    for lineno, line in logical_lines(text):
        if "->" in line:
            in_alphabet = False
            transitions.append((lineno, line))
            continue
        m = re.match(r"^([A-Za-z_][A-Za-z0-9_-]*)\s*:\s*(.*)$", line)
        if m:
            name, value = m.group(1), m.group(2).strip()
            if name == "alphabet":
                letters = {}
                in_alphabet = True
                if value:
                    raise FormatError(f"line {lineno}: alphabet entries go on their own lines")
            else:
                in_alphabet = False
                if name in headers:
                    raise FormatError(f"line {lineno}: duplicate header {name!r}")
                headers[name] = (lineno, value)
            continue
        if in_alphabet:
            if "/" in line:
                name, _, ar = line.partition("/")
                name, ar = name.strip(), ar.strip()
                if not ar.isdigit():
                    raise FormatError(f"line {lineno}: bad arity in {line!r}")
                letters[name] = int(ar)
            else:
                letters[line] = 0
            continue
        raise FormatError(f"line {lineno}: cannot interpret {line!r}")
    return letters, headers, transitions


def require_header(headers, name, where):
    if name not in headers:
        raise FormatError(f"{where}: missing {name!r} header")
    return headers[name][1]


def header_tokens(headers, name):
    if name not in headers:
        return []
    return headers[name][1].split()


def parse_alphabet(letters, where) -> RankedAlphabet:
    if letters is None:
        raise FormatError(f"{where}: missing alphabet section")
    return RankedAlphabet(letters)


def split_transition(lineno: int, line: str):
    """Split a transition line at ``->``; returns (lhs, rhs) stripped."""
    m = _TRANS.match(line)
    if not m:
        raise FormatError(f"line {lineno}: expected a transition with '->'")
    return m.group("lhs").strip(), m.group("rhs").strip()


def parse_application(lineno: int, text: str):
    """Parse ``letter(x1,...,xn)`` or bare ``letter``; returns (letter, tuple)."""
    text = text.strip()
    m = re.fullmatch(r"([A-Za-z0-9]+)\s*(?:\(([^)]*)\))?", text)
    if not m:
        raise FormatError(f"line {lineno}: bad application {text!r}")
    letter = m.group(1)
    inner = m.group(2)
    if inner is None or not inner.strip():
        return letter, ()
    return letter, tuple(part.strip() for part in inner.split(","))
