"""Sectioned instance files.

::

    # comment
    [sets]
    evens = prefix=;period=2;pattern=0
    [charges]
    d = atoms=;densities=1/1@(prefix=;period=1;pattern=0)
    [sequences]
    s = tails(prefix=;period=2;pattern=0)
    b = tails(branch=(01))
    [families]
    F = finite(d)
    P = pointmasses(prefix=;period=1;pattern=0)
    [generators]
    g = singletons
    [query]
    charge = d
    set = evens

Every value uses the text form of its type.  ``[query]`` names the objects a
command works on; commands fall back to the first entry of a section.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ._text import split_top
from .charges import Charge, ChargeFamily
from .compactness import DisjointSeqGen
from .epset import EPSet
from .errors import ChargeLabError, ParseError
from .families import Branch, BranchTail
from .sequences import ElementSequence

SECTIONS = ("sets", "charges", "sequences", "families", "generators", "query")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*$")


@dataclass
class FamilyEntry:
    """A family plus the charge names it was built from (``None`` for point masses)."""

    family: ChargeFamily
    names: tuple | None = None

    def text(self):
        if self.names is None:
            return f"pointmasses({self.family.support.text()})"
        return "finite(" + ",".join(self.names) + ")"


@dataclass
class Instance:
    sets: dict = field(default_factory=dict)
    charges: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    generators: dict = field(default_factory=dict)
    query: dict = field(default_factory=dict)

    def section(self, name):
        return getattr(self, name)

    def text(self):
        lines = []
        for name in SECTIONS:
            entries = self.section(name)
            if not entries:
                continue
            lines.append(f"[{name}]")
            for key, value in entries.items():
                lines.append(f"{key} = {value if name == 'query' else value.text()}")
        return "\n".join(lines) + "\n"


def parse_sequence(text):
    text = text.strip()
    if text.startswith("tails(branch="):
        return BranchTail(Branch.parse(text[6:-1]))
    return ElementSequence.parse(text)


def _parse_family(text, inst):
    text = text.strip()
    if text.startswith("pointmasses(") and text.endswith(")"):
        return FamilyEntry(ChargeFamily.point_masses(EPSet.parse(text[12:-1])))
    if text.startswith("finite(") and text.endswith(")"):
        body = text[7:-1].strip()
        names = tuple(n.strip() for n in split_top(body, ",")) if body else ()
        for n in names:
            if n not in inst.charges:
                raise ParseError(f"unknown charge {n!r}")
        return FamilyEntry(ChargeFamily.finite(inst.charges[n] for n in names), names)
    raise ParseError(f"bad family {text!r} (want finite(names) or pointmasses(EPSet))")


def parse_instance_text(text):
    inst = Instance()
    parsers = {
        "sets": EPSet.parse,
        "charges": Charge.parse,
        "sequences": parse_sequence,
        "families": lambda v: _parse_family(v, inst),
        "generators": DisjointSeqGen.parse,
        "query": lambda v: v.strip(),
    }
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]") or stripped[1:-1].strip() not in SECTIONS:
                raise ParseError(f"unknown section {stripped!r}", lineno,
                                 line.index("[") + 1)
            current = stripped[1:-1].strip()
            continue
        if current is None:
            raise ParseError("entry outside any section", lineno, 1)
        key, eq, value = line.partition("=")
        name = key.strip()
        if not eq or not _NAME.match(name):
            raise ParseError(f"expected '<name> = <value>', got {stripped!r}", lineno,
                             len(line) - len(line.lstrip()) + 1)
        entries = inst.section(current)
        if name in entries:
            raise ParseError(f"duplicate name {name!r} in [{current}]", lineno,
                             line.index(name) + 1)
        vcol = len(key) + 2 + len(value) - len(value.lstrip())
        try:
            entries[name] = parsers[current](value)
        except ParseError as exc:
            msg = str(exc).split(": ", 1)[1] if exc.column is not None else str(exc)
            raise ParseError(msg, lineno, vcol + (exc.column or 1) - 1) from exc
        except ChargeLabError as exc:
            raise _relocate(exc, lineno) from exc
    return inst


def _relocate(exc, lineno):
    try:
        return type(exc)(f"line {lineno}: {exc}")
    except TypeError:
        return ChargeLabError(f"line {lineno}: {exc}")


def parse_instance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance_text(fh.read())
