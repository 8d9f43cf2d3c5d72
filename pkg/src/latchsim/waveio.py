"""Reading and writing signals: stimulus language, tables, VCD, JSON tree.

The stimulus language is line-oriented UTF-8.  ``#`` starts a comment, blank
lines are ignored, and each remaining line is either a metadata directive or
a signal declaration::

    .circuit jk            # optional: circuit kind slug
    .m 3                   # optional: C element fan-in
    .d 1/2                 # optional: inertial persistence window

    S = 0, 1@1, 0@2        # name = initial value, then value@time changes
    C = 0, 1@1/2           # times are decimal or p/q literals, always exact

Times must strictly increase along a line and every error carries a line and
column.  Serializing a parsed document and reparsing it yields an equal
document; comments and whitespace are not model content.

Dumps use the classic value-change format with integer timestamps: all event
times are multiplied by the least common denominator and that factor is
recorded in a header comment, so descaling is exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping

from .signals import Bit, Signal, Time

__all__ = [
    "ParseError",
    "StimulusDocument",
    "WaveDump",
    "emit_text",
    "emit_vcd",
    "from_json",
    "from_tree",
    "make_dump",
    "parse_stimulus",
    "render_vcd",
    "round_trip",
    "serialize_stimulus",
    "to_json",
    "to_tree",
]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TIME_RE = re.compile(r"\d+/\d+|\d+\.\d+|\d+")


class ParseError(ValueError):
    """Syntax or consistency error in a stimulus document, with position."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class StimulusDocument:
    """Named signals plus optional circuit metadata, in declaration order."""

    signals: dict[str, Signal] = field(default_factory=dict)
    circuit: str | None = None
    m: int | None = None
    d: Time | None = None


class _Line:
    """Cursor over one source line, reporting 1-based columns."""

    def __init__(self, text: str, number: int):
        self.text = text
        self.number = number
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def fail(self, message: str, column: int | None = None):
        raise ParseError(message, self.number, (self.pos if column is None else column) + 1)

    def take(self, pattern: re.Pattern, what: str) -> tuple[str, int]:
        self.skip_ws()
        match = pattern.match(self.text, self.pos)
        if match is None:
            self.fail(f"expected {what}")
        self.pos = match.end()
        return match.group(), match.start()

    def take_literal(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            self.fail(f"expected {literal!r}")
        self.pos += len(literal)

    def take_time(self) -> tuple[Fraction, int]:
        token, col = self.take(_TIME_RE, "a time literal")
        try:
            return Fraction(token), col
        except ZeroDivisionError:
            self.fail(f"zero denominator in {token!r}", col)


def _parse_directive(line: _Line, doc: StimulusDocument):
    line.take_literal(".")
    key, col = line.take(_NAME_RE, "a directive name")
    if key == "circuit":
        line.skip_ws()
        value = line.text[line.pos:].strip()
        if not value:
            line.fail("expected a circuit kind")
        if doc.circuit is not None:
            line.fail("duplicate .circuit directive", col)
        doc.circuit = value
        line.pos = len(line.text)
    elif key == "m":
        token, _ = line.take(re.compile(r"\d+"), "an integer")
        if doc.m is not None:
            line.fail("duplicate .m directive", col)
        doc.m = int(token)
    elif key == "d":
        value, _ = line.take_time()
        if doc.d is not None:
            line.fail("duplicate .d directive", col)
        doc.d = value
    else:
        line.fail(f"unknown directive .{key}", col)
    if not line.at_end():
        line.fail("unexpected trailing text")


def _parse_signal_line(line: _Line, doc: StimulusDocument):
    name, name_col = line.take(_NAME_RE, "a signal name")
    if name in doc.signals:
        line.fail(f"duplicate signal name {name!r}", name_col)
    line.take_literal("=")
    bit_token, _ = line.take(re.compile(r"[01]"), "an initial bit (0 or 1)")
    changes: list[tuple[Time, Bit]] = []
    previous: Time | None = None
    while not line.at_end():
        line.take_literal(",")
        value_token, _ = line.take(re.compile(r"[01]"), "a bit (0 or 1)")
        line.take_literal("@")
        t, time_col = line.take_time()
        if previous is not None and t <= previous:
            line.fail(f"time {t} does not increase past {previous}", time_col)
        previous = t
        changes.append((t, int(value_token)))
    try:
        doc.signals[name] = Signal(int(bit_token), changes)
    except ValueError as exc:
        line.fail(str(exc), name_col)


def parse_stimulus(text: str) -> StimulusDocument:
    """Parse a stimulus document; raises :class:`ParseError` on any bad input."""
    doc = StimulusDocument()
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        line = _Line(content, number)
        if line.at_end():
            continue
        if content.lstrip().startswith("."):
            _parse_directive(line, doc)
        else:
            _parse_signal_line(line, doc)
    return doc


def serialize_stimulus(doc: StimulusDocument) -> str:
    lines = []
    if doc.circuit is not None:
        lines.append(f".circuit {doc.circuit}")
    if doc.m is not None:
        lines.append(f".m {doc.m}")
    if doc.d is not None:
        lines.append(f".d {doc.d}")
    for name, signal in doc.signals.items():
        parts = [f"{name} = {signal.initial}"]
        parts.extend(f", {v}@{t}" for t, v in signal.changes)
        lines.append("".join(parts))
    return "\n".join(lines) + "\n"


def round_trip(doc: StimulusDocument) -> StimulusDocument:
    """Serialize and reparse; the result equals the input document."""
    return parse_stimulus(serialize_stimulus(doc))


def _interval_rows(columns: Mapping[str, Signal]):
    times = sorted({t for s in columns.values() for t, _ in s.changes})
    bounds = [None, *times, None]
    for start, end in zip(bounds, bounds[1:]):
        if start is None:
            label = f"(-inf, {'inf' if end is None else end})"
            values = [s.initial for s in columns.values()]
        else:
            label = f"[{start}, {'inf' if end is None else end})"
            values = [s(start) for s in columns.values()]
        yield label, values


def emit_text(columns: Mapping[str, Signal]) -> str:
    """One row per constancy interval of the merged grid, one column per signal.

    The first row shows the values before any change, so the starting state
    is always visible.
    """
    rows = list(_interval_rows(columns))
    width = max([len("t")] + [len(label) for label, _ in rows])
    names = list(columns)
    out = ["  ".join(["t".ljust(width)] + names)]
    for label, values in rows:
        cells = [str(v).ljust(len(n)) for v, n in zip(values, names)]
        out.append("  ".join([label.ljust(width)] + cells).rstrip())
    return "\n".join(out) + "\n"


def _id_code(index: int) -> str:
    # bijective base-94 over the printable VCD identifier characters
    code = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 94)
        code = chr(33 + rem) + code
    return code


@dataclass(frozen=True)
class WaveDump:
    """A trace scaled to integer timestamps.

    ``denominator`` is the least common denominator of all change times, so
    every event tick divided by it reproduces the original rational instant
    exactly.
    """

    denominator: int
    variables: dict[str, str]
    initials: dict[str, Bit]
    events: tuple[tuple[int, str, Bit], ...]


def make_dump(columns: Mapping[str, Signal]) -> WaveDump:
    times = {t for s in columns.values() for t, _ in s.changes}
    denominator = lcm(*(t.denominator for t in times)) if times else 1
    variables = {name: _id_code(i) for i, name in enumerate(columns)}
    events = []
    for t in sorted(times):
        for name, signal in columns.items():
            if any(ct == t for ct, _ in signal.changes):
                events.append((int(t * denominator), variables[name], signal(t)))
    return WaveDump(
        denominator=denominator,
        variables=variables,
        initials={name: s.initial for name, s in columns.items()},
        events=tuple(events),
    )


def render_vcd(dump: WaveDump) -> str:
    lines = [
        f"$comment 1 tick = 1/{dump.denominator} time units $end",
        "$timescale 1 ns $end",
        "$scope module trace $end",
    ]
    lines.extend(f"$var wire 1 {code} {name} $end" for name, code in dump.variables.items())
    lines.extend(["$upscope $end", "$enddefinitions $end", "$dumpvars"])
    lines.extend(f"{dump.initials[name]}{code}" for name, code in dump.variables.items())
    lines.append("$end")
    current: int | None = None
    for tick, code, value in dump.events:
        if tick != current:
            lines.append(f"#{tick}")
            current = tick
        lines.append(f"{value}{code}")
    return "\n".join(lines) + "\n"


def emit_vcd(columns: Mapping[str, Signal]) -> str:
    """A value-change dump of the columns, exact under the recorded scale."""
    return render_vcd(make_dump(columns))


def to_tree(doc: StimulusDocument) -> dict:
    """The document as a JSON-ready tree.

    Schema: ``{"signals": [{"name", "initial", "changes": [[time, bit]]}]}``
    with times rendered as exact rational strings ("2", "1/2"), plus the
    optional "circuit", "m" and "d" metadata keys.
    """
    tree: dict = {
        "signals": [
            {
                "name": name,
                "initial": signal.initial,
                "changes": [[str(t), v] for t, v in signal.changes],
            }
            for name, signal in doc.signals.items()
        ]
    }
    if doc.circuit is not None:
        tree["circuit"] = doc.circuit
    if doc.m is not None:
        tree["m"] = doc.m
    if doc.d is not None:
        tree["d"] = str(doc.d)
    return tree


def from_tree(tree: Mapping) -> StimulusDocument:
    doc = StimulusDocument()
    for entry in tree["signals"]:
        name = entry["name"]
        if not _NAME_RE.fullmatch(name):
            raise ValueError(f"bad signal name {name!r}")
        if name in doc.signals:
            raise ValueError(f"duplicate signal name {name!r}")
        doc.signals[name] = Signal(
            entry["initial"], [(Fraction(t), v) for t, v in entry.get("changes", ())]
        )
    if "circuit" in tree:
        doc.circuit = tree["circuit"]
    if "m" in tree:
        doc.m = int(tree["m"])
    if "d" in tree:
        doc.d = Fraction(tree["d"])
    return doc


def to_json(doc: StimulusDocument) -> str:
    return json.dumps(to_tree(doc), indent=2) + "\n"


def from_json(text: str) -> StimulusDocument:
    return from_tree(json.loads(text))
