"""Piecewise-constant Boolean signals over exact rational time.

A signal maps every instant to 0 or 1.  It is constant before its first
change point, constant on each left-closed right-open interval between
consecutive change points, and constant forever after the last one.  Change
times are exact rationals (``fractions.Fraction``), so instants compare
exactly and the left limit at a change point is well defined; floats are
rejected to keep time arithmetic exact.

Signals are immutable values.  Every operation returns a new, normalized
signal, and two normalized signals are structurally equal exactly when they
are pointwise equal.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Callable, Iterable, Iterator

Bit = int
Time = Fraction
TimeLike = Fraction | int | str

__all__ = [
    "Bit",
    "Time",
    "Signal",
    "as_bit",
    "as_time",
    "combine",
    "complement",
    "constant",
    "falling_edges",
    "first_activation",
    "persistent",
    "pulse",
    "rising_edges",
    "sample_grid",
]


def as_time(value: TimeLike) -> Time:
    """Convert to an exact rational instant; floats are refused."""
    if isinstance(value, float):
        raise ValueError(
            f"float time {value!r} is inexact; pass an int, a Fraction, "
            f"or a string such as '0.5' or '1/2'"
        )
    return Fraction(value)


def as_bit(value: int) -> Bit:
    if value not in (0, 1):
        raise ValueError(f"bit value must be 0 or 1, got {value!r}")
    return int(value)


class Signal:
    """A piecewise-constant 0/1 function of time.

    ``initial`` is the value everywhere before the first change; ``changes``
    is the normalized list of (time, new value) pairs with strictly
    increasing nonnegative times and strictly alternating values.  At a
    change time the new value already holds (left-closed semantics), while
    :meth:`left_limit` reports the value immediately before.

    Evaluate with plain calls: ``s(t)``.  The operators ``~ & | ^`` act
    pointwise.
    """

    __slots__ = ("initial", "changes", "_times")

    def __init__(self, initial: Bit, changes: Iterable[tuple[TimeLike, Bit]] = ()):
        self.initial = as_bit(initial)
        kept: list[tuple[Time, Bit]] = []
        previous: Time | None = None
        value = self.initial
        for index, (raw_time, raw_bit) in enumerate(changes):
            try:
                t = as_time(raw_time)
                bit = as_bit(raw_bit)
            except ValueError as exc:
                raise ValueError(f"change {index}: {exc}") from None
            if t < 0:
                raise ValueError(f"change {index}: negative time {t}")
            if previous is not None and t <= previous:
                raise ValueError(
                    f"change {index}: time {t} does not increase past {previous}"
                )
            previous = t
            if bit != value:
                kept.append((t, bit))
                value = bit
        self.changes = tuple(kept)
        self._times = tuple(t for t, _ in kept)

    def __call__(self, t: TimeLike) -> Bit:
        """The value at instant ``t``."""
        idx = bisect_right(self._times, as_time(t))
        return self.changes[idx - 1][1] if idx else self.initial

    def left_limit(self, t: TimeLike) -> Bit:
        """The value immediately before ``t`` (``initial`` when t <= first change)."""
        idx = bisect_left(self._times, as_time(t))
        return self.changes[idx - 1][1] if idx else self.initial

    @property
    def final_value(self) -> Bit:
        return self.changes[-1][1] if self.changes else self.initial

    def is_constant(self) -> bool:
        return not self.changes

    def intervals(self) -> Iterator[tuple[Time | None, Time | None, Bit]]:
        """Maximal constancy intervals as (start, end, value); None is +-infinity."""
        start: Time | None = None
        value = self.initial
        for t, v in self.changes:
            yield start, t, value
            start, value = t, v
        yield start, None, value

    def __invert__(self) -> "Signal":
        return complement(self)

    def __and__(self, other: "Signal") -> "Signal":
        if not isinstance(other, Signal):
            return NotImplemented
        return combine(lambda a, b: a & b, self, other)

    def __or__(self, other: "Signal") -> "Signal":
        if not isinstance(other, Signal):
            return NotImplemented
        return combine(lambda a, b: a | b, self, other)

    def __xor__(self, other: "Signal") -> "Signal":
        if not isinstance(other, Signal):
            return NotImplemented
        return combine(lambda a, b: a ^ b, self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.initial == other.initial and self.changes == other.changes

    def __hash__(self) -> int:
        return hash((self.initial, self.changes))

    def __repr__(self) -> str:
        body = ", ".join(f"({t}, {v})" for t, v in self.changes)
        return f"Signal({self.initial}, [{body}])"


def constant(value: Bit) -> Signal:
    return Signal(value)


def pulse(start: TimeLike, end: TimeLike | None = None) -> Signal:
    """The signal that is 1 on [start, end) and 0 elsewhere (end None = forever)."""
    s = as_time(start)
    if s < 0:
        raise ValueError(f"pulse start {s} is negative")
    if end is None:
        return Signal(0, [(s, 1)])
    e = as_time(end)
    if e <= s:
        raise ValueError(f"pulse end {e} does not follow start {s}")
    return Signal(0, [(s, 1), (e, 0)])


def complement(s: Signal) -> Signal:
    return Signal(s.initial ^ 1, [(t, v ^ 1) for t, v in s.changes])


def combine(op: Callable[[Bit, Bit], Bit], a: Signal, b: Signal) -> Signal:
    """Apply a binary bit operator pointwise; the result is normalized."""
    times = sorted({t for t, _ in a.changes} | {t for t, _ in b.changes})
    return Signal(op(a.initial, b.initial), [(t, op(a(t), b(t))) for t in times])


def rising_edges(s: Signal) -> tuple[Time, ...]:
    """All instants where the value switches 0 -> 1."""
    return tuple(t for t, v in s.changes if v == 1)


def falling_edges(s: Signal) -> tuple[Time, ...]:
    return tuple(t for t, v in s.changes if v == 0)


def persistent(s: Signal, duration: TimeLike) -> Signal:
    """Filter out 1-phases shorter than ``duration``.

    The result is 1 at t exactly when ``s`` has been 1 throughout the whole
    closed window [t - duration, t]; a maximal 1-interval [a, b) of ``s``
    therefore survives as [a + duration, b) and disappears when it is not
    longer than the window.
    """
    d = as_time(duration)
    if d <= 0:
        raise ValueError(f"persistence window must be positive, got {d}")
    spans: list[tuple[Time | None, Time | None]] = []
    for start, end, value in s.intervals():
        if value == 0:
            continue
        if start is None:
            spans.append((None, end))
        elif end is None or start + d < end:
            spans.append((start + d, end))
    changes: list[tuple[Time, Bit]] = []
    for start, end in spans:
        if start is not None:
            changes.append((start, 1))
        if end is not None:
            changes.append((end, 0))
    return Signal(1 if spans and spans[0][0] is None else 0, changes)


def first_activation(u: Signal, v: Signal) -> Time | None:
    """The least t >= 0 where u or v is 1, or None if neither ever is."""
    union = u | v
    if union(0) == 1:
        return Fraction(0)
    for t, value in union.changes:
        if value == 1 and t > 0:
            return t
    return None


def sample_grid(*signals: Signal) -> list[Time]:
    """Finitely many instants that pin down any pointwise combination.

    Contains every change time of the operands, the midpoint of each pair of
    consecutive change times, t = 0, and one point past the last change.
    Piecewise-constant functions over the operands' change points are fully
    determined by their values (and left limits) here.
    """
    times = sorted({t for s in signals for t, _ in s.changes})
    points = {Fraction(0)}
    points.update(times)
    for a, b in zip(times, times[1:]):
        points.add((a + b) / 2)
    points.add((times[-1] + 1) if times else Fraction(1))
    return sorted(points)
