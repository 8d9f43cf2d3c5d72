"""Exact solvers and checkers for the one-bit ideal-latch behaviour.

The problem: given a set-side input ``u`` and a reset-side input ``v`` that
are never simultaneously 1 (the admissibility condition), find the state
``x`` that switches to 1 while ``u`` is 1, switches to 0 while ``v`` is 1,
and holds its previous value while both are 0.  Written with left limits,
the state must satisfy, at every instant t::

    not x(t-0) and x(t)  ==  not x(t-0) and u(t)      (clause 1)
    x(t-0) and not x(t)  ==  x(t-0) and v(t)          (clause 2)
    u(t) and v(t) == 0                                (clause 3)

Two independent solvers are provided and must agree:

* :func:`solve_stepping` walks the merged constancy intervals of (u, v) and
  applies set / reset / hold on each;
* :func:`solve_construction` builds the alternating schedule of rising-edge
  minima (first u-edge, first v-edge after it, ...) and flips the state at
  each scheduled instant.

When both inputs start at 0 the state's starting value is free and there are
two solutions; they merge at the first instant either input is 1.  When one
input starts at 1 the starting value is forced and the solution is unique.
:func:`solve` packages this case split.

:func:`verify_system` checks the three clauses directly; the equivalent
single-equation form is checked by :func:`verify_closed_form`::

    x(t) u(t) ~v(t)  or  ~x(t) ~u(t) v(t)
    or (~x(t-0) ~x(t) or x(t-0) x(t)) ~u(t) ~v(t)  ==  1
"""

from __future__ import annotations

from dataclasses import dataclass

from .signals import (
    Bit,
    Signal,
    Time,
    as_bit,
    first_activation,
    rising_edges,
    sample_grid,
)

__all__ = [
    "AdmissibilityError",
    "ConstructionTrace",
    "InitialStateError",
    "Pair",
    "Unique",
    "Violation",
    "check_admissibility",
    "consistent_inits",
    "instant_str",
    "solve",
    "solve_construction",
    "solve_stepping",
    "verify_closed_form",
    "verify_system",
]


def instant_str(at: Time | None) -> str:
    """Render an instant; None stands for the segment before any change (t=0-0)."""
    return "0-0" if at is None else str(at)


@dataclass(frozen=True)
class Violation:
    """Earliest point where a checked equation fails.

    ``at`` is None when the failure is already present in the initial values
    (before the first change); ``clause`` identifies the failing line for the
    three-clause system check and is None for single-equation checks.
    """

    at: Time | None
    clause: int | None = None

    def describe(self) -> str:
        where = f"t={instant_str(self.at)}"
        return where if self.clause is None else f"{where} (clause {self.clause})"


class AdmissibilityError(ValueError):
    """Set-side and reset-side inputs are simultaneously 1."""

    def __init__(self, at: Time | None, detail: str = "set and reset inputs are both 1"):
        self.at = at
        super().__init__(f"{detail} at t={instant_str(at)}")


class InitialStateError(ValueError):
    """Requested starting state contradicts the inputs' starting values."""


@dataclass(frozen=True)
class Unique:
    """The single solution of a problem whose starting state is forced."""

    x: Signal

    def solutions(self) -> tuple[Signal, ...]:
        return (self.x,)


@dataclass(frozen=True)
class Pair:
    """Both solutions of a problem whose starting state is free.

    ``x0`` starts at 0 and ``x1`` at 1; from ``coincide_from`` on (the first
    instant either input is 1) the two agree, and they never meet when the
    inputs stay 0 forever (``coincide_from`` is None).
    """

    x0: Signal
    x1: Signal
    coincide_from: Time | None

    def solutions(self) -> tuple[Signal, ...]:
        return (self.x0, self.x1)


@dataclass(frozen=True)
class ConstructionTrace:
    """Which case the edge-schedule solver took and the minima it selected.

    ``branch`` is "a.i" / "a.ii" (free start, from 0 / from 1), "b" (set input
    already 1, start forced to 1) or "c" (reset input already 1, start forced
    to 0).  ``schedule`` alternates between rising edges of the two inputs,
    starting with the input that moves the state away from its initial value.
    """

    branch: str
    schedule: tuple[Time, ...]


def check_admissibility(u: Signal, v: Signal) -> Violation | None:
    """None when u and v are never simultaneously 1, else the earliest overlap."""
    if u.initial & v.initial:
        return Violation(at=None, clause=3)
    for t, value in (u & v).changes:
        if value == 1:
            return Violation(at=t, clause=3)
    return None


def consistent_inits(u: Signal, v: Signal) -> list[Bit]:
    """The starting states compatible with the inputs' starting values."""
    if u.initial:
        return [1]
    if v.initial:
        return [0]
    return [0, 1]


def _require_admissible(u: Signal, v: Signal) -> None:
    violation = check_admissibility(u, v)
    if violation is not None:
        raise AdmissibilityError(violation.at)


def _require_consistent(u: Signal, v: Signal, init: Bit) -> Bit:
    init = as_bit(init)
    if u.initial and init == 0:
        raise InitialStateError("set input starts at 1, so the state must start at 1")
    if v.initial and init == 1:
        raise InitialStateError("reset input starts at 1, so the state must start at 0")
    return init


def solve_stepping(u: Signal, v: Signal, init: Bit) -> Signal:
    """Solve by walking the merged constancy intervals of the inputs.

    On each interval the state is 1 where u is 1, 0 where v is 1, and keeps
    its previous value where both are 0.
    """
    _require_admissible(u, v)
    value = _require_consistent(u, v, init)
    init = value
    changes: list[tuple[Time, Bit]] = []
    for t in sorted({t for t, _ in u.changes} | {t for t, _ in v.changes}):
        nxt = 1 if u(t) else (0 if v(t) else value)
        if nxt != value:
            changes.append((t, nxt))
            value = nxt
    return Signal(init, changes)


def solve_construction(u: Signal, v: Signal, init: Bit) -> tuple[Signal, ConstructionTrace]:
    """Solve by the alternating schedule of rising-edge minima.

    Starting from 0 the state flips at the first rising edge of u, then at
    the first rising edge of v after that, and so on; starting from 1 the
    roles are swapped (v first).  The schedule ends when the next required
    edge does not exist.
    """
    _require_admissible(u, v)
    init = _require_consistent(u, v, init)
    if init == 0:
        sources = (rising_edges(u), rising_edges(v))
        branch = "c" if v.initial else "a.i"
    else:
        sources = (rising_edges(v), rising_edges(u))
        branch = "b" if u.initial else "a.ii"
    schedule: list[Time] = []
    cursor: Time | None = None
    for step in range(len(sources[0]) + len(sources[1])):
        edges = sources[step % 2]
        nxt = next((t for t in edges if cursor is None or t > cursor), None)
        if nxt is None:
            break
        schedule.append(nxt)
        cursor = nxt
    value = init
    changes = []
    for t in schedule:
        value ^= 1
        changes.append((t, value))
    return Signal(init, changes), ConstructionTrace(branch, tuple(schedule))


def solve(u: Signal, v: Signal) -> Unique | Pair:
    """Solve for every admissible starting state.

    Returns :class:`Pair` when both inputs start at 0 (the starting state is
    free) and :class:`Unique` otherwise, with the forced starting value 1
    when u starts at 1 and 0 when v does.
    """
    _require_admissible(u, v)
    if u.initial:
        return Unique(solve_stepping(u, v, 1))
    if v.initial:
        return Unique(solve_stepping(u, v, 0))
    return Pair(
        solve_stepping(u, v, 0),
        solve_stepping(u, v, 1),
        first_activation(u, v),
    )


def _grid_with_initial(*signals: Signal):
    """Yield (at, values, left_limits) rows; the first row is the initial segment."""
    yield None, [s.initial for s in signals], [s.initial for s in signals]
    for t in sample_grid(*signals):
        yield t, [s(t) for s in signals], [s.left_limit(t) for s in signals]


def verify_system(x: Signal, u: Signal, v: Signal) -> Violation | None:
    """Check the three-clause system everywhere; None means it holds.

    An inadmissible input pair invalidates the state clauses, so clause 3 is
    reported first wherever it fails; otherwise the earliest failing instant
    wins, clause 1 before clause 2.
    """
    overlap = check_admissibility(u, v)
    if overlap is not None:
        return overlap
    for at, (xt, ut, vt), (xl, _, _) in _grid_with_initial(x, u, v):
        if (xl ^ 1) & xt != (xl ^ 1) & ut:
            return Violation(at, clause=1)
        if xl & (xt ^ 1) != xl & vt:
            return Violation(at, clause=2)
    return None


def verify_closed_form(x: Signal, u: Signal, v: Signal) -> Violation | None:
    """Check the single-equation form everywhere; agrees with verify_system."""
    for at, (xt, ut, vt), (xl, _, _) in _grid_with_initial(x, u, v):
        held = ((xl ^ 1) & (xt ^ 1)) | (xl & xt)
        value = (xt & ut & (vt ^ 1)) | ((xt ^ 1) & (ut ^ 1) & vt) | (held & (ut ^ 1) & (vt ^ 1))
        if value != 1:
            return Violation(at)
    return None
