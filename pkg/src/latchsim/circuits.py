"""The latch and flip-flop catalogue built on the general solver.

Plain latches reduce to one set/reset problem by substituting their named
inputs:

* C element (m inputs): set = u1...um all 1, reset = all 0;
* RS latch: set = S, reset = R;
* clocked RS latch: set = S.C, reset = R.C (requires R.S.C == 0);
* D latch: set = D.C, reset = ~D.C;
* inertial latch: set/reset are the persistence-filtered u and v.

The coupled circuits (edge-triggered RS, D / JK / T flip-flops and the
D-latch-master JK variant) cascade a master latch clocked by C with a slave
D latch clocked by ~C reading the master's state P.  While C is 1 the slave
holds and the master tracks its inputs; while C is 0 the master holds and
the slave copies it, so the visible state Q moves only at falling clock
edges, where it takes P's left limit.  :func:`solve_master_slave` runs this
interval by interval; :func:`verify_circuit` re-checks any trace against the
circuit's own single-equation form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import solver
from .signals import (
    Bit,
    Signal,
    Time,
    TimeLike,
    as_bit,
    as_time,
    persistent,
    sample_grid,
)
from .solver import (
    AdmissibilityError,
    InitialStateError,
    Pair,
    Unique,
    Violation,
    check_admissibility,
    consistent_inits,
)

__all__ = [
    "CircuitKind",
    "KIND_NAMES",
    "MASTER_SLAVE_KINDS",
    "SINGLE_LATCH_KINDS",
    "Trace",
    "derived_inputs",
    "enumerate_initial_states",
    "solve_c_element",
    "solve_clocked_rs",
    "solve_d_latch",
    "solve_inertial",
    "solve_master_slave",
    "solve_rs",
    "verify_circuit",
]

SINGLE_LATCH_KINDS = ("c-element", "rs", "clocked-rs", "d-latch", "inertial")
MASTER_SLAVE_KINDS = ("edge-rs", "d-ff", "jk", "jk-d", "t-ff")
KIND_NAMES = SINGLE_LATCH_KINDS + MASTER_SLAVE_KINDS

_INPUT_ROLES = {
    "rs": ("S", "R"),
    "clocked-rs": ("S", "R", "C"),
    "d-latch": ("D", "C"),
    "inertial": ("u", "v"),
    "edge-rs": ("S", "R", "C"),
    "d-ff": ("D", "C"),
    "jk": ("J", "K", "C"),
    "jk-d": ("J", "K", "C"),
    "t-ff": ("C",),
}


@dataclass(frozen=True)
class CircuitKind:
    """A circuit model plus its parameters.

    ``m`` is the C element fan-in (>= 2, ignored elsewhere); ``d`` is the
    inertial latch's persistence window (> 0, required there only).
    """

    name: str
    m: int = 2
    d: Time | None = None

    def __post_init__(self):
        if self.name not in KIND_NAMES:
            raise ValueError(f"unknown circuit kind {self.name!r}; known: {', '.join(KIND_NAMES)}")
        if self.name == "c-element" and self.m < 2:
            raise ValueError(f"C element needs at least 2 inputs, got m={self.m}")
        if self.name == "inertial":
            if self.d is None:
                raise ValueError("inertial latch needs a persistence window d")
            object.__setattr__(self, "d", as_time(self.d))
            if self.d <= 0:
                raise ValueError(f"persistence window must be positive, got {self.d}")

    @property
    def input_roles(self) -> tuple[str, ...]:
        if self.name == "c-element":
            return tuple(f"u{i}" for i in range(1, self.m + 1))
        return _INPUT_ROLES[self.name]

    @property
    def state_roles(self) -> tuple[str, ...]:
        if self.name in MASTER_SLAVE_KINDS:
            return ("P", "Q")
        return ("x",) if self.name in ("c-element", "inertial") else ("Q",)

    @property
    def is_master_slave(self) -> bool:
        return self.name in MASTER_SLAVE_KINDS


def _as_kind(kind: "CircuitKind | str") -> CircuitKind:
    return kind if isinstance(kind, CircuitKind) else CircuitKind(kind)


@dataclass(frozen=True)
class Trace:
    """One circuit run: the named inputs, the state Q, and P when coupled.

    For the C element and the inertial latch the state column is named x
    instead of Q; :meth:`columns` applies the naming.
    """

    kind: CircuitKind
    inputs: dict[str, Signal]
    q: Signal
    p: Signal | None = None

    def columns(self) -> dict[str, Signal]:
        cols = dict(self.inputs)
        if self.p is not None:
            cols["P"] = self.p
        cols[self.kind.state_roles[-1]] = self.q
        return cols


def _pick_roles(kind: CircuitKind, stimulus: Mapping[str, Signal]) -> dict[str, Signal]:
    missing = [role for role in kind.input_roles if role not in stimulus]
    if missing:
        raise ValueError(f"{kind.name} stimulus is missing role(s): {', '.join(missing)}")
    extra = [name for name in stimulus if name not in kind.input_roles]
    if extra:
        raise ValueError(f"{kind.name} stimulus has unexpected role(s): {', '.join(extra)}")
    return {role: stimulus[role] for role in kind.input_roles}


def derived_inputs(kind: "CircuitKind | str", stimulus: Mapping[str, Signal]) -> tuple[Signal, Signal]:
    """Reduce a plain latch's named inputs to its (set, reset) pair."""
    kind = _as_kind(kind)
    sigs = _pick_roles(kind, stimulus)
    if kind.name == "c-element":
        return _c_element_inputs([sigs[r] for r in kind.input_roles])
    if kind.name == "rs":
        return sigs["S"], sigs["R"]
    if kind.name == "clocked-rs":
        return sigs["S"] & sigs["C"], sigs["R"] & sigs["C"]
    if kind.name == "d-latch":
        return sigs["D"] & sigs["C"], ~sigs["D"] & sigs["C"]
    if kind.name == "inertial":
        return persistent(sigs["u"], kind.d), persistent(sigs["v"], kind.d)
    raise ValueError(f"{kind.name} is not a plain latch")


def _c_element_inputs(inputs: Sequence[Signal]) -> tuple[Signal, Signal]:
    all_one = inputs[0]
    all_zero = ~inputs[0]
    for s in inputs[1:]:
        all_one = all_one & s
        all_zero = all_zero & ~s
    return all_one, all_zero


def solve_c_element(inputs: Sequence[Signal]) -> Unique | Pair:
    """State goes 1 when every input is 1, 0 when every input is 0, holds otherwise.

    The derived set/reset pair can never overlap, so any input combination
    is admissible.
    """
    if len(inputs) < 2:
        raise ValueError(f"C element needs at least 2 inputs, got {len(inputs)}")
    return solver.solve(*_c_element_inputs(inputs))


def solve_rs(r: Signal, s: Signal) -> Unique | Pair:
    """Set on S, reset on R; R and S must never be 1 together."""
    return solver.solve(s, r)


def solve_clocked_rs(r: Signal, s: Signal, c: Signal) -> Unique | Pair:
    """An RS latch that only listens while the clock C is 1."""
    return solver.solve(s & c, r & c)


def solve_d_latch(d: Signal, c: Signal) -> Unique | Pair:
    """Transparent while C is 1 (state copies D), frozen while C is 0."""
    return solver.solve(d & c, ~d & c)


def solve_inertial(u: Signal, v: Signal, d: TimeLike) -> Unique | Pair:
    """A latch that reacts only to input pulses longer than ``d``.

    Admissibility is required of the persistence-filtered inputs, not of the
    raw ones: short overlaps are filtered away before they matter.
    """
    set_side = persistent(u, d)
    reset_side = persistent(v, d)
    violation = check_admissibility(set_side, reset_side)
    if violation is not None:
        raise AdmissibilityError(violation.at, "persistent set and reset inputs overlap")
    return solver.solve(set_side, reset_side)


def _master_drive(kind: CircuitKind, vals: Mapping[str, Bit], q: Bit) -> tuple[Bit, Bit]:
    """The master latch's (set, reset) bits while the clock is 1."""
    name = kind.name
    if name == "edge-rs":
        return vals["S"], vals["R"]
    if name == "d-ff":
        return vals["D"], vals["D"] ^ 1
    if name == "jk":
        return vals["J"] & (q ^ 1), vals["K"] & q
    if name == "jk-d":
        data = (vals["J"] & (q ^ 1)) | ((vals["K"] ^ 1) & q)
        return data, data ^ 1
    if name == "t-ff":
        return q ^ 1, q
    raise ValueError(f"{name} is not a master-slave circuit")


def _step(kind: CircuitKind, vals: Mapping[str, Bit], p: Bit, q: Bit) -> tuple[Bit, Bit]:
    """New (P, Q) on a constancy interval, given the previous pair.

    Clock high: the slave holds Q and the master latches its drive; clock
    low: the master holds P and the transparent slave copies it.
    """
    if vals["C"] == 1:
        u, v = _master_drive(kind, vals, q)
        return (1 if u else 0 if v else p), q
    return p, p


def solve_master_slave(
    kind: "CircuitKind | str",
    stimulus: Mapping[str, Signal],
    init_p: Bit,
    init_q: Bit,
) -> Trace:
    """Run a coupled master-slave circuit from the given starting pair.

    The starting pair must already satisfy the circuit on the segment before
    the first input change (see :func:`enumerate_initial_states`).
    """
    kind = _as_kind(kind)
    if not kind.is_master_slave:
        raise ValueError(f"{kind.name} has no master-slave structure")
    sigs = _pick_roles(kind, stimulus)
    if kind.name == "edge-rs":
        overlap = check_admissibility(sigs["S"] & sigs["C"], sigs["R"] & sigs["C"])
        if overlap is not None:
            raise AdmissibilityError(overlap.at, "R, S and C are simultaneously 1")
    p = as_bit(init_p)
    q = as_bit(init_q)
    initial_vals = {role: s.initial for role, s in sigs.items()}
    if _step(kind, initial_vals, p, q) != (p, q):
        raise InitialStateError(
            f"(P={p}, Q={q}) does not satisfy the {kind.name} equations "
            f"before the first input change"
        )
    p_changes: list[tuple[Time, Bit]] = []
    q_changes: list[tuple[Time, Bit]] = []
    for t in sorted({t for s in sigs.values() for t, _ in s.changes}):
        vals = {role: s(t) for role, s in sigs.items()}
        p_next, q_next = _step(kind, vals, p, q)
        if p_next != p:
            p_changes.append((t, p_next))
        if q_next != q:
            q_changes.append((t, q_next))
        p, q = p_next, q_next
    return Trace(kind, sigs, q=Signal(init_q, q_changes), p=Signal(init_p, p_changes))


def enumerate_initial_states(
    kind: "CircuitKind | str", stimulus: Mapping[str, Signal]
) -> list[Bit] | list[tuple[Bit, Bit]]:
    """Starting states under which the circuit holds before the first change.

    Plain latches yield starting bits (two when both derived inputs start at
    0, one otherwise); coupled circuits yield (P, Q) pairs.  An empty list
    means no assignment works, i.e. the stimulus is over-constrained.
    """
    kind = _as_kind(kind)
    if not kind.is_master_slave:
        return consistent_inits(*derived_inputs(kind, stimulus))
    sigs = _pick_roles(kind, stimulus)
    initial_vals = {role: s.initial for role, s in sigs.items()}
    return [
        (p, q)
        for p in (0, 1)
        for q in (0, 1)
        if _step(kind, initial_vals, p, q) == (p, q)
    ]


def _same(a: Bit, b: Bit) -> Bit:
    return 1 ^ a ^ b


def _slave_term(v: Mapping[str, Bit], l: Mapping[str, Bit]) -> Bit:
    # clock low: P held and Q equal to it
    return ((v["Q"] ^ 1) & (l["P"] ^ 1) & (v["P"] ^ 1)) | (v["Q"] & l["P"] & v["P"])


def _rs_form(v, l, kind):
    return (
        (v["Q"] & (v["R"] ^ 1) & v["S"])
        | ((v["Q"] ^ 1) & v["R"] & (v["S"] ^ 1))
        | (_same(l["Q"], v["Q"]) & (v["R"] ^ 1) & (v["S"] ^ 1))
    )


def _clocked_rs_form(v, l, kind):
    return (v["C"] & _rs_form(v, l, kind)) | ((v["C"] ^ 1) & _same(l["Q"], v["Q"]))


def _d_latch_form(v, l, kind):
    tracks = ((v["Q"] ^ 1) & (v["D"] ^ 1)) | (v["Q"] & v["D"])
    return (v["C"] & tracks) | ((v["C"] ^ 1) & _same(l["Q"], v["Q"]))


def _c_element_form(v, l, kind):
    all_one = 1
    any_one = 0
    for i in range(1, kind.m + 1):
        all_one &= v[f"u{i}"]
        any_one |= v[f"u{i}"]
    return (
        (v["x"] & all_one)
        | ((v["x"] ^ 1) & (any_one ^ 1))
        | (_same(l["x"], v["x"]) & (all_one ^ 1) & any_one)
    )


def _inertial_form(v, l, kind):
    # U, V are the persistence-filtered inputs, added by verify_circuit
    return (
        (v["x"] & v["U"] & (v["V"] ^ 1))
        | ((v["x"] ^ 1) & (v["U"] ^ 1) & v["V"])
        | (_same(l["x"], v["x"]) & (v["U"] ^ 1) & (v["V"] ^ 1))
    )


def _edge_rs_form(v, l, kind):
    master = (
        (v["P"] & (v["R"] ^ 1) & v["S"])
        | ((v["P"] ^ 1) & v["R"] & (v["S"] ^ 1))
        | (_same(l["P"], v["P"]) & (v["R"] ^ 1) & (v["S"] ^ 1))
    )
    return (v["C"] & _same(l["Q"], v["Q"]) & master) | ((v["C"] ^ 1) & _slave_term(v, l))


def _d_ff_form(v, l, kind):
    master = ((v["P"] ^ 1) & (v["D"] ^ 1)) | (v["P"] & v["D"])
    return (v["C"] & _same(l["Q"], v["Q"]) & master) | ((v["C"] ^ 1) & _slave_term(v, l))


def _jk_form(v, l, kind):
    blocked = (
        ((v["J"] ^ 1) & (v["K"] ^ 1))
        | ((v["J"] ^ 1) & (v["Q"] ^ 1))
        | ((v["K"] ^ 1) & v["Q"])
    )
    master = (
        (v["P"] & v["J"] & (v["Q"] ^ 1))
        | ((v["P"] ^ 1) & v["K"] & v["Q"])
        | (_same(l["P"], v["P"]) & blocked)
    )
    return (v["C"] & _same(l["Q"], v["Q"]) & master) | ((v["C"] ^ 1) & _slave_term(v, l))


def _jk_d_form(v, l, kind):
    master = (
        (v["P"] & v["J"] & (v["Q"] ^ 1))
        | ((v["P"] ^ 1) & v["K"] & v["Q"])
        | ((v["P"] ^ 1) & (v["J"] ^ 1) & (v["Q"] ^ 1))
        | (v["P"] & (v["K"] ^ 1) & v["Q"])
    )
    return (v["C"] & _same(l["Q"], v["Q"]) & master) | ((v["C"] ^ 1) & _slave_term(v, l))


def _t_ff_form(v, l, kind):
    toggling = ((l["Q"] ^ 1) & (v["Q"] ^ 1) & v["P"]) | (l["Q"] & v["Q"] & (v["P"] ^ 1))
    return (v["C"] & toggling) | ((v["C"] ^ 1) & _slave_term(v, l))


_CLOSED_FORMS: dict[str, Callable] = {
    "rs": _rs_form,
    "clocked-rs": _clocked_rs_form,
    "d-latch": _d_latch_form,
    "c-element": _c_element_form,
    "inertial": _inertial_form,
    "edge-rs": _edge_rs_form,
    "d-ff": _d_ff_form,
    "jk": _jk_form,
    "jk-d": _jk_d_form,
    "t-ff": _t_ff_form,
}


def verify_circuit(kind: "CircuitKind | str", trace: Trace) -> Violation | None:
    """Re-check a trace against the circuit's single-equation form.

    Evaluates the equation on the segment before any change and at every
    sample-grid instant; returns None when it holds everywhere, else the
    earliest failing instant.  Every trace produced by the solve_* functions
    verifies clean.
    """
    kind = _as_kind(kind)
    columns = dict(_pick_roles(kind, trace.inputs))
    columns[kind.state_roles[-1]] = trace.q
    if kind.is_master_slave:
        if trace.p is None:
            raise ValueError(f"{kind.name} trace is missing the next-state signal P")
        columns["P"] = trace.p
    if kind.name == "inertial":
        columns["U"] = persistent(trace.inputs["u"], kind.d)
        columns["V"] = persistent(trace.inputs["v"], kind.d)
    form = _CLOSED_FORMS[kind.name]
    names = list(columns)
    sigs = list(columns.values())
    initial = {n: s.initial for n, s in columns.items()}
    if form(initial, initial, kind) != 1:
        return Violation(at=None)
    for t in sample_grid(*sigs):
        vals = {n: s(t) for n, s in zip(names, sigs)}
        lefts = {n: s.left_limit(t) for n, s in zip(names, sigs)}
        if form(vals, lefts, kind) != 1:
            return Violation(at=t)
    return None
