"""Command-line driver: solve, verify, compare and enumerate-init.

Exit status: 0 on success / ok / equal, 1 when a check fails or the compared
traces differ, 2 on usage or input errors.  Identical invocations produce
byte-identical output; nothing is emitted before it has passed the circuit's
own closed-form check.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import circuits, solver, waveio
from .circuits import CircuitKind, Trace
from .signals import Signal, as_time
from .solver import Pair, Unique, instant_str
from .waveio import StimulusDocument

__all__ = ["entry", "main"]


class _UsageError(ValueError):
    pass


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latchsim",
        description="Exact solver and simulator for ideal latch and flip-flop circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--circuit", help="circuit kind (overrides the document's .circuit)")
        p.add_argument("--m", type=int, help="C element fan-in (c-element only)")
        p.add_argument("--d", help="inertial persistence window, e.g. 2 or 1/2 (inertial only)")
        p.add_argument(
            "stimulus", nargs="?", default="-",
            help="stimulus document path, or - for standard input",
        )

    p = sub.add_parser("solve", help="solve a circuit and emit the trace")
    common(p)
    p.add_argument("--init", action="append", default=[], metavar="NAME=BIT",
                   help="starting state, e.g. Q=0 or P=1,Q=1 (repeatable)")
    p.add_argument("--format", choices=("text", "dump", "structured"), default="text")
    p.add_argument("--out", help="write the artifact here instead of standard output")

    p = sub.add_parser("verify", help="check a full trace document against its circuit")
    common(p)

    p = sub.add_parser("compare", help="run two circuit kinds and diff their Q traces")
    common(p)
    p.add_argument("--against", required=True, help="second circuit kind")
    p.add_argument("--init", action="append", default=[], metavar="NAME=BIT")

    p = sub.add_parser("enumerate-init", help="list the consistent starting states")
    common(p)
    return parser


def _read_document(args) -> StimulusDocument:
    if args.stimulus == "-":
        text = sys.stdin.read()
    else:
        path = Path(args.stimulus)
        if not path.exists():
            raise _UsageError(f"no such stimulus file: {args.stimulus}")
        text = path.read_text(encoding="utf-8")
    return waveio.parse_stimulus(text)


def _build_kind(args, doc: StimulusDocument, name: str | None = None) -> CircuitKind:
    name = name or args.circuit or doc.circuit
    if name is None:
        raise _UsageError("no circuit kind given (use --circuit or a .circuit directive)")
    m = args.m if args.m is not None else doc.m
    d = args.d if args.d is not None else doc.d
    if m is not None and name != "c-element":
        raise _UsageError("--m / .m applies to the c-element only")
    if d is not None and name != "inertial":
        raise _UsageError("--d / .d applies to the inertial latch only")
    if name == "inertial":
        if d is None:
            raise _UsageError("the inertial latch needs --d or a .d directive")
        return CircuitKind(name, d=as_time(d))
    if name == "c-element":
        return CircuitKind(name, m=2 if m is None else m)
    return CircuitKind(name)


def _input_columns(kind: CircuitKind, doc: StimulusDocument) -> dict[str, Signal]:
    missing = [r for r in kind.input_roles if r not in doc.signals]
    if missing:
        raise _UsageError(f"{kind.name} needs signal(s) {', '.join(missing)} in the stimulus")
    # keep the document's declaration order for display
    return {n: doc.signals[n] for n in doc.signals if n in kind.input_roles}


def _parse_inits(pairs: list[str], allowed: tuple[str, ...]) -> dict[str, int]:
    inits: dict[str, int] = {}
    for chunk in pairs:
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                continue
            name, eq, value = item.partition("=")
            if eq != "=" or value not in ("0", "1"):
                raise _UsageError(f"bad --init entry {item!r}; expected NAME=0 or NAME=1")
            if name not in allowed:
                raise _UsageError(
                    f"--init names state signals only ({', '.join(allowed)}), got {name!r}"
                )
            if name in inits:
                raise _UsageError(f"duplicate --init entry for {name!r}")
            inits[name] = int(value)
    return inits


def _self_check(kind: CircuitKind, trace: Trace) -> None:
    violation = circuits.verify_circuit(kind, trace)
    if violation is not None:
        raise RuntimeError(f"internal error: solver output fails its own check at {violation.describe()}")


def _single_latch_traces(
    kind: CircuitKind, inputs: dict[str, Signal], inits: dict[str, int]
) -> tuple[list[tuple[str, Signal]], str | None]:
    """Solve a plain latch; returns labeled state columns and an optional note."""
    state = kind.state_roles[-1]
    solution = solver.solve(*circuits.derived_inputs(kind, inputs))
    if state in inits:
        wanted = inits[state]
        if isinstance(solution, Unique):
            x = solution.x
            if x.initial != wanted:
                raise _UsageError(
                    f"the inputs force {state}(0-0)={x.initial}; --init {state}={wanted} is inconsistent"
                )
        else:
            x = solution.x0 if wanted == 0 else solution.x1
        _self_check(kind, Trace(kind, inputs, q=x))
        return [(state, x)], None
    if isinstance(solution, Unique):
        _self_check(kind, Trace(kind, inputs, q=solution.x))
        return [(state, solution.x)], None
    for x in solution.solutions():
        _self_check(kind, Trace(kind, inputs, q=x))
    if solution.coincide_from is None:
        note = f"two solutions; {state} and {state}' never coincide"
    else:
        note = f"two solutions; {state} and {state}' coincide from t={solution.coincide_from}"
    return [(state, solution.x0), (f"{state}'", solution.x1)], note


def _emit(args, columns: dict[str, Signal], kind: CircuitKind, note: str | None) -> str:
    if args.format == "text":
        head = f"# {note}\n" if note else ""
        return head + waveio.emit_text(columns)
    if args.format == "dump":
        head = f"$comment {note} $end\n" if note else ""
        return head + waveio.emit_vcd(columns)
    doc = StimulusDocument(signals=columns, circuit=kind.name)
    if kind.name == "c-element":
        doc.m = kind.m
    if kind.name == "inertial":
        doc.d = kind.d
    tree = waveio.to_tree(doc)
    if note:
        tree["note"] = note
    return json.dumps(tree, indent=2) + "\n"


def _write(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    doc = _read_document(args)
    kind = _build_kind(args, doc)
    inputs = _input_columns(kind, doc)
    inits = _parse_inits(args.init, kind.state_roles)
    if not kind.is_master_slave:
        state_columns, note = _single_latch_traces(kind, inputs, inits)
        columns = dict(inputs)
        columns.update(state_columns)
        _write(args, _emit(args, columns, kind, note))
        return 0
    if not inits:
        states = circuits.enumerate_initial_states(kind, inputs)
        lines = ["ambiguous initial state; consistent assignments:"]
        lines += [f"  P={p} Q={q}" for p, q in states] or ["  none"]
        lines.append("rerun with --init P=...,Q=...")
        _write(args, "\n".join(lines) + "\n")
        return 0
    if set(inits) != {"P", "Q"}:
        raise _UsageError(f"{kind.name} needs both initial states, e.g. --init P=0,Q=0")
    trace = circuits.solve_master_slave(kind, inputs, inits["P"], inits["Q"])
    _self_check(kind, trace)
    columns = dict(inputs)
    columns["P"] = trace.p
    columns["Q"] = trace.q
    _write(args, _emit(args, columns, kind, None))
    return 0


def _cmd_verify(args) -> int:
    doc = _read_document(args)
    kind = _build_kind(args, doc)
    inputs = _input_columns(kind, doc)
    state = kind.state_roles[-1]
    missing = [r for r in kind.state_roles if r not in doc.signals]
    if missing:
        raise _UsageError(f"trace document is missing state signal(s): {', '.join(missing)}")
    trace = Trace(
        kind,
        inputs,
        q=doc.signals[state],
        p=doc.signals["P"] if kind.is_master_slave else None,
    )
    violation = circuits.verify_circuit(kind, trace)
    if violation is None:
        print("ok")
        return 0
    print(f"violation at t={instant_str(violation.at)}")
    return 1


def _resolve_q(kind: CircuitKind, doc: StimulusDocument, inits: dict[str, int]) -> Signal:
    inputs = _input_columns(kind, doc)
    if kind.is_master_slave:
        if set(inits) != {"P", "Q"}:
            raise _UsageError(f"{kind.name} needs --init P=...,Q=... for compare")
        return circuits.solve_master_slave(kind, inputs, inits["P"], inits["Q"]).q
    state = kind.state_roles[-1]
    solution = solver.solve(*circuits.derived_inputs(kind, inputs))
    if isinstance(solution, Unique):
        return solution.x
    if state not in inits and "Q" not in inits:
        raise _UsageError("the starting state is free; pass --init to pick one")
    wanted = inits.get(state, inits.get("Q"))
    return solution.x0 if wanted == 0 else solution.x1


def _first_difference(a: Signal, b: Signal):
    """None when equal, else the earliest instant (None meaning t=0-0) they differ."""
    if a == b:
        return (False, None)
    if a.initial != b.initial:
        return (True, None)
    for (ta, va), (tb, vb) in zip(a.changes, b.changes):
        if ta != tb:
            return (True, min(ta, tb))
        if va != vb:
            return (True, ta)
    longer = a.changes if len(a.changes) > len(b.changes) else b.changes
    return (True, longer[min(len(a.changes), len(b.changes))][0])


def _cmd_compare(args) -> int:
    doc = _read_document(args)
    kind_a = _build_kind(args, doc)
    kind_b = _build_kind(args, doc, name=args.against)
    allowed = tuple(dict.fromkeys(kind_a.state_roles + kind_b.state_roles))
    inits = _parse_inits(args.init, allowed)
    qa = _resolve_q(kind_a, doc, inits)
    qb = _resolve_q(kind_b, doc, inits)
    differs, at = _first_difference(qa, qb)
    if not differs:
        print("equal")
        return 0
    print(f"Q differs from t={instant_str(at)}")
    return 1


def _cmd_enumerate(args) -> int:
    doc = _read_document(args)
    kind = _build_kind(args, doc)
    inputs = _input_columns(kind, doc)
    states = circuits.enumerate_initial_states(kind, inputs)
    if not states:
        print("none")
        return 0
    if kind.is_master_slave:
        for p, q in states:
            print(f"P={p} Q={q}")
    else:
        name = kind.state_roles[-1]
        for value in states:
            print(f"{name}={value}")
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "compare": _cmd_compare,
    "enumerate-init": _cmd_enumerate,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:  # covers usage, parse, admissibility, init errors
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
