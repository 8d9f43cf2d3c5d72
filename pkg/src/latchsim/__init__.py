"""Exact event-time solving and simulation of ideal latch and flip-flop circuits.

The package models one-bit state elements over continuous time: inputs and
states are piecewise-constant 0/1 signals with exact rational change times.
`signals` provides the signal algebra, `solver` the general set/reset latch
solvers and verifiers, `circuits` the concrete circuit catalogue (C element,
RS family, D latch, master-slave flip-flops, inertial latch), `waveio` the
stimulus language and the table / VCD / JSON emitters, and `cli` the
command-line driver.
"""

from .circuits import (
    CircuitKind,
    KIND_NAMES,
    MASTER_SLAVE_KINDS,
    SINGLE_LATCH_KINDS,
    Trace,
    derived_inputs,
    enumerate_initial_states,
    solve_c_element,
    solve_clocked_rs,
    solve_d_latch,
    solve_inertial,
    solve_master_slave,
    solve_rs,
    verify_circuit,
)
from .signals import (
    Bit,
    Signal,
    Time,
    as_bit,
    as_time,
    combine,
    complement,
    constant,
    falling_edges,
    first_activation,
    persistent,
    pulse,
    rising_edges,
    sample_grid,
)
from .solver import (
    AdmissibilityError,
    ConstructionTrace,
    InitialStateError,
    Pair,
    Unique,
    Violation,
    check_admissibility,
    consistent_inits,
    instant_str,
    solve,
    solve_construction,
    solve_stepping,
    verify_closed_form,
    verify_system,
)
from .waveio import (
    ParseError,
    StimulusDocument,
    WaveDump,
    emit_text,
    emit_vcd,
    from_tree,
    make_dump,
    parse_stimulus,
    render_vcd,
    round_trip,
    serialize_stimulus,
    to_tree,
)

__version__ = "0.1.0"
