from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from latchsim import (
    AdmissibilityError,
    CircuitKind,
    InitialStateError,
    Pair,
    Signal,
    Trace,
    Unique,
    Violation,
    constant,
    derived_inputs,
    enumerate_initial_states,
    falling_edges,
    persistent,
    pulse,
    sample_grid,
    solve_c_element,
    solve_clocked_rs,
    solve_d_latch,
    solve_inertial,
    solve_master_slave,
    solve_rs,
    verify_circuit,
    verify_closed_form,
    verify_system,
)

from strategies import durations, signals


@st.composite
def clocked_stimuli(draw, max_changes=6):
    """Random inputs for every coupled circuit, with R.S.C == 0 arranged."""
    c = draw(signals(max_changes))
    s = draw(signals(max_changes))
    return {
        "C": c,
        "J": draw(signals(max_changes)),
        "K": draw(signals(max_changes)),
        "D": draw(signals(max_changes)),
        "S": s,
        "R": draw(signals(max_changes)) & ~(s & c),
    }


def _roles(kind, stim):
    return {r: stim[r] for r in CircuitKind(kind).input_roles}


def test_kind_validation():
    with pytest.raises(ValueError, match="unknown circuit kind"):
        CircuitKind("sr")
    with pytest.raises(ValueError, match="at least 2"):
        CircuitKind("c-element", m=1)
    with pytest.raises(ValueError, match="persistence window"):
        CircuitKind("inertial")
    with pytest.raises(ValueError, match="positive"):
        CircuitKind("inertial", d=0)
    assert CircuitKind("inertial", d="1/2").d == Fraction(1, 2)


def test_c_element_waits_for_agreement():
    sol = solve_c_element([pulse(1, 5), pulse(3, 8)])
    assert sol == Unique(pulse(3, 8))


def test_c_element_forced_high():
    assert solve_c_element([constant(1), constant(1)]) == Unique(constant(1))


def test_c_element_disagreeing_inputs_hold_forever():
    assert solve_c_element([constant(0), constant(1)]) == Pair(constant(0), constant(1), None)


def test_c_element_three_inputs():
    # high once all three agree at 1 (t=3), low once all agree at 0 (t=9)
    sol = solve_c_element([pulse(1, 9), pulse(2, 8), pulse(3, 7)])
    assert sol == Unique(pulse(3, 9))


def test_c_element_needs_two_inputs():
    with pytest.raises(ValueError, match="at least 2"):
        solve_c_element([pulse(1, 2)])


def test_rs_latch_set_hold_reset():
    sol = solve_rs(r=pulse(4, 6), s=pulse(1, 2))
    assert isinstance(sol, Pair)
    assert sol.x0 == pulse(1, 4)


def test_rs_latch_rejects_simultaneous_set_and_reset():
    with pytest.raises(AdmissibilityError):
        solve_rs(r=pulse(1, 3), s=pulse(2, 4))


def test_clocked_rs_only_listens_while_clock_high():
    sol = solve_clocked_rs(r=constant(0), s=pulse(1, 5), c=pulse(2, 3))
    assert sol.x0 == pulse(2)


def test_clocked_rs_tolerates_overlap_while_clock_low():
    sol = solve_clocked_rs(r=pulse(1, 3), s=pulse(1, 3), c=pulse(5, 6))
    assert sol.x0 == constant(0)
    with pytest.raises(AdmissibilityError):
        solve_clocked_rs(r=pulse(1, 3), s=pulse(1, 3), c=pulse(2, 6))


def test_d_latch_transparent_then_frozen():
    sol = solve_d_latch(d=pulse(2, 6), c=pulse(1, 3) ^ pulse(5, 7))
    assert sol.x0 == pulse(2, 6)


def test_t_flip_flop_toggles_at_falling_edges():
    clock = pulse(1, 2) ^ pulse(3, 4) ^ pulse(5, 6)
    trace = solve_master_slave("t-ff", {"C": clock}, 0, 0)
    assert trace.p == pulse(1, 3) ^ pulse(5)
    assert trace.q == pulse(2, 4) ^ pulse(6)


def test_edge_rs_master_can_move_twice_per_clock_phase():
    trace = solve_master_slave(
        "edge-rs",
        {"S": pulse("1/2", 2), "R": pulse("5/2", "7/2"), "C": pulse(1, 4)},
        0,
        0,
    )
    assert trace.p == pulse(1, "5/2")
    assert trace.q == constant(0)


def test_edge_rs_rejects_overlap_under_a_high_clock():
    with pytest.raises(AdmissibilityError, match="R, S and C"):
        solve_master_slave(
            "edge-rs",
            {"S": pulse(1, 3), "R": pulse(2, 4), "C": constant(1)},
            0,
            0,
        )


def test_jk_master_moves_once_then_slave_copies():
    stim = {"C": pulse(1, 3), "J": constant(0), "K": pulse("3/2", 2)}
    trace = solve_master_slave("jk", stim, 1, 1)
    assert trace.p == Signal(1, [(Fraction(3, 2), 0)])
    assert trace.q == Signal(1, [(3, 0)])


def test_jk_d_variant_differs_from_jk():
    stim = {"C": pulse(1, 3), "J": constant(0), "K": pulse("3/2", 2)}
    jk = solve_master_slave("jk", stim, 1, 1)
    variant = solve_master_slave("jk-d", stim, 1, 1)
    assert jk.q == Signal(1, [(3, 0)])
    assert variant.q == constant(1)
    assert jk.q(3) != variant.q(3)


def test_master_slave_rejects_inconsistent_start():
    with pytest.raises(InitialStateError):
        solve_master_slave("t-ff", {"C": pulse(1, 2)}, 0, 1)


def test_master_slave_checks_roles():
    with pytest.raises(ValueError, match="missing role"):
        solve_master_slave("jk", {"C": constant(0)}, 0, 0)
    with pytest.raises(ValueError, match="unexpected role"):
        solve_master_slave("t-ff", {"C": constant(0), "D": constant(0)}, 0, 0)


def test_inertial_short_pulse_is_ignored():
    sol = solve_inertial(pulse(1, 2), constant(0), 2)
    assert sol.x0 == constant(0)


def test_inertial_long_pulses_switch_late():
    sol = solve_inertial(pulse(1, 5), pulse(8, 11), 2)
    assert sol.x0 == pulse(3, 10)


def test_inertial_constant_inputs_pass_through():
    assert solve_inertial(constant(1), constant(0), 5) == Unique(constant(1))


def test_inertial_allows_brief_raw_overlap():
    sol = solve_inertial(pulse(1, 5), pulse(4, 6), 3)
    assert sol.x0 == pulse(4)


def test_inertial_rejects_persistent_overlap():
    with pytest.raises(AdmissibilityError, match="persistent"):
        solve_inertial(pulse(0, 10), Signal(0, [(1, 1)]), 2)


def test_enumerate_rs_latch():
    assert enumerate_initial_states("rs", {"R": pulse(4, 6), "S": pulse(1, 2)}) == [0, 1]
    assert enumerate_initial_states("rs", {"R": constant(0), "S": constant(1)}) == [1]
    assert enumerate_initial_states("rs", {"R": constant(1), "S": constant(0)}) == [0]


def test_enumerate_t_flip_flop():
    # clock low: the transparent slave ties Q to P; clock high: the master
    # must already disagree with Q
    assert enumerate_initial_states("t-ff", {"C": pulse(1, 2)}) == [(0, 0), (1, 1)]
    assert enumerate_initial_states("t-ff", {"C": Signal(1, [(2, 0)])}) == [(0, 1), (1, 0)]


def test_enumerate_matches_engine_acceptance():
    stim = {"C": pulse(1, 3), "J": constant(1), "K": constant(0)}
    good = enumerate_initial_states("jk", stim)
    for p, q in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        if (p, q) in good:
            solve_master_slave("jk", stim, p, q)
        else:
            with pytest.raises(InitialStateError):
                solve_master_slave("jk", stim, p, q)


def test_verify_circuit_accepts_solver_outputs():
    inputs = {"D": pulse(2, 6), "C": pulse(1, 3) ^ pulse(5, 7)}
    sol = solve_d_latch(inputs["D"], inputs["C"])
    assert verify_circuit("d-latch", Trace(CircuitKind("d-latch"), inputs, q=sol.x0)) is None

    clock = pulse(1, 2) ^ pulse(3, 4) ^ pulse(5, 6)
    trace = solve_master_slave("t-ff", {"C": clock}, 0, 0)
    assert verify_circuit("t-ff", trace) is None


def test_verify_circuit_catches_a_missed_set():
    trace = Trace(CircuitKind("rs"), {"S": pulse(1, 2), "R": constant(0)}, q=constant(0))
    assert verify_circuit("rs", trace) == Violation(Fraction(1))


def test_verify_circuit_checks_roles():
    with pytest.raises(ValueError, match="missing"):
        verify_circuit("jk", Trace(CircuitKind("jk"), {"C": constant(0)}, q=constant(0)))


@given(clocked_stimuli(), durations())
def test_single_latch_outputs_satisfy_the_general_checks(stim, d):
    cases = [
        ("rs", {"S": stim["S"] & ~stim["R"], "R": stim["R"] & ~stim["S"]}),
        ("clocked-rs", {"S": stim["S"], "R": stim["R"] & ~stim["S"], "C": stim["C"]}),
        ("d-latch", {"D": stim["D"], "C": stim["C"]}),
        ("c-element", {"u1": stim["J"], "u2": stim["K"]}),
        ("inertial", {"u": stim["S"] & ~stim["R"], "v": stim["R"] & ~stim["S"]}),
    ]
    for name, roles in cases:
        kind = CircuitKind(name, d=d) if name == "inertial" else CircuitKind(name)
        u, v = derived_inputs(kind, roles)
        import latchsim.solver as solver

        for x in solver.solve(u, v).solutions():
            assert verify_system(x, u, v) is None
            assert verify_closed_form(x, u, v) is None
            assert verify_circuit(kind, Trace(kind, roles, q=x)) is None


@given(clocked_stimuli())
def test_coupled_traces_verify_and_respect_falling_edges(stim):
    falls = set(falling_edges(stim["C"]))
    for name in ("edge-rs", "d-ff", "jk", "jk-d", "t-ff"):
        kind = CircuitKind(name)
        roles = _roles(name, stim)
        for p0, q0 in enumerate_initial_states(kind, roles):
            trace = solve_master_slave(kind, roles, p0, q0)
            assert verify_circuit(kind, trace) is None
            for t, _ in trace.q.changes:
                assert t in falls
                assert trace.q(t) == trace.p.left_limit(t)


@given(clocked_stimuli())
def test_t_flip_flop_toggles_at_every_falling_edge(stim):
    for p0, q0 in enumerate_initial_states("t-ff", {"C": stim["C"]}):
        trace = solve_master_slave("t-ff", {"C": stim["C"]}, p0, q0)
        for t in falling_edges(stim["C"]):
            assert trace.q(t) == trace.q.left_limit(t) ^ 1


@given(clocked_stimuli())
def test_jk_master_changes_at_most_once_per_high_phase(stim):
    roles = _roles("jk", stim)
    for p0, q0 in enumerate_initial_states("jk", roles):
        trace = solve_master_slave("jk", roles, p0, q0)
        for start, end, value in stim["C"].intervals():
            if value == 1:
                hits = [
                    t
                    for t, _ in trace.p.changes
                    if (start is None or t >= start) and (end is None or t < end)
                ]
                assert len(hits) <= 1


@given(signals())
def test_t_flip_flop_specializes_every_other_kind(clock):
    for p0, q0 in enumerate_initial_states("t-ff", {"C": clock}):
        base = solve_master_slave("t-ff", {"C": clock}, p0, q0)
        jk = solve_master_slave(
            "jk", {"J": constant(1), "K": constant(1), "C": clock}, p0, q0
        )
        dff = solve_master_slave("d-ff", {"D": ~base.q, "C": clock}, p0, q0)
        ers = solve_master_slave(
            "edge-rs", {"S": ~base.q, "R": base.q, "C": clock}, p0, q0
        )
        for other in (jk, dff, ers):
            assert other.p == base.p
            assert other.q == base.q


@given(signals(), signals())
def test_d_latch_transparency(d, c):
    for q in solve_d_latch(d, c).solutions():
        for t in sample_grid(d, c, q):
            if c(t) == 1:
                assert q(t) == d(t)
        for t, _ in q.changes:
            assert c(t) == 1


@given(signals(max_changes=6), signals(max_changes=6), durations())
def test_inertial_equals_the_filtered_plain_latch(u, v, d):
    filtered_u, filtered_v = persistent(u, d), persistent(v, d)
    import latchsim.solver as solver

    if (filtered_u & filtered_v) != constant(0):
        with pytest.raises(AdmissibilityError):
            solve_inertial(u, v, d)
    else:
        assert solve_inertial(u, v, d) == solver.solve(filtered_u, filtered_v)
