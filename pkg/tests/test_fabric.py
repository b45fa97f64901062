import math
from itertools import combinations_with_replacement

import pytest

from tpagg.fabric import (
    CapacityError,
    ContentionError,
    FabricConfig,
    InvariantError,
    LossBudgetParams,
    OutputMode,
    PortBusyError,
    add_connection,
    fiber_break_reroute,
    interferer_count,
    mcs_evaluate,
    mxn_wss_evaluate,
    new_fabric,
    plan_reconfiguration,
    remove_connection,
    required_wss_count,
    signal_loss,
    signal_osnr_at_oxc,
    validate_state,
    wss_function_count_mxn,
)
from tpagg.grid import channel_from_frequency

ZERO = LossBudgetParams(
    fiber_coupling_db=0.0,
    wss_db=0.0,
    coupler_mode_extra_db=0.0,
    filtered_amp_osnr_penalty_db=0.0,
)


def ch(slot, width=87.5):
    """Channel on the 87.5 GHz grid starting at 193.1 THz."""
    return channel_from_frequency(193.1 + 0.0875 * slot, width)


def build(config, placements):
    """Apply (trx, degree) adds in order, validating after each step."""
    state = new_fabric(config)
    for slot, (trx, degree) in enumerate(placements):
        state, _ = add_connection(state, trx, degree, ch(slot))
        validate_state(state)
    return state


class TestRequiredWssCount:
    @pytest.mark.parametrize(
        "n,k,expected",
        [(8, 2, 2), (24, 2, 8), (24, 4, 4), (24, 8, 2), (1, 2, 0), (12, 3, 3)],
    )
    def test_table(self, n, k, expected):
        assert required_wss_count(n, k) == expected

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            required_wss_count(0, 2)
        with pytest.raises(ValueError):
            required_wss_count(8, 0)

    def test_independent_of_degree_count(self):
        # the pool is sized by transponders only; no degree term exists
        assert required_wss_count(24, 2) == 8

    def test_sufficiency_spot_check(self):
        # no split of 10 signals over 4 degrees can need more than L filters
        n, m, k = 10, 4, 2
        limit = required_wss_count(n, k)
        for cut in combinations_with_replacement(range(n + 1), m - 1):
            parts = []
            last = 0
            for c in sorted(cut):
                parts.append(c - last)
                last = c
            parts.append(n - last)
            assert sum(1 for p in parts if p > k) <= limit


class TestConfig:
    def test_default_wss_pool(self):
        assert FabricConfig(8, 8, 2).wss_count == 2
        assert FabricConfig(24, 8, 4).wss_count == 4
        assert FabricConfig(1, 1, 1).wss_count == 0

    def test_explicit_pool_kept(self):
        assert FabricConfig(8, 8, 2, wss_count=5).wss_count == 5

    def test_rejects_bad_cap(self):
        with pytest.raises(ValueError):
            FabricConfig(8, 8, 0)
        with pytest.raises(ValueError):
            FabricConfig(8, 8, 9)

    def test_new_fabric_empty(self):
        state = new_fabric(FabricConfig(8, 8, 2))
        assert state.connections == {}
        assert state.wss_map == {}
        assert all(m is OutputMode.DIRECT for m in state.modes.values())
        validate_state(state)


class TestAddConnection:
    def test_first_signal_goes_direct(self):
        state = new_fabric(FabricConfig(8, 8, 2))
        state, result = add_connection(state, 1, 1, ch(0))
        assert result.wss_id is None
        assert result.rehomed == ()
        validate_state(state)

    def test_groups_of_three_take_one_wss_each(self):
        state = build(
            FabricConfig(8, 8, 2),
            [(1, 1), (2, 1), (3, 2), (4, 2), (5, 2), (6, 3), (7, 3), (8, 3)],
        )
        assert [c.path_label for c in state.connections_on(1)] == ["direct", "direct"]
        assert {c.wss_id for c in state.connections_on(2)} == {1}
        assert {c.wss_id for c in state.connections_on(3)} == {2}
        assert state.wss_map == {1: 2, 2: 3}
        assert state.modes[2] is OutputMode.FILTERED

    def test_overflow_rehomes_whole_group(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1)])
        state, result = add_connection(state, 3, 1, ch(5))
        assert result.wss_id == 1
        assert result.rehomed == (1, 2)
        assert all(c.wss_id == 1 for c in state.connections_on(1))
        validate_state(state)

    def test_join_existing_wss(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1), (3, 1)])
        state, result = add_connection(state, 4, 1, ch(9))
        assert result.wss_id == 1
        assert result.rehomed == ()
        validate_state(state)

    def test_port_busy(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1)])
        with pytest.raises(PortBusyError):
            add_connection(state, 1, 2, ch(5))

    def test_same_channel_same_degree_contends(self):
        state = new_fabric(FabricConfig(8, 8, 2))
        state, _ = add_connection(state, 1, 1, ch(0))
        with pytest.raises(ContentionError):
            add_connection(state, 2, 1, ch(0))

    def test_same_channel_different_degree_allowed(self):
        state = new_fabric(FabricConfig(8, 8, 2))
        state, _ = add_connection(state, 1, 1, ch(0))
        state, _ = add_connection(state, 2, 2, ch(0))
        validate_state(state)

    def test_capacity_error_when_pool_exhausted(self):
        state = build(FabricConfig(8, 4, 2, wss_count=1), [(1, 1), (2, 1), (3, 1), (4, 2), (5, 2)])
        with pytest.raises(CapacityError):
            add_connection(state, 6, 2, ch(9))

    def test_out_of_range_arguments(self):
        state = new_fabric(FabricConfig(4, 2, 2))
        with pytest.raises(ValueError):
            add_connection(state, 5, 1, ch(0))
        with pytest.raises(ValueError):
            add_connection(state, 1, 3, ch(0))


class TestRemoveConnection:
    def test_round_trip_restores_state(self):
        base = build(FabricConfig(8, 8, 2), [(1, 1), (3, 2), (4, 2), (5, 2)])
        state, result = add_connection(base, 2, 1, ch(9))
        assert result.rehomed == ()
        assert remove_connection(state, 2) == base

    def test_round_trip_through_wss_join(self):
        base = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        state, _ = add_connection(base, 6, 2, ch(9))
        assert remove_connection(state, 6) == base

    def test_wss_freed_only_at_last_signal(self):
        state = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        state = remove_connection(state, 3)
        assert state.wss_map == {1: 2}  # two signals still ride it
        state = remove_connection(state, 4)
        assert state.wss_map == {1: 2}
        state = remove_connection(state, 5)
        assert state.wss_map == {}
        assert state.modes[2] is OutputMode.DIRECT
        validate_state(state)

    def test_unknown_port(self):
        with pytest.raises(ValueError):
            remove_connection(new_fabric(FabricConfig(4, 2, 1)), 1)


class TestPlanReconfiguration:
    def test_move_onto_own_degree_is_noop(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1)])
        plan = plan_reconfiguration(state, 1, 1)
        assert plan.steps == ()
        assert plan.hitless
        assert plan.result_state == state

    def test_filtered_to_direct_is_hitless(self):
        state = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        plan = plan_reconfiguration(state, 3, 1)
        assert plan.hitless
        assert plan.disrupted == ()
        moved = plan.result_state.connections[3]
        assert moved.degree == 1 and moved.wss_id is None
        validate_state(plan.result_state)

    def test_saturated_pool_move_blocks_established_traffic(self):
        # both filters busy; moving one filtered signal onto a full direct
        # degree forces re-homing its old group to free a filter
        state = build(
            FabricConfig(8, 8, 2),
            [(1, 1), (2, 1), (3, 2), (4, 2), (5, 2), (6, 3), (7, 3), (8, 3)],
        )
        plan = plan_reconfiguration(state, 3, 1)
        assert not plan.hitless
        assert plan.disrupted_ports == (4, 5)
        end = plan.result_state
        validate_state(end)
        assert end.connections[3].degree == 1
        assert end.connections[3].wss_id == 1
        assert end.modes[1] is OutputMode.COUPLED
        assert end.modes[2] is OutputMode.DIRECT
        assert end.wss_map == {1: 1, 2: 3}

    def test_spare_wss_makes_overflow_move_hitless(self):
        # degree 1 full on direct, but a free filter + coupled output
        # absorbs the newcomer without touching established signals
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1), (3, 2), (4, 2), (5, 2)])
        plan = plan_reconfiguration(state, 4, 1)
        assert plan.hitless
        assert plan.disrupted == ()
        end = plan.result_state
        assert end.connections[4].degree == 1
        assert end.connections[4].wss_id == 2
        assert end.modes[1] is OutputMode.COUPLED
        validate_state(end)

    def test_contention_at_target(self):
        state = new_fabric(FabricConfig(8, 8, 2))
        state, _ = add_connection(state, 1, 1, ch(0))
        state, _ = add_connection(state, 2, 2, ch(0))
        with pytest.raises(ContentionError):
            plan_reconfiguration(state, 2, 1)

    def test_impossible_move_raises_capacity(self):
        state = build(FabricConfig(6, 4, 1, wss_count=0), [(1, 1), (2, 2)])
        with pytest.raises(CapacityError):
            plan_reconfiguration(state, 2, 1)

    def test_unknown_port(self):
        with pytest.raises(ValueError):
            plan_reconfiguration(new_fabric(FabricConfig(4, 2, 1)), 1, 2)


class TestFiberBreakReroute:
    def test_reroute_uses_spare_wss_and_coupled_output(self):
        state = build(
            FabricConfig(8, 8, 2),
            [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (6, 3), (7, 3), (8, 3)],
        )
        assert state.wss_map == {1: 3}
        plan = fiber_break_reroute(state, 1, 2)
        assert plan.hitless
        assert plan.moved == (1, 2)
        end = plan.result_state
        validate_state(end)
        assert end.wss_map == {1: 3, 2: 2}
        assert end.modes[2] is OutputMode.COUPLED
        # pre-existing target signals keep their route
        assert end.connections[3] == state.connections[3]
        assert end.connections[4] == state.connections[4]
        assert {end.connections[t].wss_id for t in (1, 2)} == {2}

    def test_break_empty_degree_is_noop(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1)])
        plan = fiber_break_reroute(state, 2, 1)
        assert plan.steps == ()
        assert plan.hitless
        assert plan.result_state == state

    def test_broken_degrees_own_wss_is_reusable(self):
        state = build(FabricConfig(8, 2, 2, wss_count=1), [(1, 1), (2, 1), (3, 1)])
        plan = fiber_break_reroute(state, 1, 2)
        end = plan.result_state
        validate_state(end)
        assert end.wss_map == {1: 2}
        assert end.modes[2] is OutputMode.FILTERED

    def test_capacity_error_when_nothing_fits(self):
        state = build(FabricConfig(8, 4, 2, wss_count=0), [(1, 1), (2, 1), (3, 2), (4, 2)])
        with pytest.raises(CapacityError):
            fiber_break_reroute(state, 1, 2)

    def test_direct_fallback_when_target_has_room(self):
        state = build(FabricConfig(8, 4, 2, wss_count=0), [(1, 1), (2, 2)])
        plan = fiber_break_reroute(state, 1, 2)
        end = plan.result_state
        validate_state(end)
        assert end.connections[1].degree == 2
        assert end.connections[1].wss_id is None
        assert plan.hitless

    def test_contention_with_target(self):
        state = new_fabric(FabricConfig(8, 8, 2))
        state, _ = add_connection(state, 1, 1, ch(0))
        state, _ = add_connection(state, 2, 2, ch(0))
        with pytest.raises(ContentionError):
            fiber_break_reroute(state, 1, 2)

    def test_same_degree_rejected(self):
        with pytest.raises(ValueError):
            fiber_break_reroute(new_fabric(FabricConfig(4, 2, 1)), 1, 1)


class TestSignalLoss:
    def test_direct_two_way_merge_only(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1)])
        assert signal_loss(state, 1, ZERO) == pytest.approx(3.0103, abs=1e-3)

    def test_filtered_default_budget(self):
        # 2 x 0.6 fiber facets + 6.0 WSS, everything else zero by default
        state = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        assert signal_loss(state, 3) == pytest.approx(7.2, abs=1e-9)

    def test_direct_saves_over_fixed_splitter(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1)])
        mcs_loss, _ = mcs_evaluate(8, 2, 36.0, 43.0, ZERO)
        saving = mcs_loss - signal_loss(state, 1, ZERO)
        assert saving == pytest.approx(6.02, abs=0.01)

    def test_coupled_output_penalizes_both_branches(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1), (3, 2), (4, 2), (5, 2)])
        plan = plan_reconfiguration(state, 4, 1)
        end = plan.result_state
        direct_before = signal_loss(state, 1)
        assert signal_loss(end, 1) == pytest.approx(direct_before + 3.01, abs=1e-9)
        filtered_plain = signal_loss(state, 3)
        assert signal_loss(end, 4) == pytest.approx(filtered_plain + 3.01, abs=1e-9)

    def test_inactive_connection(self):
        with pytest.raises(ValueError):
            signal_loss(new_fabric(FabricConfig(4, 2, 1)), 1)


class TestSignalOsnr:
    def test_sole_direct_signal_keeps_tosnr(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1)])
        assert signal_osnr_at_oxc(state, 1) == 36.0
        assert interferer_count(state, 1) == 0

    def test_two_direct_signals(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1)])
        assert signal_osnr_at_oxc(state, 1) == pytest.approx(35.21, abs=0.02)
        assert interferer_count(state, 1) == 1

    def test_filtered_signal_pays_amp_penalty_only(self):
        state = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        assert signal_osnr_at_oxc(state, 3) == pytest.approx(35.3, abs=1e-9)
        assert interferer_count(state, 3) == 0

    def test_filtered_signal_on_coupled_degree_sees_direct_group(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1), (3, 2), (4, 2), (5, 2)])
        end = plan_reconfiguration(state, 4, 1).result_state
        # trx 4 is filtered but shares degree 1 with two unfiltered signals
        assert interferer_count(end, 4) == 2
        expected = -10.0 * math.log10(10 ** -3.6 + 2 * 10 ** -4.3) - 0.7
        assert signal_osnr_at_oxc(end, 4) == pytest.approx(expected, abs=1e-9)

    def test_interferer_law(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1), (3, 2), (4, 2), (5, 2)])
        end = plan_reconfiguration(state, 4, 1).result_state
        for trx, conn in sorted(end.connections.items()):
            k_direct = end.direct_count(conn.degree)
            expected = k_direct if conn.filtered else k_direct - 1
            assert interferer_count(end, trx) == expected

    def test_filtered_beats_direct_at_default_budget(self):
        # 0.7 dB amp penalty < the 0.79 dB cost of one unfiltered neighbour
        filtered_only = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        direct_pair = build(FabricConfig(8, 8, 2), [(1, 1), (2, 1)])
        assert signal_osnr_at_oxc(filtered_only, 3) > signal_osnr_at_oxc(direct_pair, 1)


class TestBaselines:
    def test_mcs_eight_ports(self):
        loss, osnr = mcs_evaluate(8, 2, 36.0, 43.0, ZERO)
        assert loss == pytest.approx(9.031, abs=1e-3)
        assert osnr == pytest.approx(35.21, abs=0.02)

    def test_mcs_single_signal(self):
        loss, osnr = mcs_evaluate(1, 1, 36.0, 43.0, ZERO)
        assert loss == 0.0
        assert osnr == 36.0

    def test_mcs_fully_loaded(self):
        # oracle: -10*log10(10**-3.6 + 7*10**-4.3) = 32.2039
        _, osnr = mcs_evaluate(8, 8, 36.0, 43.0, ZERO)
        assert osnr == pytest.approx(32.2039, abs=1e-3)

    def test_mcs_rejects_bad_load(self):
        with pytest.raises(ValueError):
            mcs_evaluate(8, 9, 36.0, 43.0)
        with pytest.raises(ValueError):
            mcs_evaluate(8, 0, 36.0, 43.0)

    def test_mxn_wss_is_fully_filtered(self):
        loss, osnr = mxn_wss_evaluate(36.0, ZERO)
        assert osnr == 36.0
        assert loss == 0.0

    def test_mxn_function_count_scales_with_degrees_only(self):
        assert wss_function_count_mxn(8) == 8
        assert wss_function_count_mxn(24) == 24
        # contrast: the hybrid pool for 8 transponders at cap 2 is just 2
        assert required_wss_count(8, 2) == 2


class TestValidate:
    def test_detects_contention(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1)])
        bad = dict(state.connections)
        bad[2] = bad[1].__class__(2, 1, bad[1].channel, 36.0, 43.0)
        with pytest.raises(InvariantError):
            validate_state(state.__class__(state.config, bad, {}, state.modes))

    def test_detects_mode_drift(self):
        state = build(FabricConfig(8, 8, 2), [(1, 1)])
        modes = {**state.modes, 1: OutputMode.FILTERED}
        with pytest.raises(InvariantError):
            validate_state(state.__class__(state.config, state.connections, {}, modes))

    def test_detects_unmapped_filtered_group(self):
        state = build(FabricConfig(8, 8, 2), [(3, 2), (4, 2), (5, 2)])
        with pytest.raises(InvariantError):
            validate_state(state.__class__(state.config, state.connections, {}, state.modes))
