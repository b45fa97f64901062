"""Switch-fabric state machines for transponder aggregators.

The hybrid aggregator connects N transponder ports to M degree ports.
Each degree is fed by a 2x1 output switch choosing between two internal
routes:

* the *direct* path: an N x 1 variable-ratio combiner that merges up to K
  unfiltered signals per degree, paying only ``10*log10(k)`` dB for the
  ``k`` signals actually present;
* the *filtered* path: one of L shared 1xN WSS units, steered to the
  degree through an L x M matrix switch, which strips the broadband noise
  the other transponders emit.

L defaults to ``floor(N / (K + 1))``: a degree only needs a WSS once it
carries more than K signals, and such a degree consumes at least K + 1 of
the N transponders, so that many WSS units always suffice.

States are value-like.  Every operation returns a new ``FabricState`` and
never mutates its input, so states can be snapshotted, compared for
equality, and replayed deterministically.

Two baseline evaluators are included for comparison: the multicast switch
(full splitter loss, unfiltered noise) and the monolithic M x N WSS
(filtered, but one WSS function per degree).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from . import coupler, linkmath
from .grid import Channel, channels_disjoint

__all__ = [
    "AddResult",
    "CapacityError",
    "Connection",
    "ContentionError",
    "FabricConfig",
    "FabricError",
    "FabricState",
    "InvariantError",
    "LossBudgetParams",
    "OutputMode",
    "PortBusyError",
    "ReconfigPlan",
    "Step",
    "add_connection",
    "fiber_break_reroute",
    "interferer_count",
    "mcs_evaluate",
    "mxn_wss_evaluate",
    "new_fabric",
    "plan_reconfiguration",
    "remove_connection",
    "required_wss_count",
    "signal_loss",
    "signal_osnr_at_oxc",
    "validate_state",
    "wss_function_count_mxn",
]


class FabricError(Exception):
    """Base class for fabric state-machine failures."""


class ContentionError(FabricError):
    """Two spectrally overlapping signals aimed at the same degree."""


class PortBusyError(FabricError):
    """The transponder port already carries a connection."""


class CapacityError(FabricError):
    """No route satisfies the request (direct cap reached, no WSS usable)."""


class InvariantError(FabricError):
    """A state failed validation; indicates a bug in an operation."""


def required_wss_count(transponders: int, direct_cap: int) -> int:
    """Shared WSS units needed for ``transponders`` ports with per-degree cap.

    ``floor(transponders / (direct_cap + 1))``.  Any degree needing a
    filter holds at least ``direct_cap + 1`` signals, so the worst case is
    every filtered degree holding exactly that many.
    """
    if transponders < 1:
        raise ValueError(f"transponder count must be >= 1, got {transponders}")
    if direct_cap < 1:
        raise ValueError(f"direct-path cap must be >= 1, got {direct_cap}")
    return transponders // (direct_cap + 1)


class OutputMode(Enum):
    """Setting of a degree's 2x1 output switch."""

    DIRECT = "direct"      # combiner branch only
    FILTERED = "filtered"  # WSS branch only
    COUPLED = "coupled"    # both branches merged (contingency mode)


@dataclass(frozen=True)
class FabricConfig:
    """Dimensions of one aggregator: ports, degrees, cap, WSS pool size."""

    transponders: int
    degrees: int
    direct_cap: int
    wss_count: int | None = None

    def __post_init__(self) -> None:
        if self.transponders < 1:
            raise ValueError(f"transponders must be >= 1, got {self.transponders}")
        if self.degrees < 1:
            raise ValueError(f"degrees must be >= 1, got {self.degrees}")
        if not 1 <= self.direct_cap <= self.transponders:
            raise ValueError(
                f"direct cap must be in 1..{self.transponders}, got {self.direct_cap}"
            )
        if self.wss_count is None:
            object.__setattr__(
                self, "wss_count", required_wss_count(self.transponders, self.direct_cap)
            )
        elif self.wss_count < 0:
            raise ValueError(f"WSS count must be >= 0, got {self.wss_count}")


@dataclass(frozen=True)
class Connection:
    """One transponder-to-degree signal.

    ``wss_id`` is None on the direct (unfiltered) path, otherwise the id
    of the WSS filtering it.  ``oob_osnr_db`` is the broadband noise level
    each unfiltered neighbour superimposes on this signal's band.
    """

    trx: int
    degree: int
    channel: Channel
    tosnr_db: float
    oob_osnr_db: float
    wss_id: int | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.tosnr_db):
            raise ValueError(f"TOSNR must be finite, got {self.tosnr_db!r}")
        if not math.isfinite(self.oob_osnr_db):
            raise ValueError(f"out-of-band OSNR must be finite, got {self.oob_osnr_db!r}")

    @property
    def filtered(self) -> bool:
        return self.wss_id is not None

    @property
    def path_label(self) -> str:
        return "direct" if self.wss_id is None else f"wss{self.wss_id}"


@dataclass(frozen=True)
class LossBudgetParams:
    """Per-element insertion losses (dB) and the filtered-path OSNR penalty.

    Defaults follow typical measured figures: 0.6 dB per fiber-chip facet,
    6 dB for a WSS (5-7 dB range), 3.01 dB on both branches when a 2x1
    output switch runs as a 50:50 coupler, and at most 0.7 dB of OSNR lost
    to the compensating amplifier on the filtered path.
    """

    fiber_coupling_db: float = 0.6
    input_switch_db: float = 0.0
    direct_excess_db: float = 0.0
    filtered_chip_excess_db: float = 0.0
    wss_db: float = 6.0
    matrix_switch_db: float = 0.0
    out_switch_db: float = 0.0
    coupler_mode_extra_db: float = 3.01
    filtered_amp_osnr_penalty_db: float = 0.7

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be a finite non-negative number, got {value!r}")


@dataclass(frozen=True)
class FabricState:
    """Full switch state of one aggregator.

    ``connections`` is keyed by transponder port (one connection per
    port), ``wss_map`` sends each busy WSS id to the degree it feeds, and
    ``modes`` records every degree's output-switch setting.
    """

    config: FabricConfig
    connections: dict[int, Connection]
    wss_map: dict[int, int]
    modes: dict[int, OutputMode]

    def connections_on(self, degree: int) -> list[Connection]:
        """Connections landing on ``degree``, ordered by transponder port."""
        return [c for _, c in sorted(self.connections.items()) if c.degree == degree]

    def direct_count(self, degree: int) -> int:
        """Number of unfiltered signals sharing the degree's combiner."""
        return sum(1 for c in self.connections.values() if c.degree == degree and not c.filtered)

    def degree_population(self, degree: int) -> int:
        return sum(1 for c in self.connections.values() if c.degree == degree)

    def wss_serving(self, degree: int) -> int | None:
        """Id of the WSS steered to ``degree``, if any."""
        for wss_id, deg in sorted(self.wss_map.items()):
            if deg == degree:
                return wss_id
        return None

    def free_wss_ids(self) -> list[int]:
        return [w for w in range(1, (self.config.wss_count or 0) + 1) if w not in self.wss_map]


def new_fabric(config: FabricConfig) -> FabricState:
    """Empty fabric: no connections, no WSS steering, all outputs direct."""
    modes = {d: OutputMode.DIRECT for d in range(1, config.degrees + 1)}
    return FabricState(config, {}, {}, modes)


def _derived_mode(has_direct: bool, has_filtered: bool) -> OutputMode:
    if has_direct and has_filtered:
        return OutputMode.COUPLED
    if has_filtered:
        return OutputMode.FILTERED
    return OutputMode.DIRECT


def validate_state(state: FabricState) -> None:
    """Raise InvariantError unless every structural invariant holds.

    Checked: key/port agreement and ranges, one connection per port (by
    construction of the mapping), per-degree spectral disjointness, the
    per-degree cap on unfiltered signals, WSS steering consistency (ids in
    range, at most one WSS per degree, filtered connections ride the WSS
    steered to their degree), and output modes matching path usage.
    """
    cfg = state.config
    for trx, conn in state.connections.items():
        if trx != conn.trx:
            raise InvariantError(f"connection keyed {trx} reports port {conn.trx}")
        if not 1 <= conn.trx <= cfg.transponders:
            raise InvariantError(f"port {conn.trx} outside 1..{cfg.transponders}")
        if not 1 <= conn.degree <= cfg.degrees:
            raise InvariantError(f"degree {conn.degree} outside 1..{cfg.degrees}")

    served: dict[int, int] = {}
    for wss_id, degree in state.wss_map.items():
        if not 1 <= wss_id <= (cfg.wss_count or 0):
            raise InvariantError(f"WSS id {wss_id} outside 1..{cfg.wss_count}")
        if not 1 <= degree <= cfg.degrees:
            raise InvariantError(f"WSS {wss_id} steered to invalid degree {degree}")
        if degree in served.values():
            raise InvariantError(f"degree {degree} fed by more than one WSS")
        served[wss_id] = degree

    for degree in range(1, cfg.degrees + 1):
        conns = state.connections_on(degree)
        for i, a in enumerate(conns):
            for b in conns[i + 1:]:
                if not channels_disjoint(a.channel, b.channel):
                    raise InvariantError(
                        f"channel contention on degree {degree}: ports {a.trx} and {b.trx}"
                    )
        direct = [c for c in conns if not c.filtered]
        filtered = [c for c in conns if c.filtered]
        if len(direct) > cfg.direct_cap:
            raise InvariantError(
                f"degree {degree} carries {len(direct)} unfiltered signals, cap {cfg.direct_cap}"
            )
        serving = state.wss_serving(degree)
        if bool(filtered) != (serving is not None):
            raise InvariantError(
                f"degree {degree}: filtered signals and WSS steering disagree"
            )
        for c in filtered:
            if c.wss_id != serving:
                raise InvariantError(
                    f"port {c.trx} rides WSS {c.wss_id} but degree {degree} is fed by {serving}"
                )
        mode = state.modes.get(degree)
        if mode is None:
            raise InvariantError(f"degree {degree} missing an output mode")
        expected = _derived_mode(bool(direct), bool(filtered))
        if mode != expected:
            raise InvariantError(
                f"degree {degree} mode {mode.value}, but paths imply {expected.value}"
            )


@dataclass(frozen=True)
class AddResult:
    """Route assigned to a new connection.

    ``rehomed`` lists ports whose established direct signals were moved
    onto the WSS because the add pushed the degree past the cap; callers
    that care about hitless provisioning must treat those as re-routed.
    """

    wss_id: int | None
    rehomed: tuple[int, ...] = ()

    @property
    def path_label(self) -> str:
        return "direct" if self.wss_id is None else f"wss{self.wss_id}"


def _check_new_channel(state: FabricState, degree: int, channel: Channel, trx: int) -> None:
    for other in state.connections_on(degree):
        if not channels_disjoint(channel, other.channel):
            raise ContentionError(
                f"port {trx}: channel at {channel.center_thz:.4f} THz overlaps "
                f"port {other.trx} on degree {degree}"
            )


def add_connection(
    state: FabricState,
    trx: int,
    degree: int,
    channel: Channel,
    tosnr_db: float = 36.0,
    oob_osnr_db: float = 43.0,
) -> tuple[FabricState, AddResult]:
    """Connect transponder ``trx`` to ``degree`` and pick its route.

    Routing policy: a degree already served by a WSS takes the new signal
    on that WSS; otherwise the signal goes direct while the degree stays
    at or below the cap.  The add that would exceed the cap re-homes the
    whole degree group onto a free WSS (reported in ``AddResult.rehomed``),
    so a degree is always either purely direct or purely filtered; mixed
    (coupled) operation only ever arises from a reroute plan.

    Raises PortBusyError, ContentionError, or CapacityError (cap exceeded
    with no free WSS).
    """
    cfg = state.config
    if not 1 <= trx <= cfg.transponders:
        raise ValueError(f"transponder port must be in 1..{cfg.transponders}, got {trx}")
    if not 1 <= degree <= cfg.degrees:
        raise ValueError(f"degree must be in 1..{cfg.degrees}, got {degree}")
    if trx in state.connections:
        raise PortBusyError(f"transponder port {trx} already carries a connection")
    _check_new_channel(state, degree, channel, trx)

    serving = state.wss_serving(degree)
    if serving is not None:
        conn = Connection(trx, degree, channel, tosnr_db, oob_osnr_db, wss_id=serving)
        connections = {**state.connections, trx: conn}
        return replace(state, connections=connections), AddResult(serving)

    group = state.connections_on(degree)
    if len(group) + 1 <= cfg.direct_cap:
        conn = Connection(trx, degree, channel, tosnr_db, oob_osnr_db)
        connections = {**state.connections, trx: conn}
        return replace(state, connections=connections), AddResult(None)

    free = state.free_wss_ids()
    if not free:
        raise CapacityError(
            f"degree {degree} is at its unfiltered cap ({cfg.direct_cap}) and no WSS is free"
        )
    wss_id = free[0]
    connections = dict(state.connections)
    for c in group:
        connections[c.trx] = replace(c, wss_id=wss_id)
    connections[trx] = Connection(trx, degree, channel, tosnr_db, oob_osnr_db, wss_id=wss_id)
    wss_map = {**state.wss_map, wss_id: degree}
    modes = {**state.modes, degree: OutputMode.FILTERED}
    new_state = FabricState(cfg, connections, wss_map, modes)
    return new_state, AddResult(wss_id, rehomed=tuple(c.trx for c in group))


def remove_connection(state: FabricState, trx: int) -> FabricState:
    """Release the connection on port ``trx``.

    The WSS feeding its degree is unmapped only when this was the last
    signal riding it; smaller filtered groups deliberately keep their WSS
    rather than silently re-routing established signals.
    """
    conn = state.connections.get(trx)
    if conn is None:
        raise ValueError(f"no connection on transponder port {trx}")
    connections = dict(state.connections)
    del connections[trx]

    wss_map = state.wss_map
    if conn.filtered and not any(c.wss_id == conn.wss_id for c in connections.values()):
        wss_map = {w: d for w, d in state.wss_map.items() if w != conn.wss_id}

    remaining = [c for c in connections.values() if c.degree == conn.degree]
    mode = _derived_mode(
        any(not c.filtered for c in remaining), any(c.filtered for c in remaining)
    )
    modes = {**state.modes, conn.degree: mode}
    return FabricState(state.config, connections, wss_map, modes)


@dataclass(frozen=True)
class Step:
    """One switch-setting change inside a reconfiguration plan."""

    op: str  # "route" | "map_wss" | "unmap_wss" | "set_mode"
    trx: int | None = None
    degree: int | None = None
    wss_id: int | None = None
    mode: OutputMode | None = None

    def describe(self) -> str:
        if self.op == "route":
            via = "direct" if self.wss_id is None else f"wss{self.wss_id}"
            return f"route trx {self.trx} -> degree {self.degree} via {via}"
        if self.op == "map_wss":
            return f"map wss{self.wss_id} -> degree {self.degree}"
        if self.op == "unmap_wss":
            return f"unmap wss{self.wss_id} (was degree {self.degree})"
        if self.op == "set_mode":
            return f"set degree {self.degree} output to {self.mode.value}"
        return self.op


@dataclass(frozen=True)
class ReconfigPlan:
    """Ordered switch changes plus the traffic they interrupt.

    ``disrupted`` holds the established connections (other than the ones
    being moved on purpose) whose routes must be torn down and rebuilt;
    ``hitless`` is true exactly when that set is empty.  ``moved`` lists
    the ports the plan deliberately relocates.  ``result_state`` is the
    fabric state after executing every step.
    """

    steps: tuple[Step, ...]
    disrupted: tuple[Connection, ...]
    hitless: bool
    moved: tuple[int, ...]
    result_state: FabricState

    @property
    def disrupted_ports(self) -> tuple[int, ...]:
        return tuple(c.trx for c in self.disrupted)

    def describe_steps(self) -> tuple[str, ...]:
        return tuple(s.describe() for s in self.steps)


def _plan_between(
    old: FabricState, new: FabricState, moved: tuple[int, ...]
) -> ReconfigPlan:
    """Build a plan as the canonical diff between two states."""
    steps: list[Step] = []
    for wss_id in sorted(old.wss_map):
        if new.wss_map.get(wss_id) != old.wss_map[wss_id]:
            steps.append(Step("unmap_wss", wss_id=wss_id, degree=old.wss_map[wss_id]))
    for wss_id in sorted(new.wss_map):
        if old.wss_map.get(wss_id) != new.wss_map[wss_id]:
            steps.append(Step("map_wss", wss_id=wss_id, degree=new.wss_map[wss_id]))

    rerouted: list[int] = []
    for trx in sorted(new.connections):
        nc = new.connections[trx]
        oc = old.connections.get(trx)
        if oc is None or (oc.degree, oc.wss_id) != (nc.degree, nc.wss_id):
            steps.append(Step("route", trx=trx, degree=nc.degree, wss_id=nc.wss_id))
            if oc is not None:
                rerouted.append(trx)

    for degree in sorted(new.modes):
        if old.modes.get(degree) != new.modes[degree]:
            steps.append(Step("set_mode", degree=degree, mode=new.modes[degree]))

    moved_set = set(moved)
    disrupted = tuple(old.connections[t] for t in rerouted if t not in moved_set)
    return ReconfigPlan(
        steps=tuple(steps),
        disrupted=disrupted,
        hitless=not disrupted,
        moved=moved,
        result_state=new,
    )


def _rehome_to_direct(state: FabricState, degree: int) -> FabricState:
    """Move a filtered degree group back onto its combiner, freeing its WSS."""
    serving = state.wss_serving(degree)
    connections = dict(state.connections)
    for c in state.connections_on(degree):
        if c.filtered:
            connections[c.trx] = replace(c, wss_id=None)
    wss_map = {w: d for w, d in state.wss_map.items() if w != serving}
    modes = {**state.modes, degree: OutputMode.DIRECT}
    return FabricState(state.config, connections, wss_map, modes)


def _place_filtered(
    state: FabricState, conns: list[Connection], degree: int, wss_id: int
) -> FabricState:
    """Land ``conns`` on ``degree`` via ``wss_id``, steering it if needed."""
    connections = dict(state.connections)
    for c in conns:
        connections[c.trx] = replace(c, degree=degree, wss_id=wss_id)
    wss_map = {**state.wss_map, wss_id: degree}
    has_direct = any(
        c.degree == degree and not c.filtered
        for c in connections.values()
    )
    modes = {**state.modes, degree: _derived_mode(has_direct, True)}
    return FabricState(state.config, connections, wss_map, modes)


def _place_direct(state: FabricState, conns: list[Connection], degree: int) -> FabricState:
    connections = dict(state.connections)
    for c in conns:
        connections[c.trx] = replace(c, degree=degree, wss_id=None)
    has_filtered = any(
        c.degree == degree and c.filtered for c in connections.values()
    )
    modes = {**state.modes, degree: _derived_mode(True, has_filtered)}
    return FabricState(state.config, connections, wss_map=dict(state.wss_map), modes=modes)


def _migrate_group_to_wss(state: FabricState, degree: int, wss_id: int) -> FabricState:
    """Move a degree's direct group onto ``wss_id`` (plan building helper)."""
    group = [c for c in state.connections_on(degree) if not c.filtered]
    return _place_filtered(state, group, degree, wss_id)


def plan_reconfiguration(state: FabricState, trx: int, to_degree: int) -> ReconfigPlan:
    """Plan moving the connection on ``trx`` to ``to_degree``.

    Candidate placements are ranked by (number of disrupted established
    connections, whether coupled output mode and its extra loss must be
    enabled, lowest WSS id), so the plan is minimal-disruption and
    deterministic.  When the target would exceed its unfiltered cap the
    planner may steer a free WSS to it, or free a WSS by re-homing another
    degree's small filtered group back onto its combiner; both appear in
    ``disrupted``/``steps`` rather than happening silently.

    Raises ContentionError if the moved channel overlaps the target, and
    CapacityError when no candidate placement exists at all.
    """
    conn = state.connections.get(trx)
    if conn is None:
        raise ValueError(f"no connection on transponder port {trx}")
    if not 1 <= to_degree <= state.config.degrees:
        raise ValueError(f"degree must be in 1..{state.config.degrees}, got {to_degree}")
    if to_degree == conn.degree:
        return ReconfigPlan((), (), True, (trx,), state)

    base = remove_connection(state, trx)
    _check_new_channel(base, to_degree, conn.channel, trx)

    serving = base.wss_serving(to_degree)
    if serving is not None:
        end = _place_filtered(base, [conn], to_degree, serving)
        return _plan_between(state, end, (trx,))

    if base.direct_count(to_degree) + 1 <= state.config.direct_cap:
        end = _place_direct(base, [conn], to_degree)
        return _plan_between(state, end, (trx,))

    # The target needs a WSS.  Gather ways to obtain one: free ids, then
    # ids freed by re-homing a small filtered group back to direct.
    candidates: list[tuple[tuple[int, int, int], FabricState]] = []

    def add_candidates(prepared: FabricState, wss_id: int, steal_cost: int) -> None:
        coupled = _place_filtered(prepared, [conn], to_degree, wss_id)
        candidates.append(((steal_cost, 1, wss_id), coupled))
        migrated = _migrate_group_to_wss(prepared, to_degree, wss_id)
        migrated = _place_filtered(migrated, [conn], to_degree, wss_id)
        migrate_cost = steal_cost + prepared.direct_count(to_degree)
        candidates.append(((migrate_cost, 0, wss_id), migrated))

    free = base.free_wss_ids()
    if free:
        add_candidates(base, free[0], steal_cost=0)
    else:
        for wss_id, victim in sorted(base.wss_map.items()):
            if base.degree_population(victim) <= state.config.direct_cap:
                prepared = _rehome_to_direct(base, victim)
                add_candidates(prepared, wss_id, steal_cost=base.degree_population(victim))

    if not candidates:
        raise CapacityError(
            f"cannot place port {trx} on degree {to_degree}: unfiltered cap reached "
            "and no WSS can be freed"
        )
    _, end = min(candidates, key=lambda item: item[0])
    return _plan_between(state, end, (trx,))


def fiber_break_reroute(
    state: FabricState, broken_degree: int, target_degree: int
) -> ReconfigPlan:
    """Plan rerouting every signal on ``broken_degree`` to ``target_degree``.

    The displaced group rides the WSS already feeding the target, else a
    free one (including the WSS the broken degree itself releases); the
    target's established direct signals stay untouched and its output
    switch runs as a coupler, so the plan is hitless for pre-existing
    traffic.  Without any usable WSS the group falls back to the direct
    path when it fits under the cap, otherwise CapacityError.
    """
    cfg = state.config
    for name, deg in (("broken", broken_degree), ("target", target_degree)):
        if not 1 <= deg <= cfg.degrees:
            raise ValueError(f"{name} degree must be in 1..{cfg.degrees}, got {deg}")
    if broken_degree == target_degree:
        raise ValueError("target degree must differ from the broken degree")

    group = state.connections_on(broken_degree)
    if not group:
        return ReconfigPlan((), (), True, (), state)

    base = state
    for c in group:
        base = remove_connection(base, c.trx)
    occupied = base.connections_on(target_degree)
    for c in group:
        for other in occupied:
            if not channels_disjoint(c.channel, other.channel):
                raise ContentionError(
                    f"port {c.trx}: channel overlaps port {other.trx} "
                    f"on degree {target_degree}"
                )

    moved = tuple(c.trx for c in group)
    serving = base.wss_serving(target_degree)
    if serving is not None:
        end = _place_filtered(base, group, target_degree, serving)
        return _plan_between(state, end, moved)

    free = base.free_wss_ids()
    if free:
        end = _place_filtered(base, group, target_degree, free[0])
        return _plan_between(state, end, moved)

    if base.direct_count(target_degree) + len(group) <= cfg.direct_cap:
        end = _place_direct(base, group, target_degree)
        return _plan_between(state, end, moved)

    raise CapacityError(
        f"cannot reroute {len(group)} signals from degree {broken_degree} to "
        f"{target_degree}: no WSS free and the unfiltered cap would be exceeded"
    )


def interferer_count(state: FabricState, trx: int) -> int:
    """Unfiltered same-degree signals whose broadband noise lands on ``trx``.

    A direct signal sees the other members of its combiner group; a
    filtered signal sees the whole direct group of its degree (its own
    noise was stripped by the WSS, but co-propagating unfiltered signals
    still contribute).  Filtered signals never count as interferers.
    """
    conn = state.connections.get(trx)
    if conn is None:
        raise ValueError(f"no connection on transponder port {trx}")
    k_direct = state.direct_count(conn.degree)
    return k_direct if conn.filtered else k_direct - 1


def signal_loss(
    state: FabricState, trx: int, params: LossBudgetParams = LossBudgetParams()
) -> float:
    """Insertion loss (dB) of the connection on ``trx`` through the fabric.

    Direct path: two fiber facets, the input switch, the combiner merge
    loss for the signals actually sharing the degree, and any chip excess.
    Filtered path: facets, input switch, chip excess, the WSS itself and
    the matrix switch.  Both pay the output switch and, when the degree's
    output runs as a coupler, the extra coupled-branch loss.
    """
    conn = state.connections.get(trx)
    if conn is None:
        raise ValueError(f"no connection on transponder port {trx}")
    p = params
    total = 2.0 * p.fiber_coupling_db + p.input_switch_db + p.out_switch_db
    if state.modes[conn.degree] is OutputMode.COUPLED:
        total += p.coupler_mode_extra_db
    if conn.filtered:
        return total + p.filtered_chip_excess_db + p.wss_db + p.matrix_switch_db
    return total + coupler.confluence_loss(state.direct_count(conn.degree)) + p.direct_excess_db


def signal_osnr_at_oxc(
    state: FabricState, trx: int, params: LossBudgetParams = LossBudgetParams()
) -> float:
    """OSNR (dB) of the connection on ``trx`` where it leaves the fabric.

    The signal's own TOSNR combines with one out-of-band contribution per
    interferer (see :func:`interferer_count`); filtered signals then pay
    the compensating-amplifier penalty from ``params``.
    """
    conn = state.connections.get(trx)
    if conn is None:
        raise ValueError(f"no connection on transponder port {trx}")
    contribs = [linkmath.OsnrContribution(conn.tosnr_db)]
    c = interferer_count(state, trx)
    if c > 0:
        contribs.append(linkmath.OsnrContribution(conn.oob_osnr_db, c))
    osnr = linkmath.cascade_osnr(contribs)
    if conn.filtered:
        osnr -= params.filtered_amp_osnr_penalty_db
    return osnr


def mcs_evaluate(
    n: int,
    k_signals: int,
    tosnr_db: float,
    oob_osnr_db: float,
    params: LossBudgetParams = LossBudgetParams(),
) -> tuple[float, float]:
    """Loss and OSNR of a multicast-switch aggregator degree.

    The n x 1 splitter always pays the full ``10*log10(n)`` regardless of
    load, and all ``k_signals`` on the degree superimpose unfiltered
    noise.  Fixed elements counted: two fiber facets plus the 1 x M input
    switch.
    """
    if n < 1:
        raise ValueError(f"splitter port count must be >= 1, got {n}")
    if not 1 <= k_signals <= n:
        raise ValueError(f"signal count must be in 1..{n}, got {k_signals}")
    loss = 2.0 * params.fiber_coupling_db + params.input_switch_db + linkmath.splitter_loss(n)
    osnr = linkmath.combine_osnr(tosnr_db, oob_osnr_db, k_signals)
    return loss, osnr


def mxn_wss_evaluate(
    tosnr_db: float, params: LossBudgetParams = LossBudgetParams()
) -> tuple[float, float]:
    """Loss and OSNR through a monolithic M x N WSS aggregator.

    Fully filtered: the OSNR is the transmitter's own.  Loss counts two
    fiber facets plus the WSS; there is no splitting penalty.
    """
    loss = 2.0 * params.fiber_coupling_db + params.wss_db
    return loss, tosnr_db


def wss_function_count_mxn(m: int) -> int:
    """WSS functions a monolithic M x N aggregator integrates: one per degree."""
    if m < 0:
        raise ValueError(f"degree count must be >= 0, got {m}")
    return m
