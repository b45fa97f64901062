"""Scenario files, deterministic replay, sizing sweeps, and report tables.

A scenario is one YAML document (JSON parses too) describing a fabric, its
loss budget, and an ordered list of events.  Replays are deterministic:
the same document always produces byte-identical rendered output, which is
what the golden-file tests pin down.

Schema (unknown keys are rejected)::

    config:     {n, m, k, l?}                  # fabric dimensions
    band_plan:  {c: [lo, hi], l: [lo, hi], spacing_ghz}
    params:     {<any LossBudgetParams field>}
    defaults:   {tosnr_db, oob_osnr_db, width_ghz}
    drop_side:  {extra_loss_db, contributions: [{osnr_db, count}]}
    events:
      - {kind: add, trx, degree, wavelength_nm | freq_thz,
         width_ghz?, tosnr_db?, oob_osnr_db?}
      - {kind: remove, trx}
      - {kind: move, trx, to_degree}
      - {kind: fiber_break, degree, to_degree}
      - {kind: query}
      - {kind: set_params, params: {...}}
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import yaml

from . import fabric
from .fabric import (
    Connection,
    FabricConfig,
    FabricError,
    FabricState,
    LossBudgetParams,
    ReconfigPlan,
)
from .grid import BandPlan, Channel, channel_from_frequency, wavelength_to_frequency
from .linkmath import OsnrContribution, cascade_osnr

__all__ = [
    "CompareRow",
    "Event",
    "LogEntry",
    "PlanRecord",
    "ReplayDefaults",
    "RunResult",
    "Scenario",
    "ScenarioError",
    "SignalReport",
    "SweepRow",
    "compare_aggregators",
    "load_scenario",
    "parse_scenario",
    "render_compare_csv",
    "render_compare_text",
    "render_report_csv",
    "render_report_text",
    "render_sweep_csv",
    "render_sweep_text",
    "run_scenario",
    "sweep_wss_count",
]

EVENT_KINDS = ("add", "remove", "move", "fiber_break", "query", "set_params")

REPORT_COLUMNS = (
    "signal_id",
    "trx",
    "degree",
    "path",
    "loss_db",
    "interferer_count",
    "osnr_oxc_db",
    "rosnr_db",
)
SWEEP_COLUMNS = ("n", "k", "l_proposed", "wss_count_mxn")
COMPARE_COLUMNS = ("signal_id", "trx", "degree", "model", "path", "loss_db", "osnr_db")


class ScenarioError(Exception):
    """A scenario document failed to parse or validate."""


@dataclass(frozen=True)
class ReplayDefaults:
    """Per-signal values applied when an add event leaves them out."""

    tosnr_db: float = 36.0
    oob_osnr_db: float = 43.0
    width_ghz: float = 87.5

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if value <= 0.0:
                raise ValueError(f"default {name} must be positive, got {value!r}")


@dataclass(frozen=True)
class DropSide:
    """Receive-side path declared by the scenario: lumped loss plus added noise."""

    extra_loss_db: float = 0.0
    contributions: tuple[OsnrContribution, ...] = ()


@dataclass(frozen=True)
class Event:
    """One replay event; which fields apply depends on ``kind``."""

    kind: str
    trx: int | None = None
    degree: int | None = None
    to_degree: int | None = None
    channel: Channel | None = None
    tosnr_db: float | None = None
    oob_osnr_db: float | None = None
    params: dict[str, float] | None = None


@dataclass(frozen=True)
class Scenario:
    config: FabricConfig
    band_plan: BandPlan
    params: LossBudgetParams
    defaults: ReplayDefaults
    drop_side: DropSide
    events: tuple[Event, ...]


# ---------------------------------------------------------------------------
# parsing

def _expect_mapping(node: object, path: str) -> dict:
    if not isinstance(node, dict):
        raise ScenarioError(f"{path}: expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, path: str, allowed: tuple[str, ...]) -> None:
    unknown = sorted(set(node) - set(allowed))
    if unknown:
        raise ScenarioError(f"{path}: unknown key(s) {', '.join(map(repr, unknown))}")


def _get_int(node: dict, path: str, key: str, required: bool = True) -> int | None:
    if key not in node:
        if required:
            raise ScenarioError(f"{path}.{key}: required")
        return None
    value = node[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


def _get_number(node: dict, path: str, key: str, required: bool = True) -> float | None:
    if key not in node:
        if required:
            raise ScenarioError(f"{path}.{key}: required")
        return None
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _get_range(node: dict, path: str, key: str) -> tuple[float, float] | None:
    if key not in node:
        return None
    value = node[key]
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ScenarioError(f"{path}.{key}: expected [min_thz, max_thz], got {value!r}")
    return float(value[0]), float(value[1])


def _parse_config(node: object) -> FabricConfig:
    mapping = _expect_mapping(node, "config")
    _check_keys(mapping, "config", ("n", "m", "k", "l"))
    try:
        return FabricConfig(
            transponders=_get_int(mapping, "config", "n"),
            degrees=_get_int(mapping, "config", "m"),
            direct_cap=_get_int(mapping, "config", "k"),
            wss_count=_get_int(mapping, "config", "l", required=False),
        )
    except ValueError as exc:
        raise ScenarioError(f"config: {exc}") from exc


def _parse_band_plan(node: object) -> BandPlan:
    mapping = _expect_mapping(node, "band_plan")
    _check_keys(mapping, "band_plan", ("c", "l", "spacing_ghz"))
    kwargs = {}
    c_range = _get_range(mapping, "band_plan", "c")
    l_range = _get_range(mapping, "band_plan", "l")
    spacing = _get_number(mapping, "band_plan", "spacing_ghz", required=False)
    if c_range is not None:
        kwargs["c_range"] = c_range
    if l_range is not None:
        kwargs["l_range"] = l_range
    if spacing is not None:
        kwargs["spacing_ghz"] = spacing
    try:
        return BandPlan(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"band_plan: {exc}") from exc


_PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(LossBudgetParams))


def _parse_params(node: object, path: str = "params") -> dict[str, float]:
    mapping = _expect_mapping(node, path)
    _check_keys(mapping, path, _PARAM_FIELDS)
    values = {}
    for key in mapping:
        values[key] = _get_number(mapping, path, key)
    return values


def _parse_defaults(node: object) -> ReplayDefaults:
    mapping = _expect_mapping(node, "defaults")
    _check_keys(mapping, "defaults", ("tosnr_db", "oob_osnr_db", "width_ghz"))
    kwargs = {k: v for k in mapping if (v := _get_number(mapping, "defaults", k)) is not None}
    try:
        return ReplayDefaults(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"defaults: {exc}") from exc


def _parse_drop_side(node: object) -> DropSide:
    mapping = _expect_mapping(node, "drop_side")
    _check_keys(mapping, "drop_side", ("extra_loss_db", "contributions"))
    extra = _get_number(mapping, "drop_side", "extra_loss_db", required=False) or 0.0
    if extra < 0.0:
        raise ScenarioError(f"drop_side.extra_loss_db: must be >= 0, got {extra!r}")
    contribs: list[OsnrContribution] = []
    for i, item in enumerate(mapping.get("contributions", []) or []):
        path = f"drop_side.contributions[{i}]"
        entry = _expect_mapping(item, path)
        _check_keys(entry, path, ("osnr_db", "count"))
        osnr = _get_number(entry, path, "osnr_db")
        count = _get_int(entry, path, "count", required=False)
        try:
            contribs.append(OsnrContribution(osnr, 1 if count is None else count))
        except ValueError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return DropSide(extra, tuple(contribs))


_EVENT_KEYS = {
    "add": ("kind", "trx", "degree", "wavelength_nm", "freq_thz", "width_ghz",
            "tosnr_db", "oob_osnr_db"),
    "remove": ("kind", "trx"),
    "move": ("kind", "trx", "to_degree"),
    "fiber_break": ("kind", "degree", "to_degree"),
    "query": ("kind",),
    "set_params": ("kind", "params"),
}


def _parse_event(
    node: object, index: int, config: FabricConfig, plan: BandPlan, defaults: ReplayDefaults
) -> Event:
    path = f"events[{index}]"
    mapping = _expect_mapping(node, path)
    kind = mapping.get("kind")
    if kind not in EVENT_KINDS:
        raise ScenarioError(f"{path}.kind: expected one of {EVENT_KINDS}, got {kind!r}")
    _check_keys(mapping, path, _EVENT_KEYS[kind])

    def check_trx(value: int) -> int:
        if not 1 <= value <= config.transponders:
            raise ScenarioError(f"{path}.trx: {value} outside 1..{config.transponders}")
        return value

    def check_degree(value: int, key: str) -> int:
        if not 1 <= value <= config.degrees:
            raise ScenarioError(f"{path}.{key}: {value} outside 1..{config.degrees}")
        return value

    if kind == "add":
        trx = check_trx(_get_int(mapping, path, "trx"))
        degree = check_degree(_get_int(mapping, path, "degree"), "degree")
        wavelength = _get_number(mapping, path, "wavelength_nm", required=False)
        freq = _get_number(mapping, path, "freq_thz", required=False)
        if (wavelength is None) == (freq is None):
            raise ScenarioError(f"{path}: give exactly one of wavelength_nm or freq_thz")
        width = _get_number(mapping, path, "width_ghz", required=False)
        try:
            center = freq if freq is not None else wavelength_to_frequency(wavelength)
            channel = channel_from_frequency(
                center, defaults.width_ghz if width is None else width, plan
            )
        except ValueError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
        return Event(
            "add",
            trx=trx,
            degree=degree,
            channel=channel,
            tosnr_db=_get_number(mapping, path, "tosnr_db", required=False),
            oob_osnr_db=_get_number(mapping, path, "oob_osnr_db", required=False),
        )
    if kind == "remove":
        return Event("remove", trx=check_trx(_get_int(mapping, path, "trx")))
    if kind == "move":
        return Event(
            "move",
            trx=check_trx(_get_int(mapping, path, "trx")),
            to_degree=check_degree(_get_int(mapping, path, "to_degree"), "to_degree"),
        )
    if kind == "fiber_break":
        return Event(
            "fiber_break",
            degree=check_degree(_get_int(mapping, path, "degree"), "degree"),
            to_degree=check_degree(_get_int(mapping, path, "to_degree"), "to_degree"),
        )
    if kind == "query":
        return Event("query")
    return Event("set_params", params=_parse_params(mapping.get("params"), f"{path}.params"))


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate one scenario document."""
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not valid YAML: {exc}") from exc
    if document is None:
        raise ScenarioError("empty document")
    root = _expect_mapping(document, "scenario")
    _check_keys(
        root, "scenario", ("config", "band_plan", "params", "defaults", "drop_side", "events")
    )
    if "config" not in root:
        raise ScenarioError("config: required")
    config = _parse_config(root["config"])
    band_plan = _parse_band_plan(root["band_plan"]) if "band_plan" in root else BandPlan()
    defaults = _parse_defaults(root["defaults"]) if "defaults" in root else ReplayDefaults()
    drop_side = _parse_drop_side(root["drop_side"]) if "drop_side" in root else DropSide()
    try:
        params = LossBudgetParams(**_parse_params(root.get("params", {})))
    except ValueError as exc:
        raise ScenarioError(f"params: {exc}") from exc

    events_node = root.get("events", [])
    if not isinstance(events_node, list):
        raise ScenarioError("events: expected a list")
    events = tuple(
        _parse_event(item, i, config, band_plan, defaults)
        for i, item in enumerate(events_node)
    )
    return Scenario(config, band_plan, params, defaults, drop_side, events)


def load_scenario(path: str | Path) -> Scenario:
    """Read and parse a scenario file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    return parse_scenario(text)


# ---------------------------------------------------------------------------
# replay

@dataclass(frozen=True)
class SignalReport:
    """Snapshot of one connection taken by a query event."""

    signal_id: str
    trx: int
    degree: int
    path: str
    loss_db: float
    interferer_count: int
    osnr_oxc_db: float
    rosnr_db: float


@dataclass(frozen=True)
class LogEntry:
    index: int
    kind: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class PlanRecord:
    index: int
    kind: str
    plan: ReconfigPlan


@dataclass(frozen=True)
class RunResult:
    log: tuple[LogEntry, ...]
    reports: tuple[SignalReport, ...]
    plans: tuple[PlanRecord, ...]
    final_state: FabricState
    final_params: LossBudgetParams


def _snapshot(
    state: FabricState,
    params: LossBudgetParams,
    drop: DropSide,
    ids: dict[int, str],
) -> list[SignalReport]:
    reports = []
    for trx in sorted(state.connections):
        conn = state.connections[trx]
        osnr = fabric.signal_osnr_at_oxc(state, trx, params)
        rosnr = cascade_osnr([OsnrContribution(osnr), *drop.contributions])
        reports.append(
            SignalReport(
                signal_id=ids[trx],
                trx=trx,
                degree=conn.degree,
                path=conn.path_label,
                loss_db=fabric.signal_loss(state, trx, params) + drop.extra_loss_db,
                interferer_count=fabric.interferer_count(state, trx),
                osnr_oxc_db=osnr,
                rosnr_db=rosnr,
            )
        )
    return reports


def run_scenario(scenario: Scenario, strict: bool = False) -> RunResult:
    """Replay a scenario's events over a fresh fabric.

    Event failures are logged and skipped so one bad event does not void a
    long replay; with ``strict`` the first failure raises ScenarioError.
    Identical scenarios always produce identical results.
    """
    state = fabric.new_fabric(scenario.config)
    params = scenario.params
    log: list[LogEntry] = []
    reports: list[SignalReport] = []
    plans: list[PlanRecord] = []
    ids: dict[int, str] = {}
    next_id = 1

    for index, event in enumerate(scenario.events):
        try:
            if event.kind == "add":
                tosnr = event.tosnr_db if event.tosnr_db is not None else scenario.defaults.tosnr_db
                oob = (
                    event.oob_osnr_db
                    if event.oob_osnr_db is not None
                    else scenario.defaults.oob_osnr_db
                )
                state, result = fabric.add_connection(
                    state, event.trx, event.degree, event.channel, tosnr, oob
                )
                ids[event.trx] = f"s{next_id:03d}"
                next_id += 1
                detail = f"trx {event.trx} -> degree {event.degree} via {result.path_label}"
                if result.rehomed:
                    detail += f", rehomed trx {','.join(map(str, result.rehomed))} onto the WSS"
                log.append(LogEntry(index, "add", True, detail))
            elif event.kind == "remove":
                state = fabric.remove_connection(state, event.trx)
                ids.pop(event.trx, None)
                log.append(LogEntry(index, "remove", True, f"trx {event.trx} released"))
            elif event.kind == "move":
                plan = fabric.plan_reconfiguration(state, event.trx, event.to_degree)
                state = plan.result_state
                plans.append(PlanRecord(index, "move", plan))
                log.append(
                    LogEntry(
                        index,
                        "move",
                        True,
                        f"trx {event.trx} -> degree {event.to_degree}: "
                        f"hitless={plan.hitless}, "
                        f"disrupted=[{','.join(map(str, plan.disrupted_ports))}]",
                    )
                )
            elif event.kind == "fiber_break":
                plan = fabric.fiber_break_reroute(state, event.degree, event.to_degree)
                state = plan.result_state
                plans.append(PlanRecord(index, "fiber_break", plan))
                log.append(
                    LogEntry(
                        index,
                        "fiber_break",
                        True,
                        f"degree {event.degree} -> {event.to_degree}: "
                        f"rerouted=[{','.join(map(str, plan.moved))}], "
                        f"hitless={plan.hitless}",
                    )
                )
            elif event.kind == "query":
                snapshot = _snapshot(state, params, scenario.drop_side, ids)
                reports.extend(snapshot)
                log.append(LogEntry(index, "query", True, f"{len(snapshot)} signals reported"))
            elif event.kind == "set_params":
                params = dataclasses.replace(params, **event.params)
                log.append(
                    LogEntry(
                        index,
                        "set_params",
                        True,
                        f"updated {','.join(sorted(event.params))}",
                    )
                )
            else:  # pragma: no cover - parse_scenario rejects unknown kinds
                raise ScenarioError(f"unknown event kind {event.kind!r}")
        except (FabricError, ValueError) as exc:
            log.append(LogEntry(index, event.kind, False, f"{type(exc).__name__}: {exc}"))
            if strict:
                raise ScenarioError(f"events[{index}] ({event.kind}): {exc}") from exc

    return RunResult(tuple(log), tuple(reports), tuple(plans), state, params)


# ---------------------------------------------------------------------------
# sweeps and baseline comparison

@dataclass(frozen=True)
class SweepRow:
    n: int
    k: int
    l_proposed: int
    wss_count_mxn: int


def sweep_wss_count(
    n_values: list[int] | range, k_values: list[int], m: int
) -> tuple[SweepRow, ...]:
    """WSS-count table over transponder counts and per-degree caps.

    Row order is (n outer, k in the given order) regardless of how the
    rows are computed, so rendered output is reproducible.
    """
    n_list = list(n_values)
    k_list = list(k_values)
    if not n_list or not k_list:
        raise ValueError("sweep needs at least one n and one k value")
    rows = []
    for n in n_list:
        for k in k_list:
            rows.append(
                SweepRow(
                    n=n,
                    k=k,
                    l_proposed=fabric.required_wss_count(n, k),
                    wss_count_mxn=fabric.wss_function_count_mxn(m),
                )
            )
    return tuple(rows)


@dataclass(frozen=True)
class CompareRow:
    signal_id: str
    trx: int
    degree: int
    model: str
    path: str
    loss_db: float
    osnr_db: float


def compare_aggregators(scenario: Scenario, strict: bool = False) -> tuple[CompareRow, ...]:
    """Evaluate the replayed demand under three aggregator models.

    The scenario's events are replayed once; every connection of the final
    state is then scored under the hybrid fabric itself, a multicast
    switch of the same port count, and a monolithic M x N WSS.
    """
    result = run_scenario(scenario, strict=strict)
    state = result.final_state
    params = result.final_params
    ids: dict[int, str] = {}
    for i, trx in enumerate(sorted(state.connections), start=1):
        ids[trx] = f"s{i:03d}"

    rows: list[CompareRow] = []
    for trx in sorted(state.connections):
        conn: Connection = state.connections[trx]
        rows.append(
            CompareRow(
                ids[trx],
                trx,
                conn.degree,
                "proposed",
                conn.path_label,
                fabric.signal_loss(state, trx, params),
                fabric.signal_osnr_at_oxc(state, trx, params),
            )
        )
        mcs_loss, mcs_osnr = fabric.mcs_evaluate(
            scenario.config.transponders,
            state.degree_population(conn.degree),
            conn.tosnr_db,
            conn.oob_osnr_db,
            params,
        )
        rows.append(CompareRow(ids[trx], trx, conn.degree, "mcs", "splitter", mcs_loss, mcs_osnr))
        wss_loss, wss_osnr = fabric.mxn_wss_evaluate(conn.tosnr_db, params)
        rows.append(CompareRow(ids[trx], trx, conn.degree, "mxn_wss", "wss", wss_loss, wss_osnr))
    return tuple(rows)


# ---------------------------------------------------------------------------
# rendering

def render_report_csv(reports: tuple[SignalReport, ...] | list[SignalReport]) -> str:
    lines = [",".join(REPORT_COLUMNS)]
    for r in reports:
        lines.append(
            f"{r.signal_id},{r.trx},{r.degree},{r.path},{r.loss_db:.2f},"
            f"{r.interferer_count},{r.osnr_oxc_db:.2f},{r.rosnr_db:.2f}"
        )
    return "\n".join(lines) + "\n"


def render_sweep_csv(rows: tuple[SweepRow, ...] | list[SweepRow]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        lines.append(f"{r.n},{r.k},{r.l_proposed},{r.wss_count_mxn}")
    return "\n".join(lines) + "\n"


def render_compare_csv(rows: tuple[CompareRow, ...] | list[CompareRow]) -> str:
    lines = [",".join(COMPARE_COLUMNS)]
    for r in rows:
        lines.append(
            f"{r.signal_id},{r.trx},{r.degree},{r.model},{r.path},"
            f"{r.loss_db:.2f},{r.osnr_db:.2f}"
        )
    return "\n".join(lines) + "\n"


def render_report_text(result: RunResult) -> str:
    out = ["== events =="]
    for entry in result.log:
        status = "ok " if entry.ok else "ERR"
        out.append(f"[{entry.index:3d}] {status} {entry.kind:<11s} {entry.detail}")
    if result.plans:
        out.append("")
        out.append("== plans ==")
        for record in result.plans:
            plan = record.plan
            out.append(
                f"[{record.index:3d}] {record.kind}: hitless={plan.hitless}, "
                f"disrupted=[{','.join(map(str, plan.disrupted_ports))}]"
            )
            for step in plan.describe_steps():
                out.append(f"      - {step}")
    out.append("")
    out.append("== signals ==")
    out.append(
        f"{'id':<6}{'trx':>4}{'degree':>8}  {'path':<8}{'loss_db':>9}"
        f"{'interf':>8}{'osnr_oxc':>10}{'rosnr':>8}"
    )
    for r in result.reports:
        out.append(
            f"{r.signal_id:<6}{r.trx:>4}{r.degree:>8}  {r.path:<8}{r.loss_db:>9.2f}"
            f"{r.interferer_count:>8}{r.osnr_oxc_db:>10.2f}{r.rosnr_db:>8.2f}"
        )
    return "\n".join(out) + "\n"


def render_sweep_text(rows: tuple[SweepRow, ...] | list[SweepRow]) -> str:
    out = [f"{'n':>4}{'k':>4}{'l_proposed':>12}{'wss_count_mxn':>15}"]
    for r in rows:
        out.append(f"{r.n:>4}{r.k:>4}{r.l_proposed:>12}{r.wss_count_mxn:>15}")
    return "\n".join(out) + "\n"


def render_compare_text(rows: tuple[CompareRow, ...] | list[CompareRow]) -> str:
    out = [
        f"{'id':<6}{'trx':>4}{'degree':>8}  {'model':<9}{'path':<9}"
        f"{'loss_db':>9}{'osnr_db':>9}"
    ]
    for r in rows:
        out.append(
            f"{r.signal_id:<6}{r.trx:>4}{r.degree:>8}  {r.model:<9}{r.path:<9}"
            f"{r.loss_db:>9.2f}{r.osnr_db:>9.2f}"
        )
    return "\n".join(out) + "\n"
