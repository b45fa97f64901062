"""Sizing and replay toolkit for CDC-ROADM transponder aggregators.

Models an aggregator that serves each degree from an unfiltered
variable-combiner path capped at K signals, backed by a small shared pool
of WSS filters (floor(N/(K+1)) units), plus multicast-switch and
monolithic MxN WSS baselines for comparison.
"""

from .coupler import (
    CouplerCascade,
    MziStage,
    confluence_loss,
    mzi_ratio_from_phase,
    stage_ratios,
    through_power,
)
from .fabric import (
    AddResult,
    CapacityError,
    Connection,
    ContentionError,
    FabricConfig,
    FabricError,
    FabricState,
    InvariantError,
    LossBudgetParams,
    OutputMode,
    PortBusyError,
    ReconfigPlan,
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
from .grid import (
    Band,
    BandPlan,
    Channel,
    DEFAULT_BAND_PLAN,
    channel_from_frequency,
    channel_from_wavelength,
    channels_disjoint,
)
from .linkmath import (
    OsnrContribution,
    cascade_osnr,
    combine_osnr,
    db_to_linear,
    linear_to_db,
    splitter_loss,
)
from .scenario import (
    Scenario,
    ScenarioError,
    SignalReport,
    compare_aggregators,
    load_scenario,
    parse_scenario,
    run_scenario,
    sweep_wss_count,
)

__version__ = "0.1.0"
