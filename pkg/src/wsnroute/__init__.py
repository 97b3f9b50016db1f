"""Sensor-field routing workbench.

Generates flat sensing fields, builds kNN graphs with a chunked kernel,
constructs visit-all-nodes routes greedily or by simulated annealing, scores
them under a radio energy / link-cost model with a delay constraint, and
simulates round-based network lifetime.
"""

from .anneal import (
    MOVE_SWAP,
    MOVE_TWO_OPT,
    AnnealSchedule,
    brute_force_optimal,
    default_schedule,
    sa_route,
    undersized_schedule,
)
from .bench import (
    BenchConfig,
    BenchReport,
    BenchRun,
    export_report,
    export_route_plot,
    parse_report,
    run_experiment,
)
from .energy import (
    DeadNodeError,
    EnergyConfig,
    EnergyState,
    LinkCostParams,
    RadioParams,
    link_cost,
    parse_config,
    per_link_error,
    route_cost,
    rx_energy,
    tx_energy,
)
from .field import (
    DatasetError,
    DatasetParseError,
    EmptyDatasetError,
    Point,
    SensorField,
    distance,
    generate_uniform,
    parse_dataset,
    write_dataset,
)
from .knn import (
    DistanceChunk,
    KnnGraph,
    MaxkState,
    NeighborEdge,
    brute_force_knn,
    build_knn_graph,
    dump_graph,
    init_knn_state,
    knn_update_chunk,
)
from .lifetime import (
    POLICY_FIXED,
    POLICY_ROTATE,
    DelayParams,
    DelayVerdict,
    SimReport,
    check_delay,
    path_delay,
    simulate_lifetime,
)
from .routes import (
    Route,
    dump_route,
    nn_route,
    nn_route_accelerated,
    route_length,
    validate_route,
)

__all__ = [name for name in dir() if not name.startswith("_")]
