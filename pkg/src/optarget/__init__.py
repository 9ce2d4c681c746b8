"""Targeting solvers for opinion networks with two competing stubborn agents."""

from .closed_forms import (
    CompleteConfig,
    LineConfig,
    complete_objective,
    complete_otp,
    line_objective,
    line_optimal_k,
    tree_path_objective,
)
from .engine import OpinionSolver, SolverConvergenceError
from .equilibrium import (
    EquilibriumProfile,
    Instance,
    marginal_gain,
    objective,
    solve_equilibrium,
    verify_electrical,
)
from .experiments import (
    ExperimentConfig,
    ResultRow,
    default_config,
    derive_seed,
    rows_to_csv,
    run_experiment,
    write_csv,
)
from .graphs import (
    DegenerateTreeError,
    EdgeListError,
    Graph,
    NotATreeError,
    TreeView,
    degrees,
    generate_complete,
    generate_erdos_renyi,
    generate_line,
    generate_poisson_tree,
    is_connected,
    load_edge_list,
    offspring,
    path_between,
    tree_view,
    write_edge_list,
)
from .heuristics import (
    StrategyOutcome,
    blocking,
    brute_force,
    degree_heuristic,
    greedy,
    hill_climb,
    hill_climb_multi,
    success,
    tree_descent,
)

__version__ = "0.1.0"

__all__ = [
    "CompleteConfig",
    "DegenerateTreeError",
    "EdgeListError",
    "EquilibriumProfile",
    "ExperimentConfig",
    "Graph",
    "Instance",
    "LineConfig",
    "NotATreeError",
    "OpinionSolver",
    "ResultRow",
    "SolverConvergenceError",
    "StrategyOutcome",
    "TreeView",
    "blocking",
    "brute_force",
    "complete_objective",
    "complete_otp",
    "default_config",
    "degree_heuristic",
    "degrees",
    "derive_seed",
    "generate_complete",
    "generate_erdos_renyi",
    "generate_line",
    "generate_poisson_tree",
    "greedy",
    "hill_climb",
    "hill_climb_multi",
    "is_connected",
    "line_objective",
    "line_optimal_k",
    "load_edge_list",
    "marginal_gain",
    "objective",
    "offspring",
    "path_between",
    "rows_to_csv",
    "run_experiment",
    "solve_equilibrium",
    "success",
    "tree_descent",
    "tree_path_objective",
    "tree_view",
    "verify_electrical",
    "write_csv",
    "write_edge_list",
]
