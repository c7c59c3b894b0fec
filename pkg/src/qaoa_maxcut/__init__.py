"""QAOA for MaxCut: statevector simulation, classical optimizers, experiment harness."""

from .graphs import (
    CutResult,
    Graph,
    brute_force_maxcut,
    cut_value,
    generate_erdos_renyi,
    one_exchange_maxcut,
    read_graph,
    write_graph,
)
from .statevector import StateVector, expected_cut, expected_zz_sum
from .ansatz import QaoaCircuit, QaoaParams, QaoaSolution, extract_solution, prepare_qaoa_state, qaoa_objective
from .optimize import (
    OptimizeResult,
    OptimizerConfig,
    bfgs_minimize,
    finite_difference_gradient,
    nelder_mead_minimize,
    optimize_qaoa,
    parameter_shift_gradient,
    random_init,
)

__all__ = [
    "Graph",
    "CutResult",
    "generate_erdos_renyi",
    "cut_value",
    "brute_force_maxcut",
    "one_exchange_maxcut",
    "read_graph",
    "write_graph",
    "StateVector",
    "expected_zz_sum",
    "expected_cut",
    "QaoaParams",
    "QaoaCircuit",
    "QaoaSolution",
    "prepare_qaoa_state",
    "qaoa_objective",
    "extract_solution",
    "OptimizerConfig",
    "OptimizeResult",
    "parameter_shift_gradient",
    "finite_difference_gradient",
    "bfgs_minimize",
    "nelder_mead_minimize",
    "random_init",
    "optimize_qaoa",
]

__version__ = "0.1.0"
