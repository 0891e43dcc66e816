"""Solvers, verifiers, preprocessing and instance generators for token moving on graphs."""

from .errors import (
    CapExceeded, ConstructionError, InputError, MapMismatch, MoveError, ParseError,
    TokenMoveError, UnsupportedVariant,
)
from .graph import (
    Graph, Instance, Move, MoveSequence, RangePath, Verdict, apply_move, find_free_path,
    induced_move_graph, instance_stats, validate_sequence,
)
from .oracle import OracleResult, decide, shortest_move_once, shortest_transforming_sequence
from .preprocess import (
    ContractionMap, contract, lift_sequence, prune_obstacles, subdivide, to_max_degree_three,
)
from .steiner import SteinerResult, min_steiner_tree
from .unlabelled import PartitionPlan, Solution, solve_by_k, solve_uutm
from .directed import LabelledForestWitness, solve_udtm

__version__ = "0.1.0"
