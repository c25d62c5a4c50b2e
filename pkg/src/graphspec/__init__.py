"""Spectra, energies and invariants of splitting, shadow, duplicate and hub-satellite graphs."""

from .errors import *  # noqa: F401,F403
from .graph_core import (
    Graph,
    complete,
    cycle,
    degrees,
    from_edge_list,
    has_isolated_vertex,
    is_bipartite,
    is_connected,
    path,
    petersen,
    star,
)
from .graph_ops import Op, OperationKind, apply, duplicate, duplicate_iter, h1, h2, h3, shadow, splitting
from .invariants import (
    Invariant,
    Mode,
    are_equienergetic,
    closed_form_invariant,
    degree_kirchhoff,
    invariant_report,
    is_integral,
    is_randic_integral,
    kemeny,
    matrix_tree_count,
    spanning_trees,
    verify_all,
)
from .linalg import DenseSymMatrix, Spectrum, group_multiplicities, kron, sym_eigenvalues
from .spectral import MatrixKind, energy, matrix, predict_energy, predict_spectrum, spectrum

__version__ = "0.1.0"
