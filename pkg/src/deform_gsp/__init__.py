"""Graph signal processing with the deformed graph Laplacian."""

from .errors import DeformGSPError
from .graph_core import (
    Graph,
    Mode,
    balance_partition,
    bipartition,
    connected_components,
    degree_matrix,
    generate,
    karate,
    load_edge_list,
)
from .laplacian_ops import (
    OperatorMatrix,
    combinatorial_laplacian,
    deformed_laplacian,
    is_psd,
    quadratic_form,
    signed_laplacian,
    signless_laplacian,
)
from .learner import LearnConfig, LearnResult, dynamic_experiment, gamma_sweep, learn, objective, solve_fixed_r
from .pep import PepSpectrum, StructureReport, companion_matrix, pep_spectrum, structure_report
from .spectral import SparseCoefficients, SpectralBasis, dgft, eig_sym, idgft, nmse, topk_project
from .dynamics import reaction_term, rhs, simulate

__version__ = "0.1.0"
