"""Spectral tools for k-uniform hypergraphs.

Odd-bipartition certificates over GF(2), adjacency / Laplacian /
signless-Laplacian tensors, Perron-Frobenius spectral radii, and executable
checks of how odd-bipartiteness shows up in those spectra.
"""

from .hypergraph import (
    Bipartition,
    Hypergraph,
    cartesian_product,
    degrees,
    generate,
    is_connected,
    odd_bipartition,
    parse_hypergraph,
)
from .spectral import (
    EigenPair,
    PowerIterationConfig,
    laplacian_rho_eigenpair,
    power_rho,
    product_eigenpair,
    residual,
    zero_q_eigenvector,
)
from .tensor import (
    DenseTensor,
    EdgeListOperator,
    adjacency_tensor,
    apply,
    degree_tensor,
    diag_similarity,
    direct_product,
    general_product,
    hadamard_power,
    laplacian,
    matrix_sandwich,
    signless_laplacian,
    weakly_irreducible,
)
from .verify import SuiteConfig, run_suite

__version__ = "0.1.0"
