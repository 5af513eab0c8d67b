"""Matrix model of the Sierpinski gasket.

Finite levels of 3x3 tensor algebras with a three-scalar block
decomposition, restriction and self-similar extension maps, the
quadratic energy form, a finite spectral triple with its zeta-residue
calculus, and the classical vertex picture living on the diagonal.
"""

from .algebra import (
    GasketElement,
    ProductState,
    V0Form,
    alpha,
    beta_block,
    char_chi,
    coembed,
    corner_pair_state,
    element_from_json_dict,
    element_to_json_dict,
    eval_product_state,
    extend_to,
    extension_chain,
    from_dense,
    harmonic_extension,
    identity,
    osc,
    random_element,
    restrict,
    restrict_to,
    symmetric_extension,
    to_dense,
    to_v0form,
    trace_tau,
    trace_tau_mj,
    zero,
)
from .classical import (
    ClassicalFunction,
    VertexLabel,
    classical_energy,
    classical_harmonic_step,
    classical_restrict,
    enumerate_vertices,
    label_to_point,
    selfsimilar_measure,
    vertex_age,
)
from .energy import (
    NORM_ENERGY_CONSTANT,
    EnergyReport,
    check_norm_energy_bounds,
    check_selfsimilarity,
    minimize_over_fiber,
    slice_form,
)
from .tensor import op_norm
from .triple import (
    ENERGY_ABSCISSA,
    METRIC_DIMENSION,
    commutator_norm,
    connes_trace_residue,
    dimension_fit,
    eigenvalue_counting,
    energy_residue,
    hilbert_trace,
    lip_norm,
    zeta_energy,
    zeta_trace,
)

__version__ = "0.1.0"
