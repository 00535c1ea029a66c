"""Correlation-tensor norms of multipartite qudit states and the separability,
GME and dimensionality bounds they can be compared against."""

__version__ = "0.1.0"

from .basis import GeneratorBasis, build_basis, dichotomic_observables
from .bounds import BoundSpec, BoundValue, compute_bound, default_criteria
from .correlations import NormTable, correlation_tensor, cx, norm_table, norm_table_direct, \
    norm_table_moebius, subset_norm_direct, tensor_element
from .detect import evaluate, misalign, noise_sweep, sequential_acquire
from .states import DensityMatrix, make_ame43, make_ghz, make_graph_state, make_w, \
    mix_with_white_noise, partial_trace, purity
