"""Sampled functions on [0, 1], their graph measures and generators."""
from .boxdim import box_counts, box_dimension
from .functions import (
    SampledFunction,
    affine_extend,
    graph_indices,
    graph_pushforward,
    restrict,
    transport,
    transport_bound,
    uniform_graph_measure,
    uniform_grid,
)
from .generators import GeneratorSpec, fbm_values, gen, weierstrass_values
from .goodfn import (
    GoodBoundReport,
    GoodFunction,
    cosine_sum_minimum,
    good_function,
    in_cosine_set,
    patch_half_width,
    sup_error,
    verify_good_bound,
)
