"""Fourier transforms, decay exponents, slices and energies of measures on graphs."""
from .errors import DomainError, FallbackWarning, GraphFourierError, ValidationError
from .measures import (
    AtomicMeasure1D,
    AtomicMeasure2D,
    DecayEstimate,
    FrequencyPoint,
    annulus_sup,
    autocorrelation_mass,
    decay_exponent,
    ft_eval,
    ft_eval_1d,
    project_1d,
)

__version__ = "0.1.0"
