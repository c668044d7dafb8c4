"""Compactness diagnostics for families of functions in exponentially weighted L2 on the half-line."""

__version__ = "0.1.0"

from .kernels import BACKEND
from .errors import (
    ConfigurationError,
    DiagnosisRefused,
    EvaluationError,
    InvariantViolation,
    PegoLabError,
    PegoRejected,
    PreconditionError,
    ScaleError,
)
from .halfline import (
    DEFAULT_GRID,
    HalfLineFunction,
    PegoFamily,
    TimeGrid,
    bump,
    exponential,
    from_dict,
    fsum,
    indicator,
    modulate,
    sampled,
    scale,
    translate,
    verify_pego,
    weight,
    zero,
)
from .transform import (
    FrequencyGrid,
    convolution_theorem_check,
    convolve,
    fourier,
    laplace_line,
    plancherel_check,
    riemann_lebesgue_profile,
)
from .criteria import (
    exp_equicont_modulus,
    exp_equivanish_tail,
    l2_bound,
    laplace_equicont_modulus,
    laplace_equivanish_tail,
    scale_sweep,
)
from .diagnosis import diagnose, epsilon_net_oracle, run_chains
from .families import catalog, get_family, random_family
