"""Long binary sequences with low peak sidelobe level."""

from ._accel import BACKEND
from .baselines import (
    PrimitivePolynomial,
    best_rotation_psl,
    legendre,
    mseq,
    rotate,
    rudin_shapiro,
)
from .errors import ContractError, ParseError
from .flip import FlipGeometry, flip_many, flip_update
from .optimizer import OptimizerState, RunConfig, RunReport, run, run_parallel
from .sequence import (
    BinarySequence,
    CostReport,
    SidelobeArray,
    compute_aacf,
    compute_sidelobes,
    evaluate,
    parse_sequence,
    psl_direct,
)

__version__ = "0.1.0"
