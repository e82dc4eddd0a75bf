"""Numerical toolkit for almost complex structures on R^2n.

Expressions with exact jets, complexified exterior algebra, structures
induced by coframes and their Nijenhuis tensors, the zero-set criterion for
pseudo-holomorphic hypersurfaces, explicit torus and octonionic
constructions, and taming certificates.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError, DegenerateCoframeError, DomainError, EvaluationError, ParseError,
    PreconditionError, RegularityError,
)
from .expr import parse, pretty, eval_jet  # noqa: E402
from .jet import ScalarField, ScalarJet  # noqa: E402
from .exterior import AltTensor, FormField, apply, d, pullback, wedge  # noqa: E402
from .surface import ParamSurface  # noqa: E402
from .acs import Coframe, j_at, dj_at, nijenhuis, nijenhuis_tensor, split_d, type_project  # noqa: E402

__all__ = [
    "__version__", "ConvergenceError", "DegenerateCoframeError", "DomainError", "EvaluationError",
    "ParseError", "PreconditionError", "RegularityError", "parse", "pretty", "eval_jet", "ScalarField",
    "ScalarJet", "AltTensor", "FormField", "apply", "d", "pullback", "wedge", "ParamSurface", "Coframe",
    "j_at", "dj_at", "nijenhuis", "nijenhuis_tensor", "split_d", "type_project",
]
