"""Unitary and projective unitary equivalence of finite frames.

Frames are compared through their Gram matrices and Bargmann invariants
(m-products): small determining sets of invariants tied to the cycle space of
the frame graph decide equivalence and rebuild the Gramian.  Harmonic frames
of cyclic groups are classified by orbit counting and an exact search.
"""

from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .equivalence import *  # noqa: F401,F403
from .equivalence import __all__ as _equiv_all
from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FrameqError,
    InconsistentModulus,
    InvalidInput,
    MissingCycleProduct,
    NotInSpan,
    NotPSD,
    NotPSDWarning,
    NotRealEquiangular,
    SearchBudgetExceeded,
    SizeMismatch,
    ZeroVector,
)
from .graph import *  # noqa: F401,F403
from .graph import __all__ as _graph_all
from .harmonic import *  # noqa: F401,F403
from .harmonic import __all__ as _harmonic_all
from .invariants import *  # noqa: F401,F403
from .invariants import __all__ as _inv_all
from .similarity import *  # noqa: F401,F403
from .similarity import __all__ as _sim_all

__version__ = "0.1.0"

__all__ = (
    _core_all
    + _graph_all
    + _inv_all
    + _equiv_all
    + _sim_all
    + _harmonic_all
    + [
        "FrameqError",
        "InvalidInput",
        "SizeMismatch",
        "DimensionMismatch",
        "NotPSD",
        "ZeroVector",
        "NotInSpan",
        "DivisionByZero",
        "MissingCycleProduct",
        "InconsistentModulus",
        "NotRealEquiangular",
        "SearchBudgetExceeded",
        "NotPSDWarning",
    ]
)
