"""Exact and sampled verification of pentagon, ten-term, tetrahedron and
four-simplex solutions over matrices, point maps and q-series."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .hopf import HopfData, builtin, canonical_pair, represent_on_dual, validate_hopf  # noqa: F401
from .laurent import TruncLaurent  # noqa: F401
from .pointmaps import CoordSet, PointMap  # noqa: F401
from .relations import (EQUATIONS, MatrixBackend, PointMapBackend, SolutionPair,  # noqa: F401
                        build_B, build_R, check_co_system, check_equation, check_FSE,
                        check_intertwining, check_pentagon, check_TE, check_ten_term,
                        symmetry_transform)
from .report import RelationReport  # noqa: F401
from .tensor import TensorOp  # noqa: F401
