"""Non-abelian zeta functions for curves over finite fields and rank-2 lattices."""
from .artin import ArtinZeta, class_number, zeta_value
from .core import InvariantTable, NonAbelianZeta, assemble_Z, build_zeta
from .curves import HyperellipticCurve, count_points
from .errors import ConsistencyError, ConvergenceError, InputError, NazetaError
from .exact import Poly, RationalFn, find_roots
from .field import FieldSpec, make_field
from .rank2 import Rank2Genus2Input, assemble_rank2_genus2

__version__ = "0.1.0"
