"""Orthogonal Cartan subalgebras and bracket factorizations in compact classical Lie algebras."""

__version__ = "0.1.0"

from .exceptions import *  # noqa: E402,F401,F403
from .numkernel import DEFAULT_TOL, Tolerances  # noqa: E402
from .liealg import LieAlgebra, algebra  # noqa: E402
from .cartan import (CartanSub, circulant_cartan_sp, circulant_cartan_su,  # noqa: E402
                     family_orthogonal_cartan, orthogonal_cartan, standard_cartan,
                     verify_cartan, verify_orthogonal)
from .coxeter import CoxeterLift, coxeter_lift_su, solve_bracket  # noqa: E402
from .descent import (RootBasis, descend_to_complement, goto_factorize,  # noqa: E402
                      kostant_projection_check, one_and_half_span, root_space_decomposition)
