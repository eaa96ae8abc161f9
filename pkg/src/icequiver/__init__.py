"""Symbolic computations with ice quivers with potential: mutation at
unfrozen vertices and at frozen sources/sinks, potential reduction, complete
relative Ginzburg dg algebras, derived preprojective algebras, truncated
Jacobian and boundary algebras, and the bimodule complex over the Jacobian
algebra.  All arithmetic is exact (rational)."""

from .errors import (DocumentError, IQPError, NotMutableError, ReductionError,
                     TruncationError)
from .quiver import (Arrow, IceQuiver, Isomorphism, MutabilityStatus, Quiver,
                     ValidationReport, check_mutable, ice_quiver_isomorphic,
                     to_dot, validate_ice_quiver)
from .series import (ArrowSubstitution, Path, PathSeries, Potential,
                     apply_substitution, cyclic_derivative,
                     cyclic_normal_form, potential, series_multiply)
from .quotient import (DEFAULT_TRUNCATION, TruncatedQuotient, corner_dims,
                       truncated_quotient)
from .mutation import (IQP, ReductionTrace, combinatorial_mutate, mutate,
                       mutate_with_trace, premutate, reduce, split_irredundant)
from .dg import (DgMorphism, DgQuiverAlgebra, GradedArrow, GradedQuiver,
                 boundary_h0_dims, build_ginzburg_functor, build_pi2,
                 build_relative_ginzburg, check_d_squared, h0_dims,
                 jacobian_quotient)
from .pjcomplex import (BimoduleComplexSlice, build_pj_complex, check_complex,
                        exactness_profile)
from .io import (canonical_relabel, decode_document, dumps_document,
                 encode_document, read_document)

__all__ = [name for name in dir() if not name.startswith("_")]
