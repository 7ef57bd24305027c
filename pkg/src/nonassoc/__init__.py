"""Exact computation in finite-dimensional nonassociative algebras."""

from .scalars import (COMPLEX, COMPLEX_RATIONAL, RATIONAL, REAL, ComplexRational,
                      format_scalar, parse_scalar)
from .errors import (AlgebraError, DependentVectorsError, DimensionMismatch,
                     IsotropicVectorError, ModeMismatch, PreconditionError,
                     SingularMatrixError, UnitVerificationError, VerificationError)
from .core import (LEFT, RIGHT, Algebra, associator, center_and_nucleus, change_of_basis,
                   commutator, commutator_associator, find_unit, inverse, jordan_product,
                   mult_operator, multiply, power_left_normed, subalgebra_closure,
                   unit_from_element, zero_divisor_kernels)
from .construct import (builtin, cayley_dickson, cayley_dickson_double, complexify,
                        conjugate, direct_sum, gen_algebra, to_real, unitize)
from .identities import (IdentityReport, artin_probe, check_all, check_linearized_identity,
                         check_moufang, check_skornyakov, power_associativity_probe)
from .quadratic import (FormFlags, QuadraticStructure, extract, form_property_checks,
                        gram_schmidt, involution, natural_norm, riesz_and_adjoint)
from .classify import (ClassificationOutcome, classify, commutative_division_probe,
                       extend_generator_chain, verify_isomorphism)
from .spectrum import (SpectrumResult, one_sided_spectrum, open_question_probe,
                       spectrum_complex, spectrum_real)
from .results import Check
from ._kernels import jit_available, jit_enabled, set_jit

__version__ = "0.1.0"
