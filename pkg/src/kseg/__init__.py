"""Commutative analogues of Clifford algebras K(p, q).

Dense element arithmetic, conjugations, idempotent bases and a spectral
O(n 2^n) multiplication engine built on the direct-sum decompositions
K(n, 0) ~ R^(2^n) and K(0, n) ~ C^(2^(n-1)).
"""

from .algebra import (
    MAX_N,
    Element,
    Signature,
    add,
    allclose,
    blade_mul,
    conjugate,
    grade_project,
    indices_from_mask,
    mask_from_indices,
    mul_naive,
    scale,
)
from .errors import (
    DimensionMismatchError,
    ExpressionSyntaxError,
    FormatError,
    GradeOutOfRangeError,
    IndexOutOfRangeError,
    KindMismatchError,
    KsegError,
    MaskContainsGeneratorOneError,
    NonCanonicalBladeError,
    NotInvertibleError,
    SchemaError,
    SignatureMismatchError,
    TooLargeError,
    WrongIsomorphismClassError,
)
from .idempotents import (
    build_EO,
    build_EO_family,
    build_f,
    build_f_family,
    expand_in_EO_basis,
    expand_in_f_basis,
    gamma,
    reconstruct_from_EO_basis,
    reconstruct_from_f_basis,
    zeta,
)
from .opcount import OpCounter
from .spectral import (
    SpectrumVector,
    enumerate_idempotents,
    forward_complex,
    forward_real,
    from_spectrum,
    idempotent_count,
    inverse_complex,
    inverse_real,
    invert,
    is_invertible,
    iter_idempotents,
    mul_fast,
    spectrum,
)
from .structure import (
    canonicalize,
    canonicalize_inverse,
    tensor_embed,
    tensor_permutation,
)
from .textio import from_json, parse_element, print_element, to_json

__version__ = "0.1.0"
