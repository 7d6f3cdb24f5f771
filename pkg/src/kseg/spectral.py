"""Fast transforms onto the direct-sum decompositions and what they enable.

K(n, 0) is isomorphic to R^(2^n) through the coordinates zeta_B, and K(0, n)
to C^(2^(n-1)) through gamma_B for B avoiding generator 1. Both coordinate
maps factor into one butterfly per generator, so an element's spectrum costs
O(n 2^n) and products become pointwise. Mixed signatures go through
:func:`kseg.structure.canonicalize` first.

Spectral coordinates are stored in bitmask order of B. For the complex kind
position ``j`` holds the coordinate of ``B = j << 1`` (generator 1 never
occurs in B).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import Element, Signature, _require_same_sig
from .errors import (
    KindMismatchError,
    NotInvertibleError,
    TooLargeError,
    WrongIsomorphismClassError,
)
from .opcount import OpCounter
from .structure import canonicalize, canonicalize_inverse

REAL = "real"
COMPLEX = "complex"

DEFAULT_RELATIVE_TOL = 1e-12
DEFAULT_MAX_IDEMPOTENTS = 1 << 16


@dataclass(frozen=True, eq=False)
class SpectrumVector:
    """Image of an element in R^(2^n) (kind ``real``) or C^(2^(n-1)) (``complex``).

    ``values`` is float64 for the real kind and complex128 for the complex
    kind; :attr:`pairs` gives the complex coordinates as (Re, Im) rows.
    ``sig`` is the signature of the element the spectrum came from, which
    may be a mixed signature routed through canonicalization.
    """

    kind: str
    values: np.ndarray
    sig: Signature

    def __post_init__(self):
        if self.kind not in (REAL, COMPLEX):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        dtype = np.float64 if self.kind == REAL else np.complex128
        values = np.array(self.values, dtype=dtype, copy=True)
        expected = self.sig.dim if self.kind == REAL else self.sig.dim >> 1
        if values.shape != (expected,):
            raise ValueError(f"{self.kind} spectrum of {self.sig} needs {expected} values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def pairs(self) -> np.ndarray:
        if self.kind == REAL:
            raise KindMismatchError("a real spectrum has no (Re, Im) pairs")
        return np.column_stack((self.values.real, self.values.imag))

    @property
    def masks(self) -> np.ndarray:
        """Bitmask of B for each coordinate."""
        idx = np.arange(len(self.values))
        return idx if self.kind == REAL else idx << 1

    def __len__(self):
        return len(self.values)

    def __mul__(self, other: "SpectrumVector") -> "SpectrumVector":
        if not isinstance(other, SpectrumVector):
            return NotImplemented
        if self.kind != other.kind or self.sig != other.sig:
            raise KindMismatchError("spectra of different kinds or signatures")
        return SpectrumVector(self.kind, self.values * other.values, self.sig)


def _spectral_kind(sig: Signature) -> str:
    return REAL if sig.q == 0 else COMPLEX


def _butterflies(x: np.ndarray, twist, counter: OpCounter | None, ops_per_pair: int) -> np.ndarray:
    # One stage per bit: (lo, hi) at masks differing in that bit -> (lo + t*hi, lo - t*hi).
    length = len(x)
    h = 1
    while h < length:
        v = x.reshape(-1, 2, h)
        lo, hi = v[:, 0, :], v[:, 1, :]
        if twist is not None:
            hi = twist * hi
        x = np.stack((lo + hi, lo - hi), axis=1).reshape(length)
        if counter is not None:
            counter.add(ops_per_pair * length)
        h <<= 1
    return x


def _forward_real_raw(coeffs: np.ndarray, counter) -> np.ndarray:
    return _butterflies(coeffs, None, counter, 1)


def _inverse_real_raw(values: np.ndarray, counter) -> np.ndarray:
    x = _butterflies(values, None, counter, 1)
    if counter is not None:
        counter.mul(len(x))
    return x / len(x)


def _forward_complex_raw(coeffs: np.ndarray, counter) -> np.ndarray:
    # generator 1 folds into the imaginary unit: (x, y) -> x + i y
    z = coeffs[0::2] + 1j * coeffs[1::2]
    # multiplying by i is a swap and a negation, so each stage is one complex add per output
    return _butterflies(z, 1j, counter, 2)


def _inverse_complex_raw(values: np.ndarray, counter) -> np.ndarray:
    # (a, b) -> (a + b, -i (a - b)) per stage, then one global 1/2^(n-1)
    z = _butterflies(values, None, counter, 2)
    m = len(z)
    h = 1
    while h < m:
        v = z.reshape(-1, 2, h)
        v[:, 1, :] *= -1j
        h <<= 1
    z = z / m
    if counter is not None:
        counter.mul(2 * m)
    out = np.empty(2 * m)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def forward_real(u: Element, counter: OpCounter | None = None) -> SpectrumVector:
    """s[B] = zeta_B(u) for every B, for u in K(n, 0)."""
    if u.sig.q != 0:
        raise WrongIsomorphismClassError(f"{u.sig} is not of the form K(n,0)")
    return SpectrumVector(REAL, _forward_real_raw(u.coeffs, counter), u.sig)


def inverse_real(s: SpectrumVector, counter: OpCounter | None = None) -> Element:
    """sum_B s[B] f_B."""
    if s.kind != REAL:
        raise KindMismatchError("inverse_real needs a real spectrum")
    return Element._wrap(s.sig, _inverse_real_raw(s.values, counter))


def forward_complex(u: Element, counter: OpCounter | None = None) -> SpectrumVector:
    """s[B] = gamma_B(u) for every B avoiding generator 1, for u in K(0, n)."""
    if u.sig.p != 0 or u.sig.n < 1:
        raise WrongIsomorphismClassError(f"{u.sig} is not of the form K(0,n) with n >= 1")
    return SpectrumVector(COMPLEX, _forward_complex_raw(u.coeffs, counter), u.sig)


def inverse_complex(s: SpectrumVector, counter: OpCounter | None = None) -> Element:
    """sum_B Re(s[B]) E_B + Im(s[B]) O_B, in K(0, n)."""
    if s.kind != COMPLEX:
        raise KindMismatchError("inverse_complex needs a complex spectrum")
    sig = Signature(0, s.sig.n)
    return Element._wrap(sig, _inverse_complex_raw(s.values, counter))


def spectrum(u: Element, counter: OpCounter | None = None) -> SpectrumVector:
    """Spectrum of an element of any signature.

    Mixed signatures are canonicalized to K(0, n) first; the returned vector
    still records the original signature so :func:`from_spectrum` can map
    back.
    """
    sig = u.sig
    if sig.q == 0:
        return forward_real(u, counter)
    if sig.p == 0:
        return forward_complex(u, counter)
    if counter is not None:
        counter.mul(sig.dim)
    s = forward_complex(canonicalize(u), counter)
    return SpectrumVector(COMPLEX, s.values, sig)


def from_spectrum(s: SpectrumVector, counter: OpCounter | None = None) -> Element:
    if s.kind == REAL:
        return inverse_real(s, counter)
    u = inverse_complex(s, counter)
    if s.sig.p == 0:
        return u
    if counter is not None:
        counter.mul(s.sig.dim)
    return canonicalize_inverse(u, s.sig)


def mul_fast(u: Element, v: Element, counter: OpCounter | None = None) -> Element:
    """Product through the spectral isomorphism, O(n 2^n)."""
    _require_same_sig(u, v)
    su = spectrum(u, counter)
    sv = spectrum(v, counter)
    if counter is not None:
        # real: one multiply per coordinate; complex: 4 multiplies + 2 adds
        if su.kind == REAL:
            counter.mul(len(su))
        else:
            counter.mul(4 * len(su))
            counter.add(2 * len(su))
    return from_spectrum(su * sv, counter)


def _vanishing(s: SpectrumVector, tol: float | None) -> tuple[np.ndarray, float]:
    magnitudes = np.abs(s.values)
    if tol is None:
        tol = DEFAULT_RELATIVE_TOL * (float(magnitudes.max()) if len(magnitudes) else 0.0)
    elif not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return s.masks[magnitudes <= tol], tol


def is_invertible(u: Element, tol: float | None = None) -> bool:
    """True iff every spectral component has magnitude above ``tol``.

    ``tol`` defaults to 1e-12 times the largest component magnitude.
    """
    zeros, _ = _vanishing(spectrum(u), tol)
    return len(zeros) == 0


def invert(u: Element, tol: float | None = None) -> Element:
    """Multiplicative inverse via componentwise reciprocals of the spectrum.

    Raises NotInvertibleError carrying the masks B of the vanishing
    components (for K(0, n) these index the E_B that annihilate u).
    """
    s = spectrum(u)
    zeros, tol = _vanishing(s, tol)
    if len(zeros):
        shown = ", ".join(str(int(m)) for m in zeros[:8])
        more = "" if len(zeros) <= 8 else f", ... ({len(zeros)} total)"
        raise NotInvertibleError(
            f"spectral components at B masks [{shown}{more}] are below {tol:.3g}",
            components=[int(m) for m in zeros],
        )
    return from_spectrum(SpectrumVector(s.kind, 1.0 / s.values, s.sig))


def idempotent_count(sig: Signature) -> int:
    """Number of idempotents: 2^(2^n) for K(n, 0), 2^(2^(n-1)) otherwise."""
    components = sig.dim if _spectral_kind(sig) == REAL else sig.dim >> 1
    return 1 << components


def _basis_from_spectrum(sig: Signature) -> np.ndarray:
    # row j: the element whose spectrum is the indicator of coordinate j
    kind = _spectral_kind(sig)
    m = sig.dim if kind == REAL else sig.dim >> 1
    rows = []
    for j in range(m):
        indicator = np.zeros(m, dtype=np.float64 if kind == REAL else np.complex128)
        indicator[j] = 1.0
        rows.append(from_spectrum(SpectrumVector(kind, indicator, sig)).coeffs)
    return np.array(rows).reshape(m, sig.dim)


def iter_idempotents(sig: Signature, chunk: int = 4096) -> Iterator[Element]:
    """Every idempotent of K(p, q), lazily, in spectrum-bitmask order.

    An idempotent's spectrum is componentwise idempotent in R or C, hence
    0 or 1 in each coordinate; subset bitmask s selects the coordinates
    equal to 1.
    """
    basis = _basis_from_spectrum(sig)
    m = basis.shape[0]
    total = 1 << m
    bits = 1 << np.arange(m)
    for start in range(0, total, chunk):
        subsets = np.arange(start, min(start + chunk, total))
        selected = ((subsets[:, None] & bits[None, :]) != 0).astype(np.float64)
        for row in selected @ basis:
            yield Element._wrap(sig, row)


def enumerate_idempotents(sig: Signature, max_count: int = DEFAULT_MAX_IDEMPOTENTS) -> list[Element]:
    count = idempotent_count(sig)
    if count > max_count:
        raise TooLargeError(f"{sig} has {count} idempotents, above the cap {max_count}")
    return list(iter_idempotents(sig))
