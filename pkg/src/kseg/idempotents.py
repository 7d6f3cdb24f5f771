"""Idempotent special bases and the coordinate functionals that go with them.

Real class K(n, 0):
    f = 2^-n * (sum of all blades), f_B = conjugate(f, B) for every B.
    The f_B are mutually annihilating idempotents summing to 1, and
    U f_B = zeta_B(U) f_B with zeta_B(e_C) = (-1)^|B & C|.

Complex class K(0, n):
    f = 2^-(n-1) * (sum of all blades); E and O are the even and odd grade
    parts of f with alternating signs per grade pair. E_B, O_B are their
    conjugates for B avoiding one excluded generator (generator 1 by
    default). U E_C = Re(gamma_C(U)) E_C + Im(gamma_C(U)) O_C with
    gamma_C(e_D) = (-1)^|C & D| * i^|D|.

Everything here is evaluated by direct O(2^n) summation per coordinate; the
batched transforms live in :mod:`kseg.spectral`.
"""

from __future__ import annotations

from typing import Iterator, Mapping

import numpy as np

from .algebra import Element, Signature, conjugate, parity_signs, popcount_table
from .errors import MaskContainsGeneratorOneError, WrongIsomorphismClassError


def _require_real_class(sig: Signature) -> None:
    if sig.q != 0:
        raise WrongIsomorphismClassError(f"{sig} is not of the form K(n,0)")


def _require_complex_class(sig: Signature) -> None:
    if sig.p != 0 or sig.n < 1:
        raise WrongIsomorphismClassError(f"{sig} is not of the form K(0,n) with n >= 1")


def _check_exclude(sig: Signature, exclude: int) -> int:
    if not 1 <= exclude <= sig.n:
        raise ValueError(f"excluded generator {exclude} outside 1..{sig.n}")
    return 1 << (exclude - 1)


def build_f(sig: Signature) -> Element:
    """The symmetric idempotent 2^-n * sum(e_A) of K(n, 0)."""
    _require_real_class(sig)
    if sig.n < 1:
        raise WrongIsomorphismClassError("build_f needs at least one generator")
    return Element(sig, np.full(sig.dim, 1.0 / sig.dim))


class RealIdempotentFamily:
    """The family {f_B} of K(n, 0), materialized one member at a time."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.f = build_f(sig)

    def __getitem__(self, mask: int) -> Element:
        return conjugate(self.f, mask)

    def __len__(self):
        return self.sig.dim

    def masks(self) -> range:
        return range(self.sig.dim)

    def __iter__(self) -> Iterator[tuple[int, Element]]:
        for mask in self.masks():
            yield mask, self[mask]


def build_f_family(sig: Signature) -> RealIdempotentFamily:
    return RealIdempotentFamily(sig)


def build_EO(sig: Signature) -> tuple[Element, Element]:
    """The even/odd pair (E, O) of K(0, n).

    A blade of even grade 2k enters E with sign (-1)^k, a blade of odd
    grade 2k+1 enters O with sign (-1)^k; all magnitudes are 2^-(n-1).
    """
    _require_complex_class(sig)
    grades = popcount_table(sig.n).astype(np.int64)
    magnitude = 1.0 / (sig.dim >> 1)
    alternating = np.where((grades // 2) % 2 == 0, magnitude, -magnitude)
    even = np.where(grades % 2 == 0, alternating, 0.0)
    odd = np.where(grades % 2 == 1, alternating, 0.0)
    return Element(sig, even), Element(sig, odd)


class ComplexIdempotentFamily:
    """The pairs (E_B, O_B) of K(0, n) for B avoiding generator ``exclude``.

    Keys are full n-bit masks with the excluded generator's bit clear.
    """

    def __init__(self, sig: Signature, exclude: int = 1):
        self.E, self.O = build_EO(sig)
        self.sig = sig
        self.exclude = exclude
        self._excluded_bit = _check_exclude(sig, exclude)

    def masks(self) -> list[int]:
        return [m for m in range(self.sig.dim) if not m & self._excluded_bit]

    def __getitem__(self, mask: int) -> tuple[Element, Element]:
        if mask & self._excluded_bit:
            raise MaskContainsGeneratorOneError(
                f"mask {mask} contains the excluded generator e{self.exclude}"
            )
        return conjugate(self.E, mask), conjugate(self.O, mask)

    def __len__(self):
        return self.sig.dim >> 1

    def __iter__(self) -> Iterator[tuple[int, tuple[Element, Element]]]:
        for mask in self.masks():
            yield mask, self[mask]


def build_EO_family(sig: Signature, exclude: int = 1) -> ComplexIdempotentFamily:
    return ComplexIdempotentFamily(sig, exclude)


def zeta(u: Element, mask: int) -> float:
    """sum_C (-1)^|B & C| u[C], the f_B-coordinate of u."""
    _require_real_class(u.sig)
    if not 0 <= mask < u.sig.dim:
        raise ValueError(f"mask {mask} out of range for {u.sig}")
    signs = parity_signs(np.arange(u.sig.dim) & mask, u.sig.n)
    return float(np.dot(signs, u.coeffs))


_I_POWERS = np.array([1, 1j, -1, -1j])


def gamma(u: Element, mask: int, exclude: int = 1) -> tuple[float, float]:
    """(Re, Im) of sum_C (-1)^|B & C| i^|C| u[C]."""
    sig = u.sig
    _require_complex_class(sig)
    if not 0 <= mask < sig.dim:
        raise ValueError(f"mask {mask} out of range for {sig}")
    if mask & _check_exclude(sig, exclude):
        raise MaskContainsGeneratorOneError(
            f"mask {mask} contains the excluded generator e{exclude}"
        )
    blades = np.arange(sig.dim)
    weights = parity_signs(blades & mask, sig.n) * _I_POWERS[popcount_table(sig.n) % 4]
    z = complex(np.dot(weights, u.coeffs))
    return z.real, z.imag


def expand_in_f_basis(u: Element) -> dict[int, float]:
    """Coordinates of u in {f_B}: mask B -> zeta_B(u)."""
    _require_real_class(u.sig)
    return {mask: zeta(u, mask) for mask in range(u.sig.dim)}


def reconstruct_from_f_basis(coords: Mapping[int, float], sig: Signature) -> Element:
    """sum_B coords[B] f_B; missing masks count as zero."""
    family = build_f_family(sig)
    total = np.zeros(sig.dim)
    for mask, c in coords.items():
        if c:
            total += c * family[mask].coeffs
    return Element(sig, total)


def expand_in_EO_basis(u: Element, exclude: int = 1) -> dict[int, tuple[float, float]]:
    """Coordinates of u in {E_B, O_B}: mask B -> (zeta_B^R(u), zeta_B^I(u))."""
    family = build_EO_family(u.sig, exclude)
    return {mask: gamma(u, mask, exclude) for mask in family.masks()}


def reconstruct_from_EO_basis(
    coords: Mapping[int, tuple[float, float]], sig: Signature, exclude: int = 1
) -> Element:
    family = build_EO_family(sig, exclude)
    total = np.zeros(sig.dim)
    for mask, (re, im) in coords.items():
        e_b, o_b = family[mask]
        total += re * e_b.coeffs + im * o_b.coeffs
    return Element(sig, total)
