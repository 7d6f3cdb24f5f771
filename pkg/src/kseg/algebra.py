"""Elements of the commutative algebras K(p, q) and their direct arithmetic.

K(p, q) is generated by n = p + q commuting generators e_1..e_n, the first
p squaring to +1 and the remaining q to -1. A basis blade e_A is named by a
bitmask over generators: bit k-1 is set when e_k occurs in the blade, so
mask 0 is the unit. Elements are dense real coefficient vectors indexed by
blade mask.

Generator indices are 1-based everywhere a user sees them and 0-based bit
positions internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import GradeOutOfRangeError, SignatureMismatchError
from .opcount import OpCounter

MAX_N = 24

# Upper bound on the size of the temporary (rows x 2^n) blocks in mul_naive.
_NAIVE_BLOCK = 1 << 17


@dataclass(frozen=True)
class Signature:
    """The pair (p, q) fixing the algebra K(p, q)."""

    p: int
    q: int = 0

    def __post_init__(self):
        for name in ("p", "q"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
            object.__setattr__(self, name, int(value))
        if self.p + self.q > MAX_N:
            raise ValueError(f"n = p + q = {self.p + self.q} exceeds the limit {MAX_N}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def neg_mask(self) -> int:
        """Bitmask of the generators squaring to -1."""
        return ((1 << self.n) - 1) ^ ((1 << self.p) - 1)

    def square(self, k: int) -> int:
        """Square (+1 or -1) of generator e_k, k 1-based."""
        if not 1 <= k <= self.n:
            raise ValueError(f"generator index {k} outside 1..{self.n}")
        return 1 if k <= self.p else -1

    def __str__(self):
        return f"K({self.p},{self.q})"


def mask_from_indices(indices: Iterable[int], n: int) -> int:
    """Bitmask for a set of 1-based generator indices."""
    mask = 0
    for k in indices:
        if not 1 <= k <= n:
            raise ValueError(f"generator index {k} outside 1..{n}")
        mask |= 1 << (k - 1)
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    """Ascending 1-based generator indices of a bitmask."""
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def grade(mask: int) -> int:
    return int(mask).bit_count()


@lru_cache(maxsize=None)
def popcount_table(n: int) -> np.ndarray:
    """popcount(mask) for every mask below 2^n, as a read-only uint8 array."""
    table = np.zeros(1 << n, dtype=np.uint8)
    for k in range(n):
        table[1 << k: 2 << k] = table[: 1 << k] + 1
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def _sign_table(n: int) -> np.ndarray:
    table = 1.0 - 2.0 * (popcount_table(n) & 1)
    table.flags.writeable = False
    return table


def parity_signs(masks, n: int) -> np.ndarray:
    """(-1)^popcount(mask), elementwise, as float64."""
    return _sign_table(n)[masks]


def blade_mul(a: int, b: int, sig: Signature) -> tuple[int, int]:
    """Product of two basis blades: returns (sign, mask).

    Generators commute, so the only sign comes from repeated generators
    that square to -1.
    """
    shared_negative = a & b & sig.neg_mask
    sign = -1 if shared_negative.bit_count() & 1 else 1
    return sign, a ^ b


class Element:
    """Immutable element of K(p, q).

    ``coeffs[mask]`` is the coefficient of the blade named by ``mask``.
    Coefficients must be finite.
    """

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: Signature, coeffs):
        arr = np.array(coeffs, dtype=np.float64, copy=True)
        if arr.shape != (sig.dim,):
            raise ValueError(
                f"{sig} needs {sig.dim} coefficients, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    @classmethod
    def _wrap(cls, sig: Signature, arr: np.ndarray) -> "Element":
        # Internal fast path: takes ownership of a freshly computed array.
        if not np.all(np.isfinite(arr)):
            raise ValueError("operation produced non-finite coefficients")
        arr.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "sig", sig)
        object.__setattr__(obj, "coeffs", arr)
        return obj

    @classmethod
    def zero(cls, sig: Signature) -> "Element":
        return cls._wrap(sig, np.zeros(sig.dim))

    @classmethod
    def scalar(cls, sig: Signature, value: float = 1.0) -> "Element":
        arr = np.zeros(sig.dim)
        arr[0] = value
        return cls._wrap(sig, arr)

    @classmethod
    def one(cls, sig: Signature) -> "Element":
        return cls.scalar(sig, 1.0)

    @classmethod
    def blade(cls, sig: Signature, mask: int, coeff: float = 1.0) -> "Element":
        if not 0 <= mask < sig.dim:
            raise ValueError(f"blade mask {mask} out of range for {sig}")
        arr = np.zeros(sig.dim)
        arr[mask] = coeff
        return cls._wrap(sig, arr)

    @classmethod
    def generator(cls, sig: Signature, k: int) -> "Element":
        """The generator e_k (1-based)."""
        sig.square(k)
        return cls.blade(sig, 1 << (k - 1))

    @classmethod
    def random(cls, sig: Signature, rng: np.random.Generator, scale: float = 1.0) -> "Element":
        return cls._wrap(sig, rng.uniform(-scale, scale, sig.dim))

    def __getitem__(self, mask: int) -> float:
        return float(self.coeffs[mask])

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.sig == other.sig and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"Element({self.sig}, {self})"

    def __str__(self):
        from .textio import print_element
        return print_element(self)

    def __neg__(self):
        return Element._wrap(self.sig, -self.coeffs)

    def __add__(self, other):
        if isinstance(other, Element):
            return add(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return add(self, Element.scalar(self.sig, float(other)))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Element, int, float, np.floating, np.integer)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            from .spectral import mul_fast
            return mul_fast(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return scale(self, float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return scale(self, 1.0 / float(other))
        return NotImplemented

    def grade(self, k: int) -> "Element":
        return grade_project(self, k)

    def conj(self, mask: int) -> "Element":
        return conjugate(self, mask)

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])


def _require_same_sig(u: Element, v: Element) -> None:
    if u.sig != v.sig:
        raise SignatureMismatchError(f"operands live in {u.sig} and {v.sig}")


def add(u: Element, v: Element) -> Element:
    _require_same_sig(u, v)
    return Element._wrap(u.sig, u.coeffs + v.coeffs)


def scale(u: Element, c: float) -> Element:
    return Element._wrap(u.sig, u.coeffs * float(c))


def mul_naive(u: Element, v: Element, counter: OpCounter | None = None) -> Element:
    """Direct blade-by-blade product, O(4^n).

    Output coefficient c collects each unordered pair {a, a ^ c} once as
    ``u[a] v[b] + u[b] v[a]``, so swapping the operands gives a bit-identical
    result.
    """
    _require_same_sig(u, v)
    sig = u.sig
    n, dim = sig.n, sig.dim
    x, y = u.coeffs, v.coeffs
    sgn = _sign_table(n)
    neg = sig.neg_mask
    idx = np.arange(dim)
    out = np.zeros(dim)
    out[0] = (sgn[idx & neg] * (x * y)).sum()
    # outputs with top bit h pair rows a lacking bit h with b = a ^ c
    for h in range(n):
        cols = np.arange(1 << h, 2 << h)
        rows = idx[(idx >> h) & 1 == 0]
        per_block = max(1, _NAIVE_BLOCK // len(cols))
        acc = np.zeros(len(cols))
        for start in range(0, len(rows), per_block):
            a = rows[start:start + per_block, None]
            b = a ^ cols[None, :]
            acc += (sgn[a & b & neg] * (x[a] * y[b] + x[b] * y[a])).sum(axis=0)
        out[1 << h: 2 << h] = acc
    if counter is not None:
        # one multiply and one accumulate per ordered pair of blades
        counter.mul(dim * dim)
        counter.add(dim * dim)
    return Element._wrap(sig, out)


def grade_project(u: Element, k: int) -> Element:
    """Keep only the grade-k part of u."""
    n = u.sig.n
    if not 0 <= k <= n:
        raise GradeOutOfRangeError(f"grade {k} outside 0..{n}")
    keep = popcount_table(n) == k
    return Element._wrap(u.sig, np.where(keep, u.coeffs, 0.0))


def conjugate(u: Element, mask: int) -> Element:
    """Superposed conjugation negating every generator in ``mask``.

    The coefficient of e_C changes sign iff |mask & C| is odd.
    """
    dim = u.sig.dim
    if not 0 <= mask < dim:
        raise ValueError(f"conjugation mask {mask} out of range for {u.sig}")
    signs = parity_signs(np.arange(dim) & mask, u.sig.n)
    return Element._wrap(u.sig, u.coeffs * signs)


def allclose(u: Element, v: Element, atol: float = 1e-12, rtol: float = 1e-10) -> bool:
    """Componentwise |u - v| <= atol + rtol * max|coeff|."""
    if u.sig != v.sig:
        return False
    bound = atol + rtol * max(np.max(np.abs(u.coeffs)), np.max(np.abs(v.coeffs)))
    return bool(np.all(np.abs(u.coeffs - v.coeffs) <= bound))


def max_abs_diff(u: Element, v: Element) -> float:
    _require_same_sig(u, v)
    return float(np.max(np.abs(u.coeffs - v.coeffs)))
