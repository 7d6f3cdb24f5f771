"""Structural isomorphisms between the algebras K(p, q).

canonicalize
    K(p, q) -> K(0, n) for q >= 1. Inside K(p, q) the elements
    g_k = e_k e_{p+1} (k <= p) and g_k = e_k (k > p) all square to -1 and
    generate the whole algebra; identifying them with the canonical
    generators of K(0, n) gives the isomorphism. Solving for e_k yields
    e_k -> -g_k g_{p+1} for k <= p and e_k -> g_k otherwise.

tensor_embed
    K(p1, q1) x K(p2, q2) -> K(p1 + p2, q1 + q2), sending e_A (x) e_B to
    the product of the relabeled blades.

Every generator image is a signed single blade, so both maps act on
coefficient vectors as signed permutations computed once per signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import Element, Signature, blade_mul, parity_signs
from .errors import DimensionMismatchError, WrongIsomorphismClassError


@dataclass(frozen=True)
class SignedPermutation:
    """Blade table: basis blade ``A`` maps to ``sign[A] * e_{target[A]}``."""

    target: np.ndarray
    sign: np.ndarray

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        out = np.empty_like(coeffs)
        out[self.target] = self.sign * coeffs
        return out

    def is_bijective(self) -> bool:
        dim = len(self.target)
        return bool(np.array_equal(np.sort(self.target), np.arange(dim)))


def _blade_table(generator_images: list[tuple[int, int]], target_sig: Signature) -> SignedPermutation:
    """Extend signed-blade generator images multiplicatively to every blade."""
    n = len(generator_images)
    dim = 1 << n
    target = np.zeros(dim, dtype=np.int64)
    sign = np.ones(dim)
    # blades containing generator k are (blades below 2^(k-1)) * image(e_k)
    for k, (g_sign, g_mask) in enumerate(generator_images):
        half = 1 << k
        below = target[:half]
        target[half:2 * half] = below ^ g_mask
        shared = parity_signs(below & g_mask & target_sig.neg_mask, target_sig.n)
        sign[half:2 * half] = sign[:half] * g_sign * shared
    target.flags.writeable = False
    sign.flags.writeable = False
    return SignedPermutation(target, sign)


def _require_complex_class(sig: Signature) -> None:
    if sig.q < 1:
        raise WrongIsomorphismClassError(f"{sig} has no generator squaring to -1")


@lru_cache(maxsize=64)
def canonical_table(sig: Signature) -> SignedPermutation:
    """Blade table of canonicalize for K(p, q) -> K(0, n)."""
    _require_complex_class(sig)
    p, n = sig.p, sig.n
    canon = Signature(0, n)
    pivot = 1 << p  # g_{p+1}
    images = []
    for k in range(1, n + 1):
        bit = 1 << (k - 1)
        if k <= p:
            s, m = blade_mul(bit, pivot, canon)
            images.append((-s, m))
        else:
            images.append((1, bit))
    return _blade_table(images, canon)


@lru_cache(maxsize=64)
def canonical_inverse_table(sig: Signature) -> SignedPermutation:
    """Blade table of K(0, n) -> K(p, q): g_k -> e_k e_{p+1} (k <= p), e_k (k > p)."""
    _require_complex_class(sig)
    p, n = sig.p, sig.n
    pivot = 1 << p
    images = []
    for k in range(1, n + 1):
        bit = 1 << (k - 1)
        if k <= p:
            images.append(blade_mul(bit, pivot, sig))
        else:
            images.append((1, bit))
    return _blade_table(images, sig)


def canonicalize(u: Element) -> Element:
    """Image of u under the isomorphism K(p, q) -> K(0, n), q >= 1."""
    table = canonical_table(u.sig)
    return Element._wrap(Signature(0, u.sig.n), table.apply(u.coeffs))


def canonicalize_inverse(u: Element, target: Signature) -> Element:
    """Carry an element of K(0, n) back to K(p, q)."""
    if u.sig.p != 0:
        raise WrongIsomorphismClassError(f"{u.sig} is not of the form K(0,n)")
    if target.n != u.sig.n:
        raise DimensionMismatchError(f"cannot map {u.sig} onto {target}")
    table = canonical_inverse_table(target)
    return Element._wrap(target, table.apply(u.coeffs))


def tensor_permutation(sig1: Signature, sig2: Signature) -> tuple[int, ...]:
    """Output position (0-based) of each concatenated generator.

    Generators of the first factor occupy concatenated positions
    0..n1-1, the second factor n1..n1+n2-1. The relabeling is stable and
    moves every +1-squaring generator ahead of every -1-squaring one.
    """
    n1 = sig1.n
    squares = [sig1.square(k) for k in range(1, n1 + 1)]
    squares += [sig2.square(k) for k in range(1, sig2.n + 1)]
    order = sorted(range(len(squares)), key=lambda i: squares[i] < 0)
    perm = [0] * len(order)
    for new_pos, old_pos in enumerate(order):
        perm[old_pos] = new_pos
    return tuple(perm)


def tensor_signature(sig1: Signature, sig2: Signature) -> Signature:
    return Signature(sig1.p + sig2.p, sig1.q + sig2.q)


@lru_cache(maxsize=64)
def _tensor_targets(sig1: Signature, sig2: Signature) -> np.ndarray:
    perm = tensor_permutation(sig1, sig2)
    n = len(perm)
    targets = np.zeros(1 << n, dtype=np.int64)
    for bit, dest in enumerate(perm):
        targets[np.arange(1 << n) & (1 << bit) != 0] |= 1 << dest
    targets.flags.writeable = False
    return targets


def tensor_embed(u: Element, v: Element) -> Element:
    """u (x) v as an element of K(p1 + p2, q1 + q2).

    The blades of u and v involve disjoint generators, so e_A (x) e_B maps
    to the single blade on A and the shifted B with coefficient u[A] v[B].
    """
    out_sig = tensor_signature(u.sig, v.sig)
    # concatenated mask = A | (B << n1)  <=>  row-major outer(v, u)
    product = np.outer(v.coeffs, u.coeffs).ravel()
    out = np.zeros(out_sig.dim)
    out[_tensor_targets(u.sig, v.sig)] = product
    return Element._wrap(out_sig, out)
