"""Self-verification suite run by ``kseg verify``.

Each check evaluates one algebraic identity over small signatures with
random operands drawn from a single seeded generator, so a run is fully
determined by (n_max, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import idempotents as ib
from .algebra import Element, Signature, allclose, conjugate, grade_project, mul_naive
from .errors import NotInvertibleError
from .spectral import (
    enumerate_idempotents,
    forward_complex,
    forward_real,
    from_spectrum,
    idempotent_count,
    invert,
    mul_fast,
    spectrum,
)
from .structure import canonical_table, canonicalize, canonicalize_inverse, tensor_embed
from .textio import from_json, parse_element, print_element, to_json

TOL = 1e-12


@dataclass
class CheckResult:
    label: str
    passed: bool
    detail: str = ""


def _signatures(n_max: int) -> Iterator[Signature]:
    for n in range(1, n_max + 1):
        for p in range(n + 1):
            yield Signature(p, n - p)


def _close(u: Element, v: Element, tol: float = TOL) -> bool:
    return allclose(u, v, atol=tol, rtol=tol)


def _conjugation_axioms(rng, n_max):
    for sig in _signatures(n_max):
        for _ in range(5):
            u, v = Element.random(sig, rng), Element.random(sig, rng)
            a, b = (int(x) for x in rng.integers(0, sig.dim, 2))
            if conjugate(conjugate(u, a), a) != u:
                return f"involution fails in {sig}"
            if conjugate(conjugate(u, a), b) != conjugate(u, a ^ b):
                return f"group law fails in {sig}"
            if conjugate(conjugate(u, a), b) != conjugate(conjugate(u, b), a):
                return f"commutation fails in {sig}"
            lhs = conjugate(mul_naive(u, v), a)
            rhs = mul_naive(conjugate(u, a), conjugate(v, a))
            if not allclose(lhs, rhs, atol=TOL, rtol=1e-10):
                return f"distributivity fails in {sig}"


def _commutative_associative(rng, n_max):
    for sig in _signatures(min(n_max, 6)):
        u, v, w = (Element.random(sig, rng) for _ in range(3))
        if mul_naive(u, v) != mul_naive(v, u):
            return f"commutativity fails in {sig}"
        if not _close(mul_naive(mul_naive(u, v), w), mul_naive(u, mul_naive(v, w))):
            return f"associativity fails in {sig}"


def _real_basis_identities(rng, n_max):
    for n in range(1, n_max + 1):
        sig = Signature(n, 0)
        family = ib.build_f_family(sig)
        one = Element.one(sig)
        total = Element.zero(sig)
        u = Element.random(sig, rng)
        for b, f_b in family:
            total = total + f_b
            if not _close(mul_naive(f_b, f_b), f_b):
                return f"f_B^2 != f_B for B={b}, n={n}"
            for k in range(1, n + 1):
                expected = -f_b if b >> (k - 1) & 1 else f_b
                if not _close(mul_naive(Element.generator(sig, k), f_b), expected):
                    return f"e_k f_B sign wrong for k={k}, B={b}, n={n}"
            if b and not _close(mul_naive(family.f, f_b), Element.zero(sig)):
                return f"f f_B != 0 for B={b}, n={n}"
            if not _close(mul_naive(u, f_b), ib.zeta(u, b) * f_b):
                return f"U f_B != zeta_B(U) f_B for B={b}, n={n}"
        if not _close(total, one):
            return f"sum of f_B != 1 for n={n}"


def _real_f_orthogonality(rng, n_max):
    for n in range(1, min(n_max, 4) + 1):
        family = list(ib.build_f_family(Signature(n, 0)))
        for a, f_a in family:
            for b, f_b in family:
                expected = f_a if a == b else Element.zero(f_a.sig)
                if not _close(mul_naive(f_a, f_b), expected):
                    return f"f_A f_B wrong for A={a}, B={b}, n={n}"


def _complex_basis_identities(rng, n_max):
    for n in range(1, n_max + 1):
        sig = Signature(0, n)
        family = ib.build_EO_family(sig)
        e, o = family.E, family.O
        zero = Element.zero(sig)
        total = zero
        u = Element.random(sig, rng)
        for b, (e_b, o_b) in family:
            total = total + e_b
            if not (_close(mul_naive(e_b, e_b), e_b) and _close(mul_naive(o_b, o_b), -e_b)
                    and _close(mul_naive(e_b, o_b), o_b)):
                return f"E_B/O_B product relations fail for B={b}, n={n}"
            for k in range(2, n + 1):
                gen = Element.generator(sig, k)
                inside = b >> (k - 1) & 1
                if not _close(mul_naive(gen, o_b), e_b if inside else -e_b):
                    return f"e_k O_B wrong for k={k}, B={b}, n={n}"
                if not _close(mul_naive(gen, e_b), -o_b if inside else o_b):
                    return f"e_k E_B wrong for k={k}, B={b}, n={n}"
            if b:
                for x in (e, o):
                    for y in (e_b, o_b):
                        if not _close(mul_naive(x, y), zero):
                            return f"cross product with B={b} does not vanish, n={n}"
            re, im = ib.gamma(u, b)
            if not _close(mul_naive(u, e_b), re * e_b + im * o_b):
                return f"U E_C expansion fails for C={b}, n={n}"
        if not _close(total, Element.one(sig)):
            return f"sum of E_B != 1 for n={n}"
        for a in range(sig.dim):
            if conjugate(e, a) != conjugate(e, (sig.dim - 1) ^ a):
                return f"E_A != E_(A^c) for A={a}, n={n}"


def _basis_round_trips(rng, n_max):
    for n in range(1, n_max + 1):
        u = Element.random(Signature(n, 0), rng)
        back = ib.reconstruct_from_f_basis(ib.expand_in_f_basis(u), u.sig)
        if not _close(back, u):
            return f"f-basis round trip fails, n={n}"
        w = Element.random(Signature(0, n), rng)
        back = ib.reconstruct_from_EO_basis(ib.expand_in_EO_basis(w), w.sig)
        if not _close(back, w):
            return f"EO-basis round trip fails, n={n}"


def _spectral_agreement(rng, n_max):
    for n in range(1, n_max + 1):
        u = Element.random(Signature(n, 0), rng)
        s = forward_real(u).values
        if not np.allclose(s, [ib.zeta(u, b) for b in range(u.sig.dim)], rtol=0, atol=TOL):
            return f"fast real transform disagrees with zeta, n={n}"
        w = Element.random(Signature(0, n), rng)
        s = forward_complex(w).values
        slow = [complex(*ib.gamma(w, b << 1)) for b in range(w.sig.dim >> 1)]
        if not np.allclose(s, slow, rtol=0, atol=TOL):
            return f"fast complex transform disagrees with gamma, n={n}"


def _spectral_homomorphism(rng, n_max):
    for sig in _signatures(n_max):
        u, v = Element.random(sig, rng), Element.random(sig, rng)
        if not _close(from_spectrum(spectrum(u)), u):
            return f"spectral round trip fails in {sig}"
        lhs = spectrum(mul_naive(u, v)).values
        rhs = (spectrum(u) * spectrum(v)).values
        if not np.allclose(lhs, rhs, rtol=1e-10, atol=TOL):
            return f"spectrum is not multiplicative in {sig}"
        if not allclose(mul_fast(u, v), mul_naive(u, v), atol=TOL, rtol=1e-9):
            return f"mul_fast != mul_naive in {sig}"


def _canonicalization(rng, n_max):
    for sig in _signatures(n_max):
        if sig.q == 0:
            continue
        if not canonical_table(sig).is_bijective():
            return f"canonicalize is not a bijection on blades of {sig}"
        u, v = Element.random(sig, rng), Element.random(sig, rng)
        if not _close(canonicalize(mul_naive(u, v)), mul_naive(canonicalize(u), canonicalize(v))):
            return f"canonicalize is not multiplicative on {sig}"
        if canonicalize_inverse(canonicalize(u), sig) != u:
            return f"canonicalize round trip fails on {sig}"


def _no_square_root_of_minus_one(rng, n_max):
    sig = Signature(min(n_max, 3), 0)
    for _ in range(100):
        u = Element.random(sig, rng)
        if mul_naive(u, u).scalar_part < 0:
            return f"an element of {sig} has negative scalar part of its square"


def _tensor_multiplicative(rng, n_max):
    pairs = [(Signature(1, 1), Signature(2, 0)), (Signature(0, 2), Signature(1, 1))]
    for s1, s2 in pairs:
        u1, v1 = Element.random(s1, rng), Element.random(s1, rng)
        u2, v2 = Element.random(s2, rng), Element.random(s2, rng)
        lhs = tensor_embed(mul_naive(u1, v1), mul_naive(u2, v2))
        rhs = mul_naive(tensor_embed(u1, u2), tensor_embed(v1, v2))
        if not _close(lhs, rhs):
            return f"tensor embedding of {s1} and {s2} is not multiplicative"


def _idempotents(rng, n_max):
    for sig in (Signature(1, 0), Signature(2, 0), Signature(0, 1), Signature(0, 2), Signature(0, 3)):
        found = enumerate_idempotents(sig)
        if len(found) != idempotent_count(sig):
            return f"wrong idempotent count for {sig}"
        one = Element.one(sig)
        for u in found:
            if not _close(mul_naive(u, u), u):
                return f"non-idempotent listed for {sig}"
            if u != one:
                try:
                    invert(u)
                except NotInvertibleError:
                    continue
                return f"nontrivial idempotent of {sig} reported invertible"


def _inversion(rng, n_max):
    for sig in _signatures(n_max):
        u = Element.random(sig, rng) + 3.0 * sig.dim
        if not _close(mul_naive(u, invert(u)), Element.one(sig), 1e-8):
            return f"u * invert(u) != 1 in {sig}"


def _text_round_trips(rng, n_max):
    for sig in _signatures(n_max):
        u = Element.random(sig, rng)
        if parse_element(print_element(u), sig) != u:
            return f"print/parse round trip fails in {sig}"
        if from_json(to_json(u)) != u or from_json(to_json(u, sparse=True)) != u:
            return f"JSON round trip fails in {sig}"


CHECKS: list[tuple[str, Callable]] = [
    ("conjugation: involution, group law, commutation, distributivity", _conjugation_axioms),
    ("product: commutative and associative", _commutative_associative),
    ("K(n,0): f_B idempotent, e_k f_B = +-f_B, f f_B = 0, U f_B = zeta_B(U) f_B, sum f_B = 1", _real_basis_identities),
    ("K(n,0): f_A f_B = delta_AB f_A", _real_f_orthogonality),
    ("K(0,n): E_B/O_B products, e_k action, cross products vanish, U E_C expansion, E_A = E_(A^c)", _complex_basis_identities),
    ("idempotent bases: expansion round trips", _basis_round_trips),
    ("spectral transforms agree with zeta and gamma", _spectral_agreement),
    ("spectrum is an algebra isomorphism; mul_fast = mul_naive", _spectral_homomorphism),
    ("canonicalize: bijective homomorphism K(p,q) -> K(0,n)", _canonicalization),
    ("K(n,0): no element squares to -1", _no_square_root_of_minus_one),
    ("tensor embedding is multiplicative", _tensor_multiplicative),
    ("idempotent counts and singularity of nontrivial idempotents", _idempotents),
    ("inversion through the spectrum", _inversion),
    ("text and JSON round trips", _text_round_trips),
]


def run_checks(n_max: int = 5, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for label, check in CHECKS:
        try:
            failure = check(rng, n_max)
        except Exception as exc:  # a crash inside a check is a failed check
            failure = f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(label, failure is None, failure or ""))
    return results
