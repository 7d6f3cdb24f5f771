"""Text and JSON formats for elements.

Expression grammar (whitespace between tokens is ignored)::

    expr  := ['-'] term (('+' | '-') term)*
    term  := number ['*' blade] | blade
    blade := 'e' digit+                 compact form, n <= 9 only
           | 'e{' int (',' int)* '}'    general form

Blade indices are 1-based and must be strictly increasing. Numbers are
unsigned decimals with optional exponent. Repeated blades accumulate.

JSON documents::

    {"format": 1, "sig": [p, q], "coeffs": [c0, c1, ...]}      dense
    {"format": 1, "sig": [p, q], "coeffs": {"e{}": c, "e{1,3}": c}}   sparse
"""

from __future__ import annotations

import json
import math
import re
from typing import Any

import numpy as np

from .algebra import MAX_N, Element, Signature, indices_from_mask
from .errors import (
    DimensionMismatchError,
    ExpressionSyntaxError,
    IndexOutOfRangeError,
    NonCanonicalBladeError,
    SchemaError,
)

FORMAT_VERSION = 1
COMPACT_LIMIT = 9

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_DIGITS = re.compile(r"\d+")
_SPACE = re.compile(r"\s*")


def format_number(x: float) -> str:
    """Shortest decimal string that reads back as exactly ``x``."""
    text = repr(float(x))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def blade_name(mask: int, n: int, compact: bool | None = None) -> str:
    """Name of a blade: ``e12`` (compact) or ``e{1,2}`` (general).

    The scalar blade prints as ``e{}`` in the general form; in the compact
    form it has no name and callers print a bare number instead.
    """
    indices = indices_from_mask(mask)
    if compact is None:
        compact = n <= COMPACT_LIMIT
    if compact:
        if not indices:
            raise ValueError("the scalar blade has no compact name")
        return "e" + "".join(str(k) for k in indices)
    return "e{" + ",".join(str(k) for k in indices) + "}"


def print_element(u: Element) -> str:
    """Canonical text: nonzero terms in ascending blade-mask order."""
    n = u.sig.n
    parts = []
    for mask in np.flatnonzero(u.coeffs):
        c = float(u.coeffs[mask])
        magnitude = abs(c)
        if mask == 0:
            term = format_number(magnitude)
        elif magnitude == 1.0:
            term = blade_name(int(mask), n)
        else:
            term = f"{format_number(magnitude)}*{blade_name(int(mask), n)}"
        if not parts:
            parts.append("-" + term if c < 0 else term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts) if parts else "0"


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.pos = 0

    def skip(self):
        self.pos = _SPACE.match(self.text, self.pos).end()

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message):
        raise ExpressionSyntaxError(message, self.pos)

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> Element:
        coeffs = np.zeros(self.sig.dim)
        sign = 1.0
        if self.peek() == "-":
            self.pos += 1
            sign = -1.0
        while True:
            value, mask = self.term()
            with np.errstate(over="ignore"):
                coeffs[mask] += sign * value
            op = self.peek()
            if op == "":
                break
            if op not in "+-":
                self.fail(f"expected '+', '-' or end of input, found {op!r}")
            self.pos += 1
            sign = 1.0 if op == "+" else -1.0
        if not np.all(np.isfinite(coeffs)):
            raise ExpressionSyntaxError("coefficients overflow to infinity")
        return Element(self.sig, coeffs)

    def term(self) -> tuple[float, int]:
        ch = self.peek()
        if ch == "e":
            return 1.0, self.blade()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail(f"expected a number or blade, found {ch or 'end of input'!r}")
        self.pos = m.end()
        value = float(m.group())
        if self.peek() == "*":
            self.pos += 1
            if self.peek() != "e":
                self.fail("expected a blade after '*'")
            return value, self.blade()
        return value, 0

    def blade(self) -> int:
        start = self.pos
        self.pos += 1  # 'e'
        if self.pos < len(self.text) and self.text[self.pos] == "{":
            self.pos += 1
            indices = [self.integer()]
            while self.peek() == ",":
                self.pos += 1
                indices.append(self.integer())
            self.expect("}")
        else:
            m = _DIGITS.match(self.text, self.pos)
            if not m:
                self.fail("expected blade digits after 'e'")
            if self.sig.n > COMPACT_LIMIT:
                raise ExpressionSyntaxError(
                    f"compact blade names need n <= {COMPACT_LIMIT}; use e{{...}}", start
                )
            self.pos = m.end()
            indices = [int(d) for d in m.group()]
        return blade_mask(indices, self.sig.n, start)

    def integer(self) -> int:
        self.skip()
        m = _DIGITS.match(self.text, self.pos)
        if not m:
            self.fail("expected a generator index")
        self.pos = m.end()
        return int(m.group())


def blade_mask(indices: list[int], n: int, position: int | None = None) -> int:
    """Bitmask of a blade given by strictly increasing 1-based indices."""
    where = "" if position is None else f" (at position {position})"
    for k in indices:
        if not 1 <= k <= n:
            raise IndexOutOfRangeError(f"generator index {k} outside 1..{n}{where}")
    if any(a >= b for a, b in zip(indices, indices[1:])):
        raise NonCanonicalBladeError(
            f"blade indices {indices} are not strictly increasing{where}"
        )
    mask = 0
    for k in indices:
        mask |= 1 << (k - 1)
    return mask


def parse_element(text: str, sig: Signature) -> Element:
    return _Parser(text, sig).parse()


def parse_signature(text: str) -> Signature:
    """Parse ``"P,Q"``."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"signature must look like P,Q, got {text!r}")
    try:
        p, q = (int(x) for x in parts)
    except ValueError:
        raise ValueError(f"signature must look like P,Q, got {text!r}") from None
    return Signature(p, q)


def _parse_key(key: str, n: int) -> int:
    if not (key.startswith("e{") and key.endswith("}")):
        raise SchemaError(f"sparse key {key!r} is not of the form e{{...}}")
    body = key[2:-1]
    if body == "":
        return 0
    try:
        indices = [int(x) for x in body.split(",")]
    except ValueError:
        raise SchemaError(f"sparse key {key!r} has non-integer indices") from None
    if blade_name(blade_mask(indices, n), n, compact=False) != key:
        raise SchemaError(f"sparse key {key!r} is not in canonical form")
    return blade_mask(indices, n)


def to_json(u: Element, sparse: bool = False) -> dict[str, Any]:
    doc: dict[str, Any] = {"format": FORMAT_VERSION, "sig": [u.sig.p, u.sig.q]}
    if sparse:
        doc["coeffs"] = {
            blade_name(int(m), u.sig.n, compact=False): float(u.coeffs[m])
            for m in np.flatnonzero(u.coeffs)
        }
    else:
        doc["coeffs"] = [float(c) for c in u.coeffs]
    return doc


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{where} must be finite")
    return value


def from_json(doc: Any, n_cap: int = MAX_N) -> Element:
    """Build an element from a parsed ElementDocument."""
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise SchemaError(f"unsupported or missing format version {doc.get('format')!r}")
    sig_field = doc.get("sig")
    if (
        not isinstance(sig_field, list)
        or len(sig_field) != 2
        or any(isinstance(x, bool) or not isinstance(x, int) or x < 0 for x in sig_field)
    ):
        raise SchemaError(f"sig must be [p, q] with nonnegative integers, got {sig_field!r}")
    p, q = sig_field
    if p + q > n_cap:
        raise SchemaError(f"n = {p + q} exceeds the cap {n_cap}")
    sig = Signature(p, q)
    coeffs = doc.get("coeffs")
    if isinstance(coeffs, list):
        if len(coeffs) != sig.dim:
            raise DimensionMismatchError(
                f"dense coeffs for {sig} need {sig.dim} entries, got {len(coeffs)}"
            )
        values = [_real(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)]
        return Element(sig, values)
    if isinstance(coeffs, dict):
        arr = np.zeros(sig.dim)
        for key, value in coeffs.items():
            try:
                mask = _parse_key(key, sig.n)
            except (IndexOutOfRangeError, NonCanonicalBladeError) as exc:
                raise SchemaError(f"invalid sparse key {key!r}: {exc}") from None
            arr[mask] = _real(value, f"coeffs[{key!r}]")
        return Element(sig, arr)
    raise SchemaError("coeffs must be a list or an object")


def dumps(u: Element, sparse: bool = False, **kwargs) -> str:
    return json.dumps(to_json(u, sparse), **kwargs)


def loads(text: str, n_cap: int = MAX_N) -> Element:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return from_json(doc, n_cap)
