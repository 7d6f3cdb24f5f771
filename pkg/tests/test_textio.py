import json

import numpy as np
import pytest

from kseg import (
    DimensionMismatchError,
    Element,
    ExpressionSyntaxError,
    IndexOutOfRangeError,
    NonCanonicalBladeError,
    SchemaError,
    Signature,
    from_json,
    parse_element,
    print_element,
    to_json,
)
from kseg.textio import blade_name, dumps, format_number, loads, parse_signature
from oracles import fuzz_element


class TestParse:
    def test_mixed_terms(self):
        u = parse_element("1 + 2*e1 - 3*e12", Signature(2, 0))
        assert u.coeffs.tolist() == [1.0, 2.0, 0.0, -3.0]

    def test_general_blade(self):
        sig = Signature(0, 12)
        u = parse_element("e{1,12}", sig)
        assert u == Element.blade(sig, (1 << 0) | (1 << 11))

    def test_leading_minus_and_accumulation(self):
        u = parse_element("-e1 + 2.5*e1 - .5", Signature(1, 0))
        assert u.coeffs.tolist() == [-0.5, 1.5]

    def test_exponents_and_whitespace(self):
        u = parse_element("  1e-3*e{ 1 , 2 }+2E2 ", Signature(1, 1))
        assert u.coeffs.tolist() == [200.0, 0.0, 0.0, 1e-3]

    def test_scalar_blade_in_general_form(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_element("e{}", Signature(1, 0))

    @pytest.mark.parametrize("text", ["", "1 +", "2 e1", "*e1", "1 + + e1", "e", "3*", "e{1", "e{1,}", "1..2", "e1 e2"])
    def test_syntax_errors(self, text):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_element(text, Signature(2, 0))
        assert info.value.position is not None

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            parse_element("e3", Signature(2, 0))
        with pytest.raises(IndexOutOfRangeError):
            parse_element("e{0}", Signature(2, 0))

    @pytest.mark.parametrize("text", ["e21", "e11", "e{2,1}", "e{3,3}"])
    def test_non_canonical(self, text):
        with pytest.raises(NonCanonicalBladeError):
            parse_element(text, Signature(3, 0))

    def test_compact_form_limited_to_small_algebras(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_element("e1", Signature(0, 10))
        assert parse_element("e{1}", Signature(0, 10)) == Element.generator(Signature(0, 10), 1)

    def test_overflow_rejected(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_element("1e308 + 1e308", Signature(0, 0))

    def test_signature(self):
        assert parse_signature("2,3") == Signature(2, 3)
        for bad in ("2", "a,b", "1,2,3", "-1,2"):
            with pytest.raises(ValueError):
                parse_signature(bad)


class TestPrint:
    def test_zero_and_unit(self):
        sig = Signature(2, 1)
        assert print_element(Element.zero(sig)) == "0"
        assert print_element(Element.one(sig)) == "1"

    def test_ascending_mask_order(self):
        sig = Signature(1, 1)
        assert print_element(Element(sig, [1.0, -2.0, 3.0, -1.0])) == "1 - 2*e1 + 3*e2 - e12"

    def test_leading_negative(self):
        assert print_element(Element(Signature(1, 0), [0.0, -0.25])) == "-0.25*e1"

    def test_general_names_above_nine(self):
        sig = Signature(0, 10)
        assert print_element(Element.blade(sig, 0b1000000001, 2.0)) == "2*e{1,10}"

    def test_blade_names(self):
        assert blade_name(0b101, 3) == "e13"
        assert blade_name(0b101, 3, compact=False) == "e{1,3}"
        assert blade_name(0, 3, compact=False) == "e{}"

    def test_number_format_round_trips(self):
        for x in (0.1, 1 / 3, 5e-324, 1.7976931348623157e308, 123456789.0, 1e22):
            assert float(format_number(x)) == x
        assert format_number(2.0) == "2"

    def test_fuzz_round_trip(self, rng):
        for _ in range(500):
            u = fuzz_element(rng)
            text = print_element(u)
            v = parse_element(text, u.sig)
            assert v == u, text
            assert print_element(v) == text


class TestJson:
    def test_dense(self):
        u = Element(Signature(1, 0), [1.5, -2.0])
        assert to_json(u) == {"format": 1, "sig": [1, 0], "coeffs": [1.5, -2.0]}
        assert from_json(to_json(u)) == u

    def test_sparse(self):
        u = Element(Signature(1, 1), [1.0, 0.0, 0.0, 4.0])
        doc = to_json(u, sparse=True)
        assert doc["coeffs"] == {"e{}": 1.0, "e{1,2}": 4.0}
        assert from_json(doc) == u

    def test_fuzz_round_trip(self, rng):
        for _ in range(300):
            u = fuzz_element(rng)
            for sparse in (False, True):
                v = loads(dumps(u, sparse=sparse))
                assert v == u
                assert np.array_equal(v.coeffs.view(np.uint64), u.coeffs.view(np.uint64))

    @pytest.mark.parametrize(
        "doc",
        [
            [],
            {"sig": [1, 0], "coeffs": [0, 0]},
            {"format": 2, "sig": [1, 0], "coeffs": [0, 0]},
            {"format": 1, "sig": [1], "coeffs": [0, 0]},
            {"format": 1, "sig": [-1, 2], "coeffs": [0, 0]},
            {"format": 1, "sig": [True, 0], "coeffs": [0, 0]},
            {"format": 1, "sig": [1, 0], "coeffs": "x"},
            {"format": 1, "sig": [1, 0], "coeffs": [0, "a"]},
            {"format": 1, "sig": [1, 0], "coeffs": {"e1": 1.0}},
            {"format": 1, "sig": [2, 0], "coeffs": {"e{2,1}": 1.0}},
            {"format": 1, "sig": [2, 0], "coeffs": {"e{3}": 1.0}},
            {"format": 1, "sig": [2, 0], "coeffs": {"e{ 1}": 1.0}},
            {"format": 1, "sig": [20, 20], "coeffs": []},
        ],
    )
    def test_schema_errors(self, doc):
        with pytest.raises(SchemaError):
            from_json(doc)

    def test_dense_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            from_json({"format": 1, "sig": [2, 0], "coeffs": [1.0, 2.0]})

    def test_size_cap(self):
        with pytest.raises(SchemaError):
            from_json({"format": 1, "sig": [3, 0], "coeffs": [0.0] * 8}, n_cap=2)

    def test_invalid_json_text(self):
        with pytest.raises(SchemaError):
            loads("{not json")

    def test_non_finite_rejected(self):
        with pytest.raises(SchemaError):
            loads('{"format": 1, "sig": [0, 0], "coeffs": [NaN]}')

    def test_dumps_is_json(self):
        text = dumps(Element.one(Signature(1, 0)))
        assert json.loads(text)["coeffs"] == [1.0, 0.0]
