from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from qcong.eta import EtaQuotient, pochhammer
from qcong.expr import (DissectionClaim, EtaExpr, EvaluationError,
                        IdentityClaim, ParseError, evaluate, format_expr,
                        iter_fixture, load_fixture, parse_dissection,
                        parse_expr, parse_identity, verify_identity)
from qcong.oracle import builtin, counts_series

LEMMA_2 = ("f1*f2 = f6*f9^4/(f3*f18^2) - q*f9*f18 - 2*q^2*f3*f18^4/(f6*f9^2)")
LEMMA_5 = ("f2/f1^2 = f6^4*f9^6/(f3^8*f18^3) + 2*q*f6^3*f9^3/f3^7 "
           "+ 4*q^2*f6^2*f18^3/f3^6")


def only_term(text):
    (t,) = parse_expr(text).terms
    return t


class TestParseExpr:
    def test_product(self):
        assert only_term("f1*f2") == EtaQuotient.of({1: 1, 2: 1})

    def test_full_term(self):
        t = only_term("2*q^2*f12^3*f18^3/f6^7")
        assert (t.coeff, t.qpow, t.exponents) == (2, 2, {6: -7, 12: 3, 18: 3})

    def test_signs(self):
        e = parse_expr("f3^3/f1 - q*f12^3/f4")
        assert [t.coeff for t in e.terms] == [1, -1]
        assert e.terms[1].qpow == 1

    def test_leading_minus(self):
        assert only_term("-f1").coeff == -1

    def test_merged_exponents(self):
        assert only_term("f2*f2^3/(f2*f1)").exponents == {1: -1, 2: 3}

    def test_big_integers(self):
        big = 10**40 + 7
        assert only_term(f"{big}*f1").coeff == big

    def test_whitespace_insensitive(self):
        assert parse_expr("  2 * q ^ 2 *f1 ") == parse_expr("2*q^2*f1")

    def test_q_in_denominator_parses(self):
        assert only_term("f1/q").qpow == -1

    @pytest.mark.parametrize("text,column", [
        ("f1*", 4), ("f1 f2", 4), ("f1/f0", 4), ("2*x", 3), ("f", 2),
        ("f1/(f2*f3", 10), ("f1/2", 4), ("0*f1", 1), ("f1^", 4),
    ])
    def test_errors_carry_position(self, text, column):
        with pytest.raises(ParseError) as info:
            parse_expr(text)
        assert info.value.line == 1
        assert info.value.column == column

    def test_expected_set(self):
        with pytest.raises(ParseError) as info:
            parse_expr("f1*")
        assert info.value.expected == {"integer", "q", "f<int>"}

    def test_nested_parentheses_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("f1/((f2))")

    def test_empty_sum_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("")
        with pytest.raises(ValueError):
            EtaExpr(())


class TestParseIdentity:
    def test_lemma(self):
        c = parse_identity(LEMMA_2)
        assert c.modulus is None
        assert [t.coeff for t in c.rhs.terms] == [1, -1, -2]
        assert [t.qpow for t in c.rhs.terms] == [0, 1, 2]

    def test_trivial(self):
        c = parse_identity("f1 = f1")
        assert c.lhs == c.rhs

    def test_modulus(self):
        c = parse_identity("f1^8 + 2*q*f4^8 = f2^4 (mod 3)")
        assert c.modulus == 3
        assert len(c.lhs.terms) == 2

    def test_missing_equals(self):
        with pytest.raises(ParseError, match="missing '='"):
            parse_identity("f1 + f2")

    def test_bad_modulus(self):
        with pytest.raises(ParseError):
            parse_identity("f1 = f1 (mod 1)")
        with pytest.raises(ParseError):
            parse_identity("f1 = f1 (mod)")


class TestDissectionSyntax:
    def test_parse(self):
        c = parse_dissection("f2/(f1*f4) @ 3:1 = q*f6^2 (mod 3)", "x")
        assert (c.m, c.r, c.modulus, c.label) == (3, 1, 3, "x")

    def test_zero_rhs(self):
        assert parse_dissection("f1 @ 3:2 = 0 (mod 3)").claimed is None

    def test_bad_residue(self):
        with pytest.raises(ParseError):
            parse_dissection("f1 @ 3:3 = f1")


class TestFormat:
    def test_canonical(self):
        e = parse_expr("f18^3*f12^3*q^2*2/f6^7")
        assert format_expr(e) == "2*q^2*f12^3*f18^3/f6^7"

    def test_denominator_group(self):
        assert format_expr(parse_expr("1/(f2*f1)")) == "1/(f1*f2)"

    def test_terms_sorted_by_qpow(self):
        e = parse_expr("q*f1 - 3*f2")
        assert format_expr(e) == "-3*f2 + q*f1"


class TestEvaluate:
    def test_f1(self):
        assert evaluate(parse_expr("f1"), 13) == pochhammer(1, 13)

    def test_toh_dissection_and_pod(self):
        rhs = parse_expr("f18^9/(f3^2*f9^3*f12^2*f36^3) + q*f6^2*f18^3/(f3^3*f12^3)"
                         " + q^2*f6^4*f9^3*f36^3/(f3^4*f12^4*f18^3)")
        lhs = evaluate(parse_expr("f2/(f1*f4)"), 120)
        assert evaluate(rhs, 120) == lhs
        assert lhs == counts_series(builtin("pod"), 120)

    def test_negative_valuation_error_names_term(self):
        with pytest.raises(EvaluationError, match="f1/q"):
            evaluate(parse_expr("f1/q"), 10)


class TestVerifyIdentity:
    def test_overpartition_dissection(self):
        r = verify_identity(parse_identity(LEMMA_5), 500)
        assert r.passed and r.order == 500 and r.modulus is None

    def test_failure_witness(self):
        r = verify_identity(parse_identity("f1 = f2"), 10)
        assert r.outcome == "fail"
        assert (r.witness, r.witness_value, r.witness_other) == (1, -1, 0)

    def test_binomial_mod_3(self):
        r = verify_identity(parse_identity("f1^3 = f3 (mod 3)"), 500)
        assert r.passed and r.modulus == 3

    def test_perturbed_lemma_fails(self):
        r = verify_identity(parse_identity(LEMMA_5.replace("4*q^2", "5*q^2")), 100)
        assert r.outcome == "fail" and r.witness == 2

    def test_evaluation_error_reports_side(self):
        r = verify_identity(parse_identity("f1 = f2/q"), 10)
        assert r.outcome == "error" and r.message.startswith("rhs")


class TestFixtures:
    def test_comments_labels_and_lines(self):
        text = "# header\n\n[first] f1 = f1\nf1^2 = f2 (mod 2)  # trailing\n"
        lines = list(iter_fixture(text))
        assert [f.line for f in lines] == [3, 4]
        assert lines[0].claim.label == "first"
        assert lines[1].claim.modulus == 2

    def test_error_line_number(self):
        with pytest.raises(ParseError) as info:
            list(iter_fixture("f1 = f1\n\nf1 = f2 +\n"))
        assert info.value.line == 3

    def test_bundled_lemma_file(self):
        path = resources.files("qcong.fixtures").joinpath("lemmas.txt")
        claims = load_fixture(path)
        exact = [c for c in claims if c.modulus is None]
        modular = [c for c in claims if c.modulus is not None]
        assert len(exact) == 7 and len(modular) == 6
        assert all(c.label for c in claims)
        for c in exact:
            assert verify_identity(c, 500).passed, c.label
        for c in modular:
            assert verify_identity(c, 500).passed, c.label
            # the binomial instances are genuinely modular
            exact_version = IdentityClaim(c.lhs, c.rhs, None, c.label)
            assert not verify_identity(exact_version, 500).passed


# -- properties ------------------------------------------------------------

terms = st.builds(
    lambda coeff, qpow, factors: EtaQuotient.of(factors, coeff, qpow),
    st.integers(-50, 50).filter(bool),
    st.integers(0, 5),
    st.dictionaries(st.integers(1, 36), st.integers(-9, 9), max_size=5),
)
exprs = st.lists(terms, min_size=1, max_size=5).map(lambda ts: EtaExpr(tuple(ts)))


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_round_trip(e):
    assert parse_expr(format_expr(e)) == e


@settings(max_examples=100, deadline=None)
@given(exprs, exprs)
def test_evaluate_is_linear(e1, e2):
    assert evaluate(e1 + e2, 40) == evaluate(e1, 40) + evaluate(e2, 40)


@settings(max_examples=100, deadline=None)
@given(exprs, exprs, st.sampled_from([None, 2, 3]))
def test_verify_identity_symmetric(e1, e2, m):
    forward = verify_identity(IdentityClaim(e1, e2, m), 30)
    backward = verify_identity(IdentityClaim(e2, e1, m), 30)
    assert forward.outcome == backward.outcome
    assert forward.witness == backward.witness
