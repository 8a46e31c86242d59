"""Exit criteria.  All comparisons are exact integer equality.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import time
from importlib import resources

import pytest

from qcong.cache import SeriesCache
from qcong.eta import pentagonal_terms, pochhammer
from qcong.expr import (DissectionClaim, IdentityClaim, evaluate, load_fixture,
                        parse_expr, parse_identity, verify_dissection,
                        verify_identity)
from qcong.oracle import BUILTINS, builtin, counts_series, enumerate_count
from qcong.verifier import (GENERATING_FUNCTIONS, CongruenceClaim, FamilyClaim,
                            InternalClaim, family_progression,
                            induction_step_offset, verify_binomial,
                            verify_congruence, verify_family, verify_internal)

from test_eta import test_modular_expansion_is_reduction as _eta_mod_hom
from test_expr import test_round_trip as _round_trip
from test_series import (test_add_associates as _add_assoc,
                         test_add_commutes as _add_comm,
                         test_dissection_reassembly as _reassembly,
                         test_distributes as _distributes,
                         test_inverse_contract as _inverse,
                         test_inverse_contract_modular as _inverse_mod,
                         test_mul_associates as _mul_assoc,
                         test_mul_commutes as _mul_comm,
                         test_reduce_mod_is_ring_homomorphism as _reduce_hom)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def fixture_claims(name):
    return load_fixture(resources.files("qcong.fixtures").joinpath(f"{name}.txt"))


def by_label(name):
    return {c.label: c for c in fixture_claims(name)}


def fresh_tables():
    pochhammer.cache_clear()
    pentagonal_terms.cache_clear()


C1 = criterion(1, "generating functions match the oracle (n <= 500), DP == enumeration (n <= 25)")


@C1
def test_c1_generating_functions():
    fresh_tables()
    start = time.perf_counter()
    for name in ("pond", "pend"):
        expansion = evaluate(parse_expr(GENERATING_FUNCTIONS[name]), 501)
        assert expansion == counts_series(builtin(name), 501), name
    for name, spec in BUILTINS.items():
        dp = counts_series(spec, 26)
        assert [enumerate_count(spec, n) for n in range(26)] == list(dp), name
    assert time.perf_counter() - start < 5.0


C2 = criterion(2, "identity suite: seven exact lemmas and six binomial instances to order 500")

EXACT_LEMMAS = ["toh-f2/(f1f4)", "f1f2", "1/(f1f2)", "f2^2/f1",
                "overpartitions f2/f1^2", "ped f4/f1", "cubic f3^3/f1"]
BINOMIAL = [(2, 1, 1, 1), (3, 1, 1, 1), (3, 1, 2, 1), (2, 2, 1, 1),
            (3, 2, 1, 1), (3, 1, 1, 2)]


@C2
def test_c2_identity_suite():
    fresh_tables()
    start = time.perf_counter()
    lemmas = by_label("lemmas")
    for label in EXACT_LEMMAS:
        claim = lemmas[label]
        assert claim.modulus is None
        report = verify_identity(claim, 500)
        assert report.passed, (label, report.witness)
    for p, j, k, m in BINOMIAL:
        report = verify_binomial(p, j, k, m, 500)
        assert report.passed and report.modulus == p ** j, (p, j, k, m)
        # the same fixture line exists and passes too
        fixture = lemmas[f"binomial p={p} j={j} k={k} m={m}"]
        assert verify_identity(fixture, 500).passed
    assert time.perf_counter() - start < 30.0


C3 = criterion(3, "Ramanujan-like congruences for pond and pend")


@C3
def test_c3_congruences():
    fresh_tables()
    start = time.perf_counter()
    checks = [(CongruenceClaim("pond", 3, 2, 2), 2000),
              (CongruenceClaim("pond", 3, 1, 4), 2000),
              (CongruenceClaim("pond", 27, 26, 3), 300),
              (CongruenceClaim("pend", 27, 19, 3), 300)]
    for claim, limit in checks:
        report = verify_congruence(claim, limit)
        assert report.passed, (str(claim), report.witness, report.message)
    assert time.perf_counter() - start < 60.0


C4 = criterion(4, "internal congruences mod 3 for n <= 300")


@C4
def test_c4_internal():
    for claim in (InternalClaim("pond", 27, 17, 3, 2, 3),
                  InternalClaim("pend", 27, 10, 3, 1, 3)):
        report = verify_internal(claim, 300)
        assert report.passed, (str(claim), report.witness)


C5 = criterion(5, "infinite families for alpha = 1, 2, 3 and integrality up to alpha = 20")


@C5
def test_c5_family_progressions():
    expected = {("pond-family", 1): (27, 26), ("pend-family", 1): (27, 19),
                ("pond-family", 2): (243, 233), ("pend-family", 2): (243, 172),
                ("pond-family", 3): (2187, 2096), ("pend-family", 3): (2187, 1549)}
    for (family, alpha), progression in expected.items():
        assert family_progression(FamilyClaim(family, alpha)) == progression
    for alpha in range(1, 21):
        for family in ("pond-family", "pend-family"):
            claim = FamilyClaim(family, alpha)
            family_progression(claim)
            induction_step_offset(claim)


@C5
@pytest.mark.parametrize("family,alpha,limit", [
    ("pond-family", 2, 30), ("pend-family", 2, 30),
    ("pond-family", 3, 3), ("pend-family", 3, 3),
])
def test_c5_family_scans(family, alpha, limit):
    report = verify_family(FamilyClaim(family, alpha), limit, max_order=20000)
    assert report.passed, report.message
    assert report.order <= 20000


C6 = criterion(6, "dissection fixtures at order 150 and the vanishing component")

DISSECTIONS = {
    "pond": ["pond(3n)", "pond(3n+1)", "pond(3n+2)"],
    "pend": ["pend(3n+1) mod 3, f2f4", "pend(9n+1) mod 3", "pend(27n+10) mod 3"],
}


@C6
def test_c6_dissections():
    for name, labels in DISSECTIONS.items():
        claims = by_label(name)
        for label in labels:
            claim = claims[label]
            assert isinstance(claim, DissectionClaim)
            report = verify_dissection(claim, 150)
            assert report.passed, (label, report.witness)
    # every dissection line in the fixtures passes as well
    for name in DISSECTIONS:
        for claim in fixture_claims(name):
            if isinstance(claim, DissectionClaim):
                assert verify_dissection(claim, 150).passed, claim.label


@C6
def test_c6_vanishing_component():
    claim = by_label("pend")["pend(9n+1) no q^(3n+2)"]
    assert claim.claimed is None and claim.modulus == 3
    assert verify_dissection(claim, 150).passed


C7 = criterion(7, "f1^8 + 2q f4^8 == f2^4 (mod 3) to order 1000")


@C7
def test_c7_key_identity():
    claim = parse_identity("f1^8 + 2*q*f4^8 = f2^4 (mod 3)")
    assert claim == IdentityClaim(claim.lhs, claim.rhs, 3)
    assert verify_identity(claim, 1000).passed
    assert by_label("pond")["key mod-3 identity"].modulus == 3


C8 = criterion(8, "randomized property suites, >= 100 cases each")


@C8
@pytest.mark.parametrize("prop", [
    _add_comm, _add_assoc, _mul_comm, _mul_assoc, _distributes,
    _inverse, _inverse_mod, _reassembly, _round_trip, _reduce_hom,
    _eta_mod_hom,
], ids=lambda f: f.__name__)
def test_c8_properties(prop):
    assert prop._hypothesis_internal_use_settings.max_examples >= 100
    prop()


C9 = criterion(9, "pond expansion to order 10^4 under 10 s, cached re-run under 0.5 s")


@C9
def test_c9_performance(tmp_path):
    fresh_tables()
    gf = parse_expr(GENERATING_FUNCTIONS["pond"])
    cache = SeriesCache(tmp_path)
    start = time.perf_counter()
    cold = cache.expand(gf, 10_000)
    cold_s = time.perf_counter() - start
    start = time.perf_counter()
    warm = SeriesCache(tmp_path).expand(gf, 10_000)
    warm_s = time.perf_counter() - start
    assert warm == cold and cold.modulus is None
    assert cold[:6] == (1, 0, 2, 1, 4, 2)
    assert cold_s < 10.0, cold_s
    assert warm_s < 0.5, warm_s
