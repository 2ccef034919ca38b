from fractions import Fraction
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_ball.arith import GaussianRational
from toeplitz_ball.bergman import (
    OperatorMatrix,
    QuasiHomSymbol,
    RadialProfile,
    rank_one_matrix,
    toeplitz_matrix,
    toeplitz_product,
)
from toeplitz_ball.bhsuite import (
    BHScenario,
    PERTURBATIONS,
    PluriharmonicPair,
    builtin_suites,
    classify_commuting,
    commutator_analysis,
    construct_bh_example,
    hankel_equivalences,
    polynomial_form,
    random_scenario,
    random_scenario_suite,
    split_pluriharmonic,
    th_identity,
    verify_bh_scenario,
)
from toeplitz_ball.errors import NotHolomorphic, NotPluriharmonic
from toeplitz_ball.report import EXACT, SKIP, at_degree
from toeplitz_ball.symbolic import BiPolynomial, parse_bipoly

P = parse_bipoly


def Z(j, n):
    return BiPolynomial.z(j, n)


def ZB(j, n):
    return BiPolynomial.zbar(j, n)


def one(n):
    return BiPolynomial.constant(n, 1)


def pair(p):
    return split_pluriharmonic(p)


# -- splitting -----------------------------------------------------------------

def test_split_examples():
    n = 2
    s = split_pluriharmonic(Z(1, n) + ZB(2, n) + 3)
    assert s.f == Z(1, n) + 3 and s.g == Z(2, n)
    s = split_pluriharmonic(ZB(1, n))
    assert s.f.is_zero() and s.g == Z(1, n)
    with pytest.raises(NotPluriharmonic) as info:
        split_pluriharmonic(Z(1, n) * ZB(1, n))
    assert info.value.witness == ((1, 0), (1, 0))


def test_pair_invariants():
    with pytest.raises(ValueError):
        PluriharmonicPair(Z(1, 1), one(1))
    with pytest.raises(NotHolomorphic):
        PluriharmonicPair(ZB(1, 1), BiPolynomial.zero(1))
    p = PluriharmonicPair.normalized(Z(1, 1), Z(1, 1) + GaussianRational(2, 1))
    assert p.f == Z(1, 1) + GaussianRational(2, -1) and p.g == Z(1, 1)


holo_terms = st.lists(st.tuples(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                                st.integers(-4, 4), st.integers(-2, 2)), max_size=5)


@settings(max_examples=60, deadline=None)
@given(holo_terms, holo_terms)
def test_split_left_inverse(fs, gs):
    n = 2
    f = sum((BiPolynomial.monomial(a, None, GaussianRational(re, im)) for a, re, im in fs), BiPolynomial.zero(n))
    g = sum((BiPolynomial.monomial(a, None, GaussianRational(re, im)) for a, re, im in gs), BiPolynomial.zero(n))
    g = g - g.constant_term()
    s = split_pluriharmonic(f + g.conjugate())
    assert (s.f, s.g) == (f, g)


def test_polynomial_form():
    n = 2
    t_inv = QuasiHomSymbol(n, [((0, 0), (0, 0), RadialProfile({-1: 1}))])
    s = QuasiHomSymbol(n, [((1, 0), (1, 0), RadialProfile({-1: 1})), ((0, 1), (0, 1), RadialProfile({-1: 1}))])
    assert polynomial_form(s) == one(n)
    assert polynomial_form(t_inv) is None
    assert polynomial_form(QuasiHomSymbol(1, [((0,), (0,), RadialProfile({}, {0: 1}))])) is None
    s = QuasiHomSymbol(n, [((1, 0), (1, 0), RadialProfile({-1: 1}))])
    assert polynomial_form(s) is None
    assert polynomial_form(Z(1, n)) == Z(1, n)


# -- Brown-Halmos scenarios ---------------------------------------------------------

def test_bh_tbar_t():
    sc = BHScenario(1, [pair(ZB(1, 1))], [pair(Z(1, 1))], Z(1, 1) * ZB(1, 1))
    rep = verify_bh_scenario(sc, 8)
    c = rep.checks[0]
    assert rep.passed and c.detail["A"] and c.detail["B"] and c.detail["C"]
    assert c.label == at_degree(8)


def test_bh_t_tbar():
    sc = BHScenario(1, [pair(Z(1, 1))], [pair(ZB(1, 1))], Z(1, 1) * ZB(1, 1))
    rep = verify_bh_scenario(sc, 8)
    c = rep.checks[0]
    assert rep.passed and c.label == EXACT
    assert not c.detail["A"] and not c.detail["B"] and c.detail["C"]
    assert c.detail["A_witness"] == "column (0), row (0): 0/1 vs 1/2"


def test_construct_x_y_one():
    sc = construct_bh_example([one(1)], [one(1)])
    got = [(p.f, q.g) for p, q in zip(sc.phis, sc.psis)]
    assert got == [(Z(1, 1).scale(-2), Z(1, 1)), (Z(1, 1) ** 2, Z(1, 1) ** 2)]
    assert polynomial_form(sc.h) == BiPolynomial.constant(1, -1)
    rep = verify_bh_scenario(sc, 8)
    d = rep.checks[0].detail
    assert rep.passed and d["A"] and d["B"] and d["C"]
    # the diagonal of the left side is -1 + delta_{k0}
    lhs = OperatorMatrix.zero(1, 8)
    for p, q in zip(sc.phis, sc.psis):
        lhs = lhs + toeplitz_product(p.symbol(), q.symbol(), 8)
    for k in range(9):
        assert lhs.entry((k,), (k,)) == (0 if k == 0 else -1)


def test_construct_x_y_z():
    sc = construct_bh_example([Z(1, 1)], [Z(1, 1)])
    assert len(sc.rank_one) == 1
    rep = verify_bh_scenario(sc, 8)
    d = rep.checks[0].detail
    assert rep.passed and d["A"] and d["B"] and d["C"]


def test_construct_empty():
    sc = construct_bh_example([], [], [Z(1, 2)], [Z(2, 2)], n=2)
    assert not sc.rank_one
    assert polynomial_form(sc.h) == sc.products()
    assert verify_bh_scenario(sc, 5).passed
    with pytest.raises(ValueError):
        construct_bh_example([], [])


@pytest.mark.parametrize("n", [2, 3])
def test_construct_higher_dimension(n):
    sc = construct_bh_example([one(n)], [Z(1, n) + 1], [Z(2, n)], [Z(1, n)])
    d = 4 if n == 2 else 3
    rep = verify_bh_scenario(sc, d)
    det = rep.checks[0].detail
    assert rep.passed and det["A"] and det["B"] and det["C"]


def test_bh_nonpolynomial_h_is_skipped_item():
    # T_z T_zbar = T_(1+log t) holds, but h is unbounded: facts recorded, no verdict
    h = QuasiHomSymbol(1, [((0,), (0,), RadialProfile({0: 1}, {0: 1}))])
    sc = BHScenario(1, [pair(Z(1, 1))], [pair(ZB(1, 1))], h)
    rep = verify_bh_scenario(sc, 6)
    assert [c.verdict for c in rep.checks] == [SKIP]
    d = rep.checks[0].detail
    assert d["A"] and not d["B"] and "hypotheses" in d["reason"]
    assert rep.passed


def test_random_scenarios():
    for p in PERTURBATIONS:
        sc = random_scenario(2, 3, p)
        assert verify_bh_scenario(sc, 4).passed
    with pytest.raises(ValueError):
        random_scenario(1, 0, "bogus")
    rep = random_scenario_suite(2, 5, list(range(20)))
    assert rep.passed and len(rep.checks) == 20
    kinds = {c.name.split(":")[0].split()[-1] for c in rep.checks}
    assert "exact" in kinds and len(kinds) == 1 + len(PERTURBATIONS)
    ns = {c.name.split()[1] for c in rep.checks}
    assert ns == {"N=1", "N=2"}


def test_perturbation_breaks_exact_scenario():
    # the perturbed scenarios really do fail (B and C)
    seen = set()
    for seed in range(12):
        p = PERTURBATIONS[seed % len(PERTURBATIONS)]
        d = verify_bh_scenario(random_scenario(1, seed, p), 5).checks[-1].detail
        if not (d["B"] and d["C"]):
            seen.add(p)
    assert seen == set(PERTURBATIONS)


def test_scenario_json_roundtrip():
    sc = construct_bh_example([one(2)], [Z(1, 2)], [Z(2, 2)], [Z(1, 2).scale(GaussianRational(0, 1))])
    text = json.dumps(sc.to_json(), sort_keys=True)
    back = BHScenario.from_json(json.loads(text))
    assert json.dumps(back.to_json(), sort_keys=True) == text
    assert verify_bh_scenario(back, 3).checks[0].detail == verify_bh_scenario(sc, 3).checks[0].detail
    h = QuasiHomSymbol(1, [((0,), (0,), RadialProfile({0: 1}, {0: 1}))])
    sc = BHScenario(1, [pair(Z(1, 1))], [pair(ZB(1, 1))], h)
    back = BHScenario.from_json(json.loads(json.dumps(sc.to_json())))
    assert back.h == h


# -- commutators / zero products / Hankel -------------------------------------------

def test_commutator_examples():
    rep = commutator_analysis(Z(1, 1), ZB(1, 1), 6)
    d = rep.checks[0].detail
    assert rep.passed and d["rank"] == 7 and d["case"] is None
    comm = toeplitz_product(Z(1, 1), ZB(1, 1), 6) - toeplitz_product(ZB(1, 1), Z(1, 1), 6)
    for k in range(7):
        assert comm.entry((k,), (k,)) == Fraction(-1, (k + 1) * (k + 2))
    rep = commutator_analysis(Z(1, 2), Z(2, 2), 4)
    d = rep.checks[0].detail
    assert rep.passed and d["rank"] == 0 and d["case"] == "both holomorphic"
    phi = Z(1, 1) + ZB(1, 1)
    rep = commutator_analysis(phi, phi.scale(2), 6)
    d = rep.checks[0].detail
    assert rep.passed and d["rank"] == 0 and d["coefficients"] == ["2/1", "-1/1"]
    with pytest.raises(NotPluriharmonic):
        commutator_analysis(Z(1, 1) * ZB(1, 1), Z(1, 1), 3)


def test_classify():
    n = 2
    assert classify_commuting(ZB(1, n), ZB(2, n) + 4)[0] == "both antiholomorphic"
    assert classify_commuting(Z(1, n) + ZB(2, n), Z(1, n) - ZB(2, n))[0] is None
    case, (c1, c2) = classify_commuting(Z(1, n) + ZB(2, n) + 5, (Z(1, n) + ZB(2, n)).scale(-3))
    assert case == "linearly dependent modulo constants"
    combo = (Z(1, n) + ZB(2, n) + 5).scale(c1) + (Z(1, n) + ZB(2, n)).scale(-3).scale(c2)
    assert combo.degree() <= 0


@pytest.mark.parametrize("seed", range(4))
def test_zero_product_sanity(seed):
    rng = random.Random(seed)
    grew = False
    for _ in range(4):
        n = rng.randint(1, 2)
        a = tuple(rng.randint(0, 2) for _ in range(n))
        b = tuple(rng.randint(0, 2) for _ in range(n))
        if not any(a):
            a = (1,) + a[1:]
        phi = BiPolynomial.monomial(a) if rng.random() < 0.5 else BiPolynomial.monomial((0,) * n, a)
        psi = BiPolynomial.monomial(b) if rng.random() < 0.5 else BiPolynomial.monomial((0,) * n, b)
        d = max(2, sum(a) + sum(b))
        r1 = toeplitz_product(phi, psi, d).rank(d)
        r2 = toeplitz_product(phi, psi, d + 2).rank(d + 2)
        assert r1 >= 1 and r2 >= r1
        grew = grew or r2 > r1
    assert grew


def test_hankel_examples():
    rep = hankel_equivalences([Z(1, 1)], [Z(1, 1)], 6)
    d = rep.checks[0].detail
    assert rep.passed and d["sum_zero"] and d["pluriharmonic"]
    rep = hankel_equivalences([Z(1, 1)], [ZB(1, 1)], 6)
    d = rep.checks[0].detail
    assert rep.passed and not d["sum_zero"] and not d["pluriharmonic"]


@pytest.mark.parametrize("d", range(1, 7))
def test_constructed_example_rank_one(d):
    sc = construct_bh_example([one(1)], [one(1)])
    lhs = OperatorMatrix.zero(1, d)
    for p, q in zip(sc.phis, sc.psis):
        lhs = lhs + toeplitz_product(p.symbol(), q.symbol(), d)
    rest = lhs - toeplitz_matrix(sc.h, d)
    assert rest.rank(d) == 1
    assert (rest - rank_one_matrix(one(1), one(1), d)).is_zero()
    rep = hankel_equivalences([p.symbol() for p in sc.phis], [q.symbol() for q in sc.psis], d)
    det = rep.checks[0].detail
    assert rep.passed and not det["sum_zero"] and not det["pluriharmonic"]


# -- built-in suites ------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_th_identity(n):
    assert th_identity(n, 6 if n == 2 else 4).passed


def test_builtin_suites():
    rep = builtin_suites(2, 6, 7)
    assert rep.passed, rep.first_failure()
    assert rep.suite == "builtin:N=2:D=6:seed=7"
    assert all("/" in c.name for c in rep.checks)
    rep = builtin_suites(3, 4, 0)
    assert rep.passed, rep.first_failure()
    rep = builtin_suites(1, 6, 0)
    assert rep.passed
    skipped = [c.name for c in rep.checks if c.verdict == SKIP]
    assert len(skipped) == 3 and any("T_h_identity" in s for s in skipped)
    with pytest.raises(ValueError):
        builtin_suites(4, 2, 0)
