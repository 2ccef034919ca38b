"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible with ``pytest -s``) and the
whole table is repeated in the terminal summary.
"""
from contextlib import contextmanager
from fractions import Fraction
import time

import pytest

from toeplitz_ball.arith import multi_indices
from toeplitz_ball.bergman import (
    QuasiHomSymbol,
    RadialProfile,
    berezin_series,
    bipoly_to_symbol,
    operator_equal,
    toeplitz_matrix,
    toeplitz_product,
)
from toeplitz_ball.bhsuite import (
    commutator_analysis,
    construct_bh_example,
    polynomial_form,
    random_scenario_suite,
    th_identity,
    verify_bh_scenario,
)
from toeplitz_ball.errors import NotRepresentable
from toeplitz_ball.mellin import (
    ahern_symbol,
    ahern_target,
    preimage_monomial,
    product_symbol,
    range_decision,
    target_polynomial,
)
from toeplitz_ball.symbolic import BiPolynomial, verify_do_identity, verify_h_recursion
from toeplitz_ball.wirtinger import (
    check_mharmonic,
    check_not_pluriharmonic,
    identity_suite,
    random_points,
    remark_example,
)

RESULTS: list[str] = []


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None and RESULTS:
        tr.write_line("")
        tr.write_line("acceptance summary")
        for line in RESULTS:
            tr.write_line(line)


@contextmanager
def criterion(num: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    note = ""
    try:
        yield
        ok = True
    except AssertionError as exc:
        note = f" ({str(exc).splitlines()[0][:120]})" if str(exc) else ""
        raise
    finally:
        elapsed = time.perf_counter() - start
        if ok and elapsed >= limit:
            ok = False
            note = f" (took {elapsed:.1f}s, limit {limit:.0f}s)"
        line = f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {title} [{elapsed:.2f}s / {limit:.0f}s]{note}"
        RESULTS.append(line)
        print(line)
    assert elapsed < limit, f"criterion {num} took {elapsed:.1f}s, limit {limit}s"


def Z(j, n):
    return BiPolynomial.z(j, n)


def ZB(j, n):
    return BiPolynomial.zbar(j, n)


def test_c01_do_identity():
    with criterion(1, "operator identity on monomials of degree <= 6", 60):
        for n, m in [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]:
            rep = verify_do_identity(m, n, 6)
            assert rep.passed, f"N={n} m={m}: {rep.first_failure()}"


def test_c02_h_recursion():
    with criterion(2, "h-recursion for j <= 5, N <= 3", 5):
        for n in (1, 2, 3):
            for j in range(1, 6):
                rep = verify_h_recursion(j, n)
                assert rep.passed, f"j={j} N={n}: {rep.first_failure()}"


def test_c03_identity_suite():
    with criterion(3, "kernel identity suite at 20 points, N = 1, 2", 120):
        for n in (1, 2):
            rep = identity_suite(n, random_points(n, 20, seed=7))
            assert rep.passed, f"N={n}: {rep.first_failure()}"
            assert len(rep.checks) == 13 + n
            assert all(c.label in ("verified-at-20-points",) for c in rep.checks)


def test_c04_mharmonic_examples():
    with criterion(4, "M-harmonic examples vanish and are not pluriharmonic", 60):
        for n in (2, 3):
            pts = random_points(n, 20, seed=n)
            u = remark_example(n)
            rep = check_mharmonic(u, n, pts)
            assert rep.passed, f"N={n}: {rep.first_failure()}"
            wit = check_not_pluriharmonic(u, n, pts)
            assert wit.passed, f"N={n}: no mixed-derivative witness"


def test_c05_berezin_and_th_identity():
    with criterion(5, "Berezin series of |z1|^2/t and the T_h identity", 60):
        n = 2
        inv_t = QuasiHomSymbol(n, [((0, 0), (0, 0), RadialProfile({-1: 1}))])
        u = bipoly_to_symbol(Z(1, n) * ZB(1, n)) * inv_t
        target = BiPolynomial.defect(n).scale(Fraction(1, 2)) + Z(1, n) * ZB(1, n)
        cmp = berezin_series(u, 6).matches(target)
        assert cmp, cmp.witness
        for n in (2, 3):
            rep = th_identity(n, 6)
            assert rep.passed, f"N={n}: {rep.first_failure()}"


def _admissible(n):
    for alpha in multi_indices(n, 2 * n + 1):
        for beta in multi_indices(n, 2 * n + 1):
            for ell in range(n + 1):
                if sum(alpha) + sum(beta) + 2 * ell <= 2 * n + 1:
                    yield alpha, beta, ell


def test_c06_construction():
    with criterion(6, "every admissible preimage reproduces its target", 180):
        count = 0
        for n in (1, 2):
            for alpha, beta, ell in _admissible(n):
                u = preimage_monomial(alpha, beta, ell, n)
                cmp = berezin_series(u, 6).matches(target_polynomial(alpha, beta, ell, n))
                assert cmp, f"{alpha} {beta} {ell}: {cmp.witness}"
                count += 1
        assert count > 20
        one_plus_log = QuasiHomSymbol(1, [((0,), (0,), RadialProfile({0: 1}, {0: 1}))])
        res = range_decision(Z(1, 1) * ZB(1, 1))
        assert res.ok and res.witness == one_plus_log
        assert res.witness.pretty() == "1 + log(t)"
        lhs = toeplitz_product(Z(1, 1), ZB(1, 1), 8)
        cmp = operator_equal(lhs, toeplitz_matrix(one_plus_log, 8), 8)
        assert cmp.equal, cmp.witness
        for k in range(9):
            assert lhs.entry((k,), (k,)) == Fraction(k, k + 1)


def test_c07_not_representable():
    with criterion(7, "NotRepresentable for alpha = beta = (2) at N = 1", 1):
        with pytest.raises(NotRepresentable) as info:
            product_symbol((2,), (2,), 1)
        assert "degree 2 > 2N-1 = 1" in str(info.value)
        res = range_decision(Z(1, 1) ** 2 * ZB(1, 1) ** 2)
        assert not res.ok
        assert res.violation["degree"] == 2 and res.violation["bound"] == 1


def test_c08_commutator_rank():
    with criterion(8, "rank of [T_z, T_zbar] is D+1", 10):
        for d in (2, 4, 6):
            rep = commutator_analysis(Z(1, 1), ZB(1, 1), d)
            assert rep.passed and rep.checks[0].detail["rank"] == d + 1, f"D={d}"
            comm = toeplitz_product(Z(1, 1), ZB(1, 1), d) - toeplitz_product(ZB(1, 1), Z(1, 1), d)
            for k in range(d + 1):
                assert comm.entry((k,), (k,)) == Fraction(-1, (k + 1) * (k + 2))


def test_c09_bh_biconditional():
    with criterion(9, "BH biconditional: x=y=1 at D=8 and 20 random scenarios", 300):
        one = BiPolynomial.constant(1, 1)
        sc = construct_bh_example([one], [one])
        assert polynomial_form(sc.h) == BiPolynomial.constant(1, -1)
        assert len(sc.rank_one) == 1
        rep = verify_bh_scenario(sc, 8)
        d = rep.checks[0].detail
        assert rep.passed and d["A"] and d["B"] and d["C"], rep.first_failure()
        rnd = random_scenario_suite(2, 5, list(range(20)))
        assert len(rnd.checks) == 20
        assert rnd.passed, rnd.first_failure()


def test_c10_ahern():
    with criterion(10, "Ahern identity for 1 <= |alpha| < 2N, N = 1, 2", 60):
        count = 0
        for n in (1, 2):
            for alpha in multi_indices(n, 2 * n - 1):
                if 1 <= sum(alpha) < 2 * n:
                    cmp = berezin_series(ahern_symbol(alpha, n), 6).matches(ahern_target(alpha, n))
                    assert cmp, f"{alpha}: {cmp.witness}"
                    count += 1
        assert count == 1 + 9
