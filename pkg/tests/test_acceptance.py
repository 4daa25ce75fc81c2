"""Acceptance suite: one test per shipping criterion, at pinned tolerances.

Run with `pytest -v -s tests/test_acceptance.py` to see one PASS/FAIL
line per criterion with the measured values.
"""

import json
import math
import time
from fractions import Fraction

import pytest

from continuantlab.cfcore import (mat_mul, matrix_to_fraction, norm_frobenius,
                                  trace, word_to_matrix, cf_expand)
from continuantlab.cli import run
from continuantlab.dimension import dimension
from continuantlab.expsum import representation_numbers, source_from_orbit
from continuantlab.modular import closure_mod_q, nu_q, singular_series
from continuantlab.orbits import (exceptions, hensley_exponent,
                                  multiplicity_table, sumset_check)
from continuantlab.products import build_omega, check_products, mult_defect
from continuantlab.qmc import star_discrepancy, zaremba_bound, zn_points
from conftest import random_word

DELTA2_REF = 0.5312805062772051416244686   # 25-digit reference
DELTA13_REF = 0.4544890776618


def report(num, name, ok, detail):
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, f"criterion {num}: {name}: {detail}"


def test_01_dimension_delta2():
    t0 = time.perf_counter()
    res = dimension((1, 2))
    dt = time.perf_counter() - t0
    err = abs(res.delta - DELTA2_REF)
    report(1, "delta_{1,2} vs 25-digit reference",
           err <= 1e-10 and dt < 10.0,
           f"delta={res.delta!r} err={err:.2e} time={dt:.2f}s")


def test_02_dimension_delta13():
    res = dimension((1, 3))
    err = abs(res.delta - DELTA13_REF)
    report(2, "delta_{1,3} vs 13-digit reference",
           err <= 1e-9, f"delta={res.delta!r} err={err:.2e}")


def test_03_failing_alphabet_pair():
    delta = dimension((2, 4, 6, 8, 10)).delta
    clo = closure_mod_q((2, 4, 6, 8, 10), 4)
    ok_dim = abs(delta - 0.517) <= 5e-4
    ok_loc = clo.attainable_d <= {0, 1, 2}
    report(3, "delta({2,4,6,8,10}) = 0.517 +- 5e-4 AND mod-4 deficiency",
           ok_dim and ok_loc,
           f"delta={delta:.6f} attainable={sorted(clo.attainable_d)}")


def test_04_dimension_delta5():
    delta = dimension((1, 2, 3, 4, 5)).delta
    err = abs(delta - 0.83)
    report(4, "delta_{1..5} = 0.83 +- 1e-2", err <= 1e-2,
           f"delta={delta:.6f} err={err:.4f}")


def test_05_exceptions_A4():
    t0 = time.perf_counter()
    exc = exceptions((1, 2, 3, 4), 1000)
    dt = time.perf_counter() - t0
    report(5, "A=4 empty-fiber set to 1000 is exactly {6,54,150}",
           exc == [6, 54, 150] and dt < 60.0,
           f"exceptions={exc} time={dt:.2f}s")


def test_06_fibonacci_A1():
    table = multiplicity_table((1,), 100)
    want = [2, 3, 5, 8, 13, 21, 34, 55, 89]
    ok = table.denominators == want and all(
        table.counts[d] == 1 for d in want)
    report(6, "A=1 at N=100: Fibonacci denominators, multiplicity 1",
           ok, f"denominators={table.denominators}")


def test_07_cf_vectors():
    w1 = cf_expand(3523, 4547)
    w2 = cf_expand(3535, 4547)
    m1, m2 = word_to_matrix(w1), word_to_matrix(w2)
    ok = (w1 == (1, 3, 2, 3, 1, 2, 3, 2, 1, 3)
          and w2 == (1, 3, 2, 35, 1, 1, 1, 4)
          and matrix_to_fraction(m1) == Fraction(3523, 4547)
          and matrix_to_fraction(m2) == Fraction(3535, 4547))
    report(7, "CF expansions of 3523/4547 and 3535/4547 round-trip",
           ok, f"w1={list(w1)} w2={list(w2)}")


def test_08_discrepancy_pair():
    t0 = time.perf_counter()
    d_good = star_discrepancy(zn_points(3523, 4547))
    d_bad = star_discrepancy(zn_points(3535, 4547))
    dt = time.perf_counter() - t0
    bound = zaremba_bound(3, 4547)
    ok = d_good <= bound and d_good < d_bad and dt < 120.0
    report(8, "star discrepancy: bound holds and good < bad multiplier",
           ok, f"D*(3523)={d_good:.6f} D*(3535)={d_bad:.6f} "
               f"bound={bound:.6f} time={dt:.1f}s")


def test_09_hensley_scaling():
    slope = hensley_exponent((1, 2), [2 ** k for k in range(10, 21)])
    err = abs(slope - 2 * DELTA2_REF)
    report(9, "log-log slope of #R_2(N) over 2^10..2^20 near 2 delta",
           err <= 0.05, f"slope={slope:.5f} err={err:.4f}")


def test_10_sumset_projections():
    rep = sumset_check((1, 2), 500)
    report(10, "triple (d, b+d, b+2d) lands in D_2(3N) at N=500",
           rep.ok and rep.larger_N == 1500,
           f"points={rep.n_points} counterexamples={len(rep.counterexamples)}")


def test_11_strong_approximation():
    bad = [q for q in range(2, 31)
           if not closure_mod_q((1, 2), q).attainable_is_full]
    report(11, "attainable continuants mod q are all of Z/q for q=2..30",
           bad == [], f"deficient moduli: {bad}")


def test_12_ensemble_invariants():
    ens = build_omega((1, 2), 10 ** 6)
    chk = check_products(ens, samples=500, seed=0)
    ok = (chk.ratio_violations == 0 and chk.norm_violations == 0
          and 0.5 < chk.ratio_min <= chk.ratio_max < 2.0)
    report(12, "500 sampled products: 1/2 < lam/prod(N_j) < 2 and norm chain",
           ok, f"J={ens.J} ratio range=[{chk.ratio_min:.4f},{chk.ratio_max:.4f}]")


def test_13_expsum_duality():
    src = source_from_orbit((1, 2), 2000)
    rn = representation_numbers(src)
    table = multiplicity_table((1, 2), 2000)
    exact_match = rn.agree and all(
        rn.counts[d] == c for d, c in table.counts.items())
    ok = exact_match and rn.parseval_rel_error <= 1e-9
    report(13, "R_N via DFT equals direct multiplicities; Parseval 1e-9",
           ok, f"M={rn.dft_length} inv_err={rn.max_inversion_error:.2e} "
               f"parseval_rel={rn.parseval_rel_error:.2e}")


def test_14_singular_series_and_nu2():
    s1 = singular_series(1, 10 ** 4)
    err = abs(s1 - math.pi ** 2 / 6)
    nu = nu_q(2, 1, exact=True)
    ok = err < 1e-3 and nu == Fraction(-1, 3)
    report(14, "singular series at n=1 hits zeta(2); nu_2(1) = -1/3 exactly",
           ok, f"S(1)={s1:.6f} err={err:.2e} nu_2(1)={nu}")


def test_15_property_suites(rng):
    failures = []
    # homomorphism on 500 random word pairs
    for _ in range(500):
        w1 = random_word(rng, (1, 2, 3, 4, 5), 1, 10)
        w2 = random_word(rng, (1, 2, 3, 4, 5), 1, 10)
        if word_to_matrix(w1 + w2) != mat_mul(word_to_matrix(w1),
                                              word_to_matrix(w2)):
            failures.append(("homomorphism", w1, w2))
            break
    # entry order and norm/trace chains, exhaustive even words length <= 12
    stack = [()]
    while stack:
        w = stack.pop()
        if w and len(w) % 2 == 0:
            m = word_to_matrix(w)
            a, b, c, d = m
            if not (1 <= a <= min(b, c) <= max(b, c) < d):
                failures.append(("entry-order", w))
            nrm = norm_frobenius(m)
            col = math.hypot(b, d)
            if not (nrm <= 2 * trace(m) <= 4 * nrm
                    and d < col < nrm < 2 * col < 4 * d):
                failures.append(("norm-chain", w))
        if len(w) < 12:
            for a_ in (1, 2):
                stack.append(w + (a_,))
    # eigen-multiplicativity defect within calibrated constant, 1000 samples
    worst = 0.0
    for _ in range(1000):
        g1 = word_to_matrix(random_word(rng, (1, 2), 20, 40, even=True))
        g2 = word_to_matrix(random_word(rng, (1, 2), 20, 40, even=True))
        defect, budget = mult_defect(g1, g2)
        worst = max(worst, defect / budget)
        if defect > 1.0 * budget:
            failures.append(("defect", defect, budget))
            break
    report(15, "property suites: homomorphism, entry order, chains, defect",
           failures == [], f"failures={failures[:3]} worst_defect_ratio={worst:.3f}")
