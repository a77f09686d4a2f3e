"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line (shown in the terminal summary) and
then asserts, so a failing criterion is visible both ways.
"""
import itertools
import json
from fractions import Fraction

import pytest

from strengthlab import GF, Polynomial, delta, directional_derivative, homogeneous_part, value_table
from strengthlab.analytic import gowers_norm, gowers_recursive, gowers_top_exact
from strengthlab.calculus import diagonal_reconstruct, multilinearize
from strengthlab.experiments import (
    empirical_C,
    make_rng,
    random_homogeneous,
    records_to_csv,
    scan,
    verify_identities,
)
from strengthlab.poly import monomials, to_json
from strengthlab.rank import derivative_rank_profile, exhaustive_rank, projective_vectors, quadratic_rank, rank

F5 = GF(5)


def _monotone(table):
    ranks = [row["max_rank"] for row in table.rows]
    return all(a <= b for a, b in zip(ranks, ranks[1:]))


def test_1_diagonal_identity(report):
    bad = []
    for n in (1, 2, 3):
        rng = make_rng(1000 + n)
        for i in range(200):
            P = random_homogeneous(F5, n, 3, rng)
            if diagonal_reconstruct(multilinearize(P)) != P:
                bad.append((n, i))
    assert report(1, "diagonal reconstruction, 600 cubics over F_5", not bad, f"failures={bad[:3]}")


def test_2_gowers_recursion(report):
    mism = []
    checked = 0
    for n, count, seed in ((2, 20, 2002), (3, 3, 2003)):
        rng = make_rng(seed)
        for i in range(count):
            P = random_homogeneous(F5, n, 3, rng)
            a = gowers_norm(value_table(P), 3)
            b = gowers_recursive(P, 3)
            checked += 1
            if a.counts != b.counts:
                mism.append((n, i, a.counts.counts, b.counts.counts))
    ok = not mism and checked == 23
    assert report(2, "direct vs recursive U_3 tallies (20 at n=2, 3 at n=3)", ok, f"checked={checked}")


def test_3_top_degree_values(report):
    x = Polynomial.variable(0, 1, F5)
    cube = gowers_top_exact(x**3)
    square = gowers_top_exact(x**2, d=2)
    e3 = gowers_norm(value_table(x**3), 3).value
    e2 = gowers_norm(value_table(x**2), 2).value
    ok = (
        cube == Fraction(9, 25)
        and square == Fraction(1, 5)
        and abs(float(cube) - e3) <= 1e-9
        and abs(float(square) - e2) <= 1e-9
    )
    assert report(3, "x^3 -> 9/25 and x^2 -> 1/5 vs enumeration", ok, f"enum={e3!r},{e2!r}")


def _low_degree_grid():
    # every polynomial of degree <= 1 in one variable (m = 2), plus seeded
    # random polynomials of degree <= m - 1 for m = 2, 3 and n = 1, 2
    x = Polynomial.variable(0, 1, F5)
    for a, b in itertools.product(range(5), repeat=2):
        yield 2, x.scale(a) + Polynomial.constant(b, 1, F5)
    rng = make_rng(4004)
    for m, n in ((2, 2), (3, 1), (3, 2)):
        mons = [e for k in range(m) for e in monomials(n, k)]
        for _ in range(10):
            coeffs = rng.integers(0, 5, size=len(mons))
            yield m, Polynomial._raw(n, F5, dict(zip(mons, (int(c) for c in coeffs))))


def test_4_degenerate_degree_law(report):
    bad = []
    total = 0
    for m, P in _low_degree_grid():
        nv = gowers_norm(value_table(P), m)
        total += 1
        if not nv.counts.concentrated_at_zero() or nv.value != 1.0:
            bad.append((m, to_json(P)))
    assert report(4, "deg P <= m-1 gives tally concentrated at 0", not bad, f"grid={total}")


def _quadratics(n, p):
    fld = GF(p)
    mons = monomials(n, 2)
    for coeffs in itertools.product(range(p), repeat=len(mons)):
        yield Polynomial._raw(n, fld, dict(zip(mons, coeffs)))


def test_5_quadratic_oracle(report):
    cases = list(_quadratics(2, 3)) + list(_quadratics(2, 5))
    rng = make_rng(5005)
    cases += [random_homogeneous(F5, 3, 2, rng, nonzero=False) for _ in range(200)]
    bad = [to_json(Q) for Q in cases if quadratic_rank(Q).value != exhaustive_rank(Q, d=2).value]
    ok = not bad and len(cases) == 27 + 125 + 200
    assert report(5, "closed-form quadratic rank = exhaustive search", ok, f"cases={len(cases)}")


def test_6_delta_top_rank(report):
    rng = make_rng(6006)
    bad = []
    pairs = 0
    for _ in range(100):
        P = random_homogeneous(F5, 3, 3, rng)
        for t in projective_vectors(5, 3):
            Pt = directional_derivative(P, t)
            if Pt.is_zero():
                continue
            pairs += 1
            top = homogeneous_part(delta(P, t), 2)
            if quadratic_rank(top).value != quadratic_rank(Pt).value:
                bad.append((to_json(P), t))
    assert report(6, "rank(top of Delta_t P) = rank(P_t), 100 cubics at n=3", not bad, f"pairs={pairs}")


def test_7_worked_instances(report):
    x1, x2, x3 = (Polynomial.variable(i, 3, F5) for i in range(3))
    P = x1 * x2 * x3
    r = rank(P, d=3)
    prof = derivative_rank_profile(P)
    prof_cube = derivative_rank_profile(x1**3)
    ok = r.value == 1 and r.certificate.verify(P) and prof.max_rank == 2 and prof_cube.max_rank == 1
    detail = f"rank={r.value}, profile max={prof.max_rank}, x1^3 profile max={prof_cube.max_rank}"
    assert report(7, "x1x2x3 and x1^3 worked instances", ok, detail)


@pytest.fixture(scope="module")
def sample_scan():
    return scan(5, 3, 3, mode="sample", seed=8, samples=10_000, threads=1)


def test_8_empirical_table(report, sample_scan):
    full = scan(5, 2, 3, mode="exhaustive")
    t2, t3 = empirical_C(full), empirical_C(sample_scan)
    ok = len(full) == 624 and len(sample_scan) >= 9_990
    for t, recs in ((t2, full), (t3, sample_scan)):
        ok = ok and _monotone(t) and all(row["witness"]["poly"] for row in t.rows)
        ok = ok and all(Fraction(b["min_gowers_top"]["num"], b["min_gowers_top"]["den"]) > 0 for b in t.rank_buckets)
        # every record sits at or below the row for its bucket
        by_r = {row["r"]: row["max_rank"] for row in t.rows}
        ok = ok and all(rec.rank <= by_r[rec.max_derivative_rank] for rec in recs)
    rows2 = [(r["r"], r["max_rank"]) for r in t2.rows]
    rows3 = [(r["r"], r["max_rank"]) for r in t3.rows]
    assert report(8, "n=2 exhaustive and n=3 10^4-sample tables monotone", ok, f"n=2 rows={rows2}, n=3 rows={rows3}")


def test_9_determinism(report, sample_scan):
    again = scan(5, 3, 3, mode="sample", seed=8, samples=10_000, threads=2)
    same_scan = records_to_csv(again) == records_to_csv(sample_scan)
    same_table = json.dumps(empirical_C(again).to_json_obj()) == json.dumps(empirical_C(sample_scan).to_json_obj())
    v1 = json.dumps(verify_identities(5, 2, 3, 50, 1))
    v2 = json.dumps(verify_identities(5, 2, 3, 50, 1))
    verified = json.loads(v1)
    all_pass = verified["all_passed"] and all(c["passed"] == 50 for c in verified["checks"].values())
    ok = same_scan and same_table and v1 == v2 and all_pass
    detail = f"scan={same_scan}, table={same_table}, verify={v1 == v2}, verify 50/50={all_pass}"
    assert report(9, "seeded runs byte-identical across repeats and thread counts", ok, detail)
