import itertools

import pytest

from strengthlab import GF, Polynomial, parse
from strengthlab.errors import CharTooSmall, DegreeTooSmall, NotHomogeneous, WrongDegree
from strengthlab.experiments import make_rng, random_homogeneous
from strengthlab.poly import monomials
from strengthlab.rank import (
    DEGREE_MESSAGE,
    closure_rank_bound,
    derivative_rank_profile,
    exhaustive_rank,
    quadratic_rank,
    rank,
    rank_over_extension,
)

F5 = GF(5)


def _forms(fld, n, d):
    mons = monomials(n, d)
    for coeffs in itertools.product(range(fld.q), repeat=len(mons)):
        if any(coeffs):
            yield Polynomial._raw(n, fld, dict(zip(mons, coeffs)))


def _products(fld, n, d):
    """Every L*R with L, R homogeneous of positive degrees summing to d."""
    out = set()
    for a in range(1, d // 2 + 1):
        for L in _forms(fld, n, a):
            for R in _forms(fld, n, d - a):
                out.add(L * R)
    return out


def _brute_rank(P, products, r_cap=3):
    if P.is_zero():
        return 0
    level = {P}
    for r in range(1, r_cap + 1):
        if level & products:
            return r
        level = {Q - pr for Q in level for pr in products}
    return None


@pytest.fixture(scope="module")
def quad_products_f3():
    return _products(GF(3), 2, 2)


def test_quadratic_examples():
    r = quadratic_rank(parse("x1*x2", 5, 2))
    assert r.value == 1 and r.certificate.verify(parse("x1*x2", 5, 2))
    Q = parse("x1^2 + x2^2", 5, 2)
    r = quadratic_rank(Q)
    assert r.value == 1 and r.certificate.verify(Q)
    (L, R), = r.certificate.summands
    assert {L, R} == {parse("x1 + 2*x2", 5, 2), parse("x1 + 3*x2", 5, 2)}
    assert quadratic_rank(parse("x1^2 + x2^2 + x3^2", 5, 3)).value == 2


def test_quadratic_rank_against_brute_force(quad_products_f3):
    f3 = GF(3)
    for Q in _forms(f3, 2, 2):
        assert quadratic_rank(Q).value == _brute_rank(Q, quad_products_f3)
    prods = _products(F5, 2, 2)
    for Q in _forms(F5, 2, 2):
        r = quadratic_rank(Q)
        assert r.value == _brute_rank(Q, prods)
        assert r.certificate.verify(Q)


def test_quadratic_discriminant_rule_over_f3():
    # -1 is not a square mod 3, so x1^2 + x2^2 is anisotropic over F_3 but splits over F_9
    Q = parse("x1^2 + x2^2", 3, 2)
    assert quadratic_rank(Q).value == 2
    assert exhaustive_rank(Q, d=2).value == 2
    assert rank_over_extension(Q, 2).value == 1
    assert closure_rank_bound(Q).value == 1


def test_exhaustive_examples():
    P = parse("x1*x2*x3", 5, 3)
    r = exhaustive_rank(P)
    assert r.value == 1 and r.certificate.verify(P)
    assert r.certificate.to_json_obj()[0]["L"]["terms"] == [{"exps": [1, 0, 0], "coeff": 1}]
    Q = parse("x1^2*x2 + x3^3", 5, 3)
    r2 = exhaustive_rank(Q, r_max=2)
    assert r2.value == 2 and r2.certificate.verify(Q)
    capped = exhaustive_rank(Q, r_max=1)
    assert capped.value is None and capped.bound == 1
    assert capped.to_json_obj() == {
        "rank_gt": 1, "field": {"p": 5, "s": 1},
        "exhausted": {"patterns": [[1, 2]], "tuples_searched": 31},
    }


def test_cubic_rank_one_against_brute_force():
    prods = _products(F5, 2, 3)
    rng = make_rng(77)
    for _ in range(40):
        P = random_homogeneous(F5, 2, 3, rng)
        assert (exhaustive_rank(P).value == 1) == (P in prods)
    for P in list(prods)[:30]:
        assert exhaustive_rank(P).value == 1


def test_rank_dispatch_examples():
    assert rank(parse("x1*x2*x3 + x1", 5, 3)).value == 1
    assert rank(Polynomial.zero(3, F5), d=3).value == 0
    with pytest.raises(DegreeTooSmall, match="rank undefined for degree ≤ 1"):
        rank(parse("x1", 5, 1))
    assert DEGREE_MESSAGE.startswith("rank undefined for degree ≤ 1")
    with pytest.raises(WrongDegree):
        rank(parse("x1^3", 5, 1), d=2)
    with pytest.raises(CharTooSmall):
        rank(parse("x1^3 + x2^3", 3, 2))


def test_quartic_patterns():
    # a^2 + b^2 = (a + 2b)(a + 3b) over F_5, so only the (2, 2) pattern succeeds
    P = parse("x1^2*x2^2 + x3^4", 5, 3)
    r = exhaustive_rank(P)
    assert r.value == 1 and r.certificate.verify(P)
    (L, R), = r.certificate.summands
    assert (L.degree, R.degree) == (2, 2)
    assert exhaustive_rank(parse("x1*x2*x3*x1", 5, 3)).value == 1


def test_extension_examples():
    P = parse("x1^2*x2 + x2^3 + 2*x1*x2^2", 5, 2)
    assert rank_over_extension(P, 1).to_json_obj() == exhaustive_rank(P).to_json_obj()
    assert rank_over_extension(parse("x1*x2*x3", 5, 3), 2).value == 1


def test_rank_properties_random():
    rng = make_rng(123)
    for _ in range(15):
        P = random_homogeneous(F5, 3, 2, rng)
        Q = random_homogeneous(F5, 3, 2, rng)
        rp, rq = quadratic_rank(P).value, quadratic_rank(Q).value
        # subadditivity and invariance under scaling
        assert quadratic_rank(P + Q).value <= rp + rq
        assert quadratic_rank(P.scale(3)).value == rp
        assert rank_over_extension(P, 2).value <= rp


def test_profile_examples():
    prof = derivative_rank_profile(parse("x1*x2*x3", 5, 3))
    assert prof.max_rank == 2 and len(prof.table) == 31
    assert derivative_rank_profile(parse("x1^3", 5, 3)).max_rank == 1
    zero = derivative_rank_profile(Polynomial.zero(2, F5), d=3)
    assert zero.max_rank == 0 and len(zero.zero_directions) == 6
    with pytest.raises(NotHomogeneous):
        derivative_rank_profile(parse("x1^3 + x2", 5, 2))
    with pytest.raises(DegreeTooSmall):
        derivative_rank_profile(parse("x1^2", 5, 1))
