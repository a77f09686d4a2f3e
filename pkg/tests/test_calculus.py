import itertools

import pytest

from strengthlab import GF, Polynomial, parse, value_table
from strengthlab.calculus import (
    MultilinearForm,
    diagonal_reconstruct,
    evaluate_form,
    iterated_delta,
    multilinearize,
)
from strengthlab.errors import ArityMismatch, CharTooSmall, NotHomogeneous
from strengthlab.experiments import make_rng, random_homogeneous

F5 = GF(5)


def _brute_difference(P, ts, x):
    """Delta_{t_m} ... Delta_{t_1} P at x via the signed subset sum."""
    f = P.field
    total = 0
    m = len(ts)
    for S in itertools.product((0, 1), repeat=m):
        pt = list(x)
        for use, t in zip(S, ts):
            if use:
                pt = [f.add(a, b) for a, b in zip(pt, t)]
        v = P(pt)
        total = f.add(total, v if (m - sum(S)) % 2 == 0 else f.neg(v))
    return total


def test_iterated_delta_examples():
    x2 = value_table(parse("x1^2", 5, 1))
    assert iterated_delta(x2, [[1], [1]]).tolist() == [2] * 5
    assert iterated_delta(x2, []).tolist() == x2.tolist()
    low = value_table(parse("x1^2 + 3*x1*x2 + x2 + 4", 5, 2))
    assert not any(iterated_delta(low, [[1, 2], [0, 3], [4, 4]]).tolist())


def test_multilinearize_examples():
    x = Polynomial.variable(0, 1, F5)
    assert multilinearize(x**3).coeffs == {(0, 0, 0): 1}  # 6abc, 6 = 1 mod 5
    assert multilinearize(x**2).coeffs == {(0, 0): 2}
    M = multilinearize(parse("x1*x2*x3", 5, 3))
    assert M.coeffs == {(0, 1, 2): 1}
    assert len(M.as_polynomial().terms) == 6


def test_multilinearize_matches_numeric_differences():
    # the symbolic form agrees with the d-fold difference evaluated pointwise
    rng = make_rng(11)
    for n in (1, 2):
        P = random_homogeneous(F5, n, 3, rng)
        M = multilinearize(P)
        for ts in itertools.product(itertools.product(range(5), repeat=n), repeat=3):
            if rng.random() < 0.9:
                continue
            assert evaluate_form(M, list(ts)) == _brute_difference(P, [list(t) for t in ts], [0] * n)


def test_diagonal_reconstruct_examples():
    for text, n in (("x1^3", 1), ("x1*x2*x3", 3), ("x1^2", 1), ("x1^2*x2 + 3*x2^3", 2)):
        P = parse(text, 5, n)
        assert diagonal_reconstruct(multilinearize(P)) == P
    M = MultilinearForm(2, 1, F5, {(0, 0): 2})
    assert diagonal_reconstruct(M) == parse("x1^2", 5, 1)


def test_evaluate_form_examples():
    M = multilinearize(parse("x1*x2*x3", 5, 3))
    assert M([1, 0, 0], [0, 1, 0], [0, 0, 1]) == 1
    assert M([1, 2, 3], [0, 0, 0], [4, 4, 4]) == 0
    assert multilinearize(parse("x1^3", 5, 1))([1], [1], [1]) == 1
    with pytest.raises(ArityMismatch):
        evaluate_form(M, [[1, 0, 0]])


def test_symmetry_and_tensor():
    P = parse("x1^2*x2 + 2*x1*x2*x3 + x3^3", 7, 3)
    M = multilinearize(P)
    t = M.tensor()
    for perm in itertools.permutations(range(3)):
        assert (t.transpose(perm) == t).all()
    xs = [[1, 2, 3], [4, 0, 6], [2, 2, 5]]
    for perm in itertools.permutations(range(3)):
        assert M(*[xs[i] for i in perm]) == M(*xs)


def test_extension_field_round_trip():
    f = GF(5, 2)
    P = parse("[1,2]*x1^2*x2 + [0,1]*x2^3", 5, 2, s=2)
    assert diagonal_reconstruct(multilinearize(P)) == P
    obj = multilinearize(P).to_json_obj()
    assert MultilinearForm.from_json_obj(obj) == multilinearize(P)
    assert obj["s"] == 2 and f.q == 25


def test_errors():
    with pytest.raises(NotHomogeneous):
        multilinearize(parse("x1^3 + x1", 5, 1))
    with pytest.raises(CharTooSmall):
        multilinearize(parse("x1^3", 3, 1))
    with pytest.raises(NotHomogeneous):
        multilinearize(Polynomial.zero(2, F5))
