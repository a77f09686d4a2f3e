"""Iterated differences and symmetric multilinear forms.

:func:`multilinearize` works symbolically on the coefficient tensor; the
numeric route through :func:`iterated_delta` is kept as an independent
cross-check.
"""
import itertools
import json
from math import factorial

import numpy as np

from .errors import ArityMismatch, CharTooSmall, DimensionMismatch, NotHomogeneous
from .field import GF
from .kernels import add_indices
from .poly import (
    Polynomial,
    ValueTable,
    _codes,
    encode_point,
    require_char_above,
)


def _arrangements(key):
    return sorted(set(itertools.permutations(key)))


class MultilinearForm:
    """Symmetric d-linear form on (F_q^n)^d.

    ``coeffs`` maps sorted index tuples ``(i_1 <= ... <= i_d)`` to the value
    of the symmetric coefficient tensor on every arrangement of that tuple,
    so ``M(y_1..y_d) = sum_K a_K sum_{arrangements pi of K} prod_k y_k[pi_k]``.
    """

    __slots__ = ("d", "n", "field", "_coeffs")

    def __init__(self, d, n, field, coeffs):
        acc = {}
        for key, c in dict(coeffs).items():
            key = tuple(sorted(int(i) for i in key))
            if len(key) != d or any(not 0 <= i < n for i in key):
                raise DimensionMismatch(f"bad index tuple {key} for d={d}, n={n}")
            acc[key] = field.add(acc.get(key, 0), int(c))
        self.d, self.n, self.field = d, n, field
        self._coeffs = {k: acc[k] for k in sorted(acc) if acc[k]}

    @property
    def coeffs(self):
        return dict(self._coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, MultilinearForm)
            and (self.d, self.n, self.field) == (other.d, other.n, other.field)
            and self._coeffs == other._coeffs
        )

    def __repr__(self):
        return f"MultilinearForm(d={self.d}, n={self.n}, {self.field!r}, {self._coeffs})"

    def is_zero(self):
        return not self._coeffs

    def tensor(self):
        """Dense symmetric coefficient tensor of shape ``(n,) * d``."""
        t = np.zeros((self.n,) * self.d, dtype=np.int64)
        for key, c in self._coeffs.items():
            for arr in _arrangements(key):
                t[arr] = c
        return t

    def __call__(self, *xs):
        return evaluate_form(self, list(xs))

    def as_polynomial(self):
        """The form as a polynomial in d*n variables (slot k, coordinate i -> k*n + i)."""
        terms = {}
        for key, c in self._coeffs.items():
            for arr in _arrangements(key):
                exps = [0] * (self.d * self.n)
                for k, i in enumerate(arr):
                    exps[k * self.n + i] += 1
                terms[tuple(exps)] = c
        return Polynomial._raw(self.d * self.n, self.field, terms)

    def to_json_obj(self):
        f = self.field
        out = {"d": self.d, "n": self.n, "p": f.p}
        if f.s > 1:
            out["s"] = f.s
        out["coeffs"] = [
            {"idx": list(k), "coeff": c if f.s == 1 else list(f.digits(c))} for k, c in self._coeffs.items()
        ]
        return out

    @classmethod
    def from_json_obj(cls, obj):
        field = GF(int(obj["p"]), int(obj.get("s", 1)))
        coeffs = {}
        for entry in obj["coeffs"]:
            c = entry["coeff"]
            coeffs[tuple(entry["idx"])] = field.from_digits(c) if isinstance(c, list) else field.reduce(c)
        return cls(int(obj["d"]), int(obj["n"]), field, coeffs)

    def to_json(self):
        return json.dumps(self.to_json_obj())


def iterated_delta(F, ts):
    """Pointwise ``Delta_{t_m} ... Delta_{t_1} F`` on a value table."""
    f, n = F.field, F.n
    p, D = f.p, n * f.s
    idx = np.arange(F.size, dtype=np.int64)
    vals = F.values
    for t in ts:
        if len(t) != n:
            raise DimensionMismatch(f"shift has {len(t)} coordinates, table has {n}")
        shifted = add_indices(idx, encode_point(_codes(t, f), f.q), p, D)
        vals = f.sub_arr(vals[shifted], vals)
    return ValueTable(f, n, vals)


def multilinearize(P, d=None):
    """The symmetric form ``Delta_{x_d} ... Delta_{x_1} P`` of a homogeneous P."""
    if d is None:
        if P.is_zero():
            raise NotHomogeneous("the zero polynomial needs an explicit degree")
        d = P.degree
    if not P.is_homogeneous(d):
        raise NotHomogeneous(f"polynomial is not homogeneous of degree {d}")
    if d < 1:
        raise NotHomogeneous("degree must be >= 1")
    require_char_above(P.field, d)
    f = P.field
    coeffs = {}
    for exps, c in P.items():
        key = tuple(i for i, e in enumerate(exps) for _ in range(e))
        weight = 1
        for e in exps:
            weight *= factorial(e)
        coeffs[key] = f.mul(c, f.scalar(weight))
    return MultilinearForm(d, P.n, f, coeffs)


def evaluate_form(M, xs):
    if len(xs) != M.d:
        raise ArityMismatch(f"form takes {M.d} arguments, got {len(xs)}")
    f = M.field
    xs = [_codes(x, f) for x in xs]
    if any(len(x) != M.n for x in xs):
        raise DimensionMismatch(f"each argument needs {M.n} coordinates")
    total = 0
    for key, c in M._coeffs.items():
        for arr in _arrangements(key):
            v = c
            for k, i in enumerate(arr):
                v = f.mul(v, xs[k][i])
                if not v:
                    break
            total = f.add(total, v)
    return total


def diagonal_reconstruct(M):
    """``(d!)^{-1} M(x, ..., x)`` as a homogeneous polynomial."""
    f, d = M.field, M.d
    if f.p <= d:
        raise CharTooSmall(f"characteristic {f.p} must exceed the degree {d}")
    diag = {}
    for key, c in M._coeffs.items():
        exps = [0] * M.n
        for i in key:
            exps[i] += 1
        # M(x,...,x) picks up every arrangement of key once
        count = f.scalar(len(_arrangements(key)))
        diag[tuple(exps)] = f.add(diag.get(tuple(exps), 0), f.mul(c, count))
    scale = f.inv(f.scalar(factorial(d)))
    return Polynomial._raw(M.n, f, {e: f.mul(scale, c) for e, c in diag.items()})
