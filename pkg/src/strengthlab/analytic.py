"""Bias and Gowers norms carried as exact residue tallies.

Every character average E psi(F) is determined by how often F hits each
residue of F_p (after the trace for extension fields), so the library keeps
those integer tallies and only turns them into floats at the edge.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import kernels
from .calculus import MultilinearForm, multilinearize
from .errors import BudgetExceeded, WrongDegree
from .poly import (
    Polynomial,
    ValueTable,
    decode_point,
    delta,
    homogeneous_part,
    point_coordinates,
    require_char_above,
    value_table,
)

DEFAULT_BUDGET = 10**10


@lru_cache(maxsize=None)
def _unit_circle(p):
    with mpmath.workprec(80):
        cos = [mpmath.cos(2 * mpmath.pi * j / p) for j in range(p)]
        sin = [mpmath.sin(2 * mpmath.pi * j / p) for j in range(p)]
    return cos, sin


def _float_error_bound(p):
    return p * 2.0**-40


@dataclass(frozen=True)
class CharacterCountVector:
    """``counts[j]`` is the number of domain points where the function equals j in F_p."""

    p: int
    counts: tuple
    total: int

    def __post_init__(self):
        if len(self.counts) != self.p or sum(self.counts) != self.total:
            raise ValueError("count vector does not match its modulus or total")

    @classmethod
    def from_array(cls, p, arr, total):
        return cls(p, tuple(int(c) for c in arr), int(total))

    def mean(self):
        """E psi as a complex number (sums carried at 80-bit precision, then rounded)."""
        cos, sin = _unit_circle(self.p)
        with mpmath.workprec(80):
            re = mpmath.fsum(c * cos[j] for j, c in enumerate(self.counts) if c) / self.total
            im = mpmath.fsum(c * sin[j] for j, c in enumerate(self.counts) if c) / self.total
        return complex(float(re), float(im))

    def real(self):
        return self.mean().real

    def magnitude(self):
        return abs(self.mean())

    @property
    def error_bound(self):
        return _float_error_bound(self.p)

    def concentrated_at_zero(self):
        return self.counts[0] == self.total


@dataclass(frozen=True)
class NormValue:
    """``||psi(F)||_{U_m}^{2^m}`` with its exact tally over the (m+1)-fold domain."""

    m: int
    counts: CharacterCountVector
    value: float
    error_bound: float

    @property
    def norm(self):
        return max(self.value, 0.0) ** (1.0 / 2**self.m)

    def to_json_obj(self):
        return {
            "m": self.m,
            "counts": list(self.counts.counts),
            "total": self.counts.total,
            "value": self.value,
            "error_bound": self.error_bound,
        }


def rational_json(x):
    return {"num": x.numerator, "den": x.denominator}


def _table(F):
    return value_table(F) if isinstance(F, Polynomial) else F


def _traced(F):
    f = F.field
    return F.values if f.s == 1 else f.trace_table()[F.values]


def _norm_value(m, p, counts, total):
    ccv = CharacterCountVector.from_array(p, counts, total)
    # the defining sum is invariant under conjugation, so only the real part survives
    return NormValue(m, ccv, ccv.real(), _float_error_bound(p))


def bias_counts(F):
    """Tally of ``F`` (traced to F_p) over its whole domain."""
    F = _table(F)
    p = F.field.p
    counts = np.bincount(_traced(F), minlength=p)
    return CharacterCountVector.from_array(p, counts, F.size)


def _check_budget(size, m, budget):
    need = size ** (m + 1)
    if need > budget:
        raise BudgetExceeded(f"U_{m} enumeration needs {need} tuples, budget is {budget}")
    return need


def gowers_norm(F, m, budget=DEFAULT_BUDGET):
    """Direct enumeration over all (v, v_1, ..., v_m)."""
    F = _table(F)
    if m < 1:
        raise ValueError("m must be >= 1")
    total = _check_budget(F.size, m, budget)
    f = F.field
    counts = kernels.gowers_counts(_traced(F), f.p, F.n * f.s, m)
    return _norm_value(m, f.p, counts, total)


def gowers_recursive(P, m, budget=DEFAULT_BUDGET):
    """``||psi(P)||_{U_m}^{2^m}`` as the sum over t of the U_{m-1} tallies of Delta_t P.

    The U_0 tally is the plain bias tally.  The grouping is by t = v_m, so the
    result equals :func:`gowers_norm` as integer vectors.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    f = P.field
    size = f.q**P.n
    total = _check_budget(size, m, budget)
    acc = np.zeros(f.p, dtype=np.int64)
    for idx in range(size):
        t = decode_point(idx, f.q, P.n)
        table = value_table(delta(P, t))
        if m == 1:
            acc += np.bincount(_traced(table), minlength=f.p)
        else:
            acc += kernels.gowers_counts(_traced(table), f.p, P.n * f.s, m - 1)
    return _norm_value(m, f.p, acc, total)


def _contract(cur, pts, field):
    # cur: (K, n, R) -> (K * N, R), contracting the middle axis with every point
    K, n, R = cur.shape
    N = pts.shape[0]
    if field.s == 1 and field.p < 2**20:
        out = np.einsum("xi,kir->kxr", pts, cur) % field.p
    else:
        out = np.zeros((K, N, R), dtype=np.int64)
        for i in range(n):
            out = field.add_arr(out, field.mul_arr(pts[None, :, i, None], cur[:, None, i, :]))
    return out.reshape(K * N, R)


def vanishing_count(M, budget=DEFAULT_BUDGET):
    """Number of (x_1..x_{d-1}) for which M(x_1, ..., x_{d-1}, .) is the zero linear form."""
    f, n, d = M.field, M.n, M.d
    N = f.q**n
    need = N ** (d - 1)
    if need > budget:
        raise BudgetExceeded(f"multilinear bias needs {need} tuples, budget is {budget}")
    t = M.tensor()
    if d == 1:
        return int(not t.any())
    pts = np.stack(point_coordinates(f.q, n), axis=1)
    count = 0
    # chunk over the first slot to bound memory
    chunk = max(1, 2**22 // max(1, N ** (d - 2) * n))
    first = t.reshape(n, n ** (d - 1))
    for start in range(0, N, chunk):
        sl = pts[start:start + chunk]
        cur = _contract(first[None, :, :], sl, f)
        for _ in range(d - 2):
            k, r = cur.shape
            cur = _contract(cur.reshape(k, n, r // n), pts, f)
        count += int(np.count_nonzero(~cur.any(axis=1)))
    return count


def multilinear_bias(M, budget=DEFAULT_BUDGET):
    """Exact ``E_{x_1..x_d} psi(M(x_1, ..., x_d))`` as a Fraction.

    Averaging over the last slot kills every tuple whose last-slot linear
    form is nonzero, so the bias is the vanishing fraction.
    """
    N = M.field.q**M.n
    return Fraction(vanishing_count(M, budget), N ** (M.d - 1))


def gowers_top_exact(P, d=None, budget=DEFAULT_BUDGET):
    """Exact ``||psi(P)||_{U_d}^{2^d}`` for a polynomial of degree at most d.

    The d-fold difference of P is the constant multilinear form of its
    degree-d part, so the norm is that form's bias.
    """
    if d is None:
        if P.is_zero():
            return Fraction(1)
        d = P.degree
    if not P.is_zero() and P.degree > d:
        raise WrongDegree(f"polynomial has degree {P.degree} > {d}")
    require_char_above(P.field, d)
    top = homogeneous_part(P, d)
    if top.is_zero():
        return Fraction(1)
    return multilinear_bias(multilinearize(top, d), budget)

