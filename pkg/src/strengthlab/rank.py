"""Rank (strength) of homogeneous polynomials with checkable certificates.

The rank of a homogeneous P of degree d >= 2 is the least r with
``P = L_1 R_1 + ... + L_r R_r`` for homogeneous factors of positive degree.
Two independent routes are provided:

* :func:`quadratic_rank` classifies the quadratic form (matrix rank plus
  discriminant class) and builds a certificate from a totally isotropic
  subspace;
* :func:`exhaustive_rank` enumerates factor tuples in a fixed order and
  solves for the cofactors, returning the first hit.

Both are over the field of the polynomial; :func:`rank_over_extension`
repeats the search over F_{p^s}, which only ever lowers the rank.
"""
import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import BudgetExceeded, CharTwo, DegreeTooSmall, NotHomogeneous, UsageError, WrongDegree
from .field import GF
from .linalg import nullspace, solve, transpose
from .linalg import rank as matrix_rank
from .poly import (
    Polynomial,
    directional_derivative,
    embed,
    encode_point,
    homogeneous_part,
    monomials,
    require_char_above,
    to_json_obj,
    value_table,
)

DEFAULT_SEARCH_BUDGET = 2_000_000
DEGREE_MESSAGE = "rank undefined for degree ≤ 1 (rank requires degree ≥ 2)"


@dataclass(frozen=True)
class RankCertificate:
    """Summands ``(L_i, R_i)`` with ``sum L_i R_i`` equal to the polynomial."""

    summands: tuple
    field: object

    def expand(self, n):
        total = Polynomial.zero(n, self.field)
        for L, R in self.summands:
            total = total + L * R
        return total

    def verify(self, P):
        for L, R in self.summands:
            if L.is_zero() or R.is_zero() or not L.is_homogeneous() or not R.is_homogeneous():
                return False
            if L.degree < 1 or R.degree < 1:
                return False
        return self.expand(P.n) == P

    def to_json_obj(self):
        return [{"L": to_json_obj(L), "R": to_json_obj(R)} for L, R in self.summands]


@dataclass(frozen=True)
class RankResult:
    """A rank value, or ``value=None`` meaning "greater than ``bound``".

    ``exhausted`` records what was ruled out: the degree patterns and the
    number of factor tuples examined without success.
    """

    value: object
    field: object
    certificate: object = None
    exhausted: dict = None
    bound: object = None
    method: str = "exhaustive"

    def __int__(self):
        if self.value is None:
            raise ValueError(f"rank is only known to exceed {self.bound}")
        return self.value

    def to_json_obj(self):
        fld = {"p": self.field.p, "s": self.field.s}
        if self.value is None:
            return {"rank_gt": self.bound, "field": fld, "exhausted": self.exhausted}
        out = {"rank": self.value, "field": fld, "method": self.method}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json_obj()
        if self.exhausted is not None:
            out["exhausted"] = self.exhausted
        return out


# --- enumeration order ----------------------------------------------------------


def projective_vectors(q, k):
    """One representative per line of F_q^k: first nonzero coordinate 1.

    Ordered by the position of that 1, then lexicographically in the tail.
    """
    for lead in range(k):
        for tail in itertools.product(range(q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + tail


@lru_cache(maxsize=None)
def _forms(fld, n, e):
    basis = monomials(n, e)
    return basis, list(projective_vectors(fld.q, len(basis)))


def _form_poly(fld, n, e, vec):
    basis, _ = _forms(fld, n, e)
    return Polynomial._raw(n, fld, dict(zip(basis, vec)))


def _patterns(d, r):
    return list(itertools.combinations_with_replacement(range(1, d // 2 + 1), r))


def _vec_combo(coeffs, vectors, fld):
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c:
            out = [fld.add(a, fld.mul(c, b)) for a, b in zip(out, v)]
    return out


@lru_cache(maxsize=32)
def _kernel_points(fld, n, r):
    """Linear r-subsets in enumeration order, with projective points of their common kernel.

    Returns ``(combos, keep, points)``: ``keep`` indexes the linearly
    independent subsets and ``points[j]`` lists the point indices spanning the
    kernel of subset ``keep[j]`` projectively.  Dependent subsets are never
    the first hit (their ideal is generated by a smaller subset that was
    already tried), so they are only counted.
    """
    _, vecs = _forms(fld, n, 1)
    combos = list(itertools.combinations(range(len(vecs)), r))
    keep, rows = [], []
    for ci, combo in enumerate(combos):
        basis = nullspace([list(vecs[i]) for i in combo], n, fld)
        if len(basis) != n - r:
            continue
        pts = [encode_point(_vec_combo(c, basis, fld), fld.q) for c in projective_vectors(fld.q, n - r)] if basis else []
        keep.append(ci)
        rows.append(pts)
    width = len(rows[0]) if rows else 0
    return combos, np.array(keep, dtype=np.int64), np.array(rows, dtype=np.int64).reshape(len(rows), width)


def _solve_cofactors(P, Ls, d):
    """Cofactors R_i with ``sum L_i R_i = P``, or ``None``."""
    fld, n = P.field, P.n
    target = monomials(n, d)
    pos = {m: i for i, m in enumerate(target)}
    cols, meta = [], []
    for i, L in enumerate(Ls):
        for mu in monomials(n, d - L.degree):
            col = [0] * len(target)
            for e, c in L.items():
                col[pos[tuple(a + b for a, b in zip(e, mu))]] = c
            cols.append(col)
            meta.append((i, mu))
    x = solve(transpose(cols), [P.coeff(m) for m in target], fld)
    if x is None:
        return None
    Rs = [{} for _ in Ls]
    for (i, mu), c in zip(meta, x):
        if c:
            Rs[i][mu] = c
    return tuple((L, Polynomial._raw(n, fld, R)) for L, R in zip(Ls, Rs))


def _declared_degree(P, d):
    if d is None:
        if P.is_zero():
            raise UsageError("the zero polynomial carries no degree; declare d")
        d = P.degree
    return d


def exhaustive_rank(P, r_max=None, d=None, budget=DEFAULT_SEARCH_BUDGET, certify=True):
    """Search r = 1, 2, ..., r_max for a decomposition of the homogeneous P.

    For each r, degree patterns are tried in lex order; within a pattern,
    tuples of distinct projective factors (one list per factor degree) are
    enumerated in lex order and the cofactors solved for.  Tuples made only
    of linear factors are screened by checking that P vanishes on their
    common kernel, which is equivalent to solvability.
    """
    fld, n = P.field, P.n
    d = _declared_degree(P, d)
    if d < 2:
        raise DegreeTooSmall(DEGREE_MESSAGE)
    if not P.is_homogeneous(d):
        raise NotHomogeneous(f"polynomial is not homogeneous of degree {d}")
    if r_max is None:
        r_max = n
    if P.is_zero():
        return RankResult(0, fld, RankCertificate((), fld))
    searched = 0
    pairs, done = set(), set()
    zero_mask = None

    def record(count):
        # patterns listed are those exhausted for every smaller number of summands
        return {"patterns": [list(pr) for pr in sorted(done)], "tuples_searched": count}

    for r in range(1, r_max + 1):
        done |= pairs
        for pattern in _patterns(d, r):
            groups = {e: pattern.count(e) for e in sorted(set(pattern))}
            size = 1
            for e, k in groups.items():
                size *= comb(len(_forms(fld, n, e)[1]), k)
            if searched + size > budget:
                raise BudgetExceeded(
                    f"rank search would examine {searched + size} factor tuples, budget is {budget}"
                )
            pairs.update((e, d - e) for e in groups)
            if set(groups) == {1}:
                combos, keep, pts = _kernel_points(fld, n, r)
                if zero_mask is None:
                    zero_mask = value_table(P).values == 0
                hits = zero_mask[pts].all(axis=1) if len(keep) else np.zeros(0, dtype=bool)
                if hits.any():
                    ci = int(keep[int(np.argmax(hits))])
                    prior = record(searched + ci)
                    cert = None
                    if certify:
                        Ls = [_form_poly(fld, n, 1, _forms(fld, n, 1)[1][i]) for i in combos[ci]]
                        cert = RankCertificate(_solve_cofactors(P, Ls, d), fld)
                    return RankResult(r, fld, cert, exhausted=prior)
                searched += size
                continue
            choices = [itertools.combinations(_forms(fld, n, e)[1], k) for e, k in groups.items()]
            degrees = [e for e, k in groups.items() for _ in range(k)]
            for tup in itertools.product(*choices):
                searched += 1
                vecs = [v for group in tup for v in group]
                Ls = [_form_poly(fld, n, e, v) for e, v in zip(degrees, vecs)]
                summands = _solve_cofactors(P, Ls, d)
                if summands is not None:
                    prior = record(searched - 1)
                    return RankResult(r, fld, RankCertificate(summands, fld) if certify else None, exhausted=prior)
    done |= pairs
    return RankResult(None, fld, exhausted=record(searched), bound=r_max)


# --- quadratic forms ---------------------------------------------------------------


def symmetric_matrix(Q):
    """M with ``Q(x) = x^T M x`` (needs odd characteristic)."""
    fld, n = Q.field, Q.n
    if fld.p == 2:
        raise CharTwo("quadratic forms need odd characteristic")
    half = fld.inv(2)
    M = [[0] * n for _ in range(n)]
    for exps, c in Q.items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        i, j = idx
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = M[j][i] = fld.mul(c, half)
    return M


def _bilinear(M, u, v, fld):
    total = 0
    for i, ui in enumerate(u):
        if ui:
            row = 0
            for j, vj in enumerate(v):
                if vj and M[i][j]:
                    row = fld.add(row, fld.mul(M[i][j], vj))
            total = fld.add(total, fld.mul(ui, row))
    return total


def diagonalize(M, fld):
    """Orthogonal basis for the form ``x^T M x``: list of ``(Q(v), v)``.

    Vectors with ``Q(v) = 0`` come last and span the radical.
    """
    n = len(M)
    rest = [[int(i == j) for j in range(n)] for i in range(n)]
    out = []
    while rest:
        k = next((i for i, v in enumerate(rest) if _bilinear(M, v, v, fld)), None)
        if k is None:
            pair = next(
                ((i, j) for i in range(len(rest)) for j in range(i + 1, len(rest)) if _bilinear(M, rest[i], rest[j], fld)),
                None,
            )
            if pair is None:
                out.extend((0, v) for v in rest)
                break
            i, j = pair
            rest[i] = [fld.add(a, b) for a, b in zip(rest[i], rest[j])]
            k = i
        v = rest.pop(k)
        qv = _bilinear(M, v, v, fld)
        out.append((qv, v))
        for idx, w in enumerate(rest):
            c = fld.div(_bilinear(M, w, v, fld), qv)
            if c:
                rest[idx] = [fld.sub(a, fld.mul(c, b)) for a, b in zip(w, v)]
    return out


def _rank_from_diagonal(diag, fld):
    nonzero = [a for a in diag if a]
    m = len(nonzero)
    if m % 2:
        return (m + 1) // 2
    if m == 0:
        return 0
    disc = 1
    for a in nonzero:
        disc = fld.mul(disc, a)
    if (m // 2) % 2:
        disc = fld.neg(disc)
    # hyperbolic (all isotropic planes) exactly when (-1)^{m/2} disc is a square
    return m // 2 if fld.is_square(disc) else m // 2 + 1


@lru_cache(maxsize=1 << 18)
def _quadratic_value(fld, mat):
    return _rank_from_diagonal([a for a, _ in diagonalize([list(r) for r in mat], fld)], fld)


def quadratic_rank_value(Q):
    M = symmetric_matrix(Q)
    return _quadratic_value(Q.field, tuple(tuple(r) for r in M))


def _isotropic_basis(diag, fld):
    """Mutually orthogonal isotropic vectors spanning a maximal totally isotropic subspace."""
    remaining = [(a, v) for a, v in diag if a]
    iso = []
    while len(remaining) >= 2:
        (a, u), (b, v) = remaining[0], remaining[1]
        ratio = fld.neg(fld.div(b, a))
        if fld.is_square(ratio):
            c = fld.sqrt(ratio)
            iso.append(_vec_combo([c, 1], [u, v], fld))
            remaining = remaining[2:]
            continue
        if len(remaining) == 2:
            break
        c3, z = remaining[2]
        # a binary form over a finite field represents every nonzero value
        for y0 in fld.elements():
            rhs = fld.div(fld.sub(fld.neg(c3), fld.mul(a, fld.mul(y0, y0))), b)
            if fld.is_square(rhs):
                z0 = fld.sqrt(rhs)
                break
        w = _vec_combo([y0, z0, 1], [u, v, z], fld)
        iso.append(w)
        # a vector of span(u, v, z) orthogonal to w and off the line of w
        normal = [fld.mul(a, y0), fld.mul(b, z0), c3]
        coords = next(c for c in nullspace([normal], 3, fld) if matrix_rank([c, [y0, z0, 1]], fld) == 2)
        qe = 0
        for coef, c in zip((a, b, c3), coords):
            qe = fld.add(qe, fld.mul(coef, fld.mul(c, c)))
        if not qe:
            raise AssertionError("complement of an isotropic line is degenerate")
        remaining = [(qe, _vec_combo(coords, [u, v, z], fld))] + remaining[3:]
    return iso


def _monic(vec, fld):
    lead = next(c for c in vec if c)
    inv = fld.inv(lead)
    return [fld.mul(inv, c) for c in vec]


def quadratic_rank(Q):
    """Rank of a quadratic form over its own field, with certificate.

    The value is ``ceil(m/2)`` for odd matrix rank m; for even m it is m/2
    when the form is hyperbolic and m/2 + 1 otherwise.  The certificate's
    linear factors cut out radical + maximal totally isotropic subspace.
    """
    fld, n = Q.field, Q.n
    if not Q.is_homogeneous():
        raise NotHomogeneous("quadratic form must be homogeneous")
    if not Q.is_zero() and Q.degree != 2:
        raise WrongDegree(f"expected degree 2, got {Q.degree}")
    M = symmetric_matrix(Q)
    value = _quadratic_value(fld, tuple(tuple(r) for r in M))
    if value == 0:
        return RankResult(0, fld, RankCertificate((), fld), method="quadratic-form")
    diag = diagonalize(M, fld)
    span = _isotropic_basis(diag, fld) + [v for a, v in diag if not a]
    forms = [_monic(v, fld) for v in nullspace(span, n, fld)] if span else [
        [int(i == j) for j in range(n)] for i in range(n)
    ]
    if len(forms) != value:
        raise AssertionError(f"isotropic construction gave {len(forms)} factors, classification says {value}")
    Ls = [Polynomial.linear_form(v, fld) for v in forms]
    summands = _solve_cofactors(Q, Ls, 2)
    if summands is None:
        raise AssertionError("quadratic form does not vanish on its isotropic subspace")
    return RankResult(value, fld, RankCertificate(summands, fld), method="quadratic-form")


# --- dispatch, extensions, derivative profiles ----------------------------------


def _check_degree(P, d):
    d = _declared_degree(P, d)
    if d <= 1:
        raise DegreeTooSmall(DEGREE_MESSAGE)
    if not P.is_zero() and P.degree > d:
        raise WrongDegree(f"polynomial has degree {P.degree} > declared {d}")
    require_char_above(P.field, d)
    return d


def rank(P, d=None, budget=DEFAULT_SEARCH_BUDGET, certify=True, r_max=None):
    """Rank of the degree-d part of P (d defaults to deg P).

    Quadratics go through the closed form unless ``r_max`` asks for a capped search.
    """
    d = _check_degree(P, d)
    top = homogeneous_part(P, d)
    if d == 2 and r_max is None:
        return quadratic_rank(top)
    return exhaustive_rank(top, r_max=r_max, d=d, budget=budget, certify=certify)


def rank_over_extension(P, s, d=None, budget=DEFAULT_SEARCH_BUDGET, certify=True):
    """Exhaustive rank with factors over F_{p^s}."""
    d = _check_degree(P, d)
    top = embed(homogeneous_part(P, d), GF(P.field.p, s))
    return exhaustive_rank(top, d=d, budget=budget, certify=certify)


def closure_rank_bound(P, d=None, extensions=(1, 2), budget=DEFAULT_SEARCH_BUDGET):
    """Smallest rank found over the given extension degrees: an upper bound for the closure rank."""
    results = [rank_over_extension(P, s, d=d, budget=budget) for s in extensions]
    return min((r for r in results if r.value is not None), key=lambda r: r.value, default=results[-1])


@dataclass(frozen=True)
class DerivativeProfile:
    """Rank of P_t for one t per line of V, and the maximum."""

    max_rank: int
    table: tuple
    zero_directions: tuple
    field: object = dc_field(default=None)

    def to_json_obj(self):
        return {
            "max": self.max_rank,
            "field": {"p": self.field.p, "s": self.field.s},
            "table": [{"t": list(t), "rank": r} for t, r in self.table],
            "zero_directions": [list(t) for t in self.zero_directions],
        }


def derivative_rank_profile(P, d=None, budget=DEFAULT_SEARCH_BUDGET):
    d = _declared_degree(P, d)
    if d < 3:
        raise DegreeTooSmall("derivative profile needs degree >= 3 so that derivatives have degree >= 2")
    if not P.is_homogeneous(d):
        raise NotHomogeneous(f"polynomial is not homogeneous of degree {d}")
    require_char_above(P.field, d)
    fld = P.field
    table, zeros = [], []
    for t in projective_vectors(fld.q, P.n):
        Pt = directional_derivative(P, t)
        if Pt.is_zero():
            r = 0
            zeros.append(t)
        elif d == 3:
            r = quadratic_rank_value(Pt)
        else:
            r = exhaustive_rank(Pt, d=d - 1, budget=budget, certify=False).value
        table.append((t, r))
    return DerivativeProfile(max((r for _, r in table), default=0), tuple(table), tuple(zeros), fld)
