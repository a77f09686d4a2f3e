"""Sparse multivariate polynomials over finite fields.

A :class:`Polynomial` maps exponent tuples to nonzero coefficient codes
(see :mod:`strengthlab.field` for the encoding).  Terms are kept in
graded-lex order, highest degree first.  Variables are ``x1..xn`` in text
and 0-indexed internally.
"""
import itertools
import json
import re
from math import comb
from types import MappingProxyType

import numpy as np

from .errors import (
    CharTooSmall,
    DimensionMismatch,
    IndexOutOfRange,
    NotHomogeneous,
    PolynomialSyntaxError,
    SizeCap,
)
from .field import GF, FieldElement

TABLE_CAP = 5**12


class _ZeroDegree:
    """Degree of the zero polynomial: below every integer, and not a number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __hash__(self):
        return hash("zero-degree")


ZERO_DEGREE = _ZeroDegree()


def grlex_key(exps):
    return (sum(exps), exps)


def monomials(n, d):
    """Exponent tuples of total degree ``d`` in ``n`` variables, graded-lex descending."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, slots - 1)

    if n == 0:
        return [()] if d == 0 else []
    rec((), d, n)
    return out


def encode_point(x, q):
    """Base-q index of a point, ``x[0]`` least significant."""
    idx, w = 0, 1
    for c in x:
        idx += int(c) * w
        w *= q
    return idx


def decode_point(idx, q, n):
    out = []
    for _ in range(n):
        out.append(idx % q)
        idx //= q
    return tuple(out)


def _codes(x, field):
    return tuple(v.value if isinstance(v, FieldElement) else int(v) % field.q for v in x)


class Polynomial:
    """Immutable polynomial in ``n`` variables over ``field``."""

    __slots__ = ("n", "field", "_terms")

    def __init__(self, n, field, terms=()):
        if hasattr(terms, "items"):
            terms = terms.items()
        acc = {}
        for exps, c in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise DimensionMismatch(f"exponent vector {exps} has length != {n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = c.value if isinstance(c, FieldElement) else field.reduce(c)
            acc[exps] = field.add(acc.get(exps, 0), c)
        self.n = n
        self.field = field
        self._terms = {e: acc[e] for e in sorted(acc, key=grlex_key, reverse=True) if acc[e]}

    @classmethod
    def _raw(cls, n, field, codes):
        # codes are already reduced field codes; zeros are dropped here
        obj = cls.__new__(cls)
        obj.n, obj.field = n, field
        obj._terms = {e: codes[e] for e in sorted(codes, key=grlex_key, reverse=True) if codes[e]}
        return obj

    @classmethod
    def zero(cls, n, field):
        return cls._raw(n, field, {})

    @classmethod
    def variable(cls, i, n, field):
        exps = [0] * n
        exps[i] = 1
        return cls._raw(n, field, {tuple(exps): 1})

    @classmethod
    def constant(cls, c, n, field):
        return cls._raw(n, field, {(0,) * n: field.reduce(c)})

    @classmethod
    def linear_form(cls, coeffs, field):
        n = len(coeffs)
        return cls._raw(n, field, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, exps):
        return self._terms.get(tuple(exps), 0)

    @property
    def degree(self):
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self._terms)

    def is_zero(self):
        return not self._terms

    def is_homogeneous(self, d=None):
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def _check(self, other):
        if other.n != self.n or other.field != self.field:
            raise DimensionMismatch("polynomials live in different rings")

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self.field, tuple(self._terms.items())))

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.n, self.field)
        self._check(other)
        f = self.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = f.add(out.get(e, 0), c)
        return Polynomial._raw(self.n, f, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, self.field, {e: self.field.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.n, self.field)
        return self + (-other)

    def scale(self, c):
        """Multiply by the field element with code ``c``."""
        return Polynomial._raw(self.n, self.field, {e: self.field.mul(c, v) for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = other.value if isinstance(other, FieldElement) else self.field.reduce(other)
            return self.scale(c)
        self._check(other)
        f = self.field
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = f.add(out.get(e, 0), f.mul(c1, c2))
        return Polynomial._raw(self.n, f, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Polynomial.constant(1, self.n, self.field)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, *x):
        return evaluate(self, x[0] if len(x) == 1 and isinstance(x[0], (list, tuple)) else x)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r}, {self.field!r}, n={self.n})"

    def __str__(self):
        return to_text(self)


def require_char_above(field, d):
    if field.p <= d:
        raise CharTooSmall(f"characteristic {field.p} must exceed the degree {d}")


# --- pointwise and symbolic operators ---------------------------------------


def evaluate(P, x):
    """Value of ``P`` at the point ``x`` (a sequence of codes or FieldElements)."""
    if len(x) != P.n:
        raise DimensionMismatch(f"point has {len(x)} coordinates, polynomial has {P.n} variables")
    f = P.field
    x = _codes(x, f)
    total = 0
    for exps, c in P.items():
        v = c
        for xi, e in zip(x, exps):
            if e:
                v = f.mul(v, f.pow(xi, e))
        total = f.add(total, v)
    return total


def shift(P, t):
    """The polynomial x -> P(x + t), expanded."""
    if len(t) != P.n:
        raise DimensionMismatch(f"shift has {len(t)} coordinates, polynomial has {P.n} variables")
    f = P.field
    t = _codes(t, f)
    out = {}
    for exps, c in P.items():
        per_var = []
        for ti, e in zip(t, exps):
            per_var.append([(k, f.mul(f.scalar(comb(e, k)), f.pow(ti, e - k))) for k in range(e + 1)])
        for choice in itertools.product(*per_var):
            coef = c
            for _, w in choice:
                coef = f.mul(coef, w)
            if coef:
                key = tuple(k for k, _ in choice)
                out[key] = f.add(out.get(key, 0), coef)
    return Polynomial._raw(P.n, f, out)


def delta(P, t):
    """Difference polynomial x -> P(x + t) - P(x)."""
    return shift(P, t) - P


def partial(P, i):
    f = P.field
    out = {}
    for exps, c in P.items():
        if exps[i]:
            e = list(exps)
            e[i] -= 1
            out[tuple(e)] = f.add(out.get(tuple(e), 0), f.mul(c, f.scalar(exps[i])))
    return Polynomial._raw(P.n, f, out)


def directional_derivative(P, t):
    """Formal derivative along ``t``: sum of t_i * dP/dx_i."""
    if len(t) != P.n:
        raise DimensionMismatch(f"direction has {len(t)} coordinates, polynomial has {P.n} variables")
    f = P.field
    t = _codes(t, f)
    out = {}
    for exps, c in P.items():
        for i, e in enumerate(exps):
            if e and t[i]:
                key = exps[:i] + (e - 1,) + exps[i + 1:]
                out[key] = f.add(out.get(key, 0), f.mul(c, f.mul(f.scalar(e), t[i])))
    return Polynomial._raw(P.n, f, out)


def homogeneous_part(P, d):
    if d < 0:
        raise ValueError("degree must be >= 0")
    return Polynomial._raw(P.n, P.field, {e: c for e, c in P.items() if sum(e) == d})


def linear_substitute(P, A):
    """P(A x) for an n x n matrix ``A`` of codes: x_i is replaced by row i of A."""
    f, n = P.field, P.n
    if len(A) != n or any(len(row) != n for row in A):
        raise DimensionMismatch("substitution matrix must be n x n")
    forms = [Polynomial.linear_form(list(row), f) for row in A]
    out = Polynomial.zero(n, f)
    for exps, c in P.items():
        term = Polynomial.constant(c, n, f)
        for form, e in zip(forms, exps):
            if e:
                term = term * form**e
        out = out + term
    return out


def embed(P, field):
    """Reinterpret ``P`` over an extension of its prime field (codes of F_p are shared)."""
    if field.p != P.field.p:
        raise ValueError("embedding requires the same characteristic")
    if P.field.s != 1:
        if P.field == field:
            return P
        raise ValueError("only prime-field polynomials can be embedded")
    return Polynomial._raw(P.n, field, dict(P.items()))


# --- value tables -------------------------------------------------------------


class ValueTable:
    """All values of a function V -> F_q, indexed by :func:`encode_point`."""

    __slots__ = ("field", "n", "values")

    def __init__(self, field, n, values):
        values = np.ascontiguousarray(values, dtype=np.int64)
        if values.shape != (field.q**n,):
            raise DimensionMismatch(f"table has shape {values.shape}, expected ({field.q ** n},)")
        values.setflags(write=False)
        self.field, self.n, self.values = field, n, values

    @property
    def size(self):
        return self.values.shape[0]

    def __getitem__(self, x):
        if isinstance(x, (int, np.integer)):
            return int(self.values[x])
        if len(x) != self.n:
            raise DimensionMismatch(f"point has {len(x)} coordinates, table has {self.n}")
        return int(self.values[encode_point(_codes(x, self.field), self.field.q)])

    def __eq__(self, other):
        return (
            isinstance(other, ValueTable)
            and (self.field, self.n) == (other.field, other.n)
            and np.array_equal(self.values, other.values)
        )

    def tolist(self):
        return self.values.tolist()


def point_coordinates(q, n):
    """Coordinate arrays of every point of F_q^n in index order."""
    idx = np.arange(q**n, dtype=np.int64)
    return [(idx // q**i) % q for i in range(n)]


def value_table(P, cap=TABLE_CAP):
    f, n = P.field, P.n
    size = f.q**n
    if size > cap:
        raise SizeCap(f"value table needs {size} entries, cap is {cap}")
    coords = point_coordinates(f.q, n)
    powers = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[i, e] = coords[i] if e == 1 else f.mul_arr(power(i, e - 1), coords[i])
        return powers[i, e]

    out = np.zeros(size, dtype=np.int64)
    for exps, c in P.items():
        term = np.full(size, c, dtype=np.int64)
        for i, e in enumerate(exps):
            if e:
                term = f.mul_arr(term, power(i, e))
        out = f.add_arr(out, term)
    return ValueTable(f, n, out)


# --- text and JSON --------------------------------------------------------------


def _coeff_text(c, field):
    if c < field.p:
        return str(c)
    return "[" + ",".join(str(d) for d in field.digits(c)) + "]"


def to_text(P):
    if P.is_zero():
        return "0"
    parts = []
    for exps, c in P.items():
        factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e]
        if c != 1 or not factors:
            factors.insert(0, _coeff_text(c, P.field))
        parts.append("*".join(factors))
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|x(?P<var>\d+)|(?P<op>[-+*^\[\],]))")


def _tokenize(text):
    pos, toks = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            off = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[off]!r}", off)
        start = m.start(m.lastgroup)
        if m.group("num") is not None:
            toks.append(("num", int(m.group("num")), start))
        elif m.group("var") is not None:
            toks.append(("var", int(m.group("var")), start))
        else:
            toks.append((m.group("op"), None, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse(text, p, n, s=1):
    """Parse ``c*x1^2*x3 + x2 - 4`` style text into a polynomial over F_{p^s}.

    Coefficients are integers (read in the prime field) or, for extension
    fields, bracketed base-p digit vectors such as ``[1,2]``.
    """
    field = GF(p, s)
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind):
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise PolynomialSyntaxError(f"expected {kind}, found {what}", tok[2])
        i += 1
        return tok

    def factor(coef, exps):
        nonlocal i
        kind, val, pos = peek()
        if kind == "num":
            i += 1
            return field.mul(coef, field.reduce(val)), exps
        if kind == "[":
            i += 1
            digits = [take("num")[1]]
            while peek()[0] == ",":
                i += 1
                digits.append(take("num")[1])
            take("]")
            if len(digits) != field.s:
                raise PolynomialSyntaxError(f"coefficient vector needs {field.s} entries", pos)
            return field.mul(coef, field.from_digits(digits)), exps
        if kind == "var":
            i += 1
            if not 1 <= val <= n:
                raise IndexOutOfRange(f"variable x{val} at offset {pos} outside x1..x{n}")
            e = 1
            if peek()[0] == "^":
                i += 1
                e = take("num")[1]
            exps[val - 1] += e
            return coef, exps
        what = "end of input" if kind == "end" else repr(kind)
        raise PolynomialSyntaxError(f"expected a coefficient or variable, found {what}", pos)

    def term(sign):
        nonlocal i
        coef, exps = factor(sign, [0] * n)
        while peek()[0] == "*":
            i += 1
            coef, exps = factor(coef, exps)
        return tuple(exps), coef

    terms = []
    sign = 1
    if peek()[0] in "+-":
        sign = field.neg(1) if peek()[0] == "-" else 1
        i += 1
    terms.append(term(sign))
    while peek()[0] in ("+", "-"):
        sign = field.neg(1) if peek()[0] == "-" else 1
        i += 1
        terms.append(term(sign))
    take("end")
    acc = {}
    for exps, c in terms:
        acc[exps] = field.add(acc.get(exps, 0), c)
    return Polynomial._raw(n, field, acc)


def _coeff_json(c, field):
    return c if field.s == 1 else list(field.digits(c))


def to_json_obj(P):
    f = P.field
    return {
        "p": f.p,
        "s": f.s,
        "n": P.n,
        "terms": [{"exps": list(e), "coeff": _coeff_json(c, f)} for e, c in P.items()],
    }


def from_json_obj(obj):
    field = GF(int(obj["p"]), int(obj.get("s", 1)))
    n = int(obj["n"])
    terms = []
    for t in obj["terms"]:
        c = t["coeff"]
        if field.s > 1 and not isinstance(c, list):
            raise ValueError("extension-field coefficients must be digit arrays")
        terms.append((t["exps"], c))
    return Polynomial(n, field, terms)


def to_json(P):
    return json.dumps(to_json_obj(P))


def from_json(text):
    return from_json_obj(json.loads(text))
