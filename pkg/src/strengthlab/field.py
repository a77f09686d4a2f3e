"""Exact arithmetic in F_p and small extensions F_{p^s}.

Elements are plain Python ints in ``range(q)``.  For ``s > 1`` an element is
the polynomial ``c_0 + c_1 a + ... + c_{s-1} a^{s-1}`` (``a`` a root of the
field modulus) stored as the base-p number ``sum c_k p^k``, so the prime
subfield is ``range(p)`` and addition is digit-wise mod p.  Multiplication
in extensions goes through discrete log/exp tables.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidDegree, NotPrime, SizeCap, ZeroInverse

MAX_PRIME = 2**31
EXTENSION_CAP = 2**20


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p):
    if not isinstance(p, (int, np.integer)) or not 2 <= p <= MAX_PRIME or not is_prime(int(p)):
        raise NotPrime(f"{p!r} is not a prime in [2, 2^31]")
    return int(p)


# --- univariate polynomials over F_p, coefficient lists low -> high --------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, f, p):
    a = list(a)
    inv_lead = pow(f[-1], -1, p)
    df = len(f) - 1
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return a


def _poly_mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, f, p)


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_poly_mod(a, b, p))
    return a


def _x_pow_mod(e, f, p):
    result, base = [1], _poly_mod([0, 1], f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _is_irreducible(f, p):
    # Ben-Or: f has no factor of degree k iff gcd(x^{p^k} - x, f) = 1
    s = len(f) - 1
    if f[0] == 0:
        return False
    for k in range(1, s // 2 + 1):
        h = _x_pow_mod(p**k, f, p) + [0, 0]
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(f, h, p)) > 1:
            return False
    return True


def find_irreducible(p, s):
    """Lex-smallest monic irreducible polynomial of degree ``s`` over F_p.

    Candidates are ordered by ``(c_{s-1}, ..., c_0)``.  Returns coefficients
    low -> high, e.g. ``(2, 0, 1)`` for ``x^2 + 2``.
    """
    p = check_prime(p)
    if s < 2:
        raise InvalidDegree(f"extension degree must be >= 2, got {s}")
    if p**s > EXTENSION_CAP:
        raise SizeCap(f"p^s = {p}^{s} exceeds the extension cap 2^20")
    for idx in range(p**s):
        lower = [(idx // p**k) % p for k in range(s)]
        f = lower + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """F_q with q = p^s; construct through :func:`GF` to share tables."""

    def __init__(self, p, s=1):
        self.p = check_prime(p)
        if s < 1:
            raise InvalidDegree(f"extension degree must be >= 1, got {s}")
        self.s = s
        self.q = self.p**s
        if s == 1:
            self.modulus = (0, 1)
            self._exp = self._log = None
        else:
            self.modulus = find_irreducible(self.p, s)
            self._build_tables()
        self._trace_table = None

    def __repr__(self):
        return f"GF({self.p}^{self.s})" if self.s > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.s) == (other.p, other.s)

    def __hash__(self):
        return hash((self.p, self.s))

    @property
    def characteristic(self):
        return self.p

    # -- representation ---------------------------------------------------

    def digits(self, a):
        return tuple((a // self.p**k) % self.p for k in range(self.s))

    def from_digits(self, ds):
        if len(ds) != self.s:
            raise ValueError(f"expected {self.s} coefficients, got {len(ds)}")
        return sum((int(c) % self.p) * self.p**k for k, c in enumerate(ds))

    def __call__(self, value):
        return FieldElement(self, self.reduce(value))

    def reduce(self, value):
        """Map an int (read as an element of the prime subfield) or a digit list to a code."""
        if isinstance(value, (list, tuple)):
            return self.from_digits(value)
        return int(value) % self.p

    def _poly_mul_codes(self, a, b):
        da, db = list(self.digits(a)), list(self.digits(b))
        r = _poly_mulmod(_trim(da), _trim(db), list(self.modulus), self.p)
        return self.from_digits(r + [0] * (self.s - len(r)))

    def _build_tables(self):
        q, order = self.q, self.q - 1
        factors = [f for f in range(2, order + 1) if order % f == 0 and is_prime(f)]

        def slow_pow(g, e):
            r, b = 1, g
            while e:
                if e & 1:
                    r = self._poly_mul_codes(r, b)
                b = self._poly_mul_codes(b, b)
                e >>= 1
            return r

        for g in range(self.p, q):
            if all(slow_pow(g, order // f) != 1 for f in factors):
                break
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._poly_mul_codes(x, g)
        exp[order:] = exp[:order]
        self.generator = g
        self._exp, self._log = exp, log

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a, b):
        if self.s == 1:
            return (a + b) % self.p
        p, r, pk = self.p, 0, 1
        for _ in range(self.s):
            r += ((a // pk + b // pk) % p) * pk
            pk *= p
        return r

    def neg(self, a):
        if self.s == 1:
            return -a % self.p
        p, r, pk = self.p, 0, 1
        for _ in range(self.s):
            r += (-(a // pk) % p) * pk
            pk *= p
        return r

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.s == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        if self.s == 1:
            return pow(a, -1, self.p)
        return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if self.s == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def scalar(self, k):
        """Image of the integer ``k`` in the prime subfield."""
        return k % self.p

    def is_square(self, a):
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        if not self.is_square(a):
            raise ValueError(f"{a} is not a square in {self}")
        if a == 0:
            return 0
        if self.s > 1:
            return int(self._exp[int(self._log[a]) // 2])
        return _tonelli(a, self.p)

    def trace(self, a):
        """Absolute trace: sum of the Frobenius conjugates a^{p^k}, k < s."""
        t, x = 0, a
        for _ in range(self.s):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        if t >= self.p:
            raise AssertionError("trace left the prime subfield")
        return t

    def trace_table(self):
        """Array of traces of all q elements, built F_p-linearly from the basis traces."""
        if self._trace_table is None:
            codes = np.arange(self.q, dtype=np.int64)
            out = np.zeros(self.q, dtype=np.int64)
            for k in range(self.s):
                out += ((codes // self.p**k) % self.p) * self.trace(self.p**k)
            self._trace_table = out % self.p
        return self._trace_table

    def elements(self):
        return range(self.q)

    # -- vectorized arithmetic on integer arrays -----------------------------

    def add_arr(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for k in range(self.s):
            pk = self.p**k
            out += (((a // pk) + (b // pk)) % self.p) * pk
        return out

    def neg_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.s == 1:
            return -a % self.p
        out = np.zeros(a.shape, dtype=np.int64)
        for k in range(self.s):
            pk = self.p**k
            out += (-(a // pk) % self.p) * pk
        return out

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.s == 1:
            return a * b % self.p
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def pow_arr(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = a
        for _ in range(e - 1):
            out = self.mul_arr(out, a)
        return out


def _tonelli(a, p):
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@lru_cache(maxsize=None)
def GF(p, s=1):
    """Shared :class:`FiniteField` instance for F_{p^s}."""
    return FiniteField(p, s)


@dataclass(frozen=True)
class FieldElement:
    """An element of a :class:`FiniteField` with operator overloading."""

    field: FiniteField
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not a residue code of {self.field}")

    @property
    def residue(self):
        return self.value

    @property
    def coeffs(self):
        """Polynomial-basis coordinates (c_0, ..., c_{s-1})."""
        return self.field.digits(self.value)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.reduce(other)
        return NotImplemented

    def _wrap(self, v):
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e):
        return self._wrap(self.field.pow(self.value, e))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} in {self.field!r}"


def inv(a):
    """Multiplicative inverse; raises :class:`ZeroInverse` for 0."""
    return FieldElement(a.field, a.field.inv(a.value))


def trace(a):
    """Trace of ``a`` down to the prime field, as an element of F_p."""
    return FieldElement(GF(a.field.p), a.field.trace(a.value))
