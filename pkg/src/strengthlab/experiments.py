"""Scans over homogeneous polynomial families, identity verification, and
empirical tables relating derivative ranks to ranks.

All randomness comes from ``numpy.random.Philox`` keyed by the caller's
seed, so outputs are functions of (parameters, seed) only.
"""
import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _config
from .analytic import gowers_norm, gowers_recursive, gowers_top_exact
from .calculus import diagonal_reconstruct, multilinearize
from .errors import BudgetExceeded, CharTooSmall, DegreeTooSmall, MixedParameters, UsageError
from .field import GF
from .poly import (
    Polynomial,
    delta,
    directional_derivative,
    from_json,
    homogeneous_part,
    monomials,
    to_json,
    to_json_obj,
)
from .rank import derivative_rank_profile, exhaustive_rank, projective_vectors, quadratic_rank_value

GENERATOR = "numpy.random.Generator(numpy.random.Philox(key=seed)).integers(0, q, size=#monomials)"
DEFAULT_SCAN_BUDGET = 10**6
DEFAULT_GOWERS_BUDGET = 10**10


def make_rng(seed):
    return np.random.Generator(np.random.Philox(key=seed))


def _homogeneous(fld, n, d, coeffs):
    return Polynomial._raw(n, fld, dict(zip(monomials(n, d), (int(c) for c in coeffs))))


def random_homogeneous(fld, n, d, rng, nonzero=True):
    mons = monomials(n, d)
    while True:
        coeffs = rng.integers(0, fld.q, size=len(mons))
        if not nonzero or coeffs.any():
            return _homogeneous(fld, n, d, coeffs)


def random_lower_degree(fld, n, d, rng):
    """A random polynomial of degree <= d - 1 (all monomials, constant included)."""
    mons = [m for k in range(d) for m in monomials(n, k)]
    coeffs = rng.integers(0, fld.q, size=len(mons))
    return Polynomial._raw(n, fld, dict(zip(mons, (int(c) for c in coeffs))))


def _check_params(p, n, d, min_degree):
    fld = GF(p)
    if d < min_degree:
        raise DegreeTooSmall(f"degree must be >= {min_degree}, got {d}")
    if p <= d:
        raise CharTooSmall(f"characteristic {p} must exceed the degree {d}")
    if n < 1:
        raise UsageError("need at least one variable")
    return fld


# --- scan records ----------------------------------------------------------------


@dataclass(frozen=True)
class ScanRecord:
    p: int
    n: int
    d: int
    index: int
    seed: object
    polynomial: Polynomial
    max_derivative_rank: int
    rank: int
    gowers_top: Fraction

    @property
    def index_or_seed(self):
        return str(self.index) if self.seed is None else f"{self.seed}:{self.index}"

    def csv_row(self):
        return [
            self.p, self.n, self.d, self.index_or_seed, to_json(self.polynomial),
            self.max_derivative_rank, self.rank, self.gowers_top.numerator, self.gowers_top.denominator,
        ]

    def to_json_obj(self):
        return {
            "p": self.p, "n": self.n, "d": self.d, "index_or_seed": self.index_or_seed,
            "poly": to_json_obj(self.polynomial), "max_deriv_rank": self.max_derivative_rank,
            "rank": self.rank,
            "gowers_top": {"num": self.gowers_top.numerator, "den": self.gowers_top.denominator},
        }


CSV_HEADER = ["p", "n", "d", "index_or_seed", "poly_json", "max_deriv_rank", "rank", "gowers_top_num", "gowers_top_den"]


def make_record(p, n, d, index, seed, coeffs):
    fld = GF(p)
    P = _homogeneous(fld, n, d, coeffs)
    profile = derivative_rank_profile(P, d=d)
    r = exhaustive_rank(P, d=d, certify=False).value
    return ScanRecord(p, n, d, index, seed, P, profile.max_rank, r, gowers_top_exact(P, d=d))


def _record_task(args):
    return make_record(*args)


def _digits(index, q, k):
    return [(index // q**j) % q for j in range(k)]


def scan(p, n, d, mode="exhaustive", budget=DEFAULT_SCAN_BUDGET, seed=None, samples=10_000, threads=None):
    """One :class:`ScanRecord` per nonzero homogeneous degree-d polynomial.

    ``exhaustive`` walks every coefficient vector (index = base-q number whose
    j-th digit is the coefficient of the j-th graded-lex monomial); ``sample``
    draws ``samples`` vectors from the seeded generator, skipping zeros.
    """
    fld = _check_params(p, n, d, 3)
    k = len(monomials(n, d))
    if mode == "exhaustive":
        space = fld.q**k
        if space > budget:
            raise BudgetExceeded(f"exhaustive scan covers {space} polynomials, budget is {budget}")
        tasks = [(p, n, d, i, None, _digits(i, fld.q, k)) for i in range(1, space)]
    elif mode == "sample":
        if seed is None:
            raise UsageError("sample mode needs an explicit seed")
        rng = make_rng(seed)
        tasks = []
        for i in range(samples):
            coeffs = rng.integers(0, fld.q, size=k)
            if coeffs.any():
                tasks.append((p, n, d, i, seed, [int(c) for c in coeffs]))
    else:
        raise UsageError(f"unknown scan mode {mode!r}")
    threads = threads or _config.threads()
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_record_task, tasks, chunksize=max(1, len(tasks) // (8 * threads))))
    return [make_record(*t) for t in tasks]


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.csv_row())
    return buf.getvalue()


def records_from_csv(text):
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        key = row["index_or_seed"]
        seed, index = (None, int(key)) if ":" not in key else (int(key.split(":")[0]), int(key.split(":")[1]))
        out.append(ScanRecord(
            int(row["p"]), int(row["n"]), int(row["d"]), index, seed, from_json(row["poly_json"]),
            int(row["max_deriv_rank"]), int(row["rank"]),
            Fraction(int(row["gowers_top_num"]), int(row["gowers_top_den"])),
        ))
    return out


# --- empirical table ---------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalCTable:
    """Rows keyed by r: the largest rank among records whose derivative ranks are all <= r.

    ``rank_buckets`` gives, per rank value r, the minimum exact U_d quantity
    over records of rank <= r (and its 2^d-th root).
    """

    p: object
    n: object
    d: object
    rows: tuple
    rank_buckets: tuple

    def to_json_obj(self):
        return {
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "note": "observed values only: lower bounds for any valid bound function, not the function itself",
            "rows": list(self.rows),
            "rank_buckets": list(self.rank_buckets),
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "max_rank", "count", "witness_index", "witness_poly"])
        for row in self.rows:
            w.writerow([row["r"], row["max_rank"], row["count"], row["witness"]["index_or_seed"],
                        json.dumps(row["witness"]["poly"])])
        return buf.getvalue()


def empirical_C(records):
    if not records:
        return EmpiricalCTable(None, None, None, (), ())
    params = {(r.p, r.n, r.d) for r in records}
    if len(params) != 1:
        raise MixedParameters(f"records mix parameters {sorted(params)}")
    p, n, d = params.pop()
    rows = []
    lo = min(r.max_derivative_rank for r in records)
    hi = max(r.max_derivative_rank for r in records)
    for r in range(lo, hi + 1):
        bucket = [rec for rec in records if rec.max_derivative_rank <= r]
        best = max(bucket, key=lambda rec: rec.rank)  # first record reaching the max
        rows.append({
            "r": r, "max_rank": best.rank, "count": len(bucket),
            "witness": {"index_or_seed": best.index_or_seed, "poly": to_json_obj(best.polynomial)},
        })
    buckets = []
    for r in sorted({rec.rank for rec in records}):
        inside = [rec for rec in records if rec.rank <= r]
        low = min(inside, key=lambda rec: rec.gowers_top)
        buckets.append({
            "rank": r,
            "count_equal": sum(rec.rank == r for rec in records),
            "count_at_most": len(inside),
            "min_gowers_top": {"num": low.gowers_top.numerator, "den": low.gowers_top.denominator},
            "min_gowers_norm": float(low.gowers_top) ** (1.0 / 2**d),
            "witness": {"index_or_seed": low.index_or_seed, "poly": to_json_obj(low.polynomial)},
        })
    return EmpiricalCTable(p, n, d, tuple(rows), tuple(buckets))


# --- identity verification -----------------------------------------------------------

CHECKS = ("diagonal_reconstruction", "gowers_recursion", "gowers_top", "delta_top_rank", "phase_invariance")


def _rank_value(P, d):
    if P.is_zero():
        return 0
    if d == 2:
        return quadratic_rank_value(P)
    return exhaustive_rank(P, d=d, certify=False).value


def _check_trial(P, d, rng, budget):
    """Run every check on one polynomial; returns ``{check: (ok, detail)}``."""
    out = {}
    back = diagonal_reconstruct(multilinearize(P, d))
    out["diagonal_reconstruction"] = (back == P, {"reconstructed": to_json_obj(back)})

    direct = gowers_norm(P, d, budget=budget)
    rec = gowers_recursive(P, d, budget=budget)
    out["gowers_recursion"] = (
        direct.counts == rec.counts,
        {"direct": list(direct.counts.counts), "recursive": list(rec.counts.counts)},
    )

    exact = gowers_top_exact(P, d=d, budget=budget)
    out["gowers_top"] = (
        abs(float(exact) - direct.value) <= direct.error_bound,
        {"exact": [exact.numerator, exact.denominator], "float": direct.value},
    )

    bad = None
    for t in projective_vectors(P.field.q, P.n):
        Pt = directional_derivative(P, t)
        if Pt.is_zero():
            continue
        top = homogeneous_part(delta(P, t), d - 1)
        a, b = _rank_value(top, d - 1), _rank_value(Pt, d - 1)
        if a != b:
            bad = {"t": list(t), "rank_delta_top": a, "rank_derivative": b}
            break
    out["delta_top_rank"] = (bad is None, bad)

    Q = random_lower_degree(P.field, P.n, d, rng)
    shifted = gowers_norm(P + Q, d, budget=budget)
    out["phase_invariance"] = (
        shifted.counts == direct.counts,
        {"lower_degree_term": to_json_obj(Q), "counts": list(shifted.counts.counts)},
    )
    return out


def verify_identities(p, n, d, trials, seed, budget=DEFAULT_GOWERS_BUDGET):
    """Pass/fail counts for the exact identities on ``trials`` random homogeneous polynomials."""
    # the rank comparison needs derivatives of degree >= 2
    fld = _check_params(p, n, d, 3)
    need = fld.q ** (n * (d + 1))
    if trials and need > budget:
        raise BudgetExceeded(f"U_{d} enumeration needs {need} tuples per polynomial, budget is {budget}")
    rng = make_rng(seed)
    counts = {c: {"passed": 0, "failed": 0} for c in CHECKS}
    first_failure = None
    for trial in range(trials):
        P = random_homogeneous(fld, n, d, rng)
        for name, (ok, detail) in _check_trial(P, d, rng, budget).items():
            counts[name]["passed" if ok else "failed"] += 1
            if not ok and first_failure is None:
                first_failure = {
                    "check": name, "trial": trial, "seed": seed,
                    "params": {"p": p, "n": n, "d": d}, "poly": to_json_obj(P), "detail": detail,
                }
    return {
        "params": {"p": p, "n": n, "d": d, "trials": trials, "seed": seed},
        "generator": GENERATOR,
        "checks": counts,
        "all_passed": first_failure is None,
        "first_failure": first_failure,
    }
