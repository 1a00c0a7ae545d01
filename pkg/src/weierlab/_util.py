"""Shared numeric helpers: exact b-adic arithmetic, grid suprema, OLS, atomic IO."""

from __future__ import annotations

import math
import os
import tempfile
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np

__all__ = [
    "badic_offsets_exact",
    "badic_offsets_fraction",
    "floor_scaled_log",
    "ceil_log_ratio",
    "grid_sup",
    "golden_refine",
    "ols_fit",
    "atomic_write_text",
    "substream",
    "digits_of_index",
    "index_of_digits",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def badic_offsets_fraction(x: Fraction, b: int, count: int) -> list[Fraction]:
    """Exact fractional parts of b^n * x for n = 0 .. count-1.

    Works on the exact rational value of ``x``, so repeated multiplication
    never loses digits the way float iteration does.
    """
    num, den = x.numerator % x.denominator, x.denominator
    out = []
    for _ in range(count):
        out.append(Fraction(num, den))
        num = (num * b) % den
    return out


def badic_offsets_exact(x: float, b: int, count: int) -> np.ndarray:
    """Float64 values of frac(b^n x), n = 0 .. count-1, via exact integer arithmetic.

    Every float is a dyadic rational, so frac(b^n x) = (b^n p mod q) / q with
    x = p / q exact.  Each entry is then the correctly rounded float of that
    exact rational.
    """
    if not 0.0 <= x:
        x = x - math.floor(x)
    p, q = float(x).as_integer_ratio()
    p %= q
    out = np.empty(count, dtype=np.float64)
    for n in range(count):
        out[n] = p / q
        p = (p * b) % q
    return out


def _decimal_log(v: Fraction, prec: int = 60) -> Decimal:
    getcontext().prec = prec
    return Decimal(v.numerator).ln() - Decimal(v.denominator).ln()


def floor_scaled_log(t: int, b: int, lam: float) -> int:
    """floor(t * log_b(1/lam)) decided exactly.

    The candidate from 60 digit logs is verified with exact integer
    comparisons of b^q against (1/lam)^t, so boundary cases such as
    b = 4, lam = 0.25 where the product is an exact integer come out right.
    """
    if t == 0:
        return 0
    if t < 0:
        raise ValueError("t must be nonnegative")
    lam_frac = Fraction(lam)
    est = float(Decimal(t) * _decimal_log(Fraction(1, 1) / lam_frac) / _decimal_log(Fraction(b)))
    q = math.floor(est)
    # exact check: floor is the largest q with b^q * lam^t <= 1,
    # i.e. b^q * num^t <= den^t for lam = num / den.
    num, den = lam_frac.numerator, lam_frac.denominator
    lhs_den = den**t
    lhs_num = num**t

    def ok(qq: int) -> bool:
        if qq >= 0:
            return b**qq * lhs_num <= lhs_den
        return lhs_num <= b ** (-qq) * lhs_den

    while not ok(q):
        q -= 1
    while ok(q + 1):
        q += 1
    return q


def ceil_log_ratio(n: int, b: int, lam: float) -> int:
    """Smallest integer m >= 0 with lam^m <= b^(-n); zero for n = 0.

    Exact in the same sense as :func:`floor_scaled_log`.  Ties, where
    lam^m equals b^(-n) exactly, resolve to that m.
    """
    if n == 0:
        return 0
    if n < 0:
        raise ValueError("n must be nonnegative")
    lam_frac = Fraction(lam)
    num, den = lam_frac.numerator, lam_frac.denominator
    # closed form when both are powers of two: lam = 2^-j, b = 2^k
    if num == 1 and (den & (den - 1)) == 0 and (b & (b - 1)) == 0:
        j = den.bit_length() - 1
        k = b.bit_length() - 1
        return -((-n * k) // j)
    est = float(Decimal(n) * _decimal_log(Fraction(b)) / _decimal_log(Fraction(1, 1) / lam_frac))
    m = max(0, math.ceil(est))

    def ok(mm: int) -> bool:
        # lam^mm <= b^-n  <=>  num^mm * b^n <= den^mm
        return num**mm * b**n <= den**mm

    while not ok(m):
        m += 1
    while m > 0 and ok(m - 1):
        m -= 1
    return m


def golden_refine(f, lo: float, hi: float, iters: int = 60) -> tuple[float, float]:
    """Golden section maximization of f on [lo, hi]; returns (argmax, max)."""
    a, b_ = lo, hi
    c = b_ - _GOLDEN * (b_ - a)
    d = a + _GOLDEN * (b_ - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b_, d, fd = d, c, fc
            c = b_ - _GOLDEN * (b_ - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b_ - a)
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def grid_sup(fvec, n_points: int, refine: bool = True, lo: float = 0.0, hi: float = 1.0,
             refine_iters: int = 60) -> tuple[float, float]:
    """Supremum of a scalar field on [lo, hi) estimated from a uniform grid.

    Parameters
    ----------
    fvec : callable
        Vectorized map ndarray -> ndarray of the quantity to maximize
        (callers pass absolute values themselves if needed).
    n_points : int
        Grid resolution; endpoint excluded.
    refine : bool
        When set, one golden section pass runs on the bracket around the
        grid argmax.  Deterministic, fixed iteration count.

    Returns
    -------
    (x_star, sup_value)
    """
    xs = lo + (hi - lo) * np.arange(n_points, dtype=np.float64) / n_points
    vals = np.asarray(fvec(xs), dtype=np.float64)
    i = int(np.argmax(vals))
    best_x, best_v = float(xs[i]), float(vals[i])
    if refine:
        step = (hi - lo) / n_points
        a = max(lo, best_x - step)
        b_ = min(hi, best_x + step)
        xr, vr = golden_refine(lambda t: float(fvec(np.array([t]))[0]), a, b_, refine_iters)
        if vr > best_v:
            best_x, best_v = xr, vr
    return best_x, best_v


def ols_fit(x, y) -> tuple[float, float, float]:
    """Least squares line y ~ a + s x; returns (slope, intercept, slope_stderr)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    if n < 2:
        raise ValueError("need at least two points for a slope")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise ValueError("degenerate abscissa")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = ym - slope * xm
    if n > 2:
        resid = y - (intercept + slope * x)
        stderr = math.sqrt(float(np.sum(resid**2)) / (n - 2) / sxx)
    else:
        stderr = 0.0
    return slope, float(intercept), stderr


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path atomically (temp file in the same directory, then rename)."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for a keyed substream of a root seed.

    Sharded sampling relies on this: stratum i of a run seeded s always
    draws from substream(s, i) no matter how work is split across chunks.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def digits_of_index(idx: int, b: int, n: int) -> tuple[int, ...]:
    """Base-b digits of idx, most significant first, padded to length n."""
    out = [0] * n
    for pos in range(n - 1, -1, -1):
        out[pos] = idx % b
        idx //= b
    return tuple(out)


def index_of_digits(digits, b: int) -> int:
    v = 0
    for d in digits:
        v = v * b + int(d)
    return v
