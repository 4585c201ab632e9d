"""Special functions and root solvers used by the interval methods.

Only the standard library ``math`` module is used here so that interval
endpoints are reproducible bit for bit across platforms and installs.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

from .errors import BracketError, ConvergenceError, DomainError

ROOT_TOL = 1e-12
BETA_QUANTILE_MAX_ITER = 200
CONTINUED_FRACTION_MAX_ITER = 5000

_EPS = 2.220446049250313e-16
_FPMIN = 1e-300
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Quartic:
    """Real quartic c4*x**4 + c3*x**3 + c2*x**2 + c1*x + c0."""

    c4: float
    c3: float
    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.c4, self.c3, self.c2, self.c1, self.c0)):
            raise DomainError(f"quartic coefficients must be finite: {self}")

    def __call__(self, x: float) -> float:
        return (((self.c4 * x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0

    @classmethod
    def wilson_direct(cls, k: float, f1_hat: float) -> 'Quartic':
        """Score-test quartic in F1 whose two roots in [0, 1] bound the interval."""
        return cls(
            c4=k,
            c3=-5.0 * k,
            c2=2.0 * (4.0 * k + 1.0),
            c1=-4.0 * (k + f1_hat),
            c0=2.0 * f1_hat * f1_hat,
        )


def normal_quantile(p: float) -> float:
    """Inverse of the standard normal CDF.

    Starts from Wichura's AS241 rational approximation and polishes with
    Newton steps on ``erfc``; the upper half is mirrored from the lower tail
    so that ``normal_quantile(1 - p) == -normal_quantile(p)``.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"normal_quantile needs 0 < p < 1, got {p!r}")
    if p > 0.5:
        return -_lower_normal_quantile(1.0 - p)
    return _lower_normal_quantile(p)


def _lower_normal_quantile(p: float) -> float:
    # p <= 0.5, result <= 0
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2509.0809287301226727 * r + 33430.575583588128105) * r
                    + 67265.770927008700853) * r + 45921.953931549871457) * r
                  + 13731.693765509461125) * r + 1971.5909503065514427) * r
                + 133.14166789178437745) * r + 3.387132872796366608)
        den = (((((((5226.495278852545925 * r + 28729.085735721942674) * r
                    + 39307.89580009271061) * r + 21213.794301586595867) * r
                  + 5394.1960214247511077) * r + 687.1870074920579083) * r
                + 42.313330701600911252) * r + 1.0)
        z = q * num / den
    else:
        r = math.sqrt(-math.log(p))
        if r <= 5.0:
            r -= 1.6
            num = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r
                        + 0.24178072517745061177) * r + 1.27045825245236838258) * r
                      + 3.64784832476320460504) * r + 5.7694972214606914055) * r
                    + 4.6303378461565452959) * r + 1.42343711074968357734)
            den = (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r
                        + 0.0151986665636164571966) * r + 0.14810397642748007459) * r
                      + 0.68976733498510000455) * r + 1.6763848301838038494) * r
                    + 2.05319162663775882187) * r + 1.0)
        else:
            r -= 5.0
            num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                        + 0.0012426609473880784386) * r + 0.026532189526576123093) * r
                      + 0.29656057182850489123) * r + 1.7848265399172913358) * r
                    + 5.4637849111641143699) * r + 6.6579046435011037772)
            den = (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r
                        + 1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r
                      + 0.0148753612908506148525) * r + 0.13692988092273580531) * r
                    + 0.59983220655588793769) * r + 1.0)
        z = -num / den

    for _ in range(3):
        density = math.exp(-0.5 * z * z - _HALF_LOG_2PI)
        if density == 0.0:
            break
        step = (0.5 * math.erfc(-z / math.sqrt(2.0)) - p) / density
        z -= step
        if abs(step) <= _EPS * max(1.0, abs(z)):
            break
    return z


def _stirling_correction(x: float) -> float:
    """lgamma(x) minus its Stirling main term (x - 1/2) log x - x + log(2 pi)/2."""
    if x >= 15.0:
        x2 = x * x
        return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x
    return math.lgamma(x) - ((x - 0.5) * math.log(x) - x + _HALF_LOG_2PI)


def _log_power_ratio(weight: float, ratio: float, delta: float) -> float:
    # weight * log(ratio), where delta = ratio - 1 computed without cancellation
    if abs(delta) < 0.5:
        return weight * math.log1p(delta)
    return weight * math.log(ratio)


def _log_beta_prefix(x: float, a: float, b: float) -> float:
    """log of x**a * (1 - x)**b / B(a, b) for 0 < x < 1.

    Written around the mode so that large a and b do not cancel catastrophically.
    """
    total = a + b
    shift = total * x - a
    lead = _log_power_ratio(a, x * total / a, shift / a)
    trail = _log_power_ratio(b, (1.0 - x) * total / b, -shift / b)
    return (lead + trail + 0.5 * math.log(a * b / total) - _HALF_LOG_2PI
            + _stirling_correction(total) - _stirling_correction(a) - _stirling_correction(b))


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """Modified Lentz evaluation of the incomplete beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, CONTINUED_FRACTION_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge for x={x!r}, a={a!r}, b={b!r}"
    )


def _check_beta_shape(a: float, b: float):
    if not (math.isfinite(a) and math.isfinite(b) and a > 0.0 and b > 0.0):
        raise DomainError(f"beta shape parameters must be finite and positive, got a={a!r}, b={b!r}")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b), the Beta(a, b) CDF."""
    _check_beta_shape(a, b)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"regularized_incomplete_beta needs 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    prefix = math.exp(_log_beta_prefix(x, a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return prefix * _beta_continued_fraction(x, a, b) / a
    return 1.0 - prefix * _beta_continued_fraction(1.0 - x, b, a) / b


def beta_density(x: float, a: float, b: float) -> float:
    """Beta(a, b) probability density at x."""
    _check_beta_shape(a, b)
    if not (0.0 < x < 1.0):
        return 0.0
    return math.exp(_log_beta_prefix(x, a, b)) / (x * (1.0 - x))


def _beta_quantile_guess(p: float, a: float, b: float) -> float:
    """Starting point for the quantile search (Abramowitz & Stegun 26.5.22)."""
    if a >= 1.0 and b >= 1.0:
        pp = p if p < 0.5 else 1.0 - p
        t = math.sqrt(-2.0 * math.log(pp))
        x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t
        if p < 0.5:
            x = -x
        al = (x * x - 3.0) / 6.0
        h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0))
        w = (x * math.sqrt(al + h) / h
             - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h)))
        guess = a / (a + b * math.exp(min(2.0 * w, 700.0)))
    else:
        lna = math.log(a / (a + b))
        lnb = math.log(b / (a + b))
        t = math.exp(a * lna) / a
        u = math.exp(b * lnb) / b
        w = t + u
        if p < t / w:
            guess = (a * w * p) ** (1.0 / a)
        else:
            guess = 1.0 - (b * w * (1.0 - p)) ** (1.0 / b)
    if not (0.0 < guess < 1.0):
        guess = 0.5
    return guess


def beta_quantile(p: float, a: float, b: float) -> float:
    """Inverse of I_x(a, b) in x.

    Newton iteration on the CDF, safeguarded by a shrinking bisection bracket.
    Raises ConvergenceError instead of returning an unconverged value.
    """
    _check_beta_shape(a, b)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"beta_quantile needs 0 <= p <= 1, got {p!r}")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0

    lo, hi = 0.0, 1.0
    x = _beta_quantile_guess(p, a, b)
    for iteration in range(BETA_QUANTILE_MAX_ITER):
        err = regularized_incomplete_beta(x, a, b) - p
        if err == 0.0:
            return x
        if err < 0.0:
            lo = x
        else:
            hi = x

        density = beta_density(x, a, b)
        candidate = x - err / density if density > 0.0 and math.isfinite(density) else math.nan
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)

        if abs(candidate - x) <= 4.0 * _EPS * x or hi - lo <= 4.0 * _EPS * hi:
            logging.debug(f"beta_quantile({p}, {a}, {b}) converged in {iteration + 1} iteration(s)")
            return candidate
        x = candidate

    raise ConvergenceError(
        f"beta_quantile did not converge in {BETA_QUANTILE_MAX_ITER} iterations for p={p!r}, a={a!r}, b={b!r}"
    )


def find_bracketed_root(f: Callable[[float], float], lo: float, hi: float,
                        tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    """Root of ``f`` inside [lo, hi] by secant steps with bisection fallback.

    A bisection step is forced whenever the previous step failed to halve the
    bracket, so the bracket width shrinks at least geometrically.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise DomainError(f"invalid bracket [{lo!r}, {hi!r}]")
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(f"f has the same sign at both ends of [{lo!r}, {hi!r}]: {f_lo!r}, {f_hi!r}")

    a, b, fa, fb = lo, hi, f_lo, f_hi
    force_bisection = False
    for _ in range(max_iter):
        width = b - a
        if width <= tol:
            return a if abs(fa) <= abs(fb) else b

        x = a + 0.5 * width
        if not force_bisection:
            secant = b - fb * (b - a) / (fb - fa)
            if a < secant < b:
                x = secant

        fx = f(x)
        if abs(fx) <= tol:
            return x
        if (fx > 0.0) == (fa > 0.0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        force_bisection = (b - a) > 0.5 * width

    raise ConvergenceError(f"find_bracketed_root did not converge in {max_iter} iterations on [{lo!r}, {hi!r}]")
