"""Special functions and adaptive quadrature used by every model module.

Scalar, dependency-free implementations.  Accuracy targets here are far
tighter than the model-versus-simulation tolerances applied elsewhere, so
quadrature noise never masquerades as model error.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import ConvergenceError, DomainError

_EPS = math.ulp(1.0)
_MAX_SPECIAL_ITER = 600


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and budget knobs for the adaptive integrators.

    Convergence is declared when the accumulated error estimate drops below
    ``max(abs_tol, rel_tol * |value|)``.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 60

    def __post_init__(self):
        if not (math.isfinite(self.abs_tol) and self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be finite and > 0, got {self.abs_tol!r}")
        if not (math.isfinite(self.rel_tol) and self.rel_tol > 0.0):
            raise DomainError(f"rel_tol must be finite and > 0, got {self.rel_tol!r}")
        if self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions!r}"
            )


class QuadResult(NamedTuple):
    value: float
    err_est: float


def erf(x: float) -> float:
    """Error function, with strict domain checking on top of the libm routine."""
    if not math.isfinite(x):
        raise DomainError(f"erf requires a finite argument, got {x!r}")
    return math.erf(x)


def reg_lower_gamma(k: float, x: float) -> float:
    """Regularized lower incomplete gamma P(k, x), the CDF of Gamma(k, 1).

    Ascending series for x < k + 1, Lentz continued fraction for the
    complementary function otherwise; the split keeps both expansions in
    their fast-converging regimes.
    """
    if not (math.isfinite(k) and math.isfinite(x)):
        raise DomainError(f"reg_lower_gamma requires finite arguments, got ({k!r}, {x!r})")
    if k <= 0.0:
        raise DomainError(f"shape must be > 0, got {k!r}")
    if x < 0.0:
        raise DomainError(f"argument must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0

    log_front = k * math.log(x) - x - math.lgamma(k)

    if x < k + 1.0:
        term = 1.0 / k
        total = term
        denom = k
        for _ in range(_MAX_SPECIAL_ITER):
            denom += 1.0
            term *= x / denom
            total += term
            if abs(term) < abs(total) * _EPS:
                return total * math.exp(log_front)
        raise ConvergenceError(
            f"incomplete-gamma series stalled at (k={k!r}, x={x!r})",
            value=total * math.exp(log_front),
            err_est=abs(term) * math.exp(log_front),
        )

    # Continued fraction for Q(k, x); x >= k + 1 guarantees b0 > 0.
    tiny = 1e-300
    b = x + 1.0 - k
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_SPECIAL_ITER):
        an = -i * (i - k)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return 1.0 - math.exp(log_front) * h
    raise ConvergenceError(
        f"incomplete-gamma continued fraction stalled at (k={k!r}, x={x!r})",
        value=1.0 - math.exp(log_front) * h,
        err_est=abs(delta - 1.0),
    )


# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
)
_WGK = (
    0.0229353220105292,
    0.0630920926299786,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
)
_WGK_CENTER = 0.2094821410847278
_WG = (0.1294849661688697, 0.2797053914892766, 0.3818300505051189)
_WG_CENTER = 0.4179591836734694


def _eval(f: Callable[[float], float], x: float) -> float:
    y = f(x)
    if not math.isfinite(y):
        raise DomainError(f"integrand returned non-finite value {y!r} at x={x!r}")
    return y


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod panel.  Returns (integral, error estimate).

    The error estimate follows QUADPACK: the raw Kronrod-minus-Gauss gap is
    sharpened through the integrand's mean deviation and floored at the
    roundoff level of the absolute integral, so it stays a conservative
    bound for smooth panels without collapsing to zero.
    """
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)

    fc = _eval(f, center)
    resk = _WGK_CENTER * fc
    resg = _WG_CENTER * fc
    resabs = _WGK_CENTER * abs(fc)
    values = [(fc, fc)]
    for i in range(7):
        dx = half * _XGK[i]
        f1 = _eval(f, center - dx)
        f2 = _eval(f, center + dx)
        values.append((f1, f2))
        resk += _WGK[i] * (f1 + f2)
        resabs += _WGK[i] * (abs(f1) + abs(f2))
        if i % 2 == 1:
            resg += _WG[i // 2] * (f1 + f2)

    mean = 0.5 * resk
    resasc = _WGK_CENTER * abs(fc - mean)
    for i in range(7):
        f1, f2 = values[i + 1]
        resasc += _WGK[i] * (abs(f1 - mean) + abs(f2 - mean))

    value = resk * half
    resabs *= half
    resasc *= half
    err = abs((resk - resg) * half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return value, max(err, 50.0 * _EPS * resabs)


def integrate_finite(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod integration of ``f`` over [a, b].

    The worst panel (by error estimate) is bisected until the summed
    estimate meets the tolerance.  Kronrod nodes are interior, so ``f`` is
    never evaluated at the endpoints; integrable endpoint singularities are
    handled by subdivision alone.

    Raises ConvergenceError (carrying the best estimate) if the subdivision
    budget runs out first.
    """
    if spec is None:
        spec = QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"integration limits must be finite, got [{a!r}, {b!r}]")
    if a > b:
        raise DomainError(f"integration limits must satisfy a <= b, got [{a!r}, {b!r}]")
    if a == b:
        return QuadResult(0.0, 0.0)

    value, err = _gk15(f, a, b)
    # Heap entries: (-err, tiebreak, a, b, value, err); all entries are live.
    heap = [(-err, 0, a, b, value, err)]
    counter = 1
    total_value = value
    total_err = err

    for _ in range(spec.max_subdivisions):
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total_value)):
            break
        _, _, pa, pb, pvalue, perr = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        if not (pa < mid < pb):
            # Panel already at floating-point resolution; park it.
            heapq.heappush(heap, (0.0, counter, pa, pb, pvalue, perr))
            counter += 1
            continue
        lval, lerr = _gk15(f, pa, mid)
        rval, rerr = _gk15(f, mid, pb)
        total_value += lval + rval - pvalue
        total_err += lerr + rerr - perr
        heapq.heappush(heap, (-lerr, counter, pa, mid, lval, lerr))
        heapq.heappush(heap, (-rerr, counter + 1, mid, pb, rval, rerr))
        counter += 2

    # Re-sum from the live panels; incremental updates drift over many splits.
    total_value = math.fsum(entry[4] for entry in heap)
    total_err = math.fsum(entry[5] for entry in heap)
    if total_err > max(spec.abs_tol, spec.rel_tol * abs(total_value)):
        raise ConvergenceError(
            f"quadrature on [{a!r}, {b!r}] did not reach tolerance within "
            f"{spec.max_subdivisions} subdivisions (err_est={total_err:.3e})",
            value=total_value,
            err_est=total_err,
        )
    return QuadResult(total_value, total_err)


def integrate_semi_infinite(
    f: Callable[[float], float],
    spec: QuadratureSpec | None = None,
) -> QuadResult:
    """Integrate ``f`` over [0, inf) via the rational map s = t/(1-t).

    The Jacobian 1/(1-t)^2 turns the problem into a finite one on [0, 1);
    no truncation point is needed because the map compresses the tail.
    Requires the integrand to decay fast enough that f(s)/(1-t)^2 stays
    bounded, which holds for anything decaying faster than 1/s^2.
    """

    def mapped(t: float) -> float:
        if t >= 1.0:
            return 0.0
        one_minus = 1.0 - t
        return f(t / one_minus) / (one_minus * one_minus)

    return integrate_finite(mapped, 0.0, 1.0, spec)
