"""Independent verification machinery for second-order linear ODEs.

Everything here checks other results rather than producing them: an embedded
Dormand-Prince 5(4) integrator with the classical quartic interpolant and a PI
step controller, period-map (monodromy) exponents, pointwise defect residuals
with a scale-aware normalization, and the Abel/Liouville Wronskian reference.
All state is complex; a real problem is just a special case.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParameterError, SpanError, StiffnessError
from .exponent_class import normalize_exponent
from .samples import SolutionSample, TimeSeries

Coefficient = Callable[[float], complex]

TOL_MIN = 1.0e-14
TOL_MAX = 1.0e-3

_MAX_STEPS = 1_000_000

# Dormand-Prince 5(4) tableau
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# difference between the 5th- and embedded 4th-order weights
_E = np.array(
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0]
)
# weights of the extra interpolation polynomial
_D = np.array(
    [
        -12715105075.0 / 11282082432.0,
        0.0,
        87487479700.0 / 32700410799.0,
        -10690763975.0 / 1880347072.0,
        701980252875.0 / 199316789632.0,
        -1453857185.0 / 822651844.0,
        69997945.0 / 29380423.0,
    ]
)

_SAFETY = 0.9
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0


def validate_tolerance(tol: float) -> float:
    tol = float(tol)
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise InvalidParameterError(
            f"tolerance {tol:g} outside supported range [{TOL_MIN:g}, {TOL_MAX:g}]"
        )
    return tol


@dataclass(frozen=True)
class LinearODE:
    """y'' + p(t) y' + q(t) y = f(t); None stands for the zero function."""

    p: Coefficient | None
    q: Coefficient | None
    f: Coefficient | None = None

    def coefficients_at(self, t: float) -> tuple[complex, complex, complex]:
        pv = complex(self.p(t)) if self.p is not None else 0.0 + 0.0j
        qv = complex(self.q(t)) if self.q is not None else 0.0 + 0.0j
        fv = complex(self.f(t)) if self.f is not None else 0.0 + 0.0j
        return pv, qv, fv

    def second_derivative(self, t: float, y: complex, dy: complex) -> complex:
        pv, qv, fv = self.coefficients_at(t)
        return fv - pv * dy - qv * y


@dataclass(frozen=True)
class MonodromyResult:
    """Floquet exponent extracted from the one-period fundamental matrix."""

    mu: complex
    mu_raw: complex
    multiplier: complex
    trace: complex
    det_m: complex
    branch_ambiguous: bool


@dataclass(frozen=True)
class ResidualReport:
    """Scaled defect of a candidate solution on a grid."""

    linf: float
    l2: float
    normalization: float
    verdict: bool | None
    pointwise: np.ndarray = field(repr=False, compare=False)


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(v) ** 2)))


def _initial_step(rhs, t0: float, u0: np.ndarray, f0: np.ndarray, t1: float, tol: float) -> float:
    sc = tol + tol * np.abs(u0)
    d0 = _rms(u0 / sc)
    d1 = _rms(f0 / sc)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t1 - t0)
    f1 = rhs(t0 + h0, u0 + h0 * f0)
    d2 = _rms((f1 - f0) / sc) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, t1 - t0)


class _DenseSegment:
    __slots__ = ("t", "h", "cont")

    def __init__(self, t: float, h: float, cont: np.ndarray):
        self.t = t
        self.h = h
        self.cont = cont

    def __call__(self, tq: float) -> np.ndarray:
        theta = (tq - self.t) / self.h
        c = self.cont
        return c[0] + theta * (c[1] + (1.0 - theta) * (c[2] + theta * (c[3] + (1.0 - theta) * c[4])))


def _integrate_raw(rhs, t0: float, t1: float, u0: np.ndarray, tol: float, keep_dense: bool):
    """Adaptive DOPRI5 sweep; returns accepted times, dense segments, final state, stats."""
    t = t0
    u = np.asarray(u0, dtype=complex)
    k1 = rhs(t, u)
    nfev = 2  # hinit's trial evaluation counts too
    h = _initial_step(rhs, t0, u, k1, t1, tol)
    err_old = 1e-4
    last_rejected = False
    times = [t0]
    segments: list[_DenseSegment] = []
    states = [u.copy()]
    n_accept = 0
    n_reject = 0
    while t < t1:
        if n_accept + n_reject > _MAX_STEPS:
            raise StiffnessError(
                f"step budget exhausted at t={t:.6g}", t_last=t, state_last=u.copy()
            )
        h = min(h, t1 - t)
        if h <= 16.0 * np.finfo(float).eps * max(abs(t), 1.0):
            raise StiffnessError(
                f"step size underflow at t={t:.6g}", t_last=t, state_last=u.copy()
            )
        k = [k1]
        for i in range(1, 7):
            ui = u + h * sum(aij * kj for aij, kj in zip(_A[i], k))
            k.append(rhs(t + _C[i] * h, ui))
        nfev += 6
        u_new = ui  # stage 7 reuses the 5th-order weights, so its state is the step result
        err_vec = h * sum(e * kj for e, kj in zip(_E, k))
        sc = tol + tol * np.maximum(np.abs(u), np.abs(u_new))
        err = _rms(err_vec / sc)
        if err <= 1.0:
            if keep_dense:
                delta = u_new - u
                cont = np.empty((5, u.shape[0]), dtype=complex)
                cont[0] = u
                cont[1] = delta
                cont[2] = h * k[0] - delta
                cont[3] = delta - h * k[6] - cont[2]
                cont[4] = h * sum(d * kj for d, kj in zip(_D, k))
                segments.append(_DenseSegment(t, h, cont))
            t = t + h
            u = u_new
            k1 = k[6]
            times.append(t)
            states.append(u.copy())
            n_accept += 1
            fac = _SAFETY * err ** (-_ALPHA) * err_old ** _BETA if err > 0.0 else _FAC_MAX
            fac = min(_FAC_MAX, max(_FAC_MIN, fac))
            if last_rejected:
                fac = min(fac, 1.0)
            h *= fac
            err_old = max(err, 1e-4)
            last_rejected = False
        else:
            h *= max(_FAC_MIN, _SAFETY * err ** (-_ALPHA))
            n_reject += 1
            last_rejected = True
    stats = {"steps": n_accept, "rejected": n_reject, "rhs_evaluations": nfev}
    return np.array(times), segments, np.array(states), stats


def integrate(
    ode: LinearODE,
    y0: complex,
    dy0: complex,
    span: tuple[float, float],
    tol: float,
    t_eval: Sequence[float] | None = None,
) -> TimeSeries:
    """Solve the initial value problem over span, adaptively.

    Without t_eval the accepted step points form the grid; with t_eval the
    dense interpolant is sampled there instead.  The second derivative is
    recovered from the equation itself, not differentiated numerically.
    """
    tol = validate_tolerance(tol)
    t0, t1 = float(span[0]), float(span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise SpanError(f"span must be a finite increasing pair, got {span!r}")

    def rhs(t: float, u: np.ndarray) -> np.ndarray:
        pv, qv, fv = ode.coefficients_at(t)
        return np.array([u[1], fv - pv * u[1] - qv * u[0]])

    u0 = np.array([complex(y0), complex(dy0)])
    want_dense = t_eval is not None
    times, segments, states, stats = _integrate_raw(rhs, t0, t1, u0, tol, keep_dense=want_dense)
    if t_eval is None:
        grid = times
        ys = states[:, 0]
        dys = states[:, 1]
    else:
        grid = np.asarray(t_eval, dtype=float)
        if grid.ndim != 1 or len(grid) == 0:
            raise InvalidParameterError("t_eval must be a non-empty 1-d sequence")
        if np.any(np.diff(grid) <= 0.0):
            raise InvalidParameterError("t_eval must be strictly increasing")
        slack = 1e-12 * (t1 - t0)
        if grid[0] < t0 - slack or grid[-1] > t1 + slack:
            raise InvalidParameterError("t_eval must lie within the integration span")
        ys = np.empty(len(grid), dtype=complex)
        dys = np.empty(len(grid), dtype=complex)
        lefts = np.array([seg.t for seg in segments])
        idx = np.clip(np.searchsorted(lefts, grid, side="right") - 1, 0, len(segments) - 1)
        for j, (tq, i) in enumerate(zip(grid, idx)):
            val = segments[int(i)](min(max(tq, t0), t1))
            ys[j] = val[0]
            dys[j] = val[1]
    d2ys = np.array([ode.second_derivative(t, y, dy) for t, y, dy in zip(grid, ys, dys)])
    meta = {"method": "dormand-prince-5(4)", "tolerance": tol, **stats}
    return TimeSeries(grid=grid, y=ys, dy=dys, d2y=d2ys, meta=meta)


def monodromy_exponent(ode: LinearODE, period: float, tol: float) -> MonodromyResult:
    """Floquet exponent from direct integration of both fundamental columns.

    The larger-modulus eigenvalue rho of the period map gives
    mu_raw = Log(rho)/period; mu is its canonical class representative.
    branch_ambiguous flags rho so close to the negative real axis that the
    principal log's imaginary part is not trustworthy.
    """
    tol = validate_tolerance(tol)
    if ode.f is not None:
        raise InvalidParameterError("monodromy requires a homogeneous equation")
    period = float(period)
    if not (math.isfinite(period) and period > 0.0):
        raise SpanError(f"period must be finite and positive, got {period!r}")

    def rhs(t: float, u: np.ndarray) -> np.ndarray:
        pv, qv, _ = ode.coefficients_at(t)
        return np.array(
            [u[1], -pv * u[1] - qv * u[0], u[3], -pv * u[3] - qv * u[2]]
        )

    u0 = np.array([1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j])
    _, _, states, _ = _integrate_raw(rhs, 0.0, period, u0, tol, keep_dense=False)
    y1, dy1, y2, dy2 = states[-1]
    trace = y1 + dy2
    det_m = y1 * dy2 - y2 * dy1
    disc = cmath.sqrt(trace * trace - 4.0 * det_m)
    # add the root branch that avoids cancellation, recover the other via the product
    if (trace.conjugate() * disc).real >= 0.0:
        r_big = (trace + disc) / 2.0
    else:
        r_big = (trace - disc) / 2.0
    if r_big == 0.0:
        raise InvalidParameterError("degenerate period map: both multipliers vanish")
    r_other = det_m / r_big
    rho = r_big if abs(r_big) >= abs(r_other) else r_other
    mu_raw = cmath.log(rho) / period
    on_cut = bool(rho.real < 0.0 and abs(rho.imag) <= 1e-9 * abs(rho))
    im_modulus = 2.0 * math.pi / period
    return MonodromyResult(
        mu=normalize_exponent(mu_raw, im_modulus=im_modulus),
        mu_raw=mu_raw,
        multiplier=rho,
        trace=trace,
        det_m=det_m,
        branch_ambiguous=on_cut,
    )


def residual(
    ode: LinearODE,
    candidate: Callable[[float], SolutionSample],
    grid: Sequence[float],
    tol: float | None = None,
) -> ResidualReport:
    """Pointwise defect of a candidate solution, scaled by the largest term.

    The normalization max(1, |y''|, |p y'|, |q y|, |f|) (each maximized over
    the grid) keeps the report meaningful when the solution itself is huge or
    tiny; verdict stays None when no tolerance is given.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise InvalidParameterError("grid must be a non-empty 1-d sequence")
    defect = np.empty(len(grid), dtype=complex)
    biggest = 1.0
    for i, t in enumerate(grid):
        s = candidate(float(t))
        pv, qv, fv = ode.coefficients_at(float(t))
        defect[i] = s.d2y + pv * s.dy + qv * s.y - fv
        biggest = max(biggest, abs(s.d2y), abs(pv * s.dy), abs(qv * s.y), abs(fv))
    linf = float(np.max(np.abs(defect))) / biggest
    l2 = _rms(defect) / biggest
    verdict = None if tol is None else bool(linf <= tol)
    return ResidualReport(linf=linf, l2=l2, normalization=biggest, verdict=verdict, pointwise=defect)


def wronskian_abel(p: Coefficient | None, w0: complex, grid: Sequence[float]) -> np.ndarray:
    """Abel/Liouville reference W(t) = W(t0) exp(-int p) on an ascending grid.

    The integral is accumulated interval by interval with 10-point
    Gauss-Legendre quadrature.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise InvalidParameterError("grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0.0):
        raise InvalidParameterError("grid must be strictly increasing")
    out = np.empty(len(grid), dtype=complex)
    out[0] = complex(w0)
    if p is None:
        out[:] = complex(w0)
        return out
    nodes, weights = np.polynomial.legendre.leggauss(10)
    acc = 0.0 + 0.0j
    for i in range(1, len(grid)):
        a, b = grid[i - 1], grid[i]
        mid = 0.5 * (a + b)
        rad = 0.5 * (b - a)
        acc += rad * sum(w * complex(p(mid + rad * x)) for w, x in zip(weights, nodes))
        out[i] = complex(w0) * cmath.exp(-acc)
    return out
