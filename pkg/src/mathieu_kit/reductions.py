"""Changes of variables taking the catalogued source families to Mathieu form.

Each reduction states the target parameters (h, theta) of
w'' + (h - 2 theta cos 2z) w = 0, the variable map, and enough metadata for
pullback() to reconstruct a source-variable solution (with derivatives) from a
reduced-variable one, so the oracle can measure the source-equation residual
directly.

Families:

  damped     m y'' + eta y' + (k0 + k cos(omega t)) y = 0        tau = omega t / 2
  eq11       (1 - t^2) y'' - t y' + (2 a t^2 + b) y = 0          t = cos z
  eq13       2 t (t-1) y'' + (2t - 1) y' + (a t + b) y = 0       t = cos^2 z
  eq15       y'' + (a sin(lambda t) + b) y = 0                   lambda t = 2z + pi/2
  eq17-sin   y'' + (a sin^2 t + b) y = 0                         identity
  eq17-cos   y'' + (a cos^2 t + b) y = 0                         identity

The half-angle identities fix the eq17 signs (2 sin^2 t = 1 - cos 2t pulls the
cosine in with a minus, 2 cos^2 t = 1 + cos 2t with a plus), and the linear
map fixes eq15's (sin(lambda t) = cos 2z exactly); the stated mappings are the
ones under which the pullback residual actually vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .closed_form import DampedParams
from .errors import InvalidParameterError, MapDomainError
from .floquet import GeneralParams
from .oracle import LinearODE
from .samples import TimeSeries

FAMILIES = ("eq11", "eq13", "eq15", "eq17-sin", "eq17-cos", "damped")

MAP_COS = "t = cos z"
MAP_COS_SQ = "t = cos²z"
MAP_LINEAR = "λt = 2z + π/2"
MAP_RESCALE = "identity-time-rescale"

_DERIVATIVE_FLOOR = 1e-12


@dataclass(frozen=True)
class ReductionInput:
    """Source-family selector with its coefficients.

    ``lam`` renders the lambda coefficient of the eq15 family (the word itself
    is reserved in Python).  ``params`` is required exactly for the damped
    family, where the coefficients live in a DampedParams instead of (a, b).
    """

    family: str
    a: float = 0.0
    b: float = 0.0
    lam: float = 0.0
    params: Optional[DampedParams] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameterError(
                f"unknown family {self.family!r}: expected one of {FAMILIES}"
            )
        for name in ("a", "b", "lam"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParameterError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.family == "eq15" and self.lam == 0.0:
            raise InvalidParameterError("eq15 requires a nonzero lambda coefficient")
        if (self.family == "damped") != (self.params is not None):
            raise InvalidParameterError(
                "params must be present exactly when family is 'damped'"
            )


@dataclass(frozen=True)
class ReductionResult:
    """Mathieu-form parameters plus the map data pullback() needs.

    time_scale is dt/dz of the affine part of the map (1.0 for the cosine
    maps, whose derivative is not constant); prefactor_rate is the exponential
    peeled off the damped family (0 elsewhere).
    """

    gp: GeneralParams
    variable_map: str
    prefactor_rate: float = 0.0
    time_scale: float = 1.0

    def to_source_time(self, z):
        """Forward map: reduced variable -> source variable."""
        z = np.asarray(z, dtype=float)
        if self.variable_map == MAP_COS:
            return np.cos(z)
        if self.variable_map == MAP_COS_SQ:
            return np.cos(z) ** 2
        if self.variable_map == MAP_LINEAR:
            lam = 2.0 / self.time_scale
            return (2.0 * z + math.pi / 2.0) / lam
        return self.time_scale * z

    def to_reduced_time(self, t):
        """Inverse map: source variable -> reduced variable (principal branch)."""
        t = np.asarray(t, dtype=float)
        if self.variable_map == MAP_COS:
            return np.arccos(t)
        if self.variable_map == MAP_COS_SQ:
            return np.arccos(np.sqrt(t))
        if self.variable_map == MAP_LINEAR:
            lam = 2.0 / self.time_scale
            return (lam * t - math.pi / 2.0) / 2.0
        return t / self.time_scale


def damped_to_general(params: DampedParams) -> ReductionResult:
    """Peel off exp(-eta t / 2m) and rescale time to tau = omega t / 2.

    The remaining equation is Mathieu form with
    h = (4/omega^2)(k0/m - eta^2/(4 m^2)) and theta = -2k/(m omega^2).
    """
    m, eta, omega = params.m, params.eta, params.omega
    h = (4.0 / omega ** 2) * (params.k0 / m - eta ** 2 / (4.0 * m ** 2))
    theta = -2.0 * params.k / (m * omega ** 2)
    return ReductionResult(
        gp=GeneralParams(h=h, theta=theta),
        variable_map=MAP_RESCALE,
        prefactor_rate=eta / (2.0 * m),
        time_scale=2.0 / omega,
    )


def reduce(inp: ReductionInput) -> ReductionResult:
    """Mathieu-form parameters for the selected source family."""
    a, b = inp.a, inp.b
    if inp.family == "damped":
        return damped_to_general(inp.params)
    if inp.family == "eq11":
        return ReductionResult(
            gp=GeneralParams(h=a + b, theta=-a / 2.0),
            variable_map=MAP_COS,
        )
    if inp.family == "eq13":
        return ReductionResult(
            gp=GeneralParams(h=-(a + 2.0 * b), theta=a / 2.0),
            variable_map=MAP_COS_SQ,
        )
    if inp.family == "eq15":
        lam = inp.lam
        return ReductionResult(
            gp=GeneralParams(h=4.0 * b / lam ** 2, theta=-2.0 * a / lam ** 2),
            variable_map=MAP_LINEAR,
            time_scale=2.0 / lam,
        )
    # eq17: cos 2t enters with opposite signs for the two squared carriers
    theta = a / 4.0 if inp.family == "eq17-sin" else -a / 4.0
    return ReductionResult(
        gp=GeneralParams(h=b + a / 2.0, theta=theta),
        variable_map=MAP_RESCALE,
        time_scale=1.0,
    )


def source_ode(inp: ReductionInput) -> LinearODE:
    """The source family as a LinearODE in its own variable (normal form)."""
    a, b = inp.a, inp.b
    if inp.family == "damped":
        p = inp.params
        rate = p.eta / p.m
        return LinearODE(
            p=(lambda t: rate) if rate != 0 else None,
            q=lambda t, pp=p: (pp.k0 + pp.k * math.cos(pp.omega * t)) / pp.m,
        )
    if inp.family == "eq11":
        return LinearODE(
            p=lambda t: -t / (1.0 - t * t),
            q=lambda t: (2.0 * a * t * t + b) / (1.0 - t * t),
        )
    if inp.family == "eq13":
        return LinearODE(
            p=lambda t: (2.0 * t - 1.0) / (2.0 * t * (t - 1.0)),
            q=lambda t: (a * t + b) / (2.0 * t * (t - 1.0)),
        )
    if inp.family == "eq15":
        lam = inp.lam
        return LinearODE(p=None, q=lambda t: a * math.sin(lam * t) + b)
    if inp.family == "eq17-sin":
        return LinearODE(p=None, q=lambda t: a * math.sin(t) ** 2 + b)
    return LinearODE(p=None, q=lambda t: a * math.cos(t) ** 2 + b)


def _map_derivatives(result: ReductionResult, z: np.ndarray):
    """dt/dz and the nonconstant-part second derivative data, per map."""
    if result.variable_map == MAP_COS:
        return -np.sin(z)
    if result.variable_map == MAP_COS_SQ:
        return -np.sin(2.0 * z)
    return np.full_like(z, result.time_scale)


def pullback(result: ReductionResult, z_solution: TimeSeries) -> TimeSeries:
    """Transport a reduced-variable solution back to the source variable.

    Derivatives are chained through the inverse map analytically; samples at
    points where the map derivative vanishes (cosine-map endpoints) raise
    MapDomainError, since the chain rule degenerates there.
    """
    z = np.asarray(z_solution.grid, dtype=float)
    w = np.asarray(z_solution.y, dtype=complex)
    wz = np.asarray(z_solution.dy, dtype=complex)
    wzz = np.asarray(z_solution.d2y, dtype=complex)

    dtdz = _map_derivatives(result, z)
    if np.any(np.abs(dtdz) < _DERIVATIVE_FLOOR):
        bad = float(z[np.argmin(np.abs(dtdz))])
        raise MapDomainError(
            f"map derivative vanishes at z = {bad:.6g}: sample outside the usable domain"
        )

    t = result.to_source_time(z)
    if result.variable_map == MAP_COS:
        if np.any(np.abs(t) >= 1.0):
            raise MapDomainError("t = cos z samples must satisfy |t| < 1")
        # y_tt = w_zz / f'^2 - w_z f'' / f'^3 with f = cos, f'' = -cos
        yt = wz / dtdz
        ytt = wzz / dtdz ** 2 + wz * np.cos(z) / dtdz ** 3
    elif result.variable_map == MAP_COS_SQ:
        if np.any((t <= 0.0) | (t >= 1.0)):
            raise MapDomainError("t = cos^2 z samples must satisfy 0 < t < 1")
        # f = cos^2, f'' = -2 cos 2z
        yt = wz / dtdz
        ytt = wzz / dtdz ** 2 + wz * (2.0 * np.cos(2.0 * z)) / dtdz ** 3
    else:
        yt = wz / result.time_scale
        ytt = wzz / result.time_scale ** 2

    y = w.copy()
    if result.prefactor_rate != 0.0:
        r = result.prefactor_rate
        damp = np.exp(-r * t)
        y2 = damp * (r * r * w - 2.0 * r * yt + ytt)
        y1 = damp * (yt - r * w)
        y0 = damp * w
        y, yt, ytt = y0, y1, y2

    order = np.argsort(t)
    return TimeSeries(
        grid=np.ascontiguousarray(t[order]),
        y=np.ascontiguousarray(y[order]),
        dy=np.ascontiguousarray(yt[order]),
        d2y=np.ascontiguousarray(ytt[order]),
        meta={"variable_map": result.variable_map},
    )


def interior_grid(result: ReductionResult, n: int = 201, span: float = 4.0 * math.pi,
                  margin: float = 0.05) -> np.ndarray:
    """Reduced-variable verification grid avoiding singular map points.

    Cosine maps get the interior of their principal branch with the stated
    relative margin trimmed from both ends; unrestricted maps get [0, span].
    """
    if result.variable_map == MAP_COS:
        lo, hi = margin * math.pi, (1.0 - margin) * math.pi
    elif result.variable_map == MAP_COS_SQ:
        half = math.pi / 2.0
        lo, hi = margin * half, (1.0 - margin) * half
    else:
        lo, hi = 0.0, span
    return np.linspace(lo, hi, n)
