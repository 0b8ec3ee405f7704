"""Closed-form cylinder-function solutions of the damped modulated oscillator.

The homogeneous equation

    m y'' + eta y' + (k0 + k cos(omega t)) y = 0

splits, when the cosine is replaced by a single complex exponential, into

    y'' + (eta/m) y' + (k0/m + (k/m) e^{i omega t}) y = 0

and substituting y = e^{-eta t / 2m} Z_nu(u) with u proportional to
e^{i omega t / 2} turns this into the cylinder equation for Z_nu.  Two
placements of the parameter ratios circulate:

  * ``corrected``     -- index nu from the stiffness ratio k0/m, argument
                         scale from the modulation ratio k/m.  This is the
                         placement that actually satisfies the equation.
  * ``paper-literal`` -- the transposed placement (k/m in the index, k0/m in
                         the argument), kept as a first-class variant so the
                         two can be adjudicated side by side against the same
                         equation.  The token is a fixed interface string.

Solutions only close at integer index (the two half-order branches collapse
otherwise), hence the admissibility gate.  Evaluation follows the Bessel
argument around its circular path in the complex plane, applying the
analytic-continuation correction for the second kind when the path winds
across the standard branch cut.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from .bessel import bessel_j, bessel_y
from .errors import AdmissibilityError, InvalidParameterError, SingularityError
from .floquet import GeneralParams
from .oracle import LinearODE, ResidualReport, residual
from .samples import SolutionSample

ADMISSIBILITY_TOL = 1e-9


class Variant(str, Enum):
    """Placement of the two parameter ratios in the closed form."""

    CORRECTED = "corrected"
    LITERAL = "paper-literal"


def _coerce_variant(variant) -> Variant:
    if isinstance(variant, Variant):
        return variant
    try:
        return Variant(variant)
    except ValueError:
        raise InvalidParameterError(
            f"unknown variant {variant!r}: expected 'corrected' or 'paper-literal'"
        ) from None


@dataclass(frozen=True)
class DampedParams:
    """Coefficients of m y'' + eta y' + (k0 + k cos(omega t)) y = 0."""

    m: float
    eta: float
    k0: float
    k: float
    omega: float

    def __post_init__(self):
        for name in ("m", "eta", "k0", "k", "omega"):
            v = getattr(self, name)
            if isinstance(v, complex):
                raise InvalidParameterError(f"{name} must be real, got {v!r}")
            v = float(v)
            if not math.isfinite(v):
                raise InvalidParameterError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.m <= 0:
            raise InvalidParameterError(f"mass must be positive, got {self.m!r}")
        if self.eta < 0:
            raise InvalidParameterError(f"damping must be nonnegative, got {self.eta!r}")
        if self.omega == 0:
            raise InvalidParameterError("modulation frequency must be nonzero")

    @property
    def damping_rate(self) -> float:
        return self.eta / self.m

    @property
    def stiffness_ratio(self) -> float:
        return self.k0 / self.m

    @property
    def modulation_ratio(self) -> float:
        return self.k / self.m


@dataclass(frozen=True)
class ClosedFormSpec:
    """A fully determined closed-form solution, ready to evaluate.

    The solution reads

        y(t) = exp(-decay_rate * t) * [ c1 * J_nu(z(t)) + c2 * Y_nu(z(t)) ],
        z(t) = argument_scale * exp(exponent_rate * t).

    ``admissible_nu`` is the integer order actually used by evaluation; None
    marks a spec constructed with the admissibility gate overridden, in which
    case the index is rounded and results are approximate by construction.
    """

    variant: Variant
    nu: complex
    admissible_nu: Optional[int]
    c1: complex
    c2: complex
    decay_rate: float
    argument_scale: complex
    exponent_rate: complex

    def order(self) -> int:
        if self.admissible_nu is not None:
            return self.admissible_nu
        return int(round(self.nu.real))


def index(params: DampedParams, variant=Variant.CORRECTED) -> complex:
    """Cylinder-function index nu for the given placement (principal branch)."""
    variant = _coerce_variant(variant)
    a = params.damping_rate
    ratio = params.stiffness_ratio if variant is Variant.CORRECTED else params.modulation_ratio
    return cmath.sqrt(complex(a * a - 4.0 * ratio)) / (1j * params.omega)


def argument_scale(params: DampedParams, variant=Variant.CORRECTED) -> complex:
    """Scale of the Bessel argument z(t) = scale * exp(i omega t / 2)."""
    variant = _coerce_variant(variant)
    ratio = params.modulation_ratio if variant is Variant.CORRECTED else params.stiffness_ratio
    return 2.0 * cmath.sqrt(complex(ratio)) / (1j * params.omega)


def bessel_argument(params: DampedParams, variant, t: float) -> complex:
    """The time-dependent Bessel argument of the closed form."""
    return argument_scale(params, variant) * cmath.exp(0.5j * params.omega * float(t))


def is_admissible(params: DampedParams, variant=Variant.CORRECTED, tol: float = ADMISSIBILITY_TOL) -> Optional[int]:
    """Nearest integer index when nu is within tol of one, else None."""
    nu = index(params, variant)
    nearest = int(round(nu.real))
    if abs(nu - nearest) <= tol:
        return nearest
    return None


def _build_spec(params: DampedParams, variant: Variant, c1: complex, c2: complex,
                allow_inadmissible: bool, tol: float) -> ClosedFormSpec:
    nu = index(params, variant)
    adm = is_admissible(params, variant, tol)
    if adm is None and not allow_inadmissible:
        raise AdmissibilityError(nu, int(round(nu.real)), tol)
    return ClosedFormSpec(
        variant=variant,
        nu=nu,
        admissible_nu=adm,
        c1=complex(c1),
        c2=complex(c2),
        decay_rate=params.eta / (2.0 * params.m),
        argument_scale=argument_scale(params, variant),
        exponent_rate=0.5j * params.omega,
    )


def general_solution(params: DampedParams, variant=Variant.CORRECTED,
                     c1: complex = 1.0, c2: complex = 0.0, *,
                     allow_inadmissible: bool = False,
                     tol: float = ADMISSIBILITY_TOL) -> ClosedFormSpec:
    """Single spec carrying both constants: c1 J + c2 Y under the decay prefactor."""
    return _build_spec(params, _coerce_variant(variant), c1, c2, allow_inadmissible, tol)


def fundamental_pair(params: DampedParams, variant=Variant.CORRECTED,
                     c1: complex = 1.0, c2: complex = 1.0, *,
                     allow_inadmissible: bool = False,
                     tol: float = ADMISSIBILITY_TOL) -> tuple[ClosedFormSpec, ClosedFormSpec]:
    """The (second-kind, first-kind) pair spanning the solution space.

    The first member carries only the Y branch with weight c2, the second only
    the J branch with weight c1.  Inadmissible indices raise unless
    allow_inadmissible is set, in which case the rounded order is used and the
    specs are tagged with admissible_nu = None.
    """
    variant = _coerce_variant(variant)
    y_member = _build_spec(params, variant, 0.0, c2, allow_inadmissible, tol)
    j_member = _build_spec(params, variant, c1, 0.0, allow_inadmissible, tol)
    return (y_member, j_member)


def mirror(spec: ClosedFormSpec) -> ClosedFormSpec:
    """The companion spec solving the conjugate-exponential equation.

    Negating the exponent rate sends e^{+i omega t} to e^{-i omega t}; the
    argument flips sign along with it and the integer-order reflection
    J_{-n} = (-1)^n J_n contributes the parity sign to both constants.
    """
    if spec.admissible_nu is None:
        raise AdmissibilityError(spec.nu, int(round(spec.nu.real)), ADMISSIBILITY_TOL)
    sign = -1.0 if spec.admissible_nu % 2 else 1.0
    return replace(
        spec,
        c1=sign * spec.c1,
        c2=sign * spec.c2,
        argument_scale=-spec.argument_scale,
        exponent_rate=-spec.exponent_rate,
    )


def _winding(spec: ClosedFormSpec, t: float, z: complex) -> int:
    # The path z(t) = scale * e^{i s t} leaves the principal branch when the
    # accumulated angle passes +-pi; Y_n picks up 4 i w J_n per full turn.
    angle = cmath.phase(spec.argument_scale) + spec.exponent_rate.imag * t
    return int(round((angle - cmath.phase(z)) / (2.0 * math.pi)))


def evaluate(spec: ClosedFormSpec, params: DampedParams, t: float) -> SolutionSample:
    """Evaluate the closed form with analytic first and second derivatives.

    Derivatives chain through z(t); the second derivative of the cylinder
    bracket is eliminated with its own differential equation, and the
    second-kind branch is analytically continued across the log cut as the
    argument winds.
    """
    t = float(t)
    expected_decay = params.eta / (2.0 * params.m)
    if abs(spec.decay_rate - expected_decay) > 1e-12 * max(1.0, abs(expected_decay)):
        raise InvalidParameterError(
            f"spec decay rate {spec.decay_rate!r} does not match params ({expected_decay!r})"
        )
    n = spec.order()
    pref = cmath.exp(-spec.decay_rate * t)

    if spec.argument_scale == 0:
        if spec.c2 != 0:
            raise SingularityError(
                "second-kind branch diverges at identically zero argument"
            )
        bracket = spec.c1 * (1.0 if n == 0 else 0.0)
        y = pref * bracket
        return SolutionSample(t=t, y=y, dy=-spec.decay_rate * y,
                              d2y=spec.decay_rate ** 2 * y)

    z = spec.argument_scale * cmath.exp(spec.exponent_rate * t)
    jv = bessel_j(n, z)
    b = spec.c1 * jv.value
    db = spec.c1 * jv.derivative
    if spec.c2 != 0:
        yv = bessel_y(n, z)
        w = _winding(spec, t, z)
        y_val = yv.value + 4.0j * w * jv.value
        y_der = yv.derivative + 4.0j * w * jv.derivative
        b += spec.c2 * y_val
        db += spec.c2 * y_der
    # cylinder equation: B'' = -B'/z + (n^2/z^2 - 1) B
    d2b = -db / z + (n * n / (z * z) - 1.0) * b

    dz = spec.exponent_rate * z
    d2z = spec.exponent_rate ** 2 * z
    bt = db * dz
    btt = d2b * dz * dz + db * d2z

    r = spec.decay_rate
    y = pref * b
    dy = pref * (bt - r * b)
    d2y = pref * (btt - 2.0 * r * bt + r * r * b)
    return SolutionSample(t=t, y=y, dy=dy, d2y=d2y)


# contract alias for the evaluation entry point
eval = evaluate


def split_ode(params: DampedParams, conjugate: bool = False) -> LinearODE:
    """The single-exponential equation the closed form is checked against.

    y'' + (eta/m) y' + (k0/m + (k/m) e^{+-i omega t}) y = 0; conjugate=True
    selects the e^{-i omega t} twin.
    """
    a = params.damping_rate
    b0 = params.stiffness_ratio
    c0 = params.modulation_ratio
    s = -1.0 if conjugate else 1.0
    return LinearODE(
        p=(lambda t: a) if a != 0 else None,
        q=lambda t: b0 + c0 * cmath.exp(s * 1j * params.omega * t),
    )


def homogeneous_ode(params: DampedParams) -> LinearODE:
    """The real cosine-modulated homogeneous equation itself."""
    a = params.damping_rate
    b0 = params.stiffness_ratio
    c0 = params.modulation_ratio
    return LinearODE(
        p=(lambda t: a) if a != 0 else None,
        q=lambda t: b0 + c0 * math.cos(params.omega * t),
    )


def undamped_general_solution(gp: GeneralParams, c1: complex = 1.0, c2: complex = 0.0,
                              variant=Variant.CORRECTED) -> ClosedFormSpec:
    """Closed-form spec for the general equation y'' + (h - 2 theta cos 2t) y = 0.

    The equation is pulled back to its canonical undamped preimage
    (m=1, eta=0, k0=h, k=-2 theta, omega=2, identical time variable) and the
    closed form is built there.  Only real parameters admit such a preimage;
    complex h or theta raise MappingError.  The returned spec is tagged
    inadmissible (admissible_nu None) when the index misses an integer, and
    its residual against the cosine equation is a statement to be measured,
    not a guarantee.
    """
    from .errors import MappingError

    if gp.h.imag != 0.0 or gp.theta.imag != 0.0:
        raise MappingError(
            f"no real undamped preimage for h={gp.h!r}, theta={gp.theta!r}"
        )
    params = DampedParams(m=1.0, eta=0.0, k0=gp.h.real, k=-2.0 * gp.theta.real, omega=2.0)
    return general_solution(params, variant, c1, c2, allow_inadmissible=True)


@dataclass(frozen=True)
class AdjudicationReport:
    """Side-by-side residuals of the two variants against the same equation."""

    params: DampedParams
    corrected: ResidualReport
    literal: ResidualReport
    passing_variant: Optional[str]
    tol: float


def adjudicate(params: DampedParams, grid=None, tol: float = 1e-8,
               c1: complex = 1.0, c2: complex = 1.0, *,
               allow_inadmissible: bool = False) -> AdjudicationReport:
    """Evaluate both variants against the single-exponential equation.

    Both residuals are always computed and reported; passing_variant names the
    smaller-residual variant among those below tol, or None if neither
    qualifies.  No smallness is asserted here: this is a measurement.
    """
    if grid is None:
        grid = np.linspace(0.0, 10.0, 501)
    ode = split_ode(params)
    reports = {}
    for variant in (Variant.CORRECTED, Variant.LITERAL):
        spec = general_solution(params, variant, c1, c2,
                                allow_inadmissible=allow_inadmissible)
        candidate = lambda t, s=spec: evaluate(s, params, t)
        reports[variant] = residual(ode, candidate, grid, tol=tol)
    passing = [v for v in (Variant.CORRECTED, Variant.LITERAL)
               if reports[v].linf < tol]
    winner = None
    if passing:
        winner = min(passing, key=lambda v: reports[v].linf).value
    return AdjudicationReport(
        params=params,
        corrected=reports[Variant.CORRECTED],
        literal=reports[Variant.LITERAL],
        passing_variant=winner,
        tol=tol,
    )
