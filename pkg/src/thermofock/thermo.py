"""Temperature bookkeeping for a damped thermal mode.

Temperatures are dimensionless throughout: tau = kT / (hbar omega), so the
Boltzmann weight per quantum is q = exp(-1/tau) and the mean occupation is
nbar = 1 / (exp(1/tau) - 1).  The squeeze angle theta of the two-mode
purification satisfies tanh(theta) = exp(-1/(2 tau)), i.e. sinh^2(theta) =
nbar.  tau = 0 (vacuum, q = 0, theta = 0) is admitted as the cold limit.

The closed-form cooling law says a thermal state damped for a time t at
rate kappa is again thermal, at

    tau' = -1 / ln( e^(-2 kappa t) q / (1 - (1 - e^(-2 kappa t)) q) ),

which is the temperature whose mean occupation is e^(-2 kappa t) * nbar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .fock import LayoutError

THETA_PRIME_SELF_CHECK_TOL = 1e-12
OFF_DIAG_TOL = 1e-10
POPULATION_FLOOR = 1e-10


class NotChaoticError(ValueError):
    """The state is not diagonal with geometric populations."""


class CoolingCurveError(RuntimeError):
    """A cooling-curve evaluation failed at a specific time point."""

    def __init__(self, time: float, kappa_t: float, cause: Exception):
        self.time = time
        self.kappa_t = kappa_t
        super().__init__(f"cooling curve failed at t={time:.6g} (kappa*t={kappa_t:.6g}): {cause}")


# ---------------------------------------------------------------------------
# scalar conversions
# ---------------------------------------------------------------------------


def theta_from_tau(tau: float) -> float:
    """Squeeze angle of the thermal purification: tanh(theta) = e^(-1/(2 tau))."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau == 0:
        return 0.0
    return math.atanh(math.exp(-1.0 / (2.0 * tau)))


def tau_from_theta(theta: float) -> float:
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    if theta == 0:
        return 0.0
    return -1.0 / (2.0 * math.log(math.tanh(theta)))


def nbar_from_tau(tau: float) -> float:
    """Bose occupation 1 / (e^(1/tau) - 1)."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau == 0:
        return 0.0
    return 1.0 / math.expm1(1.0 / tau)


def tau_from_nbar(nbar: float) -> float:
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    if nbar == 0:
        return 0.0
    return 1.0 / math.log1p(1.0 / nbar)


def nbar_from_theta(theta: float) -> float:
    """sinh^2(theta)."""
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    return math.sinh(theta) ** 2


# ---------------------------------------------------------------------------
# cooling law
# ---------------------------------------------------------------------------


def theta_prime(theta: float, kappa_t: float) -> float:
    """Squeeze angle of the purification after damping for kappa*t.

    tanh(theta') = e^(-kappa t) tanh(theta) / sqrt(1 - (1 - e^(-2 kappa t)) tanh^2(theta)).

    The result is cross-checked against the equivalent cosh form
    cosh^2(theta') = 1 + e^(-2 kappa t) sinh^2(theta); disagreement beyond
    round-off means the evaluation lost precision and raises.
    """
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    if kappa_t < 0:
        raise ValueError(f"kappa_t must be >= 0, got {kappa_t}")
    decay = math.exp(-kappa_t)
    th = math.tanh(theta)
    denom = 1.0 - (1.0 - decay * decay) * th * th
    tp = math.atanh(decay * th / math.sqrt(denom))
    sech2 = 1.0 / math.cosh(tp) ** 2
    expected = 1.0 / (1.0 + (decay * math.sinh(theta)) ** 2)
    if abs(sech2 - expected) > THETA_PRIME_SELF_CHECK_TOL:
        raise ArithmeticError(
            f"theta_prime self-check failed: sech^2 = {sech2:.17g}, expected {expected:.17g}"
        )
    return tp


def tau_after(tau0: float, kappa_t: float) -> float:
    """Temperature after damping a thermal state of temperature tau0 for kappa*t."""
    if tau0 <= 0:
        raise ValueError(f"tau0 must be > 0, got {tau0}")
    if kappa_t < 0:
        raise ValueError(f"kappa_t must be >= 0, got {kappa_t}")
    q = math.exp(-1.0 / tau0)
    decay2 = math.exp(-2.0 * kappa_t)
    arg = decay2 * q / (1.0 - (1.0 - decay2) * q)
    return -1.0 / math.log(arg)


# ---------------------------------------------------------------------------
# reading a temperature off a state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeometricFit:
    """Result of fitting geometric populations p_n = (1 - q) q^n."""

    q: float
    nbar: float
    max_offdiag: float
    max_ratio_residual: float


def fit_geometric(
    rho,
    off_diag_tol: float = OFF_DIAG_TOL,
    population_floor: float = POPULATION_FLOOR,
) -> GeometricFit:
    """Extract the geometric ratio q from a single-mode density matrix.

    The estimate is the population-weighted mean of the successive-ratio
    samples p_{n+1}/p_n, which reduces to sum(p_{n+1}) / sum(p_n) over the
    rows whose population exceeds `population_floor`.  Rows below the floor
    carry no usable ratio information and are excluded.  Off-diagonal mass
    above `off_diag_tol` or a non-geometric diagonal raises NotChaoticError.
    """
    if rho.layout.modes != 1:
        raise LayoutError("fit_geometric needs a single-mode state")
    mat = rho.mat
    pops = mat.diagonal().real
    off = mat - np.diag(mat.diagonal())
    max_offdiag = float(np.abs(off).max())
    if max_offdiag > off_diag_tol:
        raise NotChaoticError(
            f"off-diagonal weight {max_offdiag:.3e} exceeds {off_diag_tol:.3e}"
        )
    anchors = np.nonzero(pops[:-1] > population_floor)[0]
    if anchors.size == 0:
        return GeometricFit(q=0.0, nbar=0.0, max_offdiag=max_offdiag, max_ratio_residual=0.0)
    num = pops[anchors + 1].sum()
    den = pops[anchors].sum()
    q = num / den
    if q < 0:
        if q < -1e-12:
            raise NotChaoticError(f"population ratio {q:.3e} is negative")
        q = 0.0
    if q >= 1:
        raise NotChaoticError(f"population ratio {q:.6g} is not < 1")
    ratios = pops[anchors + 1] / pops[anchors]
    max_ratio_residual = float(np.abs(ratios - q).max())
    return GeometricFit(
        q=q,
        nbar=q / (1.0 - q),
        max_offdiag=max_offdiag,
        max_ratio_residual=max_ratio_residual,
    )


def effective_temperature(rho, **fit_kwargs) -> float:
    """Temperature of a chaotic state, via the geometric-ratio fit."""
    return tau_from_nbar(fit_geometric(rho, **fit_kwargs).nbar)


# ---------------------------------------------------------------------------
# cooling curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoolingPoint:
    """One time point of a cooling curve."""

    kappa_t: float
    tau_closed: float
    tau_numeric: float
    nbar: float
    trace_error: float


def cooling_curve(
    tau0: float,
    kappa: float,
    times,
    cutoff: int | None = None,
    method: str = "kraus",
    dt: float | None = None,
) -> list[CoolingPoint]:
    """Evaluate the cooling law along a time grid and check it numerically.

    For each t the closed-form tau_after is paired with the temperature
    read off the numerically damped state (Kraus operator sum or RK4
    Lindblad integration).  method="closed_only" skips the numerics and fills
    tau_numeric/trace_error with nan.
    """
    # imported here because states imports this module
    from . import channel, states

    if tau0 <= 0:
        raise ValueError(f"tau0 must be > 0, got {tau0}")
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    if method not in ("kraus", "lindblad", "closed_only"):
        raise ValueError(f"method must be kraus, lindblad or closed_only, got {method!r}")
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise ValueError("times must be >= 0")

    theta = theta_from_tau(tau0)
    if cutoff is None:
        cutoff = fock.default_cutoff(theta)
    layout = fock.ModeLayout(cutoff)

    points: list[CoolingPoint] = []
    if method == "closed_only":
        for t in times:
            kt = kappa * t
            tau_c = tau_after(tau0, kt)
            points.append(
                CoolingPoint(kt, tau_c, float("nan"), nbar_from_tau(tau_c), float("nan"))
            )
        return points

    params = states.ThermoParams.from_tau(tau0)
    rho0 = states.chaotic_state(params, layout)
    num_op = fock.number(layout)
    for t in times:
        kt = kappa * t
        try:
            if method == "kraus":
                evolved = channel.apply_kraus(rho0, channel.ChannelSpec(kappa_t=kt))
            else:
                evolved = channel.lindblad_integrate(rho0, kappa, t, dt=dt)
            tau_n = effective_temperature(evolved)
        except (NotChaoticError, channel.IntegrationError, fock.StateError) as exc:
            raise CoolingCurveError(t, kt, exc) from exc
        points.append(
            CoolingPoint(
                kappa_t=kt,
                tau_closed=tau_after(tau0, kt),
                tau_numeric=tau_n,
                nbar=float(fock.expectation(evolved, num_op).real),
                trace_error=abs(fock.trace(evolved) - 1.0),
            )
        )
    return points
