"""Thermal states and their two-mode purifications.

A single-mode thermal (chaotic) state at dimensionless temperature tau has
geometric populations p_n = (1 - q) q^n with q = e^(-1/tau).  Its
purification is the thermal vacuum |0(beta)> = sech(theta) sum_n
tanh(theta)^n |n, n~| on the doubled space, generated from the two-mode
ground state by the squeeze operator exp[theta (a+ b+ - a b)] where b acts
on the tilde partner.

Damping the system mode of the thermal vacuum for a time t (rate kappa)
gives a two-mode state with the closed form

    rho(t) = sech^2(theta) * E (|0><0| (x) sum_m mu^m |m~><m~|) E+,
    E = exp(lambda a+ b+),  lambda = e^(-kappa t) tanh(theta),
    mu = (1 - e^(-2 kappa t)) tanh^2(theta),

whose system reduction is thermal at the cooled temperature and whose tilde
reduction stays thermal at the initial temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock, thermo
from .fock import DensityMatrix, ModeLayout, Operator, PureState, StateError


class TruncationError(StateError):
    """The cutoff is too small to hold the requested state."""


@dataclass(frozen=True)
class ThermoParams:
    """Consistent (theta, tau, nbar) triple for one thermal state.

    The three parametrizations are redundant; the constructor enforces
    sinh^2(theta) = nbar = 1/(e^(1/tau) - 1) so a mixed-up triple cannot
    propagate.  Build instances with the from_* classmethods.
    """

    theta: float
    tau: float
    nbar: float

    def __post_init__(self) -> None:
        if self.theta < 0 or self.tau < 0 or self.nbar < 0:
            raise ValueError("theta, tau, nbar must all be >= 0")
        scale = 1.0 + self.nbar
        if abs(math.sinh(self.theta) ** 2 - self.nbar) > 1e-9 * scale:
            raise ValueError(f"inconsistent pair: sinh^2({self.theta}) != {self.nbar}")
        if abs(thermo.nbar_from_tau(self.tau) - self.nbar) > 1e-9 * scale:
            raise ValueError(f"inconsistent pair: nbar({self.tau}) != {self.nbar}")

    @classmethod
    def from_tau(cls, tau: float) -> "ThermoParams":
        return cls(theta=thermo.theta_from_tau(tau), tau=tau, nbar=thermo.nbar_from_tau(tau))

    @classmethod
    def from_theta(cls, theta: float) -> "ThermoParams":
        return cls(theta=theta, tau=thermo.tau_from_theta(theta), nbar=thermo.nbar_from_theta(theta))

    @classmethod
    def from_nbar(cls, nbar: float) -> "ThermoParams":
        tau = thermo.tau_from_nbar(nbar)
        return cls(theta=thermo.theta_from_tau(tau), tau=tau, nbar=nbar)

    @property
    def q(self) -> float:
        """Boltzmann weight per quantum, tanh^2(theta)."""
        return math.tanh(self.theta) ** 2

    def tail_weight(self, cutoff: int) -> float:
        """Thermal weight beyond the cutoff: q^cutoff."""
        return self.q**cutoff


def chaotic_state(
    params: ThermoParams,
    layout: ModeLayout,
    renormalize: bool = False,
) -> DensityMatrix:
    """Single-mode thermal state diag((1 - q) q^n) on the truncated space.

    By default the populations are the exact infinite-space values, so the
    trace falls short of 1 by the tail weight q^cutoff; the instance carries
    that deficit in its trace tolerance.  renormalize=True rescales to unit
    trace instead.
    """
    if layout.modes != 1:
        raise fock.LayoutError("chaotic_state is single-mode")
    q = params.q
    pops = (1.0 - q) * q ** np.arange(layout.cutoff)
    tol = 1e-12
    if renormalize:
        pops = pops / pops.sum()
    else:
        tol += params.tail_weight(layout.cutoff)
    return DensityMatrix(layout, np.diag(pops.astype(np.complex128)), trace_tol=tol)


def thermal_vacuum(params: ThermoParams, layout: ModeLayout) -> PureState:
    """|0(beta)> = sech(theta) sum_n tanh(theta)^n |n, n~| on the doubled space."""
    if layout.modes != 2:
        raise fock.LayoutError("thermal_vacuum lives on a two-mode layout")
    n = layout.cutoff
    amps = (1.0 / math.cosh(params.theta)) * math.tanh(params.theta) ** np.arange(n)
    vec = np.zeros(layout.dim, dtype=np.complex128)
    vec[np.arange(n) * n + np.arange(n)] = amps
    return PureState(layout, vec, norm_tol=params.tail_weight(n) + 1e-12)


def thermo_squeeze_operator(theta: float, layout: ModeLayout) -> Operator:
    """Unitary exp[theta (a+ b+ - a b)] mixing the system and tilde modes."""
    if layout.modes != 2:
        raise fock.LayoutError("the squeeze operator lives on a two-mode layout")
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    a_sys = fock.annihilation(layout, fock.SYSTEM)
    a_til = fock.annihilation(layout, fock.TILDE)
    pair_up = fock.multiply(fock.dagger(a_sys), fock.dagger(a_til)).mat
    gen = theta * (pair_up - pair_up.conj().T)
    return fock.matrix_exponential(Operator(layout, gen))


def tfd_expectation_identity(obs: Operator, params: ThermoParams) -> tuple[complex, complex]:
    """Evaluate <0(beta)| A (x) 1 |0(beta)> and Tr(A rho_thermal) side by side.

    On the untruncated space the two are equal for every system observable;
    on the truncated space they agree up to the thermal tail weight.
    """
    if obs.layout.modes != 1:
        raise fock.LayoutError("the observable acts on the system mode alone")
    doubled = obs.layout.doubled()
    psi = thermal_vacuum(params, doubled)
    grid = psi.vec.reshape(obs.layout.cutoff, obs.layout.cutoff)
    pure_side = complex(np.vdot(grid, obs.mat @ grid))
    rho = chaotic_state(params, obs.layout)
    mixed_side = fock.expectation(rho, obs)
    return pure_side, mixed_side


@dataclass(frozen=True)
class EvolvedTwoModeSpec:
    """Parameters of the damped thermal vacuum in closed form.

    lam = e^(-kappa t) tanh(theta) weights the surviving pair correlations,
    mu = (1 - e^(-2 kappa t)) tanh^2(theta) weights the tilde-side mixture
    left behind by quanta lost from the system mode.
    """

    theta: float
    kappa_t: float
    lam: float
    mu: float

    def __post_init__(self) -> None:
        if self.theta < 0 or self.kappa_t < 0:
            raise ValueError("theta and kappa_t must be >= 0")
        th = math.tanh(self.theta)
        decay = math.exp(-self.kappa_t)
        if abs(self.lam - decay * th) > 1e-12:
            raise ValueError(f"lam {self.lam!r} inconsistent with theta, kappa_t")
        if abs(self.mu - (1.0 - decay * decay) * th * th) > 1e-12:
            raise ValueError(f"mu {self.mu!r} inconsistent with theta, kappa_t")

    @classmethod
    def from_theta(cls, theta: float, kappa_t: float) -> "EvolvedTwoModeSpec":
        th = math.tanh(theta)
        decay = math.exp(-kappa_t)
        return cls(theta=theta, kappa_t=kappa_t, lam=decay * th, mu=(1.0 - decay * decay) * th * th)


def evolved_two_mode_state(
    spec: EvolvedTwoModeSpec,
    layout: ModeLayout,
    method: str = "series",
    deficit_tol: float = 1e-6,
) -> DensityMatrix:
    """Build the damped thermal vacuum rho(t) on the truncated doubled space.

    method="series" expands E|0, m~> = sum_n lam^n sqrt(C(m+n, n)) |n, (m+n)~>
    column by column and accumulates the dyads directly; method="expm" forms
    E = exp(lam a+ b+) as a dense matrix exponential and conjugates.  The two
    agree to round-off; the series route is the cheap one.

    The exact state keeps a fraction tanh^2(theta)^cutoff of its weight above
    the truncation; a measured trace deficit beyond deficit_tol raises
    TruncationError instead of returning a visibly leaky state.
    """
    if layout.modes != 2:
        raise fock.LayoutError("the evolved state lives on a two-mode layout")
    if method not in ("series", "expm"):
        raise ValueError(f"method must be series or expm, got {method!r}")
    n = layout.cutoff
    sech2 = 1.0 - math.tanh(spec.theta) ** 2

    if method == "series":
        rho4 = np.zeros((n, n, n, n), dtype=np.complex128)
        for m in range(n):
            weight = sech2 * spec.mu**m
            if weight == 0.0:
                break
            span = n - m
            amps = np.empty(span)
            amps[0] = 1.0
            for k in range(1, span):
                amps[k] = amps[k - 1] * spec.lam * math.sqrt((m + k) / k)
            block = weight * np.outer(amps, amps)
            rows = np.arange(span)
            rho4[rows[:, None], m + rows[:, None], rows[None, :], m + rows[None, :]] = block
        mat = rho4.reshape(layout.dim, layout.dim)
    else:
        a_sys = fock.annihilation(layout, fock.SYSTEM)
        a_til = fock.annihilation(layout, fock.TILDE)
        pair_up = fock.multiply(fock.dagger(a_sys), fock.dagger(a_til))
        expand = fock.matrix_exponential(fock.scale(spec.lam, pair_up)).mat
        core = np.zeros(layout.dim, dtype=np.float64)
        core[np.arange(n)] = sech2 * spec.mu ** np.arange(n)
        mat = (expand * core) @ expand.conj().T

    tr = mat.trace().real
    deficit = 1.0 - tr
    if deficit > deficit_tol:
        raise TruncationError(
            f"trace deficit {deficit:.3e} exceeds {deficit_tol:.3e}; raise the cutoff"
        )
    return DensityMatrix(layout, mat, trace_tol=abs(deficit) + 1e-12)
