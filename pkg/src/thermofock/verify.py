"""Named invariant checks, grouped by module, for the `verify` subcommand.

Each check computes a single observed number and passes when it is below
(or, for signed-margin checks, at most) its tolerance.  Check functions
take an optional cutoff override; two-mode checks cap it at 48 because
they build dense matrix exponentials of dimension cutoff^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channel, fock, states, thermo

SUITES = ("fock", "states", "channel", "thermo")
TWO_MODE_CUTOFF_CAP = 48

_GRID_TAU0 = (0.3, 1.0, 3.0)
_GRID_KAPPA_T = (0.1, 0.5, 1.0, 2.0, 5.0)


def _single_cutoff(cutoff: int | None, default: int = 32) -> int:
    return default if cutoff is None else cutoff


def _double_cutoff(cutoff: int | None, default: int = 33) -> int:
    return default if cutoff is None else min(cutoff, TWO_MODE_CUTOFF_CAP)


# ---------------------------------------------------------------------------
# fock
# ---------------------------------------------------------------------------


def _ladder_adjoint(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    a = fock.annihilation(layout)
    return float(np.abs(fock.creation(layout).mat - fock.dagger(a).mat).max())


def _commutator_interior(cutoff: int | None) -> float:
    n = _single_cutoff(cutoff)
    layout = fock.ModeLayout(n)
    a = fock.annihilation(layout)
    ad = fock.creation(layout)
    comm = fock.multiply(a, ad).mat - fock.multiply(ad, a).mat
    return float(np.abs(comm[: n - 1, : n - 1] - np.eye(n - 1)).max())


def _number_from_ladders(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    a = fock.annihilation(layout)
    built = fock.multiply(fock.dagger(a), a).mat
    return float(np.abs(built - fock.number(layout).mat).max())


def _partial_trace_tensor(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    rho_a = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    rho_b = states.chaotic_state(states.ThermoParams.from_tau(0.5), layout)
    prod = fock.tensor(rho_a, rho_b)
    joint = fock.DensityMatrix(layout.doubled(), prod.mat, trace_tol=1e-9)
    kept_sys = fock.partial_trace(joint, over=fock.TILDE)
    kept_til = fock.partial_trace(joint, over=fock.SYSTEM)
    tr_a = fock.trace(rho_a).real
    tr_b = fock.trace(rho_b).real
    err_sys = np.abs(kept_sys.mat - tr_b * rho_a.mat).max()
    err_til = np.abs(kept_til.mat - tr_a * rho_b.mat).max()
    return float(max(err_sys, err_til))


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


def _squeeze_unitarity(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_double_cutoff(cutoff)).doubled()
    u = states.thermo_squeeze_operator(thermo.theta_from_tau(1.0), layout)
    gram = fock.multiply(fock.dagger(u), u).mat
    return float(np.abs(gram - np.eye(layout.dim)).max())


def _squeeze_generates_thermal_vacuum(cutoff: int | None) -> float:
    n = _double_cutoff(cutoff)
    layout = fock.ModeLayout(n).doubled()
    params = states.ThermoParams.from_tau(1.0)
    u = states.thermo_squeeze_operator(params.theta, layout)
    ground = fock.fock_state(layout, (0, 0))
    squeezed = u.mat @ ground.vec
    target = states.thermal_vacuum(params, layout).vec
    return float(np.linalg.norm(squeezed - target))


def _tfd_identity(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_double_cutoff(cutoff))
    params = states.ThermoParams.from_tau(1.0)
    worst = 0.0
    a = fock.annihilation(layout)
    quad = fock.add(a, fock.dagger(a))
    for obs in (fock.number(layout), quad):
        pure, mixed = states.tfd_expectation_identity(obs, params)
        worst = max(worst, abs(pure - mixed))
    return worst


def _evolved_series_vs_expm(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_double_cutoff(cutoff)).doubled()
    spec = states.EvolvedTwoModeSpec.from_theta(thermo.theta_from_tau(1.0), 0.7)
    via_series = states.evolved_two_mode_state(spec, layout, method="series")
    via_expm = states.evolved_two_mode_state(spec, layout, method="expm")
    return fock.trace_distance(via_series, via_expm)


def _evolved_tilde_reduction_thermal(cutoff: int | None) -> float:
    n = _double_cutoff(cutoff)
    layout = fock.ModeLayout(n).doubled()
    params = states.ThermoParams.from_tau(1.0)
    spec = states.EvolvedTwoModeSpec.from_theta(params.theta, 0.9)
    evolved = states.evolved_two_mode_state(spec, layout)
    tilde_side = fock.partial_trace(evolved, over=fock.SYSTEM)
    reference = states.chaotic_state(params, layout.single())
    return float(np.abs(tilde_side.mat - reference.mat).max())


# ---------------------------------------------------------------------------
# channel
# ---------------------------------------------------------------------------


def _kraus_completeness(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    ops = channel.kraus_operators(channel.ChannelSpec(kappa_t=0.5), layout)
    acc = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for op in ops:
        acc += op.mat.conj().T @ op.mat
    return float(np.abs(acc - np.eye(layout.dim)).max())


def _trace_preservation(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    rho = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    out = channel.apply_kraus(rho, channel.ChannelSpec(kappa_t=0.37))
    return abs(fock.trace(out) - fock.trace(rho))


def _mean_photon_decay(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    kappa_t = 0.5
    rho = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    out = channel.apply_kraus(rho, channel.ChannelSpec(kappa_t=kappa_t))
    num = fock.number(layout)
    before = fock.expectation(rho, num).real
    after = fock.expectation(out, num).real
    return abs(after - math.exp(-2.0 * kappa_t) * before)


def _kraus_vs_lindblad(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    rho = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    via_kraus = channel.apply_kraus(rho, channel.ChannelSpec(kappa_t=0.5))
    via_ode = channel.lindblad_integrate(rho, kappa=1.0, t_final=0.5)
    return fock.trace_distance(via_kraus, via_ode)


def _damped_state_positive(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff))
    rho = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    out = channel.apply_kraus(rho, channel.ChannelSpec(kappa_t=0.5))
    return max(0.0, -out.min_eigenvalue())


def _structured_vs_explicit(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff, default=24))
    spec = channel.ChannelSpec(kappa_t=0.8)
    rho = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    fast = channel.apply_kraus(rho, spec).mat
    slow = np.zeros_like(fast)
    for op in channel.kraus_operators(spec, layout):
        slow += op.mat @ rho.mat @ op.mat.conj().T
    return float(np.abs(fast - slow).max())


# ---------------------------------------------------------------------------
# thermo
# ---------------------------------------------------------------------------


def _cooling_law_vs_nbar_oracle(cutoff: int | None) -> float:
    worst = 0.0
    for tau0 in _GRID_TAU0:
        for kappa_t in _GRID_KAPPA_T:
            direct = thermo.tau_after(tau0, kappa_t)
            via_nbar = thermo.tau_from_nbar(
                math.exp(-2.0 * kappa_t) * thermo.nbar_from_tau(tau0)
            )
            worst = max(worst, abs(direct - via_nbar))
    return worst


def _theta_prime_vs_cooling_law(cutoff: int | None) -> float:
    worst = 0.0
    for tau0 in _GRID_TAU0:
        theta = thermo.theta_from_tau(tau0)
        for kappa_t in _GRID_KAPPA_T:
            via_theta = thermo.tau_from_theta(thermo.theta_prime(theta, kappa_t))
            worst = max(worst, abs(via_theta - thermo.tau_after(tau0, kappa_t)))
    return worst


def _cooling_denominator_margin(cutoff: int | None) -> float:
    # signed: e^(-2 kappa t) - [1 - (1 - e^(-2 kappa t)) tanh^2(theta)] must
    # stay negative for theta > 0, kappa t > 0
    worst = -math.inf
    for tau0 in _GRID_TAU0:
        th2 = math.tanh(thermo.theta_from_tau(tau0)) ** 2
        for kappa_t in _GRID_KAPPA_T:
            decay2 = math.exp(-2.0 * kappa_t)
            denom = 1.0 - (1.0 - decay2) * th2
            worst = max(worst, decay2 - denom)
    return worst


def _fit_geometric_roundtrip(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff, default=40))
    params = states.ThermoParams.from_tau(1.7)
    fit = thermo.fit_geometric(states.chaotic_state(params, layout))
    return abs(fit.q - params.q)


def _effective_temperature_roundtrip(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff, default=33))
    rho = states.chaotic_state(states.ThermoParams.from_tau(1.0), layout)
    return abs(thermo.effective_temperature(rho) - 1.0)


def _fit_rejects_offdiagonal(cutoff: int | None) -> float:
    layout = fock.ModeLayout(_single_cutoff(cutoff, default=8))
    vec = np.zeros(layout.dim, dtype=np.complex128)
    vec[0] = vec[1] = 1.0 / math.sqrt(2.0)
    rho = fock.outer(fock.PureState(layout, vec))
    try:
        thermo.fit_geometric(rho)
    except thermo.NotChaoticError:
        return 0.0
    return 1.0


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    tol: float
    fn: Callable[[int | None], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    observed: float
    tol: float
    passed: bool


CHECKS: tuple[Check, ...] = (
    Check("ladder_adjoint", "fock", 1e-14, _ladder_adjoint),
    Check("commutator_interior", "fock", 1e-13, _commutator_interior),
    Check("number_from_ladders", "fock", 1e-12, _number_from_ladders),
    Check("partial_trace_tensor", "fock", 1e-12, _partial_trace_tensor),
    Check("squeeze_unitarity", "states", 1e-10, _squeeze_unitarity),
    Check("squeeze_generates_thermal_vacuum", "states", 1e-6, _squeeze_generates_thermal_vacuum),
    Check("tfd_identity", "states", 1e-10, _tfd_identity),
    Check("evolved_series_vs_expm", "states", 1e-10, _evolved_series_vs_expm),
    Check("evolved_tilde_reduction_thermal", "states", 1e-12, _evolved_tilde_reduction_thermal),
    Check("kraus_completeness", "channel", 1e-12, _kraus_completeness),
    Check("trace_preservation", "channel", 1e-12, _trace_preservation),
    Check("mean_photon_decay", "channel", 1e-10, _mean_photon_decay),
    Check("kraus_vs_lindblad", "channel", 1e-6, _kraus_vs_lindblad),
    Check("damped_state_positive", "channel", 1e-10, _damped_state_positive),
    Check("structured_vs_explicit", "channel", 1e-12, _structured_vs_explicit),
    Check("cooling_law_vs_nbar_oracle", "thermo", 1e-12, _cooling_law_vs_nbar_oracle),
    Check("theta_prime_vs_cooling_law", "thermo", 1e-12, _theta_prime_vs_cooling_law),
    Check("cooling_denominator_margin", "thermo", 0.0, _cooling_denominator_margin),
    Check("fit_geometric_roundtrip", "thermo", 1e-12, _fit_geometric_roundtrip),
    Check("effective_temperature_roundtrip", "thermo", 1e-10, _effective_temperature_roundtrip),
    Check("fit_rejects_offdiagonal", "thermo", 0.5, _fit_rejects_offdiagonal),
)


def select_checks(suite: str) -> list[Check]:
    if suite == "all":
        return list(CHECKS)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    return [c for c in CHECKS if c.suite == suite]


def run_checks(
    suite: str = "all",
    cutoff: int | None = None,
    tol_overrides: dict[str, float] | None = None,
) -> list[CheckResult]:
    """Run the named suite; tol_overrides must name checks in that suite."""
    checks = select_checks(suite)
    overrides = dict(tol_overrides or {})
    known = {c.name for c in checks}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ValueError(f"tolerance override for unknown check(s): {', '.join(unknown)}")
    results = []
    for check in checks:
        tol = overrides.get(check.name, check.tol)
        observed = check.fn(cutoff)
        results.append(CheckResult(check.name, observed, tol, observed < tol))
    return results
