"""Relativistic charged-particle motion in constant fields, and its image
under the moment map.

Integration runs in canonical variables: Hamilton's equations for the
extended Hamiltonian on all ten coordinates. The fields stay constant; the
conjugate momenta ``pix, piy, beta`` pick up ``dpi/dt = q r`` and
``dbeta/dt = -dH/dB``. Those enter the K observables, so they have to be
carried along for K to be conserved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import solve_ivp

from .casimir_orbits import casimir_values
from .extended_phase import (
    ExtendedPhaseState,
    ParticleParams,
    hamilton_rhs,
    hamiltonian,
    moment_values,
    velocity,
)
from .orbit_dynamics import IntegrationError, IntegratorConfig, closed_form

_CHART_IDX = [1, 2, 4, 5, 6, 7]
_FIELD_IDX = [4, 5, 8]


@dataclass
class ClassicalTrajectory:
    t: NDArray[np.float64]
    states: NDArray[np.float64]  # (n, 10)
    params: ParticleParams
    diagnostics: dict = field(default_factory=dict)

    @property
    def samples(self) -> list[ExtendedPhaseState]:
        return [ExtendedPhaseState.from_array(z, t) for z, t in zip(self.states, self.t)]

    def energy(self) -> NDArray[np.float64]:
        return hamiltonian(self.states, self.params)

    def velocities(self) -> NDArray[np.float64]:
        return velocity(self.states, self.params)

    def moments(self, frozen_time: bool = False) -> NDArray[np.float64]:
        """Moment map along the trajectory, shape ``(n, 9)``.

        With ``frozen_time`` the observables are the ``t = 0`` members of the
        family (orbit coordinates); otherwise each sample uses its own time.
        """
        t = 0.0 if frozen_time else self.t
        return moment_values(self.states, t, self.params)


def integrate_lorentz(
    s0: ExtendedPhaseState,
    pp: ParticleParams,
    t_end: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> ClassicalTrajectory:
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    t_eval = s0.t + np.linspace(0.0, t_end, config.samples)
    sol = solve_ivp(
        lambda t, z: hamilton_rhs(z, pp),
        (s0.t, s0.t + t_end),
        s0.as_array(),
        method=config.method,
        t_eval=t_eval,
        rtol=config.rtol,
        atol=config.atol,
    )
    if not sol.success:
        raise IntegrationError(f"Lorentz integration failed: {sol.message} (nfev={sol.nfev})")
    traj = ClassicalTrajectory(sol.t, sol.y.T.copy(), pp)
    H = traj.energy()
    v = traj.velocities()
    c2 = pp.c**2
    speed_margin = float(np.min(c2 - np.sum(v * v, axis=1)) / c2)
    if speed_margin <= 0:
        raise IntegrationError(f"speed bound violated (margin {speed_margin:.3g}); integration is unreliable")
    Emag = math.hypot(s0.Ex, s0.Ey)
    traj.diagnostics = {
        "energy_drift": float(np.max(np.abs(H - H[0])) / max(1.0, abs(H[0]))),
        "speed_margin": speed_margin,
        "field_drift": float(np.max(np.abs(traj.states[:, _FIELD_IDX] - traj.states[0, _FIELD_IDX]))),
        "unbounded_drift": bool(Emag >= pp.c * abs(s0.B)),
        "nfev": int(sol.nfev),
    }
    return traj


def _scaled_dev(a: NDArray, b: NDArray) -> float:
    """Max ``|a - b|`` per column, scaled by ``1 + max|b|`` of that column."""
    scale = 1.0 + np.max(np.abs(b), axis=0)
    return float(np.max(np.abs(a - b) / scale))


@dataclass
class EquivalenceReport:
    orbit_deviation: float  # t=0 moments vs orbit closed form
    conserved_drift: float  # B, E, H, J constant
    moment_drift: float  # full time-dependent moment map constant
    casimir_drift: float
    energy_drift: float
    speed_margin: float
    unbounded_drift: bool

    def max_deviation(self) -> float:
        return max(self.orbit_deviation, self.conserved_drift, self.moment_drift, self.casimir_drift)

    def passed(self, threshold: float = 1e-7) -> bool:
        return self.max_deviation() < threshold


def equivalence_report(traj: ClassicalTrajectory) -> EquivalenceReport:
    pp = traj.params
    xi0 = traj.moments(frozen_time=True)
    t = traj.t - traj.t[0]
    z = xi0[:, _CHART_IDX]
    # orbit closed form starts from the first sample's t=0 observables
    exact = closed_form(z[0], t, pp.c)
    const_idx = [0, 1, 2, 3, 8]
    full = traj.moments()
    C = casimir_values(xi0, pp.c)
    return EquivalenceReport(
        orbit_deviation=_scaled_dev(z, exact),
        conserved_drift=_scaled_dev(xi0[:, const_idx], np.broadcast_to(xi0[0, const_idx], xi0[:, const_idx].shape)),
        moment_drift=_scaled_dev(full, np.broadcast_to(full[0], full.shape)),
        casimir_drift=_scaled_dev(C, np.broadcast_to(C[0], C.shape)),
        energy_drift=traj.diagnostics["energy_drift"],
        speed_margin=traj.diagnostics["speed_margin"],
        unbounded_drift=traj.diagnostics["unbounded_drift"],
    )


def equivalence_check(
    s0: ExtendedPhaseState,
    pp: ParticleParams,
    t_end: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> EquivalenceReport:
    """Integrate the Lorentz motion and test the moment-mapped trajectory
    against the orbit equations of motion."""
    if pp.q * s0.B == 0:
        raise ValueError("equivalence check needs qB != 0 (orbit chart requires B != 0)")
    return equivalence_report(integrate_lorentz(s0, pp, t_end, config))


# --- cyclotron oracle -----------------------------------------------------

def cyclotron_prediction(p: float, pp: ParticleParams, B: float) -> tuple[float, float]:
    """Radius ``p / |qB|`` and period ``2 pi gamma m0 / |qB|`` for kinetic momentum ``p``."""
    gamma = math.sqrt(1.0 + (p / (pp.m0 * pp.c)) ** 2)
    qB = abs(pp.q * B)
    return p / qB, 2 * math.pi * gamma * pp.m0 / qB


def fit_circle(xy: NDArray[np.float64]) -> tuple[float, float, float]:
    """Algebraic least-squares circle fit; returns ``(xc, yc, r)``."""
    x, y = xy[:, 0], xy[:, 1]
    A = np.column_stack([x, y, np.ones_like(x)])
    rhs = x * x + y * y
    (a, b, k), *_ = np.linalg.lstsq(A, rhs, rcond=None)
    xc, yc = a / 2, b / 2
    return xc, yc, math.sqrt(k + xc * xc + yc * yc)


def measure_gyration(
    s0: ExtendedPhaseState,
    pp: ParticleParams,
    t_span: float,
    config: IntegratorConfig = IntegratorConfig(),
) -> tuple[float, float]:
    """Measured ``(radius, period)`` of motion in a pure magnetic field.

    The period is the spacing of successive downward zero crossings of the
    kinetic momentum component ``py``, located by event root-finding.
    """
    if s0.Ex or s0.Ey:
        raise ValueError("gyration measurement needs E = 0")
    q = pp.q

    def py_kin(t, z):
        return z[3] - 0.5 * q * z[8] * z[0]

    py_kin.direction = -1.0
    sol = solve_ivp(
        lambda t, z: hamilton_rhs(z, pp),
        (0.0, t_span),
        s0.as_array(),
        method=config.method,
        t_eval=np.linspace(0.0, t_span, config.samples),
        rtol=config.rtol,
        atol=config.atol,
        events=py_kin,
    )
    if not sol.success:
        raise IntegrationError(sol.message)
    crossings = sol.t_events[0]
    crossings = crossings[crossings > 1e-9 * t_span]
    if len(crossings) < 2:
        raise IntegrationError("fewer than two gyration crossings in the time span")
    period = float(np.mean(np.diff(crossings)))
    _, _, r = fit_circle(sol.y[:2].T)
    return r, period
