"""Poisson and symplectic structure on the (E, P, K) orbit chart, and the
Hamiltonian flow it generates.

Chart coordinates are ordered ``(Ex, Ey, Px, Py, Kx, Ky)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import solve_ivp

from .casimir_orbits import OrbitChartPoint, casimir_values, chart_bhj

CHART_DIM = 6


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive explicit Runge-Kutta settings (scipy's DOP853 by default)."""

    rtol: float = 1e-12
    atol: float = 1e-12
    method: str = "DOP853"
    samples: int = 1000

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.samples < 2:
            raise ValueError("need at least 2 output samples")


def _poisson_from(B: float, H: float, J: float, c: float) -> NDArray[np.float64]:
    c2 = c * c
    L = np.zeros((CHART_DIM, CHART_DIM))
    L[0, 5] = -c2 * B
    L[1, 4] = c2 * B
    L[2, 3] = -B
    L[2, 4] = -H
    L[3, 5] = -H
    L[4, 5] = -c2 * J
    return L - L.T


def _symplectic_from(B: float, H: float, J: float, c: float) -> NDArray[np.float64]:
    c2 = c * c
    w = np.zeros((CHART_DIM, CHART_DIM))
    w[0, 1] = -J / (c2 * B**2) + H**2 / (c2 * c2 * B**3)
    w[0, 2] = H / (c2 * B**2)
    w[0, 5] = 1.0 / (c2 * B)
    w[1, 3] = H / (c2 * B**2)
    w[1, 4] = -1.0 / (c2 * B)
    w[2, 3] = 1.0 / B
    return w - w.T


def poisson_matrix(p: OrbitChartPoint, c: float = 1.0) -> NDArray[np.float64]:
    """Lie-Poisson tensor restricted to the chart; ``det = c**8 B**6``."""
    B, H, J = chart_bhj(p.coords, p.casimirs, p.branch, c)
    return _poisson_from(B, H, J, c)


def symplectic_matrix(p: OrbitChartPoint, c: float = 1.0) -> NDArray[np.float64]:
    """Closed-form inverse of :func:`poisson_matrix`."""
    B, H, J = chart_bhj(p.coords, p.casimirs, p.branch, c)
    return _symplectic_from(B, H, J, c)


def orbit_hamiltonian(p: OrbitChartPoint, c: float = 1.0) -> float:
    """``(E x P + C2) / B(E)``."""
    return chart_bhj(p.coords, p.casimirs, p.branch, c)[1]


def hamiltonian_chart_gradient(z: ArrayLike, casimirs, branch: int, c: float = 1.0) -> NDArray[np.float64]:
    """Gradient of the orbit Hamiltonian, including the ``dB/dE`` chain term."""
    Ex, Ey, Px, Py, _, _ = np.asarray(z, float)
    B, H, _ = chart_bhj(z, casimirs, branch, c)
    c2 = c * c
    # dB/dE_i = E_i / (c^2 B)
    return np.array([
        Py / B - H * Ex / (c2 * B * B),
        -Px / B - H * Ey / (c2 * B * B),
        -Ey / B,
        Ex / B,
        0.0,
        0.0,
    ])


def chart_vector_field(z: ArrayLike, casimirs, branch: int, c: float = 1.0) -> NDArray[np.float64]:
    B, H, J = chart_bhj(z, casimirs, branch, c)
    return _poisson_from(B, H, J, c) @ hamiltonian_chart_gradient(z, casimirs, branch, c)


def closed_form(z0: ArrayLike, t: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """``E = E0``, ``P = P0 - E0 t``, ``K = K0 + c^2 (P0 t - E0 t^2 / 2)``."""
    z0 = np.asarray(z0, float)
    t = np.asarray(t, float)[:, None]
    E0, P0, K0 = z0[0:2], z0[2:4], z0[4:6]
    E = np.broadcast_to(E0, (t.shape[0], 2))
    P = P0 - E0 * t
    K = K0 + c * c * (P0 * t - 0.5 * E0 * t * t)
    return np.hstack([E, P, K])


@dataclass
class OrbitTrajectory:
    t: NDArray[np.float64]
    numeric: NDArray[np.float64]
    exact: NDArray[np.float64]
    casimirs: tuple[float, float, float]
    branch: int
    c: float
    nfev: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return float(np.max(np.abs(self.numeric - self.exact)))

    def points(self) -> list[OrbitChartPoint]:
        return [OrbitChartPoint.from_coords(z, self.casimirs, self.branch) for z in self.numeric]

    def embedded(self) -> NDArray[np.float64]:
        """Trajectory as coalgebra points, shape ``(n, 9)``."""
        out = np.empty((len(self.t), 9))
        for n, z in enumerate(self.numeric):
            B, H, J = chart_bhj(z, self.casimirs, self.branch, self.c)
            out[n] = (B, z[0], z[1], H, z[2], z[3], z[4], z[5], J)
        return out

    def hamiltonian(self) -> NDArray[np.float64]:
        return self.embedded()[:, 3]

    def casimir_series(self) -> NDArray[np.float64]:
        return casimir_values(self.embedded(), self.c)


def orbit_flow(
    p0: OrbitChartPoint,
    t_end: float,
    config: IntegratorConfig = IntegratorConfig(),
    c: float = 1.0,
) -> OrbitTrajectory:
    """Integrate ``dz/dt = Lambda grad H`` on the chart and pair it with the
    closed-form solution on the same output grid."""
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    z0 = p0.coords
    # validates the starting point
    chart_bhj(z0, p0.casimirs, p0.branch, c)
    t_eval = np.linspace(0.0, t_end, config.samples)
    sol = solve_ivp(
        lambda t, z: chart_vector_field(z, p0.casimirs, p0.branch, c),
        (0.0, t_end),
        z0,
        method=config.method,
        t_eval=t_eval,
        rtol=config.rtol,
        atol=config.atol,
    )
    if not sol.success:
        raise IntegrationError(f"orbit flow failed: {sol.message} (nfev={sol.nfev}, t={sol.t[-1] if sol.t.size else 0.0})")
    traj = OrbitTrajectory(
        t=sol.t,
        numeric=sol.y.T.copy(),
        exact=closed_form(z0, sol.t, c),
        casimirs=tuple(p0.casimirs),
        branch=p0.branch,
        c=c,
        nfev=sol.nfev,
    )
    H = traj.hamiltonian()
    C = traj.casimir_series()
    traj.diagnostics = {
        "hamiltonian_drift": float(np.max(np.abs(H - H[0]))),
        "casimir_drift": float(np.max(np.abs(C - np.asarray(p0.casimirs)))),
        "max_deviation": traj.max_deviation,
    }
    return traj
