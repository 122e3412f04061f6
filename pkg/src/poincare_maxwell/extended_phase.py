"""Extended phase space of a charged particle in constant fields.

The constant fields ``(Ex, Ey, B)`` are promoted to canonical coordinates
with conjugate momenta ``(pix, piy, beta)``. The symmetric gauge
``A = B/2 (-y, x)`` is used throughout.

Coordinate order of state vectors::

    x, y, Px, Py, Ex, Ey, pix, piy, B, beta

Observables carry analytic gradients; finite differences are only an
independent cross-check.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields, replace
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .lie_core import BASIS, DIM, structure_tensor

COORDS = ("x", "y", "Px", "Py", "Ex", "Ey", "pix", "piy", "B", "beta")
NCOORD = len(COORDS)
_IDX = {name: i for i, name in enumerate(COORDS)}
CANONICAL_PAIRS = (("x", "Px"), ("y", "Py"), ("Ex", "pix"), ("Ey", "piy"), ("B", "beta"))


def _poisson_tensor() -> NDArray[np.float64]:
    Om = np.zeros((NCOORD, NCOORD))
    for qn, pn in CANONICAL_PAIRS:
        Om[_IDX[qn], _IDX[pn]] = 1.0
        Om[_IDX[pn], _IDX[qn]] = -1.0
    Om.setflags(write=False)
    return Om


POISSON_TENSOR = _poisson_tensor()


@dataclass(frozen=True)
class ParticleParams:
    q: float = 1.0
    m0: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not self.m0 > 0:
            raise ValueError("rest mass m0 must be positive")
        if not self.c > 0:
            raise ValueError("speed of light c must be positive")


@dataclass(frozen=True)
class ExtendedPhaseState:
    x: float = 0.0
    y: float = 0.0
    Px: float = 0.0
    Py: float = 0.0
    Ex: float = 0.0
    Ey: float = 0.0
    pix: float = 0.0
    piy: float = 0.0
    B: float = 0.0
    beta: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite(astuple(self))):
            raise ValueError("state entries must be finite")

    def as_array(self) -> NDArray[np.float64]:
        """The ten phase-space coordinates (time excluded)."""
        return np.array(astuple(self)[:NCOORD], dtype=float)

    @classmethod
    def from_array(cls, z: ArrayLike, t: float = 0.0) -> "ExtendedPhaseState":
        z = np.asarray(z, dtype=float)
        return cls(*(float(v) for v in z), t=float(t))

    def at_time(self, t: float) -> "ExtendedPhaseState":
        return replace(self, t=float(t))


STATE_FIELDS = tuple(f.name for f in fields(ExtendedPhaseState))


# --- kinetic pieces ---------------------------------------------------------

def _kinetic(z, pp: ParticleParams):
    x, y, Px, Py, Ex, Ey, pix, piy, B, beta = np.moveaxis(np.asarray(z, float), -1, 0)
    q, m, c = pp.q, pp.m0, pp.c
    px = Px + 0.5 * q * B * y
    py = Py - 0.5 * q * B * x
    W = c * np.sqrt(px * px + py * py + (m * c) ** 2)
    return px, py, W


def kinetic_energy(z: ArrayLike, pp: ParticleParams):
    """``c sqrt(p^2 + m0^2 c^2)`` with kinetic momentum ``p = P - qA``."""
    return _kinetic(z, pp)[2]


def velocity(z: ArrayLike, pp: ParticleParams) -> NDArray[np.float64]:
    """``v = c^2 p / W``; shape ``(..., 2)``."""
    px, py, W = _kinetic(z, pp)
    c2 = pp.c**2
    return np.stack([c2 * px / W, c2 * py / W], axis=-1)


def hamiltonian(s: ExtendedPhaseState | ArrayLike, pp: ParticleParams):
    z = s.as_array() if isinstance(s, ExtendedPhaseState) else np.asarray(s, float)
    zz = np.moveaxis(z, -1, 0)
    x, y, Ex, Ey = zz[0], zz[1], zz[4], zz[5]
    H = kinetic_energy(z, pp) - pp.q * (Ex * x + Ey * y)
    return float(H) if np.ndim(H) == 0 else H


def hamiltonian_gradient(z: ArrayLike, pp: ParticleParams) -> NDArray[np.float64]:
    z = np.asarray(z, float)
    x, y, Px, Py, Ex, Ey, pix, piy, B, beta = z
    q = pp.q
    px, py, W = _kinetic(z, pp)
    vx, vy = pp.c**2 * px / W, pp.c**2 * py / W
    g = np.zeros(NCOORD)
    g[0] = -0.5 * q * B * vy - q * Ex
    g[1] = 0.5 * q * B * vx - q * Ey
    g[2] = vx
    g[3] = vy
    g[4] = -q * x
    g[5] = -q * y
    g[8] = 0.5 * q * (vx * y - vy * x)
    return g


def hamilton_rhs(z: ArrayLike, pp: ParticleParams) -> NDArray[np.float64]:
    """``dz/dt = Omega grad H`` in the extended phase space."""
    return POISSON_TENSOR @ hamiltonian_gradient(z, pp)


# --- the nine observables ------------------------------------------------

def moment_values(z: ArrayLike, t, pp: ParticleParams) -> NDArray[np.float64]:
    """``(B, Ex, Ey, H, Px, Py, Kx, Ky, J)`` of the realisation; vectorised.

    ``z`` has shape ``(..., 10)`` and ``t`` broadcasts against ``z[..., 0]``.
    """
    z = np.asarray(z, float)
    x, y, Px, Py, Ex, Ey, pix, piy, B, beta = np.moveaxis(z, -1, 0)
    t = np.asarray(t, float)
    q, c2 = pp.q, pp.c**2
    W = kinetic_energy(z, pp)
    cB = q * B
    cEx, cEy = -q * Ex, -q * Ey
    H = W - q * (Ex * x + Ey * y)
    cPx = Px - 0.5 * q * B * y - q * Ex * t
    cPy = Py + 0.5 * q * B * x - q * Ey * t
    cKx = (x * W - c2 * t * (Px - 0.5 * q * B * y - 0.5 * q * Ex * t)
           - 0.5 * q * Ey * x * y - 0.5 * q * Ex * x * x - c2 * B * piy - Ey * beta)
    cKy = (y * W - c2 * t * (Py + 0.5 * q * B * x - 0.5 * q * Ey * t)
           - 0.5 * q * Ex * x * y - 0.5 * q * Ey * y * y + c2 * B * pix + Ex * beta)
    cJ = x * Py - y * Px + Ex * piy - Ey * pix
    out = np.broadcast_arrays(cB, cEx, cEy, H, cPx, cPy, cKx, cKy, cJ)
    return np.stack(out, axis=-1)


def moment_gradients(z: ArrayLike, t: float, pp: ParticleParams) -> NDArray[np.float64]:
    """Analytic gradients of the nine observables, shape ``(9, 10)``."""
    z = np.asarray(z, float)
    x, y, Px, Py, Ex, Ey, pix, piy, B, beta = z
    q, c2 = pp.q, pp.c**2
    px, py, W = _kinetic(z, pp)
    vx, vy = c2 * px / W, c2 * py / W
    # gradient of W over (x, y, Px, Py, B)
    Wx, Wy, WB = -0.5 * q * B * vy, 0.5 * q * B * vx, 0.5 * q * (vx * y - vy * x)
    ix = _IDX
    G = np.zeros((DIM, NCOORD))

    G[0, ix["B"]] = q
    G[1, ix["Ex"]] = -q
    G[2, ix["Ey"]] = -q

    G[3] = hamiltonian_gradient(z, pp)

    G[4, ix["Px"]] = 1.0
    G[4, ix["y"]] = -0.5 * q * B
    G[4, ix["B"]] = -0.5 * q * y
    G[4, ix["Ex"]] = -q * t

    G[5, ix["Py"]] = 1.0
    G[5, ix["x"]] = 0.5 * q * B
    G[5, ix["B"]] = 0.5 * q * x
    G[5, ix["Ey"]] = -q * t

    Kx = G[6]
    Kx[ix["x"]] = W + x * Wx - 0.5 * q * Ey * y - q * Ex * x
    Kx[ix["y"]] = x * Wy + 0.5 * c2 * t * q * B - 0.5 * q * Ey * x
    Kx[ix["Px"]] = x * vx - c2 * t
    Kx[ix["Py"]] = x * vy
    Kx[ix["B"]] = x * WB + 0.5 * c2 * t * q * y - c2 * piy
    Kx[ix["Ex"]] = 0.5 * c2 * q * t * t - 0.5 * q * x * x
    Kx[ix["Ey"]] = -0.5 * q * x * y - beta
    Kx[ix["piy"]] = -c2 * B
    Kx[ix["beta"]] = -Ey

    Ky = G[7]
    Ky[ix["x"]] = y * Wx - 0.5 * c2 * t * q * B - 0.5 * q * Ex * y
    Ky[ix["y"]] = W + y * Wy - 0.5 * q * Ex * x - q * Ey * y
    Ky[ix["Px"]] = y * vx
    Ky[ix["Py"]] = y * vy - c2 * t
    Ky[ix["B"]] = y * WB - 0.5 * c2 * t * q * x + c2 * pix
    Ky[ix["Ex"]] = -0.5 * q * x * y + beta
    Ky[ix["Ey"]] = 0.5 * c2 * q * t * t - 0.5 * q * y * y
    Ky[ix["pix"]] = c2 * B
    Ky[ix["beta"]] = Ex

    J = G[8]
    J[ix["x"]] = Py
    J[ix["y"]] = -Px
    J[ix["Px"]] = -y
    J[ix["Py"]] = x
    J[ix["Ex"]] = piy
    J[ix["Ey"]] = -pix
    J[ix["pix"]] = -Ey
    J[ix["piy"]] = Ex
    return G


def moment_time_partials(z: ArrayLike, t: float, pp: ParticleParams) -> NDArray[np.float64]:
    """Explicit partial derivatives ``df/dt`` of the nine observables."""
    x, y, Px, Py, Ex, Ey, pix, piy, B, beta = np.asarray(z, float)
    q, c2 = pp.q, pp.c**2
    d = np.zeros(DIM)
    d[4] = -q * Ex
    d[5] = -q * Ey
    d[6] = -c2 * (Px - 0.5 * q * B * y - q * Ex * t)
    d[7] = -c2 * (Py + 0.5 * q * B * x - q * Ey * t)
    return d


def moment_map(s: ExtendedPhaseState, pp: ParticleParams) -> NDArray[np.float64]:
    """Coalgebra point ``(B, Ex, Ey, H, Px, Py, Kx, Ky, J)`` at the state's own time."""
    return moment_values(s.as_array(), s.t, pp)


# --- observables and the bracket ---------------------------------------------

@dataclass(frozen=True)
class Observable:
    """A function on the extended phase space (optionally time dependent).

    ``value(z, t)`` returns a float; ``grad(z, t)`` returns the 10-gradient
    or is None, in which case the bracket falls back to central differences.
    """

    name: str
    value: Callable[[NDArray[np.float64], float], float]
    grad: Optional[Callable[[NDArray[np.float64], float], NDArray[np.float64]]] = None
    dt: Optional[Callable[[NDArray[np.float64], float], float]] = None

    def __call__(self, s: ExtendedPhaseState) -> float:
        return float(self.value(s.as_array(), s.t))


def coordinate(name: str) -> Observable:
    i = _IDX[name]
    e = np.zeros(NCOORD)
    e[i] = 1.0
    return Observable(name, lambda z, t: float(z[i]), lambda z, t: e, lambda z, t: 0.0)


def moment_observables(pp: ParticleParams) -> dict[str, Observable]:
    out = {}
    for k, name in enumerate(BASIS):
        out[name] = Observable(
            name,
            lambda z, t, k=k: float(moment_values(z, t, pp)[k]),
            lambda z, t, k=k: moment_gradients(z, t, pp)[k],
            lambda z, t, k=k: float(moment_time_partials(z, t, pp)[k]),
        )
    return out


def hamiltonian_observable(pp: ParticleParams) -> Observable:
    return Observable(
        "H",
        lambda z, t: float(hamiltonian(z, pp)),
        lambda z, t: hamiltonian_gradient(z, pp),
        lambda z, t: 0.0,
    )


def fd_gradient(f: Callable[[NDArray[np.float64], float], float], z: ArrayLike, t: float) -> NDArray[np.float64]:
    """Central differences, step ``1e-6 * (1 + |z_i|)``."""
    z = np.asarray(z, float)
    g = np.empty(z.size)
    for i in range(z.size):
        h = 1e-6 * (1.0 + abs(z[i]))
        zp, zm = z.copy(), z.copy()
        zp[i] += h
        zm[i] -= h
        g[i] = (f(zp, t) - f(zm, t)) / (2 * h)
    return g


def _gradient(f: Observable, z, t, analytic: bool):
    if analytic and f.grad is not None:
        return np.asarray(f.grad(z, t), float)
    return fd_gradient(f.value, z, t)


def extended_bracket(f: Observable, g: Observable, s: ExtendedPhaseState, analytic: bool = True) -> float:
    """``{f, g}`` summed over the five canonical pairs."""
    z = s.as_array()
    return float(_gradient(f, z, s.t, analytic) @ POISSON_TENSOR @ _gradient(g, z, s.t, analytic))


def bracket_matrix(z: ArrayLike, t: float, pp: ParticleParams) -> NDArray[np.float64]:
    """All 81 brackets ``{f_i, f_j}`` of the nine observables at once."""
    G = moment_gradients(z, t, pp)
    return G @ POISSON_TENSOR @ G.T


# --- sampling and the table check ---------------------------------------

def random_state(rng: np.random.Generator, t_range: tuple[float, float] = (0.0, 0.0)) -> ExtendedPhaseState:
    """Coordinates uniform in [-2, 2]; field magnitudes in [0.2, 2] with random sign."""
    z = rng.uniform(-2.0, 2.0, NCOORD)
    for name in ("Ex", "Ey", "B"):
        z[_IDX[name]] = rng.uniform(0.2, 2.0) * rng.choice((-1.0, 1.0))
    t = rng.uniform(*t_range) if t_range[0] != t_range[1] else t_range[0]
    return ExtendedPhaseState.from_array(z, t)


@dataclass
class BracketTableReport:
    samples: int
    max_abs: float
    max_rel: float
    worst_pair: tuple[str, str]

    def passed(self, threshold: float) -> bool:
        return self.max_rel < threshold


def bracket_table_check(
    samples: int,
    seed: int,
    pp: ParticleParams,
    analytic: bool = True,
    t_range: tuple[float, float] = (-2.0, 2.0),
) -> BracketTableReport:
    """Compare ``{f_i, f_j}`` with ``c_ij^k f_k`` over all 36 unordered pairs.

    The deviation of each pair is scaled by ``1 + |c_ij^k f_k|``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    T = structure_tensor(pp.c)
    obs = moment_observables(pp)
    names = BASIS
    max_abs = max_rel = 0.0
    worst = (names[0], names[0])
    iu = np.triu_indices(DIM, k=1)
    for _ in range(samples):
        s = random_state(rng, t_range)
        z = s.as_array()
        if analytic:
            lhs = bracket_matrix(z, s.t, pp)
        else:
            G = np.array([fd_gradient(obs[n].value, z, s.t) for n in names])
            lhs = G @ POISSON_TENSOR @ G.T
        f = moment_values(z, s.t, pp)
        rhs = T @ f
        err = np.abs(lhs - rhs)[iu]
        rel = err / (1.0 + np.abs(rhs[iu]))
        k = int(np.argmax(rel))
        if rel[k] > max_rel:
            max_rel = float(rel[k])
            worst = (names[iu[0][k]], names[iu[1][k]])
        max_abs = max(max_abs, float(err.max()))
    return BracketTableReport(samples, max_abs, max_rel, worst)


def motion_residuals(s: ExtendedPhaseState, pp: ParticleParams) -> NDArray[np.float64]:
    """``{f, H} + df/dt`` for the nine observables; all vanish on solutions."""
    z = s.as_array()
    G = moment_gradients(z, s.t, pp)
    return G @ POISSON_TENSOR @ hamiltonian_gradient(z, pp) + moment_time_partials(z, s.t, pp)
