"""Casimir invariants, orbit classification and the (E, P, K) orbit chart."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .lie_core import DIM, lie_poisson_matrix

CHART_EPS = 1e-9
CLASSIFY_TOL = 1e-9

TAGS = (
    "TwoSheetPlus",
    "TwoSheetMinus",
    "ConePlus",
    "ConeMinus",
    "PoincareDegenerate",
    "OneSheetPlus",
    "OneSheetMinus",
)


class ChartError(ValueError):
    """Base class for orbit-chart failures."""


class ChartDomainError(ChartError):
    """``E^2 < C0``: the chart formula for B has no real solution."""


class ChartSingularError(ChartError):
    """``|B|`` too small for the (E, P, K) chart to be valid."""


class CasimirTriple(NamedTuple):
    C0: float
    C1: float
    C2: float


def _unpack(xi):
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] != DIM:
        raise ValueError(f"coalgebra point must have {DIM} coordinates")
    return np.moveaxis(xi, -1, 0)


def casimir_values(xi: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """Vectorised Casimirs: array of shape ``(..., 3)``."""
    B, Ex, Ey, H, Px, Py, Kx, Ky, J = _unpack(xi)
    c2 = c * c
    C0 = Ex**2 + Ey**2 - c2 * B**2
    C1 = H**2 - c2 * (Px**2 + Py**2) - 2.0 * (Kx * Ex + Ky * Ey - c2 * B * J)
    C2 = H * B + Px * Ey - Py * Ex
    return np.stack([C0, C1, C2], axis=-1)


def eval_casimirs(xi: ArrayLike, c: float = 1.0) -> CasimirTriple:
    C0, C1, C2 = casimir_values(xi, c)
    return CasimirTriple(float(C0), float(C1), float(C2))


def casimir_gradients(xi: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """Analytic gradients, shape ``(3, 9)``; row k is grad C_k."""
    B, Ex, Ey, H, Px, Py, Kx, Ky, J = np.asarray(xi, dtype=float)
    c2 = c * c
    g0 = [-2 * c2 * B, 2 * Ex, 2 * Ey, 0, 0, 0, 0, 0, 0]
    g1 = [2 * c2 * J, -2 * Kx, -2 * Ky, 2 * H, -2 * c2 * Px, -2 * c2 * Py, -2 * Ex, -2 * Ey, 2 * c2 * B]
    g2 = [H, -Py, Px, B, Ey, -Ex, 0, 0, 0]
    return np.array([g0, g1, g2], dtype=float)


def numerical_gradient(f, xi: ArrayLike) -> NDArray[np.float64]:
    """Central differences with step ``1e-6 * (1 + |x_i|)``."""
    xi = np.asarray(xi, dtype=float)
    out = []
    for i in range(xi.size):
        h = 1e-6 * (1.0 + abs(xi[i]))
        xp, xm = xi.copy(), xi.copy()
        xp[i] += h
        xm[i] -= h
        out.append((np.asarray(f(xp)) - np.asarray(f(xm))) / (2 * h))
    return np.stack(out, axis=-1)


def kernel_residual(xi: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """``||M(xi) grad C_k(xi)||`` for k = 0, 1, 2."""
    M = lie_poisson_matrix(xi, c)
    G = casimir_gradients(xi, c)
    return np.linalg.norm(G @ M.T, axis=1)


def casimir_jacobian_rank(xi: ArrayLike, c: float = 1.0, rtol: float = 1e-10) -> int:
    """Rank of the 3x9 Jacobian of (C0, C1, C2) at ``xi``."""
    G = casimir_gradients(xi, c)
    s = np.linalg.svd(G, compute_uv=False)
    return int(np.sum(s > rtol * max(1.0, s[0])))


def bhj_jacobian(B: float, H: float, J: float, c: float = 1.0) -> float:
    """det d(C0, C1, C2)/d(B, H, J), which equals ``4 c**4 B**3``."""
    c2 = c * c
    m = np.array([
        [-2 * c2 * B, 0.0, 0.0],
        [2 * c2 * J, 2 * H, 2 * c2 * B],
        [H, B, 0.0],
    ])
    return float(np.linalg.det(m))


# --- classification -------------------------------------------------------

@dataclass(frozen=True)
class OrbitClass:
    """Orbit type of a coalgebra point.

    ``sign`` is ``sign(B)``; it is 0 for points on the ``B = 0`` plane, in
    which case ``chart_valid`` is False and ``tag`` carries no suffix.
    """

    family: str  # "TwoSheet", "Cone", "OneSheet" or "PoincareDegenerate"
    sign: int
    casimirs: CasimirTriple
    chart_valid: bool

    @property
    def tag(self) -> str:
        if self.family == "PoincareDegenerate" or self.sign == 0:
            return self.family
        return self.family + ("Plus" if self.sign > 0 else "Minus")


def classify(xi: ArrayLike, c: float = 1.0, tol: float = CLASSIFY_TOL) -> OrbitClass:
    if tol <= 0:
        raise ValueError("tol must be positive")
    xi = np.asarray(xi, dtype=float)
    cas = eval_casimirs(xi, c)
    B, Ex, Ey = xi[0], xi[1], xi[2]
    sign = int(np.sign(B)) if abs(B) > _chart_eps(xi) else 0
    if abs(cas.C0) <= tol:
        if max(abs(B), abs(Ex), abs(Ey)) <= tol:
            return OrbitClass("PoincareDegenerate", 0, cas, False)
        family = "Cone"
    elif cas.C0 < 0:
        family = "TwoSheet"
    else:
        family = "OneSheet"
    return OrbitClass(family, sign, cas, sign != 0)


# --- chart ------------------------------------------------------------------

def _chart_eps(xi) -> float:
    return CHART_EPS * max(1.0, float(np.max(np.abs(xi))))


@dataclass(frozen=True)
class OrbitChartPoint:
    """Chart coordinates ``(E, P, K)`` on the orbit fixed by ``casimirs``
    and ``branch = sign(B)``."""

    E: tuple[float, float]
    P: tuple[float, float]
    K: tuple[float, float]
    casimirs: CasimirTriple
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        object.__setattr__(self, "E", tuple(float(v) for v in self.E))
        object.__setattr__(self, "P", tuple(float(v) for v in self.P))
        object.__setattr__(self, "K", tuple(float(v) for v in self.K))
        object.__setattr__(self, "casimirs", CasimirTriple(*(float(v) for v in self.casimirs)))

    @property
    def coords(self) -> NDArray[np.float64]:
        """``(Ex, Ey, Px, Py, Kx, Ky)``."""
        return np.array(self.E + self.P + self.K)

    @classmethod
    def from_coords(cls, z: ArrayLike, casimirs, branch: int) -> "OrbitChartPoint":
        z = np.asarray(z, dtype=float)
        return cls(tuple(z[0:2]), tuple(z[2:4]), tuple(z[4:6]), CasimirTriple(*casimirs), branch)


def chart_bhj(z: ArrayLike, casimirs, branch: int, c: float = 1.0) -> tuple[float, float, float]:
    """``B(E)``, ``H(E, P)`` and ``J(E, P, K)`` from chart coordinates."""
    Ex, Ey, Px, Py, Kx, Ky = np.asarray(z, dtype=float)
    C0, C1, C2 = casimirs
    c2 = c * c
    disc = Ex * Ex + Ey * Ey - C0
    if disc < 0:
        raise ChartDomainError(f"E^2 = {Ex * Ex + Ey * Ey:.6g} < C0 = {C0:.6g}")
    B = branch * math.sqrt(disc) / c
    scale = max(1.0, abs(Ex), abs(Ey), abs(Px), abs(Py), abs(Kx), abs(Ky))
    if abs(B) <= CHART_EPS * scale:
        raise ChartSingularError(f"|B| = {abs(B):.3g} below chart threshold")
    H = (Ex * Py - Ey * Px + C2) / B
    J = (C1 - H * H + c2 * (Px * Px + Py * Py) + 2 * (Kx * Ex + Ky * Ey)) / (2 * c2 * B)
    return B, H, J


def chart_embed(p: OrbitChartPoint, c: float = 1.0) -> NDArray[np.float64]:
    """Coalgebra point ``(B, E, H, P, K, J)`` for a chart point."""
    B, H, J = chart_bhj(p.coords, p.casimirs, p.branch, c)
    return np.array([B, *p.E, H, *p.P, *p.K, J])


def chart_project(xi: ArrayLike, c: float = 1.0) -> OrbitChartPoint:
    xi = np.asarray(xi, dtype=float)
    B = xi[0]
    if abs(B) <= _chart_eps(xi):
        raise ChartSingularError(f"|B| = {abs(B):.3g}: point is off the B != 0 chart")
    return OrbitChartPoint(
        E=(xi[1], xi[2]),
        P=(xi[4], xi[5]),
        K=(xi[6], xi[7]),
        casimirs=eval_casimirs(xi, c),
        branch=1 if B > 0 else -1,
    )


def one_sheet_sample(C0: float, b: float, phi: float, c: float = 1.0) -> tuple[float, float, float]:
    """``(B, Ex, Ey)`` on the ``C0 > 0`` hyperboloid, parametrised by (b, phi).

    Only a sampling helper; it is not used as a chart.
    """
    r2 = C0 + c * c * b * b
    if C0 <= 0:
        raise ValueError("one-sheet parametrisation needs C0 > 0")
    r = math.sqrt(r2)
    return b, r * math.cos(phi), r * math.sin(phi)
