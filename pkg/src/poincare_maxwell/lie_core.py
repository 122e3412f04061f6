"""The Lie algebra of the Poincare-Maxwell group PM(2+1).

Basis order is fixed as ``(B, Ex, Ey, H, Px, Py, Kx, Ky, J)``; generator
indices are 1-based (``B = 1`` ... ``J = 9``) everywhere in the public API,
while numpy arrays are indexed from zero as usual.

Structure constants are kept exactly as ``(integer, power of c)`` pairs so
that antisymmetry and the Jacobi identity can be checked in integer
arithmetic. Floating-point tensors are generated from that table for a given
value of ``c``.

Algebra elements and coalgebra points are plain length-9 numpy vectors in
this basis (or its dual).
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import astuple, dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Mapping, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

DIM = 9
BASIS = ("B", "Ex", "Ey", "H", "Px", "Py", "Kx", "Ky", "J")


class Generator(IntEnum):
    B = 1
    Ex = 2
    Ey = 3
    H = 4
    Px = 5
    Py = 6
    Kx = 7
    Ky = 8
    J = 9

    @property
    def pos(self) -> int:
        """Zero-based array position."""
        return self.value - 1


GeneratorLike = Union[Generator, int, str]

# (coefficient, power of c) for a single term of c_ij^k
ExactConstant = tuple[int, int]
StructureTable = Mapping[tuple[int, int], Mapping[int, ExactConstant]]


def as_generator(i: GeneratorLike) -> Generator:
    if isinstance(i, Generator):
        return i
    if isinstance(i, str):
        try:
            return Generator[i]
        except KeyError:
            raise ValueError(f"unknown generator name {i!r}") from None
    if isinstance(i, (int, np.integer)) and not isinstance(i, bool):
        if 1 <= i <= DIM:
            return Generator(int(i))
    raise ValueError(f"generator index must be in 1..{DIM} or a name, got {i!r}")


def basis_vector(i: GeneratorLike) -> NDArray[np.float64]:
    e = np.zeros(DIM)
    e[as_generator(i).pos] = 1.0
    return e


def _build_table() -> dict[tuple[int, int], dict[int, ExactConstant]]:
    G = Generator
    # non-vanishing brackets [X, Y] = sum_k (coef * c**power) Z_k, i < j only
    upper = {
        (G.H, G.Kx): {G.Px: (-1, 2)},
        (G.H, G.Ky): {G.Py: (-1, 2)},
        (G.B, G.Kx): {G.Ey: (1, 0)},
        (G.B, G.Ky): {G.Ex: (-1, 0)},
        (G.Px, G.Kx): {G.H: (-1, 0)},
        (G.Py, G.Ky): {G.H: (-1, 0)},
        (G.H, G.Px): {G.Ex: (1, 0)},
        (G.H, G.Py): {G.Ey: (1, 0)},
        (G.Kx, G.Ky): {G.J: (-1, 2)},
        (G.Ex, G.Ky): {G.B: (-1, 2)},
        (G.Ey, G.Kx): {G.B: (1, 2)},
        (G.Px, G.J): {G.Py: (-1, 0)},
        (G.Py, G.J): {G.Px: (1, 0)},
        (G.Px, G.Py): {G.B: (-1, 0)},
        (G.Kx, G.J): {G.Ky: (-1, 0)},
        (G.Ky, G.J): {G.Kx: (1, 0)},
        (G.Ex, G.J): {G.Ey: (-1, 0)},
        (G.Ey, G.J): {G.Ex: (1, 0)},
    }
    table: dict[tuple[int, int], dict[int, ExactConstant]] = {}
    for (i, j), terms in upper.items():
        table[(int(i), int(j))] = {int(k): v for k, v in terms.items()}
        table[(int(j), int(i))] = {int(k): (-a, p) for k, (a, p) in terms.items()}
    return table


STRUCTURE_CONSTANTS: StructureTable = _build_table()


@dataclass(frozen=True)
class StructureConstants:
    """Exact structure constants c_ij^k of PM(2+1).

    ``entries`` maps 1-based ``(i, j)`` to ``{k: (coef, power)}`` meaning
    ``c_ij^k = coef * c**power``. Missing pairs vanish.
    """

    entries: StructureTable = field(default_factory=lambda: STRUCTURE_CONSTANTS)

    def exact(self, i: GeneratorLike, j: GeneratorLike, k: GeneratorLike) -> ExactConstant:
        i, j, k = as_generator(i), as_generator(j), as_generator(k)
        return self.entries.get((int(i), int(j)), {}).get(int(k), (0, 0))

    def tensor(self, c: float = 1.0) -> NDArray[np.float64]:
        return structure_tensor(c, self.entries)


def structure_tensor(c: float = 1.0, table: StructureTable = STRUCTURE_CONSTANTS) -> NDArray[np.float64]:
    """Dense ``(9, 9, 9)`` array ``T[i, j, k] = c_ij^k`` (zero-based)."""
    if table is STRUCTURE_CONSTANTS:
        return _default_tensor(float(c)).copy()
    return _tensor_from(table, float(c))


def _tensor_from(table: StructureTable, c: float) -> NDArray[np.float64]:
    T = np.zeros((DIM, DIM, DIM))
    for (i, j), terms in table.items():
        for k, (a, p) in terms.items():
            T[i - 1, j - 1, k - 1] = a * c**p
    return T


@lru_cache(maxsize=16)
def _default_tensor(c: float) -> NDArray[np.float64]:
    T = _tensor_from(STRUCTURE_CONSTANTS, c)
    T.setflags(write=False)
    return T


# --- exact checks ---------------------------------------------------------

def antisymmetry_violations(table: StructureTable = STRUCTURE_CONSTANTS) -> list[tuple[int, int, int]]:
    """Triples ``(i, j, k)`` where ``c_ij^k != -c_ji^k`` exactly."""
    bad = []
    for i in range(1, DIM + 1):
        for j in range(1, DIM + 1):
            a = table.get((i, j), {})
            b = table.get((j, i), {})
            for k in set(a) | set(b):
                ca, pa = a.get(k, (0, 0))
                cb, pb = b.get(k, (0, 0))
                if ca == 0 and cb == 0:
                    continue
                if ca != -cb or pa != pb:
                    bad.append((i, j, k))
    return bad


def jacobi_exact(table: StructureTable = STRUCTURE_CONSTANTS) -> dict[tuple[int, int, int, int], dict[int, int]]:
    """Nonzero Jacobiator components as polynomials in c.

    Returns ``{(i, j, k, l): {power: coef}}`` for every component of
    ``sum_m c_ij^m c_mk^l + c_jk^m c_mi^l + c_ki^m c_mj^l`` that is not
    identically zero. An empty dict means the identity holds exactly.
    """
    out = {}
    rng = range(1, DIM + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                acc: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
                for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, (c1, p1) in table.get((a, b), {}).items():
                        for l, (c2, p2) in table.get((m, d), {}).items():
                            acc[l][p1 + p2] += c1 * c2
                for l, poly in acc.items():
                    poly = {p: v for p, v in poly.items() if v != 0}
                    if poly:
                        out[(i, j, k, l)] = poly
    return out


def _jacobiator(T: NDArray[np.float64]) -> NDArray[np.float64]:
    # J[i,j,k,l] = T[i,j,m] T[m,k,l] + cyclic in (i, j, k)
    return (np.einsum("ijm,mkl->ijkl", T, T)
            + np.einsum("jkm,mil->ijkl", T, T)
            + np.einsum("kim,mjl->ijkl", T, T))


def jacobi_residual(c: float = 1.0, table: StructureTable = STRUCTURE_CONSTANTS) -> float:
    """Max Jacobiator entry in floating point, each entry relative to the sum
    of the absolute values of its terms (so the measure is scale free in c)."""
    T = structure_tensor(c, table)
    jac = np.abs(_jacobiator(T))
    size = _jacobiator(np.abs(T))
    mask = size > 0
    if not mask.any():
        return 0.0
    return float(np.max(jac[mask] / size[mask]))


# --- bracket and adjoint --------------------------------------------------

def bracket(X: ArrayLike, Y: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """Lie bracket ``Z_k = sum_ij X_i Y_j c_ij^k``."""
    T = _default_tensor(float(c))
    return np.einsum("i,j,ijk->k", np.asarray(X, float), np.asarray(Y, float), T)


def ad_matrix(i: GeneratorLike, c: float = 1.0) -> NDArray[np.float64]:
    """Matrix of ``ad_{e_i}``: entry ``(k, j)`` is ``c_ij^k``.

    With this layout ``ad_matrix(i) @ Y == bracket(e_i, Y)``.
    """
    g = as_generator(i)
    return _default_tensor(float(c))[g.pos].T.copy()


def lie_poisson_matrix(xi: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """Antisymmetric matrix ``M_ij(xi) = c_ij^k xi_k`` on the dual space."""
    T = _default_tensor(float(c))
    return np.einsum("ijk,...k->...ij", T, np.asarray(xi, float))


# --- exponentials ---------------------------------------------------------

def exp_ad_closed(i: GeneratorLike, s: float, c: float = 1.0) -> NDArray[np.float64]:
    """Closed form of ``expm(s * ad_matrix(i))``."""
    g = as_generator(i)
    M = np.eye(DIM)
    G = Generator

    def put(row, col, val):
        M[row.pos, col.pos] = val

    if g is G.B:
        put(G.Ex, G.Ky, -s)
        put(G.Ey, G.Kx, s)
    elif g is G.Ex:
        put(G.B, G.Ky, -c**2 * s)
        put(G.Ey, G.J, -s)
    elif g is G.Ey:
        put(G.B, G.Kx, c**2 * s)
        put(G.Ex, G.J, s)
    elif g is G.H:
        put(G.Ex, G.Px, s)
        put(G.Ex, G.Kx, -0.5 * c**2 * s**2)
        put(G.Ey, G.Py, s)
        put(G.Ey, G.Ky, -0.5 * c**2 * s**2)
        put(G.Px, G.Kx, -c**2 * s)
        put(G.Py, G.Ky, -c**2 * s)
    elif g is G.Px:
        put(G.B, G.Py, -s)
        put(G.B, G.J, 0.5 * s**2)
        put(G.Ex, G.H, -s)
        put(G.Ex, G.Kx, 0.5 * s**2)
        put(G.H, G.Kx, -s)
        put(G.Py, G.J, -s)
    elif g is G.Py:
        put(G.B, G.Px, s)
        put(G.B, G.J, 0.5 * s**2)
        put(G.Ey, G.H, -s)
        put(G.Ey, G.Ky, 0.5 * s**2)
        put(G.H, G.Ky, -s)
        put(G.Px, G.J, s)
    elif g in (G.Kx, G.Ky):
        ch, sh = math.cosh(c * s), math.sinh(c * s)
        if g is G.Kx:
            blocks = [
                (G.B, G.Ey, -c * sh, -sh / c),
                (G.H, G.Px, sh / c, c * sh),
                (G.Ky, G.J, -sh / c, -c * sh),
            ]
        else:
            blocks = [
                (G.B, G.Ex, c * sh, sh / c),
                (G.H, G.Py, sh / c, c * sh),
                (G.Kx, G.J, sh / c, c * sh),
            ]
        for a, b, ab, ba in blocks:
            put(a, a, ch)
            put(b, b, ch)
            put(a, b, ab)
            put(b, a, ba)
    elif g is G.J:
        co, si = math.cos(s), math.sin(s)
        for a, b in ((G.Ex, G.Ey), (G.Px, G.Py), (G.Kx, G.Ky)):
            put(a, a, co)
            put(b, b, co)
            put(a, b, -si)
            put(b, a, si)
    return M


def exp_matrix_generic(M: ArrayLike) -> NDArray[np.float64]:
    """Matrix exponential by scaling and squaring around a Taylor series.

    The matrix is scaled by ``2**-s`` until its 1-norm is at most 1/2, the
    series is summed until the next term is below machine precision relative
    to the partial sum, and the result is squared ``s`` times.

    Raises
    ------
    OverflowError
        If the input norm is not finite or the result overflows.
    """
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    norm = np.linalg.norm(A, 1) if A.size else 0.0
    if not np.isfinite(norm):
        raise OverflowError("matrix exponential: input has non-finite entries")
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    # e^{norm} overflows float64 for norm beyond ~709
    if norm > 700.0:
        raise OverflowError(f"matrix exponential: norm {norm:.3g} too large")
    A = A / 2.0**s
    n = A.shape[0]
    result = np.eye(n)
    term = np.eye(n)
    eps = np.finfo(float).eps
    for k in range(1, 60):
        term = term @ A / k
        result = result + term
        if np.abs(term).max() <= eps * np.abs(result).max():
            break
    for _ in range(s):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise OverflowError("matrix exponential overflowed during squaring")
    return result


# --- group action ---------------------------------------------------------

@dataclass(frozen=True)
class GroupParams:
    """Parameters of ``g = e^{bB} e^{dx Ex} e^{dy Ey} e^{tau H} e^{ax Px}
    e^{ay Py} e^{nx Kx} e^{ny Ky} e^{phi J}``.

    ``phi`` is stored unreduced.
    """

    b: float = 0.0
    dx: float = 0.0
    dy: float = 0.0
    tau: float = 0.0
    ax: float = 0.0
    ay: float = 0.0
    nx: float = 0.0
    ny: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in astuple(self)):
            raise ValueError("group parameters must be finite")

    def as_array(self) -> NDArray[np.float64]:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, a: ArrayLike) -> "GroupParams":
        return cls(*(float(v) for v in np.asarray(a, float).ravel()))

    @classmethod
    def random(cls, rng: np.random.Generator, low: float = -1.0, high: float = 1.0) -> "GroupParams":
        return cls.from_array(rng.uniform(low, high, DIM))


def coadjoint_matrix(g: GroupParams, c: float = 1.0) -> NDArray[np.float64]:
    """``e^{-phi ad_J} e^{-ny ad_Ky} ... e^{-b ad_B}`` (reverse order, negated).

    The matrix acts on coalgebra coordinates written as a *row* vector,
    ``xi' = xi @ M``; see :func:`coad_apply`.
    """
    params = g.as_array()
    M = np.eye(DIM)
    for gen in reversed(Generator):
        M = M @ exp_ad_closed(gen, -params[gen.pos], c)
    return M


def coad_apply(g: GroupParams, xi: ArrayLike, c: float = 1.0) -> NDArray[np.float64]:
    """Coadjoint action of ``g`` on the coalgebra point ``xi``."""
    return np.asarray(xi, float) @ coadjoint_matrix(g, c)
