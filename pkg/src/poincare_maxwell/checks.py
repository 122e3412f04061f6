"""Deterministic check suites shared by the CLI and the acceptance tests."""
from __future__ import annotations

import numpy as np

from . import lie_core as lc
from .casimir_orbits import casimir_values, kernel_residual
from .extended_phase import ParticleParams, bracket_table_check
from .report import CheckResult

# thresholds
JACOBI_FLOAT_TOL = 1e-14
EXP_TOL = 1e-10
SUBGROUP_TOL = 1e-12
INVARIANCE_TOL = 1e-9
KERNEL_TOL = 1e-10
BRACKET_TABLE_TOL = 1e-10


def corrupted_table() -> dict:
    """Structure constants with ``[Kx, Ky] = -2 c^2 J``; breaks Jacobi."""
    table = {k: dict(v) for k, v in lc.STRUCTURE_CONSTANTS.items()}
    G = lc.Generator
    table[(G.Kx, G.Ky)] = {int(G.J): (-2, 2)}
    table[(G.Ky, G.Kx)] = {int(G.J): (2, 2)}
    return table


def exp_errors(gen: lc.GeneratorLike, params: np.ndarray, c: float = 1.0) -> np.ndarray:
    """Scaled inf-norm distance between closed-form and generic exponentials."""
    A = lc.ad_matrix(gen, c)
    out = np.empty(len(params))
    for n, s in enumerate(params):
        ref = lc.exp_matrix_generic(s * A)
        diff = np.linalg.norm(lc.exp_ad_closed(gen, s, c) - ref, np.inf)
        out[n] = diff / max(1.0, np.linalg.norm(ref, np.inf))
    return out


def subgroup_error(gen: lc.GeneratorLike, params: np.ndarray, c: float = 1.0) -> float:
    return max(
        float(np.abs(lc.exp_ad_closed(gen, s, c) @ lc.exp_ad_closed(gen, -s, c) - np.eye(lc.DIM)).max())
        for s in params
    )


def invariance_error(rng: np.random.Generator, samples: int, c: float = 1.0) -> float:
    """Max ``|C_k(coAd_g xi) - C_k(xi)| / (1 + |C_k(xi)|)`` over random (g, xi)."""
    worst = 0.0
    for _ in range(samples):
        xi = rng.uniform(-2.0, 2.0, lc.DIM)
        g = lc.GroupParams.random(rng, -1.0, 1.0)
        before = casimir_values(xi, c)
        after = casimir_values(lc.coad_apply(g, xi, c), c)
        worst = max(worst, float(np.max(np.abs(after - before) / (1.0 + np.abs(before)))))
    return worst


def kernel_error(rng: np.random.Generator, samples: int, c: float = 1.0) -> float:
    """Max kernel residual scaled by ``1 + |xi|^2``."""
    worst = 0.0
    for _ in range(samples):
        xi = rng.uniform(-2.0, 2.0, lc.DIM)
        r = kernel_residual(xi, c) / (1.0 + xi @ xi)
        worst = max(worst, float(r.max()))
    return worst


def algebra_suite(seed: int = 0, samples: int = 200, corrupt: bool = False) -> list[CheckResult]:
    """Structure constants, exponentials and the coadjoint action."""
    table = corrupted_table() if corrupt else lc.STRUCTURE_CONSTANTS
    rng = np.random.default_rng(seed)
    results = [
        CheckResult("antisymmetry_exact", float(len(lc.antisymmetry_violations(table))), 0.0),
        CheckResult("jacobi_exact", float(len(lc.jacobi_exact(table))), 0.0),
        CheckResult("jacobi_float_c1", lc.jacobi_residual(1.0, table), JACOBI_FLOAT_TOL),
        CheckResult("jacobi_float_c3e8", lc.jacobi_residual(3e8, table), JACOBI_FLOAT_TOL),
    ]
    for gen in lc.Generator:
        s = rng.uniform(-2.0, 2.0, samples)
        results.append(CheckResult(f"exp_closed_{gen.name}", float(exp_errors(gen, s).max()), EXP_TOL))
    s = rng.uniform(-2.0, 2.0, 20)
    results.append(CheckResult(
        "exp_one_parameter_inverse", max(subgroup_error(g, s) for g in lc.Generator), SUBGROUP_TOL
    ))
    ident = float(np.abs(lc.coadjoint_matrix(lc.GroupParams()) - np.eye(lc.DIM)).max())
    results.append(CheckResult("coadjoint_identity", ident, 0.0))
    results.append(CheckResult("coadjoint_casimir_invariance", invariance_error(rng, samples), INVARIANCE_TOL))
    results.append(CheckResult("casimir_kernel", kernel_error(rng, samples), KERNEL_TOL))
    return results


def bracket_suite(seed: int = 0, samples: int = 100, pp: ParticleParams = ParticleParams()) -> list[CheckResult]:
    rep = bracket_table_check(samples, seed, pp)
    return [CheckResult("bracket_table", rep.max_rel, BRACKET_TABLE_TOL)]
