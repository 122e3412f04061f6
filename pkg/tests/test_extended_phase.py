import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poincare_maxwell.extended_phase import (
    CANONICAL_PAIRS,
    COORDS,
    POISSON_TENSOR,
    ExtendedPhaseState,
    ParticleParams,
    bracket_matrix,
    bracket_table_check,
    coordinate,
    extended_bracket,
    fd_gradient,
    hamilton_rhs,
    hamiltonian,
    hamiltonian_gradient,
    hamiltonian_observable,
    moment_gradients,
    moment_map,
    moment_observables,
    moment_time_partials,
    moment_values,
    motion_residuals,
    random_state,
    velocity,
)
from poincare_maxwell.lie_core import BASIS, structure_tensor

PP = ParticleParams(q=1.3, m0=0.7, c=1.6)


def test_canonical_pairs():
    s = ExtendedPhaseState(*np.linspace(0.1, 1.0, 10))
    for a in COORDS:
        for b in COORDS:
            expected = 0.0
            if (a, b) in CANONICAL_PAIRS:
                expected = 1.0
            elif (b, a) in CANONICAL_PAIRS:
                expected = -1.0
            assert extended_bracket(coordinate(a), coordinate(b), s) == expected


def test_poisson_tensor_read_only():
    assert np.array_equal(POISSON_TENSOR, -POISSON_TENSOR.T)
    with pytest.raises(ValueError):
        POISSON_TENSOR[0, 0] = 1.0


def test_state_roundtrip_and_validation():
    s = ExtendedPhaseState(1, 2, 3, 4, 5, 6, 7, 8, 9, 10, t=0.5)
    assert ExtendedPhaseState.from_array(s.as_array(), s.t) == s
    assert s.at_time(2.0).t == 2.0
    with pytest.raises(ValueError):
        ExtendedPhaseState(np.nan, 0, 0, 0, 0, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        ParticleParams(m0=0.0)
    with pytest.raises(ValueError):
        ParticleParams(c=-1.0)


def test_particle_at_rest():
    pp = ParticleParams(q=1.0, m0=2.0, c=3.0)
    s = ExtendedPhaseState(0, 0, 0, 0, 0, 0, 0, 0, 0.5, 0)
    assert hamiltonian(s, pp) == pytest.approx(2.0 * 9.0)
    np.testing.assert_array_equal(velocity(s.as_array(), pp), [0.0, 0.0])


def test_lorentz_force_from_hamilton_equations():
    # kinetic momentum p = P - qA with A = (-B y / 2, B x / 2); dp/dt = q(E + v x B)
    rng = np.random.default_rng(0)
    q = PP.q
    for _ in range(20):
        z = random_state(rng).as_array()
        zd = hamilton_rhs(z, PP)
        x, y, Px, Py, Ex, Ey, pix, piy, B, beta = z
        vx, vy = velocity(z, PP)
        assert zd[0] == pytest.approx(vx, rel=1e-14)
        assert zd[1] == pytest.approx(vy, rel=1e-14)
        dpx = zd[2] + 0.5 * q * B * zd[1]
        dpy = zd[3] - 0.5 * q * B * zd[0]
        assert dpx == pytest.approx(q * (Ex + vy * B), rel=1e-12, abs=1e-12)
        assert dpy == pytest.approx(q * (Ey - vx * B), rel=1e-12, abs=1e-12)
        # fields are constants of motion
        np.testing.assert_array_equal(zd[[4, 5, 8]], 0.0)
        # pi = q r
        assert zd[6] == pytest.approx(q * x) and zd[7] == pytest.approx(q * y)


def test_hamiltonian_gradient_vs_fd():
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = random_state(rng).as_array()
        fd = fd_gradient(lambda zz, t: float(hamiltonian(zz, PP)), z, 0.0)
        np.testing.assert_allclose(hamiltonian_gradient(z, PP), fd, atol=1e-7)


def test_moment_gradients_vs_fd():
    rng = np.random.default_rng(2)
    for _ in range(10):
        s = random_state(rng, (-2.0, 2.0))
        z = s.as_array()
        G = moment_gradients(z, s.t, PP)
        for k in range(9):
            fd = fd_gradient(lambda zz, t: float(moment_values(zz, t, PP)[k]), z, s.t)
            np.testing.assert_allclose(G[k], fd, atol=2e-7, rtol=1e-7)


def test_moment_time_partials_vs_fd():
    rng = np.random.default_rng(3)
    s = random_state(rng, (-2.0, 2.0))
    z = s.as_array()
    h = 1e-6
    fd = (moment_values(z, s.t + h, PP) - moment_values(z, s.t - h, PP)) / (2 * h)
    np.testing.assert_allclose(moment_time_partials(z, s.t, PP), fd, atol=1e-7)


def test_moment_values_vectorised():
    rng = np.random.default_rng(4)
    Z = np.array([random_state(rng).as_array() for _ in range(5)])
    t = np.linspace(-1, 1, 5)
    V = moment_values(Z, t, PP)
    assert V.shape == (5, 9)
    for n in range(5):
        np.testing.assert_allclose(V[n], moment_values(Z[n], t[n], PP), rtol=1e-15)


def test_moment_map_simple_values():
    pp = ParticleParams(q=2.0, m0=1.0, c=1.0)
    s = ExtendedPhaseState(0, 0, 0, 0, 0.5, 0, 0, 0, 1.5, 0)
    xi = moment_map(s, pp)
    d = dict(zip(BASIS, xi))
    assert d["B"] == 3.0
    assert d["Ex"] == -1.0
    assert d["H"] == pytest.approx(1.0)
    assert d["Px"] == 0.0 and d["Kx"] == 0.0 and d["J"] == 0.0


def test_bracket_examples():
    rng = np.random.default_rng(5)
    obs = moment_observables(PP)
    c2 = PP.c**2
    for _ in range(5):
        s = random_state(rng, (-2.0, 2.0))
        f = {n: obs[n](s) for n in BASIS}
        assert extended_bracket(obs["Px"], obs["Py"], s) == pytest.approx(-f["B"], abs=1e-12)
        assert extended_bracket(obs["H"], obs["Kx"], s) == pytest.approx(-c2 * f["Px"], abs=1e-10)
        assert extended_bracket(obs["Kx"], obs["Ky"], s) == pytest.approx(-c2 * f["J"], abs=1e-10)
        assert extended_bracket(obs["Ex"], obs["Ky"], s) == pytest.approx(-c2 * f["B"], abs=1e-12)
        assert extended_bracket(obs["B"], obs["Kx"], s) == pytest.approx(f["Ey"], abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-2.0, 2.0))
def test_bracket_homomorphism_property(seed, t):
    s = random_state(np.random.default_rng(seed)).at_time(t)
    z = s.as_array()
    lhs = bracket_matrix(z, t, PP)
    rhs = structure_tensor(PP.c) @ moment_values(z, t, PP)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * (1 + np.abs(rhs).max()))


def test_bracket_table_check_analytic_and_fd():
    rep = bracket_table_check(30, 7, PP)
    assert rep.max_rel < 1e-10
    fd = bracket_table_check(5, 7, PP, analytic=False)
    assert fd.max_rel < 1e-6


def test_bracket_table_detects_wrong_observable():
    # flipping the sign of the c^2 B pi_y term in Kx breaks [Kx, Ky]
    obs = moment_observables(PP)
    s = random_state(np.random.default_rng(8), (-2.0, 2.0))
    wrong = obs["Kx"].value
    from poincare_maxwell.extended_phase import Observable

    def kx_bad(z, t):
        return wrong(z, t) + 2 * PP.c**2 * z[8] * z[7]

    bad = Observable("Kx", kx_bad)
    f = moment_values(s.as_array(), s.t, PP)
    err = extended_bracket(bad, obs["Ky"], s, analytic=False) + PP.c**2 * f[8]
    assert abs(err) > 1e-3


def test_bracket_with_hamiltonian_is_total_derivative():
    rng = np.random.default_rng(9)
    H = hamiltonian_observable(PP)
    for _ in range(10):
        s = random_state(rng, (-2.0, 2.0))
        np.testing.assert_allclose(motion_residuals(s, PP), 0.0, atol=1e-12)
        assert extended_bracket(H, H, s) == pytest.approx(0.0, abs=1e-14)


def test_random_state_ranges():
    rng = np.random.default_rng(10)
    for _ in range(50):
        s = random_state(rng, (-2.0, 2.0))
        z = s.as_array()
        assert np.all(np.abs(z) <= 2.0)
        for v in (s.Ex, s.Ey, s.B):
            assert abs(v) >= 0.2
        assert -2.0 <= s.t <= 2.0
    with pytest.raises(ValueError):
        bracket_table_check(0, 0, PP)


def test_momentum_sign_chain():
    # d/dt of the t = 0 momentum observable is -E (orbit field) = qE (classical field)
    rng = np.random.default_rng(11)
    obs = moment_observables(PP)
    H = hamiltonian_observable(PP)
    for _ in range(5):
        s = random_state(rng).at_time(0.0)
        f = moment_values(s.as_array(), 0.0, PP)
        for i, name in ((1, "Px"), (2, "Py")):
            rate = extended_bracket(obs[name], H, s)
            assert rate == pytest.approx(-f[i], abs=1e-12)
            assert rate == pytest.approx(PP.q * (s.Ex, s.Ey)[i - 1], abs=1e-12)
