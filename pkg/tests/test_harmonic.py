import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmcgk import harmonic as hm
from cmcgk import stencils
from cmcgk.errors import DegenerateInputError, DomainError


def _axes(n=33, half=0.5):
    return hm.rectangle_axes(0, half, half, n, n)


def _fd(values_of, n=33, half=0.5):
    u, v = _axes(n, half)
    Z = u[:, None] + 1j * v[None, :]
    return hm.ComplexGrid(u, v, values_of(Z))


def test_wirtinger_examples():
    for f, fz, fzb in [
        (lambda Z: Z, lambda Z: 1, lambda Z: 0),
        (lambda Z: np.conj(Z), lambda Z: 0, lambda Z: 1),
        (lambda Z: np.abs(Z) ** 2, np.conj, lambda Z: Z),
    ]:
        grid = _fd(f)
        dz, dzb = hm.wirtinger(grid)
        assert np.allclose(dz, fz(grid.z) + 0 * grid.z, atol=1e-12)
        assert np.allclose(dzb, fzb(grid.z) + 0 * grid.z, atol=1e-12)


def test_grid_validation():
    u, v = _axes(4)
    with pytest.raises(ValueError):
        hm.ComplexGrid(u, v, np.zeros((4, 4)))
    u, v = _axes(9)
    with pytest.raises(ValueError):
        hm.ComplexGrid(u, v, np.zeros((9, 9)), mode="exact")


@pytest.mark.parametrize("kind,params", [
    ("identity", {}),
    ("geodesic_tanh", {"a": 0.7}),
    ("geodesic_tanh", {"a": 1.1, "angle": 0.4, "rotation": -1.0}),
    ("holomorphic", {"expression": "z**2/2"}),
    ("holomorphic", {"expression": "0.3*z + 0.2*z**3 + 0.1*I"}),
])
def test_generated_maps_are_harmonic(kind, params):
    u, v = _axes(41, 0.6)
    m = hm.generate(kind, u, v, **params)
    assert m.grid.mode == "exact"
    assert m.max_residual < 1e-8
    assert m.grid.check_consistency() < 1e-4


def test_branch_point_is_rejected():
    # z^2/2 is harmonic but g_z vanishes at the origin
    u, v = _axes(41, 0.6)
    m = hm.generate("holomorphic", u, v, expression="z**2/2")
    assert m.max_residual < 1e-12
    with pytest.raises(DegenerateInputError):
        m.require_valid()
    u, v = hm.rectangle_axes(0.3, 0.2, 0.2, 41, 41)
    hm.generate("holomorphic", u, v, expression="z**2/2").require_valid(1e-8)


def test_identity_values():
    u, v = _axes(33, 0.55)
    m = hm.generate("identity", u, v)
    assert np.array_equal(m.grid.values, m.grid.z)


def test_tanh_ode_symbolically():
    import sympy as sp

    a, s = sp.symbols("a s", real=True)
    g = sp.tanh(a * s)
    assert sp.simplify((1 - g**2) * sp.diff(g, s, 2) + 2 * g * sp.diff(g, s) ** 2) == 0


def test_antiholomorphic_input_is_rejected():
    u, v = _axes()
    m = hm.generate("expression", u, v, expression="zb/2")
    assert m.max_residual < 1e-12
    assert m.antiholomorphic_somewhere
    with pytest.raises(DegenerateInputError):
        m.require_valid()
    const = hm.from_samples(u, v, np.full((len(u), len(v)), 0.2 + 0j))
    with pytest.raises(DegenerateInputError):
        const.require_valid()


def test_nonharmonic_residual_is_large():
    u, v = _axes(81, 0.55)
    m = hm.generate("expression", u, v, expression="z + 0.05*zb**2")
    assert m.max_residual > 1e-3
    with pytest.raises(DegenerateInputError):
        m.require_valid(1e-6)


def test_map_must_stay_in_disk():
    u, v = _axes(33, 0.9)
    with pytest.raises(DomainError):
        hm.generate("holomorphic", u, v, expression="2*z")


def test_hopf_Q_examples():
    u, v = _axes(41, 0.55)
    assert np.max(np.abs(hm.hopf_Q(hm.generate("identity", u, v).grid))) == 0
    Q = hm.hopf_Q(hm.generate("geodesic_tanh", u, v, a=0.7).grid)
    assert np.allclose(Q, 0.49, atol=1e-14)
    assert np.max(np.abs(hm.hopf_Q(hm.generate("expression", u, v, expression="0.5*zb**2").grid))) == 0


def test_energy_mu_examples():
    u, v = _axes(41, 0.5)
    i0 = 20
    mu = hm.energy_mu(hm.generate("identity", u, v).grid)
    assert mu[i0, i0] == pytest.approx(4.0)
    mu = hm.energy_mu(hm.generate("geodesic_tanh", u, v, a=0.7).grid)
    assert mu[i0, i0] == pytest.approx(2 * 0.49)
    const = hm.ComplexGrid(u, v, np.full((41, 41), 0.3 + 0j))
    assert np.max(hm.energy_mu(const)) < 1e-25


@given(st.floats(0.6, 2.0), st.floats(0, 2 * np.pi))
def test_Q_and_mu_scale_as_densities(r, phase):
    # g_a(w) = g(w / a) for g = tanh(0.7 Re z): Q scales by a^-2 and mu by |a|^-2
    a = r * np.exp(1j * phase)
    u, v = _axes(17, 0.4)
    scaled = hm.generate("geodesic_tanh", u, v, a=0.7 / r, angle=phase).grid
    W = scaled.z
    assert np.allclose(hm.hopf_Q(scaled), 0.49 / a**2, atol=1e-12)
    assert np.allclose(scaled.values, np.tanh(0.7 * np.real(W / a)), atol=1e-14)
    # the unscaled map has mu = 2 * 0.49 everywhere
    assert np.allclose(hm.energy_mu(scaled), 0.98 / abs(a) ** 2, rtol=1e-10)


def test_exact_and_fd_modes_agree():
    u, v = _axes(81, 0.55)
    exact = hm.generate("geodesic_tanh", u, v, a=0.7, angle=0.5)
    fd = hm.from_samples(u, v, exact.grid.values)
    for e, f in zip(exact.grid.derivatives(), fd.grid.derivatives()):
        assert np.max(np.abs(stencils.interior(e - f, 2))) < 1e-6


def test_fd_residual_refines():
    hs, errs = [], []
    for n in (41, 81, 161):
        u, v = _axes(n, 0.55)
        Z = u[:, None] + 1j * v[None, :]
        m = hm.from_samples(u, v, np.exp(0.3j) * np.tanh(0.7 * np.real(np.exp(-0.4j) * Z)))
        hs.append(u[1] - u[0])
        errs.append(m.max_residual)
    assert stencils.refinement_slope(hs, errs) >= 1.8


def test_Q_holomorphy_refines():
    hs, errs = [], []
    for n in (41, 81):
        u, v = _axes(n, 0.55)
        Z = u[:, None] + 1j * v[None, :]
        g = hm.from_samples(u, v, 0.4 * Z + 0.2 * Z**2)
        Q = hm.hopf_Q(g.grid)
        assert np.max(np.abs(Q)) < 1e-10
        m = hm.from_samples(u, v, np.tanh(0.7 * np.real(np.exp(-0.4j) * Z)))
        Qm = hm.hopf_Q(m.grid)
        dzb = stencils.wirtinger(Qm, u[1] - u[0], v[1] - v[0])[1]
        hs.append(u[1] - u[0])
        errs.append(np.max(np.abs(stencils.interior(dzb, 3))))
    assert stencils.refinement_slope(hs, errs) >= 2.0


def test_from_samples_report():
    u, v = _axes(33)
    Z = u[:, None] + 1j * v[None, :]
    m = hm.from_samples(u, v, Z / 2, label="half")
    rep = m.report()
    assert rep["label"] == "half" and rep["mode"] == "fd"
    assert rep["max_abs_g"] == pytest.approx(np.max(np.abs(Z / 2)))
