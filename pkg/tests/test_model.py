import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmcgk.errors import DomainError
from cmcgk.model import (
    AmbientPoint,
    ModelParams,
    conformal_factor,
    connection_coefficients,
    coordinates_to_frame,
    covariant_frame_derivative,
    frame_to_coordinates,
    hyperboloid_embed,
    metric_tensor,
    minkowski,
    project,
)

P11 = ModelParams.from_c(1.0, 1.0)

cs = st.floats(0.2, 2.0)
taus = st.floats(-2.0, 2.0)
radii = st.floats(0.0, 0.9)
angles = st.floats(0.0, 2 * np.pi)


def _point(c, r, a):
    return r / c * np.exp(1j * a)


def test_params_reject_positive_kappa():
    with pytest.raises(DomainError):
        ModelParams(1.0, 0.0)


def test_c_theta_tau_hat():
    assert P11.c == pytest.approx(1.0)
    assert P11.theta == pytest.approx(np.pi / 4)
    assert P11.tau_hat == pytest.approx(np.sqrt(2))


@pytest.mark.parametrize("c,zeta,expected", [(1.0, 0.0, 1.0), (1.0, 0.5, 4 / 3), (0.0, 3.0 + 1j, 1.0)])
def test_conformal_factor_examples(c, zeta, expected):
    params = ModelParams.from_c(c, 1.0)
    assert conformal_factor(params, zeta) == pytest.approx(expected, abs=1e-15)


def test_conformal_factor_domain_error():
    with pytest.raises(DomainError):
        conformal_factor(P11, 1.0)


def test_frame_to_coordinates_examples():
    assert np.allclose(frame_to_coordinates(P11, 0j, 1, 0, 0), (1, 0, 0), atol=1e-15)
    assert np.allclose(frame_to_coordinates(P11, 0.5j, 1, 0, 0), (0.75, 0, -0.5), atol=1e-15)
    assert np.allclose(frame_to_coordinates(P11, 0.3 - 0.2j, 0, 0, 1), (0, 0, 1), atol=1e-15)


@given(cs, taus, radii, angles, st.tuples(*[st.floats(-3, 3)] * 3))
def test_frame_roundtrip(c, tau, r, a, Z):
    params = ModelParams.from_c(c, tau)
    zeta = _point(c, r, a)
    back = coordinates_to_frame(params, zeta, *frame_to_coordinates(params, zeta, *Z))
    assert np.allclose(back, Z, atol=1e-14 * max(1.0, *map(abs, Z)) / (1 - r * r))


@given(cs, taus, radii, angles)
def test_frame_is_orthonormal(c, tau, r, a):
    params = ModelParams.from_c(c, tau)
    zeta = _point(c, r, a)
    g = metric_tensor(params, zeta)
    E = np.array([frame_to_coordinates(params, zeta, *e) for e in np.eye(3)])
    assert np.allclose(E @ g @ E.T, np.eye(3), atol=1e-12 * max(1.0, abs(tau)) ** 2 / (1 - r * r) ** 2)


def test_connection_examples():
    params = ModelParams.from_c(1.0, 0.7)
    T = connection_coefficients(params, 0j)
    assert np.allclose(T[0, 0], 0)
    assert np.allclose(T[0, 1], [0, 0, 0.7])
    for zeta in (0j, 0.3 + 0.4j):
        assert np.allclose(connection_coefficients(params, zeta)[2, 2], 0)
    T = connection_coefficients(ModelParams(-4.0, 0.0), 0.3)
    assert np.allclose(T[1, 1], [-0.6, 0, 0])


@given(cs, taus, radii, angles)
def test_connection_metric_compatible(c, tau, r, a):
    # <nabla_X V_i, V_j> + <V_i, nabla_X V_j> = 0 in an orthonormal frame
    T = connection_coefficients(ModelParams.from_c(c, tau), _point(c, r, a))
    for i in range(3):
        assert np.allclose(T[i] + np.transpose(T[i], (1, 0)), 0, atol=1e-15)


def _christoffel(params, zeta, x3=0.0, h=1e-5):
    """Coordinate Christoffel symbols from central differences of the metric."""
    x = np.array([zeta.real, zeta.imag, x3])

    def metric(y):
        return metric_tensor(params, complex(y[0], y[1]))

    dg = np.empty((3, 3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        dg[k] = (metric(x + e) - metric(x - e)) / (2 * h)
    ginv = np.linalg.inv(metric(x))
    # Gamma^m_{ij} = 1/2 g^{ml} (d_i g_lj + d_j g_li - d_l g_ij)
    t = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    return 0.5 * np.einsum("ml,lij->mij", ginv, t)


@pytest.mark.parametrize("c,tau,zeta", [(1.0, 1.0, 0.2 + 0.3j), (0.5, -0.4, -0.6 + 0.1j), (1.3, 0.0, 0.1 - 0.5j)])
def test_connection_matches_levi_civita(c, tau, zeta):
    """The frame table agrees with the Levi-Civita connection of the coordinate metric."""
    params = ModelParams.from_c(c, tau)
    Gam = _christoffel(params, zeta)
    E = np.array([frame_to_coordinates(params, zeta, *e) for e in np.eye(3)])  # rows: V_i in coordinates
    h = 1e-5
    dE = np.empty((3, 3, 3))  # dE[k, i, :] = d_k V_i
    for k, dz in enumerate((h, 1j * h)):
        Ep = np.array([frame_to_coordinates(params, zeta + dz, *e) for e in np.eye(3)])
        Em = np.array([frame_to_coordinates(params, zeta - dz, *e) for e in np.eye(3)])
        dE[k] = (Ep - Em) / (2 * h)
    dE[2] = 0.0
    T = connection_coefficients(params, zeta)
    for i in range(3):
        for j in range(3):
            # nabla_{V_i} V_j = V_i^k d_k V_j + Gamma(V_i, V_j)
            lc = np.einsum("k,kl->l", E[i], dE[:, j, :]) + np.einsum("mab,a,b->m", Gam, E[i], E[j])
            expected = T[i, j] @ E
            assert np.allclose(lc, expected, atol=1e-8)


def test_covariant_derivative_of_frame_field():
    params = ModelParams.from_c(1.0, 0.5)
    zeta = 0.2 - 0.1j
    T = connection_coefficients(params, zeta)
    for i in range(3):
        for j in range(3):
            W = np.eye(3)[i]
            Y = np.eye(3)[j]
            out = covariant_frame_derivative(params, zeta, Y, np.zeros(3), W)
            assert np.allclose(out, T[i, j])


def test_project():
    assert project(P11, AmbientPoint(0, 0, 5)).zeta == 0
    assert project(P11, AmbientPoint(0.1, 0.2, -3)).zeta == 0.1 + 0.2j
    with pytest.raises(DomainError):
        project(P11, AmbientPoint(1.0, 0.2, 0))


def test_hyperboloid_examples():
    assert np.allclose(hyperboloid_embed(ModelParams.from_c(0.5, 0), 0j), (1, 0, 0))
    assert np.allclose(hyperboloid_embed(P11, 0j), (0.5, 0, 0))
    p = hyperboloid_embed(P11, 0.5)
    assert np.allclose(p, (5 / 6, 2 / 3, 0))
    assert minkowski(p, p) == pytest.approx(-0.25)
    with pytest.raises(DomainError):
        hyperboloid_embed(P11, 1.0)


@given(cs, radii, angles)
def test_hyperboloid_is_isometric(c, r, a):
    params = ModelParams.from_c(c, 0.3)
    zeta = _point(c, 0.95 * r, a)
    p = hyperboloid_embed(params, zeta)
    assert minkowski(p, p) == pytest.approx(params.kappa ** -1, rel=1e-12)
    assert p[0] > 0
    h = 1e-4
    d1 = (hyperboloid_embed(params, zeta + h) - hyperboloid_embed(params, zeta - h)) / (2 * h)
    d2 = (hyperboloid_embed(params, zeta + 1j * h) - hyperboloid_embed(params, zeta - 1j * h)) / (2 * h)
    lam2 = conformal_factor(params, zeta) ** 2
    pull = np.array([[minkowski(d1, d1), minkowski(d1, d2)], [minkowski(d2, d1), minkowski(d2, d2)]])
    assert np.allclose(pull / lam2, np.eye(2), atol=1e-6)
