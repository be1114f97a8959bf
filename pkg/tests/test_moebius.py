import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmcgk.errors import DomainError
from cmcgk.model import AmbientPoint, ModelParams
from cmcgk.moebius import (
    INFINITY,
    AmbientIsometry,
    SU11Matrix,
    axis_rotation,
    is_infinite,
    lift_isometry,
    phi,
    psi,
    pullback_residual,
    rotation_r,
    vertical_translation,
)

P = ModelParams.from_c(1.0, 0.8)
seeds = st.integers(0, 2**32 - 1)


def _disk_point(rng, c=1.0, rmax=0.8):
    return rmax / c * np.sqrt(rng.random()) * cmath.exp(2j * np.pi * rng.random())


def test_su11_invariant():
    with pytest.raises(DomainError):
        SU11Matrix(1.0, 0.5)
    M = SU11Matrix.normalized(2.0, 1.0 + 1j)
    assert abs(M.alpha) ** 2 - abs(M.beta) ** 2 == pytest.approx(1.0)


def test_psi_examples():
    w = 0.3 + 0.1j
    assert psi(SU11Matrix.identity(), w) == w
    assert psi(SU11Matrix.rotation(0.7), w) == pytest.approx(cmath.exp(0.7j) * w)
    M = SU11Matrix.normalized(1.0, 0.5)
    assert abs(psi(M, cmath.exp(1.1j))) == pytest.approx(1.0)
    assert psi(M, INFINITY) == pytest.approx(M.alpha / M.beta.conjugate())
    assert is_infinite(psi(M, -M.alpha.conjugate() / M.beta.conjugate()))


def test_phi_examples():
    zeta = 0.2 - 0.4j
    assert phi(SU11Matrix.identity(), zeta, 1.0) == pytest.approx(zeta)
    M = SU11Matrix.moving_to_origin(zeta, 1.0)
    assert abs(phi(M, zeta, 1.0)) < 1e-15
    with pytest.raises(DomainError):
        phi(M, 2.0, 1.0)


def test_phi_spec_value():
    # alpha = 1, beta = 0.5 read projectively: phi(0) = beta / (c conj(alpha)) = 0.5
    M = SU11Matrix.normalized(1.0, 0.5)
    assert phi(M, 0j, 1.0) == pytest.approx(0.5)


@given(seeds)
def test_group_law(seed):
    rng = np.random.default_rng(seed)
    M, N = SU11Matrix.random(rng, 2.0), SU11Matrix.random(rng, 2.0)
    w = complex(*rng.normal(size=2))
    assert psi(M @ N, w) == pytest.approx(psi(M, psi(N, w)), abs=1e-12 * max(1, abs(psi(M @ N, w))))
    c = rng.uniform(0.3, 2.0)
    zeta = _disk_point(rng, c)
    assert abs(phi(M @ N, zeta, c) - phi(M, phi(N, zeta, c), c)) < 1e-12 / c


@given(seeds)
def test_phi_conjugates_psi(seed):
    rng = np.random.default_rng(seed)
    M = SU11Matrix.random(rng, 2.0)
    c = rng.uniform(0.3, 2.0)
    zeta = _disk_point(rng, c, 0.95)
    image = phi(M, zeta, c)
    assert abs(image - psi(M, c * zeta) / c) < 1e-12 / c
    assert c * abs(image) < 1


def test_inverse_matrix():
    M = SU11Matrix.random(np.random.default_rng(3), 1.5)
    Id = M @ M.inverse()
    assert Id.alpha == pytest.approx(1) and abs(Id.beta) < 1e-14


@pytest.mark.parametrize("make", [
    lambda: vertical_translation(P, 1.3),
    lambda: axis_rotation(P, 0.9),
    lambda: lift_isometry(P, SU11Matrix.random(np.random.default_rng(5), 1.0), anchor=0.1j),
    lambda: lift_isometry(P, SU11Matrix.moving_to_origin(0.3 + 0.2j, 1.0)),
    lambda: AmbientIsometry(P, "pi_rotation"),
])
def test_isometries_pull_back_the_metric(make):
    iso = make()
    rng = np.random.default_rng(11)
    for _ in range(5):
        p = AmbientPoint.from_zeta(_disk_point(rng, 1.0, 0.6), rng.uniform(-1, 1))
        assert pullback_residual(iso, p) < 1e-8


def test_lift_identity_and_flat_fibration():
    rng = np.random.default_rng(1)
    iso = lift_isometry(P, SU11Matrix.identity(), anchor=0.2)
    flat = lift_isometry(ModelParams.from_c(1.0, 0.0), SU11Matrix.random(rng), anchor=0.1)
    for _ in range(5):
        z = _disk_point(rng, 1.0, 0.7)
        assert abs(iso.offset(z)) < 1e-14
        assert abs(flat.offset(z)) < 1e-14
        q = iso(AmbientPoint.from_zeta(z, 0.4))
        assert abs(q.zeta - z) < 1e-15 and q.x3 == pytest.approx(0.4)


def test_lift_of_rotation_has_no_vertical_offset():
    iso = lift_isometry(P, SU11Matrix.rotation(1.2), anchor=0.3j)
    for z in (0.1 + 0.5j, -0.4, 0.6j):
        assert abs(iso.offset(z)) < 1e-12
        assert abs(iso.horizontal(z) - cmath.exp(1.2j) * z) < 1e-14


def test_lift_anchor_keeps_height():
    iso = lift_isometry(P, SU11Matrix.random(np.random.default_rng(2)), anchor=0.2 - 0.1j)
    assert iso.offset(0.2 - 0.1j) == 0.0


@given(seeds)
def test_lift_composed_with_inverse_is_vertical_translation(seed):
    rng = np.random.default_rng(seed)
    M = SU11Matrix.random(rng, 1.0)
    f = lift_isometry(P, M, anchor=_disk_point(rng, 1.0, 0.4))
    g = lift_isometry(P, M.inverse(), anchor=_disk_point(rng, 1.0, 0.4))
    shifts = []
    for _ in range(3):
        p = AmbientPoint.from_zeta(_disk_point(rng, 1.0, 0.3), rng.uniform(-1, 1))
        q = f(g(p))
        assert abs(q.zeta - p.zeta) < 1e-8
        shifts.append(q.x3 - p.x3)
    assert np.ptp(shifts) < 1e-8


def test_rotation_r():
    assert rotation_r(AmbientPoint(0, 0, 0)) == AmbientPoint(0, 0, 0)
    p = AmbientPoint(0.1, 0.2, 0.3)
    assert rotation_r(p) == AmbientPoint(0.1, -0.2, -0.3)
    assert rotation_r(rotation_r(p)) == p
