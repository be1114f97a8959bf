import numpy as np
import pytest

from cmcgk import diagnostics as dg
from cmcgk import harmonic as hm
from cmcgk import stencils
from cmcgk import weierstrass as ws
from cmcgk.errors import DegenerateInputError
from cmcgk.model import ModelParams

M = dg.DIAGNOSTIC_MARGIN


def _interior_max(a, margin=M):
    return float(np.max(np.abs(stencils.interior(a, margin))))


def _reconstruct(params, kind, n=81, half=0.55, **kw):
    u, v = hm.rectangle_axes(0, half, half, n, n)
    gm = hm.generate(kind, u, v, **kw)
    return ws.integrate(ws.ReconstructionInput(params, gm))


def test_jet_at_origin(rev_surface_81):
    j = dg.jet_of(rev_surface_81)
    i0, j0 = rev_surface_81.basepoint
    assert abs(j.A[2, i0, j0]) < 1e-14
    assert np.allclose(j.N[:, i0, j0], (0, 0, 1), atol=1e-14)
    assert abs(j.eta[i0, j0]) < 1e-14


@pytest.mark.parametrize("source,fixture", [("system", "rev_surface_81"), ("positions", "rev_surface_161")])
def test_algebraic_identities(request, source, fixture):
    surf = request.getfixturevalue(fixture)
    j = dg.jet_of(surf, source=source)
    res = dg.algebraic_residuals(j, lam_ref=surf.lam)
    assert set(res) == {"norm", "isotropy", "unit_normal", "orthogonality"}
    assert max(res.values()) < 1e-6


def test_angle_consistency(rev_surface_81):
    j = dg.jet_of(rev_surface_81)
    assert dg.angle_consistency(j, rev_surface_81.g.grid.values) < 1e-6
    assert np.all(j.nu > 0) and not np.any(j.vertical)


def test_jet_gauss_matches_input(rev_surface_81):
    j = dg.jet_of(rev_surface_81)
    assert np.max(np.abs(j.gauss - rev_surface_81.g.grid.values)) < 1e-10


@pytest.mark.parametrize("c", [1.0, 0.5])
def test_horocylinder_has_critical_mean_curvature(c):
    # horocycle s -> s / (c s + i) through 0, lifted along the fibres
    params = ModelParams.from_c(c, 0.0)
    u = np.linspace(-0.3, 0.3, 81)
    zeta, x3 = dg.sample_surface(lambda Z: (Z.imag / (c * Z.imag + 1j), Z.real), u, u)
    j = dg.jet(params, u, u, zeta, x3, orient="cross", order=6)
    assert np.max(np.abs(j.nu)) < 1e-10
    assert _interior_max(dg.mean_curvature(j) - c) < 1e-4


def test_revolution_surface_mean_curvature(rev_surface_81):
    j = dg.jet_of(rev_surface_81)
    H, Hi = dg.mean_curvature(j, with_imag=True)
    assert _interior_max(H - 1.0) < 1e-4
    assert _interior_max(Hi) < 1e-4


def test_revolution_P_and_Phi(rev_surface_81):
    s = rev_surface_81
    j = dg.jet_of(s)
    P = dg.hopf_P(j)
    c, tau = 1.0, 1.0
    expected = -(c * c + tau * tau) * s.eta**2 / (2 * (c + 1j * tau))
    assert _interior_max(P - expected) < 1e-5
    assert _interior_max(dg.abresch_rosenberg(j)) < 1e-5


def test_tanh_phi_is_minus_a_squared():
    params = ModelParams.from_c(1.0, 0.0)
    s = _reconstruct(params, "geodesic_tanh", a=0.7)
    j = dg.jet_of(s)
    Phi = dg.abresch_rosenberg(j)
    assert _interior_max(Phi + 0.49) < 1e-4
    assert dg.verify_hopf_relation(hm.hopf_Q(s.g.grid), Phi) < 1e-4
    assert _interior_max(dg.mean_curvature(j) - 1.0) < 1e-4


@pytest.mark.parametrize("r,phase", [(1.4, 0.0), (0.8, 0.6)])
def test_phi_scales_as_quadratic_differential(r, phase):
    # g(w / a) for g = tanh(0.7 Re z) is geodesic_tanh(0.7 / r, angle = arg a)
    a = r * np.exp(1j * phase)
    params = ModelParams.from_c(1.0, 0.0)
    s = _reconstruct(params, "geodesic_tanh", a=0.7 / r, angle=phase)
    Phi = dg.abresch_rosenberg(dg.jet_of(s))
    assert _interior_max(Phi + 0.49 / a**2) < 1e-4


def test_holomorphic_gauss_map_has_vanishing_phi():
    params = ModelParams.from_c(1.0, 0.6)
    s = _reconstruct(params, "holomorphic", n=81, half=0.5, expression="0.3*z + 0.2*z**2 + 0.1*I")
    j = dg.jet_of(s)
    Phi = dg.abresch_rosenberg(j)
    assert np.max(np.abs(hm.hopf_Q(s.g.grid))) < 1e-14
    assert _interior_max(Phi) < 1e-5
    assert _interior_max(dg.mean_curvature(j) - params.c) < 1e-4


def test_phi_holomorphy_refines():
    params = ModelParams.from_c(1.0, 1.0)
    hs, errs = [], []
    for n in (41, 81):
        s = _reconstruct(params, "geodesic_tanh", n=n, a=0.7, angle=0.3)
        Phi = dg.abresch_rosenberg(dg.jet_of(s))
        hs.append(s.u[1] - s.u[0])
        errs.append(dg.holomorphy_residual(Phi, s.u, s.v))
    assert stencils.refinement_slope(hs, errs) >= 2.0


def test_mean_curvature_refines():
    params = ModelParams.from_c(1.0, 1.0)
    hs, errs = [], []
    for n in (41, 81):
        s = _reconstruct(params, "geodesic_tanh", n=n, a=0.7, angle=0.3)
        hs.append(s.u[1] - s.u[0])
        errs.append(_interior_max(dg.mean_curvature(dg.jet_of(s)) - 1.0))
    assert stencils.refinement_slope(hs, errs) >= 1.8


def test_degenerate_surface_rejected():
    params = ModelParams.from_c(1.0, 0.0)
    u = np.linspace(-0.2, 0.2, 21)
    zeta, x3 = dg.sample_surface(lambda Z: (0 * Z, 0 * Z.real), u, u)
    with pytest.raises(DegenerateInputError):
        dg.jet(params, u, u, zeta, x3)


def test_bad_options():
    u = np.linspace(-0.2, 0.2, 21)
    zeta, x3 = dg.sample_surface(lambda Z: (0.1 * Z, Z.real), u, u)
    with pytest.raises(ValueError):
        dg.jet(ModelParams.from_c(1.0, 0.0), u, u, zeta, x3, orient="sideways")
