import numpy as np
import pytest

from cmcgk import harmonic as hm
from cmcgk import weierstrass as ws
from cmcgk.mesh import export_mesh, format_vertex, grid_faces
from cmcgk.model import ModelParams


def test_grid_faces_counts():
    assert grid_faces(2, 2).tolist() == [[0, 2, 3], [0, 3, 1]]
    for nu, nv in [(3, 5), (7, 4)]:
        f = grid_faces(nu, nv)
        assert f.shape == (2 * (nu - 1) * (nv - 1), 3)
        assert f.max() == nu * nv - 1
    with pytest.raises(ValueError):
        grid_faces(1, 4)


def test_faces_split_along_main_diagonal():
    nv = 4
    f = grid_faces(3, nv)
    # quad (0, 0): diagonal joins node 0 with node nv + 1
    assert all(0 in tri and nv + 1 in tri for tri in f[:2])


def test_format_vertex():
    assert float(format_vertex(0.1)) == 0.1
    assert format_vertex(-0.0) == format_vertex(0.0)


def _read_obj(path):
    v, f = [], []
    for line in path.read_text().splitlines():
        tag, *rest = line.split()
        (v if tag == "v" else f).append(rest)
    return np.array(v, dtype=float), np.array(f, dtype=int)


def test_obj_2x2(tmp_path):
    pts = np.arange(12, dtype=float).reshape(2, 2, 3)
    path = export_mesh(pts, tmp_path / "m.obj")
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    v, f = _read_obj(path)
    assert v.shape == (4, 3) and f.shape == (2, 3)
    assert np.array_equal(v, pts.reshape(-1, 3))
    assert f.min() == 1


def test_ply(tmp_path):
    pts = np.random.default_rng(0).normal(size=(3, 4, 3))
    text = export_mesh(pts, tmp_path / "m.ply", "ply").read_text().splitlines()
    assert text[:2] == ["ply", "format ascii 1.0"]
    assert "element vertex 12" in text and "element face 12" in text
    body = text[text.index("end_header") + 1:]
    assert np.allclose(np.array([r.split() for r in body[:12]], dtype=float), pts.reshape(-1, 3), rtol=1e-15)
    assert body[12].startswith("3 ")


def test_refuses_bad_input(tmp_path):
    pts = np.zeros((2, 2, 3))
    pts[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        export_mesh(pts, tmp_path / "m.obj")
    with pytest.raises(ValueError):
        export_mesh(np.zeros((2, 2, 3)), tmp_path / "m.stl", "stl")


def test_revolution_mesh_vertex_at_origin(tmp_path):
    params = ModelParams.from_c(1.0, 1.0)
    u, v = hm.rectangle_axes(0, 0.55, 0.55, 33, 33)
    s = ws.integrate(ws.ReconstructionInput(params, hm.generate("identity", u, v), x30=2.0))
    v_, _ = _read_obj(export_mesh(s.points(), tmp_path / "r.obj"))
    k = 16 * 33 + 16
    assert np.array_equal(v_[k], [0.0, 0.0, 2.0])


def test_export_is_deterministic(tmp_path):
    pts = np.random.default_rng(1).normal(size=(5, 6, 3))
    a = export_mesh(pts, tmp_path / "a.obj").read_bytes()
    b = export_mesh(pts, tmp_path / "b.obj").read_bytes()
    assert a == b
