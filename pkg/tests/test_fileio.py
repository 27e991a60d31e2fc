import numpy as np
import pytest

from sphfir import fileio
from sphfir.filtering import TransferFunction, fir_transfer, five_point_lowpass
from sphfir.sphere import grid_from_counts, make_grid
from sphfir.spectrum import delta_spectrum, random_spectrum
from sphfir.spharm import bumpy_sphere, mesh_faces
from sphfir.transform import SampledField


def test_spectrum_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    for F in (random_spectrum(9, rng), random_spectrum(5, rng, real=False), delta_spectrum(3)):
        p = tmp_path / "f.coeff"
        fileio.write_spectrum(p, F)
        G = fileio.read_spectrum(p)
        np.testing.assert_array_equal(G.data, F.data)
        assert G.real == F.real
        # a second write is byte-identical
        assert fileio.format_spectrum(G) == p.read_text()


def test_spectrum_format_layout():
    text = fileio.format_spectrum(delta_spectrum(2))
    lines = text.splitlines()
    assert lines[0] == "#sph-coeff v1 L=2 real=1"
    assert lines[1].startswith("0,0,0.28209479177387")
    assert [l.split(",")[:2] for l in lines[2:]] == [["1", "-1"], ["1", "0"], ["1", "1"]]


@pytest.mark.parametrize(
    "body",
    ["", "#nope\n", "#sph-coeff v1 L=2\n0,0,1\n", "#sph-coeff v1 L=2\n2,0,1,0\n", "#sph-coeff v1 L=x\n"],
)
def test_spectrum_errors(tmp_path, body):
    p = tmp_path / "bad.coeff"
    p.write_text(body)
    with pytest.raises(fileio.FormatError):
        fileio.read_spectrum(p)


def test_missing_file_is_format_error(tmp_path):
    with pytest.raises(fileio.FormatError):
        fileio.read_spectrum(tmp_path / "absent")
    with pytest.raises(fileio.FormatError):
        fileio.read_pgm(tmp_path / "absent.pgm")


@pytest.mark.parametrize("scheme", ["gl", "equiangular"])
def test_field_round_trip(tmp_path, scheme):
    rng = np.random.default_rng(1)
    g = grid_from_counts(6, 10, scheme)
    for vals in (rng.normal(size=g.shape), rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape)):
        p = tmp_path / "f.field"
        fileio.write_field(p, SampledField(g, vals))
        f = fileio.read_field(p)
        assert f.grid.scheme == scheme and f.grid.shape == g.shape
        np.testing.assert_array_equal(f.values, vals)


def test_field_without_scheme_is_equiangular(tmp_path):
    p = tmp_path / "f.field"
    p.write_text("#sph-grid v1 n_beta=2 n_alpha=3\n1,2,3\n4,5,6\n")
    f = fileio.read_field(p)
    assert f.grid.scheme == "equiangular"
    np.testing.assert_array_equal(f.values, [[1, 2, 3], [4, 5, 6]])


@pytest.mark.parametrize(
    "body",
    [
        "#sph-grid v1 n_beta=2 n_alpha=3\n1,2,3\n",
        "#sph-grid v1 n_beta=2 n_alpha=3\n1,2,3\n4,5\n",
        "#sph-grid v1 n_beta=2 n_alpha=3\n1,2,3\n4,5,x\n",
        "#sph-grid v1 n_alpha=3\n1,2,3\n",
    ],
)
def test_field_errors(tmp_path, body):
    p = tmp_path / "bad.field"
    p.write_text(body)
    with pytest.raises(fileio.FormatError):
        fileio.read_field(p)


def test_coordinates_round_trip(tmp_path):
    g = make_grid(6)
    surf = bumpy_sphere(g, np.random.default_rng(2))
    p = tmp_path / "xyz.csv"
    fileio.write_coordinates(p, surf)
    back = fileio.read_coordinates(p)
    for a, b in zip(back, surf):
        np.testing.assert_array_equal(a.values, b.values)
    p.write_text("#sph-grid v1 n_beta=1 n_alpha=2\n1,2,3\n1,2\n")
    with pytest.raises(fileio.FormatError):
        fileio.read_coordinates(p)


def test_grid_round_trip(tmp_path):
    g = make_grid(5)
    p = tmp_path / "g.nodes"
    fileio.write_grid(p, g)
    h = fileio.read_grid(p)
    np.testing.assert_array_equal(h.beta_nodes, g.beta_nodes)
    np.testing.assert_array_equal(h.weights, g.weights)
    assert (h.n_alpha, h.scheme) == (g.n_alpha, g.scheme)


def test_transfer_round_trip(tmp_path):
    H = five_point_lowpass(6)
    p = tmp_path / "h.transfer"
    fileio.write_transfer(p, H)
    assert p.read_text().splitlines()[0] == "#sph-transfer v1 L=6"
    G = fileio.read_transfer(p)
    for a, b in zip(G.matrices, H.matrices):
        np.testing.assert_array_equal(a, b)
    p.write_text("#sph-transfer v1 L=2\n1,2,0,1,0\n")
    with pytest.raises(fileio.FormatError):
        fileio.read_transfer(p)
    p.write_text("#sph-transfer v1 L=2\n1,0,0,1\n")
    with pytest.raises(fileio.FormatError):
        fileio.read_transfer(p)


def test_taps_round_trip(tmp_path):
    rows = [(0.5, 0, 0, 0), (0.25, 0.1, 0.2, 0.3), (0.25, 1.0, 0.2, -1.0)]
    p = tmp_path / "taps.csv"
    fileio.write_taps(p, rows)
    taps = fileio.read_taps(p)
    assert [t.weight for t in taps] == [0.5, 0.25, 0.25]
    H = fir_transfer(taps, 3)
    assert H[0][0, 0] == pytest.approx(1.0)
    p.write_text("1,0,0,0,0\n")
    assert fileio.read_taps(p)[0].weight == 1.0
    for body in ("", "1,2\n", "a,0,0,0\n"):
        p.write_text(body)
        with pytest.raises(fileio.FormatError):
            fileio.read_taps(p)


def test_pgm_p5_and_p2(tmp_path):
    img = np.arange(12, dtype=np.uint8).reshape(3, 4) * 20
    p5 = tmp_path / "a.pgm"
    fileio.write_pgm(p5, img, comment="test")
    np.testing.assert_allclose(fileio.read_pgm(p5), img / 255.0)
    p2 = tmp_path / "b.pgm"
    p2.write_text("P2\n# comment\n2 2\n10\n0 5\n10 2\n")
    np.testing.assert_allclose(fileio.read_pgm(p2), [[0, 0.5], [1, 0.2]])
    p16 = tmp_path / "c.pgm"
    p16.write_bytes(b"P5\n2 1\n65535\n" + np.array([0, 65535], dtype=">u2").tobytes())
    np.testing.assert_allclose(fileio.read_pgm(p16), [[0, 1]])


@pytest.mark.parametrize("raw", [b"P6\n1 1\n255\n\x00", b"P5\n4 4\n255\n\x00\x00", b"P5\n4", b"P2\n2 2\n9\n1 2 3\n"])
def test_pgm_errors(tmp_path, raw):
    p = tmp_path / "bad.pgm"
    p.write_bytes(raw)
    with pytest.raises(fileio.FormatError):
        fileio.read_pgm(p)


def test_field_from_raster():
    f = fileio.field_from_raster(np.ones((8, 16)))
    assert f.grid.scheme == "equiangular" and f.grid.shape == (8, 16)
    assert f.grid.integrate(f.values) == pytest.approx(4 * np.pi)


def test_world_mask_is_shipped():
    from sphfir.cli import world_mask_path

    mask = fileio.read_pgm(world_mask_path())
    assert mask.shape == (128, 256)
    assert set(np.unique(mask)) <= {0.0, 1.0}
    # roughly 29% of the globe is land
    land = fileio.field_from_raster(mask)
    assert 0.2 < land.grid.integrate(land.values) / (4 * np.pi) < 0.4


def test_obj_round_trip(tmp_path):
    verts = np.random.default_rng(3).normal(size=(3 * 4 + 2, 3))
    faces = mesh_faces(3, 4)
    p = tmp_path / "m.obj"
    fileio.write_obj(p, verts, faces, comment="mesh")
    v, f = fileio.read_obj(p)
    np.testing.assert_array_equal(v, verts)
    np.testing.assert_array_equal(f, faces)
    assert p.read_text().startswith("# mesh\nv ")


def test_freqresp_csv(tmp_path):
    p = tmp_path / "r.csv"
    fileio.write_freqresp(p, np.array([1.0, 0.5]))
    assert p.read_text() == "l,norm\n0,1\n1,0.5\n"


def test_identity_transfer_round_trip_exact(tmp_path):
    p = tmp_path / "i.transfer"
    fileio.write_transfer(p, TransferFunction.identity(4))
    for ell, M in enumerate(fileio.read_transfer(p).matrices):
        np.testing.assert_array_equal(M, np.eye(2 * ell + 1))
