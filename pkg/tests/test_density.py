import numpy as np
import pytest
from scipy import stats

from mixtrace.density import DensityGrid, modes, read_grid, write_grid
from mixtrace.errors import IoError, OutOfWindow
from mixtrace.sampler import Window

UNIT = Window(0.0, 1.0, 0.0, 1.0)

# hand-written: window [0, 3] x [0, 1.5], counts row-major by ix
GOLDEN_3X3 = """ix,iy,x_lo,x_hi,y_lo,y_hi,count
0,0,0,1,0,0.5,4
0,1,0,1,0.5,1,0
0,2,0,1,1,1.5,1
1,0,1,2,0,0.5,0
1,1,1,2,0.5,1,7
1,2,1,2,1,1.5,0
2,0,2,3,0,0.5,2
2,1,2,3,0.5,1,0
2,2,2,3,1,1.5,9
"""


def test_single_source_hits_one_cell():
    g = DensityGrid(UNIT, 10, 10).accumulate([(0.25, 0.75)])
    assert g.total == 1
    assert np.count_nonzero(g.counts) == 1
    assert g.counts[2, 7] == 1


def test_interior_edge_goes_to_upper_cell():
    g = DensityGrid(UNIT, 4, 4).accumulate([(0.25, 0.5), (0.0, 0.0), (1.0, 1.0)])
    assert g.counts[1, 2] == 1
    assert g.counts[0, 0] == 1
    # right and top boundaries are closed
    assert g.counts[3, 3] == 1


def test_edges_are_authoritative_under_rounding():
    w = Window(0.0, 0.3, 0.0, 0.3)
    g = DensityGrid(w, 3, 3)
    for i in range(1, 3):
        e = float(g.x_edge(i))
        ix, _ = g.cell_of([(e, 0.0)])
        assert ix[0] == i
        ix, _ = g.cell_of([(np.nextafter(e, -1), 0.0)])
        assert ix[0] == i - 1


def test_out_of_window_raises():
    with pytest.raises(OutOfWindow):
        DensityGrid(UNIT, 2, 2).accumulate([(1.5, 0.5)])


def test_uniform_counts_pass_chi_square():
    rng = np.random.default_rng(0)
    g = DensityGrid(UNIT, 10, 10).accumulate(rng.random((10_000, 2)))
    assert stats.chisquare(g.counts.ravel()).pvalue > 0.001


def test_conservation_over_configs():
    rng = np.random.default_rng(1)
    g = DensityGrid(UNIT, 7, 5)
    S = 0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        g.accumulate(rng.random((n, 2)))
        S += n
    assert g.total == S


def test_translation_covariance():
    rng = np.random.default_rng(2)
    pts = rng.uniform(0.0, 1.0, size=(500, 2))
    v = np.array([3.0, -7.0])
    a = DensityGrid(Window(0.0, 1.0, 0.0, 1.0), 8, 8).accumulate(pts)
    b = DensityGrid(Window(3.0, 4.0, -7.0, -6.0), 8, 8).accumulate(pts + v)
    # away from edges the shift cannot flip a floor
    inner = np.all((pts * 8) % 1 > 1e-6, axis=1) & np.all((pts * 8) % 1 < 1 - 1e-6, axis=1)
    a2 = DensityGrid(Window(0.0, 1.0, 0.0, 1.0), 8, 8).accumulate(pts[inner])
    b2 = DensityGrid(Window(3.0, 4.0, -7.0, -6.0), 8, 8).accumulate(pts[inner] + v)
    np.testing.assert_array_equal(a2.counts, b2.counts)
    assert a.total == b.total


def test_merge_associative_commutative():
    rng = np.random.default_rng(3)
    gs = [DensityGrid(UNIT, 5, 5).accumulate(rng.random((20, 2))) for _ in range(3)]
    a, b, c = gs
    np.testing.assert_array_equal((a + b).counts, (b + a).counts)
    np.testing.assert_array_equal(((a + b) + c).counts, (a + (b + c)).counts)
    with pytest.raises(ValueError):
        a.merge(DensityGrid(UNIT, 4, 5))


def test_modes_single_cell():
    g = DensityGrid(UNIT, 10, 10)
    g.counts[3, 6] = 5
    m = modes(g, k=1)
    np.testing.assert_allclose(m.centers, [[0.35, 0.65]])
    assert m.complete


def test_modes_tie_rule():
    g = DensityGrid(UNIT, 50, 50)
    g.counts[40, 5] = 3
    g.counts[5, 40] = 3
    m = modes(g, k=2, min_separation_cells=3)
    np.testing.assert_allclose(m.centers, [g.center(5, 40), g.center(40, 5)])


def test_modes_incomplete_when_mass_runs_out():
    g = DensityGrid(UNIT, 20, 20)
    g.counts[10, 10] = 1
    m = modes(g, k=3)
    assert len(m.centers) == 1 and not m.complete


def test_modes_three_blobs():
    rng = np.random.default_rng(4)
    w = Window(0.0, 10.0, 0.0, 10.0)
    g = DensityGrid(w, 100, 100)
    centres = np.array([(2.0, 2.0), (7.5, 3.0), (4.0, 8.0)])
    for c in centres:
        pts = np.clip(rng.normal(c, 0.3, size=(20_000, 2)), 0, 10)
        g.accumulate(pts)
    m = modes(g, k=3, min_separation_cells=10)
    diag = np.hypot(g.dx, g.dy)
    for c in centres:
        assert np.min(np.linalg.norm(m.centers - c, axis=1)) <= diag


def test_modes_chebyshev_separation():
    rng = np.random.default_rng(5)
    g = DensityGrid(UNIT, 60, 60)
    g.counts[:] = rng.integers(0, 100, size=(60, 60))
    s = 7
    m = modes(g, k=5, min_separation_cells=s)
    assert len(m.centers) <= 5
    idx = np.floor(m.centers / [g.dx, g.dy]).astype(int)
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            assert np.max(np.abs(idx[a] - idx[b])) > s


def test_modes_empty_grid_raises():
    with pytest.raises(ValueError):
        modes(DensityGrid(UNIT, 3, 3))


def test_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    g = DensityGrid(Window(-1.3, 2.7, 0.1, 0.9), 13, 7).accumulate(
        rng.uniform([-1.3, 0.1], [2.7, 0.9], size=(300, 2)))
    write_grid(g, tmp_path / "g.csv")
    h = read_grid(tmp_path / "g.csv")
    np.testing.assert_array_equal(h.counts, g.counts)
    assert h.window == g.window


def test_empty_grid_file(tmp_path):
    write_grid(DensityGrid(UNIT, 2, 2), tmp_path / "e.csv")
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert len(lines) == 5
    assert all(l.endswith(",0") for l in lines[1:])


def test_golden_3x3(tmp_path):
    g = DensityGrid(Window(0.0, 3.0, 0.0, 1.5), 3, 3)
    g.counts[:] = [[4, 0, 1], [0, 7, 0], [2, 0, 9]]
    write_grid(g, tmp_path / "g.csv")
    assert (tmp_path / "g.csv").read_bytes() == GOLDEN_3X3.encode()


def test_io_errors(tmp_path):
    with pytest.raises(IoError):
        read_grid(tmp_path / "missing.csv")
    with pytest.raises(IoError):
        write_grid(DensityGrid(UNIT, 2, 2), tmp_path / "nodir" / "g.csv")
    (tmp_path / "bad.csv").write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_grid(tmp_path / "bad.csv")


def test_blur_preserves_interior_mass():
    g = DensityGrid(UNIT, 9, 9)
    g.counts[4, 4] = 9
    b = g.blurred(1)
    assert b.sum() == pytest.approx(9.0)
    assert b[3:6, 3:6].min() == pytest.approx(1.0)
