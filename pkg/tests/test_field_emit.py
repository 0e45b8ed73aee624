"""Tests for grid geometry, field rendering, and artifact emission."""

import hashlib
import math

import numpy as np
import pytest

from qrbottcher.affine import StretchParams
from qrbottcher.emit import (
    emit_csv,
    emit_ppm,
    emit_ppm_gray_matrix,
    load_config,
    read_csv,
    read_ppm_header,
)
from qrbottcher.errors import ConfigError
from qrbottcher.field import BOUNDED_SENTINEL, EscapeField, GridSpec, render_dilatation, render_escape
from qrbottcher.qamap import QAMap


def small_map():
    return QAMap(StretchParams(2.0, 0.0), -0.8 + 0.3j)


def test_pixel_centers_are_where_the_contract_says():
    g = GridSpec(0j, 4.0, 2.0, 4, 2)
    # top-left storage cell is the upper-left corner of the plane rectangle
    assert g.pixel_center(0, 0) == pytest.approx(-1.5 + 0.5j)
    assert g.pixel_center(3, 0) == pytest.approx(1.5 + 0.5j)
    assert g.pixel_center(0, 1) == pytest.approx(-1.5 - 0.5j)
    assert g.pixel_center(3, 1) == pytest.approx(1.5 - 0.5j)


def test_row_points_match_pixel_center():
    g = GridSpec(1.0 - 2.0j, 3.0, 5.0, 7, 5)
    for row in (0, 2, 4):
        pts = g.row_points(row)
        for col in (0, 3, 6):
            assert pts[col] == pytest.approx(g.pixel_center(col, row))


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(0j, 1.0, 1.0, 0, 5)
    with pytest.raises(ValueError):
        GridSpec(0j, -1.0, 1.0, 4, 4)


def test_render_is_deterministic_across_worker_counts():
    g = GridSpec(0j, 6.0, 6.0, 33, 17)
    serial = render_escape(small_map(), g, 48, workers=1)
    parallel = render_escape(small_map(), g, 48, workers=4)
    assert np.array_equal(serial.values, parallel.values)
    d1 = render_dilatation(small_map(), g, 3, workers=1)
    d4 = render_dilatation(small_map(), g, 3, workers=4)
    assert np.array_equal(np.nan_to_num(d1), np.nan_to_num(d4))


def test_escape_field_has_the_central_symmetry():
    # f(-z) = f(z), so escape steps are symmetric under z -> -z
    g = GridSpec(0j, 5.0, 4.0, 16, 10)
    field = render_escape(small_map(), g, 64)
    assert np.array_equal(field.values, field.values[::-1, ::-1])


def test_escape_field_shape_is_validated():
    g = GridSpec(0j, 1.0, 1.0, 3, 2)
    with pytest.raises(ValueError):
        EscapeField(g, np.zeros((3, 3), dtype=np.int32))


def test_dilatation_render_marks_the_branch_point():
    g = GridSpec(0j, 2.0, 2.0, 3, 3)  # center pixel lands exactly on 0
    mat = render_dilatation(QAMap(StretchParams(2.0, 0.0), 0j), g, 2)
    assert math.isnan(mat[1, 1])
    assert np.isfinite(np.delete(mat.ravel(), 4)).all()


def test_ppm_header_and_size(tmp_path):
    g = GridSpec(0j, 6.0, 6.0, 9, 5)
    field = render_escape(small_map(), g, 32)
    out = tmp_path / "f.ppm"
    emit_ppm(field, "default", out)
    assert read_ppm_header(out) == (9, 5)
    data = out.read_bytes()
    assert data.startswith(b"P6\n9 5\n255\n")
    assert len(data) == len(b"P6\n9 5\n255\n") + 3 * 9 * 5


def test_ppm_bytes_are_reproducible_and_frozen(tmp_path):
    """Golden hash: any change to palette or scaling shows up here."""
    vals = np.array(
        [[0, 1, 2, BOUNDED_SENTINEL], [5, 8, 13, 21]], dtype=np.int32
    )
    g = GridSpec(0j, 4.0, 2.0, 4, 2)
    field = EscapeField(g, vals)
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    emit_ppm(field, "default", a)
    emit_ppm(field, "default", b)
    assert a.read_bytes() == b.read_bytes()
    digest = hashlib.sha256(a.read_bytes()).hexdigest()
    assert digest == "7b60f69ddbbe5fdf1e9eb62c0e9f2b5986a1392e08cf122deb0d7bf096a9a3fd"


def test_sentinel_pixels_are_black(tmp_path):
    vals = np.full((2, 2), BOUNDED_SENTINEL, dtype=np.int32)
    field = EscapeField(GridSpec(0j, 1.0, 1.0, 2, 2), vals)
    out = tmp_path / "black.ppm"
    emit_ppm(field, "gray", out)
    assert out.read_bytes().endswith(b"\x00" * 12)


def test_ppm_rejects_unknown_palette(tmp_path):
    field = EscapeField(GridSpec(0j, 1.0, 1.0, 1, 1), np.zeros((1, 1), dtype=np.int32))
    with pytest.raises(ValueError):
        emit_ppm(field, "sepia", tmp_path / "x.ppm")


def test_gray_matrix_scaling_and_nan(tmp_path):
    mat = np.array([[0.0, 1.0], [0.5, math.nan]])
    out = tmp_path / "g.ppm"
    emit_ppm_gray_matrix(mat, out)
    body = out.read_bytes().split(b"255\n", 1)[1]
    assert body[0:3] == b"\x00\x00\x00"      # minimum -> black
    assert body[3:6] == b"\xff\xff\xff"      # maximum -> white
    assert body[6:9] == b"\x80\x80\x80"      # midpoint -> mid gray
    assert body[9:12] == b"\x00\x00\x00"     # NaN -> black


def test_csv_roundtrip_is_lossless(tmp_path):
    rows = [
        ["a", "b", "c"],
        [0.1, -1.0 / 3.0, 12345],
        [1e-17, 2.0 ** -52, -0.0],
    ]
    out = tmp_path / "t.csv"
    emit_csv(rows, out)
    header, back = read_csv(out)
    assert header == ["a", "b", "c"]
    assert back[0] == [0.1, -1.0 / 3.0, 12345.0]
    assert back[1] == [1e-17, 2.0 ** -52, -0.0]


def test_csv_rejects_ragged_and_empty(tmp_path):
    with pytest.raises(ValueError):
        emit_csv([], tmp_path / "e.csv")
    with pytest.raises(ValueError):
        emit_csv([["a", "b"], [1.0]], tmp_path / "r.csv")


def test_config_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# a comment line\n"
        "K = 2.5\n"
        "theta=0.3   # trailing comment\n"
        "\n"
        "nx = 40\n"
    )
    assert load_config(cfg) == {"K": "2.5", "theta": "0.3", "nx": "40"}


def test_config_errors_carry_line_numbers(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("K = 2\njust words\n")
    with pytest.raises(ConfigError, match="2"):
        load_config(cfg)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")
