"""Deterministic artifact emission: PPM images, CSV tables, config files.

Everything here is byte-reproducible: the PPM payload is a pure function of
the field values, and CSV floats are printed with 17 significant digits so
a round trip through text is exact.
"""

import math
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .field import BOUNDED_SENTINEL, EscapeField

PALETTES = ("default", "gray")


def _smooth_t(step: int, max_step: int) -> float:
    """Log-scaled position of an escape step in [0, 1]."""
    if max_step <= 0:
        return 0.0
    return math.log1p(step) / math.log1p(max_step)


def _rgb_default(t: float) -> tuple[int, int, int]:
    """A smooth cyclic-free color ramp (dark blue -> orange -> near white)."""
    r = 0.5 - 0.5 * math.cos(math.pi * min(1.0, 1.35 * t))
    g = 0.5 - 0.5 * math.cos(math.pi * min(1.0, 1.10 * t))
    b = 0.5 - 0.5 * math.cos(math.pi * (0.55 + 0.45 * t))
    return _quant(r), _quant(g), _quant(b)


def _rgb_gray(t: float) -> tuple[int, int, int]:
    v = _quant(t)
    return v, v, v


def _quant(x: float) -> int:
    return min(255, max(0, int(255.0 * x + 0.5)))


def emit_ppm(field: EscapeField, palette: str, path) -> None:
    """Write the escape field as a binary P6 image.

    Header is exactly "P6\\n<width> <height>\\n255\\n"; pixels follow as RGB
    triplets, row-major, top row first.  Escape steps are colored by smooth
    log scaling of the step count; sentinel pixels are pure black.
    """
    if palette not in PALETTES:
        raise ValueError(f"unknown palette {palette!r}; choose from {PALETTES}")
    ramp = _rgb_default if palette == "default" else _rgb_gray
    vals = field.values
    ny, nx = vals.shape
    top = field.max_step
    payload = bytearray()
    for r in range(ny):
        for i in range(nx):
            v = int(vals[r, i])
            if v == BOUNDED_SENTINEL:
                payload += b"\x00\x00\x00"
            else:
                payload += bytes(ramp(_smooth_t(v, top)))
    try:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
            fh.write(bytes(payload))
    except OSError as exc:
        raise OSError(f"could not write PPM to {path}: {exc}") from exc


def emit_ppm_gray_matrix(matrix: np.ndarray, path) -> None:
    """Write a float matrix (e.g. |mu| values) as a grayscale P6 image.

    Values are scaled linearly from [min, max] of the finite entries; NaN
    (branch-point sentinel) renders black.
    """
    vals = np.asarray(matrix, dtype=np.float64)
    finite = vals[np.isfinite(vals)]
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    span = hi - lo if hi > lo else 1.0
    ny, nx = vals.shape
    payload = bytearray()
    for r in range(ny):
        for i in range(nx):
            v = vals[r, i]
            if not math.isfinite(v):
                payload += b"\x00\x00\x00"
            else:
                g = _quant((v - lo) / span)
                payload += bytes((g, g, g))
    try:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
            fh.write(bytes(payload))
    except OSError as exc:
        raise OSError(f"could not write PPM to {path}: {exc}") from exc


def read_ppm_header(path) -> tuple[int, int]:
    """Parse a P6 header back to (width, height); used by tests and tooling."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P6":
            raise ValueError(f"{path}: not a binary PPM (magic {magic!r})")
        dims = fh.readline().split()
        return int(dims[0]), int(dims[1])


def _format_cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def emit_csv(table, path) -> None:
    """Write a rectangular table as CSV.

    table is a sequence of rows, the first row being the header (strings).
    Floats are written with '.' decimal separator and 17 significant digits
    (lossless for binary64); line endings are "\\n".
    """
    rows = [list(r) for r in table]
    if not rows:
        raise ValueError("table must contain at least a header row")
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise ValueError(f"ragged table: header has {width} cells, a row has {len(r)}")
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            for r in rows:
                fh.write(",".join(_format_cell(v) for v in r))
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"could not write CSV to {path}: {exc}") from exc


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    """Read back a CSV written by emit_csv: header strings + float rows."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    header = lines[0].split(",")
    rows = [[float(cell) for cell in ln.split(",")] for ln in lines[1:]]
    return header, rows


def load_config(path) -> dict[str, str]:
    """Parse a plain "key = value" config file.

    '#' starts a comment (full-line or trailing); blank lines are ignored.
    Raises ConfigError for a missing/unreadable file or a malformed line.
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key in {raw!r}")
        out[key] = value
    return out
