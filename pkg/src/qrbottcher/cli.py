"""Command-line interface.

Subcommands:
    escape       render an escape-time field to PPM (+ figure)
    dilatation   render |mu| of an iterate of H to PPM (+ CSV/figure)
    bottcher     build the coordinate; emit residual/decay tables (+ figure)
    fixed-ray    locate fixed rays; emit a summary table (+ figure)
    trace-sweep  sweep (K, theta); emit the trace/bound table (+ figure)
    verify       run the verification suites

Every numeric flag can also be given in a config file as `key = value`
(with '#' comments); command-line flags override config values.  Exit
codes: 0 success, 1 computation or verification failure, 2 bad
configuration or usage.
"""

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .affine import StretchParams
from .bottcher import (
    SolverConfig,
    build_coordinate,
    conjugacy_residual,
    default_config,
    probe_differences,
)
from .dilatation import (
    cos_phi_lower_bound,
    fixed_ray,
    fixed_rays,
    mu_fixed_ray,
    ray_angle_defect,
    trace_sq,
)
from .emit import emit_csv, emit_ppm, emit_ppm_gray_matrix, load_config
from .errors import ConfigError, NoConvergenceError
from .field import GridSpec, render_dilatation, render_escape
from .qamap import QAMap
from .verify import run_verify

import cmath

import numpy as np

# defaults for every config-file/flag knob, keyed by argparse dest
DEFAULTS = {
    "K": 2.0,
    "theta": 0.0,
    "c_re": 0.0,
    "c_im": 0.0,
    "center": "0,0",
    "width": 6.0,
    "height": 6.0,
    "nx": 400,
    "ny": 400,
    "max_iter": 128,
    "n": 4,
    "out": None,
    "palette": "default",
    "workers": None,
    "tol": 1e-12,
    "k_max": 40,
    "sigma": None,
    "seed": 20250814,
}

_CASTS = {
    "K": float, "theta": float, "c_re": float, "c_im": float, "center": str,
    "width": float, "height": float, "nx": int, "ny": int, "max_iter": int,
    "n": int, "out": str, "palette": str, "workers": int, "tol": float,
    "k_max": int, "sigma": float, "seed": int,
}


def parse_center(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise ConfigError(f"center must be 're,im', got {text!r}") from exc


def _merged(args: argparse.Namespace) -> dict:
    """Defaults, overridden by config-file keys, overridden by CLI flags."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        for key, raw in load_config(args.config).items():
            if key not in _CASTS:
                raise ConfigError(
                    f"unknown config key {key!r}; known keys: {sorted(_CASTS)}"
                )
            try:
                merged[key] = _CASTS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"config key {key!r}: bad value {raw!r}") from exc
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _qamap(opt: dict) -> QAMap:
    try:
        return QAMap(StretchParams(opt["K"], opt["theta"]), complex(opt["c_re"], opt["c_im"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _grid(opt: dict) -> GridSpec:
    try:
        return GridSpec(parse_center(opt["center"]), opt["width"], opt["height"],
                        opt["nx"], opt["ny"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _solver_config(m: QAMap, opt: dict) -> SolverConfig:
    try:
        base = default_config(m, tol=opt["tol"], k_max=opt["k_max"])
        if opt["sigma"] is None:
            return base
        return SolverConfig(opt["sigma"], tol=opt["tol"], k_max=opt["k_max"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _require_out(opt: dict, what: str) -> Path:
    if not opt["out"]:
        raise ConfigError(f"--out is required for {what}")
    return Path(opt["out"])


def _fig_path(out: Path) -> Path:
    return out.with_suffix(".png")


def cmd_escape(args) -> int:
    opt = _merged(args)
    m = _qamap(opt)
    g = _grid(opt)
    out = _require_out(opt, "escape")
    field = render_escape(m, g, opt["max_iter"], workers=opt["workers"])
    emit_ppm(field, opt["palette"], out)
    bounded = int((field.values < 0).sum())
    print(f"escape field {g.nx}x{g.ny} -> {out} "
          f"(max step {field.max_step}, {bounded} bounded/undetermined pixels)")
    if not args.no_fig:
        from .figures import escape_figure

        ttl = f"escape steps, K={opt['K']:g}, theta={opt['theta']:g}, c={complex(opt['c_re'], opt['c_im']):g}"
        escape_figure(field, _fig_path(out), ttl)
        print(f"figure -> {_fig_path(out)}")
    return 0


def cmd_dilatation(args) -> int:
    opt = _merged(args)
    m = _qamap(opt)
    g = _grid(opt)
    out = _require_out(opt, "dilatation")
    matrix = render_dilatation(m, g, opt["n"], workers=opt["workers"])
    emit_ppm_gray_matrix(matrix, out)
    finite = matrix[np.isfinite(matrix)]
    print(f"dilatation field (n={opt['n']}) {g.nx}x{g.ny} -> {out} "
          f"(|mu| range {finite.min():.6g} .. {finite.max():.6g})")
    if args.csv:
        rows = [["re", "im", "mu_abs"]]
        for r in range(g.ny):
            pts = g.row_points(r)
            for i in range(g.nx):
                rows.append([pts[i].real, pts[i].imag, matrix[r, i]])
        emit_csv(rows, args.csv)
        print(f"table -> {args.csv}")
    if not args.no_fig:
        from .figures import dilatation_figure

        ttl = f"|mu| of H^{opt['n']}, K={opt['K']:g}, theta={opt['theta']:g}"
        dilatation_figure(matrix, g, _fig_path(out), ttl)
        print(f"figure -> {_fig_path(out)}")
    return 0


def cmd_bottcher(args) -> int:
    opt = _merged(args)
    m = _qamap(opt)
    cfg = _solver_config(m, opt)
    out = _require_out(opt, "bottcher")
    try:
        b = build_coordinate(m, cfg)
    except NoConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        for k, d in enumerate(exc.diagnostics.get("sup_differences", [])):
            print(f"  k={k}: sup |F_k+1 - F_k| = {d:.6g}", file=sys.stderr)
        return 1
    R2 = 2.0 * math.exp(b.config.sigma)
    rows = [["angle", "z_re", "z_im", "residual"]]
    worst = 0.0
    for i in range(64):
        ang = 2.0 * math.pi * i / 64
        z = R2 * cmath.exp(1j * ang)
        res = conjugacy_residual(b, z)
        worst = max(worst, res)
        rows.append([ang, z.real, z.imag, res])
    emit_csv(rows, out)
    diffs = probe_differences(m, b.config, min(b.k_used + 2, b.config.k_max))
    decay_csv = out.with_name(out.stem + "_decay" + out.suffix)
    emit_csv([["k", "sup_difference"]] + [[k, d] for k, d in enumerate(diffs)], decay_csv)
    print(f"coordinate built: k_used={b.k_used}, sigma={b.config.sigma:.6g}, "
          f"max residual {worst:.3g} on |z| = {R2:.4g}")
    print(f"residual table -> {out}; decay table -> {decay_csv}")
    if not args.no_fig:
        from .figures import decay_figure

        decay_figure(diffs, b.config.tol, _fig_path(out),
                     f"approximant decay, K={opt['K']:g}, theta={opt['theta']:g}, "
                     f"c={complex(opt['c_re'], opt['c_im']):g}")
        print(f"figure -> {_fig_path(out)}")
    return 0


def cmd_fixed_ray(args) -> int:
    opt = _merged(args)
    try:
        p = StretchParams(opt["K"], opt["theta"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rays = fixed_rays(p) if p.theta != 0.5 * math.pi else (fixed_ray(p),)
    canonical = fixed_ray(p)
    rows = [["K", "theta", "phi", "defect", "cos_phi", "cos_phi_bound", "trace_sq", "canonical"]]
    for r in rays:
        rows.append([
            p.K, p.theta, r.phi, ray_angle_defect(p, r.phi), math.cos(r.phi),
            cos_phi_lower_bound(p.K), trace_sq(p, r), int(r.phi == canonical.phi),
        ])
    print(f"{len(rays)} fixed ray(s) for K={p.K:g}, theta={p.theta:g}; "
          f"canonical phi = {canonical.phi:.12g}")
    for r in rays:
        mark = " (canonical)" if r.phi == canonical.phi else ""
        print(f"  phi = {r.phi: .12f}, tr^2 = {trace_sq(p, r):.6f}{mark}")
    if opt["out"]:
        out = Path(opt["out"])
        emit_csv(rows, out)
        print(f"table -> {out}")
        if not args.no_fig:
            from .figures import ray_defect_figure

            ray_defect_figure(p, rays, _fig_path(out),
                              f"ray rotation defect, K={p.K:g}, theta={p.theta:g}")
            print(f"figure -> {_fig_path(out)}")
    return 0


def cmd_trace_sweep(args) -> int:
    opt = _merged(args)
    out = _require_out(opt, "trace-sweep")
    rows = [["K", "theta", "phi", "trace_sq", "cos_margin"]]
    worst_tr = math.inf
    worst_margin = math.inf
    K = 1.0
    while K <= 10.0 + 1e-9:
        th = -1.5
        while th <= 1.5 + 1e-9:
            p = StretchParams(round(K, 10), round(th, 10))
            ray = fixed_ray(p)
            t2 = trace_sq(p, ray)
            margin = math.cos(ray.phi) - cos_phi_lower_bound(p.K)
            rows.append([p.K, p.theta, ray.phi, t2, margin])
            worst_tr = min(worst_tr, t2)
            worst_margin = min(worst_margin, margin)
            th += 0.05
        K += 0.1
    emit_csv(rows, out)
    print(f"swept {len(rows) - 1} grid points -> {out}")
    print(f"min tr^2 = {worst_tr:.12f} (needs >= 4); "
          f"min cos-phi margin = {worst_margin:.3e} (needs >= -1e-12)")
    if not args.no_fig:
        from .figures import trace_sweep_figure

        trace_sweep_figure(rows[1:], _fig_path(out), "fixed-ray trace sweep")
        print(f"figure -> {_fig_path(out)}")
    ok = worst_tr >= 4.0 - 1e-9 and worst_margin >= -1e-12
    return 0 if ok else 1


def cmd_verify(args) -> int:
    overrides = {k: getattr(args, k, None) for k in ("K", "theta", "c_re", "c_im", "tol", "k_max", "sigma", "seed")}
    return run_verify(getattr(args, "config", None), overrides)


def _add_map_flags(sp):
    sp.add_argument("--K", type=float, help="stretch factor K >= 1")
    sp.add_argument("--theta", type=float, help="stretch direction in (-pi/2, pi/2]")
    sp.add_argument("--c-re", dest="c_re", type=float, help="Re c")
    sp.add_argument("--c-im", dest="c_im", type=float, help="Im c")
    sp.add_argument("--config", help="config file with key = value lines")


def _add_grid_flags(sp):
    sp.add_argument("--center", help="grid center as 're,im'")
    sp.add_argument("--width", type=float, help="grid width in the plane")
    sp.add_argument("--height", type=float, help="grid height in the plane")
    sp.add_argument("--nx", type=int, help="pixels horizontally")
    sp.add_argument("--ny", type=int, help="pixels vertically")
    sp.add_argument("--workers", type=int, help="row-parallel worker threads")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qrbottcher",
        description="Böttcher coordinates and dilatation growth for stretched quadratic maps",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("escape", help="render an escape-time field to PPM")
    _add_map_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument("--max-iter", dest="max_iter", type=int, help="orbit budget per pixel")
    sp.add_argument("--out", help="output PPM path")
    sp.add_argument("--palette", choices=("default", "gray"), help="color ramp")
    sp.add_argument("--no-fig", action="store_true", help="skip the matplotlib figure")
    sp.set_defaults(fn=cmd_escape)

    sp = sub.add_parser("dilatation", help="render |mu| of H^n to PPM")
    _add_map_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument("--n", type=int, help="iterate order n >= 1")
    sp.add_argument("--out", help="output PPM path")
    sp.add_argument("--csv", help="also write per-pixel values to this CSV")
    sp.add_argument("--no-fig", action="store_true", help="skip the matplotlib figure")
    sp.set_defaults(fn=cmd_dilatation)

    sp = sub.add_parser("bottcher", help="build the coordinate and emit residual tables")
    _add_map_flags(sp)
    sp.add_argument("--tol", type=float, help="probe-grid stopping tolerance")
    sp.add_argument("--k-max", dest="k_max", type=int, help="iteration budget")
    sp.add_argument("--sigma", type=float, help="override the domain parameter sigma")
    sp.add_argument("--out", help="output CSV path (decay table lands beside it)")
    sp.add_argument("--no-fig", action="store_true", help="skip the matplotlib figure")
    sp.set_defaults(fn=cmd_bottcher)

    sp = sub.add_parser("fixed-ray", help="locate invariant rays of H")
    _add_map_flags(sp)
    sp.add_argument("--out", help="optional CSV path for the ray table")
    sp.add_argument("--no-fig", action="store_true", help="skip the matplotlib figure")
    sp.set_defaults(fn=cmd_fixed_ray)

    sp = sub.add_parser("trace-sweep", help="sweep (K, theta), table tr^2 and the cos bound")
    _add_map_flags(sp)
    sp.add_argument("--out", help="output CSV path")
    sp.add_argument("--no-fig", action="store_true", help="skip the matplotlib figure")
    sp.set_defaults(fn=cmd_trace_sweep)

    sp = sub.add_parser("verify", help="run the verification suites")
    _add_map_flags(sp)
    sp.add_argument("--tol", type=float, help="solver tolerance for the featured map")
    sp.add_argument("--k-max", dest="k_max", type=int, help="solver budget")
    sp.add_argument("--sigma", type=float, help="solver sigma override")
    sp.add_argument("--seed", type=int, help="seed for the randomized suites")
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
