"""Command-line surface: one subcommand per stage plus a pipeline runner.

Exit status: 0 on success, 1 on validation errors (bad flags or
parameters), 2 on I/O errors (missing or malformed files). Identical
inputs and flags always produce byte-identical outputs. Feature records
go to stdout as JSON lines unless --out names a file.

EDGECRAFT_THREADS caps internal voting parallelism (0 = sequential);
results never depend on it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .canny import (CONNECTIVITY_MODES, TRANSITIVE, CannyParams, canny,
                    double_threshold, hysteresis, non_maximum_suppression)
from .features import (CircleFeature, CornerFeature, LineFeature,
                       ShapeFeature, feature_to_json)
from .filters import FILTER_KINDS, FilterSpec, apply_filter, gaussian_blur
from .ght import (GhtParams, build_rtable, ght_accumulate, locate_shape,
                  rtable_from_text, rtable_to_text)
from .gradients import (EIGHT, FOUR, PREWITT, ROBERTS, SOBEL,
                        first_order_gradient, laplacian)
from .harris import HarrisParams, harris_corners
from .hough import (accumulator_image, decode_lines,
                    effective_vote_threshold, find_peaks,
                    hough_circle_accumulate, hough_line_accumulate)
from .io import ImageFormatError, read_image_file, write_image_file
from .overlay import render_overlay
from .validation import (BORDER_POLICIES, REPLICATE, THRESHOLD_MODES,
                         check_image)

EDGE_OPS = (PREWITT, SOBEL, ROBERTS, "laplacian4", "laplacian8")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_image(path) -> np.ndarray:
    return read_image_file(path)


def _read_edge_map(path) -> np.ndarray:
    return read_image_file(path) > 0.5


def _edge_map_image(edges: np.ndarray) -> np.ndarray:
    return edges.astype(np.float64)


def _normalized_magnitude(plane: np.ndarray) -> np.ndarray:
    peak = float(np.abs(plane).max())
    if peak <= 0.0:
        return np.zeros_like(plane)
    return np.abs(plane) / peak


def _emit_features(features, out_path) -> None:
    lines = [feature_to_json(f) for f in features]
    if out_path is None:
        for line in lines:
            print(line)
    else:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write("".join(line + "\n" for line in lines))


def _maybe_overlay(args, base_image, features) -> None:
    if getattr(args, "overlay", None) is None:
        return
    write_image_file(args.overlay, render_overlay(base_image, features))


# --- subcommand handlers ----------------------------------------------------

def _cmd_filter(args) -> None:
    spec = FilterSpec(kind=args.kind, radius=args.radius, sigma=args.sigma,
                      noise_variance=args.noise_var)
    image = _read_image(args.input)
    write_image_file(args.output, apply_filter(image, spec, args.border))


def _cmd_edges(args) -> None:
    if args.op not in EDGE_OPS:
        raise ValueError(f"unknown operator {args.op!r}")
    image = check_image(_read_image(args.input))
    if args.op in ("laplacian4", "laplacian8"):
        plane = laplacian(image, FOUR if args.op == "laplacian4" else EIGHT,
                          args.border)
    else:
        plane = first_order_gradient(image, args.op, args.border).magnitude
    write_image_file(args.output, _normalized_magnitude(plane))


def _canny_params(args) -> CannyParams:
    mode = getattr(args, "canny_mode", None) or args.mode
    return CannyParams(sigma=args.sigma, low=args.low, high=args.high,
                       threshold_mode=mode, connectivity=args.connectivity)


def _cmd_canny(args) -> None:
    params = _canny_params(args)
    image = _read_image(args.input)
    write_image_file(args.output, _edge_map_image(canny(image, params)))


def _cmd_harris(args) -> None:
    params = HarrisParams(k=args.k, window_sigma=args.window_sigma,
                          threshold=args.threshold, threshold_mode=args.mode,
                          nms_radius=args.nms_radius)
    image = _read_image(args.input)
    corners = harris_corners(image, params)
    features = [CornerFeature(c.x, c.y, c.response) for c in corners]
    _emit_features(features, args.output)
    _maybe_overlay(args, image, features)


def _cmd_hough_line(args) -> None:
    if args.theta_bins < 1 or args.rho_step <= 0:
        raise ValueError("theta-bins must be >= 1 and rho-step > 0")
    edges = _read_edge_map(args.input)
    acc = hough_line_accumulate(edges, args.theta_bins, args.rho_step)
    needed = effective_vote_threshold(acc, args.threshold, args.mode)
    peaks = find_peaks(acc, needed, args.nms_radius)
    lines = decode_lines(peaks, acc)
    features = [LineFeature(line.rho, line.theta, peak.votes)
                for line, peak in zip(lines, peaks)]
    _emit_features(features, args.output)
    if args.acc_dump is not None:
        write_image_file(args.acc_dump, accumulator_image(acc))
    _maybe_overlay(args, _edge_map_image(edges), features)


def _radius_dump_path(path, radius) -> str:
    stem, ext = os.path.splitext(os.fspath(path))
    return f"{stem}-r{radius:g}{ext}"


def _cmd_hough_circle(args) -> None:
    if not args.radius:
        raise ValueError("at least one --radius is required")
    if any(r <= 0 for r in args.radius):
        raise ValueError("radii must be > 0")
    if args.theta_steps < 8:
        raise ValueError("theta-steps must be >= 8")
    edges = _read_edge_map(args.input)
    features = []
    for radius in args.radius:
        acc = hough_circle_accumulate(edges, radius, args.theta_steps)
        needed = effective_vote_threshold(acc, args.threshold, args.mode)
        for peak in find_peaks(acc, needed, args.nms_radius):
            features.append(CircleFeature(peak.value1, peak.value0,
                                          float(radius), peak.votes))
        if args.acc_dump is not None:
            dump = args.acc_dump if len(args.radius) == 1 \
                else _radius_dump_path(args.acc_dump, radius)
            write_image_file(dump, accumulator_image(acc))
    features.sort(key=lambda f: -f.votes)
    _emit_features(features, args.output)
    _maybe_overlay(args, _edge_map_image(edges), features)


def _edges_and_orientation(image, params: CannyParams):
    """Shared model/scene extraction: the phase plane must come from the
    same Sobel-on-blurred-image computation on both sides."""
    blurred = gaussian_blur(image, params.sigma)
    fld = first_order_gradient(blurred, SOBEL)
    thin = non_maximum_suppression(fld)
    classes = double_threshold(thin, params)
    return hysteresis(classes, params.connectivity), fld.orientation


def _cmd_ght_build(args) -> None:
    params = _canny_params(args)
    if args.phi_bins < 4:
        raise ValueError("phi-bins must be >= 4")
    image = _read_image(args.input)
    edges, orientation = _edges_and_orientation(image, params)
    if args.ref is not None:
        ref = (args.ref[0], args.ref[1])
    else:
        ys, xs = np.nonzero(edges)
        if len(xs) == 0:
            raise ValueError("model image produced no edge pixels")
        ref = (int(np.rint(xs.mean())), int(np.rint(ys.mean())))
    rtable = build_rtable(edges, orientation, ref, args.phi_bins)
    with open(args.output, "w", encoding="ascii") as fh:
        fh.write(rtable_to_text(rtable))


def _cmd_ght_detect(args) -> None:
    canny_params = _canny_params(args)
    # Peak parameters validate before any file is touched; phi_bins is
    # rechecked against the loaded table.
    GhtParams(threshold=args.threshold, threshold_mode=args.mode,
              nms_radius=args.nms_radius)
    with open(args.rtable, "r", encoding="ascii") as fh:
        rtable = rtable_from_text(fh.read())
    image = _read_image(args.input)
    edges, orientation = _edges_and_orientation(image, canny_params)
    acc = ght_accumulate(edges, orientation, rtable)
    ght_params = GhtParams(phi_bins=rtable.phi_bins, threshold=args.threshold,
                           threshold_mode=args.mode, nms_radius=args.nms_radius)
    located = locate_shape(acc, ght_params)
    features = [ShapeFeature(x, y, votes) for (x, y), votes in located]
    _emit_features(features, args.output)
    if args.acc_dump is not None:
        write_image_file(args.acc_dump, accumulator_image(acc))
    _maybe_overlay(args, image, features)


# --- pipeline ---------------------------------------------------------------

def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def _validate_pipeline(config: dict):
    """Check the whole stage list before any pixel work.

    Returns [(index, stage_name, validated_params)]; raises ValueError
    on the first invalid stage or out-of-order data dependency.
    """
    _require(isinstance(config, dict), "pipeline config must be a JSON object")
    _require("input" in config, "pipeline config needs an 'input' path")
    _require("output_dir" in config, "pipeline config needs an 'output_dir'")
    stages = config.get("stages")
    _require(isinstance(stages, list) and stages,
             "pipeline config needs a non-empty 'stages' list")
    plan = []
    have_edges = False
    for i, raw in enumerate(stages):
        _require(isinstance(raw, dict) and "stage" in raw,
                 f"stage {i}: each stage needs a 'stage' name")
        name = raw["stage"]
        params = {k: v for k, v in raw.items() if k != "stage"}
        if name == "filter":
            spec = FilterSpec(kind=params.pop("kind", "mean"),
                              radius=params.pop("radius", 1),
                              sigma=params.pop("sigma", 1.0),
                              noise_variance=params.pop("noise_variance", None))
            _require(not params, f"stage {i}: unknown filter keys {sorted(params)}")
            plan.append((i, name, spec))
        elif name == "edges":
            op = params.pop("op", SOBEL)
            _require(op in EDGE_OPS, f"stage {i}: unknown operator {op!r}")
            _require(not params, f"stage {i}: unknown edges keys {sorted(params)}")
            plan.append((i, name, op))
        elif name == "canny":
            cp = CannyParams(sigma=params.pop("sigma", 1.0),
                             low=params.pop("low", 0.1),
                             high=params.pop("high", 0.3),
                             threshold_mode=params.pop("mode", "ratio"),
                             connectivity=params.pop("connectivity", TRANSITIVE))
            _require(not params, f"stage {i}: unknown canny keys {sorted(params)}")
            plan.append((i, name, cp))
            have_edges = True
        elif name == "harris":
            hp = HarrisParams(k=params.pop("k", 0.04),
                              window_sigma=params.pop("window_sigma", 1.0),
                              threshold=params.pop("threshold", 0.01),
                              threshold_mode=params.pop("mode", "ratio"),
                              nms_radius=params.pop("nms_radius", 1))
            _require(not params, f"stage {i}: unknown harris keys {sorted(params)}")
            plan.append((i, name, hp))
        elif name == "hough-line":
            cfg = {"theta_bins": int(params.pop("theta_bins", 180)),
                   "rho_step": float(params.pop("rho_step", 1.0)),
                   "threshold": float(params.pop("threshold", 0.5)),
                   "mode": params.pop("mode", "ratio"),
                   "nms_radius": int(params.pop("nms_radius", 2)),
                   "acc_dump": bool(params.pop("acc_dump", False))}
            _require(cfg["theta_bins"] >= 1 and cfg["rho_step"] > 0,
                     f"stage {i}: theta_bins must be >= 1 and rho_step > 0")
            _require(cfg["mode"] in THRESHOLD_MODES,
                     f"stage {i}: unknown threshold mode {cfg['mode']!r}")
            _require(not params, f"stage {i}: unknown hough-line keys {sorted(params)}")
            _require(have_edges, f"stage {i}: hough-line needs a prior canny stage")
            plan.append((i, name, cfg))
        elif name == "hough-circle":
            radii = params.pop("radii", None)
            _require(isinstance(radii, list) and radii
                     and all(isinstance(r, (int, float)) and r > 0 for r in radii),
                     f"stage {i}: hough-circle needs a 'radii' list of positive numbers")
            cfg = {"radii": [float(r) for r in radii],
                   "theta_steps": int(params.pop("theta_steps", 360)),
                   "threshold": float(params.pop("threshold", 0.5)),
                   "mode": params.pop("mode", "ratio"),
                   "nms_radius": int(params.pop("nms_radius", 2)),
                   "acc_dump": bool(params.pop("acc_dump", False))}
            _require(cfg["theta_steps"] >= 8, f"stage {i}: theta_steps must be >= 8")
            _require(cfg["mode"] in THRESHOLD_MODES,
                     f"stage {i}: unknown threshold mode {cfg['mode']!r}")
            _require(not params, f"stage {i}: unknown hough-circle keys {sorted(params)}")
            _require(have_edges, f"stage {i}: hough-circle needs a prior canny stage")
            plan.append((i, name, cfg))
        elif name == "ght-detect":
            model = params.pop("model", None)
            _require(isinstance(model, str),
                     f"stage {i}: ght-detect needs a 'model' table path")
            gp = GhtParams(phi_bins=int(params.pop("phi_bins", 64)),
                           threshold=float(params.pop("threshold", 0.5)),
                           threshold_mode=params.pop("mode", "ratio"),
                           nms_radius=int(params.pop("nms_radius", 2)))
            acc_dump = bool(params.pop("acc_dump", False))
            _require(not params, f"stage {i}: unknown ght-detect keys {sorted(params)}")
            _require(have_edges, f"stage {i}: ght-detect needs a prior canny stage")
            plan.append((i, name, {"model": model, "params": gp,
                                   "acc_dump": acc_dump}))
        else:
            raise ValueError(f"stage {i}: unknown stage {name!r}")
    return plan


def _cmd_pipeline(args) -> None:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config is not valid JSON: {exc}") from None
    plan = _validate_pipeline(config)

    out_dir = config["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    image = _read_image(config["input"])
    original = image
    edges = None
    orientation = None
    features = []

    def out_path(i, name, suffix=".pgm"):
        return os.path.join(out_dir, f"{i:02d}-{name}{suffix}")

    for i, name, cfg in plan:
        if name == "filter":
            image = apply_filter(image, cfg)
            write_image_file(out_path(i, f"filter-{cfg.kind}"), image)
        elif name == "edges":
            fld = first_order_gradient(image, cfg) if cfg in (PREWITT, SOBEL, ROBERTS) \
                else None
            plane = fld.magnitude if fld is not None else laplacian(
                image, FOUR if cfg == "laplacian4" else EIGHT)
            write_image_file(out_path(i, f"edges-{cfg}"), _normalized_magnitude(plane))
        elif name == "canny":
            edges, orientation = _edges_and_orientation(image, cfg)
            write_image_file(out_path(i, "canny"), _edge_map_image(edges))
        elif name == "harris":
            corners = harris_corners(image, cfg)
            features.extend(CornerFeature(c.x, c.y, c.response) for c in corners)
        elif name == "hough-line":
            acc = hough_line_accumulate(edges, cfg["theta_bins"], cfg["rho_step"])
            needed = effective_vote_threshold(acc, cfg["threshold"], cfg["mode"])
            peaks = find_peaks(acc, needed, cfg["nms_radius"])
            for line, peak in zip(decode_lines(peaks, acc), peaks):
                features.append(LineFeature(line.rho, line.theta, peak.votes))
            if cfg["acc_dump"]:
                write_image_file(out_path(i, "hough-line-acc"), accumulator_image(acc))
        elif name == "hough-circle":
            for radius in cfg["radii"]:
                acc = hough_circle_accumulate(edges, radius, cfg["theta_steps"])
                needed = effective_vote_threshold(acc, cfg["threshold"], cfg["mode"])
                for peak in find_peaks(acc, needed, cfg["nms_radius"]):
                    features.append(CircleFeature(peak.value1, peak.value0,
                                                  float(radius), peak.votes))
                if cfg["acc_dump"]:
                    write_image_file(out_path(i, f"hough-circle-acc-r{radius:g}"),
                                     accumulator_image(acc))
        elif name == "ght-detect":
            with open(cfg["model"], "r", encoding="ascii") as fh:
                rtable = rtable_from_text(fh.read())
            acc = ght_accumulate(edges, orientation, rtable)
            for (x, y), votes in locate_shape(acc, cfg["params"]):
                features.append(ShapeFeature(x, y, votes))
            if cfg["acc_dump"]:
                write_image_file(out_path(i, "ght-acc"), accumulator_image(acc))

    _emit_features(features, os.path.join(out_dir, "features.jsonl"))
    write_image_file(os.path.join(out_dir, "overlay.pgm"),
                     render_overlay(original, features))


# --- parser -----------------------------------------------------------------

def _add_io(p, output_required=True, output_help="output image path"):
    p.add_argument("--in", dest="input", required=True, metavar="PATH",
                   help="input image path (.pgm or .png)")
    if output_required:
        p.add_argument("--out", dest="output", required=True, metavar="PATH",
                       help=output_help)
    else:
        p.add_argument("--out", dest="output", default=None, metavar="PATH",
                       help="feature records path (JSON lines); stdout if omitted")


def _add_canny_flags(p, mode_flag="--mode"):
    p.add_argument("--sigma", type=float, default=1.0,
                   help="Gaussian pre-blur width (default 1.0)")
    p.add_argument("--low", type=float, default=0.1,
                   help="low threshold (default 0.1)")
    p.add_argument("--high", type=float, default=0.3,
                   help="high threshold (default 0.3)")
    # Subcommands that also take a vote --mode name this one --canny-mode.
    dest = "mode" if mode_flag == "--mode" else "canny_mode"
    p.add_argument(mode_flag, dest=dest, choices=THRESHOLD_MODES,
                   default="ratio",
                   help="edge threshold interpretation (default ratio)")
    p.add_argument("--connectivity", choices=CONNECTIVITY_MODES,
                   default=TRANSITIVE,
                   help="weak-edge tracking rule (default transitive)")


def _add_vote_flags(p):
    p.add_argument("--threshold", type=float, default=0.5,
                   help="peak vote threshold (default 0.5)")
    p.add_argument("--mode", choices=THRESHOLD_MODES, default="ratio",
                   help="threshold interpretation (default ratio)")
    p.add_argument("--nms-radius", type=int, default=2,
                   help="peak suppression radius in cells (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edgecraft",
                     description="Classical edge, corner, and boundary detection.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("filter", parents=[], help="denoise an image")
    p.add_argument("--kind", choices=FILTER_KINDS, required=True)
    p.add_argument("--radius", type=int, default=1, help="window half-width")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian width")
    p.add_argument("--noise-var", type=float, default=None,
                   help="Wiener noise variance (default: estimated)")
    p.add_argument("--border", choices=BORDER_POLICIES, default=REPLICATE)
    _add_io(p)
    p.set_defaults(handler=_cmd_filter)

    p = sub.add_parser("edges", help="gradient magnitude map of an operator")
    p.add_argument("--op", choices=EDGE_OPS, required=True)
    p.add_argument("--border", choices=BORDER_POLICIES, default=REPLICATE)
    _add_io(p, output_help="normalized magnitude image path")
    p.set_defaults(handler=_cmd_edges)

    p = sub.add_parser("canny", help="run the full Canny pipeline")
    _add_canny_flags(p)
    _add_io(p, output_help="binary edge map path")
    p.set_defaults(handler=_cmd_canny)

    p = sub.add_parser("harris", help="detect corners")
    p.add_argument("--k", type=float, default=0.04)
    p.add_argument("--window-sigma", type=float, default=1.0)
    _add_vote_flags(p)
    p.add_argument("--overlay", default=None, metavar="PATH",
                   help="write the input with corners drawn on top")
    _add_io(p, output_required=False)
    p.set_defaults(handler=_cmd_harris, threshold=0.01, nms_radius=1)

    p = sub.add_parser("hough-line", help="detect lines in a binary edge map")
    p.add_argument("--theta-bins", type=int, default=180)
    p.add_argument("--rho-step", type=float, default=1.0)
    _add_vote_flags(p)
    p.add_argument("--acc-dump", default=None, metavar="PATH",
                   help="write the vote grid as a grayscale image")
    p.add_argument("--overlay", default=None, metavar="PATH")
    _add_io(p, output_required=False)
    p.set_defaults(handler=_cmd_hough_line)

    p = sub.add_parser("hough-circle", help="detect fixed-radius circles")
    p.add_argument("--radius", type=float, action="append", required=True,
                   help="circle radius in pixels (repeatable)")
    p.add_argument("--theta-steps", type=int, default=360)
    _add_vote_flags(p)
    p.add_argument("--acc-dump", default=None, metavar="PATH")
    p.add_argument("--overlay", default=None, metavar="PATH")
    _add_io(p, output_required=False)
    p.set_defaults(handler=_cmd_hough_circle)

    p = sub.add_parser("ght-build", help="build a shape table from a model image")
    _add_canny_flags(p, mode_flag="--canny-mode")
    p.add_argument("--phi-bins", type=int, default=64)
    p.add_argument("--ref", type=int, nargs=2, default=None, metavar=("X", "Y"),
                   help="reference point (default: edge centroid)")
    _add_io(p, output_help="shape table text path")
    p.set_defaults(handler=_cmd_ght_build)

    p = sub.add_parser("ght-detect", help="locate a shape table in a scene")
    p.add_argument("--rtable", required=True, metavar="PATH",
                   help="shape table from ght-build")
    _add_canny_flags(p, mode_flag="--canny-mode")
    _add_vote_flags(p)
    p.add_argument("--acc-dump", default=None, metavar="PATH")
    p.add_argument("--overlay", default=None, metavar="PATH")
    _add_io(p, output_required=False)
    p.set_defaults(handler=_cmd_ght_detect)

    p = sub.add_parser("pipeline", help="run a JSON-configured stage list")
    p.add_argument("--config", required=True, metavar="PATH")
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except (ImageFormatError, OSError) as exc:
        print(f"edgecraft: I/O error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"edgecraft: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
