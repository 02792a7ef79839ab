"""Command-line front end: ``oped <subcommand> ...``.

Machine-readable reports go to stdout as JSON, human-readable notes to stderr.
Exit codes: 0 success, 2 usage or validation error, 3 I/O error, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import io as oio
from .geometry import Variant, build_geometry
from .grid import ImageGrid
from .metrics import compare, diff_image
from .phantom import project, rasterize, resolve_phantom
from .reconstruct import Kernel, Method, ReconstructionConfig, reconstruct, set_threads

log = logging.getLogger("oped")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _m_list(s: str) -> list[int]:
    try:
        ms = [int(p) for p in s.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m list {s!r}") from None
    if not ms or any(m < 1 for m in ms):
        raise argparse.ArgumentTypeError("m list must hold at least one positive integer")
    return ms


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _write_image_set(img: ImageGrid, out: str, pgm: bool) -> None:
    oio.write_image(img, out)
    if pgm:
        oio.export_pgm(img, f"{out}.pgm")


def cmd_phantom(args) -> int:
    p = resolve_phantom(args.phantom)
    img = rasterize(p, args.size)
    _write_image_set(img, args.out, not args.no_pgm)
    log.info("wrote %dx%d phantom image to %s", args.size, args.size, args.out)
    _emit({"out": args.out, "size": args.size, "min": float(img.values.min()), "max": float(img.values.max())})
    return EXIT_OK


def cmd_project(args) -> int:
    p = resolve_phantom(args.phantom)
    g = build_geometry(args.m, args.variant)
    s = project(p, g)
    oio.write_sinogram(s, args.out)
    if args.csv:
        oio.export_sinogram_csv(s, args.csv)
    peak = float(np.abs(s.data).max())
    bound = 2.0 * p.sup_norm
    log.info("sinogram %d views x %d detectors, max|g| = %.6g (bound %.6g)", *g.shape, peak, bound)
    _emit({"out": args.out, "m": g.m, "variant": int(g.variant), "shape": list(g.shape), "max_abs": peak, "bound": bound})
    return EXIT_OK


def _config(args, m: int) -> ReconstructionConfig:
    cfg = ReconstructionConfig(method=args.method, kernel=getattr(args, "kernel", "coefficient"), roi=args.roi)
    try:
        cfg.resolve_roi(m)
    except ValueError as exc:
        raise UsageError(f"{exc} (the fast method needs roi <= cos(pi/(2m+1)))") from None
    return cfg


def cmd_reconstruct(args) -> int:
    if args.size < 16:
        raise UsageError("--size must be at least 16")
    s = oio.read_sinogram(args.sino)
    cfg = _config(args, s.geometry.m)
    timings: dict = {}
    img = reconstruct(s, args.size, cfg, timings)
    _write_image_set(img, args.out, not args.no_pgm)
    timings.update(method=cfg.method.value, m=s.geometry.m, size=args.size, roi=img.roi)
    with open(f"{args.out}.timing.json", "w") as fh:
        json.dump(timings, fh, indent=2)
    log.info("%s reconstruction took %.3fs", cfg.method.value, timings["seconds_total"])
    _emit(timings)
    return EXIT_OK


def cmd_compare(args) -> int:
    a = oio.read_image(args.a)
    b = oio.read_image(args.b)
    if a.M != b.M:
        raise UsageError(f"image sizes differ: {a.M} vs {b.M}")
    report = compare(a, b, roi_only=args.roi_only)
    if args.diff:
        _write_image_set(diff_image(a, b), args.diff, not args.no_pgm)
    _emit(report.to_dict())
    return EXIT_OK


def _loglog_slope(ms, ts) -> float | None:
    if len(ms) < 2:
        return None
    n = 2.0 * np.asarray(ms, dtype=float) + 1.0
    return float(np.polyfit(np.log(n), np.log(np.asarray(ts)), 1)[0])


def _warm_up() -> None:
    g = build_geometry(2)
    s = project(resolve_phantom("unit-disk"), g)
    for method in Method:
        reconstruct(s, 16, ReconstructionConfig(method=method))


def cmd_bench(args) -> int:
    p = resolve_phantom(args.phantom)
    _warm_up()
    rows = []
    for m in args.m_list:
        s = project(p, build_geometry(m, args.variant))
        t_direct: dict = {}
        t_fast: dict = {}
        reconstruct(s, args.size, ReconstructionConfig(method=Method.DIRECT), t_direct)
        reconstruct(s, args.size, ReconstructionConfig(method=Method.FAST), t_fast)
        td, tf = t_direct["seconds_total"], t_fast["seconds_total"]
        rows.append({"m": m, "t_direct": td, "t_fast": tf, "speedup": td / tf})
        log.info("m=%d direct %.3fs fast %.3fs (x%.1f)", m, td, tf, td / tf)
    ms = [r["m"] for r in rows]
    _emit({
        "size": args.size,
        "phantom": args.phantom,
        "rows": rows,
        "loglog_slope": {
            "direct": _loglog_slope(ms, [r["t_direct"] for r in rows]),
            "fast": _loglog_slope(ms, [r["t_fast"] for r in rows]),
        },
    })
    return EXIT_OK


def convergence_table(phantom, m_list, size, method=Method.FAST, radius=0.8, variant=Variant.TYPE_I):
    """Max-abs reconstruction error on the disk of ``radius`` for each ``m``."""
    truth = rasterize(phantom, size)
    rows = []
    for m in m_list:
        s = project(phantom, build_geometry(m, variant))
        img = reconstruct(s, size, ReconstructionConfig(method=method))
        r = min(radius, img.roi)
        mask = truth.mask & ImageGrid(np.zeros((size, size)), roi=r).mask
        err = float(np.max(np.abs(img.values[mask] - truth.values[mask])))
        rows.append({"m": m, "radius": r, "max_abs": err})
    return rows


def cmd_convergence(args) -> int:
    p = resolve_phantom(args.phantom)
    rows = convergence_table(p, args.m_list, args.size, Method(args.method), args.radius, args.variant)
    errs = [r["max_abs"] for r in rows]
    _emit({
        "phantom": args.phantom,
        "method": args.method,
        "size": args.size,
        "rows": rows,
        "non_increasing": all(b <= a for a, b in zip(errs, errs[1:])),
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oped", description="OPED reconstruction from parallel-beam Radon data.")
    ap.add_argument("--threads", type=_positive_int, default=None,
                    help="worker threads (default: $OPED_THREADS or all cores)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_variant(p):
        p.add_argument("--variant", type=int, choices=(1, 2), default=1)

    p = sub.add_parser("phantom", help="rasterize a phantom")
    p.add_argument("--size", type=_positive_int, required=True)
    p.add_argument("--phantom", default="shepp-logan", help="shepp-logan, unit-disk, smooth, or a JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--no-pgm", action="store_true")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("project", help="simulate a sinogram")
    p.add_argument("--m", type=_positive_int, required=True)
    add_variant(p)
    p.add_argument("--phantom", default="shepp-logan")
    p.add_argument("--out", required=True)
    p.add_argument("--csv", help="also dump the sinogram as CSV")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("reconstruct", help="reconstruct an image from a sinogram file")
    p.add_argument("--sino", required=True)
    p.add_argument("--method", choices=[m.value for m in Method], default="fast")
    p.add_argument("--kernel", choices=[k.value for k in Kernel], default="coefficient")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--roi", type=float, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--no-pgm", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("compare", help="error metrics between two raw images")
    p.add_argument("--a", required=True, help="reference image")
    p.add_argument("--b", required=True, help="reconstructed image")
    p.add_argument("--diff", help="write a - b to this path")
    p.add_argument("--roi-only", action="store_true")
    p.add_argument("--no-pgm", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="time direct vs fast reconstruction")
    p.add_argument("--m-list", type=_m_list, required=True)
    p.add_argument("--size", type=_positive_int, required=True)
    p.add_argument("--phantom", default="shepp-logan")
    add_variant(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convergence", help="max-abs error against the phantom for several m")
    p.add_argument("--phantom", default="smooth")
    p.add_argument("--m-list", type=_m_list, required=True)
    p.add_argument("--size", type=_positive_int, required=True)
    p.add_argument("--method", choices=[m.value for m in Method], default="fast")
    p.add_argument("--radius", type=float, default=0.8)
    add_variant(p)
    p.set_defaults(func=cmd_convergence)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    threads = args.threads
    if threads is None and os.environ.get("OPED_THREADS"):
        try:
            threads = int(os.environ["OPED_THREADS"])
        except ValueError:
            print("oped: error: OPED_THREADS must be an integer", file=sys.stderr)
            return EXIT_USAGE
    set_threads(threads)
    try:
        return args.func(args)
    except (oio.OpedFileError, OSError) as exc:
        print(f"oped: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FloatingPointError as exc:
        print(f"oped: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"oped: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
