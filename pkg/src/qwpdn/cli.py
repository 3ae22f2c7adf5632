"""Command-line interface: single restorations and table benchmarks.

Environment: QWP_THREADS bounds kernel parallelism; QWP_NO_NUMBA=1 selects
the pure-numpy kernel path.
"""

from __future__ import annotations

import argparse
import json
import sys

from .denoiser import DenoiseParams
from .runner import METHODS, RunConfig, run_single, run_table
from .wnnm import WnnmParams


def _int_list(text: str) -> list:
    return [int(p) for p in text.split(",") if p.strip()]


def _float_list(text: str) -> list:
    return [float(p) for p in text.split(",") if p.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwpdn",
        description="Directional wavelet-packet and patch-stack image denoising")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("denoise", help="restore one noisy image")
    d.add_argument("--input", required=True, help="clean source image (PGM or PNG)")
    d.add_argument("--method", required=True, choices=METHODS)
    d.add_argument("--sigma", type=float, required=True, help="noise STD in gray levels")
    d.add_argument("--seed", type=int, default=0, help="64-bit noise seed")
    d.add_argument("--levels", type=_int_list, default=None,
                   help="restoration levels, e.g. 2,3,4 (default tracks sigma)")
    d.add_argument("--spline-order", type=int, default=None)
    d.add_argument("--win", type=_int_list, default=None,
                   help="variance window per level (single value or one per level)")
    d.add_argument("--alphas", type=_float_list, default=None,
                   help="averaging weight per level (single value or one per level)")
    d.add_argument("--margin", type=int, default=None,
                   help="mirror-extension margin; default side/4")
    d.add_argument("--iters", type=int, default=3, choices=range(1, 7),
                   help="cross-boosting iterations")
    d.add_argument("--variant", default=None,
                   choices=["cbwnnm", "cbqwp", "hybrid", "auto"],
                   help="reported cross-boost estimate; auto picks by image class")
    d.add_argument("--wnnm-patch", type=int, default=None)
    d.add_argument("--wnnm-window", type=int, default=None)
    d.add_argument("--wnnm-patches", type=int, default=None)
    d.add_argument("--wnnm-step", type=int, default=None)
    d.add_argument("--wnnm-iters", type=int, default=None)
    d.add_argument("--out-image", default=None)
    d.add_argument("--out-report", default=None)

    b = sub.add_parser("bench", help="run the benchmark table against golden values")
    b.add_argument("--images", required=True, help="directory with the test images")
    b.add_argument("--sigmas", type=_float_list, default=[5, 10, 25, 40, 50, 80, 100])
    b.add_argument("--methods", type=lambda s: s.split(","),
                   default=["qwpdn", "wnnm", "cbwnnm", "cbqwp", "hybrid"])
    b.add_argument("--seeds", type=_int_list, default=[0, 1, 2])
    b.add_argument("--iters", type=int, default=3)
    b.add_argument("--out", required=True, help="benchmark report JSON path")
    b.add_argument("--plot", default=None, help="optional PSNR/SSIM chart (PNG)")
    return parser


def _denoise_params(args):
    """None when every knob is untouched, so sigma picks the defaults."""
    touched = [args.levels, args.spline_order, args.win, args.alphas, args.margin]
    if all(v is None for v in touched):
        return None
    from qwpdn.runner import default_denoise_params

    base = default_denoise_params(args.sigma)
    levels = args.levels or list(base.levels)
    wins = args.win or [base.window(m) for m in levels]
    alphas = args.alphas or [base.weight(m) for m in levels]
    if len(wins) == 1:
        wins = wins * len(levels)
    if len(alphas) == 1:
        alphas = alphas * len(levels)
    if len(wins) != len(levels) or len(alphas) != len(levels):
        raise SystemExit("--win and --alphas need one value, or one per level")
    return DenoiseParams(
        order=args.spline_order if args.spline_order is not None else base.order,
        levels=tuple(levels),
        window_sizes=dict(zip(levels, wins)),
        weights=dict(zip(levels, alphas)),
        margin=args.margin,
    )


def _wnnm_params(args) -> WnnmParams | None:
    overrides = {
        "patch_side": args.wnnm_patch,
        "search_window": args.wnnm_window,
        "num_patches": args.wnnm_patches,
        "step": args.wnnm_step,
        "iterations": args.wnnm_iters,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if not overrides:
        return None
    return WnnmParams.for_sigma(args.sigma, **overrides)


def _plot_bench(report: dict, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for metric, ax in zip(("psnr_db", "ssim"), axes):
        for method in report["methods"]:
            pts = [(e["sigma"], e[metric]) for e in report["averaged"]
                   if e["method"] == method]
            if pts:
                xs, ys = zip(*sorted(pts))
                ax.plot(xs, ys, marker="o", label=method)
        ax.set_xscale("log")
        ax.set_xlabel("noise STD")
        ax.set_ylabel(metric)
        ax.grid(True, alpha=0.3)
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "denoise":
        cfg = RunConfig(
            input=args.input,
            method=args.method,
            sigma=args.sigma,
            seed=args.seed,
            out_image=args.out_image,
            out_report=args.out_report,
            variant=args.variant,
            boost_iterations=args.iters,
            denoise_params=_denoise_params(args),
            wnnm_params=_wnnm_params(args),
        )
        try:
            report = run_single(cfg)
        except (FileNotFoundError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(json.dumps(report["metrics"], indent=2))
        return 0

    report = run_table(args.images, args.sigmas, args.methods,
                       seeds=args.seeds, boost_iterations=args.iters)
    from .report import dump_report

    dump_report(report, args.out)
    if args.plot:
        _plot_bench(report, args.plot)
    if report["images_missing"]:
        print("missing images:", ", ".join(report["images_missing"]), file=sys.stderr)
    print(f"wrote {args.out} ({len(report['cells'])} cells)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
