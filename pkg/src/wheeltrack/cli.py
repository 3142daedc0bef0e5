"""Command line entry point: ``wheeltrack {detect,hist,synth,track,run}``.

Exit status: 0 success, 2 detection failure, 3 I/O or parse error,
4 invalid configuration.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from .annotate import annotate
from .errors import ParameterError, WheelTrackError
from .histogram import HistParams, compute_channel_histograms, compute_hue_histogram
from .hough import HoughParams, detect_circles
from .image import Image, Model, Roi, gaussian_blur, load_pnm, rgb_to_hsv, save_pnm, to_grayscale
from .pipeline import (
    PipelineConfig,
    detect_and_seed,
    load_frames,
    run_pipeline,
    track_frames,
    write_frames,
    write_log,
)
from .synth import SynthSpec, synth_sequence

log = logging.getLogger("wheeltrack")

_HOUGH_FLAGS = (
    ("--dp", float, "dp"),
    ("--min-dist", float, "min_dist"),
    ("--canny-high", float, "canny_high"),
    ("--acc-threshold", int, "acc_threshold"),
    ("--min-radius", int, "min_radius"),
    ("--max-radius", int, "max_radius"),
)


def _roi(text):
    try:
        x, y, w, h = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,w,h integers, got {text!r}") from None
    return (x, y, w, h)


def _add_hough_flags(p):
    for flag, typ, dest in _HOUGH_FLAGS:
        p.add_argument(flag, type=typ, dest=dest, default=None)
    p.add_argument("--blur-sigma", type=float, default=None)


def _hough_overrides(args):
    return {dest: getattr(args, dest) for _, _, dest in _HOUGH_FLAGS if getattr(args, dest) is not None}


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: invalid JSON ({exc})") from None


def _load_config(args):
    raw = _load_json(args.config) if args.config else {}
    if not isinstance(raw, dict):
        raise ParameterError("config must be a JSON object")
    raw = dict(raw)
    hough = dict(raw.get("hough", {}))
    hough.update(_hough_overrides(args))
    raw["hough"] = hough
    if args.blur_sigma is not None:
        raw["blur_sigma"] = args.blur_sigma
    seed = raw.pop("seed", None)
    return PipelineConfig.from_dict(raw), seed


def cmd_detect(args):
    image = load_pnm(args.image)
    gray = to_grayscale(image) if image.model is Model.RGB8 else image
    params = HoughParams(**_hough_overrides(args))
    sigma = 1.0 if args.blur_sigma is None else args.blur_sigma
    if sigma < 0:
        raise ParameterError("--blur-sigma must be >= 0")
    if sigma > 0:
        gray = gaussian_blur(gray, sigma)
    hits = detect_circles(gray, params)
    for hit in hits:
        print(f"{hit.cx:g} {hit.cy:g} {hit.radius} {hit.votes}")
    if args.annotate:
        base = image if image.model is Model.RGB8 else _gray_to_rgb(image)
        save_pnm(annotate(base, hits), args.annotate)
    return 0


def _gray_to_rgb(image):
    return Image(Model.RGB8, np.repeat(image.data[..., None], 3, axis=2))


def cmd_hist(args):
    image = load_pnm(args.image)
    if image.model is not Model.RGB8:
        raise ParameterError("hist needs a colour (P6) image")
    roi = Roi(*args.roi) if args.roi else Roi(0, 0, image.width, image.height)
    roi.check_inside(image.width, image.height)
    out = sys.stdout
    if args.mode == "bgr":
        out.write("channel,bin,count\n")
        for ch in compute_channel_histograms(image.crop(roi)):
            for b, c in enumerate(ch.counts):
                out.write(f"{ch.channel},{b},{int(c)}\n")
    else:
        params = HistParams(args.bins, args.smin, args.vmin)
        hsv = rgb_to_hsv(image, roi=roi)
        hist = compute_hue_histogram(hsv, Roi(0, 0, roi.w, roi.h), params.bins, params.smin, params.vmin)
        out.write("bin,weight\n")
        for b, wgt in enumerate(hist.weights):
            out.write(f"{b},{float(wgt)!r}\n")
    return 0


def cmd_synth(args):
    spec = SynthSpec.from_dict(_load_json(args.spec))
    frames, truth = synth_sequence(spec)
    write_frames(frames, args.out_dir)
    with open(os.path.join(args.out_dir, "truth.jsonl"), "w", encoding="utf-8") as fh:
        for rec in truth:
            fh.write(json.dumps(rec) + "\n")
    log.info("wrote %d frames to %s", len(frames), args.out_dir)
    return 0


def cmd_track(args):
    cfg, seed = _load_config(args)
    if args.seed is not None:
        seed = args.seed
    frames = load_frames(args.frame_dir)
    hit = None
    if seed is None:
        hit, roi = detect_and_seed(frames[0], cfg)
    else:
        if len(seed) != 4:
            raise ParameterError("seed must be [x, y, w, h]")
        roi = Roi(*(int(v) for v in seed))
    _, records = track_frames(frames, roi, cfg, hit, args.out_dir)
    if args.log:
        write_log(records, args.log)
    else:
        for rec in records:
            sys.stdout.write(rec.to_json() + "\n")
    return 0


def cmd_run(args):
    cfg, _ = _load_config(args)
    result = run_pipeline(args.frame_dir, cfg, args.out_dir, annotate_frames=args.annotate,
                          log_path=args.log)
    hit = result.hit
    print(f"{hit.cx:g} {hit.cy:g} {hit.radius} {hit.votes}")
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors, not detection failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(4, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="wheeltrack", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="Hough circle detection on one image")
    p.add_argument("image")
    _add_hough_flags(p)
    p.add_argument("--annotate", metavar="OUT.ppm")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("hist", help="channel or hue histogram as CSV")
    p.add_argument("image")
    p.add_argument("--roi", type=_roi, metavar="x,y,w,h")
    p.add_argument("--mode", choices=("bgr", "hue"), default="bgr")
    p.add_argument("--bins", type=int, default=16)
    p.add_argument("--smin", type=float, default=0.125)
    p.add_argument("--vmin", type=float, default=0.125)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("synth", help="render a synthetic wheel sequence")
    p.add_argument("spec")
    p.add_argument("out_dir")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("track", help="CamShift tracking over a frame directory")
    p.add_argument("frame_dir")
    p.add_argument("--config")
    p.add_argument("--seed", type=_roi, metavar="x,y,w,h")
    p.add_argument("--out-dir", help="write annotated frames here")
    p.add_argument("--log", help="JSONL log path (default: standard output)")
    _add_hough_flags(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("run", help="detect the hub on frame 0, then track")
    p.add_argument("frame_dir")
    p.add_argument("--config")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--log", help="JSONL log path (default: OUT_DIR/track.jsonl)")
    p.add_argument("--annotate", action="store_true", help="also write annotated frames")
    _add_hough_flags(p)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except WheelTrackError as exc:
        log.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        log.error("%s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
