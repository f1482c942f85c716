"""Command-line entry point: extract, query, evaluate, curves, serve.

Exit codes: 0 success, 1 usage error, 2 runtime error. Results go to stdout,
logs to stderr; the THIR_LOG env var (error/warn/info/debug) sets verbosity.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .betti import BettiCurveSpec, channel_curves
from .errors import ThirError
from .evaluation import EvalReport, SplitSpec, evaluate, render_report, split_records
from .index import build_index, load_index, save_index, stats
from .ingest import load_image, scan_dataset
from .search import query_response

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

_RANGE_FLAGS = {"per-image": "per-image", "full": "full"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract wants 1 for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thir", description="Topological image retrieval engine.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="fingerprint a dataset directory into an index file")
    p.add_argument("--data", required=True, help="dataset root directory")
    p.add_argument("--manifest", help="CSV with columns path,label,magnification")
    p.add_argument("--out", required=True, help="output .thir index path")
    p.add_argument("--resolution", type=int, default=200, help="Betti curve samples per channel")
    p.add_argument("--width", type=int, default=240)
    p.add_argument("--height", type=int, default=240)
    p.add_argument("--range", choices=sorted(_RANGE_FLAGS), default="per-image", dest="range_policy")
    p.add_argument("--jobs", type=int, default=1, help="extraction worker threads")
    p.add_argument("--lenient", action="store_true", help="skip unreadable files instead of failing")

    p = sub.add_parser("query", help="retrieve the top-K entries most similar to an image")
    p.add_argument("--index", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--normalize", action="store_true", help="unit-normalize descriptors first")

    p = sub.add_parser("evaluate", help="split a dataset and score top-K retrieval per magnification")
    p.add_argument("--data", required=True)
    p.add_argument("--manifest")
    p.add_argument("--k", default="3,5", help="comma-separated K values")
    p.add_argument("--split", type=float, default=0.8, help="train fraction")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--magnification", choices=["40", "100", "200", "400", "all"], default="all")
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--report", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["csv", "markdown", "json"], default="csv")

    p = sub.add_parser("curves", help="dump an image's Betti curves (and diagrams) as CSV")
    p.add_argument("--image", required=True)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--out", help="curves CSV path (default: stdout)")
    p.add_argument("--diagram", help="also dump raw persistence pairs to this CSV")

    p = sub.add_parser("serve", help="serve the query API and console over HTTP")
    p.add_argument("--index", required=True)
    p.add_argument("--data-root", required=True, dest="data_root")
    p.add_argument("--addr", default="127.0.0.1:8080")

    return parser


def _cmd_extract(args) -> int:
    records = scan_dataset(args.data, manifest=args.manifest)
    spec = BettiCurveSpec(resolution=args.resolution, range_policy=_RANGE_FLAGS[args.range_policy])
    index = build_index(
        records,
        spec,
        resize_dims=(args.width, args.height),
        workers=args.jobs,
        lenient=args.lenient,
    )
    save_index(index, args.out)
    print(f"wrote {len(index)} entries to {args.out}")
    return 0


def _cmd_query(args) -> int:
    index = load_index(args.index)
    img = load_image(args.image)
    response = query_response(index, img, args.k, normalize=args.normalize)
    if args.format == "json":
        print(json.dumps(response, indent=2))
        return 0
    print(f"{'rank':>4}  {'id':>6}  {'label':<10} {'mag':>4}  {'distance':>14}  path")
    for rank, res in enumerate(response["results"], start=1):
        print(
            f"{rank:>4}  {res['id']:>6}  {res['label']:<10} {res['magnification']:>4}  "
            f"{res['distance']:>14.6f}  {_entry_path(index, res['id'])}"
        )
    return 0


def _entry_path(index, entry_id: int) -> str:
    return index.records[entry_id].path


def _cmd_evaluate(args) -> int:
    try:
        ks = [int(tok) for tok in args.k.split(",") if tok.strip()]
    except ValueError:
        raise ThirError(f"--k must be comma-separated integers, got {args.k!r}")
    records = scan_dataset(args.data, manifest=args.manifest)
    spec = BettiCurveSpec(resolution=args.resolution)
    split_spec = SplitSpec(train_fraction=args.split, seed=args.seed)

    if args.magnification == "all":
        mags = sorted({rec.magnification for rec in records})
    else:
        mags = [int(args.magnification)]

    rows = []
    for mag in mags:
        group = [rec for rec in records if rec.magnification == mag]
        if not group:
            raise ThirError(f"no records at magnification {mag}")
        train, test = split_records(group, split_spec)
        logging.getLogger(__name__).info(
            "magnification %s: %d train / %d test", mag, len(train), len(test)
        )
        index = build_index(train, spec, resize_dims=(240, 240))
        rows.extend(evaluate(index, test, ks, magnification=mag))

    report = EvalReport(
        rows=rows,
        metadata={
            "train_fraction": args.split,
            "seed": args.seed,
            "positive_class": "malignant",
            "resolution": args.resolution,
            "range_policy": "per-image",
            "resize": [240, 240],
            "resize_filter": "bilinear-half-pixel",
        },
    )
    text = render_report(report, args.format)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
        print(f"wrote report to {args.report}")
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    return 0


def _cmd_curves(args) -> int:
    from .cubical import build_filtration, compute_persistence
    from .ingest import split_channels

    img = load_image(args.image)
    spec = BettiCurveSpec(resolution=args.resolution)
    curves = channel_curves(img, spec)

    lines = ["channel,sample_index,filtration_value,count"]
    for name, curve in zip("rgb", curves):
        for j, (x, c) in enumerate(zip(curve.samples, curve.counts)):
            lines.append(f"{name},{j},{float(x)!r},{int(c)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote curves to {args.out}")
    else:
        print(text, end="")

    if args.diagram:
        dlines = ["channel,dim,birth,death"]
        for name, ch in zip("rgb", split_channels(img)):
            diagram = compute_persistence(build_filtration(ch))
            for dim, birth, death in diagram.pairs:
                dlines.append(f"{name},{int(dim)},{float(birth)!r},{'inf' if death == float('inf') else repr(float(death))}")
        Path(args.diagram).write_text("\n".join(dlines) + "\n", encoding="utf-8")
        print(f"wrote diagrams to {args.diagram}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, default_console_dir

    index = load_index(args.index)
    host, _, port = args.addr.rpartition(":")
    if not host or not port.isdigit():
        raise ThirError(f"--addr must look like HOST:PORT, got {args.addr!r}")
    app = create_app(index, data_root=args.data_root, console_dir=default_console_dir())
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return 0


_COMMANDS = {
    "extract": _cmd_extract,
    "query": _cmd_query,
    "evaluate": _cmd_evaluate,
    "curves": _cmd_curves,
    "serve": _cmd_serve,
}


def _configure_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("THIR_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ThirError, OSError, ValueError) as exc:
        print(f"thir {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
