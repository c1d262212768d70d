"""Command-line interface: ``ectkit <command> [options]``.

Exit status is 0 on success, 1 on bad input or usage, 2 when ``verify``
finds a failing audit.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .curves import CurveError
from .fileio import (ParseError, fmt_rational, parse_image, parse_mesh, read_curves,
                     render_svg, write_curves)
from .geometry import CellConstFunction, GeometryError, sample_directions, to_rational
from .homology import betti_curve, triangulate_cubical
from .transforms import (TransformBundle, invert_bundle, smooth_bundle, transform_bundle)

MESH_FORMATS = ("off", "obj")
IMAGE_FORMATS = ("pgm", "pgm_p2", "pgm_p5", "csv")
COMMANDS = ("ect", "sect", "lect", "select", "ert", "sert", "invert", "betti", "verify", "plot")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    input_format: str | None = None
    directions: str = "axes"
    count: int | None = None
    level: str | None = None
    k: int = 0
    window: str | None = None
    denom_bound: int | None = None
    convention: str = "upper"
    out: str = "."
    formats: list = field(default_factory=lambda: ["json"])
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        if self.denom_bound is not None and self.denom_bound < 1:
            raise UsageError("--denom-bound must be positive")
        if self.count is not None and self.count < 1:
            raise UsageError("--count must be positive")
        if self.convention not in ("upper", "lower"):
            raise UsageError("--convention must be upper or lower")
        if self.window is not None and to_rational(self.window) <= 0:
            raise UsageError("--window must be positive")
        if self.command in ("lect", "select") and self.level is None:
            raise UsageError(f"{self.command} needs --level")
        if self.level is not None:
            to_rational(self.level)
        bad = set(self.formats) - {"json", "csv"}
        if bad:
            raise UsageError(f"unknown output format(s): {', '.join(sorted(bad))}")
        if self.input_format is not None and self.input_format not in MESH_FORMATS + IMAGE_FORMATS + ("json",):
            raise UsageError(f"unknown input format {self.input_format!r}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def _input_kind(cfg: RunConfig) -> str:
    fmt = cfg.input_format or Path(cfg.input).suffix.lstrip(".").lower()
    if fmt in MESH_FORMATS:
        return "mesh"
    if fmt in IMAGE_FORMATS:
        return "image"
    if fmt == "json":
        return "curves"
    raise UsageError(f"cannot tell the format of {cfg.input!r}; pass --format")


def _load(cfg: RunConfig):
    """Return ``(complex, g)``; ``g`` is None for meshes."""
    if not Path(cfg.input).is_file():
        raise ParseError(cfg.input, None, "no such file")
    kind = _input_kind(cfg)
    if kind == "mesh":
        return parse_mesh(cfg.input, cfg.input_format, cfg.denom_bound), None
    if kind == "image":
        fmt = cfg.input_format or ("csv" if cfg.input.lower().endswith(".csv") else "pgm")
        return parse_image(cfg.input, fmt, cfg.convention, cfg.denom_bound)
    raise UsageError(f"{cfg.command} expects a mesh or image, got curve file {cfg.input!r}")


def _directions(cfg: RunConfig, n: int) -> list:
    spec = cfg.directions
    if spec in ("axes", "rational_grid", "grid"):
        scheme = "axes" if spec == "axes" else "rational_grid"
        count = cfg.count or (2 * n if scheme == "axes" else 8)
        return sample_directions(count, n, scheme)
    try:
        explicit = [tuple(to_rational(c) for c in item.split(",")) for item in spec.split(";") if item.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --directions value {spec!r}") from None
    return sample_directions(len(explicit), n, "explicit", explicit=explicit)


def _metadata(cfg: RunConfig) -> dict:
    meta = {"source": Path(cfg.input).name if cfg.input else "",
            "denom_bound": "none" if cfg.denom_bound is None else str(cfg.denom_bound)}
    if cfg.input and _input_kind(cfg) == "image":
        meta["convention"] = cfg.convention
    return meta


def _window(cfg: RunConfig):
    return None if cfg.window is None else to_rational(cfg.window)


def _emit(bundle: TransformBundle, cfg: RunConfig, stem: str | None = None) -> list:
    paths = write_curves(bundle, cfg.out, cfg.formats, stem)
    Path(cfg.out, "run_config.json").write_text(cfg.to_json())
    for p in paths:
        print(p)
    return paths


def _step_bundle(cfg: RunConfig, kind: str) -> TransformBundle:
    complex, g = _load(cfg)
    dirs = _directions(cfg, complex.ambient_dim)
    params = {"s": to_rational(cfg.level)} if kind in ("lect", "select") else None
    if g is None:
        target = complex if kind == "ect" else CellConstFunction.indicator(complex)
    else:
        target = g
        if kind == "ect" and not g.is_integer_valued:
            raise UsageError("ect needs an integer-valued image; use ert for rational values")
    return transform_bundle(kind, target, dirs, workers=cfg.workers, params=params,
                            metadata=_metadata(cfg))


def cmd_step(cfg: RunConfig) -> int:
    _emit(_step_bundle(cfg, cfg.command), cfg)
    return 0


def cmd_smooth(cfg: RunConfig) -> int:
    base = "ect" if cfg.command == "sect" else "ert"
    if _input_kind(cfg) == "curves":
        bundle = read_curves(cfg.input)
        if bundle.kind != base:
            raise UsageError(f"{cfg.command} expects {base} curves, got {bundle.kind}")
    else:
        bundle = _step_bundle(cfg, base)
    _emit(smooth_bundle(bundle, _window(cfg)), cfg)
    return 0


def cmd_invert(cfg: RunConfig) -> int:
    bundle = read_curves(cfg.input)
    if bundle.kind not in ("sect", "sert"):
        raise UsageError(f"invert expects sect or sert curves, got {bundle.kind}")
    _emit(invert_bundle(bundle), cfg)
    return 0


def cmd_betti(cfg: RunConfig) -> int:
    complex, g = _load(cfg)
    if g is not None:
        complex = triangulate_cubical(complex)
    dirs = _directions(cfg, complex.ambient_dim)
    curves = [betti_curve(complex, v, cfg.k) for v in dirs]
    bundle = TransformBundle(f"betti{cfg.k}", dirs, curves, dict(_metadata(cfg), transform=f"betti{cfg.k}"))
    _emit(bundle, cfg)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from .battery import report_json, report_text, run_battery

    result = run_battery(seed=cfg.seed, workers=cfg.workers)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "verify_report.json").write_text(report_json(result))
    text = report_text(result)
    (out / "verify_report.txt").write_text(text)
    print(text.splitlines()[-1])
    print(out / "verify_report.json")
    return 0 if result["summary"]["passed"] else 2


def cmd_plot(cfg: RunConfig) -> int:
    bundle = read_curves(cfg.input)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, (v, c) in enumerate(zip(bundle.directions, bundle.curves)):
        title = f"{bundle.kind} v=({', '.join(fmt_rational(x) for x in v)})"
        print(render_svg(c, out / f"{bundle.kind}_{i:03d}.svg", title=title))
    return 0


HANDLERS = {
    "ect": cmd_step, "lect": cmd_step, "select": cmd_step, "ert": cmd_step,
    "sect": cmd_smooth, "sert": cmd_smooth, "invert": cmd_invert,
    "betti": cmd_betti, "verify": cmd_verify, "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--window", help="smoothing window W (rational)")
    common.add_argument("--convention", choices=("upper", "lower"), default="upper",
                        help="value of lower-dimensional image cells")
    common.add_argument("--denom-bound", type=int, dest="denom_bound",
                        help="quantise input numbers to this denominator bound")
    common.add_argument("--directions", default="axes",
                        help="axes, rational_grid, or an explicit list like '1,0;0,1'")
    common.add_argument("--count", type=int, help="number of sampled directions")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--formats", default="json", help="comma-separated: json,csv")
    common.add_argument("--format", dest="input_format", help="input format override")

    parser = _Parser(prog="ectkit", description="Exact Euler characteristic transforms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("ect", "sect", "lect", "select", "ert", "sert", "invert", "betti", "plot"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input")
        if name in ("lect", "select"):
            p.add_argument("--level", required=True, help="level s (rational)")
        if name == "betti":
            p.add_argument("--k", type=int, default=0)
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--fixtures", choices=("builtin",), default="builtin")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        input=getattr(ns, "input", None),
        input_format=ns.input_format,
        directions=ns.directions,
        count=ns.count,
        level=getattr(ns, "level", None),
        k=getattr(ns, "k", 0),
        window=ns.window,
        denom_bound=ns.denom_bound,
        convention=ns.convention,
        out=ns.out,
        formats=[f.strip() for f in ns.formats.split(",") if f.strip()],
        workers=ns.workers,
        seed=ns.seed,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        cfg = config_from_args(ns)
        return HANDLERS[cfg.command](cfg)
    except (UsageError, ParseError, GeometryError, CurveError, ValueError, KeyError, OSError) as exc:
        print(f"ectkit {ns.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
