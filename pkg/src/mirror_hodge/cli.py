"""Command-line entry point: ``mirror-hodge <subcommand> ...``.

Exit codes: 0 success, 1 verification mismatch or failed audit,
2 parameter error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from pathlib import Path

from . import report as rp
from .algebra import format_text
from .errors import InvariantViolation, MirrorError, OpenConjectureError, ParameterError
from .pgl import DegenerateGenusWarning, pgl_variant_closed, pgl_variant_raw
from .sl import sl_variant_enum, sl_variant_filter
from .torsion import DEFAULT_CAP

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_MISMATCH, EXIT_PARAM, EXIT_INTERNAL = 0, 1, 2, 3


_RANGE = re.compile(r"^\s*(-?\d+)\s*(?:-|\.\.)\s*(-?\d+)\s*$")


def int_range(text: str) -> list[int]:
    """Parse '5', '2-6' or '2..6' (inclusive)."""
    m = _RANGE.match(text)
    if m:
        return list(range(int(m.group(1)), int(m.group(2)) + 1))
    try:
        return [int(text)]
    except ValueError:
        raise ParameterError(f"not an integer or range: {text!r}") from None


def int_list(values) -> list[int]:
    if isinstance(values, (int, str)):
        values = [values]
    out: list[int] = []
    for v in values:
        if isinstance(v, int):
            out.append(v)
            continue
        for part in str(v).split(","):
            if part.strip():
                out.extend(int_range(part))
    return out


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    return cfg.get("sweep", cfg)


def _write(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _dump(obj, fmt: str, text: str) -> bytes:
    if fmt == "json":
        return (json.dumps(obj, indent=2) + "\n").encode("ascii")
    return text.encode("ascii")


def _common(p: argparse.ArgumentParser, degree: str | None = None) -> None:
    p.add_argument("-r", "--rank", type=int, required=True)
    p.add_argument("-g", "--genus", type=int, required=True)
    if degree in ("d", "both"):
        p.add_argument("--deg-d", type=int, default=1)
    if degree in ("e", "both"):
        p.add_argument("--deg-e", type=int, default=1)


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None, help="write to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirror-hodge",
        description="Exact variant stringy E-polynomials of SL_r / PGL_r Higgs moduli and their mirror check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run all four paths for one (r, d, e, g)")
    _common(p, "both")
    _output(p)
    p.add_argument("--timing", action="store_true", help="include per-stage wall time")

    p = sub.add_parser("sweep", help="mirror check over parameter ranges")
    p.add_argument("-r", "--rank", nargs="+", default=None)
    p.add_argument("-g", "--genus", nargs="+", default=None, help="values or ranges like 2-5")
    p.add_argument("--deg-d", nargs="+", default=None, help="default: every residue 1..r-1")
    p.add_argument("--deg-e", nargs="+", default=None, help="default: every residue 1..r-1")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (env MIRROR_HODGE_JOBS)")
    p.add_argument("--config", default=None, help="TOML file with ranks/genera/deg_d/deg_e/jobs")
    p.add_argument("--timing", action="store_true")
    _output(p)

    p = sub.add_parser("variant-sl", help="SL_r variant polynomial")
    _common(p, "d")
    p.add_argument("--path", choices=["enum", "filter", "closed", "raw", "all"], default="all")
    _output(p)

    p = sub.add_parser("variant-pgl", help="PGL_r twisted-sector polynomial")
    _common(p, "e")
    p.add_argument("--path", choices=["enum", "filter", "closed", "raw", "all"], default="all")
    _output(p)

    p = sub.add_parser("stability-audit", help="check stability of every admissible m-tuple")
    _common(p, "d")
    _output(p)

    p = sub.add_parser("torsion-audit", help="pairing equidistribution and character-average agreement")
    _common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _output(p)
    return parser


def _variant(args, side: str) -> int:
    if side == "sl":
        paths = {"enum": sl_variant_enum, "filter": sl_variant_filter}
        deg = args.deg_d
    else:
        paths = {"closed": pgl_variant_closed, "raw": pgl_variant_raw}
        deg = args.deg_e
    if args.path == "all":
        chosen = list(paths)
    elif args.path in paths:
        chosen = [args.path]
    else:
        raise ParameterError(f"--path {args.path} is not available for variant-{side} (choose from {sorted(paths)} or all)")
    polys = {name: paths[name](args.rank, args.genus, deg) for name in chosen}
    agree = len(set(polys.values())) == 1
    key = "d" if side == "sl" else "e"
    obj = {
        "params": {"r": args.rank, key: deg, "g": args.genus},
        "polynomials": {k: rp.poly_to_json(v) for k, v in polys.items()},
        "agree": agree,
    }
    text = "".join(f"{k}: {format_text(v)}\n" for k, v in polys.items())
    if len(polys) > 1:
        text += f"paths agree: {agree}\n"
    _write(_dump(obj, args.format, text), args.out)
    return EXIT_OK if agree else EXIT_MISMATCH


def _sweep(args) -> int:
    cfg = load_config(args.config)
    ranks = int_list(args.rank) if args.rank else int_list(cfg.get("ranks", []))
    genera = int_list(args.genus) if args.genus else int_list(cfg.get("genera", []))
    d_list = int_list(args.deg_d) if args.deg_d else (int_list(cfg["deg_d"]) if "deg_d" in cfg else None)
    e_list = int_list(args.deg_e) if args.deg_e else (int_list(cfg["deg_e"]) if "deg_e" in cfg else None)
    # precedence: --jobs, then MIRROR_HODGE_JOBS, then config, then 1
    jobs = args.jobs
    if jobs is None and not os.environ.get("MIRROR_HODGE_JOBS"):
        jobs = cfg.get("jobs")
    result = rp.sweep(ranks, genera, d_list, e_list, parallelism=jobs)
    data = _dump(result.to_json(args.timing), args.format, result.to_text(args.timing))
    _write(data, args.out)
    return result.exit_code


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    warnings.simplefilter("ignore", DegenerateGenusWarning)
    if args.command == "check":
        rep = rp.mirror_check(args.rank, args.deg_d, args.deg_e, args.genus)
        _write(rp.emit(rep, args.format, args.timing), args.out)
        return EXIT_OK if rep.ok else EXIT_MISMATCH
    if args.command == "sweep":
        return _sweep(args)
    if args.command == "variant-sl":
        return _variant(args, "sl")
    if args.command == "variant-pgl":
        return _variant(args, "pgl")
    if args.command == "stability-audit":
        audit = rp.stability_audit(args.rank, args.genus, args.deg_d)
        _write(_dump(audit.to_json(), args.format, audit.to_text()), args.out)
        return EXIT_OK if audit.ok else EXIT_MISMATCH
    if args.command == "torsion-audit":
        audit = rp.torsion_audit(args.rank, args.genus, args.cap)
        _write(_dump(audit.to_json(), args.format, audit.to_text()), args.out)
        return EXIT_OK if audit.ok else EXIT_MISMATCH
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except (ParameterError, OpenConjectureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except InvariantViolation as exc:
        print(f"internal invariant violated (bug): {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except MirrorError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
