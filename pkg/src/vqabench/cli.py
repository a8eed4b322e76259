"""``vqabench`` command line: run a suite, score record files, render a report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    ConfigError,
    SchemaError,
    SuiteConfig,
    fill_baselines,
    load_directory,
    run_suite,
    save_directory,
)
from .report import render_report
from .scoring import DEFAULT_A_STAR, ScoringError, load_scores, score_devices

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2


def _err(msg: str) -> None:
    print(f"vqabench: {msg}", file=sys.stderr)


def cmd_run(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        _err(f"cannot read config: {exc}")
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        _err(f"config is not valid JSON: {exc}")
        return EXIT_ERROR
    try:
        cfg = SuiteConfig.from_dict(raw)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_ERROR
    out = Path(args.output_dir or cfg.output_dir or "")
    if not (args.output_dir or cfg.output_dir):
        _err("config field 'output_dir': required (or pass --output-dir)")
        return EXIT_ERROR
    if not out.is_dir():
        _err(f"output directory {str(out)!r} does not exist")
        return EXIT_ERROR
    records = run_suite(cfg)
    for p in save_directory(records, out, cfg.device):
        print(f"wrote {p}")
    if records.failures:
        _err(f"{len(records.failures)} failure(s):")
        for f in records.failures:
            print(f"  {f}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _table(scores) -> str:
    lines = []
    head = f"{'device':<16}{'problem':<9}{'runtime':>10}{'accuracy':>10}{'scalab.':>10}{'capacity':>10}"
    for dev, s in scores.items():
        lines.append(head)
        for kind, p in s.per_problem.items():
            m = p.mapped
            sc = "-" if m.scalability is None else f"{m.scalability:.3f}"
            lines.append(f"{dev:<16}{kind:<9}{m.runtime:>10.3f}{m.accuracy:>10.3f}{sc:>10}{m.capacity:>10.3f}")
        sub = s.sub
        lines.append(f"{dev:<16}{'combined':<9}{sub.runtime:>10.3f}{sub.accuracy:>10.3f}"
                     f"{sub.scalability:>10.3f}{sub.capacity:>10.3f}")
        lines.append(f"{dev:<16}overall {s.overall:.3f}")
        for kind, p in s.per_problem.items():
            for note in p.notes:
                lines.append(f"  note {kind}: {note}")
        lines.append("")
    return "\n".join(lines)


def dumps_scores(scores) -> str:
    return json.dumps({dev: s.to_json() for dev, s in scores.items()}, indent=2) + "\n"


def cmd_score(args) -> int:
    src = Path(args.records_dir)
    if not src.is_dir():
        _err(f"records directory {str(src)!r} does not exist")
        return EXIT_ERROR
    try:
        devices = load_directory(src)
        if not devices:
            _err(f"no '<device>__<KIND>.json' record files in {str(src)!r}")
            return EXIT_ERROR
        for rs in devices.values():
            fill_baselines(rs)
        scores = score_devices(devices, args.a_star)
    except (SchemaError, ScoringError) as exc:
        _err(str(exc))
        return EXIT_ERROR
    out = Path(args.out) if args.out else src / "scores.json"
    out.write_text(dumps_scores(scores), encoding="utf-8")
    print(_table(scores))
    print(f"wrote {out}")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        data = load_scores(json.loads(Path(args.scores).read_text(encoding="utf-8")))
    except (OSError, json.JSONDecodeError, ScoringError) as exc:
        _err(f"cannot load scores: {exc}")
        return EXIT_ERROR
    out = Path(args.out_dir)
    if not out.is_dir():
        _err(f"output directory {str(out)!r} does not exist")
        return EXIT_ERROR
    for p in render_report(data, out):
        print(f"wrote {p}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vqabench", description="Variational-algorithm benchmark runner and scorer.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a benchmark suite and write record files")
    run.add_argument("config", help="suite config JSON")
    run.add_argument("--output-dir", help="overrides the config's output_dir")
    run.set_defaults(func=cmd_run)

    score = sub.add_parser("score", help="score a directory of record files")
    score.add_argument("records_dir")
    score.add_argument("--a-star", type=float, default=DEFAULT_A_STAR,
                       help="relative-error threshold for capacity (default %(default)s)")
    score.add_argument("--out", help="scores JSON path (default <records_dir>/scores.json)")
    score.set_defaults(func=cmd_score)

    rep = sub.add_parser("report", help="render radar and bar SVGs from a scores file")
    rep.add_argument("scores")
    rep.add_argument("out_dir")
    rep.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "a_star", None) is not None and not 0 < args.a_star < 1:
        _err("--a-star must lie strictly between 0 and 1")
        return EXIT_ERROR
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
