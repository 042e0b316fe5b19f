"""Command-line front end.

    khlee {smoothings|generators|verify|homology|random} --input FILE
          [--theory lee|khovanov] [--format json|text] [--seed N]

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .diagram import PDError, TangleDiagram, parse_pd
from .generate import random_closed, random_tangle
from .lee_engine import LeeGenerator, enumerated_generators, lee_generators, verify
from .oracle import rank_table

log = logging.getLogger("khlee")

COMMANDS = ("smoothings", "generators", "verify", "homology", "random")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    theory: str = "lee"
    format: str = "json"
    seed: int = 0
    count: int = 20
    verbose: int = 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="khlee", description="Lee homology generators of tangle diagrams")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", type=Path, help="PD file")
    p.add_argument("--theory", choices=("lee", "khovanov"), default="lee")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20, help="diagrams to draw (random)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _load(cfg: RunConfig) -> TangleDiagram:
    if cfg.input is None:
        raise InputError("--input is required")
    try:
        text = cfg.input.read_text()
    except OSError as e:
        raise InputError(f"cannot read {cfg.input}: {e.strerror}") from e
    try:
        return parse_pd(text)
    except PDError as e:
        raise InputError(f"{cfg.input}: {e}") from e


def _require_lee(cfg: RunConfig):
    if cfg.theory != "lee":
        raise InputError(f"'{cfg.command}' is only defined for the lee theory")


def _generator_lines(gens: list[LeeGenerator]) -> list[str]:
    return [
        f"h={g.height:+d}  choices={''.join(map(str, g.coloured.smoothing.bits))}  colours={''.join(g.coloured.colours)}"
        for g in gens
    ]


def cmd_smoothings(cfg: RunConfig):
    _require_lee(cfg)
    gens = enumerated_generators(_load(cfg))
    return [g.to_json() for g in gens], _generator_lines(gens), 0


def cmd_generators(cfg: RunConfig):
    _require_lee(cfg)
    gens = lee_generators(_load(cfg))
    return [g.to_json() for g in gens], _generator_lines(gens), 0


def cmd_verify(cfg: RunConfig):
    _require_lee(cfg)
    report = verify(_load(cfg))
    log.info("timing: %s", {k: round(v, 4) for k, v in report.timing.items()})
    lines = [f"c = {report.c}, generators = {len(report.pipeline)}, heights = {report.heights()}"]
    if report.oracle_ranks is not None:
        lines.append(f"oracle ranks = {dict(sorted(report.oracle_ranks.items()))}")
    lines += [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in report.checks.items()]
    lines.append("PASS" if report.passed else "FAIL")
    return report.to_json(), lines, 0 if report.passed else 1


def cmd_homology(cfg: RunConfig):
    d = _load(cfg)
    if d.boundary:
        raise InputError("oracle requires closed diagram")
    table = rank_table(d, 1 if cfg.theory == "lee" else 0)
    lines = [f"H^{h} : rank {r}" for h, r in table["ranks"].items()] + [f"total : {table['total']}"]
    return table, lines, 0


def cmd_random(cfg: RunConfig):
    _require_lee(cfg)
    rng = random.Random(cfg.seed)
    rows, lines, ok = [], [], True
    for i in range(cfg.count):
        d = random_closed(rng) if i % 2 == 0 else random_tangle(rng)
        report = verify(d)
        ok &= report.passed
        rows.append({"pd": d.to_pd(), "c": d.c, "passed": report.passed})
        heights = Counter(g.height for g in report.pipeline)
        lines.append(f"{'pass' if report.passed else 'FAIL'}  n={d.n} c={d.c} heights={dict(sorted(heights.items()))}")
    return {"seed": cfg.seed, "diagrams": rows, "passed": ok}, lines, 0 if ok else 1


HANDLERS = {
    "smoothings": cmd_smoothings,
    "generators": cmd_generators,
    "verify": cmd_verify,
    "homology": cmd_homology,
    "random": cmd_random,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    cfg = RunConfig(args.command, args.input, args.theory, args.format, args.seed, args.count, args.verbose)
    logging.basicConfig(level=logging.WARNING - 10 * cfg.verbose, format="%(name)s: %(message)s")
    try:
        payload, lines, status = HANDLERS[cfg.command](cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return status


if __name__ == "__main__":
    sys.exit(main())
