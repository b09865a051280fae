#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Pary MD command-line front end.

Commands:
    table   triangular table of y, f or t over a range of n
    verify  brute-force enumeration against the formulas
    sample  uniform sampling against the exact MD-size distribution
    count   one exact value
    encode  parse a canonical tree and show its MD subtree and decomposition
    schema  JSON schema of the json payloads

Exit codes: 0 success, 1 verification mismatch, 2 invalid configuration,
3 enumeration budget exceeded.
"""

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from pary_md import __version__
from pary_md.count import ROWS, count, count_f, count_t, count_y
from pary_md.enumeration import (
    BUDGET_ENV_VAR,
    EnumerationBudget,
    forest_histogram,
    md_histogram,
    y_histogram,
)
from pary_md.errors import BudgetExceeded, ParyMdError
from pary_md.sample import sample_md_distribution
from pary_md.tree_model import canonical_decode, canonical_encode, decompose, md_size, md_subtree

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

ROW_SUM_HEADER = "n!C_n"

Family = Literal["y", "f", "t"]
OutputFormat = Literal["text", "csv", "json"]


class RunConfig(BaseModel):
    """Validated settings for one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: Literal["table", "verify", "sample", "count", "encode", "schema"]
    p: Optional[int] = Field(default=2, ge=2)
    n_min: Optional[int] = Field(default=None, ge=0)
    n_max: Optional[int] = Field(default=None, ge=0)
    k: Optional[int] = None
    family: Optional[Family] = None
    format: OutputFormat = "text"
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    trials: int = Field(default=10_000, ge=1)
    budget: Optional[int] = Field(default=None, ge=1)
    workers: int = Field(default=1, ge=1)
    output: Optional[Path] = None
    tree: Optional[str] = None

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        if self.n_min is not None and self.n_max is not None and self.n_min > self.n_max:
            raise ValueError(f"empty n range {self.n_min}..{self.n_max}")
        needs_range = self.command in ("table", "verify", "sample", "count")
        if needs_range and (self.n_min is None or self.n_max is None):
            raise ValueError(f"{self.command} needs --n")
        if self.command in ("sample", "count") and self.n_min != self.n_max:
            raise ValueError(f"{self.command} takes a single n, not a range")
        if self.command in ("table", "count") and self.family is None:
            raise ValueError(f"{self.command} needs --family")
        if self.command == "count" and self.k is None:
            raise ValueError("count needs --k")
        if self.command == "sample" and self.n_min < 1:
            raise ValueError("sample needs n >= 1")
        if self.command == "encode" and not self.tree:
            raise ValueError("encode needs --tree")
        if self.command not in ("encode", "schema") and self.p is None:
            raise ValueError(f"{self.command} needs --p")
        return self

    @property
    def n_values(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        n_range = getattr(args, "n", None)
        values = {
            "command": args.command,
            "p": getattr(args, "p", None),
            "n_min": n_range[0] if n_range else None,
            "n_max": n_range[1] if n_range else None,
            "k": getattr(args, "k", None),
            "family": getattr(args, "family", None),
            "format": getattr(args, "format", "text"),
            "seed": getattr(args, "seed", 0),
            "trials": getattr(args, "trials", 10_000),
            "budget": getattr(args, "budget", None),
            "workers": getattr(args, "workers", 1),
            "output": getattr(args, "output", None),
            "tree": getattr(args, "tree", None),
        }
        return cls(**values)


# JSON payloads. Counts are decimal strings because they outgrow 2**53.

class TableRowPayload(BaseModel):
    n: int
    values: List[str]
    row_sum: Optional[str] = None


class TablePayload(BaseModel):
    family: Family
    p: int
    rows: List[TableRowPayload]


class VerifyCheckPayload(BaseModel):
    family: Family
    n: int
    k: int
    oracle: str
    formula: str
    passed: bool


class VerifyPayload(BaseModel):
    p: int
    checks: List[VerifyCheckPayload]
    passed: bool


class SamplePayload(BaseModel):
    p: int
    n: int
    trials: int
    seed: str
    observed: Dict[str, int]
    expected: Dict[str, str]
    chi_square: float
    df: int
    p_value: Optional[float]
    critical_value: Optional[float]
    passed: bool


class CountPayload(BaseModel):
    family: Family
    p: int
    n: int
    k: int
    value: str


class AttachmentPayload(BaseModel):
    leaf: int
    parent: int
    slot: int


class EncodePayload(BaseModel):
    tree: str
    arity: int
    size: int
    md_size: int
    md_subtree: str
    y_part: str
    z_part: str
    attachments: List[AttachmentPayload]


PAYLOADS = {
    "table": TablePayload,
    "verify": VerifyPayload,
    "sample": SamplePayload,
    "count": CountPayload,
    "encode": EncodePayload,
}


def parse_range(text: str) -> Tuple[int, int]:
    """Parse ``a..b`` or a single integer into an inclusive (low, high) pair."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return int(low), int(high)
        value = int(text)
        return value, value
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}, expected N or A..B") from None


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        type=str,
        default="text",
        choices=["text", "csv", "json"],
        help="Output format"
    )
    common.add_argument(
        "--output",
        type=Path,
        default=None,
        help="Write output to this file instead of stdout"
    )
    common.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (logs go to stderr)"
    )
    common.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Threads for enumeration and sampling shards"
    )

    parser = argparse.ArgumentParser(
        prog="pary-md",
        description="Refined enumeration of p-ary labeled trees by maximal decreasing subtree size",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    table = subparsers.add_parser("table", parents=[common], help="Print a triangular table")
    table.add_argument("--family", type=str, required=True, choices=["y", "f", "t"], help="Counting family")
    table.add_argument("--p", type=int, default=2, help="Arity")
    table.add_argument("--n", type=parse_range, required=True, help="Range of n, e.g. 0..10")

    verify = subparsers.add_parser("verify", parents=[common], help="Check formulas against enumeration")
    verify.add_argument("--family", type=str, default=None, choices=["y", "f", "t"],
                        help="Family to verify (all three when omitted)")
    verify.add_argument("--p", type=int, default=2, help="Arity")
    verify.add_argument("--n", type=parse_range, required=True, help="Range of n, e.g. 0..6")
    verify.add_argument("--budget", type=int, default=None,
                        help="Cap on generated objects (default: $PARY_MD_BUDGET or 10^8)")

    sample = subparsers.add_parser("sample", parents=[common], help="Sample trees and test MD sizes")
    sample.add_argument("--p", type=int, default=2, help="Arity")
    sample.add_argument("--n", type=parse_range, required=True, help="Number of vertices")
    sample.add_argument("--trials", type=int, default=10_000, help="Number of sampled trees")
    sample.add_argument("--seed", type=int, default=0, help="64-bit master seed")

    count_parser = subparsers.add_parser("count", parents=[common], help="Print one exact value")
    count_parser.add_argument("--family", type=str, required=True, choices=["y", "f", "t"], help="Counting family")
    count_parser.add_argument("--p", type=int, default=2, help="Arity")
    count_parser.add_argument("--n", type=parse_range, required=True, help="Number of vertices")
    count_parser.add_argument("--k", type=int, required=True, help="MD-subtree size or component count")

    encode = subparsers.add_parser("encode", parents=[common], help="Inspect a tree in canonical text")
    encode.add_argument("--tree", type=str, required=True, help="Canonical tree text, e.g. (1,_,_)")
    encode.add_argument("--p", type=int, default=None, help="Expected arity (inferred when omitted)")

    subparsers.add_parser("schema", parents=[common], help="Print the JSON schema of the json payloads")
    return parser


def _csv_text(rows: Sequence[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _aligned_text(rows: Sequence[Sequence[str]]) -> str:
    width = max(len(row) for row in rows)
    padded = [list(row) + [""] * (width - len(row)) for row in rows]
    widths = [max(len(row[i]) for row in padded) for i in range(width)]
    lines = [" ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() for row in padded]
    return "\n".join(lines) + "\n"


def render_table(config: RunConfig) -> str:
    """Render the family's triangle over config.n_values in the configured format."""
    family, p = config.family, config.p
    row_fn = ROWS[family]
    rows = [(n, row_fn(p, n)) for n in config.n_values]
    with_sum = family == "t"
    top = config.n_max

    if config.format == "json":
        payload = TablePayload(
            family=family,
            p=p,
            rows=[
                TableRowPayload(
                    n=n,
                    values=[str(row[k]) for k in range(n + 1)],
                    row_sum=str(sum(row.values())) if with_sum else None,
                )
                for n, row in rows
            ],
        )
        return payload.model_dump_json(indent=2) + "\n"

    header = ["n"] + [str(k) for k in range(top + 1)] + ([ROW_SUM_HEADER] if with_sum else [])
    if config.format == "csv":
        body = [
            [n] + [row[k] for k in range(n + 1)] + ([sum(row.values())] if with_sum else [])
            for n, row in rows
        ]
        return _csv_text([header] + body)

    # text: cells above the diagonal stay blank
    header[0] = "n\\k"
    body = []
    for n, row in rows:
        cells = [str(n)] + [str(row[k]) if k <= n else "" for k in range(top + 1)]
        if with_sum:
            cells.append(str(sum(row.values())))
        body.append(cells)
    return _aligned_text([header] + body)


def run_verification(config: RunConfig, budget: EnumerationBudget) -> List[VerifyCheckPayload]:
    """Compare every oracle count with its formula over the configured range."""
    families = [config.family] if config.family else ["y", "f", "t"]
    p = config.p
    checks: List[VerifyCheckPayload] = []
    for n in config.n_values:
        for family in families:
            logger.info(f"Verifying family {family} for p={p}, n={n}")
            if family == "y":
                oracle = y_histogram(p, n, budget, config.workers).counts
                formula = {k: count_y(p, n, k) for k in range(n + 1)}
            elif family == "t":
                oracle = md_histogram(p, n, budget, config.workers).counts
                formula = {k: count_t(p, n, k) for k in range(n + 1)}
            else:
                oracle = forest_histogram(p, n, budget)
                formula = {k: count_f(p, n, k) for k in range(n + 1)}
            for k in range(n + 1):
                measured = oracle.get(k, 0)
                checks.append(
                    VerifyCheckPayload(
                        family=family,
                        n=n,
                        k=k,
                        oracle=str(measured),
                        formula=str(formula[k]),
                        passed=measured == formula[k],
                    )
                )
    return checks


def render_verification(config: RunConfig, checks: List[VerifyCheckPayload]) -> str:
    passed = all(check.passed for check in checks)
    if config.format == "json":
        return VerifyPayload(p=config.p, checks=checks, passed=passed).model_dump_json(indent=2) + "\n"
    if config.format == "csv":
        rows = [["family", "n", "k", "oracle", "formula", "status"]]
        rows += [
            [c.family, c.n, c.k, c.oracle, c.formula, "PASS" if c.passed else "FAIL"]
            for c in checks
        ]
        return _csv_text(rows)
    lines = [
        f"{'PASS' if c.passed else 'FAIL'} {c.family} p={config.p} n={c.n} k={c.k} "
        f"oracle={c.oracle} formula={c.formula}"
        for c in checks
    ]
    failures = sum(1 for c in checks if not c.passed)
    lines.append(f"{len(checks) - failures}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"


def render_sample(config: RunConfig) -> str:
    report = sample_md_distribution(
        config.p, config.n_min, config.trials, config.seed, workers=config.workers
    )
    expected = report.expected_text()
    if config.format == "json":
        payload = SamplePayload(
            p=report.p,
            n=report.n,
            trials=report.trials,
            seed=str(report.seed),
            observed={str(k): c for k, c in report.observed.items()},
            expected={str(k): e for k, e in expected.items()},
            chi_square=report.chi_square,
            df=report.df,
            p_value=report.p_value,
            critical_value=report.critical_value,
            passed=report.passed,
        )
        return payload.model_dump_json(indent=2) + "\n"
    if config.format == "csv":
        rows = [["k", "observed", "expected"]]
        rows += [[k, report.observed[k], expected[k]] for k in report.observed]
        return _csv_text(rows)
    lines = [f"p={report.p} n={report.n} trials={report.trials} seed={report.seed}"]
    rows = [["k", "observed", "expected"]] + [
        [str(k), str(report.observed[k]), expected[k]] for k in report.observed
    ]
    lines.append(_aligned_text(rows).rstrip("\n"))
    critical = "n/a" if report.critical_value is None else f"{report.critical_value:.4f}"
    lines.append(
        f"chi-square {report.chi_square:.4f} on {report.df} df "
        f"(critical {critical}): {'PASS' if report.passed else 'FAIL'}"
    )
    return "\n".join(lines) + "\n"


def render_count(config: RunConfig) -> str:
    value = count(config.family, config.p, config.n_min, config.k)
    if config.format == "json":
        payload = CountPayload(family=config.family, p=config.p, n=config.n_min, k=config.k, value=str(value))
        return payload.model_dump_json(indent=2) + "\n"
    if config.format == "csv":
        return _csv_text([["family", "p", "n", "k", "value"],
                          [config.family, config.p, config.n_min, config.k, value]])
    return f"{value}\n"


def render_encode(config: RunConfig) -> str:
    tree = canonical_decode(config.tree, config.p)
    fields = {"tree": canonical_encode(tree), "arity": tree.arity, "size": tree.size()}
    if tree.is_empty:
        fields.update(md_size=0, md_subtree="_", y_part="_", z_part="[]", attachments=[])
    else:
        parts = decompose(tree)
        fields.update(
            md_size=md_size(tree),
            md_subtree=canonical_encode(md_subtree(tree)),
            y_part=canonical_encode(parts.y_part),
            z_part=parts.z_part.canonical(),
            attachments=[a._asdict() for a in parts.attachments],
        )
    payload = EncodePayload(**fields)
    if config.format == "json":
        return payload.model_dump_json(indent=2) + "\n"
    if config.format == "csv":
        names = ["tree", "arity", "size", "md_size", "md_subtree", "y_part", "z_part"]
        return _csv_text([names, [getattr(payload, name) for name in names]])
    lines = [f"{name}: {getattr(payload, name)}" for name in
             ["tree", "arity", "size", "md_size", "md_subtree", "y_part", "z_part"]]
    lines += [f"attachment: {a.leaf} -> ({a.parent}, slot {a.slot})" for a in payload.attachments]
    return "\n".join(lines) + "\n"


def render_schema() -> str:
    schemas = {name: model.model_json_schema() for name, model in PAYLOADS.items()}
    return json.dumps(schemas, indent=2, sort_keys=True) + "\n"


def _emit(config: RunConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        config.output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {config.command} output to {config.output}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit status."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s [%(levelname)s] %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)]
    )

    try:
        config = RunConfig.from_args(args)
    except ValidationError as e:
        parser.print_usage(sys.stderr)
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"]) or args.command
            print(f"pary-md: error: {location}: {error['msg']}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if config.command == "table":
            _emit(config, render_table(config))
        elif config.command == "verify":
            budget = EnumerationBudget(config.budget)
            checks = run_verification(config, budget)
            _emit(config, render_verification(config, checks))
            logger.info(f"Verification generated {budget.generated} objects")
            if not all(check.passed for check in checks):
                logger.error("Oracle and formula disagree")
                return EXIT_MISMATCH
        elif config.command == "sample":
            _emit(config, render_sample(config))
        elif config.command == "count":
            _emit(config, render_count(config))
        elif config.command == "encode":
            _emit(config, render_encode(config))
        else:
            _emit(config, render_schema())
    except BudgetExceeded as e:
        logger.error(f"{e}; raise --budget or {BUDGET_ENV_VAR} to go further")
        print(f"pary-md: BudgetExceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ParyMdError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"pary-md: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"Cannot write {config.command} output: {e}")
        print(f"pary-md: cannot write output: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
