"""Command-line front end.

Exit codes: 0 all checks pass, 1 a mathematical mismatch was found, 2 usage or
input error, 3 internal invariant breach.  Verification subcommands write
their full report to stdout (or --out) and a one-line summary to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .errors import (
    CeilingError,
    InternalInvariantError,
    InterpolationError,
    LabelError,
    RelationError,
    WitnessError,
)
from .gf import first_primes, is_supported_prime
from .hall_core import DEFAULT_DIM_CEILING, as_multiset, hall_number
from .hall_poly import (
    identities_to_json,
    identities_to_tsv,
    interpolate_hall_poly,
    reconcile_poly_table,
    reconciliation_to_json,
    reconciliation_to_tsv,
    verify_product_identities,
)
from .hom_decomp import decompose
from .lie import (
    bracket_table_to_json,
    bracket_table_to_latex,
    bracket_table_to_tsv,
    build_bracket_table,
    verify_lie_axioms,
)
from .quiver_rep import (
    AlgebraContext,
    all_labels,
    label_dims,
    multiset_to_str,
    parse_multiset,
    rep_from_json,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

ENV_CEILING = "HALLQ_DIM_CEILING"


@dataclass(frozen=True)
class RunConfig:
    """Validated per-invocation settings."""

    n: int
    primes: tuple[int, ...]
    dim_ceiling: int | None
    output_format: str
    parallelism: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need n >= 2")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        for p in self.primes:
            if not is_supported_prime(p):
                raise ValueError(f"unsupported prime {p}")
        if self.output_format not in ("tsv", "json", "latex"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.dim_ceiling is not None and self.dim_ceiling < 1:
            raise ValueError("dimension ceiling must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")


def _env_ceiling() -> int | None:
    raw = os.environ.get(ENV_CEILING)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_CEILING} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{ENV_CEILING} must be positive, got {value}")
    return value


def _resolve_ceiling(args) -> int | None:
    # flag wins over environment; None means the command's own default
    if getattr(args, "dim_ceiling", None) is not None:
        return args.dim_ceiling
    return _env_ceiling()


def _parse_primes(raw: str | None) -> tuple[int, ...]:
    if raw is None:
        return tuple(first_primes(6))
    try:
        return tuple(int(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise ValueError(f"could not parse prime list {raw!r}")


def _parallelism(raw: str) -> int:
    # single process either way; the knob is validated and recorded only
    if raw == "auto":
        return 1
    value = int(raw)
    return value


def _config(args, fmt: str | None = None) -> RunConfig:
    return RunConfig(
        n=args.n,
        primes=_parse_primes(getattr(args, "primes", None)),
        dim_ceiling=_resolve_ceiling(args),
        output_format=fmt if fmt is not None else getattr(args, "format", "tsv"),
        parallelism=_parallelism(getattr(args, "parallelism", "auto")),
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_indec_list(args) -> int:
    cfg = _config(args)
    rows = [
        (str(label), label_dims(label, cfg.n)) for label in all_labels(cfg.n)
    ]
    if cfg.output_format == "json":
        text = json.dumps(
            [{"label": name, "dims": list(dims)} for name, dims in rows], indent=2
        ) + "\n"
    else:
        lines = ["label\tdims"]
        lines.extend(f"{name}\t{','.join(str(d) for d in dims)}" for name, dims in rows)
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _load_m(args, n: int):
    if args.m_file:
        if args.m is not None:
            raise ValueError("give the composite either inline or as a file, not both")
        with open(args.m_file, encoding="utf-8") as fh:
            rep = rep_from_json(json.load(fh))
        if rep.ctx.n != n:
            raise ValueError(
                f"representation file has n={rep.ctx.n}, command asked for n={n}"
            )
        return decompose(rep).as_labels()
    if args.m is None:
        raise ValueError("missing the composite argument")
    return as_multiset(parse_multiset(args.m), n)


def cmd_hall_number(args) -> int:
    cfg = _config(args)
    if not is_supported_prime(args.p):
        raise ValueError(f"unsupported prime {args.p}")
    x = as_multiset(parse_multiset(args.x), cfg.n)
    y = as_multiset(parse_multiset(args.y), cfg.n)
    m = _load_m(args, cfg.n)
    ceiling = cfg.dim_ceiling if cfg.dim_ceiling is not None else DEFAULT_DIM_CEILING
    value = hall_number(x, y, m, AlgebraContext(cfg.n, args.p), dim_ceiling=ceiling)
    print(value)
    return EXIT_OK


def cmd_hall_poly(args) -> int:
    cfg = _config(args)
    x = as_multiset(parse_multiset(args.x), cfg.n)
    y = as_multiset(parse_multiset(args.y), cfg.n)
    m = _load_m(args, cfg.n)
    ceiling = cfg.dim_ceiling if cfg.dim_ceiling is not None else DEFAULT_DIM_CEILING
    poly = interpolate_hall_poly(
        x, y, m, cfg.n, cfg.primes, dim_ceiling=ceiling
    )
    print(poly)
    return EXIT_OK


def cmd_verify_prop(args) -> int:
    cfg = _config(args)
    ceiling = cfg.dim_ceiling if cfg.dim_ceiling is not None else DEFAULT_DIM_CEILING
    reports = reconcile_poly_table(cfg.n, cfg.primes, dim_ceiling=ceiling)
    text = (
        reconciliation_to_json(reports)
        if cfg.output_format == "json"
        else reconciliation_to_tsv(reports)
    )
    _emit(text, args.out)
    mismatches = [r for r in reports if r.verdict == "mismatch"]
    ambiguous = sum(1 for r in reports if r.verdict == "ambiguous")
    print(
        f"{len(reports)} triples: {len(reports) - len(mismatches) - ambiguous} match, "
        f"{ambiguous} ambiguous, {len(mismatches)} mismatch",
        file=sys.stderr,
    )
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_verify_identities(args) -> int:
    cfg = _config(args)
    if not is_supported_prime(args.p):
        raise ValueError(f"unsupported prime {args.p}")
    ceiling = cfg.dim_ceiling if cfg.dim_ceiling is not None else DEFAULT_DIM_CEILING
    checks = verify_product_identities(cfg.n, args.p, dim_ceiling=ceiling)
    text = (
        identities_to_json(checks)
        if cfg.output_format == "json"
        else identities_to_tsv(checks)
    )
    _emit(text, args.out)
    bad = [c for c in checks if not c.ok]
    print(f"{len(checks)} expansions: {len(bad)} fail", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_lie_table(args) -> int:
    fmt = "latex" if args.latex else getattr(args, "format", "tsv")
    cfg = _config(args, fmt=fmt)
    table = build_bracket_table(cfg.n, cfg.primes, dim_ceiling=cfg.dim_ceiling)
    if cfg.output_format == "json":
        text = bracket_table_to_json(table)
    elif cfg.output_format == "latex":
        text = bracket_table_to_latex(table)
    else:
        text = bracket_table_to_tsv(table)
    _emit(text, args.out)
    print(
        f"{len(table.entries)} pairs: {len(table.mismatches)} closed-form mismatches",
        file=sys.stderr,
    )
    return EXIT_MISMATCH if table.mismatches else EXIT_OK


def cmd_lie_verify(args) -> int:
    cfg = _config(args)
    table = build_bracket_table(cfg.n, cfg.primes, dim_ceiling=cfg.dim_ceiling)
    report = verify_lie_axioms(table)
    payload = {
        "n": report.n,
        "diagonal": report.diagonal_ok,
        "antisymmetry": report.antisymmetry_ok,
        "jacobi": report.jacobi_ok,
        "grading": report.grading_ok,
        "closed_form_mismatches": len(table.mismatches),
        "violations": list(report.violations),
    }
    if cfg.output_format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            f"diagonal\t{'pass' if report.diagonal_ok else 'fail'}",
            f"antisymmetry\t{'pass' if report.antisymmetry_ok else 'fail'}",
            f"jacobi\t{'pass' if report.jacobi_ok else 'fail'}",
            f"grading\t{'pass' if report.grading_ok else 'fail'}",
            f"closed_form_mismatches\t{len(table.mismatches)}",
        ]
        lines.extend(f"violation\t{v}" for v in report.violations)
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    ok = report.ok and not table.mismatches
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_decompose(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        rep = rep_from_json(json.load(fh))
    ms = decompose(rep)
    print(multiset_to_str(ms.as_labels()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hallq",
        description="Submodule counting and bracket tables for the one-cycle "
        "bound quiver algebra over prime fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, *, primes=False, prime=False, fmt=True, latex=False):
        sp.add_argument("--n", type=int, required=True, help="number of vertices")
        if primes:
            sp.add_argument(
                "--primes",
                help="comma-separated evaluation primes (default: 2,3,5,7,11,13)",
            )
        if prime:
            sp.add_argument("--p", type=int, required=True, help="field size (prime)")
        if fmt:
            sp.add_argument("--format", choices=["tsv", "json"], default="tsv")
        if latex:
            sp.add_argument(
                "--latex", action="store_true", help="emit a LaTeX tabular instead"
            )
        sp.add_argument("--out", help="write the report to this path")
        sp.add_argument(
            "--dim-ceiling",
            type=int,
            dest="dim_ceiling",
            help=f"refuse composites above this total dimension "
            f"(default {DEFAULT_DIM_CEILING}; env {ENV_CEILING} overrides)",
        )
        sp.add_argument("--parallelism", default="auto", help="accepted for config "
                        "compatibility; runs single-process")

    sp = sub.add_parser("indec-list", help="list indecomposable labels with dimensions")
    add_common(sp)
    sp.set_defaults(func=cmd_indec_list)

    sp = sub.add_parser("hall-number", help="count submodules with fixed sub and quotient")
    add_common(sp, prime=True, fmt=False)
    sp.add_argument("x", help="quotient isoclass, e.g. W1,1 or V1+W1,1")
    sp.add_argument("y", help="submodule isoclass")
    sp.add_argument("m", nargs="?", help="composite isoclass")
    sp.add_argument("--m-file", dest="m_file", help="JSON representation file for the composite")
    sp.set_defaults(func=cmd_hall_number)

    sp = sub.add_parser("hall-poly", help="interpolate the counting polynomial")
    add_common(sp, primes=True, fmt=False)
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("m", nargs="?")
    sp.add_argument("--m-file", dest="m_file")
    sp.set_defaults(func=cmd_hall_poly)

    sp = sub.add_parser(
        "verify-prop", help="reconcile interpolated polynomials with the closed forms"
    )
    add_common(sp, primes=True)
    sp.set_defaults(func=cmd_verify_prop)

    sp = sub.add_parser(
        "verify-identities", help="check the eight product expansions at one prime"
    )
    add_common(sp, prime=True)
    sp.set_defaults(func=cmd_verify_identities)

    sp = sub.add_parser("lie-table", help="bracket table on indecomposable classes")
    add_common(sp, primes=True, latex=True)
    sp.set_defaults(func=cmd_lie_table)

    sp = sub.add_parser("lie-verify", help="check antisymmetry and Jacobi on the table")
    add_common(sp, primes=True)
    sp.set_defaults(func=cmd_lie_verify)

    sp = sub.add_parser("decompose", help="split a JSON representation into indecomposables")
    sp.add_argument("file", help="JSON representation file")
    sp.set_defaults(func=cmd_decompose)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InternalInvariantError as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (
        LabelError,
        RelationError,
        WitnessError,
        CeilingError,
        InterpolationError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    main_entry()
