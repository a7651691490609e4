"""Command-line front end: analyze, sweep, decay, validate."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .bands import decay_series, overlap_statistic, sweep_grid
from .lattice import support_period_group
from .operators import SpecError, build_symbol, validate_hermitian
from .specio import SpecParseError, parse_rational, parse_spec, spec_hash
from .varieties import (
    CONTINUUM,
    FAILS,
    TestRecord,
    TestReport,
    c_alpha_sweep,
    charpoly,
    dual_consistency_check,
    no_nontrivial_periods_certificate,
    offset_test,
    squarefree_test,
    top_component_check,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_PERIOD = 4
EXIT_RESOURCE = 5

ALL_TESTS = ("charpoly", "squarefree", "c_alpha", "periods", "offset", "top_component", "dual_consistency")
DEFAULT_OFFSETS = ("1", "-1", "1/2", "-1/2")


class ResourceCapError(RuntimeError):
    pass


@dataclass
class RunConfig:
    input: Path
    command: str
    tests: tuple[str, ...] = ALL_TESTS
    ns: tuple[int, ...] = ()
    tau: float = 1e-8
    offsets: tuple[Fraction, ...] = tuple(Fraction(a) for a in DEFAULT_OFFSETS)
    n_max_shifts: int = 6
    out: Path | None = None
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    probabilistic: bool = False
    assume_irreducible: bool = False
    seed: int = 0
    max_grid_values: int = 4_000_000

    def __post_init__(self) -> None:
        if any(n < 1 for n in self.ns):
            raise ValueError("grid sizes must be positive")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        unknown = set(self.tests) - set(ALL_TESTS)
        if unknown:
            raise ValueError(f"unknown tests: {sorted(unknown)}")


def parse_n_range(text: str) -> tuple[int, ...]:
    """'a:b' doubles from a up to b inclusive; 'a,b,c' is an explicit list."""
    if ":" in text:
        lo, hi = (int(x) for x in text.split(":"))
        if lo < 1 or lo > hi:
            raise ValueError(f"malformed range {text!r}")
        out = []
        n = lo
        while n <= hi:
            out.append(n)
            n *= 2
        return tuple(out)
    return tuple(int(x) for x in text.split(",") if x.strip())


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(cfg: RunConfig, doc: dict, suffix: str = ".json") -> None:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        target = cfg.out if cfg.out.suffix == ".json" else cfg.out.with_suffix(suffix)
        write_atomic(target, text)


def _meta(spec, cfg: RunConfig) -> dict:
    return {"tool_version": __version__, "spec_hash": spec_hash(spec), "seed": cfg.seed}


def run_analyze(cfg: RunConfig) -> tuple[TestReport, int]:
    spec = parse_spec(cfg.input)
    report = TestReport(spec.name or str(cfg.input), meta=_meta(spec, cfg))
    selected = set(cfg.tests)
    if not selected:
        return report, EXIT_OK
    symbol = build_symbol(spec)
    verdict = validate_hermitian(symbol)
    if not verdict:
        raise SpecError(f"symbol is not Hermitian on the torus at entry {verdict.witness}")
    p = charpoly(symbol)
    irreducible = cfg.assume_irreducible or spec.kind == "schrodinger"
    if "charpoly" in selected:
        report.add(TestRecord("charpoly", "holds", witness=p.poly, details={"Q": p.size}))
    if "squarefree" in selected:
        report.add(squarefree_test(p))
    if "c_alpha" in selected:
        for rec in c_alpha_sweep(p, cfg.n_max_shifts, workers=cfg.workers,
                                 probabilistic=cfg.probabilistic, seed=cfg.seed):
            report.add(rec)
    if "periods" in selected:
        report.add(no_nontrivial_periods_certificate(p, irreducible, cfg.n_max_shifts, cfg.probabilistic))
    if "offset" in selected:
        for a in cfg.offsets:
            report.add(offset_test(p, a, [0] * spec.dimension, 1))
    if spec.kind == "schrodinger":
        if "top_component" in selected:
            report.add(top_component_check(spec, cfg.n_max_shifts))
        if "dual_consistency" in selected:
            report.add(dual_consistency_check(spec, seed=cfg.seed))
    code = EXIT_OK if report.all_hold() else EXIT_PERIOD
    return report, code


def _check_cap(spec, n: int, cfg: RunConfig) -> None:
    size = n**spec.dimension * spec.size
    if size > cfg.max_grid_values:
        raise ResourceCapError(
            f"grid N={n} needs {size} band values, above the cap of {cfg.max_grid_values}; "
            "lower N or raise --max-grid-values"
        )


def run_sweep(cfg: RunConfig) -> tuple[dict, str, int]:
    spec = parse_spec(cfg.input)
    if len(cfg.ns) != 1:
        raise ValueError("sweep needs exactly one --N")
    n = cfg.ns[0]
    _check_cap(spec, n, cfg)
    grid = sweep_grid(build_symbol(spec), n, cfg.workers)
    report = overlap_statistic(grid, cfg.tau, [float(a) for a in cfg.offsets])
    doc = {"operator": spec.name or str(cfg.input), **_meta(spec, cfg), "overlap": report.to_json()}
    return doc, grid.to_csv(), EXIT_OK


def run_decay(cfg: RunConfig) -> tuple[dict, str, int]:
    spec = parse_spec(cfg.input)
    if not cfg.ns:
        raise ValueError("decay needs --N-range or --N")
    for n in cfg.ns:
        _check_cap(spec, n, cfg)
    table = decay_series(spec, cfg.ns, cfg.tau, cfg.workers, [float(a) for a in cfg.offsets])
    doc = {"operator": spec.name or str(cfg.input), **_meta(spec, cfg), "decay": table.to_json()}
    group = support_period_group(charpoly(build_symbol(spec)).poly)
    doc["symbolic_periods"] = (
        {"verdict": CONTINUUM} if group.continuum
        else {"verdict": "trivial" if group.is_trivial() else FAILS,
              "periods": [[str(x) for x in a] for a in group.elements() if any(a)]}
    )
    code = EXIT_PERIOD if table.non_decaying else EXIT_OK
    return doc, table.to_csv(), code


def run_validate(cfg: RunConfig) -> tuple[dict, int]:
    spec = parse_spec(cfg.input)
    symbol = build_symbol(spec)
    verdict = validate_hermitian(symbol)
    doc = {"operator": spec.name or str(cfg.input), **_meta(spec, cfg),
           "Q": spec.size, "hermitian": verdict.ok,
           "witness": list(verdict.witness) if verdict.witness else None}
    return doc, EXIT_OK if verdict.ok else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blochband", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "sweep", "decay", "validate"):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, type=Path)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--tests", default=",".join(ALL_TESTS),
                       help="comma-separated subset of " + ",".join(ALL_TESTS))
        p.add_argument("--N", dest="n", default=None, help="grid size (or comma list)")
        p.add_argument("--N-range", dest="n_range", default=None, help="a:b, doubling from a to b")
        p.add_argument("--tau", type=float, default=1e-8)
        p.add_argument("--offsets", default=",".join(DEFAULT_OFFSETS))
        p.add_argument("--Nmax-shifts", dest="n_max_shifts", type=int, default=6)
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--probabilistic", action="store_true")
        p.add_argument("--assume-irreducible", action="store_true")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-grid-values", type=int, default=4_000_000)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ns: tuple[int, ...] = ()
    if args.n_range:
        ns = parse_n_range(args.n_range)
    elif args.n:
        ns = parse_n_range(args.n)
    offsets = tuple(parse_rational(a.strip(), "--offsets") for a in args.offsets.split(",") if a.strip())
    if any(a == 0 for a in offsets):
        raise ValueError("offsets must be nonzero")
    return RunConfig(
        input=args.input,
        command=args.command,
        tests=tuple(t.strip() for t in args.tests.split(",") if t.strip()),
        ns=ns,
        tau=args.tau,
        offsets=offsets,
        n_max_shifts=args.n_max_shifts,
        out=args.out,
        workers=max(1, args.workers),
        probabilistic=args.probabilistic,
        assume_irreducible=args.assume_irreducible,
        seed=args.seed,
        max_grid_values=args.max_grid_values,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "analyze":
            report, code = run_analyze(cfg)
            _emit(cfg, report.to_json())
        elif cfg.command == "validate":
            doc, code = run_validate(cfg)
            _emit(cfg, doc)
        else:
            runner = run_sweep if cfg.command == "sweep" else run_decay
            doc, csv_text, code = runner(cfg)
            if cfg.out is None:
                sys.stdout.write(csv_text)
                sys.stderr.write(json.dumps(doc, indent=2) + "\n")
            else:
                csv_path = cfg.out if cfg.out.suffix == ".csv" else cfg.out.with_suffix(".csv")
                write_atomic(csv_path, csv_text)
                write_atomic(csv_path.with_suffix(".json"), json.dumps(doc, indent=2) + "\n")
        return code
    except (SpecParseError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, SpecError):
            sys.stderr.write(f"invariant violation: {exc}\n")
            return EXIT_INVARIANT
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except ResourceCapError as exc:
        sys.stderr.write(f"resource cap: {exc}\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
