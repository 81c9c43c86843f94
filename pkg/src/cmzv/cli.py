"""Command-line front end: ``cmzv eval | relations | verify | selftest``.

Exit codes: 0 success, 1 a verification failed, 2 bad input (unparseable
symbol, unknown family, unreadable file), 3 divergent symbol.

Symbol grammar (see ``data/symbol_grammar.txt``)::

    zeta 1,2          multiple zeta value
    zetastar 1,2      multiple zeta-star value
    cyc [(2),(1)]     cyclic multiple zeta value, blocks in order
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Sequence

from .cyclic import Symbol
from .evaluator import DivergentError, TruncationSpec, evaluation_record
from .relations import CLI_FAMILIES, Relation, family_relations, relation_matrix, verify_numeric
from .selftest import LEVELS, format_report, run_selftest

CONFIG_ENV = "CMZV_CONFIG"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DIVERGENT = 0, 1, 2, 3


@dataclass(frozen=True)
class Config:
    cutoff: int = 1000
    tol: float = 1e-2
    max_weight: int = 6
    max_s: int = 3
    max_k: int = 3
    format: str = "text"
    jobs: int = 1
    seed: int = 0


def load_config(path: str | None = None) -> Config:
    """Defaults, overridden by a JSON file from ``path`` or ``$CMZV_CONFIG``."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return Config()
    data = json.loads(Path(path).read_text())
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return replace(Config(), **data)


class _InputError(Exception):
    pass


def _fail(msg: str, code: int) -> int:
    print(f"cmzv: {msg}", file=sys.stderr)
    return code


# -- eval ---------------------------------------------------------------------------------


def cmd_eval(args, cfg: Config) -> int:
    text = " ".join(args.symbol)
    try:
        sym = Symbol.parse(text)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    spec = TruncationSpec(args.cutoff or cfg.cutoff, args.mode)
    try:
        record = evaluation_record(sym, spec)
    except DivergentError as exc:
        return _fail(str(exc), EXIT_DIVERGENT)
    if (args.format or cfg.format) == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(record["value"])
    return EXIT_OK


# -- relations ----------------------------------------------------------------------------


def _family(name: str) -> str:
    if name not in CLI_FAMILIES:
        raise _InputError(f"unknown family {name!r}; choose from {', '.join(CLI_FAMILIES)}")
    return name


def _weights(args, cfg: Config) -> list[int]:
    if args.weight is not None:
        top = args.weight
        if top > cfg.max_weight and args.max_weight is None:
            raise _InputError(f"weight {top} exceeds the configured max weight {cfg.max_weight}")
        return [top]
    top = args.max_weight if args.max_weight is not None else cfg.max_weight
    return list(range(2, top + 1))


def _generate(family: str, weights: list[int], cfg: Config) -> list[Relation]:
    out: list[Relation] = []
    for w in weights:
        out.extend(family_relations(family, w, max_s=cfg.max_s, max_k=cfg.max_k))
    return out


def cmd_relations(args, cfg: Config) -> int:
    try:
        family = _family(args.family)
        rels = _generate(family, _weights(args, cfg), cfg)
    except _InputError as exc:
        return _fail(str(exc), EXIT_INPUT)
    if (args.format or "json") == "csv":
        body = relation_matrix(rels).to_csv() if rels else ""
    else:
        body = "".join(r.to_json() + "\n" for r in rels)
    if args.out:
        Path(args.out).write_text(body)
    else:
        sys.stdout.write(body)
    return EXIT_OK


# -- verify -------------------------------------------------------------------------------


def read_relations(path: str) -> list[Relation]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from exc
    rels = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rels.append(Relation.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise _InputError(f"{path}:{n}: not a relation record ({exc})") from exc
    return rels


def _verify_one(job):
    rel, spec, tol = job
    return verify_numeric(rel, spec, tol)


def cmd_verify(args, cfg: Config) -> int:
    try:
        if args.infile:
            rels = read_relations(args.infile)
        elif args.family:
            rels = _generate(_family(args.family), _weights(args, cfg), cfg)
        else:
            raise _InputError("verify needs --in FILE or --family F")
    except _InputError as exc:
        return _fail(str(exc), EXIT_INPUT)
    spec = TruncationSpec(args.cutoff or cfg.cutoff, args.mode)
    tol = args.tol if args.tol is not None else cfg.tol
    jobs = [(r, spec, tol) for r in rels]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            reports = list(pool.map(_verify_one, jobs))  # map keeps input order
    else:
        reports = [_verify_one(j) for j in jobs]
    failed = 0
    as_json = (args.format or cfg.format) == "json"
    for rep in reports:
        failed += not rep.passed
        if as_json:
            print(json.dumps(rep.to_dict(), sort_keys=True))
        else:
            res = rep.to_dict()["residual"]
            print(f"{'PASS' if rep.passed else 'FAIL'}  residual={res}  {rep.relation}")
    if not as_json:
        print(f"{len(reports) - failed}/{len(reports)} relations within tol={tol} at N={spec.cutoff}")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# -- selftest -----------------------------------------------------------------------------


def cmd_selftest(args, cfg: Config) -> int:
    seed = args.seed if args.seed is not None else cfg.seed
    results = run_selftest(args.level, seed)
    sys.stdout.write(format_report(args.level, seed, results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser -------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are input errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="cmzv",
        description=__doc__.split("\n\n")[0],
        epilog="Symbols: 'zeta 1,2', 'zetastar 1,2', 'cyc [(2),(1)]'. "
        f"Config: JSON file via --config or ${CONFIG_ENV}.",
    )
    p.add_argument("--config", help="JSON config file")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a truncated value")
    e.add_argument("symbol", nargs="+", help="e.g. zeta 1,2 | zetastar 1,2 | cyc \"[(2),(1)]\"")
    e.add_argument("--cutoff", "-N", type=int)
    e.add_argument("--mode", choices=("exact", "float"), default="float")
    e.add_argument("--format", choices=("text", "json"))
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("relations", help="generate the relations of a family")
    r.add_argument("--family", required=True, help=", ".join(CLI_FAMILIES))
    r.add_argument("--weight", type=int)
    r.add_argument("--max-weight", type=int)
    r.add_argument("--out", help="output file (default stdout)")
    r.add_argument("--format", choices=("json", "csv"))
    r.set_defaults(func=cmd_relations)

    v = sub.add_parser("verify", help="check relations numerically at a cutoff")
    v.add_argument("--in", dest="infile", help="relation JSON lines")
    v.add_argument("--family")
    v.add_argument("--weight", type=int)
    v.add_argument("--max-weight", type=int)
    v.add_argument("--cutoff", "-N", type=int)
    v.add_argument("--mode", choices=("exact", "float"), default="float")
    v.add_argument("--tol", type=float)
    v.add_argument("--format", choices=("text", "json"))
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the identity suites")
    s.add_argument("--level", choices=tuple(LEVELS), default="quick")
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError, TypeError) as exc:
        return _fail(f"bad config: {exc}", EXIT_INPUT)
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
