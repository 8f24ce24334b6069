"""Command-line entry point: ``hsfield {fgl,hs,geo,suite} ...``.

Exit codes: 0 success/pass, 1 verdict failure, 2 usage or parse error,
3 budget exceeded.  ``--format records`` switches every command to
line-oriented ``key=value`` records (see :mod:`hsfield.textio`).
The environment variable HF_BUDGET overrides the default point and
Groebner-pair budgets.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Sequence

from . import acceptance
from .derivation import (
    absolute_constants_basis,
    canonical_derivation,
    canonical_group_derivation,
    check_iterativity,
    constants_basis,
    wronskian_rank,
)
from .errors import BudgetExceeded, PreconditionError, Verdict
from .fields import is_prime
from .formal_group import BUILTINS, StructureConstants, fgl_builtin, fgl_check_axioms, fgl_truncate, structure_constants
from .groebner import DEFAULT_MAX_PAIRS
from .prolongation import DEFAULT_POINT_BUDGET, JetRing, axiom_instance_check, cv_compatibility, nabla_ideal
from .textio import (
    ParseError,
    format_derivation,
    format_record,
    parse_derivation,
    parse_element,
    parse_variety,
    v_names,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, validated once."""

    p: int = 2
    n: int = 1
    e: int = 1
    m: int = 1
    group: str | None = None
    inputs: dict = dc_field(default_factory=dict)
    mode: str = "pointwise"
    point_budget: int = DEFAULT_POINT_BUDGET
    max_pairs: int = DEFAULT_MAX_PAIRS
    seed: int = acceptance.DEFAULT_SEED
    output: str = "text"

    def __post_init__(self):
        if not is_prime(self.p):
            raise UsageError(f"p = {self.p} is not prime")
        if self.n < 1 or self.m < 1 or self.e < 1:
            raise UsageError("n, m and e must be at least 1")
        if self.point_budget < 1 or self.max_pairs < 1:
            raise UsageError("budgets must be positive")
        if self.group is not None and self.group not in BUILTINS:
            raise UsageError(f"unknown group {self.group!r}; choose from {', '.join(BUILTINS)}")


def _budget_override() -> int | None:
    raw = os.environ.get("HF_BUDGET")
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"HF_BUDGET must be an integer, got {raw!r}") from None
    return value


def config_from_args(args: argparse.Namespace) -> RunConfig:
    override = _budget_override()
    inputs = {k: getattr(args, k) for k in ("file", "variety", "derivation", "V", "W", "Z") if getattr(args, k, None)}
    return RunConfig(
        p=getattr(args, "p", None) or 2,
        n=getattr(args, "n", None) or 1,
        e=getattr(args, "e", None) or 1,
        m=getattr(args, "m", None) or 1,
        group=getattr(args, "name", None) or getattr(args, "group", None),
        inputs=inputs,
        mode=getattr(args, "mode", None) or "pointwise",
        point_budget=override or getattr(args, "budget", None) or DEFAULT_POINT_BUDGET,
        max_pairs=override or DEFAULT_MAX_PAIRS,
        seed=getattr(args, "seed", None) if getattr(args, "seed", None) is not None else acceptance.DEFAULT_SEED,
        output=args.format,
    )


# records -------------------------------------------------------------------------------
@dataclass(frozen=True)
class ConstantEntry:
    i: tuple[int, ...]
    j: tuple[int, ...]
    k: tuple[int, ...]
    c: int


def _idx(i) -> str:
    return ",".join(map(str, i))


def _unidx(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(","))


def to_record(value) -> dict:
    """The record form of the values the CLI emits."""
    if isinstance(value, ConstantEntry):
        return {"type": "constant", "i": _idx(value.i), "j": _idx(value.j), "k": _idx(value.k), "c": value.c}
    if isinstance(value, Verdict):
        return {"type": "verdict", "status": "pass" if value.ok else "fail", "reason": value.reason}
    if isinstance(value, acceptance.CriterionResult):
        return {"type": "criterion", **value.record()}
    raise TypeError(f"no record form for {type(value).__name__}")


def from_record(rec: dict):
    """Inverse of :func:`to_record` on records read back by :func:`parse_record`."""
    kind = rec.get("type")
    if kind == "constant":
        return ConstantEntry(_unidx(rec["i"]), _unidx(rec["j"]), _unidx(rec["k"]), int(rec["c"]))
    if kind == "verdict":
        return Verdict(rec["status"] == "pass", rec["reason"])
    if kind == "criterion":
        return acceptance.CriterionResult(int(rec["criterion"]), rec["title"], rec["status"] == "pass", rec["detail"], int(rec["checks"]))
    raise ParseError(f"unknown record type {kind!r}")


class Output:
    def __init__(self, mode: str, stream=None):
        self.mode = mode
        self.stream = stream or sys.stdout

    def text(self, line: str):
        if self.mode == "text":
            print(line, file=self.stream)

    def record(self, pairs):
        if self.mode == "records":
            print(format_record(pairs), file=self.stream)

    def verdict(self, label: str, v: Verdict) -> int:
        if self.mode == "records":
            self.record({**to_record(v), "check": label})
        else:
            status = "pass" if v.ok else "fail"
            print(f"{label}: {status}" + (f" ({v.reason})" if v.reason else ""), file=self.stream)
            if not v.ok:
                for k, val in sorted(v.details.items()):
                    print(f"  {k} = {val}", file=self.stream)
        return EXIT_OK if v.ok else EXIT_FAIL


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# fgl ------------------------------------------------------------------------------------
def _law(cfg: RunConfig):
    if cfg.group is None:
        raise UsageError("--name is required")
    try:
        return fgl_builtin(cfg.group, cfg.p, cfg.e, cfg.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_fgl_check(cfg: RunConfig, out: Output) -> int:
    F = _law(cfg)
    return out.verdict(f"{F.name} p={cfg.p} m={cfg.m} axioms", fgl_check_axioms(F, cfg.m))


def constant_entries(sc: StructureConstants) -> list[ConstantEntry]:
    return [ConstantEntry(i, j, k, c) for i, j, k, c in sc.nonzero()]


def cmd_fgl_constants(cfg: RunConfig, out: Output) -> int:
    F = _law(cfg)
    sc = structure_constants(fgl_truncate(F, cfg.m))
    entries = constant_entries(sc)
    out.text(f"# nonzero structure constants of {F.name}, p={cfg.p}, m={cfg.m}: D_j o D_i = sum_k c[i][j][k] D_k")
    for en in entries:
        out.text(f"c[{_idx(en.i)}][{_idx(en.j)}][{_idx(en.k)}] = {en.c}")
        out.record(to_record(en))
    return EXIT_OK


# hs -------------------------------------------------------------------------------------
def _derivation(cfg: RunConfig, args):
    if getattr(args, "file", None):
        return parse_derivation(_read(args.file))
    if cfg.group is None:
        raise UsageError("give a derivation file or --group")
    F = _law(cfg)
    kind = getattr(args, "kind", None) or "series"
    if kind == "series":
        return canonical_derivation(F, cfg.m, precision=args.precision)
    return canonical_group_derivation(F, cfg.m, kind=kind)


def cmd_hs_canonical(cfg: RunConfig, args, out: Output) -> int:
    D = _derivation(cfg, args)
    if out.mode == "text":
        out.stream.write(format_derivation(D))
    else:
        names = v_names(D.context.e)
        for g, img in zip(D.context.gens, D.images):
            out.record({"type": "image", "gen": g, "series": img.format(names)})
    return EXIT_OK


def cmd_hs_check_iter(cfg: RunConfig, args, out: Output) -> int:
    D = _derivation(cfg, args)
    law = D.law
    if args.group:
        law = fgl_truncate(fgl_builtin(args.group, D.context.p, D.context.e, D.context.field.n), D.context.m)
    if law is None:
        raise UsageError("no law: add law=<name> to the header or pass --group")
    return out.verdict(f"iterativity for {law.name}", check_iterativity(D, law))


def cmd_hs_constants(cfg: RunConfig, args, out: Output) -> int:
    D = _derivation(cfg, args)
    rep = absolute_constants_basis(D, args.degree) if args.absolute else constants_basis(D, args.degree)
    names = D.context.gens
    out.text(f"# {'absolute ' if args.absolute else ''}constants up to degree {args.degree}: dimension {rep.dimension}")
    for f in rep.basis:
        out.text(f.format(names))
        out.record({"type": "basis", "poly": f.format(names)})
    out.text(f"strict = {str(rep.strict).lower()}")
    out.record({"type": "constants", "degree": args.degree, "dimension": rep.dimension, "strict": str(rep.strict).lower()})
    return EXIT_OK


def cmd_hs_wronskian(cfg: RunConfig, args, out: Output) -> int:
    D = _derivation(cfg, args)
    R = D.ring
    try:
        xs = [parse_element(s, R) for s in args.elements.split(",") if s.strip()]
    except AttributeError:
        raise UsageError("wronskian needs a polynomial or rational context") from None
    if not xs:
        raise UsageError("no elements given")
    D1 = D
    r = wronskian_rank(D1, xs)
    dep = r < len(xs)
    out.text(f"rank {r} of {len(xs)}: {'dependent' if dep else 'independent'} over the constants")
    out.record({"type": "wronskian", "rank": r, "size": len(xs), "dependent": str(dep).lower()})
    return EXIT_OK


# geo ------------------------------------------------------------------------------------
def cmd_geo_nabla(cfg: RunConfig, args, out: Output) -> int:
    V, _ = parse_variety(_read(args.variety))
    D = parse_derivation(_read(args.derivation))
    nV = nabla_ideal(V, JetRing(D, V.arity))
    names = nV.names()
    for f in nV.generators:
        out.text(f.format(names))
        out.record({"type": "generator", "poly": f.format(names)})
    return EXIT_OK


def cmd_geo_check_compat(cfg: RunConfig, args, out: Output) -> int:
    g = fgl_truncate(_law(cfg), cfg.m)
    W, _ = parse_variety(_read(args.W))
    if W.arity % len(g.indices()):
        raise UsageError(f"W has {W.arity} coordinates, not a multiple of {len(g.indices())}")
    from .prolongation import affine_space

    V = affine_space(W.arity // len(g.indices()))
    v = cv_compatibility(g, V, W, cfg.mode, args.q, cfg.point_budget, cfg.max_pairs)
    return out.verdict(f"c_n(W) in nabla(W) [{cfg.mode}]", v)


def cmd_geo_search(cfg: RunConfig, args, out: Output) -> int:
    D = parse_derivation(_read(args.derivation))
    if D.law is None:
        raise UsageError("the derivation file must name its law (law=...)")
    V, _ = parse_variety(_read(args.V))
    W, _ = parse_variety(_read(args.W))
    Z = parse_variety(_read(args.Z))[0] if args.Z else None
    rep = axiom_instance_check(D.law, D, V, W, Z, q=args.q, degree=args.degree, budget=cfg.point_budget)
    names = D.context.gens
    if rep.found:
        shown = [D.ring.format(x) if hasattr(D.ring, "format") else str(x) for x in rep.witness]
        out.text("witness: (" + ", ".join(shown) + ")")
        out.record({"type": "witness", "point": "; ".join(shown), "candidates": rep.candidates})
        return EXIT_OK
    out.text(f"no witness among {rep.candidates} candidates" + (" (search exhausted)" if rep.exhausted else ""))
    out.record({"type": "witness", "point": "", "candidates": rep.candidates, "gens": ",".join(names)})
    return EXIT_FAIL


# suite ----------------------------------------------------------------------------------
def cmd_suite_acceptance(cfg: RunConfig, args, out: Output) -> int:
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers") from None
    results = acceptance.run_all(cfg.seed, only)
    for r in results:
        out.text(f"[{'PASS' if r.passed else 'FAIL'}] {r.number:2d} {r.title}: {r.detail}")
        out.record(to_record(r))
    failed = sum(not r.passed for r in results)
    out.text(f"{len(results) - failed} passed, {failed} failed (seed {cfg.seed})")
    out.record({"type": "summary", "passed": len(results) - failed, "failed": failed, "seed": cfg.seed})
    return EXIT_OK if not failed else EXIT_FAIL


# parser ---------------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text")

    field_args = argparse.ArgumentParser(add_help=False)
    field_args.add_argument("--p", type=int, default=2)
    field_args.add_argument("--n", type=int, default=1, help="degree of the constant field over F_p")
    field_args.add_argument("--m", type=int, default=1)
    field_args.add_argument("--e", type=int, default=None, help="dimension (additive law only)")

    top = _Parser(prog="hsfield", description="Hasse-Schmidt derivations and formal group laws in characteristic p")
    sub = top.add_subparsers(dest="area", required=True, parser_class=_Parser)

    fgl = sub.add_parser("fgl", help="formal group laws").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, hlp in (("check", "check the group-law axioms"), ("constants", "table of structure constants")):
        sp = fgl.add_parser(name, parents=[common, field_args], help=hlp)
        sp.add_argument("--name", required=True, choices=BUILTINS)

    hs = sub.add_parser("hs", help="HS-derivations").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, hlp in (
        ("canonical", "print the canonical derivation of a builtin law"),
        ("check-iter", "check iterativity of a derivation file"),
        ("constants", "basis of constants up to a degree"),
        ("wronskian", "linear dependence over the constants"),
    ):
        sp = hs.add_parser(name, parents=[common, field_args], help=hlp)
        sp.add_argument("file", nargs="?", help="derivation file")
        sp.add_argument("--group", choices=BUILTINS)
        sp.add_argument("--kind", choices=("series", "polynomial", "rational"), default=None)
        sp.add_argument("--precision", type=int, default=16)
        if name == "constants":
            sp.add_argument("--degree", type=int, required=True)
            sp.add_argument("--absolute", action="store_true")
        if name == "wronskian":
            sp.add_argument("--elements", required=True, help="comma-separated elements")

    geo = sub.add_parser("geo", help="prolongations and axiom instances").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = geo.add_parser("nabla", parents=[common], help="generators of the prolongation")
    sp.add_argument("--variety", required=True)
    sp.add_argument("--derivation", required=True)
    sp = geo.add_parser("check-compat", parents=[common, field_args], help="test c_n(W) in nabla(W)")
    sp.add_argument("--name", "--group", dest="name", required=True, choices=BUILTINS)
    sp.add_argument("--W", required=True)
    sp.add_argument("--mode", choices=("pointwise", "symbolic"), default="pointwise")
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp = geo.add_parser("search", parents=[common], help="search for an axiom witness")
    sp.add_argument("--derivation", required=True)
    sp.add_argument("--V", required=True)
    sp.add_argument("--W", required=True)
    sp.add_argument("--Z", default=None)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--q", type=int)
    grp.add_argument("--degree", type=int)
    sp.add_argument("--budget", type=int, default=None)

    suite = sub.add_parser("suite", help="acceptance suite").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = suite.add_parser("acceptance", parents=[common], help="run every acceptance criterion")
    sp.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    sp.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return top


def dispatch(args, cfg: RunConfig, out: Output) -> int:
    key = (args.area, args.cmd)
    if key == ("fgl", "check"):
        return cmd_fgl_check(cfg, out)
    if key == ("fgl", "constants"):
        return cmd_fgl_constants(cfg, out)
    table = {
        ("hs", "canonical"): cmd_hs_canonical,
        ("hs", "check-iter"): cmd_hs_check_iter,
        ("hs", "constants"): cmd_hs_constants,
        ("hs", "wronskian"): cmd_hs_wronskian,
        ("geo", "nabla"): cmd_geo_nabla,
        ("geo", "check-compat"): cmd_geo_check_compat,
        ("geo", "search"): cmd_geo_search,
        ("suite", "acceptance"): cmd_suite_acceptance,
    }
    return table[key](cfg, args, out)


def main(argv: Sequence[str] | None = None, stream=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "e", None) is None and hasattr(args, "e"):
            args.e = 1
        cfg = config_from_args(args)
        return dispatch(args, cfg, Output(cfg.output, stream))
    except UsageError as exc:
        print(f"hsfield: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FileNotFoundError) as exc:
        print(f"hsfield: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"hsfield: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"hsfield: precondition failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"hsfield: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
