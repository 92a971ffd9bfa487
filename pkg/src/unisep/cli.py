"""Command-line entry point: ``unisep suite|check|cache``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import cache as C
from .builders import UnknownRecipe, build, recipe_ids
from .groups import CapExceeded, GroupSpec, enumerate_group
from .matio import ParseError, format_matrix, parse_matrices
from .meataxe import (
    DEFAULT_SEED, ModuleRep, NotSymplectic, RandomBudgetExhausted, composition_factor_dims,
    has_trivial_composition_factor, invariant_forms, is_absolutely_irreducible, is_irreducible, is_unisingular,
    symplectic_certificate,
)
from .suites import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, SUITES, Options, Report, _verdict_fields, record, run_suite


def parse_group_file(text: str, source: str = "<group>"):
    """Generators from a group file: a matrix file, or ``perm N`` followed by one
    permutation per line (0-based images, whitespace separated)."""
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise ParseError(1, "empty group file", source)
    no, first = lines[0]
    if not first.startswith("perm"):
        return parse_matrices(text, source)
    parts = first.split()
    if len(parts) != 2 or not parts[1].isdigit():
        raise ParseError(no, f"expected 'perm N', got {first!r}", source)
    n = int(parts[1])
    gens = []
    for no, ln in lines[1:]:
        try:
            p = tuple(int(x) for x in ln.split())
        except ValueError:
            raise ParseError(no, f"non-integer entry in {ln!r}", source) from None
        if sorted(p) != list(range(n)):
            raise ParseError(no, f"not a permutation of 0..{n - 1}", source)
        gens.append(p)
    if not gens:
        raise ParseError(no + 1, "no permutations", source)
    return gens


def check(module_path, group_path=None, seed: int = 0, samples: int = 10_000) -> Report:
    """Irreducibility, factors, forms and unisingularity of a user-supplied action."""
    mpath = Path(module_path)
    mats = parse_matrices(mpath.read_text(), str(mpath))
    rep = ModuleRep.from_matrices(mats, mpath.stem)
    if group_path is not None:
        gpath = Path(group_path)
        gens = parse_group_file(gpath.read_text(), str(gpath))
        if len(gens) != rep.ngens:
            raise ValueError(f"{len(gens)} group generators but {rep.ngens} module matrices")
        spec = GroupSpec(gpath.stem, gens)
    else:
        spec = rep.group_spec(mpath.stem)
    s = DEFAULT_SEED + seed
    fields: dict = {"dim": rep.dim, "field": rep.field.q, "generators": rep.ngens}
    irr = is_irreducible(rep, s)
    fields["irreducible"] = irr.irreducible
    fields["absolutely_irreducible"] = is_absolutely_irreducible(rep, s) if irr.irreducible else False
    fields["factor_dims"] = [d for d, _ in composition_factor_dims(rep, s)]
    fields["has_trivial_factor"] = has_trivial_composition_factor(rep, s)
    fields["invariant_forms"] = len(invariant_forms(rep, s))
    try:
        cert = symplectic_certificate(rep, s)
        fields["symplectic"] = True
        fields["symplectic_form"] = format_matrix(cert.gram)
    except NotSymplectic:
        fields["symplectic"] = False
    try:
        store = enumerate_group(spec)
        fields["order"] = store.order
        v = is_unisingular(rep, store)
        mode = "exhaustive"
    except CapExceeded:
        v = is_unisingular(rep, samples=samples, spec=spec, seed=seed)
        mode = "sampled"
    fields.update(_verdict_fields(v))
    rec = record(f"check/{mpath.stem}", "analysis of the supplied action", False, None, mode, **fields)
    return Report("check", seed, False, [rec])


def _emit(report: Report, out: str | None, quiet: bool = False) -> None:
    if out:
        Path(out).write_text(report.to_json() + "\n")
    if not quiet:
        print("\n".join(report.lines()))


def _cmd_suite(args) -> int:
    opt = Options(seed=args.seed, threads=args.threads, sampled_ok=args.sampled_ok, use_cache=not args.no_cache,
                  samples=args.samples, only=tuple(args.only) if args.only else None)
    report = run_suite(args.id, opt)
    _emit(report, args.report, args.quiet)
    return report.exit_code


def _cmd_check(args) -> int:
    try:
        report = check(args.module, args.group, args.seed, args.samples)
    except (ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RandomBudgetExhausted as e:
        print(f"error: {e}; retry with another --seed", file=sys.stderr)
        return EXIT_FAIL
    _emit(report, args.report, quiet=True)
    rec = report.records[0]
    for key in ("field", "dim", "order", "irreducible", "absolutely_irreducible", "factor_dims",
                "has_trivial_factor", "invariant_forms", "symplectic", "unisingular", "unisingular_mode",
                "witness_order"):
        if key in rec:
            print(f"{key:>24}: {rec[key]}")
    if args.json:
        print(json.dumps(report.records[0], sort_keys=True, indent=1))
    return EXIT_PASS


def _cmd_cache(args) -> int:
    if args.action == "clear" and args.recipe == "all":
        for p in C.clear():
            print(f"removed {p}")
        return EXIT_PASS
    try:
        spec = build(args.recipe).spec
    except UnknownRecipe:
        print(f"error: unknown recipe {args.recipe!r}", file=sys.stderr)
        return EXIT_USAGE
    path = C.cache_path(spec)
    if args.action == "build":
        store = enumerate_group(spec)
        C.save(store, path)
        print(f"{args.recipe}: {store.order} elements -> {path}")
        return EXIT_PASS
    if args.action == "verify":
        if not path.exists():
            print(f"error: no cache for {args.recipe} at {path}", file=sys.stderr)
            return EXIT_FAIL
        try:
            res = C.verify(spec, path)
        except C.CacheError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_FAIL
        if res.ok:
            print(f"{args.recipe}: {path} verified byte-identical")
            return EXIT_PASS
        print(f"error: {path} corrupt at byte offset {res.offset}", file=sys.stderr)
        return EXIT_FAIL
    removed = C.clear(spec)
    print(f"removed {removed[0]}" if removed else f"{args.recipe}: nothing cached")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unisep", description="Fixed-point subgroups of symplectic groups over F2.")
    ap.add_argument("--version", action="version", version=f"unisep {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("suite", help="run a verification suite")
    s.add_argument("id", choices=SUITES)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--report", metavar="OUT.json")
    s.add_argument("--sampled-ok", action="store_true", help="let sampled verdicts count towards a pass")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--no-cache", action="store_true", help="do not read or write element-store caches")
    s.add_argument("--quiet", action="store_true")
    s.add_argument("--only", action="append", metavar="TASK",
                   help="run only this task (repeatable; a trailing '/' selects a prefix)")
    s.set_defaults(func=_cmd_suite)

    c = sub.add_parser("check", help="analyse a user-supplied module")
    c.add_argument("--module", required=True, help="action matrices, one per generator")
    c.add_argument("--group", help="group generators (matrix file or 'perm N' file)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=10_000)
    c.add_argument("--report", metavar="OUT.json")
    c.add_argument("--json", action="store_true", help="also print the record as JSON")
    c.set_defaults(func=_cmd_check)

    k = sub.add_parser("cache", help="manage element-store caches")
    k.add_argument("action", choices=("build", "verify", "clear"))
    k.add_argument("recipe", help=f"recipe id ({', '.join(recipe_ids()[:4])}, ...) or 'all' for clear")
    k.set_defaults(func=_cmd_cache)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
