"""Command-line entry point: ``eqfree <verb> [options] INSTANCE``.

Decision verbs print ``YES`` or ``NO`` on the first line, followed by a
witness or the bound/certificate used. Exit status is 0 whenever the
computation ran, 1 on any error.
"""

from __future__ import annotations

import argparse
import sys

from . import equaliser, rational, reductions, stallings
from .errors import EqfreeError
from .genericity import CSV_HEADER, ExperimentConfig, run_experiment
from .instances import InstanceFile, parse_instance, render_instance
from .words import Alphabet, Homomorphism, apply_hom


def _load(path: str) -> InstanceFile:
    if path == "-":
        return parse_instance(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _pick_map(args, inst: InstanceFile) -> Homomorphism:
    return inst.pcp.g if args.map == "g" else inst.pcp.h


def _subgroup(args):
    """Generators and ambient alphabet from --gens/--alphabet or from Im(map)."""
    if args.gens:
        if not args.alphabet:
            raise EqfreeError("--gens needs --alphabet")
        alphabet = Alphabet(args.alphabet.split())
        return [alphabet.parse(w) for w in args.gens], alphabet
    if not args.instance:
        raise EqfreeError("give an instance file or --gens")
    f = _pick_map(args, _load(args.instance))
    return list(f.images), f.codomain


def _print_core(core) -> None:
    print(f"vertices: {core.n_vertices}")
    print(f"rank: {core.rank}")
    for s, i, d in core.edges:
        print(f"{s} -{core.alphabet.names[i]}-> {d}")


def cmd_fold(args):
    gens, alphabet = _subgroup(args)
    _print_core(stallings.core_of(gens, alphabet=alphabet))


def cmd_rank(args):
    gens, alphabet = _subgroup(args)
    print(stallings.rank(stallings.core_of(gens, alphabet=alphabet)))


def cmd_member(args):
    gens, alphabet = _subgroup(args)
    core = stallings.core_of(gens, alphabet=alphabet)
    w = alphabet.parse(args.word)
    if stallings.member(core, w):
        print("YES")
        print(f"expression: {core.preimage(w)}")
    else:
        print("NO")


def cmd_basis(args):
    gens, alphabet = _subgroup(args)
    for b in stallings.basis(stallings.core_of(gens, alphabet=alphabet)):
        print(b)


def cmd_inject(args):
    f = _pick_map(args, _load(args.instance))
    if stallings.is_injective(f):
        print("YES")
        print(f"rank of image: {stallings.rank(stallings.image_core(f))}")
    else:
        print("NO")
        print(f"kernel element: {stallings.kernel_witness(f)}")


def cmd_kernel_witness(args):
    f = _pick_map(args, _load(args.instance))
    if stallings.is_injective(f):
        print("NO")
        print("map is injective")
    else:
        print("YES")
        print(stallings.kernel_witness(f))


def cmd_common_kernel(args):
    inst = _load(args.instance).pcp
    try:
        w = stallings.common_kernel_witness(inst.g, inst.h)
    except EqfreeError as exc:
        print("NO")
        print(exc)
        return
    print("YES")
    print(w)


def _as_gpcp(inst: InstanceFile) -> reductions.GpcpInstance:
    i = inst.instance
    if isinstance(i, reductions.GpcpInstance):
        return i
    if isinstance(i, reductions.PcpInstance):
        return reductions.pcp_as_gpcp(i)
    raise EqfreeError("expected a PCP or GPCP instance")


def cmd_reduce_gpcp(args):
    gi = _as_gpcp(_load(args.instance))
    out = reductions.gpcp_to_el(gi) if args.el else reductions.gpcp_to_pcp(gi)
    sys.stdout.write(render_instance(out))


def cmd_check(args):
    inst = _load(args.instance).instance
    base = inst if isinstance(inst, reductions.PcpInstance) else inst.base
    x = base.sigma.parse(args.word)
    ok = reductions.verify_solution(inst, x, allow_trivial=args.allow_trivial)
    print("YES" if ok else "NO")
    print(f"g(x) = {apply_hom(base.g, x)}")
    print(f"h(x) = {apply_hom(base.h, x)}")


def cmd_decompose(args):
    gi = _as_gpcp(_load(args.instance))
    reduced = reductions.gpcp_to_pcp(gi)
    x = reduced.sigma.parse(args.word)
    for f in reductions.decompose_solution(reduced, x):
        print(f"{f.kind.value}: {f.word}  (core {f.core})")


def cmd_eq_search(args):
    inst = _load(args.instance).instance
    if isinstance(inst, reductions.GpcpInstance):
        sols = equaliser.search_solutions(
            inst.g, inst.h, args.bound, inst.u1, inst.u2, inst.v1, inst.v2, include_trivial=args.allow_trivial
        )
    else:
        base = inst if isinstance(inst, reductions.PcpInstance) else inst.base
        sols = equaliser.search_solutions(base.g, base.h, args.bound, include_trivial=args.allow_trivial)
        if isinstance(inst, reductions.ElInstance):
            sols = [x for x in sols if reductions.verify_solution(inst, x, allow_trivial=True)]
    if not sols:
        print("NO")
        print(f"no solution of length <= {args.bound}")
        return
    print("YES")
    shown = sols if args.all else sols[:1]
    for x in shown:
        print(x)
    if not args.all and len(sols) > 1:
        print(f"({len(sols)} solutions of length <= {args.bound}; use --all to list)")


def cmd_eq_basis(args):
    base = _load(args.instance).pcp
    out = equaliser.basis_from_rank(base.g, base.h, args.rank, budget=args.budget)
    # the basis is the witness; rank 0 yields the empty basis of the trivial equaliser
    print("YES")
    if not out:
        print("basis: [] (trivial equaliser)")
    for b in out:
        print(b)


def _eq_core(base, args):
    if args.rank is not None:
        gens = equaliser.basis_from_rank(base.g, base.h, args.rank, budget=args.budget)
        source = f"rank {args.rank}"
    elif args.bound is not None:
        gens = list(equaliser.search_solutions(base.g, base.h, args.bound))
        source = f"solutions of length <= {args.bound}"
    else:
        raise EqfreeError("give --rank or --bound")
    return stallings.core_of(gens, alphabet=base.sigma), source


def _constrained(base, automaton, args):
    core, source = _eq_core(base, args)
    w = rational.pcp_r_witness(core, automaton)
    if w is None:
        print("NO")
        print(f"equaliser from {source}")
    else:
        print("YES")
        print(w)


def cmd_pcp_r(args):
    inst = _load(args.instance)
    if inst.constraint is None:
        raise EqfreeError("instance has no 'constraint:' line")
    _constrained(inst.pcp, inst.constraint_automaton, args)


def cmd_el_check(args):
    inst = _load(args.instance).instance
    if not isinstance(inst, reductions.ElInstance):
        raise EqfreeError("instance has no 'el:' line")
    automaton = rational.el_automaton(inst.base.sigma, inst.a, inst.omega, inst.b)
    _constrained(inst.base, automaton, args)


def cmd_ci_check(args):
    gi = _as_gpcp(_load(args.instance))
    res = reductions.ci_hypotheses_check(gi, args.bound)
    if res.refuted_by is not None:
        print("NO")
        print(f"refuted by x = {res.refuted_by}")
    else:
        print("YES")
        if res.certified:
            print("certified: images conjugacy separated and one map injective")
        else:
            print(f"no violation of length <= {args.bound}; separated = {res.separated}")


def cmd_generic(args):
    cfg = ExperimentConfig(args.m, args.k, args.n, args.trials, args.seed, sphere=args.sphere)
    stats = run_experiment(cfg, workers=args.workers)
    if not args.no_header:
        print(CSV_HEADER)
    print(stats.csv_row())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqfree", description="Equalisers of free group homomorphisms.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, func, instance=True, **kw):
        sp = sub.add_parser(name, **kw)
        if instance:
            sp.add_argument("instance", help="instance file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    def subgroup_verb(name, func, help):
        sp = verb(name, func, instance=False, help=help)
        sp.add_argument("instance", nargs="?", help="instance file; the subgroup is the image of --map")
        sp.add_argument("--map", choices=("g", "h"), default="g")
        sp.add_argument("--gens", action="append", help="subgroup generator (repeatable)")
        sp.add_argument("--alphabet", help="ambient generator names, space separated")
        return sp

    def map_verb(name, func, help):
        sp = verb(name, func, help=help)
        sp.add_argument("--map", choices=("g", "h"), default="g")
        return sp

    subgroup_verb("fold", cmd_fold, "print the core graph of a subgroup")
    subgroup_verb("rank", cmd_rank, "rank of a subgroup")
    subgroup_verb("member", cmd_member, "subgroup membership").add_argument("--word", required=True)
    subgroup_verb("basis", cmd_basis, "free basis of a subgroup")
    map_verb("inject", cmd_inject, "is the map injective?")
    map_verb("kernel-witness", cmd_kernel_witness, "non-trivial kernel element")
    verb("common-kernel", cmd_common_kernel, help="non-trivial element killed by both maps")
    verb("reduce-gpcp", cmd_reduce_gpcp, help="print the marker-reduced PCP instance").add_argument(
        "--el", action="store_true", help="emit the extreme-letter instance"
    )
    sp = verb("check", cmd_check, help="verify a candidate solution")
    sp.add_argument("--word", required=True)
    sp.add_argument("--allow-trivial", action="store_true")
    verb("decompose", cmd_decompose, help="split a reduced-instance solution into marker factors").add_argument(
        "--word", required=True
    )
    sp = verb("eq-search", cmd_eq_search, help="exhaustive solution search up to a bound")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--allow-trivial", action="store_true")
    sp = verb("eq-basis", cmd_eq_basis, help="equaliser basis from its rank")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--budget", type=int, default=equaliser.DEFAULT_BUDGET)
    for name, func, help in (
        ("pcp-r", cmd_pcp_r, "solution inside the rational constraint"),
        ("el-check", cmd_el_check, "solution of the extreme-letter shape"),
    ):
        sp = verb(name, func, help=help)
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--rank", type=int)
        g.add_argument("--bound", type=int)
        sp.add_argument("--budget", type=int, default=equaliser.DEFAULT_BUDGET)
    verb("ci-check", cmd_ci_check, help="bounded check of the conjugacy hypotheses").add_argument(
        "--bound", type=int, required=True
    )
    sp = verb("generic", cmd_generic, instance=False, help="Monte-Carlo genericity experiment")
    sp.add_argument("-m", type=int, required=True, help="domain generators")
    sp.add_argument("-k", type=int, required=True, help="codomain generators")
    sp.add_argument("-n", type=int, required=True, help="maximum image length")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--sphere", action="store_true", help="sample images of length exactly n")
    sp.add_argument("--no-header", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        args.func(args)
    except (EqfreeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
