"""Command-line surface: graph and family I/O, gram factorization, and the
named reproducible experiments.

Graph sources anywhere a file is accepted:

* a path to a file in the digraph text format,
* ``expr:<constructor expression>``  (see the grammar in ``construct``),
* ``enc:<n>:<hex rows>``  (the single-line encoding experiment reports
  embed, so any report line can be replayed directly).

Exit codes: 0 all passed / resolved, 1 usage error, 2 unknowns present
(budget ran out somewhere), 3 a checked identity failed (a finding).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from multiprocessing import Pool

from . import construct, digraph, f2, solver
from .errors import ParseError, ResourceLimitError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNKNOWN = 2
EXIT_VIOLATION = 3


def resolve_graph_source(source: str) -> digraph.Digraph:
    """Load a graph from a file path, an expr: source, or an enc: encoding."""
    if source.startswith("expr:"):
        return construct.graph_from_expr(source[5:])
    if source.startswith("enc:"):
        return digraph.decode_digraph(source)
    with open(source, "r", encoding="utf-8") as fh:
        return digraph.parse_digraph(fh.read())


def _options_from_args(args) -> solver.SearchOptions:
    return solver.SearchOptions(
        backend=getattr(args, "backend", "assign"),
        max_k=args.max_k,
        budget=args.budget,
        even_weight_only=getattr(args, "even_weight_only", False),
        deterministic=args.deterministic,
    )


def cmd_inv(args) -> int:
    D = resolve_graph_source(args.graph)
    opts = _options_from_args(args)
    try:
        result = solver.solve(D, opts)
    except ResourceLimitError as exc:
        print(f"inv=unknown reason={exc}")
        return EXIT_UNKNOWN
    print(result.report(deterministic=args.deterministic))
    return EXIT_OK if result.resolved else EXIT_UNKNOWN


def cmd_verify(args) -> int:
    D = resolve_graph_source(args.graph)
    with open(args.family, "r", encoding="utf-8") as fh:
        F = digraph.parse_family(fh.read(), D.n)
    out = digraph.apply_family(D, F)
    order = digraph.is_acyclic(out)
    if order is not None:
        print("acyclic order=" + " ".join(map(str, order)))
        return EXIT_OK
    cycle = digraph.residual_cycle(out)
    print("cyclic cycle=" + "->".join(map(str, cycle + [cycle[0]])))
    return EXIT_VIOLATION


def cmd_gram(args) -> int:
    with open(args.matrix, "r", encoding="utf-8") as fh:
        M = f2.load_matrix(fh.read())
    fact = f2.gram_factor(M)
    dim = f2.min_gram_dim(M)
    if fact is None:
        print("infeasible reason=zero_diagonal_nonsingular")
        print(f"min_gram_dim={dim}")
        return EXIT_OK
    if not fact.verify():
        print("error: factorization failed verification", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"factored k={fact.k} verified=1")
    for col in fact.columns:
        print(str(col))
    print(f"min_gram_dim={dim}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Experiments


@dataclass(frozen=True)
class InstanceResult:
    encoding: str
    status: str  # PASS / FAIL / UNKNOWN
    detail: str


def _opts(payload_opts: dict) -> solver.SearchOptions:
    return solver.SearchOptions(**payload_opts)


def _inv(D: digraph.Digraph, opts: solver.SearchOptions) -> int | None:
    r = solver.inv_exact(D, opts)
    return r.value


def _check_thm13(inst: str, payload_opts: dict) -> InstanceResult:
    D = digraph.decode_digraph(inst)
    opts = _opts(payload_opts)
    k = _inv(D, opts)
    if k is None:
        return InstanceResult(inst, "UNKNOWN", "base value unresolved")
    joined = construct.dijoin(construct.c3(), D)
    got = _inv(joined, opts)
    if got is None:
        return InstanceResult(inst, "UNKNOWN", f"inv={k} dijoin unresolved")
    detail = f"inv={k} dijoin_inv={got} expect={k + 1}"
    return InstanceResult(inst, "PASS" if got == k + 1 else "FAIL", detail)


def _check_direction(inst: str, payload_opts: dict) -> InstanceResult:
    D = digraph.decode_digraph(inst)
    opts = _opts(payload_opts)
    ahead = _inv(construct.dijoin(construct.c3(), D), opts)
    behind = _inv(construct.dijoin(D, construct.c3()), opts)
    if ahead is None or behind is None:
        return InstanceResult(inst, "UNKNOWN", "a dijoin value is unresolved")
    detail = f"c3_first={ahead} c3_last={behind}"
    return InstanceResult(inst, "PASS" if ahead == behind else "FAIL", detail)


def _check_abnormal(inst: str, payload_opts: dict) -> InstanceResult:
    opts = _opts(payload_opts)
    D = construct.graph_from_expr(inst)
    triple = construct.k_join([construct.c3(), construct.c3(), D])
    joined = construct.dijoin(construct.c3(), D)
    left = _inv(triple, opts)
    right = _inv(joined, opts)
    if left is None or right is None:
        return InstanceResult(inst, "UNKNOWN", "a value is unresolved")
    detail = f"triple_join_inv={left} dijoin_inv={right} expect={right + 1}"
    return InstanceResult(inst, "PASS" if left == right + 1 else "FAIL", detail)


def _check_kjoin(inst: str, payload_opts: dict) -> InstanceResult:
    opts = _opts(payload_opts)
    tree = construct.parse_expr(inst)
    if not isinstance(tree, construct.JoinExpr):
        return InstanceResult(inst, "UNKNOWN", "instance must be a join expression")
    parts = [construct.eval_expr(p) for p in tree.parts]
    invs = [_inv(p, opts) for p in parts]
    if any(v is None for v in invs):
        return InstanceResult(inst, "UNKNOWN", "a part value is unresolved")
    special = [i for i, v in enumerate(invs) if v != 1]
    if len(special) > 1 or not all(v >= 1 for v in invs):
        return InstanceResult(inst, "UNKNOWN", "instance outside the rule's scope")
    j = special[0] if special else 0
    tight = solver.is_c3_tight(parts[j], opts)
    expect = sum(invs) - (1 if tight else 0)
    got = _inv(construct.k_join(parts), opts)
    if got is None:
        return InstanceResult(inst, "UNKNOWN", "join value unresolved")
    detail = f"parts={invs} tight={int(tight)} join_inv={got} expect={expect}"
    return InstanceResult(inst, "PASS" if got == expect else "FAIL", detail)


def _check_thm15(inst: str, payload_opts: dict) -> InstanceResult:
    D = digraph.decode_digraph(inst)
    opts = _opts(payload_opts)
    blown = construct.blow_up(D, [construct.c3()] * D.n)
    got = _inv(blown, opts)
    if got is None:
        return InstanceResult(inst, "UNKNOWN", "blow-up value unresolved")
    expect = D.n + 1
    detail = f"blowup_inv={got} expect={expect}"
    return InstanceResult(inst, "PASS" if got == expect else "FAIL", detail)


def _check_qn(inst: str, payload_opts: dict) -> InstanceResult:
    n, exact = (int(tok) for tok in inst.split(","))
    opts = _opts(payload_opts)
    Q = construct.qn(n)
    F = construct.qn_family(n)
    bound = (n - 1) // 2
    if digraph.is_acyclic(digraph.apply_family(Q, F)) is None:
        return InstanceResult(inst, "FAIL", f"n={n} pair family leaves a cycle")
    if len(F.sets) != bound:
        return InstanceResult(inst, "FAIL", f"n={n} family size {len(F.sets)} != {bound}")
    if not exact:
        return InstanceResult(inst, "PASS", f"n={n} family_ok bound={bound}")
    value = _inv(Q, opts)
    if value is None:
        return InstanceResult(inst, "UNKNOWN", f"n={n} exact value unresolved")
    detail = f"n={n} inv={value} bound={bound}"
    return InstanceResult(inst, "PASS" if value <= bound else "FAIL", detail)


def _check_bounds(inst: str, payload_opts: dict) -> InstanceResult:
    n = int(inst)
    opts = _opts(payload_opts)
    worst = 0
    for T in digraph.nonisomorphic_tournaments(n):
        v = _inv(T, opts)
        if v is None:
            return InstanceResult(inst, "UNKNOWN", f"n={n} a tournament unresolved")
        worst = max(worst, v)
    detail = f"n={n} invn={worst}"
    if n >= 4:
        low = (n - 1) / 2 - math.log2(n)
        ok = low <= worst <= n - 3
        detail += f" window=[{low:.2f},{n - 3}]"
        return InstanceResult(inst, "PASS" if ok else "FAIL", detail)
    return InstanceResult(inst, "PASS", detail)


def _check_conj_direction(inst: str, payload_opts: dict) -> InstanceResult:
    left_enc, right_enc = inst.split("|")
    L = digraph.decode_digraph(left_enc)
    R = digraph.decode_digraph(right_enc)
    opts = _opts(payload_opts)
    lr = _inv(construct.dijoin(L, R), opts)
    rl = _inv(construct.dijoin(R, L), opts)
    if lr is None or rl is None:
        return InstanceResult(inst, "UNKNOWN", "a dijoin value is unresolved")
    detail = f"lr={lr} rl={rl}"
    return InstanceResult(inst, "PASS" if lr == rl else "FAIL", detail)


def _build_thm13(args, opts: solver.SearchOptions) -> list[str]:
    instances = []
    for n in range(1, args.n_max + 1):
        for T in digraph.nonisomorphic_tournaments(n):
            v = solver.inv_exact(T, opts).value
            if v is not None and v >= 2 and v % 2 == 0:
                instances.append(digraph.encode_digraph(T))
    return instances


def _build_direction(args, opts) -> list[str]:
    return [
        digraph.encode_digraph(T)
        for n in range(1, args.n_max + 1)
        for T in digraph.nonisomorphic_tournaments(n)
    ]


def _build_abnormal(args, opts) -> list[str]:
    return ["tt(1)", "tt(3)", "c3"]


def _build_kjoin(args, opts) -> list[str]:
    return [
        "join(c3, c3)",
        "join(c3, c3, c3)",
        "join(c3, dijoin(c3, c3))",
        "join(dijoin(c3, c3), c3)",
    ]


def _build_thm15(args, opts) -> list[str]:
    instances = []
    for T in digraph.nonisomorphic_tournaments(3):
        if solver.inv_exact(T, opts).value == 1:
            instances.append(digraph.encode_digraph(T))
    return instances


def _build_qn(args, opts) -> list[str]:
    exact_limit = min(args.n_max, args.n_exact)
    return [f"{n},{int(n <= exact_limit)}" for n in range(1, args.n_max + 1)]


def _build_bounds(args, opts) -> list[str]:
    return [str(n) for n in range(1, args.n_max + 1)]


def _build_conj_direction(args, opts) -> list[str]:
    lefts = digraph.nonisomorphic_tournaments(args.left_n)
    rights = digraph.nonisomorphic_tournaments(args.right_n)
    return [
        digraph.encode_digraph(L) + "|" + digraph.encode_digraph(R)
        for L in lefts
        for R in rights
    ]


EXPERIMENTS = {
    "thm13": (
        _build_thm13,
        _check_thm13,
        ("n_max",),
        "dijoining a triangle onto any even-value tournament adds exactly one",
    ),
    "direction": (
        _build_direction,
        _check_direction,
        ("n_max",),
        "triangle dijoins have the same value from either side",
    ),
    "abnormal": (
        _build_abnormal,
        _check_abnormal,
        (),
        "[triangle, triangle, D] exceeds the triangle dijoin of D by one",
    ),
    "kjoin": (
        _build_kjoin,
        _check_kjoin,
        (),
        "k-join value is the part sum, minus one exactly on tight parts",
    ),
    "thm15": (
        _build_thm15,
        _check_thm15,
        (),
        "blowing triangles into a value-1 tournament lands one above its order",
    ),
    "qn": (
        _build_qn,
        _check_qn,
        ("n_max", "n_exact"),
        "the pair family decycles the reversed-path tournament within its bound",
    ),
    "bounds": (
        _build_bounds,
        _check_bounds,
        ("n_max",),
        "largest value over all tournaments of each order sits in the known window",
    ),
    "conj-direction": (
        _build_conj_direction,
        _check_conj_direction,
        ("left_n", "right_n"),
        "dijoin value is independent of direction (swept, not assumed)",
    ),
}


def _run_one(task: tuple[str, str, dict]) -> InstanceResult:
    name, inst, payload_opts = task
    checker = EXPERIMENTS[name][1]
    try:
        return checker(inst, payload_opts)
    except ResourceLimitError as exc:
        return InstanceResult(inst, "UNKNOWN", f"budget: {exc}")


def cmd_experiment(args) -> int:
    if args.name not in EXPERIMENTS:
        print(f"unknown experiment {args.name!r}; choices: "
              + " ".join(sorted(EXPERIMENTS)), file=sys.stderr)
        return EXIT_USAGE
    build, _, param_names, _ = EXPERIMENTS[args.name]
    opts = solver.SearchOptions(
        max_k=args.max_k, budget=args.budget, deterministic=args.deterministic
    )
    payload_opts = {
        "max_k": args.max_k,
        "budget": args.budget,
        "deterministic": args.deterministic,
    }
    start = time.perf_counter()
    instances = build(args, opts)
    tasks = [(args.name, inst, payload_opts) for inst in instances]
    if args.jobs > 1 and len(tasks) > 1:
        with Pool(args.jobs) as pool:
            results = pool.map(_run_one, tasks)
    else:
        results = [_run_one(t) for t in tasks]

    params = [f"experiment={args.name}"]
    for attr in param_names:
        params.append(f"{attr.replace('_', '-')}={getattr(args, attr)}")
    print(" ".join(params))
    for r in results:
        print(f"instance {r.encoding} {r.detail} : {r.status}")
    npass = sum(r.status == "PASS" for r in results)
    nfail = sum(r.status == "FAIL" for r in results)
    nunk = sum(r.status == "UNKNOWN" for r in results)
    print(f"total={len(results)} pass={npass} fail={nfail} unknown={nunk}")
    if not args.deterministic:
        print(f"elapsed={time.perf_counter() - start:.2f}s")
    if nfail:
        return EXIT_VIOLATION
    if nunk:
        return EXIT_UNKNOWN
    return EXIT_OK


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-k", type=int, default=solver.MAX_K,
                   help="largest family size to try")
    p.add_argument("--budget", type=int, default=None,
                   help="search node budget (reproducible, not wall time)")
    p.add_argument("--deterministic", action="store_true",
                   help="suppress timings so output is bit-identical across runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invlab",
        description="Exact inversion numbers of oriented graphs, with "
        "certified witnesses and identity sweep experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_inv = sub.add_parser("inv", help="compute the inversion number of a graph")
    p_inv.add_argument("graph", help="graph file, expr:<expression>, or enc:<...>")
    p_inv.add_argument("--backend", choices=solver.BACKENDS, default="assign")
    p_inv.add_argument("--even-weight-only", action="store_true",
                       help="restrict vertex vectors to even weight")
    _add_search_flags(p_inv)
    p_inv.set_defaults(func=cmd_inv)

    p_ver = sub.add_parser("verify", help="apply a family and report the verdict")
    p_ver.add_argument("graph")
    p_ver.add_argument("family", help="family file, one set per line")
    p_ver.set_defaults(func=cmd_verify)

    p_gram = sub.add_parser("gram", help="factor a symmetric GF(2) matrix")
    p_gram.add_argument("matrix", help="matrix file")
    p_gram.set_defaults(func=cmd_gram)

    p_exp = sub.add_parser("experiment", help="run a named sweep")
    p_exp.add_argument("name", help="one of: " + " ".join(sorted(EXPERIMENTS)))
    p_exp.add_argument("--n-max", type=int, default=5,
                       help="largest instance order for sweeps")
    p_exp.add_argument("--n-exact", type=int, default=7,
                       help="largest order solved exactly (qn sweep)")
    p_exp.add_argument("--left-n", type=int, default=3)
    p_exp.add_argument("--right-n", type=int, default=3)
    p_exp.add_argument("--jobs", type=int, default=1,
                       help="worker processes; report order is stable")
    _add_search_flags(p_exp)
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
