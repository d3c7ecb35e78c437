"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (rejected certificate, allowed
configuration), 2 usage or input error, 3 search guard exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import blowup, embedding, formats, lagrangian
from .errors import CapacityError, DomainError, FormatError
from .rational import fmt, fmt_approx
from .weighted_graph import CliqueWeighting, assign_clique_weights, total_weight

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

FORMATS_HELP = """file formats (blank lines and # comments ignored, rationals as p/q):
  graph      n <count>, then '<i> <j> <p>/<q>' per edge (0-based)
  matrix     m <dim>, then dim rows of dim rationals (symmetric, zero diagonal)
  family     optional 'r_max <k>', then blocks 'pattern r=<r>' + '<i> <j> <p>/<q>'
             (unlisted pairs have threshold 0)
  config     't <t>', 'p <p>', then '<i> <j> <p>/<q>' thresholds (omitted pair = unusable)
  weighting  optional 'tail constant|turan', then '<r> <p>/<q>' per clique order
  cert       'lambda <p/q>', then 'block <id> <dim>' + dim rows per type block
  solution   as cert, decimals allowed and lambda optional (numeric solver output)
cases: rho512, rho614, rho411, p6(<p>), and mantel for flag commands"""


def _out(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _vec(xs) -> str:
    return "(" + ", ".join(fmt(x) for x in xs) + ")"


# ---------------------------------------------------------------- commands

def cmd_lagrangian(args) -> int:
    a = formats.read_file(args.matrix, formats.parse_matrix)
    res = lagrangian.lagrangian_exact(a, guard=args.guard)
    _out(f"value {fmt_approx(res.value)}")
    _out(f"support {' '.join(str(i) for i in res.support)}")
    _out(f"x {_vec(res.x)}")
    _out(f"kkt {'verified' if res.kkt_verified else 'FAILED'}")
    if args.replicator:
        val, _ = lagrangian.lagrangian_replicator(a, starts=args.starts, seed=args.seed)
        _out(f"replicator {val:.12f}")
    return EXIT_OK


def cmd_weight(args) -> int:
    g = formats.read_file(args.graph, formats.parse_graph)
    if args.turan or args.weighting:
        cw = CliqueWeighting.turan() if args.turan else formats.read_file(args.weighting,
                                                                          formats.parse_weighting)
        g = assign_clique_weights(g, cw)
    _out(f"vertices {g.n}")
    _out(f"edges {len(g.weights)}")
    _out(f"weight {fmt_approx(total_weight(g))}")
    return EXIT_OK


def _print_solution(sol) -> None:
    _out(f"d {fmt_approx(sol.density)}")
    _out(f"t {sol.t}")
    _out(f"x {_vec(sol.x)}")
    for (i, j), w in sorted(sol.f.items()):
        _out(f"f {i} {j} {fmt(w)}")
    _out(f"lower_bound_only {'yes' if sol.lower_bound_only else 'no'}")


def cmd_dvalue(args) -> int:
    fam = formats.read_file(args.family, formats.parse_family)
    alphabet = formats.parse_alphabet(args.alphabet)
    try:
        sol = blowup.optimize_dF(fam, alphabet, args.tcap, node_budget=args.budget)
    except CapacityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if exc.best is not None:
            _out("# best so far (lower bound only)")
            _print_solution(exc.best)
        return EXIT_CAPACITY
    _out(f"r_max {fam.r_max}")
    _print_solution(sol)
    return EXIT_OK


def cmd_embed(args) -> int:
    cfg = formats.read_file(args.config, formats.parse_config)
    emb = embedding.max_embeddable(cfg, guard=args.guard)
    forbidden = emb.size >= args.q
    _out(f"size {emb.size}")
    _out(f"verdict {'FORBIDDEN' if forbidden else 'ALLOWED'} (q={args.q})")
    _out(f"order {' '.join(str(i) for i in emb.order)}")
    for i in emb.order:
        later = " ".join(str(j) for j in emb.later_orders.get(i, ()))
        _out(f"cluster {i} contributes {emb.contributions[i]} via [{later}]")
    _out(f"contributions {','.join(str(c) for c in emb.contributions)}")
    return EXIT_OK if forbidden else EXIT_FALSE


def cmd_tables(args) -> int:
    case, p = embedding.parse_case(args.case)
    table = embedding.discretization(case, p)
    _out(f"case {table.case}")
    _out("color\tlower\tupper\trule")
    for row in table.rows:
        _out(f"{row.color}\t{fmt(row.lower)}\t{fmt(row.upper)}\t{row.rule}")
    if table.cap != 1:
        _out(f"cap {fmt(table.cap)} (higher densities are forbidden outright)")
    pp, q = embedding.case_parameters(case, p)
    _out(f"p {pp} q {q}")
    for named in embedding.forbidden_configs(case, p):
        emb = embedding.max_embeddable(named.config)
        th = " ".join(f"{i}{j}:{fmt(a)}" for (i, j), a in named.config.thresholds.items())
        _out(f"config {named.name} t={named.config.t} [{th}] size {emb.size} "
             f"{'FORBIDDEN' if emb.size >= q else 'ALLOWED'}")
    return EXIT_OK


def cmd_expand(args) -> int:
    case, p = embedding.parse_case(args.case)
    if args.complete:
        pats = embedding.complete_forbidden_set(case, p, max_order=args.max_order)
    else:
        pats = embedding.colored_forbidden_set(case, p)
    _out(f"patterns {len(pats)}")
    for g in pats:
        _out(g.label())
    return EXIT_OK


def _flag_problem(args):
    from .flags.sdp import case_problem, mantel_problem
    if args.case == "mantel":
        return mantel_problem()
    case, p = embedding.parse_case(args.case)
    return case_problem(case, p, N=args.N, complete=args.complete)


def cmd_flag(args) -> int:
    from .flags import certificate as cert_mod
    from .flags.sdp import build_sdp
    from .flags.sdpa import export_sdpa

    inst = build_sdp(_flag_problem(args))
    if args.action == "build":
        prob = inst.problem
        _out(f"problem {prob.name} k={prob.k} N={prob.N} forbidden={len(prob.forbidden)}")
        _out(f"objective {_vec(prob.objective)}")
        _out(f"graphs {len(inst.graphs)}")
        if inst.infeasible:
            _out("infeasible: no admissible graph")
            return EXIT_OK
        _out(f"blocks {' '.join(str(d) for d in inst.block_sizes())}")
        for b, blk in enumerate(inst.blocks):
            _out(f"type {b} {blk.type_label()} flags {blk.dim}")
        return EXIT_OK
    if args.action == "export":
        if not args.output:
            raise DomainError("flag export needs -o <file.sdpa>")
        data = export_sdpa(inst, args.output)
        _out(f"wrote {args.output}: {data.m} variables, blocks {' '.join(map(str, data.block_struct))}")
        return EXIT_OK
    if args.action == "round":
        if not args.solution or not args.output:
            raise DomainError("flag round needs --solution <file> and -o <cert>")
        num = formats.read_file(args.solution,
                                lambda t, source: cert_mod.parse_certificate(t, source, numeric=True))
        cert = cert_mod.round_solution(inst, num.blocks, args.limit)
        cert_mod.write_certificate(cert, args.output)
        _out(f"lambda {fmt_approx(cert.bound, 10)}")
        _out(f"wrote {args.output}")
        return EXIT_OK
    # verify
    if not args.cert:
        raise DomainError("flag verify needs --cert <file>")
    cert = formats.read_file(args.cert, cert_mod.parse_certificate)
    verdict = cert_mod.verify_certificate(inst, cert)
    if verdict.accepted:
        _out(f"ACCEPTED lambda {fmt_approx(verdict.bound, 10)}")
        return EXIT_OK
    _out(f"REJECTED {verdict.reason}")
    return EXIT_FALSE


def cmd_construct(args) -> int:
    name, params = blowup.parse_construction_name(args.name)
    if args.p is not None:
        params.setdefault("p", args.p)
    spec = blowup.named_spec(name, **params)
    g = blowup.make_blowup(spec, args.n)
    from .weighted_graph import part_sizes
    _out(f"construction {args.name}")
    _out(f"parts {' '.join(str(s) for s in part_sizes(spec.x, args.n))}")
    for (i, j), w in spec.f.items():
        _out(f"f {i} {j} {fmt(w)}")
    _out(f"density {fmt_approx(total_weight(g))}")
    _out(f"limit {fmt_approx(spec.limit_density())}")
    if args.output:
        Path(args.output).write_text(formats.format_graph(g))
        _out(f"wrote {args.output}")
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report
    for path in write_report(Path(args.out), quick=args.quick):
        _out(f"wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wturan", description="Weighted Turán and cluster-graph toolkit.",
                                 epilog=FORMATS_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is serial")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lagrangian", help="exact graph Lagrangian of a matrix file")
    s.add_argument("matrix")
    s.add_argument("--guard", type=int, default=lagrangian.DEFAULT_EXACT_GUARD)
    s.add_argument("--replicator", action="store_true", help="also run replicator dynamics")
    s.add_argument("--starts", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_lagrangian)

    s = sub.add_parser("weight", help="scaled total weight of a graph file")
    s.add_argument("graph")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--turan", action="store_true", help="reweight edges by Turán clique weights")
    g.add_argument("--weighting", help="reweight edges by a clique-weighting file")
    s.set_defaults(func=cmd_weight)

    s = sub.add_parser("dvalue", help="blow-up extremal value d(F) of a family file")
    s.add_argument("family")
    s.add_argument("--alphabet", required=True, help="comma-separated weights, e.g. 0,1/5,1")
    s.add_argument("--tcap", type=int, required=True)
    s.add_argument("--budget", type=int, default=blowup.DEFAULT_NODE_BUDGET)
    s.set_defaults(func=cmd_dvalue)

    s = sub.add_parser("embed", help="guaranteed clique size of a cluster configuration")
    s.add_argument("config")
    s.add_argument("-q", type=int, required=True)
    s.add_argument("--guard", type=int, default=embedding.EMBED_GUARD)
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("tables", help="discretisation table and configurations of a case")
    s.add_argument("--case", required=True)
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("expand", help="coloured forbidden patterns of a case")
    s.add_argument("--case", required=True)
    s.add_argument("--complete", action="store_true",
                   help="all minimal forbidden colourings, not only the listed configurations")
    s.add_argument("--max-order", type=int, default=4)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("flag", help="flag-algebra SDP: build, export, round, verify")
    s.add_argument("action", choices=["build", "export", "round", "verify"])
    s.add_argument("--case", required=True)
    s.add_argument("--N", type=int, default=None, help="flag order (3, 4 or 5)")
    s.add_argument("--complete", action="store_true")
    s.add_argument("-o", "--output")
    s.add_argument("--cert")
    s.add_argument("--solution")
    s.add_argument("--limit", type=int, default=10 ** 6, help="rounding denominator")
    s.set_defaults(func=cmd_flag)

    s = sub.add_parser("construct", help="density of a named blow-up construction on n vertices")
    s.add_argument("name", help="rho512, rho614, rho411, conj_ptr(p,t,r), bipartite_p6(p), tripartite_p6(p)")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--p", type=int)
    s.add_argument("-o", "--output", help="also write the graph file")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("report", help="CSV tables and PNG figures of closed forms and constructions")
    s.add_argument("--out", required=True)
    s.add_argument("--quick", action="store_true", help="coarser grids")
    s.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAPACITY
    except (FormatError, DomainError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
