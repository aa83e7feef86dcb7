"""Command-line front end.

Instance arguments are files in the ``n m`` / positions / edges format
(``-`` reads stdin).  Commands that only need the graph ignore positions.
Exit codes: 0 success, 1 a hard check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from .graph_core import InstanceError, read_instance, write_instance

log = logging.getLogger("linerecon")


def _load(path):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return read_instance(text)


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=False, default=str) + "\n")


def _header(**params):
    return "".join(f"# {k}={v}\n" for k, v in params.items())


# --------------------------------------------------------------------------
# handlers


def cmd_rigid_check(a, out):
    from .rigidity import find_rigidity_certificate
    eg = _load(a.instance)
    v = find_rigidity_certificate(eg.graph, a.budget)
    res = {"globally_rigid": v.globally_rigid, "nodes": v.nodes, "exhausted": v.exhausted}
    if v.certificate is not None:
        res["certificate"] = v.certificate.to_json()
    _emit(res, out)
    return 0


def cmd_recon(a, out):
    from . import reconstruct as R
    eg = _load(a.instance)
    if a.what == "subsets":
        rep = R.maximal_reconstructible_subsets(eg, a.budget)
        _emit({"maximal_subsets": rep.maximal_subsets, "largest": rep.largest,
               "exhausted": rep.exhausted, "route": rep.route,
               "unknown_pairs": sorted(rep.unknown_pairs)}, out)
        return 0
    if a.what == "pairs":
        rep = R.maximal_reconstructible_subsets(eg, a.budget)
        _emit({"reconstructible_pairs": sorted(rep.reconstructible_pairs),
               "unknown_pairs": sorted(rep.unknown_pairs), "exhausted": rep.exhausted}, out)
        return 0
    if a.u is None or a.v is None:
        raise SystemExit("recon witness needs --u and --v")
    w = R.extract_witness(eg, a.u, a.v, budget=a.budget)
    chk = R.validate_witness(eg, w)
    _emit({**w.to_json(), "valid": chk.ok, "reason": chk.reason}, out)
    return 0 if chk.ok else 1


def cmd_decomp(a, out):
    from . import decompose as D
    eg = _load(a.instance)
    g = eg.graph
    if a.what == "core":
        verts = D.two_core_vertices(g)
        _emit({"vertices": verts, "edges": [list(e) for e in D.two_core(g).edges]}, out)
    elif a.what == "kernel":
        _emit(D.kernelize(g).to_json(), out)
    elif a.what == "phi":
        r = D.expansion(g, a.mode, seed=a.seed)
        _emit({"phi": str(r.phi), "witness_set": list(r.witness_set), "exact": r.exact}, out)
    else:
        if a.n is None:
            a.n = g.n
        r = D.good_graph_check(g, a.n, Fraction(a.eps), Fraction(a.gamma), seed=a.seed)
        _emit({"good": r.good, "exact": r.exact,
               "conditions": {k: {"holds": c.holds, "exact": c.exact, "witness": c.witness,
                                  "detail": c.detail} for k, c in r.conditions.items()},
               "cond6_literal": r.cond6_literal.holds}, out)
    return 0


def cmd_extract(a, out):
    from . import extract as X
    eg = _load(a.instance)
    if a.what == "weakbt":
        _, trace = X.extract_weakbt(eg.graph, a.budget)
    else:
        _, trace = X.extract_dense(eg.graph, Fraction(a.eps), a.budget)
    out.write(trace.to_json_lines() + "\n")
    return 0 if trace.certified and trace.bound_ok else 1


def cmd_sim(a, out):
    from . import random_models as M
    if a.what == "gnp":
        if a.p is None:
            raise SystemExit("sim gnp needs --p")
        g = M.sample_gnp(a.n, a.p, a.seed)
        params = dict(model="gnp", n=a.n, p=a.p, seed=a.seed, style=a.style)
    else:
        lam = a.lam if a.lam is not None else 1 + a.eps
        dp = M.DlpParams(lam, a.n)
        smp = M.sample_dlp(dp, a.seed)
        g = smp.graph
        params = dict(model="dlp", n=a.n, lam=lam, mu=dp.mu,
                      seed=a.seed, Lambda=smp.Lambda, kernel_vertices=smp.kernel.n,
                      kernel_edges=smp.kernel.m, empty=smp.empty, style=a.style)
    eg = M.random_embedding(g, a.style, a.seed, window=max(2 * g.n, 1))
    out.write(_header(**params) + write_instance(eg))
    return 0


def cmd_counterexample(a, out):
    from . import counterexample as CE
    inst = CE.build_hypercube(a.k)
    rep = CE.verify_counterexample(inst, a.mode)
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(_header(k=a.k) + write_instance(inst.eg))
    _emit({"k": a.k, "mode": a.mode, "vertices": inst.eg.n, "edges": inst.eg.graph.m,
           "non_edges": rep.non_edges, "checked": rep.checked, "ok": rep.ok,
           "failures": rep.failures[:20]}, out)
    return 0 if rep.ok else 1


def _exp_config(a):
    from .experiments import ExperimentConfig
    over = {"model": a.model, "n_grid": a.n_grid, "eps_grid": a.eps_grid, "seeds": a.seeds,
            "style": a.style, "budget": a.budget, "output": a.output, "master_seed": a.master_seed,
            "gamma": a.gamma, "threads": a.threads}
    text = open(a.config, encoding="utf-8").read() if a.config else ""
    return ExperimentConfig.from_text(text, **over)


def cmd_exp(a, out):
    from . import experiments as E
    cfg = _exp_config(a)
    if a.what == "giant":
        rows = E.run_giant_experiment(cfg)
        cols = E.GIANT_COLUMNS
        hard = any(r["status"] != "ok" for r in rows)
    else:
        rows = E.run_lemma_checks(cfg)
        cols = E.LEMMA_COLUMNS
        hard = any(r["status"] != "ok" for r in rows)
        hard |= any(not r["passed"] for r in rows
                    if r["check"].startswith("witness:") or r["check"] == "kernel_max_degree")
    if cfg.output in ("-", ""):
        E.write_csv(rows, cols, out)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            E.write_csv(rows, cols, fh)
    return 1 if hard else 0


# --------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="linerecon", description="Exact distance reconstruction on the line.",
                                allow_abbrev=False)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    rg = sub.add_parser("rigid", help="global rigidity").add_subparsers(dest="what", required=True)
    rc = rg.add_parser("check")
    rc.add_argument("instance")
    rc.add_argument("--budget", type=int, default=1 << 22)
    rc.set_defaults(func=cmd_rigid_check)

    rp = sub.add_parser("recon", help="reconstructibility")
    rp.add_argument("what", choices=["pairs", "subsets", "witness"])
    rp.add_argument("instance")
    rp.add_argument("--u", type=int)
    rp.add_argument("--v", type=int)
    rp.add_argument("--budget", type=int, default=1 << 20)
    rp.set_defaults(func=cmd_recon)

    dp = sub.add_parser("decomp", help="2-core, kernel, expansion, good-graph check")
    dp.add_argument("what", choices=["core", "kernel", "phi", "good"])
    dp.add_argument("instance")
    dp.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    dp.add_argument("--seed", type=int, default=0)
    dp.add_argument("--n", type=int)
    dp.add_argument("--eps", default="1/10")
    dp.add_argument("--gamma", default="1/10")
    dp.set_defaults(func=cmd_decomp)

    xp = sub.add_parser("extract", help="globally rigid subgraphs")
    xp.add_argument("what", choices=["weakbt", "dense"])
    xp.add_argument("instance")
    xp.add_argument("--eps", default="1/4")
    xp.add_argument("--budget", type=int, default=1 << 22)
    xp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("sim", help="sample a random instance")
    sp.add_argument("what", choices=["gnp", "dlp"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float)
    sp.add_argument("--lam", type=float)
    sp.add_argument("--eps", type=float, default=0.3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--style", default="generic",
                    choices=["generic", "integer-range", "arithmetic-progression"])
    sp.set_defaults(func=cmd_sim)

    cp = sub.add_parser("counterexample", help="hypercube instance")
    cp.add_argument("family", choices=["hypercube"])
    cp.add_argument("--k", type=int, required=True)
    cp.add_argument("--mode", choices=["direct", "oracle"], default="direct")
    cp.add_argument("--out")
    cp.set_defaults(func=cmd_counterexample)

    ep = sub.add_parser("exp", help="experiment sweeps (CSV)")
    ep.add_argument("what", choices=["giant", "lemmas"])
    ep.add_argument("--config")
    ep.add_argument("--model", choices=["gnp", "dlp"])
    ep.add_argument("--n-grid", dest="n_grid")
    ep.add_argument("--eps-grid", dest="eps_grid")
    ep.add_argument("--seeds", type=int)
    ep.add_argument("--style")
    ep.add_argument("--budget", type=int)
    ep.add_argument("--output")
    ep.add_argument("--master-seed", dest="master_seed", type=int)
    ep.add_argument("--gamma", type=float)
    ep.add_argument("--threads", type=int)
    ep.set_defaults(func=cmd_exp)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
