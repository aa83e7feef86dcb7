"""Time the hot kernels under both backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each backend runs in a fresh interpreter (the backend is fixed at import
time).  Numba timings exclude the first, compiling call.
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ["realize", "min_ratio_set", "first_sparse_cut", "nac_search", "hypercube_classes"]


def _setup():
    import numpy as np

    from linerecon.graph_core import EmbeddedGraph, Graph
    from linerecon.random_models import sample_gnp
    from linerecon.reconstruct import _Search
    from linerecon.rigidity import _branch_order

    rng = np.random.default_rng(0)
    # cycle-rich 2-connected instance with small positions (many candidates survive)
    n = 34
    edges = {(i, (i + 1) % n) for i in range(n)}
    while len(edges) < n + 3:
        a, b = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        edges.add((a, b))
    eg = EmbeddedGraph(Graph(n, sorted(edges)), [int(x) for x in rng.permutation(2 * n)[:n]])
    search = _Search(eg, range(n))

    dense = Graph(20, [(u, v) for u in range(20) for v in range(u + 1, 20) if rng.random() < 0.3])
    # a globally rigid G(40, 0.15) draw: the colouring search has to exhaust its tree
    rigid = sample_gnp(40, 0.15, seed=3)
    order = [rigid.edges[i] for i in _branch_order(rigid)]
    return search, dense, (order, rigid.n)


def run_backend(repeat):
    from linerecon import kernels
    from linerecon._accel import backend

    search, dense, order = _setup()
    deg = dense.degrees
    calls = {
        "realize": lambda: kernels.realize(search.f_ord, search.first_nbr, search.first_len, search.chk_ptr,
                                           search.chk_idx, search.chk_len, 1 << 22, 0),
        "min_ratio_set": lambda: kernels.min_ratio_set(dense.nbr_masks, deg, deg, dense.n // 2,
                                                       dense.edge_array()),
        "first_sparse_cut": lambda: kernels.first_sparse_cut(dense.nbr_masks, deg, deg, dense.n // 2, 0, 1,
                                                             dense.edge_array()),
        "nac_search": lambda: kernels.nac_search(order[0], order[1], 1 << 24),
        "hypercube_classes": lambda: kernels.hypercube_classes(12),
    }
    out = {"backend": backend(), "times": {}}
    for name in WORKLOADS:
        calls[name]()  # warm-up / compile
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            calls[name]()
            best = min(best, time.perf_counter() - t0)
        out["times"][name] = best
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    a = ap.parse_args()
    if a.child:
        json.dump(run_backend(a.repeat), sys.stdout)
        return
    results = {}
    for no_numba in (False, True):
        env = dict(os.environ)
        env.pop("LINERECON_NO_NUMBA", None)
        if no_numba:
            env["LINERECON_NO_NUMBA"] = "1"
        res = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(a.repeat)],
                             env=env, capture_output=True, text=True, check=True)
        r = json.loads(res.stdout)
        results[r["backend"]] = r["times"]
    print(f"{'kernel':<20}{'numba (s)':>12}{'python (s)':>12}{'speedup':>10}")
    for name in WORKLOADS:
        tn, tp = results["numba"][name], results["python"][name]
        print(f"{name:<20}{tn:>12.4f}{tp:>12.4f}{tp / max(tn, 1e-9):>9.1f}x")
    if a.json:
        with open(a.json, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
