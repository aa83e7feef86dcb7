"""Seeded experiment harness: configuration, row schema, the giant-component
reconstruction sweep and the per-seed lemma checks.

Seeds: cell ``c`` (position in the n x eps grid, n-major) and replicate ``r``
use ``numpy.random.SeedSequence(master_seed, spawn_key=(c, r))``; the graph
sampler gets child 0 and the embedding sampler child 1 of that sequence.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

import numpy as np

from .decompose import kernelize
from .graph_core import Graph
from .random_models import DlpParams, random_embedding, sample_dlp, sample_gnp
from .reconstruct import estimate_witness_probability, maximal_reconstructible_subsets

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
THREADS_ENV = "LINERECON_THREADS"
# large 2-connected blocks of the giant need more than the interactive default
SWEEP_BUDGET = 1 << 23


def _parse_list(text, cast):
    return [cast(x) for x in str(text).replace(" ", "").split(",") if x]


@dataclass
class ExperimentConfig:
    model: str = "gnp"
    n_grid: list = field(default_factory=lambda: [100])
    eps_grid: list = field(default_factory=lambda: [0.5])
    seeds: int = 10
    style: str = "generic"
    budget: int = SWEEP_BUDGET
    output: str = "-"
    master_seed: int = 0
    gamma: float = 1.0
    threads: int = 0

    def __post_init__(self):
        if self.model not in ("gnp", "dlp"):
            raise ValueError(f"unknown model {self.model!r}")
        if not self.n_grid or not self.eps_grid:
            raise ValueError("grids must be nonempty")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.seeds < 1:
            raise ValueError("need at least one seed per cell")

    def cells(self):
        return [(n, eps) for n in self.n_grid for eps in self.eps_grid]

    def to_text(self):
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                v = ",".join(str(x) for x in v)
            out.append(f"{f.name} = {v}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text, **overrides):
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value")
            k, v = (x.strip() for x in line.split("=", 1))
            raw[k.replace("-", "_")] = v
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_mapping(raw)

    @classmethod
    def from_mapping(cls, raw):
        known = {f.name for f in fields(cls)}
        bad = set(raw) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        kw = {}
        for k, v in raw.items():
            if k == "n_grid":
                kw[k] = _parse_list(v, int) if isinstance(v, str) else list(v)
            elif k == "eps_grid":
                kw[k] = _parse_list(v, float) if isinstance(v, str) else list(v)
            elif k in ("seeds", "budget", "master_seed", "threads"):
                kw[k] = int(v)
            elif k == "gamma":
                kw[k] = float(v)
            else:
                kw[k] = v
        return cls(**kw)


def cell_seed(master, cell, rep):
    return np.random.SeedSequence(master, spawn_key=(cell, rep))


def default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# giant-component sweep

GIANT_COLUMNS = ["schema", "model", "n", "eps", "cell", "rep", "master_seed", "style", "budget",
                 "vertices", "edges", "core_size", "kernel_vertices", "kernel_edges", "max_degree",
                 "recon_size", "recon_exact", "unknown_pairs", "status", "runtime_s"]


def _giant_row(cfg: ExperimentConfig, cell, n, eps, rep):
    t0 = time.perf_counter()
    ss = cell_seed(cfg.master_seed, cell, rep)
    gseed, eseed = ss.spawn(2)
    row = dict(schema=SCHEMA_VERSION, model=cfg.model, n=n, eps=eps, cell=cell, rep=rep,
               master_seed=cfg.master_seed, style=cfg.style, budget=cfg.budget)
    try:
        if cfg.model == "gnp":
            g = sample_gnp(n, min(1.0, (1 + eps) / n), gseed)
            dec = kernelize(g)
        else:
            smp = sample_dlp(DlpParams.from_eps(eps, n), gseed)
            g, dec = smp.graph, smp.decomposition
        eg = random_embedding(g, cfg.style, eseed, window=max(2 * g.n, 1))
        rep_ = maximal_reconstructible_subsets(eg, cfg.budget) if g.n else None
        row.update(vertices=g.n, edges=g.m, core_size=dec.two_core.n,
                   kernel_vertices=dec.kernel.n, kernel_edges=dec.kernel.m,
                   max_degree=int(g.degrees.max()) if g.n else 0,
                   recon_size=rep_.largest if rep_ else 0,
                   recon_exact=int(rep_.exhausted) if rep_ else 1,
                   unknown_pairs=len(rep_.unknown_pairs) if rep_ else 0, status="ok")
    except Exception as exc:  # recorded, the sweep continues
        log.exception("cell %s rep %s failed", cell, rep)
        row.update(status=f"error: {type(exc).__name__}: {exc}")
    row["runtime_s"] = round(time.perf_counter() - t0, 4)
    return row


def _run_tasks(fn, tasks, threads):
    threads = threads or default_threads()
    if threads <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futs]


def run_giant_experiment(cfg: ExperimentConfig):
    """One row per (cell, replicate), ordered by (cell, replicate)."""
    tasks = [(cfg, c, n, eps, r) for c, (n, eps) in enumerate(cfg.cells()) for r in range(cfg.seeds)]
    rows = _run_tasks(_giant_row, tasks, cfg.threads)
    rows.sort(key=lambda r: (r["cell"], r["rep"]))
    return rows


def replay_giant_row(cfg: ExperimentConfig, cell, rep):
    n, eps = cfg.cells()[cell]
    return _giant_row(cfg, cell, n, eps, rep)


# --------------------------------------------------------------------------
# lemma checks

LEMMA_COLUMNS = ["schema", "check", "n", "eps", "cell", "rep", "master_seed", "value", "low", "high",
                 "passed", "asymptotic_warning", "status"]


def _fixture_graph(n, edges):
    return Graph(n, tuple(edges))


def witness_fixtures():
    """(name, graph, blocks) triples with exponent V' - C2 - (k-1) in {0, 1, 2}."""
    C = lambda n: [(i, (i + 1) % n) for i in range(n)]  # noqa: E731
    P = lambda n: [(i, i + 1) for i in range(n - 1)]  # noqa: E731
    ladder = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]
    star4 = [(0, 1), (0, 2), (0, 3), (0, 4)]
    bowtie = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    return [
        ("path3", _fixture_graph(3, P(3)), [[0, 1], [2]]),
        ("path4", _fixture_graph(4, P(4)), [[0, 1], [2, 3]]),
        ("path5-three-blocks", _fixture_graph(5, P(5)), [[0, 1], [2], [3, 4]]),
        ("star4", _fixture_graph(5, star4), [[0, 1, 2], [3], [4]]),
        ("cycle4-halves", _fixture_graph(4, C(4)), [[0, 1], [2, 3]]),
        ("cycle5", _fixture_graph(5, C(5)), [[0, 1, 2], [3, 4]]),
        ("cycle6-halves", _fixture_graph(6, C(6)), [[0, 1, 2], [3, 4, 5]]),
        ("cycle6-thirds", _fixture_graph(6, C(6)), [[0, 1], [2, 3], [4, 5]]),
        ("cycle8-halves", _fixture_graph(8, C(8)), [[0, 1, 2, 3], [4, 5, 6, 7]]),
        ("bowtie", _fixture_graph(5, bowtie), [[0, 1, 2], [3, 4]]),
        ("ladder", _fixture_graph(6, ladder), [[0, 1, 2], [3, 4, 5]]),
        ("k4-star", _fixture_graph(4, k4), [[0, 1, 2], [3]]),
        ("k4-dominoes", _fixture_graph(4, k4), [[0, 1], [2, 3]]),
    ]


def _lemma_rows_for_seed(cfg: ExperimentConfig, cell, n, eps, rep):
    ss = cell_seed(cfg.master_seed, cell, rep)
    base = dict(schema=SCHEMA_VERSION, n=n, eps=eps, cell=cell, rep=rep, master_seed=cfg.master_seed,
                asymptotic_warning=int(n < 100), status="ok")
    rows = []
    try:
        smp = sample_dlp(DlpParams.from_eps(eps, n), ss)
        K = smp.kernel
        e3n = eps ** 3 * n
        kv, ke = K.n, K.m
        maxdeg = int(K.degrees.max()) if K.n else 0
        rows.append(dict(base, check="kernel_vertices", value=kv, low=e3n / 1000, high=16 * e3n,
                         passed=int(e3n / 1000 <= kv <= 16 * e3n)))
        rows.append(dict(base, check="kernel_edges", value=ke, low=e3n / 1000, high=32 * e3n,
                         passed=int(e3n / 1000 <= ke <= 32 * e3n)))
        rows.append(dict(base, check="kernel_max_degree", value=maxdeg, low=0, high=10 * math.log(n),
                         passed=int(maxdeg <= 10 * math.log(n))))
        thresh = 100 / (cfg.gamma * eps)
        long_paths = int((smp.lengths >= thresh).sum())
        allowed = cfg.gamma / 1e8 * max(K.n, 1)
        rows.append(dict(base, check="long_bare_paths", value=long_paths, low=0, high=allowed,
                         passed=int(long_paths <= allowed)))
    except Exception as exc:
        log.exception("lemma cell %s rep %s failed", cell, rep)
        rows.append(dict(base, check="dlp", value="", low="", high="", passed=0,
                         status=f"error: {type(exc).__name__}: {exc}"))
    return rows


def run_lemma_checks(cfg: ExperimentConfig, witness_trials=10_000, pool_size=20):
    """Per-seed kernel-size, max-degree and long-bare-path checks on the
    contiguous model, followed by one witness-frequency row per fixture."""
    tasks = [(cfg, c, n, eps, r) for c, (n, eps) in enumerate(cfg.cells()) for r in range(cfg.seeds)]
    rows = [row for chunk in _run_tasks(_lemma_rows_for_seed, tasks, cfg.threads) for row in chunk]
    rows.sort(key=lambda r: (r["cell"], r["rep"], r["check"]))
    pool = [Fraction(i) for i in range(pool_size)]
    for i, (name, g, blocks) in enumerate(witness_fixtures()):
        est = estimate_witness_probability(g, blocks, pool, witness_trials,
                                           seed=np.random.SeedSequence(cfg.master_seed, spawn_key=(10**6, i)))
        limit = est.bound + 3 * est.sigma
        rows.append(dict(schema=SCHEMA_VERSION, check=f"witness:{name}", n=g.n, eps="", cell=-1, rep=i,
                         master_seed=cfg.master_seed, value=est.frequency, low=0, high=limit,
                         passed=int(est.frequency <= limit), asymptotic_warning=0, status="ok"))
    return rows


# --------------------------------------------------------------------------
# output


def write_csv(rows, columns, stream=None):
    """CSV with a leading ``# schema=...`` comment line."""
    buf = stream if stream is not None else io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue() if stream is None else None


def read_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def rows_equal_for_replay(a, b, ignore=("runtime_s",)):
    """Row equality up to wall-clock columns."""
    keys = (set(a) | set(b)) - set(ignore)
    return all(str(a.get(k)) == str(b.get(k)) for k in keys)
