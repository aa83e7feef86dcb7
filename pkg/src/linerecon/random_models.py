"""Random graphs and random embeddings.

Floating point is used for sampling only; every sample is returned as exact
integer/rational structure.  All samplers take a seed (int or
``numpy.random.SeedSequence``) and are deterministic given it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import lambertw

from .graph_core import EmbeddedGraph, Graph, MultiGraph
from .decompose import KernelDecomposition, kernelize


def rng_from(seed):
    return np.random.default_rng(seed)


# --------------------------------------------------------------------------
# conjugate parameter


def conjugate(lam) -> float:
    """The root mu in (0, 1) of mu e^-mu = lam e^-lam, for lam > 1."""
    lam = float(lam)
    if not lam > 1:
        raise ValueError("lambda must exceed 1")
    target = lam * math.exp(-lam)
    mu = float(-lambertw(-target, 0).real)
    # Newton polish on h(mu) = log mu - mu - log target
    lt = math.log(target)
    for _ in range(3):
        h = math.log(mu) - mu - lt
        mu = mu - h / (1 / mu - 1)
    return mu


@dataclass(frozen=True)
class DlpParams:
    lam: float
    n: int
    mu: float = None

    def __post_init__(self):
        if not self.lam > 1:
            raise ValueError("lambda must exceed 1")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.mu is None:
            object.__setattr__(self, "mu", conjugate(self.lam))
        elif not 0 <= self.mu < 1:
            raise ValueError("mu must lie in [0, 1)")

    @classmethod
    def from_eps(cls, eps, n):
        return cls(1 + float(eps), int(n))


# --------------------------------------------------------------------------
# G(n, p)


def sample_gnp(n, p, seed=0) -> Graph:
    """Erdos-Renyi graph: a Binomial number of pairs, chosen uniformly."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = rng_from(seed)
    total = n * (n - 1) // 2
    m = int(rng.binomial(total, p)) if total else 0
    idx = np.sort(rng.choice(total, size=m, replace=False)) if m else np.zeros(0, dtype=np.int64)
    # unrank pair index -> (u, v), u < v, in row-major order of the upper triangle
    idx = idx.astype(np.int64)
    u = (n - 2 - np.floor(np.sqrt(-8.0 * idx + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    start = u * (2 * n - u - 1) // 2
    # guard against float rounding at row boundaries
    low = idx < start
    while low.any():
        u[low] -= 1
        start = u * (2 * n - u - 1) // 2
        low = idx < start
    nxt = (u + 1) * (2 * n - u - 2) // 2
    high = idx >= nxt
    while high.any():
        u[high] += 1
        start = u * (2 * n - u - 1) // 2
        nxt = (u + 1) * (2 * n - u - 2) // 2
        high = idx >= nxt
    v = idx - start + u + 1
    return Graph(n, tuple(zip(u.tolist(), v.tolist())))


# --------------------------------------------------------------------------
# the contiguous model for the 2-core


@dataclass
class DlpSample:
    graph: Graph
    decomposition: KernelDecomposition
    Lambda: float
    degrees: np.ndarray            # full Poisson vector
    kernel: MultiGraph             # configuration-model multigraph on degree >= 3 vertices
    lengths: np.ndarray            # subdivision length per kernel edge
    resampled: int                 # lengths redrawn to keep the output simple
    parity_rejections: int
    empty: bool = False


def geometric_lengths(rng, mu, size):
    """P(L = k) = mu^(k-1) (1 - mu), k >= 1."""
    if mu <= 0:
        return np.ones(size, dtype=np.int64)
    return rng.geometric(1 - mu, size=size).astype(np.int64)


def sample_dlp(params: DlpParams, seed=0, max_parity_tries=10_000) -> DlpSample:
    """Sample the simulated 2-core.

    Lambda ~ N(lam - mu, 1/n) (non-positive draws rejected); degrees
    D_u ~ Po(Lambda), redrawn as a whole until the degree-3+ total is even;
    uniform pairing of half-edges on the degree-3+ vertices; every kernel
    edge replaced by a path of Geom(1 - mu) edges.  Lengths are redrawn
    where the result would not be simple: loops need length >= 3, and within
    a class of parallel edges at most one keeps length 1.
    """
    rng = rng_from(seed)
    lam, mu, n = params.lam, params.mu, params.n
    while True:
        Lam = rng.normal(lam - mu, 1 / math.sqrt(n))
        if Lam > 0:
            break
    rejections = 0
    while True:
        D = rng.poisson(Lam, size=n).astype(np.int64)
        big = D >= 3
        if int(D[big].sum()) % 2 == 0:
            break
        rejections += 1
        if rejections > max_parity_tries:
            raise RuntimeError("parity conditioning failed repeatedly")
    kdeg = D[big]
    N = len(kdeg)
    if N == 0:
        g = Graph(0, ())
        return DlpSample(g, kernelize(g), float(Lam), D, MultiGraph(0, ()), np.zeros(0, np.int64),
                         0, rejections, True)
    stubs = np.repeat(np.arange(N, dtype=np.int64), kdeg)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    kedges = [(int(a), int(b)) if a <= b else (int(b), int(a)) for a, b in pairs]
    L = geometric_lengths(rng, mu, len(kedges))
    resampled = 0
    seen_unit = set()
    for i, (a, b) in enumerate(kedges):
        if a == b:
            while L[i] < 3:
                L[i] = geometric_lengths(rng, mu, 1)[0] if mu > 0 else 3
                resampled += 1
        elif L[i] == 1:
            if (a, b) in seen_unit:
                while L[i] < 2:
                    L[i] = geometric_lengths(rng, mu, 1)[0] if mu > 0 else 2
                    resampled += 1
            else:
                seen_unit.add((a, b))
    # build the subdivided simple graph: kernel vertices first, then path vertices
    edges = []
    nxt = N
    for (a, b), k in zip(kedges, L.tolist()):
        prev = a
        for _ in range(k - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, b))
    g = Graph(nxt, tuple(edges))
    return DlpSample(g, kernelize(g), float(Lam), D, MultiGraph(N, tuple(kedges)), L,
                     resampled, rejections)


# --------------------------------------------------------------------------
# embeddings


def random_embedding(g: Graph, style="generic", seed=0, window=None, a=0, b=1) -> EmbeddedGraph:
    """Random injective positions.

    ``generic``: numerators uniform in [-2^40, 2^40] over one random odd
    denominator, redrawn until all pairwise distances differ.
    ``integer-range``: distinct integers from ``range(window)`` (default
    window = n), so coincidental equal distances are common.
    ``arithmetic-progression``: ``a + b * sigma(i)`` for a random
    permutation sigma.
    """
    rng = rng_from(seed)
    n = g.n
    if style == "generic":
        den = int(rng.integers(1, 1 << 20)) * 2 + 1
        while True:
            nums = rng.integers(-(1 << 40), (1 << 40) + 1, size=n)
            if len(set(nums.tolist())) != n:
                continue
            srt = np.sort(nums.astype(object))
            diffs = [int(srt[j] - srt[i]) for i in range(n) for j in range(i + 1, n)]
            if len(set(diffs)) == len(diffs):
                break
        pos = tuple(Fraction(int(x), den) for x in nums)
    elif style == "integer-range":
        w = n if window is None else int(window)
        if w < n:
            raise ValueError(f"window of {w} integers cannot hold {n} distinct positions")
        pos = tuple(Fraction(int(x)) for x in rng.choice(w, size=n, replace=False))
    elif style == "arithmetic-progression":
        if b == 0:
            raise ValueError("step must be nonzero")
        sigma = rng.permutation(n)
        pos = tuple(Fraction(a) + Fraction(b) * int(s) for s in sigma)
    else:
        raise ValueError(f"unknown embedding style {style!r}")
    return EmbeddedGraph(g, pos)
