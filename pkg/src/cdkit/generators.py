"""Synthetic benchmark generators with ground-truth communities.

Two families: an equal-block stochastic block model where the cross-community
edge probability is tied to the within probability as ``(1 - p_in) / (K - 1)``,
and a power-law benchmark parameterized by average/max degree, community-size
bounds, and a mixing ratio ``mu`` giving each node's external-degree fraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GenerationError, InputError
from .graph import Graph, build_graph
from .partition import Partition


@dataclass(frozen=True)
class GnSpec:
    """Equal-block SBM spec: K communities of size N/K, within probability p_in."""

    num_nodes: int
    num_communities: int
    p_in: float
    seed: int = 0

    def __post_init__(self):
        n, k = self.num_nodes, self.num_communities
        if k < 2 or n % k != 0 or n // k < 2:
            raise InputError("need K >= 2 equal blocks of size >= 2 dividing N")
        if not 0.0 < self.p_in <= 1.0:
            raise InputError("p_in must be in (0, 1]")
        if not 0.0 <= self.p_cross <= 1.0:
            raise InputError("cross probability (1 - p_in)/(K - 1) must lie in [0, 1]")

    @property
    def p_cross(self) -> float:
        return (1.0 - self.p_in) / (self.num_communities - 1)


@dataclass(frozen=True)
class LfrSpec:
    """Power-law benchmark spec.

    ``avg_degree``/``max_degree`` shape the truncated power-law degree sequence
    (exponent ``tau_degree``); community sizes follow a truncated power law
    (exponent ``tau_community``) on ``[min_community, max_community]``;
    ``mixing`` is the target external-degree fraction per node. When
    ``num_nodes_max`` is given the node count is drawn uniformly from
    ``[num_nodes, num_nodes_max]``.
    """

    num_nodes: int
    avg_degree: float
    max_degree: int
    min_community: int
    max_community: int
    mixing: float
    tau_degree: float = 2.0
    tau_community: float = 1.0
    seed: int = 0
    num_nodes_max: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.mixing <= 1.0:
            raise InputError("mixing must be in [0, 1]")
        if not 1 <= self.min_community <= self.max_community <= self.num_nodes:
            raise InputError("need 1 <= min_community <= max_community <= num_nodes")
        if not 1.0 <= self.avg_degree <= self.max_degree:
            raise InputError("need 1 <= avg_degree <= max_degree")
        if self.num_nodes_max is not None and self.num_nodes_max < self.num_nodes:
            raise InputError("num_nodes_max must be >= num_nodes")


def _pair_index_to_edge(t: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # invert the row-major upper-triangle linearization t = i*(2n-i-1)/2 + (j-i-1)
    tn = t.astype(np.float64)
    i = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8.0 * tn)) / 2.0).astype(np.int64)
    base = i * (2 * n - i - 1) // 2
    over = base > t
    i[over] -= 1
    base[over] = i[over] * (2 * n - i[over] - 1) // 2
    under = (i + 1) * (2 * n - i - 2) // 2 <= t
    i[under] += 1
    base[under] = i[under] * (2 * n - i[under] - 1) // 2
    j = t - base + i + 1
    return i, j


def _bernoulli_pair_sample(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices t in [0, total) kept independently with probability p (skip sampling)."""
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    out = []
    pos = -1
    log1p = np.log1p(-p)
    batch = max(256, int(total * p * 1.2) + 64)
    while pos < total - 1:
        gaps = np.floor(np.log(rng.random(batch)) / log1p).astype(np.int64)
        idx = pos + np.cumsum(gaps + 1)
        keep = idx < total
        out.append(idx[keep])
        if not keep.all():
            break
        pos = int(idx[-1])
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def generate_gn(spec: GnSpec) -> tuple[Graph, Partition]:
    """Sample one equal-block SBM graph plus its planted partition.

    Every within-community pair is an edge with probability ``p_in``; every
    cross pair with probability ``(1 - p_in)/(K - 1)``. Reproducible: the same
    spec (seed included) yields the identical edge set.
    """
    rng = np.random.default_rng(spec.seed)
    n, k = spec.num_nodes, spec.num_communities
    size = n // k
    labels = np.repeat(np.arange(k), size)

    iu, ju = np.triu_indices(size, 1)
    within = []
    for c in range(k):
        mask = rng.random(len(iu)) < spec.p_in
        offset = c * size
        within.append(np.column_stack([offset + iu[mask], offset + ju[mask]]))
    within = np.concatenate(within) if within else np.empty((0, 2), dtype=np.int64)

    total_pairs = n * (n - 1) // 2
    t = _bernoulli_pair_sample(total_pairs, spec.p_cross, rng)
    ci, cj = _pair_index_to_edge(t, n)
    cross_mask = (ci // size) != (cj // size)  # within pairs were sampled above
    cross = np.column_stack([ci[cross_mask], cj[cross_mask]])

    edges = np.concatenate([within, cross]) if len(cross) or len(within) else within
    return build_graph(n, edges), Partition.from_labels(labels)


def _powerlaw_sample(rng, exponent: float, lo: float, hi: float, size: int) -> np.ndarray:
    u = rng.random(size)
    if abs(exponent - 1.0) < 1e-12:
        return lo * (hi / lo) ** u
    a = lo ** (1.0 - exponent)
    b = hi ** (1.0 - exponent)
    return (a + u * (b - a)) ** (1.0 / (1.0 - exponent))


def _powerlaw_mean(exponent: float, lo: float, hi: float) -> float:
    if abs(exponent - 1.0) < 1e-12:
        z = np.log(hi / lo)
        m1 = hi - lo
    else:
        z = (hi ** (1.0 - exponent) - lo ** (1.0 - exponent)) / (1.0 - exponent)
        if abs(exponent - 2.0) < 1e-12:
            m1 = np.log(hi / lo)
        else:
            m1 = (hi ** (2.0 - exponent) - lo ** (2.0 - exponent)) / (2.0 - exponent)
    return m1 / z


def _solve_degree_floor(target: float, exponent: float, hi: float) -> float:
    # mean of the truncated power law is increasing in the lower cutoff
    if _powerlaw_mean(exponent, 1.0, hi) >= target:
        return 1.0
    lo, up = 1.0, hi
    for _ in range(80):
        mid = 0.5 * (lo + up)
        if _powerlaw_mean(exponent, mid, hi) < target:
            lo = mid
        else:
            up = mid
    return 0.5 * (lo + up)


def _draw_community_sizes(rng, spec: LfrSpec, n: int) -> list[int]:
    for _ in range(1000):
        sizes: list[int] = []
        total = 0
        while total < n:
            s = int(np.clip(np.rint(_powerlaw_sample(
                rng, spec.tau_community, spec.min_community, spec.max_community, 1)[0]),
                spec.min_community, spec.max_community))
            if total + s > n:
                need = n - total
                if need >= spec.min_community:
                    sizes.append(need)
                    total = n
                else:
                    break  # cannot close the gap with a legal size; redraw
            else:
                sizes.append(s)
                total += s
        if total == n:
            return sizes
    raise GenerationError("community sizes summing to N not achievable in [c_min, c_max]")


def _assign_communities(rng, sizes: list[int], internal: np.ndarray) -> np.ndarray:
    caps = np.array(sizes)
    if internal.max(initial=0) > caps.max() - 1:
        raise GenerationError(
            "internal degree exceeds the largest community size minus one")
    for _ in range(50):
        slots = caps.copy()
        labels = np.full(len(internal), -1, dtype=np.int64)
        order = rng.permutation(len(internal))
        order = order[np.argsort(-internal[order], kind="stable")]
        ok = True
        for node in order:
            feasible = np.flatnonzero((slots > 0) & (caps - 1 >= internal[node]))
            if len(feasible) == 0:
                ok = False
                break
            weights = slots[feasible].astype(np.float64)
            labels[node] = rng.choice(feasible, p=weights / weights.sum())
            slots[labels[node]] -= 1
        if ok:
            return labels
    raise GenerationError("could not place every node's internal degree in a community")


def _match_stubs(stubs: np.ndarray, rng, groups=None, sweeps: int = 100) -> set:
    """Configuration-model pairing that rejects self-loops and duplicates.

    ``groups`` (when given) additionally forbids pairing stubs of the same
    group. Left-over stubs after the rewiring sweeps are dropped.
    """
    edges: set = set()
    pool = np.array(stubs, dtype=np.int64)
    for _ in range(sweeps):
        if len(pool) < 2:
            break
        rng.shuffle(pool)
        leftover = []
        if len(pool) % 2:
            leftover.append(int(pool[-1]))
        for u, v in zip(pool[0:-1:2], pool[1::2]):
            u, v = int(u), int(v)
            if u == v or (groups is not None and groups[u] == groups[v]):
                leftover.extend((u, v))
                continue
            key = (u, v) if u < v else (v, u)
            if key in edges:
                leftover.extend((u, v))
            else:
                edges.add(key)
        if len(leftover) == len(pool):
            break
        pool = np.array(leftover, dtype=np.int64)
    return edges


def generate_lfr(spec: LfrSpec) -> tuple[Graph, Partition]:
    """Sample one power-law benchmark graph plus its planted partition.

    Degrees come from a truncated power law solved to hit ``avg_degree`` in
    expectation and capped at ``max_degree``. Each node gets about
    ``(1 - mixing) * d_i`` internal and ``mixing * d_i`` external stubs, wired
    configuration-model style; the resulting graph is always simple.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.num_nodes
    if spec.num_nodes_max is not None:
        n = int(rng.integers(spec.num_nodes, spec.num_nodes_max + 1))

    floor = _solve_degree_floor(spec.avg_degree, spec.tau_degree, float(spec.max_degree))
    degrees = np.clip(np.rint(_powerlaw_sample(rng, spec.tau_degree, floor,
                                               float(spec.max_degree), n)),
                      1, spec.max_degree).astype(np.int64)
    internal = np.rint((1.0 - spec.mixing) * degrees).astype(np.int64)

    sizes = _draw_community_sizes(rng, spec, n)
    labels = _assign_communities(rng, sizes, internal)

    edges: set = set()
    for c in range(len(sizes)):
        members = np.flatnonzero(labels == c)
        stubs = np.repeat(members, internal[members])
        if len(stubs) % 2:
            # drop one stub from the member with the most internal stubs
            heavy = members[np.argmax(internal[members])]
            where = np.flatnonzero(stubs == heavy)
            stubs = np.delete(stubs, where[0])
        edges |= _match_stubs(stubs, rng)

    external = degrees - internal
    stubs = np.repeat(np.arange(n), external)
    if len(stubs) % 2:
        heavy = int(np.argmax(external))
        where = np.flatnonzero(stubs == heavy)
        stubs = np.delete(stubs, where[0])
    edges |= _match_stubs(stubs, rng, groups=labels)

    edge_array = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    return build_graph(n, edge_array), Partition.from_labels(labels)


def realized_mixing(g: Graph, p: Partition) -> float:
    """Mean over nodes of external degree / total degree (degree-0 nodes skipped)."""
    lab = p.labels
    ext = np.zeros(g.num_nodes)
    for i, j in g.edges:
        if lab[i] != lab[j]:
            ext[i] += 1
            ext[j] += 1
    deg = g.degrees.astype(np.float64)
    mask = deg > 0
    return float(np.mean(ext[mask] / deg[mask]))
