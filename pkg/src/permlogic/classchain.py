"""Insertion dynamics on (k-equivalence class, tail configuration) pairs.

The graph is explored exhaustively from the permutation "1" up to a fixed
length.  Classes are decided by EF games against stored representatives;
tail configurations are compared through their relative-order normal form.
"""

from __future__ import annotations

import json
import math
import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Callable, Iterable, Sequence

import networkx as nx

from .catalan import catalan, descendants
from .chain import homogeneous_step
from .ef import perm_equivalent
from .fo import Formula
from .fo.semantics import compiled
from .perm import (
    Permutation,
    enumerate_avoiders,
    insert_max,
    insertion_slots,
    q_statistic,
    slot_for_child_count,
    tail_configuration,
)
from .sampler import sample_avoider

MAX_GRAPH_DEPTH = 9
MAX_K = 3


def shortlex(p: Permutation):
    return (p.n, p.values)


class Classifier:
    """Assigns permutations to k-equivalence classes.

    Class ids are handed out in order of first appearance; the caller
    controls that order, and with it which permutation represents a class.
    """

    def __init__(self, k: int):
        self.k = k
        self.reps: list[Permutation] = []
        self._cache: dict[Permutation, int] = {}

    def class_of(self, perm: Permutation) -> int:
        hit = self._cache.get(perm)
        if hit is not None:
            return hit
        for idx, rep in enumerate(self.reps):
            if perm_equivalent(rep, perm, self.k):
                break
        else:
            idx = len(self.reps)
            self.reps.append(perm)
        self._cache[perm] = idx
        return idx


@dataclass(frozen=True)
class ClassConfigState:
    class_id: Permutation
    config: tuple

    def label(self) -> str:
        return f"{self.class_id}|{self.config[1]}"


@dataclass
class InsertionGraph:
    k: int
    depth: int
    states: list[ClassConfigState]
    realizers: list[Permutation]
    state_depth: list[int]
    edges: dict[tuple[int, str], set[int]]
    perm_state: dict[Permutation, int] = field(repr=False)
    class_of_state: list[int] = field(repr=False)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def edge_list(self) -> list[tuple[int, str, int]]:
        return sorted((u, s, v) for (u, s), vs in self.edges.items() for v in vs)

    def conflicts(self) -> list[tuple[int, str, list[int]]]:
        """(state, slot) pairs whose realizers disagree on the target state."""
        return [(u, s, sorted(vs)) for (u, s), vs in sorted(self.edges.items()) if len(vs) > 1]

    def expanded(self, state: int) -> bool:
        return self.state_depth[state] < self.depth

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n_states))
        for u, _, v in self.edge_list():
            g.add_edge(u, v)
        return g

    def class_digraph(self) -> nx.DiGraph:
        """Projection onto the class coordinate."""
        g = nx.DiGraph()
        g.add_nodes_from(set(self.class_of_state))
        for u, _, v in self.edge_list():
            g.add_edge(self.class_of_state[u], self.class_of_state[v])
        return g

    def to_jsonl(self) -> str:
        lines = []
        out = defaultdict(list)
        for u, s, v in self.edge_list():
            out[u].append({"slot": s, "target": v})
        for i, st in enumerate(self.states):
            lines.append(
                json.dumps(
                    {
                        "state_id": i,
                        "representative": str(st.class_id),
                        "config": [list(map(list, st.config[1]))],
                        "edges": out[i],
                    },
                    separators=(",", ":"),
                )
            )
        return "\n".join(lines) + "\n"


def build_graph(k: int, depth: int, order: str = "shortlex") -> InsertionGraph:
    """Explore every avoider of length <= depth and record insertion edges.

    ``order`` ("shortlex" or "reverse") fixes the order in which each level
    is classified, which decides the class representatives.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in 1..{MAX_K}")
    if not 1 <= depth <= MAX_GRAPH_DEPTH:
        raise ValueError(f"depth must be in 1..{MAX_GRAPH_DEPTH}")
    classifier = Classifier(k)
    states: list[ClassConfigState] = []
    index: dict[tuple[int, tuple], int] = {}
    realizers, state_depth, class_of_state = [], [], []
    perm_state: dict[Permutation, int] = {}
    for n in range(1, depth + 1):
        level = sorted(enumerate_avoiders(n), key=shortlex, reverse=(order == "reverse"))
        for p in level:
            cid = classifier.class_of(p)
            key = (cid, tail_configuration(p, k).normal_form())
            sid = index.get(key)
            if sid is None:
                sid = len(states)
                index[key] = sid
                states.append(ClassConfigState(classifier.reps[cid], key[1]))
                realizers.append(p)
                state_depth.append(n)
                class_of_state.append(cid)
            perm_state[p] = sid
    edges: dict[tuple[int, str], set[int]] = defaultdict(set)
    for p, sid in perm_state.items():
        if p.n < depth:
            for slot in insertion_slots(p):
                edges[(sid, slot.label)].add(perm_state[insert_max(p, slot)])
    return InsertionGraph(k, depth, states, realizers, state_depth, dict(edges), perm_state, class_of_state)


@dataclass
class SCCReport:
    """SCCs of the class projection.

    A component is closed when no edge leaves it and every class in it has
    been expanded (realized below the depth bound).  Sink components that
    still contain unexpanded classes are reported as undetermined, since
    their out-edges are unknown.
    """

    components: list[frozenset[int]]
    closed: list[frozenset[int]]
    undetermined: list[frozenset[int]]
    transient: frozenset[int]

    def component_of(self, node: int) -> frozenset[int]:
        for c in self.components:
            if node in c:
                return c
        raise KeyError(node)


def scc_analysis(graph: InsertionGraph | nx.DiGraph, expanded: Iterable[int] | None = None) -> SCCReport:
    """Split the class projection into transient classes and closed components.

    Also accepts a bare ``networkx.DiGraph`` (every node counted as expanded).
    """
    if isinstance(graph, InsertionGraph):
        g = graph.class_digraph()
        expanded = {graph.class_of_state[s] for s in range(graph.n_states) if graph.expanded(s)}
    else:
        g = graph
        expanded = set(g.nodes) if expanded is None else set(expanded)
    comps = [frozenset(c) for c in nx.strongly_connected_components(g)]
    comps.sort(key=min)
    closed, undetermined = [], []
    for c in comps:
        leaves = any(v not in c for u in c for v in g.successors(u))
        if leaves:
            continue
        (closed if c <= expanded else undetermined).append(c)
    settled = set().union(*closed) if closed else set()
    transient = frozenset(set(g.nodes) - settled - set().union(*undetermined) if undetermined else set(g.nodes) - settled)
    return SCCReport(comps, closed, undetermined, transient)


def aperiodicity_check(graph: nx.DiGraph, component: Iterable[int]) -> int:
    """gcd of directed cycle lengths inside a strongly connected component.

    BFS levels from any vertex; every edge u -> v inside the component
    contributes level(u) + 1 - level(v).
    """
    comp = set(component)
    sub = graph.subgraph(comp)
    if not comp or not nx.is_strongly_connected(sub):
        raise ValueError("component is not strongly connected")
    root = min(comp)
    level = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sub.successors(u):
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    g = 0
    for u, v in sub.edges:
        g = math.gcd(g, level[u] + 1 - level[v])
    return g


@dataclass
class MassReport:
    depth: int
    k: int
    component_mass: list[Fraction]
    unresolved: Fraction
    progenitors: list[list[Permutation]]
    # sum of 1/C_|sigma| over the listed progenitors, kept for comparison
    reciprocal_sums: list[Fraction]


def estimate_component_mass(depth: int, k: int = 2, graph: InsertionGraph | None = None) -> MassReport:
    """Share of length-``depth`` avoiders that sit below a progenitor of each closed component.

    A progenitor is an avoider whose whole enumerated subtree stays inside
    one closed component; only the highest such ancestors are listed.  The
    shares are exact and, together with ``unresolved``, sum to 1.
    """
    graph = graph or build_graph(k, depth)
    report = scc_analysis(graph)
    comp_index = {}
    for i, c in enumerate(report.closed):
        for cls in c:
            comp_index[cls] = i

    # component id of each permutation's subtree: int, or None if mixed/open
    subtree: dict[Permutation, int | None] = {}
    for n in range(depth, 0, -1):
        for p in enumerate_avoiders(n):
            own = comp_index.get(graph.class_of_state[graph.perm_state[p]])
            if n < depth and own is not None:
                for slot in insertion_slots(p):
                    if subtree[insert_max(p, slot)] != own:
                        own = None
                        break
            subtree[p] = own
    progenitors: list[list[Permutation]] = [[] for _ in report.closed]
    mass = [Fraction(0)] * len(report.closed)
    total = catalan(depth)

    def visit(p: Permutation):
        c = subtree[p]
        if c is not None:
            progenitors[c].append(p)
            mass[c] += Fraction(descendants(depth - p.n + 1, q_statistic(p)), total)
            return
        if p.n < depth:
            for slot in insertion_slots(p):
                visit(insert_max(p, slot))

    visit(Permutation((1,)))
    reciprocal = [sum((Fraction(1, catalan(p.n)) for p in ps), Fraction(0)) for ps in progenitors]
    return MassReport(depth, k, mass, 1 - sum(mass, Fraction(0)), progenitors, reciprocal)


def class_frequencies(k: int, n: int) -> dict[Permutation, Fraction]:
    """Exact share of AV_n(321) in each k-equivalence class, keyed by representative."""
    classifier = Classifier(k)
    counts: dict[int, int] = defaultdict(int)
    for p in sorted(enumerate_avoiders(n), key=shortlex):
        counts[classifier.class_of(p)] += 1
    total = catalan(n)
    return {classifier.reps[c]: Fraction(v, total) for c, v in counts.items()}


def state_census(graph: InsertionGraph, max_config_size: int = 12) -> dict[int, int]:
    """New states first realized at each length, counting only configurations
    with at most ``max_config_size`` boxed entries."""
    out = {n: 0 for n in range(1, graph.depth + 1)}
    for st, d in zip(graph.states, graph.state_depth):
        if len(st.config[1]) <= max_config_size:
            out[d] += 1
    return out


@dataclass
class Violation:
    first: Permutation
    second: Permutation
    slot: str


def well_definedness_check(k: int, n_max: int, weakened: bool = False) -> list[Violation]:
    """Look for k-equivalent avoiders with equal tail configurations whose
    children through the same slot are not k-equivalent.

    ``weakened`` ignores the configuration and buckets by class alone,
    comparing the slots both permutations have.
    """
    if n_max > 6 or k > 3:
        raise ValueError("well-definedness check is limited to n_max <= 6 and k <= 3")
    classifier = Classifier(k)
    buckets: dict[tuple, list[Permutation]] = defaultdict(list)
    for n in range(1, n_max + 1):
        for p in sorted(enumerate_avoiders(n), key=shortlex):
            cid = classifier.class_of(p)
            key = (cid,) if weakened else (cid, tail_configuration(p, k).normal_form())
            buckets[key].append(p)
    violations = []
    for members in buckets.values():
        for a_idx, a in enumerate(members):
            slots_a = {s.label for s in insertion_slots(a)}
            for b in members[a_idx + 1 :]:
                for s in insertion_slots(b):
                    if s.label in slots_a and not perm_equivalent(insert_max(a, s.label), insert_max(b, s.label), k):
                        violations.append(Violation(a, b, s.label))
    return violations


def replacement_time(r: int, k: int, trials: int, rng: random.Random, max_steps: int = 2000) -> list[int | None]:
    """Samples of the first time no entry of the starting tail configuration remains.

    Starts from the identity of length r (so |psi_1| = r) and inserts with
    the homogeneous kernel.  Runs that survive ``max_steps`` insertions are
    reported as None.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    out = []
    for _ in range(trials):
        values = list(range(1, r + 1))
        d = 0
        original = set(values)
        slots = r + 1
        tau = None
        for t in range(1, max_steps + 1):
            i = homogeneous_step(slots, rng)
            label = slot_for_child_count(slots, i)
            m = len(values)
            pos = m + 1 if label == "R" else d + int(label[1:])
            values.insert(pos - 1, m + 1)
            if label != "R":
                d = pos
            slots = i
            boxed = {v for box in tail_configuration(Permutation(tuple(values)), k).boxes for _, v in box}
            if not boxed & original:
                tau = t
                break
        out.append(tau)
    return out


def survival_curve(samples: Sequence[int | None], ms: Iterable[int]) -> dict[int, float]:
    """P(tau > M) for each M; unfinished runs count as survivors."""
    total = len(samples)
    return {m: sum(1 for s in samples if s is None or s > m) / total for m in ms}


def config_moment(k: int, n: int) -> Fraction:
    """E[|psi_1| * |psi|] over uniform AV_n(321)."""
    if n > 12:
        raise ValueError("config_moment enumerates AV_n and is limited to n <= 12")
    total = 0
    for p in enumerate_avoiders(n):
        tc = tail_configuration(p, k)
        total += len(tc.boxes[0]) * tc.size
    return Fraction(total, catalan(n))


@dataclass
class Estimate:
    n: int
    mode: str
    value: Fraction | float
    low: float
    high: float
    samples: int | None = None


Z95 = NormalDist().inv_cdf(0.975)


def wilson_interval(hits: int, trials: int, z: float = Z95) -> tuple[float, float]:
    p = hits / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # the bounds are exactly 0 and 1 at the extremes; avoid rounding just inside
    low = 0.0 if hits == 0 else max(0.0, centre - half)
    high = 1.0 if hits == trials else min(1.0, centre + half)
    return low, high


def _mc_chunk(args) -> int:
    text, n, count, seed, chunk = args
    from .fo import parse
    from .rng import stream

    f = compiled(parse(text))
    rng = stream(seed, "estimate", n, chunk)
    return sum(f(sample_avoider(n, rng).permutation) for _ in range(count))


MC_CHUNK = 10_000


def estimate_probability(
    sentence: Formula,
    n_list: Iterable[int],
    mode: str = "exact",
    samples: int = 0,
    seed: int | None = None,
    jobs: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list[Estimate]:
    """P(uniform avoider satisfies ``sentence``) for each n.

    Exact mode filters all of AV_n (n <= 12).  Monte Carlo mode uses the
    exact sampler, draws in fixed chunks of 10 000 with one random stream
    per chunk (so results do not depend on ``jobs``), and reports a 95%
    Wilson interval.
    """
    from .fo import to_text

    out = []
    f = compiled(sentence)
    for n in n_list:
        if progress:
            progress(f"n={n}")
        if mode == "exact":
            if n > 12:
                raise ValueError("exact mode is limited to n <= 12")
            hits = sum(1 for p in enumerate_avoiders(n) if f(p))
            value = Fraction(hits, catalan(n))
            out.append(Estimate(n, mode, value, float(value), float(value)))
        elif mode == "mc":
            if seed is None or samples < 1:
                raise ValueError("mc mode needs a seed and a positive sample count")
            chunks = [
                (to_text(sentence), n, min(MC_CHUNK, samples - start), seed, idx)
                for idx, start in enumerate(range(0, samples, MC_CHUNK))
            ]
            if jobs > 1:
                from concurrent.futures import ProcessPoolExecutor

                with ProcessPoolExecutor(jobs) as pool:
                    hits = sum(pool.map(_mc_chunk, chunks))
            else:
                hits = sum(map(_mc_chunk, chunks))
            lo, hi = wilson_interval(hits, samples)
            out.append(Estimate(n, mode, hits / samples, lo, hi, samples))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return out
