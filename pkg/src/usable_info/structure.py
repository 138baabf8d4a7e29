"""Directed-tree structure learning from pairwise information weights.

Workflow: estimate an information weight for every ordered variable pair,
then find the spanning arborescence (rooted directed tree, edges pointing
away from the root) whose parent->child edges have maximum total weight.
Because the weights are asymmetric the optimisation runs over directed
trees; Chu-Liu/Edmonds solves it exactly for each candidate root and the
best root wins.

``brute_force_arborescence`` enumerates every rooted spanning tree and is
the correctness oracle for the fast path.  Weights may be negative (e.g.
holdout estimates); nothing here assumes otherwise.

Tie-breaking is deterministic everywhere: among equal-weight optima the
smallest ``(root, parent vector)`` wins lexicographically, so rerunning on
the same matrix always returns the same tree and shifting all weights by a
constant never changes the selected edge set.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .estimation import empirical_conditional_entropy, empirical_entropy

__all__ = [
    "EdgeWeightMatrix",
    "Arborescence",
    "edge_weights",
    "max_arborescence",
    "brute_force_arborescence",
    "wrong_edges_ratio",
    "tree_weight_gap_bound",
]

_BRUTE_FORCE_MAX_NODES = 8


@dataclass(frozen=True)
class EdgeWeightMatrix:
    """Dense matrix of directed pair weights; ``w[i, j]`` scores edge i -> j.

    The diagonal is unused and kept at zero.
    """

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if w.shape[0] < 2:
            raise ValueError("need at least 2 nodes")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w = w.copy()
        np.fill_diagonal(w, 0.0)
        object.__setattr__(self, "w", w)

    @property
    def m(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True, eq=True)
class Arborescence:
    """Rooted directed spanning tree given as a child -> parent map."""

    root: int
    parent: dict[int, int]
    total_weight: float | None = None

    def __post_init__(self):
        m = len(self.parent) + 1
        nodes = set(range(m))
        if self.root not in nodes:
            raise ValueError("root outside node range")
        if set(self.parent) != nodes - {self.root}:
            raise ValueError("parent map must cover exactly the non-root nodes")
        if any(p not in nodes for p in self.parent.values()):
            raise ValueError("parent outside node range")
        # Walking up from every node must reach the root without repeats.
        for start in self.parent:
            seen = {start}
            node = start
            while node != self.root:
                node = self.parent[node]
                if node in seen:
                    raise ValueError("parent map contains a cycle")
                seen.add(node)

    @property
    def m(self) -> int:
        return len(self.parent) + 1

    def edges(self) -> set[tuple[int, int]]:
        """Directed (parent, child) pairs."""
        return {(p, c) for c, p in self.parent.items()}

    def undirected_edges(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges()}

    def parent_vector(self, sentinel: int = -1) -> tuple[int, ...]:
        return tuple(
            self.parent[i] if i != self.root else sentinel for i in range(self.m)
        )

    def to_dict(self) -> dict:
        parents = [None if i == self.root else int(self.parent[i])
                   for i in range(self.m)]
        total = None if self.total_weight is None else float(self.total_weight)
        return {"root": int(self.root), "parents": parents, "total_weight": total}

    @classmethod
    def from_dict(cls, data: dict) -> "Arborescence":
        parents = data["parents"]
        parent = {i: p for i, p in enumerate(parents) if p is not None}
        return cls(root=int(data["root"]), parent=parent,
                   total_weight=data.get("total_weight"))


def _as_matrix(weights) -> np.ndarray:
    if isinstance(weights, EdgeWeightMatrix):
        return weights.w
    return EdgeWeightMatrix(np.asarray(weights, dtype=float)).w


# --------------------------------------------------------------------- #
# Edge weights from data
# --------------------------------------------------------------------- #


def edge_weights(variables, family) -> EdgeWeightMatrix:
    """Estimate the information weight of every ordered variable pair.

    ``variables`` holds one aligned sample array per variable; ``family``
    is either a single :class:`FamilyConfig` or a callable ``(i, j) ->
    FamilyConfig`` choosing the family per directed pair.  Pairs are
    evaluated in a fixed order with no shared state, so the result is
    deterministic given the data and configs.
    """
    m = len(variables)
    if m < 2:
        raise ValueError("need at least 2 variables")
    lengths = {np.atleast_1d(np.asarray(v)).shape[0] for v in variables}
    if len(lengths) != 1:
        raise ValueError("variables must have aligned samples")
    family_for = family if callable(family) else (lambda i, j: family)
    w = np.zeros((m, m))
    marginal_cache: dict = {}
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            config = family_for(i, j)
            key = (j, config)
            if key not in marginal_cache:
                marginal_cache[key] = empirical_entropy(config, variables[j])
            h_cond = empirical_conditional_entropy(config, variables[i], variables[j])
            w[i, j] = marginal_cache[key] - h_cond
    return EdgeWeightMatrix(w)


# --------------------------------------------------------------------- #
# Maximum-weight spanning arborescence (Chu-Liu/Edmonds)
# --------------------------------------------------------------------- #


def max_arborescence(weights) -> Arborescence:
    """Spanning arborescence maximising the summed parent->child weights.

    Runs Chu-Liu/Edmonds once per candidate root and keeps the best total;
    exact ties fall to the lexicographically smallest (root, parent
    vector).
    """
    w = _as_matrix(weights)
    m = w.shape[0]
    best = None
    for root in range(m):
        parent = _edmonds_fixed_root(w, root)
        total = _total(w, parent)
        vector = tuple(parent[i] if i != root else -1 for i in range(m))
        key = (-total, root, vector)
        if best is None or key < best[0]:
            best = (key, root, parent, total)
    _, root, parent, total = best
    return Arborescence(root=root, parent=parent, total_weight=total)


def _total(w: np.ndarray, parent: dict[int, int]) -> float:
    # Summed in child order so equal trees give bitwise-equal totals.
    return float(sum(w[parent[c], c] for c in sorted(parent)))


def _edmonds_fixed_root(w: np.ndarray, root: int) -> dict[int, int]:
    """Chu-Liu/Edmonds for a fixed root on a dense weight matrix.

    Each edge carries its original (tail, head) identity through cycle
    contractions so the final arborescence is read off directly.
    """
    m = w.shape[0]
    edges = {}
    for u in range(m):
        for v in range(m):
            if u != v and v != root:
                edges[(u, v)] = (float(w[u, v]), (u, v))
    chosen = _edmonds_recurse(edges, set(range(m)), root, next_id=m)
    return {c: p for (p, c) in chosen}


def _edmonds_recurse(edges, nodes, root, next_id):
    # Best incoming edge per node; ties go to the smaller tail, then the
    # smaller original edge, keeping the whole run deterministic.
    best = {}
    for (u, v), (wt, orig) in edges.items():
        cur = best.get(v)
        if cur is None or wt > cur[0] or (wt == cur[0] and (u, orig) < (cur[1], cur[2])):
            best[v] = (wt, u, orig)
    for v in nodes:
        if v != root and v not in best:
            raise ValueError("graph has a node with no incoming edge")

    cycle = _find_cycle({v: b[1] for v, b in best.items()}, root)
    if cycle is None:
        return {b[2] for b in best.values()}

    cycle_set = set(cycle)
    c = next_id
    contracted = {}
    entering_head = {}  # original edge -> in-cycle head it pointed at
    for (u, v), (wt, orig) in edges.items():
        uu = c if u in cycle_set else u
        vv = c if v in cycle_set else v
        if uu == vv:
            continue
        if vv == c:
            cand = (wt - best[v][0], orig)
        else:
            cand = (wt, orig)
        cur = contracted.get((uu, vv))
        if cur is None or cand[0] > cur[0] or (cand[0] == cur[0] and cand[1] < cur[1]):
            contracted[(uu, vv)] = cand
            if vv == c:
                entering_head[orig] = v
    new_nodes = (nodes - cycle_set) | {c}
    sub = _edmonds_recurse(contracted, new_nodes, root, next_id + 1)

    into_cycle = [orig for orig in sub if orig in entering_head]
    # Exactly one chosen edge enters the contracted node.
    (entry,) = into_cycle
    broken_head = entering_head[entry]
    result = set(sub)
    for v in cycle:
        if v != broken_head:
            result.add(best[v][2])
    return result


def _find_cycle(parent_of: dict[int, int], root: int):
    color = {}
    for start in parent_of:
        if color.get(start):
            continue
        path = []
        node = start
        while node != root and color.get(node) is None:
            color[node] = "active"
            path.append(node)
            node = parent_of[node]
        if node != root and color.get(node) == "active":
            return path[path.index(node):]
        for p in path:
            color[p] = "done"
    return None


# --------------------------------------------------------------------- #
# Enumeration oracle
# --------------------------------------------------------------------- #


@lru_cache(maxsize=None)
def _labeled_trees(m: int) -> tuple:
    """Edge lists of all labeled trees on m nodes, decoded from Pruefer codes."""
    if m == 2:
        return (((0, 1),),)
    trees = []
    for code in product(range(m), repeat=m - 2):
        degree = [1] * m
        for p in code:
            degree[p] += 1
        edges = []
        code_list = list(code)
        available = sorted(i for i in range(m) if degree[i] == 1)
        for p in code_list:
            leaf = available.pop(0)
            edges.append((min(leaf, p), max(leaf, p)))
            degree[p] -= 1
            if degree[p] == 1:
                # Insert keeping the leaf pool sorted.
                lo = 0
                while lo < len(available) and available[lo] < p:
                    lo += 1
                available.insert(lo, p)
        u, v = available
        edges.append((min(u, v), max(u, v)))
        trees.append(tuple(edges))
    return tuple(trees)


def _orient(edges, m: int, root: int) -> dict[int, int]:
    adj = [[] for _ in range(m)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    parent = {}
    stack = [root]
    visited = {root}
    while stack:
        node = stack.pop()
        for nxt in adj[node]:
            if nxt not in visited:
                visited.add(nxt)
                parent[nxt] = node
                stack.append(nxt)
    return parent


def brute_force_arborescence(weights) -> Arborescence:
    """Exact maximum arborescence by enumerating all m^(m-1) rooted trees.

    Limited to m <= 8 nodes; ties break to the lexicographically smallest
    (root, parent vector), matching :func:`max_arborescence`.
    """
    w = _as_matrix(weights)
    m = w.shape[0]
    if m > _BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force enumerates m^(m-1) trees; m <= "
                         f"{_BRUTE_FORCE_MAX_NODES} required")
    best = None
    for tree in _labeled_trees(m):
        for root in range(m):
            parent = _orient(tree, m, root)
            total = _total(w, parent)
            vector = tuple(parent[i] if i != root else -1 for i in range(m))
            key = (-total, root, vector)
            if best is None or key < best[0]:
                best = (key, root, parent, total)
    _, root, parent, total = best
    return Arborescence(root=root, parent=parent, total_weight=total)


# --------------------------------------------------------------------- #
# Scoring
# --------------------------------------------------------------------- #


def wrong_edges_ratio(found: Arborescence, truth: Arborescence,
                      mode: str = "undirected") -> float:
    """Fraction of recovered edges absent from the ground-truth tree.

    ``undirected`` compares edge sets as unordered pairs (symmetric in the
    two trees); ``directed`` compares parent->child pairs.
    """
    if found.m != truth.m:
        raise ValueError("trees have different node counts")
    if mode == "undirected":
        diff = found.undirected_edges() - truth.undirected_edges()
    elif mode == "directed":
        diff = found.edges() - truth.edges()
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return len(diff) / (found.m - 1)


def tree_weight_gap_bound(max_rademacher_terms: float, b: float, delta: float,
                          sample_sizes, m: int) -> float:
    """Bound on the learned tree's total-weight shortfall versus the optimum.

    ``max_rademacher_terms`` upper-bounds, over all directed pairs, the sum
    of twice the pair-family and twice the marginal-family Rademacher
    complexities.  ``sample_sizes`` is one ``(n_marginal, n_pair)`` tuple
    per pair (a single tuple broadcasts).  The bound is

        2 (m - 1) * max over pairs of
            [terms + b sqrt(2 log(1/delta)) (n_marginal^-1/2 + n_pair^-1/2)]

    and holds with probability at least ``1 - 2 m (m-1) delta``, which is
    vacuous unless ``delta < 1 / (2 m (m-1))``.
    """
    if max_rademacher_terms < 0:
        raise ValueError("max_rademacher_terms must be non-negative")
    if b <= 0:
        raise ValueError("b must be positive")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if m < 2:
        raise ValueError("need at least 2 nodes")
    if delta >= 1.0 / (2.0 * m * (m - 1)):
        warnings.warn(
            f"delta={delta} >= 1/(2m(m-1)); the probability guarantee is vacuous",
            UserWarning,
        )
    sizes = list(sample_sizes)
    if not sizes:
        raise ValueError("sample_sizes is empty")
    if isinstance(sizes[0], (int, float, np.integer, np.floating)):
        sizes = [tuple(sizes)]  # a single (n_marginal, n_pair) pair
    worst = -math.inf
    for n_marginal, n_pair in sizes:
        if n_marginal < 1 or n_pair < 1:
            raise ValueError("sample sizes must be positive")
        term = max_rademacher_terms + b * math.sqrt(2.0 * math.log(1.0 / delta)) * (
            n_marginal ** -0.5 + n_pair ** -0.5
        )
        worst = max(worst, term)
    return 2.0 * (m - 1) * worst
