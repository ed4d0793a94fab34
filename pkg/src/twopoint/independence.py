"""Exact independence numbers: branch-and-bound solver and brute-force oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .graphs import Graph


class SizeLimitError(ValueError):
    """Graph exceeds the vertex limit of an exact algorithm."""


@dataclass(frozen=True)
class IndependenceResult:
    alpha: int
    witness: tuple[int, ...]
    node_count: int


def _adjacency_masks(g: Graph) -> list[int]:
    adj = [0] * g.n
    for (i, j) in g.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return adj


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    """True iff no edge of g has both endpoints in s."""
    sset = set(s)
    for v in sset:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    return not any(i in sset and j in sset for (i, j) in g.edges)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        lsb = mask & -mask
        out.append(lsb.bit_length() - 1)
        mask ^= lsb
    return out


def independence_number(g: Graph, limit: int = 64) -> IndependenceResult:
    """Exact maximum independent set by branch and bound.

    Branches on a maximum-degree vertex of the remaining subgraph (lowest id
    on ties) and prunes with a greedy clique-cover upper bound; vertex sets
    are bitmasks.  Deterministic: identical inputs explore identical trees.

    Raises SizeLimitError above ``limit`` vertices and ValueError for
    weighted graphs (expand them first).
    """
    if g.is_weighted:
        raise ValueError("independence_number expects an unweighted graph; apply expand_weighted")
    if g.n > limit:
        raise SizeLimitError(f"graph has {g.n} vertices, exceeding the limit of {limit}")
    adj = _adjacency_masks(g)

    def cover_bound(mask: int) -> int:
        # Greedily peel cliques; the number of cliques needed to cover the
        # candidate set bounds its independence number from above.
        count = 0
        rem = mask
        while rem:
            v = (rem & -rem).bit_length() - 1
            clique = 1 << v
            cand = rem & adj[v]
            while cand:
                u = (cand & -cand).bit_length() - 1
                clique |= 1 << u
                cand &= adj[u]
            rem &= ~clique
            count += 1
        return count

    best_size = 0
    best_set = 0
    nodes = 0
    # Explicit stack of (candidate mask, chosen mask) frames.
    stack = [((1 << g.n) - 1, 0)]
    while stack:
        mask, chosen = stack.pop()
        nodes += 1
        size = bin(chosen).count("1")
        if not mask:
            if size > best_size:
                best_size, best_set = size, chosen
            continue
        if size + cover_bound(mask) <= best_size:
            continue
        pivot, pivot_deg = -1, -1
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            d = bin(adj[v] & mask).count("1")
            if d > pivot_deg:
                pivot, pivot_deg = v, d
            m &= m - 1
        # Exclude branch pushed first so the include branch is explored first.
        stack.append((mask & ~(1 << pivot), chosen))
        stack.append((mask & ~(adj[pivot] | (1 << pivot)), chosen | (1 << pivot)))
    return IndependenceResult(
        alpha=best_size, witness=tuple(_bits(best_set)), node_count=nodes
    )


def brute_force_alpha(g: Graph) -> int:
    """Independence number by exhaustive subset enumeration (n <= 24).

    For weighted graphs this returns the maximum total weight of an
    independent set, which equals the plain independence number of the
    weighted blow-up.  Enumeration is vectorized in chunks so n = 24
    (16.7M subsets) stays affordable.
    """
    if g.n > 24:
        raise SizeLimitError(f"brute force limited to 24 vertices, got {g.n}")
    adj = _adjacency_masks(g)
    best = 0
    chunk = 1 << 20
    for start in range(0, 1 << g.n, chunk):
        masks = np.arange(start, min(start + chunk, 1 << g.n), dtype=np.uint32)
        valid = np.ones(masks.shape, dtype=bool)
        for v in range(g.n):
            chosen = ((masks >> np.uint32(v)) & 1) != 0
            conflicted = (masks & np.uint32(adj[v])) != 0
            valid &= ~(chosen & conflicted)
        if not valid.any():
            continue
        if g.weights is None:
            values = np.bitwise_count(masks[valid])
        else:
            picked = masks[valid]
            values = np.zeros(picked.shape, dtype=np.int32)
            for v in range(g.n):
                values += ((picked >> np.uint32(v)) & 1).astype(np.int32) * g.weight(v)
        best = max(best, int(values.max()))
    return best


def noncontextual_assignment_value(g: Graph, assignment: Mapping[int, int]) -> int:
    """Value of the two-point witness under a deterministic 0/1 assignment.

    Computes sum_i a(i) - sum_{(i,j) in E} a(i) a(j).  Assignments that are
    indicators of independent sets score the set size; the maximum over all
    assignments is the independence number.
    """
    missing = [v for v in range(g.n) if v not in assignment]
    if missing:
        raise ValueError(f"assignment missing vertices {missing}")
    for v in range(g.n):
        if assignment[v] not in (0, 1):
            raise ValueError(f"assignment at vertex {v} must be a bit")
    total = sum(assignment[v] for v in range(g.n))
    total -= sum(assignment[i] * assignment[j] for (i, j) in g.edges)
    return total


def max_assignment_value(g: Graph) -> int:
    """Maximum of noncontextual_assignment_value over all 2^n assignments (n <= 20)."""
    if g.n > 20:
        raise SizeLimitError(f"exhaustive assignment scan limited to 20 vertices, got {g.n}")
    best = None
    for mask in range(1 << g.n):
        ones = bin(mask).count("1")
        penalty = sum(1 for (i, j) in g.edges if (mask >> i) & 1 and (mask >> j) & 1)
        value = ones - penalty
        if best is None or value > best:
            best = value
    return int(best)
