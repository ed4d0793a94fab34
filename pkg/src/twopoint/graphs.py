"""Graph data model and the two-point event-graph compiler.

A :class:`Graph` is a plain undirected simple graph with optional positive
integer vertex weights.  :func:`build_two_point_graph` compiles a graph G into
the event graph G' whose vertices are measurement events (single-observable
outcomes and pair-outcome events, three per edge) and whose edges encode
exclusivity of events.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``edges`` holds sorted, deduplicated pairs in lexicographic order.
    ``weights`` is either None (all weights 1) or a length-``n`` tuple of
    positive integers.  Instances are immutable and safe to share.
    """

    n: int
    edges: tuple[Edge, ...]
    weights: Optional[tuple[int, ...]] = None

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def weight(self, v: int) -> int:
        return 1 if self.weights is None else self.weights[v]

    def degree(self, v: int) -> int:
        return sum(1 for (i, j) in self.edges if i == v or j == v)

    def neighbors(self, v: int) -> tuple[int, ...]:
        out = [j for (i, j) in self.edges if i == v] + [i for (i, j) in self.edges if j == v]
        return tuple(sorted(out))


def build_graph(
    n: int,
    edges: Iterable[Iterable[int]],
    weights: Optional[Mapping[int, int]] = None,
) -> Graph:
    """Validate and normalize a graph description.

    Edges are stored with the smaller endpoint first and deduplicated.
    Weights may be given for a subset of vertices; missing vertices get
    weight 1, and an all-ones weighting normalizes to unweighted.

    Raises ValueError on out-of-range endpoints, self-loops, or weights < 1.
    """
    if n < 1:
        raise ValueError(f"graph needs at least one vertex, got n={n}")
    norm = set()
    for e in edges:
        i, j = e
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-loop at vertex {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i},{j}) out of range for n={n}")
        norm.add((min(i, j), max(i, j)))
    wtuple: Optional[tuple[int, ...]] = None
    if weights is not None:
        full = [1] * n
        for v, w in weights.items():
            v, w = int(v), int(w)
            if not (0 <= v < n):
                raise ValueError(f"weight for out-of-range vertex {v}")
            if w < 1:
                raise ValueError(f"weight of vertex {v} must be >= 1, got {w}")
            full[v] = w
        if any(w != 1 for w in full):
            wtuple = tuple(full)
    return Graph(n=n, edges=tuple(sorted(norm)), weights=wtuple)


def complete_graph(n: int) -> Graph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complement(g: Graph) -> Graph:
    """Edge present in the output iff absent in the input; weights dropped."""
    present = g.edge_set
    edges = [
        (i, j)
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if (i, j) not in present
    ]
    return build_graph(g.n, edges)


def expand_weighted(g: Graph) -> tuple[Graph, tuple[int, ...]]:
    """Blow up integer vertex weights into vertex copies.

    A vertex of weight w becomes w mutually non-adjacent copies, each copy
    adjacent to every copy of every neighbor of the original vertex.  Returns
    the unweighted blow-up together with a provenance map: entry k is the
    source vertex of new vertex k.  This is the unique expansion for which
    the independence number and the Lovasz number of the blow-up equal the
    weighted invariants of the input.
    """
    first = []
    provenance = []
    for v in range(g.n):
        first.append(len(provenance))
        provenance.extend([v] * g.weight(v))
    copies = [range(first[v], first[v] + g.weight(v)) for v in range(g.n)]
    edges = []
    for (i, j) in g.edges:
        for a in copies[i]:
            for b in copies[j]:
                edges.append((a, b))
    return build_graph(len(provenance), edges), tuple(provenance)


@dataclass(frozen=True)
class SingleEvent:
    """Outcome assignment to one observable: ``outcome | obs``."""

    obs: int
    outcome: int

    def __post_init__(self) -> None:
        if self.outcome not in (0, 1):
            raise ValueError(f"outcome must be a bit, got {self.outcome}")

    def assignments(self) -> dict[int, int]:
        return {self.obs: self.outcome}


@dataclass(frozen=True)
class PairEvent:
    """Joint outcome assignment to two observables measured together.

    By convention ``obs_a < obs_b``; pair events are only meaningful for
    observables joined by an edge of the source graph.
    """

    obs_a: int
    obs_b: int
    outcome_a: int
    outcome_b: int

    def __post_init__(self) -> None:
        if self.obs_a >= self.obs_b:
            raise ValueError(f"pair events require obs_a < obs_b, got ({self.obs_a},{self.obs_b})")
        if self.outcome_a not in (0, 1) or self.outcome_b not in (0, 1):
            raise ValueError("pair outcomes must be bits")

    def assignments(self) -> dict[int, int]:
        return {self.obs_a: self.outcome_a, self.obs_b: self.outcome_b}


EventLabel = Union[SingleEvent, PairEvent]


def label_is_valid(label: EventLabel, g: Graph) -> bool:
    """Whether the label refers to observables (and, for pairs, an edge) of g."""
    if isinstance(label, SingleEvent):
        return 0 <= label.obs < g.n
    return (label.obs_a, label.obs_b) in g.edge_set


def are_exclusive(e1: EventLabel, e2: EventLabel, g: Graph) -> bool:
    """Decide whether two measurement events are exclusive.

    Two events are exclusive when they cannot both occur, i.e. they are
    alternative outcomes of one sharp measurement.  That happens iff

    (a) some observable appears in both events with different outcomes, or
    (b) an observable of the first and an observable of the second are
        adjacent in g and both are assigned outcome 1 (adjacent observables
        carry orthogonal projectors, so their 1-outcomes cannot co-occur).

    The relation is symmetric, and irreflexive on the labels used by the
    two-point compilation.
    """
    a1 = e1.assignments()
    a2 = e2.assignments()
    for obs, out in a1.items():
        if obs in a2 and a2[obs] != out:
            return True
    eset = g.edge_set
    for o1, v1 in a1.items():
        if v1 != 1:
            continue
        for o2, v2 in a2.items():
            if v2 == 1 and o1 != o2 and (min(o1, o2), max(o1, o2)) in eset:
                return True
    return False


PAIR_OUTCOMES: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0))


@dataclass(frozen=True)
class EventGraph:
    """The compiled two-point event graph G' of a source graph G.

    Vertex order: one ``SingleEvent(i, 1)`` per source vertex in vertex
    order, then per source edge (in edge order) the three pair events with
    outcomes (0,0), (0,1), (1,0).  Edges are exactly the exclusive label
    pairs.
    """

    source: Graph
    labels: tuple[EventLabel, ...]
    edges: tuple[Edge, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def as_graph(self) -> Graph:
        """The event graph as a plain unweighted graph."""
        return Graph(n=self.n, edges=self.edges, weights=None)


def build_two_point_graph(g: Graph) -> EventGraph:
    """Compile G into its two-point event graph G'.

    The result has n(G) + 3|E(G)| vertices and carries one exclusivity edge
    for every label pair satisfying :func:`are_exclusive`.  Weighted graphs
    must be expanded with :func:`expand_weighted` first.
    """
    if g.is_weighted:
        raise ValueError("expand weighted graphs with expand_weighted before compiling")
    labels: list[EventLabel] = [SingleEvent(i, 1) for i in range(g.n)]
    for (i, j) in g.edges:
        for (a, b) in PAIR_OUTCOMES:
            labels.append(PairEvent(i, j, a, b))
    edges = []
    for p in range(len(labels)):
        for q in range(p + 1, len(labels)):
            if are_exclusive(labels[p], labels[q], g):
                edges.append((p, q))
    return EventGraph(source=g, labels=tuple(labels), edges=tuple(edges))
