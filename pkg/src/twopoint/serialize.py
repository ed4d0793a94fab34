"""Parsing and deterministic serialization of the file formats.

Graphs travel as JSON ``{"n": int, "edges": [[i,j],...], "weights": {...}?}``
or DIMACS edge lists; event graphs, representations, and experiment records
have JSON forms of their own.  All emitters go through a canonical JSON
writer (sorted keys, floats at 17 significant digits) so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import json
import math
import warnings
from typing import Any, Optional

import numpy as np

from .graphs import (
    EventGraph,
    EventLabel,
    Graph,
    PairEvent,
    SingleEvent,
    build_graph,
)
from .orthorep import OrthoRep
from .simulate import ExperimentRecord, epsilon_prime, epsilon_signaling


class ParseError(ValueError):
    """Malformed input; carries a line number when one is known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def format_float(x: float) -> str:
    """17-significant-digit decimal form, always recognizably a float."""
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize {x}")
    s = f"{x:.17g}"
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def dumps_canonical(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed float format, no whitespace."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps_canonical(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps_canonical(v)}" for k, v in items) + "}"
    raise TypeError(f"cannot serialize object of type {type(obj).__name__}")


# -- graphs -------------------------------------------------------------

def graph_to_jsonable(g: Graph) -> dict:
    out: dict[str, Any] = {"n": g.n, "edges": [[i, j] for (i, j) in g.edges]}
    if g.weights is not None:
        out["weights"] = {str(v): w for v, w in enumerate(g.weights) if w != 1}
    return out


def graph_from_jsonable(data: Any) -> Graph:
    if not isinstance(data, dict):
        raise ParseError("graph JSON must be an object")
    try:
        n = int(data["n"])
        raw_edges = data.get("edges", [])
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError(f"bad graph JSON: {err}") from err
    edges = []
    for e in raw_edges:
        if len(e) != 2:
            raise ParseError(f"edge {e!r} is not a pair")
        edges.append((int(e[0]), int(e[1])))
    seen = set()
    for (i, j) in edges:
        key = (min(i, j), max(i, j))
        if key in seen:
            warnings.warn(f"duplicate edge {key} in input; deduplicated")
        seen.add(key)
    weights = None
    if data.get("weights") is not None:
        weights = {int(v): int(w) for v, w in data["weights"].items()}
    try:
        return build_graph(n, edges, weights)
    except ValueError as err:
        raise ParseError(str(err)) from err


def graph_to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    if g.weights is not None:
        lines += [f"n {v + 1} {w}" for v, w in enumerate(g.weights) if w != 1]
    lines += [f"e {i + 1} {j + 1}" for (i, j) in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_dimacs(text: str) -> Graph:
    n = None
    edges: list[tuple[int, int]] = []
    weights: dict[int, int] = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 4 or parts[1] not in ("edge", "col"):
                raise ParseError(f"malformed problem line {line!r}", lineno)
            try:
                n = int(parts[2])
            except ValueError as err:
                raise ParseError(f"bad vertex count in {line!r}", lineno) from err
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge line before problem line", lineno)
            try:
                i, j = int(parts[1]), int(parts[2])
            except (IndexError, ValueError) as err:
                raise ParseError(f"malformed edge line {line!r}", lineno) from err
            if not (1 <= i <= n and 1 <= j <= n):
                raise ParseError(f"edge ({i},{j}) out of range for n={n}", lineno)
            if i == j:
                raise ParseError(f"self-loop at vertex {i}", lineno)
            key = (min(i, j) - 1, max(i, j) - 1)
            if key in seen:
                warnings.warn(f"duplicate edge {key} in input; deduplicated")
            seen.add(key)
            edges.append(key)
        elif parts[0] == "n":
            try:
                v, w = int(parts[1]), int(parts[2])
            except (IndexError, ValueError) as err:
                raise ParseError(f"malformed weight line {line!r}", lineno) from err
            weights[v - 1] = w
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if n is None:
        raise ParseError("missing problem line")
    try:
        return build_graph(n, edges, weights or None)
    except ValueError as err:
        raise ParseError(str(err)) from err


def parse_graph(text: str, fmt: str = "auto") -> Graph:
    """Parse a graph from JSON or DIMACS text; ``auto`` sniffs the format."""
    if fmt == "auto":
        stripped = text.lstrip()
        fmt = "json" if stripped.startswith("{") else "dimacs"
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON: {err.msg}", err.lineno) from err
        return graph_from_jsonable(data)
    if fmt == "dimacs":
        return graph_from_dimacs(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def emit_graph(g: Graph, fmt: str = "json") -> str:
    if fmt == "json":
        return dumps_canonical(graph_to_jsonable(g)) + "\n"
    if fmt == "dimacs":
        return graph_to_dimacs(g)
    raise ValueError(f"unknown graph format {fmt!r}")


# -- event graphs -------------------------------------------------------

def _label_to_jsonable(label: EventLabel) -> dict:
    if isinstance(label, SingleEvent):
        return {"kind": "single", "obs": [label.obs], "out": [label.outcome]}
    return {
        "kind": "pair",
        "obs": [label.obs_a, label.obs_b],
        "out": [label.outcome_a, label.outcome_b],
    }


def _label_from_jsonable(data: dict) -> EventLabel:
    kind = data.get("kind")
    obs = data.get("obs", [])
    out = data.get("out", [])
    if kind == "single":
        return SingleEvent(int(obs[0]), int(out[0]))
    if kind == "pair":
        return PairEvent(int(obs[0]), int(obs[1]), int(out[0]), int(out[1]))
    raise ParseError(f"unknown label kind {kind!r}")


def event_graph_to_jsonable(eg: EventGraph) -> dict:
    return {
        "source": graph_to_jsonable(eg.source),
        "labels": [_label_to_jsonable(lab) for lab in eg.labels],
        "n": eg.n,
        "edges": [[i, j] for (i, j) in eg.edges],
    }


def event_graph_from_jsonable(data: dict) -> EventGraph:
    source = graph_from_jsonable(data["source"])
    labels = tuple(_label_from_jsonable(lab) for lab in data["labels"])
    edges = tuple((int(i), int(j)) for i, j in data["edges"])
    return EventGraph(source=source, labels=labels, edges=edges)


# -- representations ----------------------------------------------------

def _vector_to_jsonable(vec: np.ndarray) -> list:
    if np.iscomplexobj(vec):
        return [[float(x.real), float(x.imag)] for x in vec]
    return [float(x) for x in vec]


def _vector_from_jsonable(data: list) -> np.ndarray:
    if data and isinstance(data[0], list):
        return np.array([complex(re, im) for re, im in data])
    return np.array([float(x) for x in data])


def orthorep_to_jsonable(rep: OrthoRep) -> dict:
    return {
        "d": rep.dimension,
        "psi": _vector_to_jsonable(rep.psi),
        "vectors": [_vector_to_jsonable(rep.vectors[v]) for v in range(rep.n)],
    }


def orthorep_from_jsonable(data: dict) -> OrthoRep:
    psi = _vector_from_jsonable(data["psi"])
    vectors = np.array([_vector_from_jsonable(v) for v in data["vectors"]])
    return OrthoRep(dimension=int(data["d"]), psi=psi, vectors=vectors)


# -- experiment records -------------------------------------------------

def _signaling_to_jsonable(entries) -> list:
    return [
        {
            "fixed": e.fixed,
            "varied_a": e.varied_a,
            "varied_b": e.varied_b,
            "outcome": e.outcome,
            "difference": e.difference,
            "stderr": e.stderr,
        }
        for e in entries
    ]


def record_to_jsonable(record: ExperimentRecord) -> dict:
    singles = {}
    for v in range(record.graph.n):
        n0, n1 = record.single_counts[v]
        p, se = record.single_estimate(v)
        singles[str(v)] = {"n0": n0, "n1": n1, "p1": p, "stderr": se}
    pairs = {}
    for (first, second), counts in sorted(record.pair_counts.items()):
        entry: dict[str, Any] = {"counts": {}, "p": {}, "stderr": {}}
        for (a, b), c in sorted(counts.items()):
            key = f"{a}{b}"
            p, se = record.pair_estimate(first, second, a, b)
            entry["counts"][key] = c
            entry["p"][key] = p
            entry["stderr"][key] = se
        pairs[f"{first},{second}"] = entry
    s_value, s_err = record.s_estimate()
    return {
        "graph": graph_to_jsonable(record.graph),
        "scheme": record.scheme,
        "seed": record.seed,
        "shots": record.shots,
        "noise": {
            "depolarizing_p": record.noise.depolarizing_p,
            "vector_misalignment_angle": record.noise.vector_misalignment_angle,
            "outcome_flip_p": record.noise.outcome_flip_p,
        },
        "singles": singles,
        "pairs": pairs,
        "s_estimate": s_value,
        "s_stderr": s_err,
        "epsilon": _signaling_to_jsonable(epsilon_signaling(record)),
        "epsilon_prime": _signaling_to_jsonable(epsilon_prime(record)),
    }
