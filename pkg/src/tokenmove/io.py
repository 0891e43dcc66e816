"""Line-oriented text formats for instances, sequences, maps and reduction inputs.

Every format uses whitespace-separated tokens, one record per line, and
``#`` comments.  Parse errors carry the offending line number.
"""

from __future__ import annotations

from typing import Iterator

from .errors import InputError, ParseError
from .graph import VARIANTS, Graph, Instance, Move, MoveSequence
from .preprocess import ContractionMap
from .reductions import MSIInstance, RBDSInstance


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _ints(tokens, no) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", no) from None


def _arity(tokens, count, no):
    if len(tokens) != count:
        raise ParseError(f"{tokens[0]} takes {count - 1} argument(s)", no)


def _once(seen: dict, key: str, no: int):
    if key in seen:
        raise ParseError(f"repeated {key!r} line (first on line {seen[key]})", no)
    seen[key] = no


def _edge_list(n, raw_edges, directed):
    edges, where = [], {}
    for no, u, v in raw_edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge {u} {v} uses a vertex outside 0..{n - 1}", no)
        if u == v:
            raise ParseError(f"self-loop at {u}", no)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in where:
            raise ParseError(f"duplicate edge {u} {v} (first on line {where[key]})", no)
        where[key] = no
        edges.append(key)
    return edges


# ---------------------------------------------------------------- instances

def parse_instance(text: str) -> Instance:
    seen: dict = {}
    problem = n = budget = None
    source = target = None
    raw_edges = []
    for no, tok in _records(text):
        key = tok[0]
        if key == "problem":
            _arity(tok, 2, no)
            _once(seen, key, no)
            if tok[1] not in VARIANTS:
                raise ParseError(f"unknown problem {tok[1]!r}", no)
            problem = tok[1]
        elif key == "vertices":
            _arity(tok, 2, no)
            _once(seen, key, no)
            (n,) = _ints(tok[1:], no)
            if n < 0:
                raise ParseError("vertex count must be non-negative", no)
        elif key == "edge":
            _arity(tok, 3, no)
            u, v = _ints(tok[1:], no)
            raw_edges.append((no, u, v))
        elif key in ("source", "target"):
            _once(seen, key, no)
            vals = _ints(tok[1:], no)
            if key == "source":
                source = vals
            else:
                target = vals
        elif key == "budget":
            _arity(tok, 2, no)
            _once(seen, key, no)
            (budget,) = _ints(tok[1:], no)
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    for key in ("problem", "vertices", "source", "target", "budget"):
        if key not in seen:
            raise ParseError(f"missing {key!r} line")
    directed, labelled = VARIANTS[problem]
    edges = _edge_list(n, raw_edges, directed)
    graph = Graph.from_edges(n, edges, directed)
    return Instance(graph, labelled, source, target, budget)


def serialize_instance(instance: Instance) -> str:
    g = instance.graph
    lines = [f"problem {instance.variant}", f"vertices {g.vertex_count}"]
    lines += [f"edge {u} {v}" for u, v in g.edges()]
    lines.append(" ".join(["source"] + [str(v) for v in instance.source]))
    lines.append(" ".join(["target"] + [str(v) for v in instance.target]))
    lines.append(f"budget {instance.budget}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- sequences

def parse_sequence(text: str) -> MoveSequence:
    declared = None
    moves = []
    for no, tok in _records(text):
        if tok[0] == "moves":
            _arity(tok, 2, no)
            if declared is not None:
                raise ParseError("repeated 'moves' line", no)
            (declared,) = _ints(tok[1:], no)
        elif tok[0] == "move":
            if ":" not in tok or tok.index(":") != 4:
                raise ParseError("expected 'move <label|-> <s> <t> : <path>'", no)
            label = None if tok[1] == "-" else _ints(tok[1:2], no)[0]
            s, t = _ints(tok[2:4], no)
            path = _ints(tok[5:], no)
            try:
                moves.append(Move(s, t, tuple(path), label))
            except InputError as exc:
                raise ParseError(str(exc), no) from None
        else:
            raise ParseError(f"unknown keyword {tok[0]!r}", no)
    if declared is None:
        raise ParseError("missing 'moves' line")
    if declared != len(moves):
        raise ParseError(f"'moves {declared}' but {len(moves)} move lines")
    return MoveSequence(moves)


def serialize_sequence(seq) -> str:
    moves = list(seq)
    lines = [f"moves {len(moves)}"]
    for m in moves:
        label = "-" if m.label is None else str(m.label)
        path = " ".join(map(str, m.path))
        lines.append(f"move {label} {m.source_vertex} {m.target_vertex} : {path}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- maps

def serialize_map(kept, shortcuts=()) -> str:
    """``kept`` lists original vertices by kernel index; shortcuts are (u, w, path)."""
    lines = [f"keep {kv} {ov}" for kv, ov in enumerate(kept)]
    for u, w, path in shortcuts:
        lines.append(f"shortcut {u} {w} : {' '.join(map(str, path))}")
    return "\n".join(lines) + "\n"


def contraction_map_text(cmap: ContractionMap) -> str:
    return serialize_map(cmap.kept_vertices, cmap.shortcuts())


def parse_map(text: str, directed: bool = False) -> ContractionMap:
    kept = {}
    shortcut = {}
    for no, tok in _records(text):
        if tok[0] == "keep":
            _arity(tok, 3, no)
            kv, ov = _ints(tok[1:], no)
            if kv in kept:
                raise ParseError(f"kernel vertex {kv} kept twice", no)
            kept[kv] = ov
        elif tok[0] == "shortcut":
            if len(tok) < 5 or tok[3] != ":":
                raise ParseError("expected 'shortcut <u> <w> : <path>'", no)
            u, w = _ints(tok[1:3], no)
            path = tuple(_ints(tok[4:], no))
            shortcut[(u, w)] = path
            if not directed:
                shortcut[(w, u)] = path[::-1]
        else:
            raise ParseError(f"unknown keyword {tok[0]!r}", no)
    if sorted(kept) != list(range(len(kept))):
        raise ParseError("kernel vertices must be 0..n-1")
    return ContractionMap(tuple(kept[i] for i in range(len(kept))), shortcut, directed)


# ---------------------------------------------------------------- reduction inputs

def parse_rbds(text: str) -> RBDSInstance:
    seen: dict = {}
    vals = {}
    edges = []
    for no, tok in _records(text):
        key = tok[0]
        if key in ("blue", "red", "k"):
            _arity(tok, 2, no)
            _once(seen, key, no)
            vals[key] = _ints(tok[1:], no)[0]
        elif key == "edge":
            _arity(tok, 3, no)
            edges.append(tuple(_ints(tok[1:], no)))
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    for key in ("blue", "red", "k"):
        if key not in vals:
            raise ParseError(f"missing {key!r} line")
    return RBDSInstance(vals["blue"], vals["red"], tuple(edges), vals["k"])


def serialize_rbds(rbds: RBDSInstance) -> str:
    lines = [f"blue {rbds.blue}", f"red {rbds.red}"]
    lines += [f"edge {b} {r}" for b, r in rbds.edges]
    lines.append(f"k {rbds.k}")
    return "\n".join(lines) + "\n"


def parse_msi(text: str) -> MSIInstance:
    seen: dict = {}
    c = root = None
    colors = {}
    gedges, hedges = [], []
    for no, tok in _records(text):
        key = tok[0]
        if key == "colors":
            _arity(tok, 2, no)
            _once(seen, key, no)
            (c,) = _ints(tok[1:], no)
        elif key == "root":
            _arity(tok, 2, no)
            _once(seen, key, no)
            (root,) = _ints(tok[1:], no)
        elif key == "gvertex":
            _arity(tok, 3, no)
            v, col = _ints(tok[1:], no)
            if v in colors:
                raise ParseError(f"vertex {v} declared twice", no)
            colors[v] = col
        elif key == "gedge":
            _arity(tok, 3, no)
            gedges.append((no, *_ints(tok[1:], no)))
        elif key == "hedge":
            _arity(tok, 3, no)
            hedges.append((no, *_ints(tok[1:], no)))
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    if c is None:
        raise ParseError("missing 'colors' line")
    n = len(colors)
    if sorted(colors) != list(range(n)):
        raise ParseError("gvertex ids must be 0..n-1")
    gm = Graph.from_edges(n, _edge_list(n, gedges, False))
    h = Graph.from_edges(c, _edge_list(c, hedges, False))
    return MSIInstance(gm, tuple(colors[v] for v in range(n)), h, 0 if root is None else root)


def serialize_msi(msi: MSIInstance) -> str:
    lines = [f"colors {msi.k}"]
    lines += [f"gvertex {v} {col}" for v, col in enumerate(msi.colors)]
    lines += [f"gedge {u} {v}" for u, v in msi.gm.edges()]
    lines += [f"hedge {i} {j}" for i, j in msi.h.edges()]
    lines.append(f"root {msi.root}")
    return "\n".join(lines) + "\n"

