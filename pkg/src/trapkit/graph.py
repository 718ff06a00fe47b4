"""Corolla-ordered decorated directed graphs and their trace calculus.

A graph is a finite family of vertices and edges.  Edges come in five kinds:

* ``internal`` -- source and target vertices;
* ``input``    -- target vertex only, carries a global input index;
* ``output``   -- source vertex only, carries a global output index;
* ``io``       -- no endpoints, carries both a global input and output index;
* ``loop``     -- no endpoints, no indices.

Global input indices over the input/io edges are a bijection onto ``1..k``
and output indices onto ``1..l``.  Each vertex totally orders its incident
edge ends through ``in_slots``/``out_slots`` (the corolla orders), and may
carry an opaque decoration.

Graphs are immutable values: every operation returns a new graph with
freshly numbered vertex/edge ids.  Equality of the underlying isoclasses is
decided by :func:`iso_eq` / :func:`canonical_form`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping

from . import perm
from .perm import Perm

INTERNAL = "internal"
INPUT = "input"
OUTPUT = "output"
IO = "io"
LOOP = "loop"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    kind: str
    source: int | None = None
    target: int | None = None
    in_index: int | None = None
    out_index: int | None = None


@dataclass(frozen=True)
class Vertex:
    decoration: Any
    in_slots: tuple[int, ...]
    out_slots: tuple[int, ...]


def decoration_key(d: Any) -> tuple:
    """A deterministic, comparable key for a decoration (exact equality)."""
    if d is None:
        return ("none",)
    keyfn = getattr(d, "decoration_key", None)
    if callable(keyfn):
        return keyfn()
    if isinstance(d, bool):
        return ("bool", d)
    if isinstance(d, (str, int, float)):
        return (type(d).__name__, d)
    if isinstance(d, tuple):
        return ("tuple",) + tuple(decoration_key(x) for x in d)
    raise TypeError(f"decoration of type {type(d).__name__} has no key")


class Graph:
    """An immutable decorated graph.  Use the module functions to build."""

    __slots__ = ("vertices", "edges", "_cert")

    def __init__(self, vertices: Mapping[int, Vertex], edges: Mapping[int, Edge]):
        self.vertices: dict[int, Vertex] = dict(vertices)
        self.edges: dict[int, Edge] = dict(edges)
        self._cert: tuple | None = None

    # -- basic queries -------------------------------------------------

    @property
    def k(self) -> int:
        return sum(1 for e in self.edges.values() if e.kind in (INPUT, IO))

    @property
    def l(self) -> int:
        return sum(1 for e in self.edges.values() if e.kind in (OUTPUT, IO))

    @property
    def arity(self) -> tuple[int, int]:
        return (self.k, self.l)

    def is_solar(self) -> bool:
        return not any(e.kind in (IO, LOOP) for e in self.edges.values())

    def internal_edges(self) -> list[int]:
        return [i for i, e in sorted(self.edges.items()) if e.kind == INTERNAL]

    def input_edge(self, i: int) -> int:
        for eid, e in self.edges.items():
            if e.kind in (INPUT, IO) and e.in_index == i:
                return eid
        raise GraphError(f"no input edge with index {i}")

    def output_edge(self, j: int) -> int:
        for eid, e in self.edges.items():
            if e.kind in (OUTPUT, IO) and e.out_index == j:
                return eid
        raise GraphError(f"no output edge with index {j}")

    def in_slot_pos(self, v: int, eid: int) -> int:
        return self.vertices[v].in_slots.index(eid) + 1

    def out_slot_pos(self, v: int, eid: int) -> int:
        return self.vertices[v].out_slots.index(eid) + 1

    def decoration_key(self) -> tuple:
        return ("graph", self.certificate())

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)}, k={self.k}, l={self.l})"

    # -- canonical form ------------------------------------------------

    def structure_key(self) -> tuple:
        """Exact structural encoding under the current vertex numbering."""
        order = {v: i for i, v in enumerate(sorted(self.vertices))}
        return _structure_key(self, order)

    def certificate(self) -> tuple:
        if self._cert is None:
            self._cert = _certificate(self)
        return self._cert


def _validate(g: Graph) -> None:
    in_indices, out_indices = [], []
    for eid, e in g.edges.items():
        if e.kind == INTERNAL:
            ok = e.source in g.vertices and e.target in g.vertices
            ok = ok and e.in_index is None and e.out_index is None
        elif e.kind == INPUT:
            ok = e.source is None and e.target in g.vertices and e.in_index is not None
            in_indices.append(e.in_index)
        elif e.kind == OUTPUT:
            ok = e.target is None and e.source in g.vertices and e.out_index is not None
            out_indices.append(e.out_index)
        elif e.kind == IO:
            ok = e.source is None and e.target is None
            ok = ok and e.in_index is not None and e.out_index is not None
            in_indices.append(e.in_index)
            out_indices.append(e.out_index)
        elif e.kind == LOOP:
            ok = all(x is None for x in (e.source, e.target, e.in_index, e.out_index))
        else:
            ok = False
        if not ok:
            raise GraphError(f"malformed edge {eid}: {e}")
    if sorted(in_indices) != list(range(1, len(in_indices) + 1)):
        raise GraphError(f"input indices {sorted(in_indices)} are not 1..k")
    if sorted(out_indices) != list(range(1, len(out_indices) + 1)):
        raise GraphError(f"output indices {sorted(out_indices)} are not 1..l")
    # every slot of every vertex is one incident edge end, and conversely
    in_ends = {(e.target, eid) for eid, e in g.edges.items() if e.target is not None}
    out_ends = {(e.source, eid) for eid, e in g.edges.items() if e.source is not None}
    slot_in_ends, slot_out_ends = set(), set()
    for vid, v in g.vertices.items():
        for eid in v.in_slots:
            if (vid, eid) in slot_in_ends:
                raise GraphError(f"edge {eid} appears twice in in_slots of vertex {vid}")
            slot_in_ends.add((vid, eid))
        for eid in v.out_slots:
            if (vid, eid) in slot_out_ends:
                raise GraphError(f"edge {eid} appears twice in out_slots of vertex {vid}")
            slot_out_ends.add((vid, eid))
    if slot_in_ends != in_ends:
        raise GraphError("in_slots do not match edge targets")
    if slot_out_ends != out_ends:
        raise GraphError("out_slots do not match edge sources")


def _mk(vertices: Mapping[int, Vertex], edges: Mapping[int, Edge], check: bool = True) -> Graph:
    """Build a graph, renumbering vertices and edges to 0..n-1 / 0..m-1."""
    vmap = {v: i for i, v in enumerate(sorted(vertices))}
    emap = {e: i for i, e in enumerate(sorted(edges))}
    new_vertices = {
        vmap[vid]: Vertex(
            v.decoration,
            tuple(emap[e] for e in v.in_slots),
            tuple(emap[e] for e in v.out_slots),
        )
        for vid, v in vertices.items()
    }
    new_edges = {
        emap[eid]: replace(
            e,
            source=None if e.source is None else vmap[e.source],
            target=None if e.target is None else vmap[e.target],
        )
        for eid, e in edges.items()
    }
    g = Graph(new_vertices, new_edges)
    if check:
        _validate(g)
    return g


# -- constructors ------------------------------------------------------


def make_graph(vertices: Mapping[int, Vertex], edges: Mapping[int, Edge]) -> Graph:
    """Validate and normalise an explicitly described graph."""
    return _mk(vertices, edges)


def corolla(decoration: Any, k: int, l: int) -> Graph:
    """Single vertex with ``k`` inputs and ``l`` outputs in slot order."""
    if k < 0 or l < 0:
        raise GraphError("arities must be nonnegative")
    edges: dict[int, Edge] = {}
    for m in range(1, k + 1):
        edges[m] = Edge(INPUT, target=0, in_index=m)
    for m in range(1, l + 1):
        edges[k + m] = Edge(OUTPUT, source=0, out_index=m)
    vert = Vertex(decoration, tuple(range(1, k + 1)), tuple(range(k + 1, k + l + 1)))
    return _mk({0: vert}, edges)


def unit_graph() -> Graph:
    return _mk({}, {0: Edge(IO, in_index=1, out_index=1)})


def loop_graph() -> Graph:
    return _mk({}, {0: Edge(LOOP)})


def empty_graph() -> Graph:
    return _mk({}, {})


def wires_graph(pairing: Perm) -> Graph:
    """w parallel identity wires; wire m runs input m -> output pairing(m)."""
    edges = {
        m: Edge(IO, in_index=m + 1, out_index=pairing[m])
        for m in range(len(pairing))
    }
    return _mk({}, edges)


# -- symmetric actions -------------------------------------------------


def act(sigma: Perm, g: Graph, tau: Perm) -> Graph:
    """Relabel global indices: out_index -> sigma(out_index), in_index -> tau^-1(in_index)."""
    if len(sigma) != g.l or len(tau) != g.k:
        raise GraphError(
            f"degree mismatch: sigma {len(sigma)} vs l={g.l}, tau {len(tau)} vs k={g.k}"
        )
    tau_inv = perm.inverse(tau)
    edges = {}
    for eid, e in g.edges.items():
        new_in = None if e.in_index is None else tau_inv[e.in_index - 1]
        new_out = None if e.out_index is None else sigma[e.out_index - 1]
        edges[eid] = replace(e, in_index=new_in, out_index=new_out)
    return _mk(g.vertices, edges)


def vertex_act(sigma: Perm, g: Graph, vid: int, tau: Perm) -> Graph:
    """Permute the corolla orders at one vertex (decoration unchanged)."""
    if vid not in g.vertices:
        raise GraphError(f"no vertex {vid}")
    v = g.vertices[vid]
    if len(sigma) != len(v.out_slots) or len(tau) != len(v.in_slots):
        raise GraphError("degree mismatch with vertex slot counts")
    new_out = perm.apply(sigma, v.out_slots)
    new_in = tuple(v.in_slots[tau[m] - 1] for m in range(len(tau)))
    vertices = dict(g.vertices)
    vertices[vid] = Vertex(v.decoration, new_in, new_out)
    return _mk(vertices, g.edges)


# -- horizontal concatenation ------------------------------------------


def hconcat(g: Graph, h: Graph) -> Graph:
    """Disjoint union; ``h``'s global indices are shifted after ``g``'s."""
    nv, ne = max(g.vertices, default=-1) + 1, max(g.edges, default=-1) + 1
    kg, lg = g.arity
    vertices = dict(g.vertices)
    edges = dict(g.edges)
    for vid, v in h.vertices.items():
        vertices[vid + nv] = Vertex(
            v.decoration,
            tuple(e + ne for e in v.in_slots),
            tuple(e + ne for e in v.out_slots),
        )
    for eid, e in h.edges.items():
        edges[eid + ne] = replace(
            e,
            source=None if e.source is None else e.source + nv,
            target=None if e.target is None else e.target + nv,
            in_index=None if e.in_index is None else e.in_index + kg,
            out_index=None if e.out_index is None else e.out_index + lg,
        )
    return _mk(vertices, edges)


def hconcat_all(gs: Iterable[Graph]) -> Graph:
    out = empty_graph()
    for g in gs:
        out = hconcat(out, g)
    return out


# -- partial trace -----------------------------------------------------


def _shift_down(value: int | None, threshold: int) -> int | None:
    if value is None:
        return None
    return value - 1 if value >= threshold else value


def partial_trace(g: Graph, i: int, j: int) -> Graph:
    """Glue global input ``i`` onto global output ``j``.

    The five cases distinguish whether the traced ends are carried by
    plain input/output edges or by io edges; the leftover indices close up
    (indices above ``i``/``j`` decrement).
    """
    if not (1 <= i <= g.k and 1 <= j <= g.l):
        raise GraphError(f"trace indices ({i},{j}) out of range for arity {g.arity}")
    ei_id, fj_id = g.input_edge(i), g.output_edge(j)
    ei, fj = g.edges[ei_id], g.edges[fj_id]
    edges = dict(g.edges)
    vertices = dict(g.vertices)
    new_id = max(edges, default=-1) + 1

    def subst_slots(old: int, new: int) -> None:
        for vid, v in vertices.items():
            if old in v.in_slots or old in v.out_slots:
                vertices[vid] = Vertex(
                    v.decoration,
                    tuple(new if e == old else e for e in v.in_slots),
                    tuple(new if e == old else e for e in v.out_slots),
                )

    if ei.kind == INPUT and fj.kind == OUTPUT:
        merged = Edge(INTERNAL, source=fj.source, target=ei.target)
    elif ei.kind == IO and fj.kind == OUTPUT:
        merged = Edge(OUTPUT, source=fj.source, out_index=_shift_down(ei.out_index, j))
    elif ei.kind == INPUT and fj.kind == IO:
        merged = Edge(INPUT, target=ei.target, in_index=_shift_down(fj.in_index, i))
    elif ei_id != fj_id:  # both io, distinct
        merged = Edge(
            IO,
            in_index=_shift_down(fj.in_index, i),
            out_index=_shift_down(ei.out_index, j),
        )
    else:  # one io edge traced with itself
        merged = Edge(LOOP)

    del edges[ei_id]
    edges.pop(fj_id, None)
    edges[new_id] = merged
    for eid in list(edges):
        if eid == new_id:
            continue
        e = edges[eid]
        edges[eid] = replace(
            e,
            in_index=_shift_down(e.in_index, i),
            out_index=_shift_down(e.out_index, j),
        )
    if merged.target is not None:
        subst_slots(ei_id, new_id)
    if merged.source is not None:
        subst_slots(fj_id, new_id)
    return _mk(vertices, edges)


# -- vertical concatenation and generalised trace ----------------------


def vconcat(h: Graph, g: Graph, via_traces: bool = False) -> Graph:
    """Compose ``h`` after ``g``: glue output m of ``g`` to input m of ``h``."""
    if g.l != h.k:
        raise GraphError(f"arity mismatch: o(g)={g.l} vs i(h)={h.k}")
    if via_traces:
        out = hconcat(g, h)
        k = g.k
        for m in range(g.l, 0, -1):
            out = partial_trace(out, k + m, m)
        return out

    prod = hconcat(g, h)  # normalises ids; g's parts come first
    kg, lg = g.arity
    edges = dict(prod.edges)
    vertices = dict(prod.vertices)
    next_id = max(edges, default=-1) + 1
    replacements: list[tuple[int, int, int]] = []  # (g-side edge, h-side edge, merged)
    for m in range(1, lg + 1):
        f_id = prod.output_edge(m)
        e_id = prod.input_edge(kg + m)
        f, e = edges[f_id], edges[e_id]
        if f.kind == OUTPUT and e.kind == INPUT:
            merged = Edge(INTERNAL, source=f.source, target=e.target)
        elif f.kind == IO and e.kind == INPUT:
            merged = Edge(INPUT, target=e.target, in_index=f.in_index)
        elif f.kind == OUTPUT and e.kind == IO:
            merged = Edge(OUTPUT, source=f.source, out_index=e.out_index - lg)
        else:
            merged = Edge(IO, in_index=f.in_index, out_index=e.out_index - lg)
        edges[next_id] = merged
        replacements.append((f_id, e_id, next_id))
        next_id += 1
    merged_ids = {new_id for _, _, new_id in replacements}
    for f_id, e_id, new_id in replacements:
        for vid, v in list(vertices.items()):
            if f_id in v.out_slots or e_id in v.in_slots:
                vertices[vid] = Vertex(
                    v.decoration,
                    tuple(new_id if x == e_id else x for x in v.in_slots),
                    tuple(new_id if x == f_id else x for x in v.out_slots),
                )
        del edges[f_id]
        del edges[e_id]
    # g's inputs keep 1..kg; the surviving outputs of h shift down by lg
    for eid, e in list(edges.items()):
        if eid in merged_ids:
            continue
        if e.out_index is not None and e.out_index > lg:
            edges[eid] = replace(e, out_index=e.out_index - lg)
    return _mk(vertices, edges)


def gtrace(g: Graph) -> Graph:
    if g.k != g.l:
        raise GraphError(f"generalised trace needs k = l, got {g.arity}")
    out = g
    for m in range(g.k, 0, -1):
        out = partial_trace(out, m, m)
    return out


# -- solar decomposition -----------------------------------------------


@dataclass(frozen=True)
class SolarDecomposition:
    core: Graph
    sh_in: Perm
    sh_out: Perm
    wire_perm: Perm  # wire m (in in-index order) exits at wire output wire_perm(m)
    loop_count: int

    @property
    def wire_count(self) -> int:
        return len(self.wire_perm)


def is_solar(g: Graph) -> bool:
    return g.is_solar()


def solar_decompose(g: Graph) -> SolarDecomposition:
    """Split off loops, io wires and index shuffles from the solar core.

    ``sh_in``/``sh_out`` are block shuffles sending core slots (first block)
    and wire slots (second block) to their global indices.  The original
    graph is recovered (up to isomorphism) as::

        hconcat(loops, act(sh_out, hconcat(core, wires_graph(wire_perm)),
                           inverse(sh_in)))
    """
    ios = sorted(
        (e.in_index, e.out_index) for e in g.edges.values() if e.kind == IO
    )
    loop_count = sum(1 for e in g.edges.values() if e.kind == LOOP)
    core_in = sorted(e.in_index for e in g.edges.values() if e.kind == INPUT)
    core_out = sorted(e.out_index for e in g.edges.values() if e.kind == OUTPUT)
    in_rank = {idx: m + 1 for m, idx in enumerate(core_in)}
    out_rank = {idx: m + 1 for m, idx in enumerate(core_out)}
    core_edges = {}
    for eid, e in g.edges.items():
        if e.kind in (IO, LOOP):
            continue
        core_edges[eid] = replace(
            e,
            in_index=None if e.in_index is None else in_rank[e.in_index],
            out_index=None if e.out_index is None else out_rank[e.out_index],
        )
    core = _mk(g.vertices, core_edges)
    sh_in = tuple(core_in) + tuple(a for a, _ in ios)
    wire_outs = sorted(b for _, b in ios)
    wire_out_rank = {idx: m + 1 for m, idx in enumerate(wire_outs)}
    sh_out = tuple(core_out) + tuple(wire_outs)
    wire_perm = tuple(wire_out_rank[b] for _, b in ios)
    return SolarDecomposition(core, sh_in, sh_out, wire_perm, loop_count)


def solar_reassemble(d: SolarDecomposition) -> Graph:
    body = hconcat(d.core, wires_graph(d.wire_perm))
    body = act(d.sh_out, body, perm.inverse(d.sh_in))
    loops = hconcat_all([loop_graph()] * d.loop_count)
    return hconcat(loops, body)


# -- monad structure ---------------------------------------------------


def nu(g: Graph) -> Graph:
    """Monad unit applied to a whole graph: decorate each vertex by its corolla."""
    vertices = {
        vid: Vertex(corolla(v.decoration, len(v.in_slots), len(v.out_slots)),
                    v.in_slots, v.out_slots)
        for vid, v in g.vertices.items()
    }
    return _mk(vertices, g.edges)


def substitute(g: Graph) -> Graph:
    """Monad multiplication: flatten a graph whose decorations are graphs.

    The m-th incoming (outgoing) edge of a vertex is identified with the
    global input (output) of index m of its decorating graph.
    """
    inner: dict[int, Graph] = {}
    for vid, v in g.vertices.items():
        gv = v.decoration
        if not isinstance(gv, Graph):
            raise GraphError(f"vertex {vid} is not decorated by a graph")
        if gv.arity != (len(v.in_slots), len(v.out_slots)):
            raise GraphError(
                f"vertex {vid} has arity {(len(v.in_slots), len(v.out_slots))} "
                f"but its decoration has arity {gv.arity}"
            )
        inner[vid] = gv

    vertices: dict[int, Vertex] = {}
    vmap: dict[tuple[int, int], int] = {}  # (outer vid, inner vid) -> new vid
    slot_edges: dict[tuple[int, int], dict[str, list[int | None]]] = {}
    nxt_v = 0
    for vid in sorted(inner):
        for wid in sorted(inner[vid].vertices):
            vmap[(vid, wid)] = nxt_v
            w = inner[vid].vertices[wid]
            slot_edges[(vid, wid)] = {
                "in": [None] * len(w.in_slots),
                "out": [None] * len(w.out_slots),
            }
            nxt_v += 1

    edges: dict[int, Edge] = {}
    nxt_e = 0

    def add_edge(e: Edge, src_slot: tuple | None, tgt_slot: tuple | None) -> None:
        nonlocal nxt_e
        edges[nxt_e] = e
        if src_slot is not None:
            vid, wid, pos = src_slot
            slot_edges[(vid, wid)]["out"][pos - 1] = nxt_e
        if tgt_slot is not None:
            vid, wid, pos = tgt_slot
            slot_edges[(vid, wid)]["in"][pos - 1] = nxt_e
        nxt_e += 1

    # inner internal edges and loops survive as they are
    for vid in sorted(inner):
        gv = inner[vid]
        for eid in sorted(gv.edges):
            e = gv.edges[eid]
            if e.kind == INTERNAL:
                add_edge(
                    Edge(INTERNAL, source=vmap[(vid, e.source)], target=vmap[(vid, e.target)]),
                    (vid, e.source, gv.out_slot_pos(e.source, eid)),
                    (vid, e.target, gv.in_slot_pos(e.target, eid)),
                )
            elif e.kind == LOOP:
                add_edge(Edge(LOOP), None, None)

    def resolve_head(eid: int):
        """Follow the target end of outer edge ``eid`` to a terminal or wire."""
        e = g.edges[eid]
        if e.kind in (OUTPUT, IO):
            return ("global_out", e.out_index)
        vid = e.target
        pos = g.in_slot_pos(vid, eid)
        gv = inner[vid]
        iid = gv.input_edge(pos)
        ie = gv.edges[iid]
        if ie.kind == INPUT:
            return ("vertex", vid, ie.target, gv.in_slot_pos(ie.target, iid))
        return ("wire", vid, ie.out_index)  # io: passes through to out port

    def resolve_tail(eid: int):
        e = g.edges[eid]
        if e.kind in (INPUT, IO):
            return ("global_in", e.in_index)
        vid = e.source
        pos = g.out_slot_pos(vid, eid)
        gv = inner[vid]
        oid = gv.output_edge(pos)
        oe = gv.edges[oid]
        if oe.kind == OUTPUT:
            return ("vertex", vid, oe.source, gv.out_slot_pos(oe.source, oid))
        return ("wire", vid, oe.in_index)

    outer = [eid for eid in sorted(g.edges) if g.edges[eid].kind != LOOP]
    visited: set[int] = set()
    for start in outer:
        if start in visited or resolve_tail(start)[0] == "wire":
            continue
        tail = resolve_tail(start)
        cur = start
        while True:
            visited.add(cur)
            head = resolve_head(cur)
            if head[0] != "wire":
                break
            _, vid, out_pos = head
            cur = g.vertices[vid].out_slots[out_pos - 1]
        src = None if tail[0] == "global_in" else (tail[1], tail[2], tail[3])
        tgt = None if head[0] == "global_out" else (head[1], head[2], head[3])
        if src is None and tgt is None:
            add_edge(Edge(IO, in_index=tail[1], out_index=head[1]), None, None)
        elif src is None:
            add_edge(Edge(INPUT, target=vmap[(tgt[0], tgt[1])], in_index=tail[1]), None, tgt)
        elif tgt is None:
            add_edge(Edge(OUTPUT, source=vmap[(src[0], src[1])], out_index=head[1]), src, None)
        else:
            add_edge(
                Edge(INTERNAL, source=vmap[(src[0], src[1])], target=vmap[(tgt[0], tgt[1])]),
                src,
                tgt,
            )
    # chains of wires with no terminal close into loops
    for start in outer:
        if start in visited:
            continue
        cur = start
        while cur not in visited:
            visited.add(cur)
            _, vid, out_pos = resolve_head(cur)
            cur = g.vertices[vid].out_slots[out_pos - 1]
        add_edge(Edge(LOOP), None, None)
    for eid in sorted(g.edges):
        if g.edges[eid].kind == LOOP:
            add_edge(Edge(LOOP), None, None)

    for (vid, wid), slots in slot_edges.items():
        w = inner[vid].vertices[wid]
        if any(x is None for x in slots["in"]) or any(x is None for x in slots["out"]):
            raise GraphError("internal error: unfilled slot during substitution")
        vertices[vmap[(vid, wid)]] = Vertex(
            w.decoration, tuple(slots["in"]), tuple(slots["out"])
        )
    return _mk(vertices, edges)


def map_decorations(g: Graph, fn) -> Graph:
    vertices = {
        vid: Vertex(fn(v.decoration), v.in_slots, v.out_slots)
        for vid, v in g.vertices.items()
    }
    return _mk(vertices, g.edges, check=False)


# -- isomorphism -------------------------------------------------------


def _structure_key(g: Graph, order: Mapping[int, int]) -> tuple:
    verts = [None] * len(order)
    for vid, idx in order.items():
        v = g.vertices[vid]
        verts[idx] = (decoration_key(v.decoration), len(v.in_slots), len(v.out_slots))
    internal, inputs, outputs, ios = [], [], [], []
    loops = 0
    for eid, e in g.edges.items():
        if e.kind == INTERNAL:
            internal.append(
                (
                    order[e.source],
                    g.out_slot_pos(e.source, eid),
                    order[e.target],
                    g.in_slot_pos(e.target, eid),
                )
            )
        elif e.kind == INPUT:
            inputs.append((e.in_index, order[e.target], g.in_slot_pos(e.target, eid)))
        elif e.kind == OUTPUT:
            outputs.append((e.out_index, order[e.source], g.out_slot_pos(e.source, eid)))
        elif e.kind == IO:
            ios.append((e.in_index, e.out_index))
        else:
            loops += 1
    return (
        tuple(verts),
        tuple(sorted(internal)),
        tuple(sorted(inputs)),
        tuple(sorted(outputs)),
        tuple(sorted(ios)),
        loops,
    )


def _refine(g: Graph, colors: dict[int, tuple]) -> dict[int, tuple]:
    while True:
        sig: dict[int, tuple] = {}
        for vid, v in g.vertices.items():
            ins, outs = [], []
            for eid in v.in_slots:
                e = g.edges[eid]
                if e.kind == INTERNAL:
                    ins.append(("e", colors[e.source], g.out_slot_pos(e.source, eid)))
                else:
                    ins.append(("i", e.in_index))
            for eid in v.out_slots:
                e = g.edges[eid]
                if e.kind == INTERNAL:
                    outs.append(("e", colors[e.target], g.in_slot_pos(e.target, eid)))
                else:
                    outs.append(("o", e.out_index))
            sig[vid] = (colors[vid], tuple(ins), tuple(outs))
        ranked = sorted(set(sig.values()))
        new = {vid: ("c", ranked.index(sig[vid])) for vid in g.vertices}
        if new == colors:
            return colors
        colors = new


def _certificate(g: Graph) -> tuple:
    if not g.vertices:
        return _structure_key(g, {})
    base = {
        vid: (
            decoration_key(v.decoration),
            len(v.in_slots),
            len(v.out_slots),
        )
        for vid, v in g.vertices.items()
    }
    colors = _refine(g, base)
    best: list[tuple | None] = [None]

    def search(colors: dict[int, tuple], placed: list[int]) -> None:
        unplaced = [v for v in g.vertices if v not in placed]
        if not unplaced:
            key = _structure_key(g, {v: i for i, v in enumerate(placed)})
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        target = min(colors[v] for v in unplaced)
        for v in sorted(u for u in unplaced if colors[u] == target):
            nxt = dict(colors)
            nxt[v] = ("placed", len(placed))
            search(_refine(g, nxt), placed + [v])

    search(colors, [])
    assert best[0] is not None
    return best[0]


def iso_eq(g: Graph, h: Graph) -> bool:
    """Isomorphism of corolla-ordered decorated graphs (exact decorations)."""
    return g.certificate() == h.certificate()


def canonical_form(g: Graph) -> Graph:
    """A deterministic representative of the isoclass of ``g``."""
    verts, internal, inputs, outputs, ios, loops = g.certificate()
    vertices = {}
    slots: dict[int, dict[str, dict[int, int]]] = {
        i: {"in": {}, "out": {}} for i in range(len(verts))
    }
    edges: dict[int, Edge] = {}
    nxt = 0
    for s, spos, t, tpos in internal:
        edges[nxt] = Edge(INTERNAL, source=s, target=t)
        slots[s]["out"][spos] = nxt
        slots[t]["in"][tpos] = nxt
        nxt += 1
    for idx, t, tpos in inputs:
        edges[nxt] = Edge(INPUT, target=t, in_index=idx)
        slots[t]["in"][tpos] = nxt
        nxt += 1
    for idx, s, spos in outputs:
        edges[nxt] = Edge(OUTPUT, source=s, out_index=idx)
        slots[s]["out"][spos] = nxt
        nxt += 1
    for a, b in ios:
        edges[nxt] = Edge(IO, in_index=a, out_index=b)
        nxt += 1
    for _ in range(loops):
        edges[nxt] = Edge(LOOP)
        nxt += 1
    for i, (deco, ki, lo) in enumerate(verts):
        vertices[i] = Vertex(
            _decoration_from_key(deco, g),
            tuple(slots[i]["in"][m] for m in range(1, ki + 1)),
            tuple(slots[i]["out"][m] for m in range(1, lo + 1)),
        )
    return _mk(vertices, edges)


def _decoration_from_key(key: tuple, g: Graph) -> Any:
    for v in g.vertices.values():
        if decoration_key(v.decoration) == key:
            return v.decoration
    raise GraphError("decoration key not found")  # pragma: no cover


# -- random graphs (for property tests and the axiom harness) ----------


def random_graph(
    rng: random.Random,
    max_vertices: int = 3,
    max_arity: int = 3,
    labels: str = "xyz",
    max_io: int = 2,
    max_loops: int = 1,
    decorate=None,
) -> Graph:
    """A random valid decorated graph touching every edge kind."""
    nv = rng.randint(0, max_vertices)
    vertices = {}
    edges: dict[int, Edge] = {}
    nxt = 0
    stubs_out: list[tuple[int, int]] = []  # (vertex, slot position)
    stubs_in: list[tuple[int, int]] = []
    slot_map: dict[tuple[int, str, int], int] = {}
    arities = {}
    for vid in range(nv):
        ki, lo = rng.randint(0, max_arity), rng.randint(0, max_arity)
        arities[vid] = (ki, lo)
        stubs_in += [(vid, m) for m in range(1, ki + 1)]
        stubs_out += [(vid, m) for m in range(1, lo + 1)]
    rng.shuffle(stubs_out)
    rng.shuffle(stubs_in)
    free_in = list(stubs_in)
    for v_out, pos_out in stubs_out:
        if free_in and rng.random() < 0.45:
            v_in, pos_in = free_in.pop()
            edges[nxt] = Edge(INTERNAL, source=v_out, target=v_in)
            slot_map[(v_out, "out", pos_out)] = nxt
            slot_map[(v_in, "in", pos_in)] = nxt
            nxt += 1
    out_indices = list(
        range(1, 1 + sum(1 for s in stubs_out if (s[0], "out", s[1]) not in slot_map))
    )
    in_indices = list(range(1, 1 + len(free_in)))
    n_io = rng.randint(0, max_io)
    out_indices += list(range(len(out_indices) + 1, len(out_indices) + 1 + n_io))
    in_indices += list(range(len(in_indices) + 1, len(in_indices) + 1 + n_io))
    rng.shuffle(out_indices)
    rng.shuffle(in_indices)
    for v_out, pos_out in stubs_out:
        if (v_out, "out", pos_out) in slot_map:
            continue
        edges[nxt] = Edge(OUTPUT, source=v_out, out_index=out_indices.pop())
        slot_map[(v_out, "out", pos_out)] = nxt
        nxt += 1
    for v_in, pos_in in free_in:
        edges[nxt] = Edge(INPUT, target=v_in, in_index=in_indices.pop())
        slot_map[(v_in, "in", pos_in)] = nxt
        nxt += 1
    for _ in range(n_io):
        edges[nxt] = Edge(IO, in_index=in_indices.pop(), out_index=out_indices.pop())
        nxt += 1
    for _ in range(rng.randint(0, max_loops)):
        edges[nxt] = Edge(LOOP)
        nxt += 1
    for vid in range(nv):
        ki, lo = arities[vid]
        deco = decorate(rng, ki, lo) if decorate else f"{rng.choice(labels)}{ki}{lo}"
        vertices[vid] = Vertex(
            deco,
            tuple(slot_map[(vid, "in", m)] for m in range(1, ki + 1)),
            tuple(slot_map[(vid, "out", m)] for m in range(1, lo + 1)),
        )
    return _mk(vertices, edges)


def random_solar_graph(rng: random.Random, decorate=None, **kw) -> Graph:
    g = random_graph(rng, max_io=0, max_loops=0, decorate=decorate, **kw)
    assert g.is_solar()
    return g
