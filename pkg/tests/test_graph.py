import random

import pytest

from trapkit import perm
from trapkit.graph import (
    Edge,
    GraphError,
    Vertex,
    act,
    canonical_form,
    corolla,
    empty_graph,
    gtrace,
    hconcat,
    hconcat_all,
    iso_eq,
    loop_graph,
    make_graph,
    map_decorations,
    nu,
    partial_trace,
    random_graph,
    random_solar_graph,
    solar_decompose,
    solar_reassemble,
    substitute,
    unit_graph,
    vconcat,
    vertex_act,
    wires_graph,
)


def test_corolla_shape():
    g = corolla("x", 3, 2)
    assert g.arity == (3, 2)
    assert g.is_solar()
    assert len(g.vertices) == 1
    v = next(iter(g.vertices.values()))
    assert len(v.in_slots) == 3 and len(v.out_slots) == 2
    # slot order follows the indices
    for pos, eid in enumerate(v.in_slots, start=1):
        assert g.edges[eid].in_index == pos
    for pos, eid in enumerate(v.out_slots, start=1):
        assert g.edges[eid].out_index == pos
    assert corolla("x", 0, 0).arity == (0, 0)
    assert corolla("x", 1, 1).arity == (1, 1)


def test_unit_loop_empty():
    assert unit_graph().arity == (1, 1)
    assert not unit_graph().vertices
    assert loop_graph().arity == (0, 0)
    assert hconcat(unit_graph(), unit_graph()).arity == (2, 2)
    g = random_graph(random.Random(3))
    assert iso_eq(hconcat(empty_graph(), g), g)
    assert iso_eq(hconcat(g, empty_graph()), g)


def test_act_identity_and_composition():
    rng = random.Random(1)
    for _ in range(20):
        g = random_graph(rng)
        k, l = g.arity
        assert iso_eq(act(perm.identity(l), g, perm.identity(k)), g)
        s1, s2 = perm.random_perm(rng, l), perm.random_perm(rng, l)
        t1, t2 = perm.random_perm(rng, k), perm.random_perm(rng, k)
        lhs = act(s1, act(s2, g, t2), t1)
        rhs = act(perm.compose(s1, s2), g, perm.compose(t2, t1))
        assert iso_eq(lhs, rhs)


def test_act_relabels_io_edge():
    g = hconcat(unit_graph(), unit_graph())
    h = act((2, 1), g, perm.identity(2))
    pairs = sorted((e.in_index, e.out_index) for e in h.edges.values())
    assert pairs == [(1, 2), (2, 1)]


def test_act_degree_mismatch():
    with pytest.raises(GraphError):
        act((1,), unit_graph(), (1, 2))


def test_vertex_act_involution():
    g = corolla("x", 2, 2)
    vid = next(iter(g.vertices))
    h = vertex_act((2, 1), g, vid, (1, 2))
    assert not iso_eq(g, h)
    assert iso_eq(vertex_act((2, 1), h, next(iter(h.vertices)), (1, 2)), g)
    assert iso_eq(vertex_act((1, 2), g, vid, (1, 2)), g)


def test_vertex_act_swap_of_parallel_edges():
    # two parallel internal edges v -> w; swapping them at one end crosses them
    edges = {
        0: Edge("internal", source=0, target=1),
        1: Edge("internal", source=0, target=1),
    }
    vertices = {
        0: Vertex("v", (), (0, 1)),
        1: Vertex("w", (0, 1), ()),
    }
    g = make_graph(vertices, edges)
    crossed = vertex_act((2, 1), g, 0, ())
    uncrossed = vertex_act((1, 2), g, 0, ())
    assert iso_eq(uncrossed, g)
    # acting on the other end with the same swap restores isomorphism
    assert iso_eq(vertex_act((), crossed, 1, (2, 1)), g)


def section_3_2_left_graph():
    # vertex u feeds outputs 1, 3 and an internal edge into w;
    # w takes inputs 1, 2 and feeds output 2
    edges = {
        0: Edge("internal", source=0, target=1),
        1: Edge("output", source=0, out_index=1),
        2: Edge("output", source=0, out_index=3),
        3: Edge("output", source=1, out_index=2),
        4: Edge("input", target=1, in_index=1),
        5: Edge("input", target=1, in_index=2),
    }
    vertices = {
        0: Vertex("u", (), (1, 2, 0)),
        1: Vertex("w", (4, 5, 0), (3,)),
    }
    return make_graph(vertices, edges)


def section_3_2_right_graph():
    edges = {
        0: Edge("input", target=0, in_index=1),
        1: Edge("output", source=0, out_index=1),
        2: Edge("output", source=0, out_index=2),
    }
    return make_graph({0: Vertex("z", (0,), (1, 2))}, edges)


def test_hconcat_worked_example():
    g, h = section_3_2_left_graph(), section_3_2_right_graph()
    got = hconcat(g, h)
    assert got.arity == (3, 5)
    edges = {
        0: Edge("internal", source=0, target=1),
        1: Edge("output", source=0, out_index=1),
        2: Edge("output", source=0, out_index=3),
        3: Edge("output", source=1, out_index=2),
        4: Edge("input", target=1, in_index=1),
        5: Edge("input", target=1, in_index=2),
        6: Edge("input", target=2, in_index=3),
        7: Edge("output", source=2, out_index=4),
        8: Edge("output", source=2, out_index=5),
    }
    vertices = {
        0: Vertex("u", (), (1, 2, 0)),
        1: Vertex("w", (4, 5, 0), (3,)),
        2: Vertex("z", (6,), (7, 8)),
    }
    assert iso_eq(got, make_graph(vertices, edges))


def test_hconcat_commutativity_axiom_instance():
    rng = random.Random(7)
    for _ in range(15):
        g, h = random_graph(rng), random_graph(rng)
        k, l = g.arity
        kp, lp = h.arity
        lhs = act(perm.block_shuffle(l, lp), hconcat(g, h), perm.identity(k + kp))
        rhs = act(perm.identity(lp + l), hconcat(h, g), perm.block_shuffle(k, kp))
        assert iso_eq(lhs, rhs)


def test_partial_trace_unit_gives_loop():
    assert iso_eq(partial_trace(unit_graph(), 1, 1), loop_graph())


def test_partial_trace_unit_law_instance():
    p = corolla("x", 1, 1)
    assert iso_eq(partial_trace(hconcat(unit_graph(), p), 1, 2), p)


def test_partial_trace_chain():
    g = hconcat(corolla("x", 1, 1), corolla("y", 1, 1))
    got = partial_trace(g, 2, 1)  # glue y's input onto x's output
    edges = {
        0: Edge("input", target=0, in_index=1),
        1: Edge("internal", source=0, target=1),
        2: Edge("output", source=1, out_index=1),
    }
    vertices = {0: Vertex("x", (0,), (1,)), 1: Vertex("y", (1,), (2,))}
    assert iso_eq(got, make_graph(vertices, edges))


def section_3_2_trace_example():
    # one vertex v: inputs 2, 3; output 1; plus an io edge 1 -> 2
    edges = {
        0: Edge("io", in_index=1, out_index=2),
        1: Edge("input", target=0, in_index=2),
        2: Edge("input", target=0, in_index=3),
        3: Edge("output", source=0, out_index=1),
    }
    return make_graph({0: Vertex("v", (1, 2), (3,))}, edges)


def test_partial_trace_five_cases_on_worked_graph():
    g = section_3_2_trace_example()
    # io edge traced with itself becomes a loop
    t12 = partial_trace(g, 1, 2)
    assert sum(1 for e in t12.edges.values() if e.kind == "loop") == 1
    assert t12.arity == (2, 1)
    # tracing the io edge against the vertex output, or a vertex input
    # against the io output, leaves a one-vertex corolla
    expected = corolla("v", 2, 1)
    assert iso_eq(partial_trace(g, 1, 1), expected)
    assert iso_eq(partial_trace(g, 2, 2), expected)
    # tracing input 3 hits v's second slot: same graph up to a corolla swap
    t32 = partial_trace(g, 3, 2)
    assert not iso_eq(t32, expected)
    assert iso_eq(vertex_act((1,), t32, next(iter(t32.vertices)), (2, 1)), expected)
    # vertex output onto vertex input: a self-edge appears
    t21 = partial_trace(g, 2, 1)
    assert t21.arity == (2, 1)
    assert any(
        e.kind == "internal" and e.source == e.target for e in t21.edges.values()
    )


def test_partial_trace_out_of_range():
    with pytest.raises(GraphError):
        partial_trace(unit_graph(), 2, 1)
    with pytest.raises(GraphError):
        partial_trace(empty_graph(), 1, 1)


def section_4_1_graphs():
    # P: vertices a, b; internal b->a; inputs 1,2 -> a, 3 -> b;
    # outputs a -> 2, b -> 1; one loop
    p_edges = {
        0: Edge("internal", source=1, target=0),
        1: Edge("input", target=0, in_index=1),
        2: Edge("input", target=0, in_index=2),
        3: Edge("input", target=1, in_index=3),
        4: Edge("output", source=0, out_index=2),
        5: Edge("output", source=1, out_index=1),
        6: Edge("loop"),
    }
    p_vertices = {
        0: Vertex("a", (1, 2, 0), (4,)),
        1: Vertex("b", (3,), (5, 0)),
    }
    p = make_graph(p_vertices, p_edges)
    # Q: vertices c, d; internal c->d and d->c; inputs 1,2 -> c, 3,4 -> d;
    # outputs c -> 2, d -> 1, d -> 3
    q_edges = {
        0: Edge("internal", source=0, target=1),
        1: Edge("internal", source=1, target=0),
        2: Edge("input", target=0, in_index=1),
        3: Edge("input", target=0, in_index=2),
        4: Edge("input", target=1, in_index=3),
        5: Edge("input", target=1, in_index=4),
        6: Edge("output", source=0, out_index=2),
        7: Edge("output", source=1, out_index=1),
        8: Edge("output", source=1, out_index=3),
    }
    q_vertices = {
        0: Vertex("c", (2, 3, 1), (6, 0)),
        1: Vertex("d", (4, 5, 0), (7, 8, 1)),
    }
    q = make_graph(q_vertices, q_edges)
    return p, q


def test_vconcat_worked_example():
    p, q = section_4_1_graphs()
    got = vconcat(p, q)
    assert got.arity == (4, 2)
    edges = {
        0: Edge("internal", source=1, target=0),   # b -> a
        1: Edge("internal", source=2, target=3),   # c -> d
        2: Edge("internal", source=3, target=2),   # d -> c
        3: Edge("internal", source=3, target=0),   # Q out 1 onto P in 1
        4: Edge("internal", source=2, target=0),   # Q out 2 onto P in 2
        5: Edge("internal", source=3, target=1),   # Q out 3 onto P in 3
        6: Edge("input", target=2, in_index=1),
        7: Edge("input", target=2, in_index=2),
        8: Edge("input", target=3, in_index=3),
        9: Edge("input", target=3, in_index=4),
        10: Edge("output", source=0, out_index=2),
        11: Edge("output", source=1, out_index=1),
        12: Edge("loop"),
    }
    vertices = {
        0: Vertex("a", (3, 4, 0), (10,)),
        1: Vertex("b", (5,), (11, 0)),
        2: Vertex("c", (6, 7, 2), (4, 1)),  # glued edge keeps the old slot
        3: Vertex("d", (8, 9, 1), (3, 5, 2)),
    }
    expected = make_graph(vertices, edges)
    assert iso_eq(got, expected)


def test_vconcat_unit_laws():
    rng = random.Random(11)
    for _ in range(10):
        g = random_graph(rng)
        k, l = g.arity
        wires_l = hconcat_all([unit_graph()] * l)
        wires_k = hconcat_all([unit_graph()] * k)
        assert iso_eq(vconcat(wires_l, g), g)
        assert iso_eq(vconcat(g, wires_k), g)


def test_vconcat_direct_matches_trace_formula():
    rng = random.Random(23)
    for _ in range(25):
        g = random_graph(rng)
        h = _random_graph_with_k(rng, g.l)
        assert iso_eq(vconcat(h, g), vconcat(h, g, via_traces=True))


def _random_graph_with_k(rng, k):
    for _ in range(500):
        h = random_graph(rng)
        if h.k == k:
            return h
    # fall back to a corolla of the right arity
    return corolla("f", k, rng.randint(0, 3))


def test_vconcat_associativity():
    rng = random.Random(5)
    for _ in range(10):
        g = random_graph(rng, max_vertices=2)
        h = _random_graph_with_k(rng, g.l)
        f = _random_graph_with_k(rng, h.l)
        assert iso_eq(vconcat(f, vconcat(h, g)), vconcat(vconcat(f, h), g))


def test_vconcat_arity_mismatch():
    with pytest.raises(GraphError):
        vconcat(corolla("x", 2, 1), corolla("y", 1, 1))


def test_gtrace():
    assert iso_eq(gtrace(unit_graph()), loop_graph())
    assert iso_eq(gtrace(empty_graph()), empty_graph())
    rng = random.Random(9)
    for _ in range(10):
        p = _random_square(rng)
        q = _random_square(rng)
        assert iso_eq(gtrace(hconcat(p, q)), hconcat(gtrace(p), gtrace(q)))


def _random_square(rng):
    for _ in range(500):
        g = random_graph(rng, max_vertices=2)
        if g.k == g.l:
            return g
    return corolla("s", 1, 1)


def test_gtrace_cyclicity():
    rng = random.Random(31)
    for _ in range(10):
        p = random_graph(rng, max_vertices=2)
        q = _random_with_arity(rng, p.l, p.k)
        assert iso_eq(gtrace(vconcat(p, q)), gtrace(vconcat(q, p)))


def _random_with_arity(rng, k, l):
    for _ in range(800):
        g = random_graph(rng, max_vertices=2)
        if g.arity == (k, l):
            return g
    return corolla("t", k, l)


def test_solar_trivial_cases():
    d = solar_decompose(corolla("x", 2, 3))
    assert d.sh_in == perm.identity(2)
    assert d.sh_out == perm.identity(3)
    assert d.wire_count == 0 and d.loop_count == 0
    assert iso_eq(d.core, corolla("x", 2, 3))

    d = solar_decompose(unit_graph())
    assert iso_eq(d.core, empty_graph())
    assert d.wire_count == 1 and d.loop_count == 0


def section_3_4_graph():
    edges = {
        0: Edge("internal", source=1, target=0),    # a: y -> x
        1: Edge("internal", source=0, target=1),    # b: x -> y
        2: Edge("input", target=0, in_index=3),     # c
        3: Edge("input", target=0, in_index=2),     # d
        4: Edge("output", source=1, out_index=3),   # e
        5: Edge("output", source=1, out_index=1),   # f
        6: Edge("io", in_index=1, out_index=2),     # g
        7: Edge("loop"),
        8: Edge("loop"),
    }
    vertices = {
        0: Vertex("x", (2, 3, 0), (1,)),
        1: Vertex("y", (1,), (5, 4, 0)),
    }
    return make_graph(vertices, edges)


def test_solar_worked_example():
    g = section_3_4_graph()
    d = solar_decompose(g)
    assert d.sh_in == (2, 3, 1)
    assert d.sh_out == (1, 3, 2)
    assert d.loop_count == 2
    assert d.wire_count == 1 and d.wire_perm == (1,)
    core_edges = {
        0: Edge("internal", source=1, target=0),
        1: Edge("internal", source=0, target=1),
        2: Edge("input", target=0, in_index=2),
        3: Edge("input", target=0, in_index=1),
        4: Edge("output", source=1, out_index=2),
        5: Edge("output", source=1, out_index=1),
    }
    core_vertices = {
        0: Vertex("x", (2, 3, 0), (1,)),
        1: Vertex("y", (1,), (5, 4, 0)),
    }
    assert iso_eq(d.core, make_graph(core_vertices, core_edges))
    assert iso_eq(solar_reassemble(d), g)


def test_solar_reassembly_random():
    rng = random.Random(41)
    for _ in range(40):
        g = random_graph(rng)
        d = solar_decompose(g)
        assert d.core.is_solar()
        assert perm.is_shuffle(d.sh_in, d.core.k)
        assert perm.is_shuffle(d.sh_out, d.core.l)
        assert iso_eq(solar_reassemble(d), g)


def test_solar_crossing_wires():
    g = make_graph(
        {},
        {
            0: Edge("io", in_index=1, out_index=2),
            1: Edge("io", in_index=2, out_index=1),
        },
    )
    d = solar_decompose(g)
    assert d.wire_perm == (2, 1)
    assert iso_eq(solar_reassemble(d), g)


def test_solar_closure_under_trace():
    rng = random.Random(13)
    for _ in range(20):
        g = random_solar_graph(rng)
        if g.k and g.l:
            t = partial_trace(g, rng.randint(1, g.k), rng.randint(1, g.l))
            assert t.is_solar()


def test_substitute_unit_laws():
    rng = random.Random(17)
    for _ in range(15):
        g = random_graph(rng)
        assert iso_eq(substitute(nu(g)), g)
        k, l = g.arity
        outer = corolla(g, k, l)
        assert iso_eq(substitute(outer), g)


def test_substitute_creates_loop_from_unit_cycle():
    # a single vertex decorated by the identity wire, with an internal
    # self-edge: flattening closes the wire into a loop
    edges = {0: Edge("internal", source=0, target=0)}
    g = make_graph({0: Vertex(unit_graph(), (0,), (0,))}, edges)
    assert iso_eq(substitute(g), loop_graph())


def test_substitute_associativity():
    # doubly nested graphs: flattening inner-then-outer agrees with
    # outer-then-inner (monad associativity square)
    rng = random.Random(19)
    for _ in range(10):
        outer = random_graph(rng, max_vertices=2)
        level1 = make_graph(
            {
                vid: Vertex(
                    _random_with_arity(rng, len(v.in_slots), len(v.out_slots)),
                    v.in_slots,
                    v.out_slots,
                )
                for vid, v in outer.vertices.items()
            },
            outer.edges,
        )
        level2 = map_decorations(level1, nu)
        lhs = substitute(substitute(level2))
        rhs = substitute(map_decorations(level2, substitute))
        assert iso_eq(lhs, rhs)


def test_substitution_arity_mismatch():
    g = corolla(corolla("x", 2, 1), 1, 1)
    with pytest.raises(GraphError):
        substitute(g)


def test_iso_relabhost():
    rng = random.Random(29)
    for _ in range(20):
        g = random_graph(rng)
        # renumber ids by round-tripping through a shifted copy
        shifted = make_graph(
            {vid + 50: Vertex(v.decoration, tuple(e + 90 for e in v.in_slots),
                              tuple(e + 90 for e in v.out_slots))
             for vid, v in g.vertices.items()},
            {eid + 90: e if e.source is None and e.target is None else
             Edge(e.kind,
                  source=None if e.source is None else e.source + 50,
                  target=None if e.target is None else e.target + 50,
                  in_index=e.in_index, out_index=e.out_index)
             for eid, e in g.edges.items()},
        )
        assert iso_eq(g, shifted)


def test_iso_distinguishes_decorations():
    assert not iso_eq(corolla("x", 1, 1), corolla("y", 1, 1))
    assert iso_eq(corolla("x", 1, 1), corolla("x", 1, 1))


def test_iso_hconcat_order():
    g, h = corolla("x", 1, 1), corolla("y", 2, 1)
    assert not iso_eq(hconcat(g, h), hconcat(h, g))
    lhs = act(perm.block_shuffle(1, 1), hconcat(g, h), perm.identity(3))
    rhs = act(perm.identity(2), hconcat(h, g), perm.block_shuffle(1, 2))
    assert iso_eq(lhs, rhs)


def test_canonical_form_is_stable():
    rng = random.Random(37)
    for _ in range(20):
        g = random_graph(rng)
        c1 = canonical_form(g)
        c2 = canonical_form(canonical_form(g))
        assert c1.structure_key() == c2.structure_key()
        assert iso_eq(c1, g)


def test_unitarity_relations_on_graphs():
    rng = random.Random(43)
    unit = unit_graph()
    for _ in range(15):
        p = random_graph(rng)
        k, l = p.arity
        for j in range(2, l + 2):
            got = partial_trace(hconcat(unit, p), 1, j)
            want = act(perm.cycle(tuple(range(1, j)), l), p, perm.identity(k))
            assert iso_eq(got, want)
        for i in range(2, k + 2):
            got = partial_trace(hconcat(unit, p), i, 1)
            want = act(
                perm.identity(l), p, perm.inverse(perm.cycle(tuple(range(1, i)), k))
            )
            assert iso_eq(got, want)
        for j in range(1, l + 1):
            got = partial_trace(hconcat(p, unit), k + 1, j)
            want = act(
                perm.inverse(perm.cycle(tuple(range(j, l + 1)), l)),
                p,
                perm.identity(k),
            )
            assert iso_eq(got, want)
        for i in range(1, k + 1):
            got = partial_trace(hconcat(p, unit), i, l + 1)
            want = act(perm.identity(l), p, perm.cycle(tuple(range(i, k + 1)), k))
            assert iso_eq(got, want)


def test_wires_graph():
    w = wires_graph((2, 1))
    assert w.arity == (2, 2)
    pairs = sorted((e.in_index, e.out_index) for e in w.edges.values())
    assert pairs == [(1, 2), (2, 1)]
