import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from operadkit import trees as T
from operadkit.trees import from_nested as N


# ---------------------------------------------------------------- oracles

def to_adjacency(t):
    """(parent list, ordered children, twig label per node) of a tree."""
    parent, kids, label = [None], [[]], [None]

    def walk(node, ident):
        if node.is_twig:
            label[ident] = node.leaf
            return
        for c in node.children:
            parent.append(ident)
            kids.append([])
            label.append(None)
            child = len(parent) - 1
            kids[ident].append(child)
            walk(c, child)

    walk(t, 0)
    return parent, kids, label


def from_adjacency(kids, label, ident=0):
    if label[ident] is not None:
        return T.twig(label[ident])
    return T.vertex(*(from_adjacency(kids, label, c) for c in kids[ident]))


def graft_oracle(host, j, guest):
    """Graft by splicing adjacency lists: the guest's root replaces twig j."""
    _, hk, hl = to_adjacency(host)
    _, gk, gl = to_adjacency(guest)
    m = sum(1 for x in gl if x is not None)
    off = len(hk)
    kids = [list(c) for c in hk] + [[off + x for x in c] for c in gk]
    label = [None if x is None else (x if x < j else x + m - 1) for x in hl]
    label += [None if x is None else x + j - 1 for x in gl]
    slot = hl.index(j)
    for c in kids:
        for i, x in enumerate(c):
            if x == slot:
                c[i] = off
    if slot == 0:
        return from_adjacency(kids, label, off)
    return from_adjacency(kids, label)


def isomorphic_ordered(a, b):
    if a.is_twig or b.is_twig:
        return a.is_twig and b.is_twig and a.leaf == b.leaf
    return len(a.children) == len(b.children) and all(
        isomorphic_ordered(x, y) for x, y in zip(a.children, b.children))


def little_schroeder(n):
    s = [0, 1, 1]
    for m in range(3, n + 1):
        s.append(((6 * m - 9) * s[m - 1] - (m - 3) * s[m - 2]) // m)
    return s[n]


def random_tree(rng, k, min_valence=2):
    labels = list(range(1, k + 1))
    rng.shuffle(labels)
    nodes = [T.twig(i) for i in labels]
    while len(nodes) > 1:
        size = rng.randint(max(min_valence, 2), min(len(nodes), 3))
        start = rng.randrange(len(nodes) - size + 1)
        nodes[start:start + size] = [T.vertex(*nodes[start:start + size])]
    if min_valence == 1 and rng.random() < 0.3:
        return T.vertex(nodes[0])
    return nodes[0] if nodes[0].children or k == 1 else T.vertex(nodes[0])


trees = st.builds(lambda seed, k: random_tree(random.Random(seed), k),
                  st.integers(0, 10**6), st.integers(1, 6))


# ---------------------------------------------------------------- graft

def test_graft_units():
    t = N(((1, 3), 2))
    assert T.graft(T.TRIVIAL, 1, t) == t
    for j in (1, 2, 3):
        assert T.graft(t, j, T.TRIVIAL) == t


def test_graft_corolla_into_second_twig():
    out = T.graft(T.corolla(2), 2, T.corolla(2))
    assert out == N((1, (2, 3)))
    assert out == graft_oracle(T.corolla(2), 2, T.corolla(2))


def test_graft_relabels_guest_and_host():
    host = N((2, (1, 3)))
    guest = N((2, 1))
    assert T.graft(host, 1, guest) == N((3, ((2, 1), 4)))
    assert T.graft(host, 3, guest) == N((2, (1, (4, 3))))


def test_graft_slot_out_of_range():
    with pytest.raises(T.TreeError):
        T.graft(T.corolla(2), 3, T.corolla(2))
    with pytest.raises(T.TreeError):
        T.graft(T.corolla(2), 0, T.corolla(2))


@given(trees, trees, st.data())
def test_graft_matches_adjacency_oracle(host, guest, data):
    j = data.draw(st.integers(1, T.arity(host)))
    assert T.graft(host, j, guest) == graft_oracle(host, j, guest)


@given(trees, trees, trees, st.data())
def test_grafting_disjoint_slots_commutes(host, g1, g2, data):
    k = T.arity(host)
    if k < 2:
        return
    i, j = sorted(data.draw(st.lists(st.integers(1, k), min_size=2, max_size=2, unique=True)))
    m1 = T.arity(g1)
    first = T.graft(T.graft(host, j, g2), i, g1)
    second = T.graft(T.graft(host, i, g1), j + m1 - 1, g2)
    assert first == second


@given(trees, trees, trees, st.data())
def test_nested_grafting_is_associative(a, b, c, data):
    i = data.draw(st.integers(1, T.arity(a)))
    j = data.draw(st.integers(1, T.arity(b)))
    assert T.graft(T.graft(a, i, b), i + j - 1, c) == T.graft(a, i, T.graft(b, j, c))


def test_multigraft_matches_sequential():
    host = N((1, (2, 3)))
    guests = [T.corolla(2), T.TRIVIAL, N(((1, 2), 3))]
    assert T.multigraft(host, guests) == N(((1, 2), (3, ((4, 5), 6))))
    with pytest.raises(T.TreeError):
        T.multigraft(host, guests[:2])


# ---------------------------------------------------------------- codes

def test_canonical_code_rotation():
    rotated = N((2, 3, 1))
    assert T.canonical_code(T.corolla(3), False) == T.canonical_code(rotated, False)
    assert T.canonical_code(T.corolla(3)) != T.canonical_code(rotated)


def test_binary_trees_distinct():
    assert T.canonical_code(N(((1, 2), 3))) != T.canonical_code(N((1, (2, 3))))


@given(trees, st.data())
def test_codes_detect_relabelling(t, data):
    k = T.arity(t)
    sigma = data.draw(st.permutations(list(range(1, k + 1))))
    u = T.relabel(t, dict(zip(range(1, k + 1), sigma)))
    assert (T.canonical_code(u) == T.canonical_code(t)) == isomorphic_ordered(u, t)


@given(trees)
def test_canonical_form_is_idempotent(t):
    c = T.canonical_form(t)
    assert T.canonical_form(c) == c
    assert T.canonical_code(c, False) == T.canonical_code(t, False)


# ---------------------------------------------------------------- enumeration

@pytest.mark.parametrize("k", range(1, 7))
def test_planar_counts_are_little_schroeder(k):
    ts = T.enumerate_trees(k)
    assert len(ts) == little_schroeder(k)
    assert len({T.canonical_code(t) for t in ts}) == len(ts)
    assert all(T.is_planar(t) and T.check_tree(t, 2) == k for t in ts)


def test_reference_counts():
    assert [len(T.enumerate_trees(k)) for k in (1, 4, 5)] == [1, 11, 45]
    assert T.enumerate_trees(1) == [T.TRIVIAL]


@pytest.mark.parametrize("k", range(2, 8))
def test_binary_subcount_is_catalan(k):
    binary = [t for t in T.enumerate_trees(k) if T.vertex_count(t) == k - 1]
    assert len(binary) == math.comb(2 * (k - 1), k - 1) // k


def test_enumeration_is_sorted_by_code():
    codes = [T.canonical_code(t) for t in T.enumerate_trees(5)]
    assert codes == sorted(codes)


def test_unordered_enumeration_counts():
    # total phylogenetic trees on k labelled leaves: 1, 1, 4, 26, 236
    assert [len(T.enumerate_trees(k, planar=False)) for k in range(1, 6)] == [1, 1, 4, 26, 236]


def test_unary_vertices_need_a_bound():
    with pytest.raises(T.BoundExceeded):
        T.enumerate_trees(2, min_valence=1)
    ts = T.enumerate_trees(1, min_valence=1, max_vertices=2)
    assert ts == sorted(ts, key=T.canonical_code)
    assert {T.vertex_count(t) for t in ts} == {0, 1, 2}
    with pytest.raises(T.TreeError):
        T.enumerate_trees(0)


# ---------------------------------------------------------------- collapse

def test_collapse_unique_edge():
    assert T.collapse_edge(N(((1, 2), 3)), (0,)) == T.corolla(3)


def test_collapse_errors():
    with pytest.raises(T.TreeError):
        T.collapse_edge(T.corolla(3), (0,))
    with pytest.raises(T.TreeError):
        T.collapse_edge(T.corolla(3), ())
    with pytest.raises(T.TreeError):
        T.collapse_edge(T.corolla(3), (5,))


def all_collapse_results(t):
    edges = T.internal_edges(t)
    if not edges:
        return {T.canonical_code(t)}
    out = set()
    for e in edges:
        out |= all_collapse_results(T.collapse_edge(t, e))
    return out


@pytest.mark.parametrize("k", [3, 4, 5])
def test_collapsing_in_every_order_reaches_corolla(k):
    target = T.canonical_code(T.corolla(k))
    for t in T.enumerate_trees(k):
        if T.num_internal_edges(t) <= 4:
            assert all_collapse_results(t) == {target}


@given(trees)
def test_collapse_drops_one_edge(t):
    for e in T.internal_edges(t):
        u = T.collapse_edge(t, e)
        assert T.num_internal_edges(u) == T.num_internal_edges(t) - 1
        assert T.leaves(u) == T.leaves(t)


# ---------------------------------------------------------------- I/O

@given(trees)
def test_json_roundtrip(t):
    assert T.from_json(T.to_json(t)) == t


def test_json_errors_and_dot():
    with pytest.raises(T.TreeError):
        T.from_json({"label": 1})
    with pytest.raises(T.TreeError):
        T.from_json([1])
    dot = T.to_dot(N((1, (2, 3))))
    assert dot.startswith("digraph") and dot.count("->") == 5


def test_check_tree_rejects_bad_labels():
    with pytest.raises(T.TreeError):
        T.check_tree(N((1, 1)))
    with pytest.raises(T.TreeError):
        T.check_tree(T.vertex(T.twig(1)), min_valence=2)
