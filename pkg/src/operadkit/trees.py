"""Rooted trees with labelled twigs.

A tree is either a *twig* (a leaf edge carrying a label in ``1..k``) or a
*vertex* with an ordered tuple of incoming subtrees.  The root edge is implicit:
it is the outgoing edge of the top-level node.  The trivial tree (one edge, no
vertices) is the bare twig ``Tree(leaf=1)``.

Internal edges are addressed by *paths*: the tuple of child indices leading
from the root vertex to the lower end vertex of the edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


class TreeError(ValueError):
    """Raised on malformed trees or out-of-range tree operations."""


class BoundExceeded(TreeError):
    """Raised when an enumeration would not terminate under the given bounds."""


@dataclass(frozen=True)
class Tree:
    children: tuple["Tree", ...] = ()
    leaf: int | None = None

    def __post_init__(self):
        if self.leaf is not None and self.children:
            raise TreeError("a twig has no children")

    @property
    def is_twig(self) -> bool:
        return self.leaf is not None

    @property
    def valence(self) -> int:
        return len(self.children)

    def __repr__(self):
        if self.is_twig:
            return str(self.leaf)
        return "(" + " ".join(repr(c) for c in self.children) + ")"


def twig(i: int) -> Tree:
    return Tree(leaf=i)


def vertex(*children: Tree) -> Tree:
    return Tree(children=tuple(children))


TRIVIAL = twig(1)


def corolla(k: int) -> Tree:
    return vertex(*(twig(i) for i in range(1, k + 1)))


def from_nested(obj) -> Tree:
    """Build a tree from nested tuples: ints are twigs, tuples are vertices.

    >>> from_nested((1, (2, 3)))
    (1 (2 3))
    """
    if isinstance(obj, Tree):
        return obj
    if isinstance(obj, int):
        return twig(obj)
    return vertex(*(from_nested(o) for o in obj))


# ---------------------------------------------------------------- inspection

def leaves(t: Tree) -> list[int]:
    """Twig labels in planar (left to right) order."""
    if t.is_twig:
        return [t.leaf]
    out = []
    for c in t.children:
        out.extend(leaves(c))
    return out


def arity(t: Tree) -> int:
    return len(leaves(t))


def vertex_count(t: Tree) -> int:
    if t.is_twig:
        return 0
    return 1 + sum(vertex_count(c) for c in t.children)


def internal_edges(t: Tree) -> list[tuple[int, ...]]:
    """Paths of all internal edges, in preorder."""
    out: list[tuple[int, ...]] = []

    def walk(node, path):
        for i, c in enumerate(node.children):
            if not c.is_twig:
                out.append(path + (i,))
                walk(c, path + (i,))

    if not t.is_twig:
        walk(t, ())
    return out


def num_internal_edges(t: Tree) -> int:
    return len(internal_edges(t))


def subtree(t: Tree, path: Sequence[int]) -> Tree:
    for i in path:
        if t.is_twig or not 0 <= i < len(t.children):
            raise TreeError(f"no edge at path {tuple(path)}")
        t = t.children[i]
    return t


def check_tree(t: Tree, min_valence: int = 1) -> int:
    """Validate that ``t`` is a tree on ``{1..k}``; return ``k``."""
    labels = leaves(t)
    k = len(labels)
    if sorted(labels) != list(range(1, k + 1)):
        raise TreeError(f"twig labels {labels} are not a bijection with 1..{k}")
    if min_valence not in (0, 1, 2):
        raise TreeError("min_valence must be 0, 1 or 2")

    def walk(node):
        if node.is_twig:
            return
        if node.valence < min_valence:
            raise TreeError(f"vertex of valence {node.valence} < {min_valence}")
        for c in node.children:
            walk(c)

    walk(t)
    return k


def is_planar(t: Tree) -> bool:
    """True when twig labels read 1..k from left to right."""
    labels = leaves(t)
    return labels == list(range(1, len(labels) + 1))


# ---------------------------------------------------------------- operations

def relabel(t: Tree, mapping) -> Tree:
    """Replace every twig label ``i`` by ``mapping[i]`` (dict or callable)."""
    f = mapping if callable(mapping) else mapping.__getitem__
    if t.is_twig:
        return twig(f(t.leaf))
    return Tree(children=tuple(relabel(c, f) for c in t.children))


def _shift_for_graft(j: int, m: int):
    return lambda i: i if i < j else i + m - 1


def graft(host: Tree, j: int, guest: Tree) -> Tree:
    """Merge the root of ``guest`` with twig ``j`` of ``host``.

    Twig labels of the result: the guest's twigs take labels ``j..j+m-1`` in
    their own order, host twigs above ``j`` shift up by ``m-1``.  A guest with
    no twigs (an arity-0 vertex) deletes slot ``j`` and host labels above it
    shift down by one.
    """
    k = arity(host)
    if not 1 <= j <= k:
        raise TreeError(f"slot {j} out of range 1..{k}")
    m = arity(guest)
    shifted_guest = relabel(guest, lambda i: i + j - 1)
    shift = _shift_for_graft(j, m)

    def walk(node):
        if node.is_twig:
            return shifted_guest if node.leaf == j else twig(shift(node.leaf))
        return Tree(children=tuple(walk(c) for c in node.children))

    return walk(host)


def multigraft(host: Tree, guests: Sequence[Tree]) -> Tree:
    """Operadic composition ``host ∘ (g_1, ..., g_k)`` by grafting."""
    k = arity(host)
    if len(guests) != k:
        raise TreeError(f"expected {k} guests, got {len(guests)}")
    out = host
    for j in range(k, 0, -1):
        out = graft(out, j, guests[j - 1])
    return out


def collapse_edge(t: Tree, path: Sequence[int]) -> Tree:
    """Contract the internal edge at ``path``; the lower vertex's children are
    spliced into the parent's child list in place."""
    path = tuple(path)
    if not path:
        raise TreeError("the root edge cannot be collapsed")
    target = subtree(t, path)
    if target.is_twig:
        raise TreeError("a twig cannot be collapsed")

    def walk(node, rest):
        i = rest[0]
        if len(rest) == 1:
            kids = node.children[:i] + node.children[i].children + node.children[i + 1:]
            return Tree(children=kids)
        kids = list(node.children)
        kids[i] = walk(kids[i], rest[1:])
        return Tree(children=tuple(kids))

    return walk(t, path)


def collapse_all(t: Tree) -> Tree:
    while True:
        edges = internal_edges(t)
        if not edges:
            return t
        t = collapse_edge(t, edges[0])


def canonical_code(t: Tree, respect_order: bool = True) -> str:
    """Symbol string equal for two trees iff they are isomorphic.

    With ``respect_order`` the child order is part of the structure; without
    it children codes are sorted so only the unordered tree (with its twig
    labels) matters.
    """
    if t.is_twig:
        return str(t.leaf)
    codes = [canonical_code(c, respect_order) for c in t.children]
    if not respect_order:
        codes.sort()
    return "(" + ",".join(codes) + ")"


def canonical_form(t: Tree) -> Tree:
    """Representative of the unordered isomorphism class (children sorted)."""
    if t.is_twig:
        return t
    kids = sorted((canonical_form(c) for c in t.children), key=lambda c: canonical_code(c, False))
    return Tree(children=tuple(kids))


# ---------------------------------------------------------------- enumeration

def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    for cuts in itertools.combinations(range(1, n), parts - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


@lru_cache(maxsize=None)
def _planar_shapes(n: int, min_valence: int, budget: int) -> tuple[tuple[Tree, int], ...]:
    """Planar trees on twigs 1..n with at most ``budget`` vertices, as
    (tree, vertex count) pairs."""
    out: list[tuple[Tree, int]] = []
    if n == 1:
        out.append((TRIVIAL, 0))
    if budget <= 0:
        return tuple(out)
    lo = max(min_valence, 1)
    for parts in range(lo, n + 1):
        for comp in _compositions(n, parts):
            pools = [_planar_shapes(c, min_valence, budget - 1) for c in comp]
            for combo in itertools.product(*pools):
                used = 1 + sum(v for _, v in combo)
                if used > budget:
                    continue
                kids, offset = [], 0
                for (sub, _), size in zip(combo, comp):
                    kids.append(relabel(sub, lambda i, o=offset: i + o))
                    offset += size
                out.append((Tree(children=tuple(kids)), used))
    return tuple(out)


def _set_partitions(items: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _unordered_shapes(labels: tuple[int, ...], min_valence: int, budget: int):
    out: list[tuple[Tree, int]] = []
    if len(labels) == 1:
        out.append((twig(labels[0]), 0))
    if budget <= 0:
        return tuple(out)
    lo = max(min_valence, 1)
    for blocks in _set_partitions(labels):
        if len(blocks) < lo:
            continue
        pools = [_unordered_shapes(tuple(sorted(b)), min_valence, budget - 1) for b in blocks]
        for combo in itertools.product(*pools):
            used = 1 + sum(v for _, v in combo)
            if used <= budget:
                out.append((canonical_form(Tree(children=tuple(s for s, _ in combo))), used))
    return tuple(out)


def enumerate_trees(k: int, planar: bool = True, min_valence: int = 2,
                    max_vertices: int | None = None) -> list[Tree]:
    """One representative per isomorphism class of trees on ``{1..k}``.

    ``planar`` trees carry their twigs in the order 1..k (these index the faces
    of the associahedron); otherwise trees are unordered with arbitrary twig
    labelling.  With ``min_valence=1`` unary vertices are allowed and
    ``max_vertices`` is required to keep the family finite.
    """
    if k < 1:
        raise TreeError("k must be at least 1")
    if min_valence not in (1, 2):
        raise TreeError("min_valence must be 1 or 2")
    if min_valence == 1 and max_vertices is None:
        raise BoundExceeded("unary vertices allowed: max_vertices is required")
    budget = k - 1 if max_vertices is None else max_vertices
    if planar:
        found = [t for t, _ in _planar_shapes(k, min_valence, budget)]
        key = canonical_code
    else:
        found = [t for t, _ in _unordered_shapes(tuple(range(1, k + 1)), min_valence, budget)]
        key = lambda t: canonical_code(t, False)  # noqa: E731
    unique = {key(t): t for t in found}
    return [unique[c] for c in sorted(unique)]


# ---------------------------------------------------------------- I/O

def to_json(t: Tree) -> dict:
    if t.is_twig:
        return {"leaf": t.leaf}
    return {"children": [to_json(c) for c in t.children]}


def from_json(obj: dict) -> Tree:
    if not isinstance(obj, dict):
        raise TreeError(f"tree node must be an object, got {obj!r}")
    if "leaf" in obj:
        return twig(int(obj["leaf"]))
    if "children" in obj:
        return Tree(children=tuple(from_json(c) for c in obj["children"]))
    raise TreeError(f"tree node needs 'leaf' or 'children': {obj!r}")


def to_dot(t: Tree, name: str = "tree") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  root [shape=point];']
    counter = itertools.count()

    def walk(node):
        ident = f"n{next(counter)}"
        if node.is_twig:
            lines.append(f'  {ident} [label="{node.leaf}", shape=plaintext];')
        else:
            lines.append(f'  {ident} [label="", shape=circle, width=0.15];')
            for c in node.children:
                lines.append(f"  {walk(c)} -> {ident};")
        return ident

    top = walk(t)
    lines.append(f"  {top} -> root;")
    lines.append("}")
    return "\n".join(lines) + "\n"
