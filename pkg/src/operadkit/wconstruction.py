"""Trees with edge lengths and operad labels, and the associahedron posets.

A :class:`WTree` is either a twig (a plain ``int`` label in ``1..k``) or a
:class:`WVertex`.  Each non-root vertex stores the length of its outgoing
edge; the root vertex stores ``None``.  Twigs and the root edge carry no
length.  Vertex labels are elements of a label operad ``A`` whose arity must
equal the vertex valence.

Normalization applies three rules until none fires:

* a length-0 internal edge is contracted, composing the two labels;
* a valence-1 vertex labelled by the unit of ``A`` is removed, its two edges
  merging into one of length ``s + t - st``;
* at every vertex the pair (label, child order) is replaced by the
  representative of its Σ-orbit with the smallest code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence, Union

from . import perms as P
from . import trees as T
from .sigma import Operad

ZERO, ONE = Fraction(0), Fraction(1)


class WTreeError(ValueError):
    pass


@dataclass(frozen=True)
class WVertex:
    label: Hashable
    children: tuple
    length: Fraction | None = None

    def __repr__(self):
        kids = " ".join(repr(c) for c in self.children)
        tail = "" if self.length is None else f"@{self.length}"
        return f"[{self.label!r}: {kids}]{tail}"


WTree = Union[int, WVertex]


def is_twig(t) -> bool:
    return isinstance(t, int)


def merge_lengths(s, t) -> Fraction:
    """``s + t - st``: lengths of two edges fused across a unit vertex."""
    s, t = Fraction(s), Fraction(t)
    for x in (s, t):
        if not ZERO <= x <= ONE:
            raise WTreeError(f"edge length {x} outside [0, 1]")
    return 1 - (1 - s) * (1 - t)


def _with_length(t: WTree, length) -> WTree:
    if is_twig(t):
        return t
    return WVertex(t.label, t.children, length)


def wtree(label, *children, length=None) -> WVertex:
    """Convenience constructor; lengths are coerced to ``Fraction``."""
    return WVertex(label, tuple(children), None if length is None else Fraction(length))


# ---------------------------------------------------------------- inspection

def leaves(t: WTree) -> list[int]:
    if is_twig(t):
        return [t]
    return [i for c in t.children for i in leaves(c)]


def arity(t: WTree) -> int:
    return len(leaves(t))


def vertices(t: WTree) -> list[WVertex]:
    if is_twig(t):
        return []
    return [t] + [v for c in t.children for v in vertices(c)]


def internal_edges(t: WTree) -> list[tuple[int, ...]]:
    """Paths (child indices from the root) of all internal edges, preorder."""
    out = []

    def walk(node, path):
        for i, c in enumerate(node.children):
            if not is_twig(c):
                out.append(path + (i,))
                walk(c, path + (i,))

    if not is_twig(t):
        walk(t, ())
    return out


def at(t: WTree, path: Sequence[int]) -> WTree:
    for i in path:
        t = t.children[i]
    return t


def replace_at(t: WTree, path: Sequence[int], new: WTree) -> WTree:
    if not path:
        return new
    i = path[0]
    kids = list(t.children)
    kids[i] = replace_at(kids[i], path[1:], new)
    return WVertex(t.label, tuple(kids), t.length)


def shape(t: WTree) -> T.Tree:
    """Underlying tree, forgetting labels and lengths."""
    if is_twig(t):
        return T.twig(t)
    return T.Tree(children=tuple(shape(c) for c in t.children))


def check_wtree(t: WTree, A: Operad) -> int:
    """Validate labels, valences, lengths and twig labels; return the arity."""
    labels = leaves(t)
    k = len(labels)
    if sorted(labels) != list(range(1, k + 1)):
        raise WTreeError(f"twig labels {labels} are not a bijection with 1..{k}")

    def walk(node, is_root):
        if is_twig(node):
            return
        if A.arity(node.label) != len(node.children):
            raise WTreeError(f"label {node.label!r} has arity {A.arity(node.label)}, "
                             f"vertex has valence {len(node.children)}")
        if is_root:
            if node.length is not None:
                raise WTreeError("the root edge carries no length")
        elif node.length is None or not ZERO <= node.length <= ONE:
            raise WTreeError(f"internal edge length {node.length!r} outside [0, 1]")
        for c in node.children:
            walk(c, False)

    walk(t, True)
    return k


# ---------------------------------------------------------------- evaluation

def evaluate(t: WTree, A: Operad):
    """The element of ``A(k)`` obtained by composing all labels (all lengths 0)."""
    if is_twig(t):
        return A.unit
    composite = _planar_composite(t, A)
    sigma = tuple(i - 1 for i in leaves(t))
    return A.act(composite, sigma)


def _planar_composite(t: WTree, A: Operad):
    if is_twig(t):
        return A.unit
    return A.compose(t.label, [_planar_composite(c, A) for c in t.children])


# ---------------------------------------------------------------- relations

def _code(t: WTree, A: Operad) -> tuple:
    if is_twig(t):
        return (0, t)
    return (1, A.key(t.label), str(t.length), tuple(_code(c, A) for c in t.children))


def _sort_key(t: WTree, A: Operad):
    # children compare by subtree code first, label only breaks ties
    return repr(_code(t, A))


def shuffle_vertex(v: WVertex, A: Operad) -> WVertex:
    """Canonical ``(label·σ, children reordered by σ⁻¹)`` over σ ∈ Σ_v."""
    kids = v.children
    best, best_key = v, None
    for s in P.all_perms(len(kids)):
        sinv = P.inverse(s)
        cand_kids = tuple(kids[sinv[p]] for p in range(len(kids)))
        label = A.act(v.label, s)
        key = (tuple(_sort_key(c, A) for c in cand_kids), A.key(label))
        if best_key is None or key < best_key:
            best, best_key = WVertex(label, cand_kids, v.length), key
    return best


def collapse_zero_edge(t: WTree, path: Sequence[int], A: Operad) -> WTree:
    """Contract the length-0 internal edge at ``path``."""
    path = tuple(path)
    lower = at(t, path)
    if not path or is_twig(lower) or lower.length != ZERO:
        raise WTreeError(f"no length-0 internal edge at {path}")
    parent = at(t, path[:-1])
    i = path[-1]
    label = A.partial_compose(parent.label, i, lower.label)
    kids = parent.children[:i] + lower.children + parent.children[i + 1:]
    return replace_at(t, path[:-1], WVertex(label, kids, parent.length))


def remove_unit_vertex(t: WTree, path: Sequence[int], A: Operad) -> WTree:
    """Delete the unit-labelled valence-1 vertex at ``path``."""
    path = tuple(path)
    v = at(t, path)
    if is_twig(v) or len(v.children) != 1 or v.label != A.unit:
        raise WTreeError(f"no unit vertex at {path}")
    child = v.children[0]
    if not path:
        return _with_length(child, None)
    if is_twig(child):
        return replace_at(t, path, child)
    return replace_at(t, path, _with_length(child, merge_lengths(v.length, child.length)))


def rewrite_sites(t: WTree, A: Operad, symmetric: bool = True) -> list[tuple[str, tuple]]:
    """Every place a relation currently applies, as ``(kind, path)``."""
    out = []

    def walk(node, path):
        if is_twig(node):
            return
        if path and node.length == ZERO:
            out.append(("collapse", path))
        if len(node.children) == 1 and node.label == A.unit:
            out.append(("unit", path))
        if symmetric and shuffle_vertex(node, A) != node:
            out.append(("shuffle", path))
        for i, c in enumerate(node.children):
            walk(c, path + (i,))

    walk(t, ())
    return out


def apply_rewrite(t: WTree, site: tuple[str, tuple], A: Operad) -> WTree:
    kind, path = site
    if kind == "collapse":
        return collapse_zero_edge(t, path, A)
    if kind == "unit":
        return remove_unit_vertex(t, path, A)
    if kind == "shuffle":
        return replace_at(t, path, shuffle_vertex(at(t, path), A))
    raise WTreeError(f"unknown rewrite {kind!r}")


def normalize_wtree(t: WTree, A: Operad, symmetric: bool = True) -> WTree:
    """Canonical representative of the class of ``t``.

    Bottom-up: children are normalized first, then the vertex itself is
    contracted along length-0 edges, stripped of unit vertices and shuffled.
    For label operads without a meaningful Σ-action pass ``symmetric=False``.
    """
    if is_twig(t):
        return t
    kids = [normalize_wtree(c, A, symmetric) for c in t.children]
    label = t.label
    changed = True
    while changed:
        changed = False
        for i, c in enumerate(kids):
            if not is_twig(c) and c.length == ZERO:
                label = A.partial_compose(label, i, c.label)
                kids[i:i + 1] = list(c.children)
                changed = True
                break
    node = WVertex(label, tuple(kids), t.length)
    if len(kids) == 1 and label == A.unit:
        child = kids[0]
        if node.length is None:
            return _with_length(child, None)
        if is_twig(child):
            return child
        # a merged length of 0 is contracted by the parent
        return _with_length(child, merge_lengths(node.length, child.length))
    return shuffle_vertex(node, A) if symmetric else node


def normal_forms_all_orders(t: WTree, A: Operad, symmetric: bool = True,
                            limit: int = 200000) -> set:
    """Terminal trees reachable by applying relations one at a time in every
    possible order.  Confluence means the result is a single tree."""
    seen = {t}
    stack = [t]
    terminal = set()
    while stack:
        cur = stack.pop()
        sites = rewrite_sites(cur, A, symmetric)
        if not sites:
            terminal.add(cur)
            continue
        for site in sites:
            nxt = apply_rewrite(cur, site, A)
            if nxt not in seen:
                if len(seen) >= limit:
                    raise WTreeError("rewrite graph exceeds the exploration limit")
                seen.add(nxt)
                stack.append(nxt)
    return terminal


def all_wtrees(A: Operad, k: int, lengths: Sequence, max_internal_edges: int = 3,
               max_vertices: int = 4) -> Iterator[WTree]:
    """Every W-tree on ``k`` twigs whose shape has at most the given number of
    internal edges and vertices, with all labels from ``A`` (unit vertices
    allowed) and internal lengths drawn from ``lengths``."""
    lengths = [Fraction(x) for x in lengths]

    def dress(shape):
        if shape.is_twig:
            yield shape.leaf
            return
        v = len(shape.children)
        labels = list(A.elements(v)) or ([A.unit] if v == 1 else [])
        if v == 1 and A.unit not in labels:
            labels.append(A.unit)
        for kids in itertools.product(*[list(dress(c)) for c in shape.children]):
            for label in labels:
                yield WVertex(label, tuple(kids))

    def measure(t, root):
        if is_twig(t):
            yield t
            return
        for kids in itertools.product(*[list(measure(c, False)) for c in t.children]):
            for length in ([None] if root else lengths):
                yield WVertex(t.label, tuple(kids), length)

    shapes = T.enumerate_trees(k, planar=False, min_valence=1, max_vertices=max_vertices)
    for shape in shapes:
        if T.num_internal_edges(shape) <= max_internal_edges:
            for t in dress(shape):
                yield from measure(t, True)


# ---------------------------------------------------------------- composition

def _shift(t: WTree, f: Callable[[int], int]) -> WTree:
    if is_twig(t):
        return f(t)
    return WVertex(t.label, tuple(_shift(c, f) for c in t.children), t.length)


def w_compose(a: WTree, bs: Sequence[WTree], A: Operad, symmetric: bool = True) -> WTree:
    """Graft ``bs[j]`` onto twig ``j+1`` of ``a``; new internal edges get length 1."""
    k = arity(a)
    if len(bs) != k:
        raise WTreeError(f"expected {k} trees, got {len(bs)}")
    sizes = [arity(b) for b in bs]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)

    def walk(node, is_root):
        if is_twig(node):
            b = _shift(bs[node - 1], lambda i, o=offsets[node - 1]: i + o)
            if is_root:
                return b
            return _with_length(b, ONE)
        return WVertex(node.label, tuple(walk(c, False) for c in node.children), node.length)

    out = walk(a, True)
    if is_twig(a):
        out = _with_length(out, None)
    return normalize_wtree(out, A, symmetric)


def w_act(t: WTree, sigma: Sequence[int], A: Operad, symmetric: bool = True) -> WTree:
    """Right Σ_k action: twig ``j+1`` is renamed ``sigma[j]+1``, which makes
    :func:`evaluate` equivariant."""
    sigma = tuple(sigma)
    return normalize_wtree(_shift(t, lambda i: sigma[i - 1] + 1), A, symmetric)


def w_unit() -> WTree:
    return 1


def corolla_wtree(label, k: int) -> WVertex:
    return WVertex(label, tuple(range(1, k + 1)))


def to_json(t: WTree) -> dict:
    if is_twig(t):
        return {"leaf": t}
    out = {"label": t.label, "children": [to_json(c) for c in t.children]}
    if t.length is not None:
        out["length"] = str(t.length)
    return out


def from_json(obj: dict) -> WTree:
    if "leaf" in obj:
        return int(obj["leaf"])
    try:
        length = obj.get("length")
        label = obj["label"]
        if isinstance(label, list):
            label = _tupleize(label)
        return WVertex(label, tuple(from_json(c) for c in obj["children"]),
                       None if length is None else Fraction(length))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise WTreeError(f"malformed WTree JSON: {exc}") from None


def _tupleize(x):
    return tuple(_tupleize(v) for v in x) if isinstance(x, list) else x


# ---------------------------------------------------------------- face posets

@dataclass
class GradedPoset:
    """Finite poset with a grade; ``less[i]`` lists ``j`` with ``i < j``
    (not only covers)."""

    elements: list
    grade: list[int]
    less: list[set]
    top_dimension: int

    def __len__(self):
        return len(self.elements)

    def leq(self, i: int, j: int) -> bool:
        return i == j or j in self.less[i]

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i, ups in enumerate(self.less):
            for j in ups:
                if not any(m in self.less[i] and j in self.less[m] for m in ups):
                    out.append((i, j))
        return sorted(out)

    def dimension(self, i: int) -> int:
        return self.top_dimension - self.grade[i]

    def chains(self, among: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """All non-empty chains, listed bottom to top."""
        pool = sorted(range(len(self)) if among is None else among)
        allowed = set(pool)
        out = []

        def extend(chain):
            out.append(tuple(chain))
            for j in sorted(self.less[chain[-1]] & allowed):
                extend(chain + [j])

        for i in pool:
            extend([i])
        return out

    def to_dot(self, name: str = "faces") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, e in enumerate(self.elements):
            lines.append(f'  f{i} [label="{e!r}\\ncodim {self.grade[i]}"];')
        for i, j in self.covers():
            lines.append(f"  f{i} -> f{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _collapses(t: T.Tree) -> set[str]:
    """Codes of every tree obtained by collapsing a non-empty edge subset."""
    seen = {}
    frontier = [t]
    while frontier:
        nxt = []
        for u in frontier:
            for e in T.internal_edges(u):
                v = T.collapse_edge(u, e)
                code = T.canonical_code(v)
                if code not in seen:
                    seen[code] = v
                    nxt.append(v)
        frontier = nxt
    return set(seen)


def face_poset(k: int) -> GradedPoset:
    """Faces of the associahedron: planar trees on ``1..k`` (valence ≥ 2)
    ordered by edge collapse, graded by internal edge count (codimension).
    The corolla is the top element."""
    if k < 2:
        raise WTreeError("face posets need k >= 2")
    elems = T.enumerate_trees(k, planar=True, min_valence=2)
    index = {T.canonical_code(t): i for i, t in enumerate(elems)}
    less = [{index[c] for c in _collapses(t)} for t in elems]
    grade = [T.num_internal_edges(t) for t in elems]
    return GradedPoset(list(elems), grade, less, k - 2)


def f_vector(p: GradedPoset) -> tuple[int, ...]:
    counts = [0] * (p.top_dimension + 1)
    for i in range(len(p)):
        counts[p.dimension(i)] += 1
    return tuple(counts)


def euler_characteristic(p: GradedPoset) -> int:
    return sum((-1) ** d * n for d, n in enumerate(f_vector(p)))


def boundary(p: GradedPoset) -> list[int]:
    """Indices of proper faces (everything except the codimension-0 cell)."""
    return [i for i in range(len(p)) if p.grade[i] > 0]


# ---------------------------------------------------------------- strata

def strata(k: int) -> list[tuple[str, frozenset]]:
    """Strata of the planar W-construction on the one-point operad in arity
    ``k``: pairs (tree code, set of internal edges of length exactly 1).
    All other internal lengths range over (0, 1)."""
    out = []
    for t in T.enumerate_trees(k, planar=True, min_valence=2):
        edges = T.internal_edges(t)
        for r in range(len(edges) + 1):
            for sub in itertools.combinations(edges, r):
                out.append((T.canonical_code(t), frozenset(sub)))
    return out


def face_strata(face: T.Tree, k: int) -> frozenset:
    """Strata making up the closed boundary face indexed by ``face``.

    A point ``(t, lengths)`` lies in it when collapsing some edge set ``Z``
    of ``t`` gives ``face`` and every edge outside ``Z`` has length 1.
    """
    target = T.canonical_code(face)
    out = set()
    for t in T.enumerate_trees(k, planar=True, min_valence=2):
        edges = T.internal_edges(t)
        code = T.canonical_code(t)
        for r in range(len(edges) + 1):
            for zeros in itertools.combinations(edges, r):
                if T.canonical_code(_collapse_set(t, zeros)) != target:
                    continue
                required = [e for e in edges if e not in zeros]
                optional = list(zeros)
                for m in range(len(optional) + 1):
                    for extra in itertools.combinations(optional, m):
                        out.add((code, frozenset(required) | frozenset(extra)))
    return frozenset(out)


def _collapse_set(t: T.Tree, paths) -> T.Tree:
    # reverse lexicographic order: a collapse only renames larger paths
    for e in sorted(paths, reverse=True):
        t = T.collapse_edge(t, e)
    return t
