"""Fulton-MacPherson points over exact rationals.

Points are tuples of :class:`~fractions.Fraction`; all distances are L∞.

An :class:`FMPoint` is a tuple of components ``(location, node)`` sorted by
location.  A node is either a twig (``int`` label, 1-based and global across
components) or an :class:`FMVertex` whose ``cloud`` lists one normalized point
per child.  Children are kept sorted by their cloud point, which makes
structural equality the right notion of equality.

A point of ``F_n(k)`` is an FMPoint with a single component at the origin
(``k >= 1``) or with no components at all (the empty configuration, ``k = 0``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from scipy.cluster.hierarchy import DisjointSet

from . import perms as P

Point = tuple  # tuple[Fraction, ...]


class FMError(ValueError):
    pass


class EpsilonTooLarge(FMError):
    pass


# ---------------------------------------------------------------- vectors

def point(*coords) -> Point:
    return tuple(Fraction(c) for c in coords)


def as_point(p) -> Point:
    if isinstance(p, (int, Fraction, str)):
        return (Fraction(p),)
    return tuple(Fraction(c) for c in p)


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


def scale(p: Point, t) -> Point:
    return tuple(a * t for a in p)


def norm(p: Point) -> Fraction:
    return max((abs(a) for a in p), default=Fraction(0))


def dist(p: Point, q: Point) -> Fraction:
    return norm(sub(p, q))


def centroid(pts: Sequence[Point]) -> Point:
    n = len(pts[0])
    m = len(pts)
    return tuple(sum((p[i] for p in pts), Fraction(0)) / m for i in range(n))


def diameter(pts: Sequence[Point]) -> Fraction:
    return max((dist(p, q) for p, q in itertools.combinations(pts, 2)), default=Fraction(0))


def min_distance(pts: Sequence[Point]) -> Fraction:
    return min(dist(p, q) for p, q in itertools.combinations(pts, 2))


def _check_distinct(pts: Sequence[Point]):
    if len(set(pts)) != len(pts):
        raise FMError("coincident points")


def normalize_cloud(pts: Sequence) -> tuple[Point, Fraction, tuple[Point, ...]]:
    """``(offset, scale, cloud)`` with ``pts[i] = offset + scale * cloud[i]``.

    The offset is the centroid and the scale the largest L∞ norm after
    centering, so the cloud has centroid 0 and max norm 1.
    """
    pts = [as_point(p) for p in pts]
    if len(pts) < 2:
        raise FMError("a cloud needs at least two points")
    if len({len(p) for p in pts}) != 1:
        raise FMError("points of mixed dimension")
    _check_distinct(pts)
    c = centroid(pts)
    centered = [sub(p, c) for p in pts]
    s = max(norm(p) for p in centered)
    return c, s, tuple(scale(p, 1 / s) for p in centered)


def is_normalized(cloud: Sequence[Point]) -> bool:
    return (len(cloud) >= 2 and all(a == 0 for a in centroid(cloud))
            and max(norm(p) for p in cloud) == 1 and len(set(cloud)) == len(cloud))


# ---------------------------------------------------------------- FM points

@dataclass(frozen=True)
class FMVertex:
    cloud: tuple
    children: tuple

    def __repr__(self):
        parts = []
        for p, c in zip(self.cloud, self.children):
            parts.append(f"{_fmt_point(p)}:{c!r}")
        return "{" + ", ".join(parts) + "}"


FMNode = Union[int, FMVertex]


def _fmt_point(p: Point) -> str:
    return "(" + ",".join(str(a) for a in p) + ")"


def make_vertex(cloud: Sequence[Point], children: Sequence[FMNode]) -> FMVertex:
    """Vertex with children sorted by cloud point."""
    pairs = sorted(zip((as_point(p) for p in cloud), children), key=lambda pc: pc[0])
    return FMVertex(tuple(p for p, _ in pairs), tuple(c for _, c in pairs))


@dataclass(frozen=True)
class FMPoint:
    dim: int
    components: tuple  # tuple[(Point, FMNode), ...] sorted by location

    @property
    def k(self) -> int:
        return sum(len(node_twigs(n)) for _, n in self.components)

    @property
    def locations(self) -> tuple:
        return tuple(p for p, _ in self.components)

    def __repr__(self):
        comps = "; ".join(f"{_fmt_point(p)} -> {n!r}" for p, n in self.components)
        return f"FMPoint[{comps}]"


def fm_point(dim: int, components: Iterable[tuple]) -> FMPoint:
    comps = tuple(sorted(((as_point(p), n) for p, n in components), key=lambda c: c[0]))
    return FMPoint(dim, comps)


def node_twigs(node: FMNode) -> list[int]:
    if isinstance(node, int):
        return [node]
    return [i for c in node.children for i in node_twigs(c)]


def node_depth(node: FMNode) -> int:
    if isinstance(node, int):
        return 0
    return 1 + max(node_depth(c) for c in node.children)


def node_vertices(node: FMNode) -> list[FMVertex]:
    if isinstance(node, int):
        return []
    return [node] + [v for c in node.children for v in node_vertices(c)]


def validate_fm(x: FMPoint) -> FMPoint:
    """Check the structural invariants; return ``x`` for chaining."""
    locs = [p for p, _ in x.components]
    if any(len(p) != x.dim for p in locs):
        raise FMError("location of wrong dimension")
    if len(set(locs)) != len(locs):
        raise FMError("macroscopic locations must be distinct")
    if list(locs) != sorted(locs):
        raise FMError("components must be sorted by location")
    twigs = [i for _, n in x.components for i in node_twigs(n)]
    if sorted(twigs) != list(range(1, len(twigs) + 1)):
        raise FMError(f"twig labels {twigs} are not a bijection with 1..{len(twigs)}")
    for _, n in x.components:
        for v in node_vertices(n):
            if len(v.children) < 2:
                raise FMError("vertices need valence at least 2")
            if len(v.cloud) != len(v.children) or any(len(p) != x.dim for p in v.cloud):
                raise FMError("cloud does not match the vertex")
            if not is_normalized(v.cloud):
                raise FMError(f"cloud {v.cloud} is not normalized")
            if list(v.cloud) != sorted(v.cloud):
                raise FMError("children must be sorted by cloud point")
    return x


def from_config(points: Sequence) -> FMPoint:
    """Inclusion of a genuine configuration: every point its own trivial tree."""
    pts = [as_point(p) for p in points]
    if not pts:
        raise FMError("use fm_empty(dim) for the empty configuration")
    _check_distinct(pts)
    return fm_point(len(pts[0]), [(p, i + 1) for i, p in enumerate(pts)])


def fm_empty(dim: int) -> FMPoint:
    """The single point of ``F_n(0)``."""
    return FMPoint(dim, ())


def fm_unit(dim: int) -> FMPoint:
    return FMPoint(dim, ((tuple([Fraction(0)] * dim), 1),))


def fm_corolla(cloud: Sequence) -> FMPoint:
    """Element of ``F_n(k)`` with one vertex; ``cloud[i]`` carries twig ``i+1``."""
    _, _, c = normalize_cloud(cloud)
    v = make_vertex(c, range(1, len(c) + 1))
    return FMPoint(len(c[0]), ((tuple([Fraction(0)] * len(c[0])), v),))


def is_operad_element(x: FMPoint) -> bool:
    if not x.components:
        return True
    return len(x.components) == 1 and all(a == 0 for a in x.components[0][0])


def blow_down(x: FMPoint) -> list[Point]:
    """Twig ``i`` goes to the macroscopic location of its tree."""
    out: dict[int, Point] = {}
    for p, n in x.components:
        for i in node_twigs(n):
            out[i] = p
    return [out[i] for i in range(1, len(out) + 1)]


def scale_config(points: Sequence, t) -> list[Point]:
    t = Fraction(t)
    if t <= 0:
        raise FMError("scale factor must be positive")
    return [scale(as_point(p), t) for p in points]


# ---------------------------------------------------------------- clustering

def _single_linkage_levels(pts: Sequence[Point], idx: Sequence[int]):
    """Merge heights of the single-linkage hierarchy (L∞), via Kruskal."""
    edges = sorted((dist(pts[a], pts[b]), a, b) for a, b in itertools.combinations(idx, 2))
    uf = DisjointSet(idx)
    tree_edges = []
    for d, a, b in edges:
        if not uf.connected(a, b):
            uf.merge(a, b)
            tree_edges.append((d, a, b))
    return tree_edges


def _blocks(idx, tree_edges, height):
    uf = DisjointSet(idx)
    for d, a, b in tree_edges:
        if d <= height:
            uf.merge(a, b)
    return [sorted(s) for s in uf.subsets()]


def coarsest_cut(pts: Sequence[Point], idx: Sequence[int], theta: Fraction) -> list[list[int]]:
    """Coarsest single-linkage cut of ``idx`` into at least two blocks whose
    largest block diameter is below ``theta`` times the smallest gap between
    blocks.  The cut into singletons always qualifies."""
    tree_edges = _single_linkage_levels(pts, idx)
    heights = sorted({d for d, _, _ in tree_edges})
    # candidate cut j keeps merges of height <= heights[j-1]; gap is heights[j]
    for j in range(len(heights) - 1, -1, -1):
        below = heights[j - 1] if j > 0 else Fraction(-1)
        blocks = _blocks(idx, tree_edges, below)
        gap = heights[j]
        widest = max(diameter([pts[i] for i in b]) for b in blocks)
        if widest < theta * gap:
            return blocks
    raise AssertionError("singleton cut must qualify")  # pragma: no cover


def _cluster_block(pts, idx, theta) -> tuple[FMNode, Point]:
    if len(idx) == 1:
        return idx[0] + 1, pts[idx[0]]
    kids, centers = [], []
    for b in coarsest_cut(pts, idx, theta):
        node, c = _cluster_block(pts, b, theta)
        kids.append(node)
        centers.append(c)
    _, _, cloud = normalize_cloud(centers)
    return make_vertex(cloud, kids), centroid([pts[i] for i in idx])


def cluster(points: Sequence, theta=Fraction(1, 10)) -> FMPoint:
    """Read off the degeneration tree a genuine configuration is close to.

    The top-level coarsest cut gives the macroscopic locations (block
    centroids); inside each block the coarsest cut gives a vertex's children,
    recursively.  Clouds are the normalized child centroids.
    """
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise FMError("theta must lie in (0, 1)")
    pts = [as_point(p) for p in points]
    if not pts:
        raise FMError("empty configuration")
    _check_distinct(pts)
    idx = list(range(len(pts)))
    if len(pts) == 1:
        return fm_point(len(pts[0]), [(pts[0], 1)])
    comps = []
    for b in coarsest_cut(pts, idx, theta):
        node, c = _cluster_block(pts, b, theta)
        comps.append((c, node))
    return fm_point(len(pts[0]), comps)


# ---------------------------------------------------------------- resolve

def _weighted_mean(node: FMVertex) -> Point:
    weights = [len(node_twigs(c)) for c in node.children]
    total = sum(weights)
    dim = len(node.cloud[0])
    return tuple(sum((w * p[i] for w, p in zip(weights, node.cloud)), Fraction(0)) / total
                 for i in range(dim))


def resolve_bound(x: FMPoint) -> Fraction:
    """``ε`` strictly below this value gives distinct points in :func:`resolve`.

    Points of a vertex at depth ``d`` spread at most ``4 ε^d`` from its
    centre (``ε <= 1/2``), so ``ε < d_min / 8`` separates siblings and
    ``ε < gap / 8`` separates macroscopic locations.
    """
    bound = Fraction(1, 2)
    for _, n in x.components:
        for v in node_vertices(n):
            bound = min(bound, min_distance(v.cloud) / 8)
    locs = x.locations
    if len(locs) >= 2:
        bound = min(bound, min_distance(locs) / 8)
    return bound


def resolve(x: FMPoint, eps) -> list[Point]:
    """A genuine configuration near ``x``: vertex clouds at depth ``d`` are
    scaled by ``ε^d``.  Child centres are offset by the leaf-weighted cloud
    mean, so every cluster's centroid lands exactly on its placement."""
    eps = Fraction(eps)
    if eps <= 0:
        raise FMError("epsilon must be positive")
    bound = resolve_bound(x)
    if eps >= bound:
        raise EpsilonTooLarge(f"epsilon {eps} is not below the separation bound {bound}")
    out: dict[int, Point] = {}

    def place(node, where, lam):
        if isinstance(node, int):
            out[node] = where
            return
        wbar = _weighted_mean(node)
        for p, c in zip(node.cloud, node.children):
            place(c, add(where, scale(sub(p, wbar), lam)), lam * eps)

    for loc, n in x.components:
        place(n, loc, eps)
    pts = [out[i] for i in range(1, len(out) + 1)]
    _check_distinct(pts)
    return pts


# ---------------------------------------------------------------- composition

def _relabel(node: FMNode, f) -> FMNode:
    if isinstance(node, int):
        return f(node)
    return FMVertex(node.cloud, tuple(_relabel(c, f) for c in node.children))


def _delete_twig(node: FMNode, j: int) -> FMNode | None:
    """Remove twig ``j``; vertices left with one child dissolve and clouds
    that lost a point are renormalized."""
    if isinstance(node, int):
        return None if node == j else node
    kept_pts, kept = [], []
    changed = False
    for p, c in zip(node.cloud, node.children):
        new = _delete_twig(c, j)
        if new is None:
            changed = True
            continue
        kept_pts.append(p)
        kept.append(new)
    if not kept:
        return None
    if len(kept) == 1:
        return kept[0]
    if not changed:
        return FMVertex(node.cloud, tuple(kept))
    _, _, cloud = normalize_cloud(kept_pts)
    return make_vertex(cloud, kept)


def fm_compose(c: FMPoint, j: int, o: FMPoint) -> FMPoint:
    """Insert the operad element ``o`` at twig ``j`` of ``c``.

    ``o``'s twigs take labels ``j..j+m-1`` and twigs of ``c`` above ``j``
    shift by ``m-1``.  The empty configuration deletes twig ``j``.
    """
    k = c.k
    if not 1 <= j <= k:
        raise FMError(f"slot {j} out of range 1..{k}")
    if not is_operad_element(o):
        raise FMError("the inserted point must be an operad element (one tree at the origin)")
    if o.dim != c.dim:
        raise FMError("dimension mismatch")
    if not o.components:
        comps = []
        for p, n in c.components:
            new = _delete_twig(n, j)
            if new is not None:
                comps.append((p, _relabel(new, lambda i: i if i < j else i - 1)))
        return FMPoint(c.dim, tuple(comps))
    guest = o.components[0][1]
    m = len(node_twigs(guest))
    guest = _relabel(guest, lambda i: i + j - 1)

    def walk(node):
        if isinstance(node, int):
            if node == j:
                return guest
            return node if node < j else node + m - 1
        return FMVertex(node.cloud, tuple(walk(ch) for ch in node.children))

    return FMPoint(c.dim, tuple((p, walk(n)) for p, n in c.components))


def fm_multicompose(a: FMPoint, os: Sequence[FMPoint]) -> FMPoint:
    """``a ∘ (o_1, ..., o_k)``; slots are filled from the last one down."""
    if len(os) != a.k:
        raise FMError(f"expected {a.k} operad elements, got {len(os)}")
    out = a
    for j in range(a.k, 0, -1):
        out = fm_compose(out, j, os[j - 1])
    return out


def fm_act(x: FMPoint, sigma: Sequence[int]) -> FMPoint:
    """Right Σ_k action: twig ``j+1`` is renamed ``sigma[j]+1``, so that
    input ``sigma[j]`` lands where input ``j`` was."""
    sigma = tuple(sigma)
    return FMPoint(x.dim, tuple((p, _relabel(n, lambda i: sigma[i - 1] + 1))
                                for p, n in x.components))


# ---------------------------------------------------------------- random suites

def random_lattice_points(rng: random.Random, m: int, dim: int) -> list[Point]:
    """``m`` distinct points of the lattice box ``{0..m}^dim``; the smallest
    pairwise L∞ distance is at least ``1/m`` of the largest."""
    pts: set[Point] = set()
    while len(pts) < m:
        pts.add(tuple(Fraction(rng.randint(0, m)) for _ in range(dim)))
    out = sorted(pts)
    rng.shuffle(out)
    return out


def random_cloud(rng: random.Random, m: int, dim: int) -> tuple[Point, ...]:
    return normalize_cloud(random_lattice_points(rng, m, dim))[2]


def random_node(rng: random.Random, leaves: int, depth: int, dim: int, counter) -> FMNode:
    """Random tree on ``leaves`` twigs with at most ``depth`` vertex levels."""
    if leaves == 1:
        return next(counter)
    if depth <= 1:
        sizes = [1] * leaves
    else:
        m = rng.randint(2, leaves)
        cuts = sorted(rng.sample(range(1, leaves), m - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [leaves])]
    kids = [random_node(rng, s, depth - 1, dim, counter) for s in sizes]
    return make_vertex(random_cloud(rng, len(kids), dim), kids)


def random_fm_point(rng: random.Random, k: int | None = None, dim: int | None = None,
                    depth: int = 3, locations: int | None = None) -> FMPoint:
    """Random FMPoint with at least two macroscopic locations (or ``k = 1``),
    scaled so that it round-trips through :func:`resolve` and :func:`cluster`
    for ``theta = 1/10``: clouds and locations have ``d_min/d_max >= 1/8``."""
    dim = dim or rng.randint(1, 3)
    k = k or rng.randint(2, 8)
    if k == 1:
        l = 1
    else:
        l = locations or rng.randint(2, k)
    sizes = [1] * l
    for _ in range(k - l):
        sizes[rng.randrange(l)] += 1
    locs = random_lattice_points(rng, l, dim)
    counter = itertools.count(1)
    comps = [(loc, random_node(rng, s, depth, dim, counter)) for loc, s in zip(locs, sizes)]
    x = fm_point(dim, comps)
    perm = list(range(k))
    rng.shuffle(perm)
    return validate_fm(fm_act(x, tuple(perm)))


def random_operad_element(rng: random.Random, k: int, dim: int, depth: int = 2) -> FMPoint:
    if k == 0:
        return fm_empty(dim)
    d = 0 if k == 1 else rng.randint(1, min(depth, k - 1))
    node = random_node(rng, k, d, dim, itertools.count(1))
    x = FMPoint(dim, ((tuple([Fraction(0)] * dim), node),))
    perm = list(range(k))
    rng.shuffle(perm)
    return fm_act(x, tuple(perm))


# ---------------------------------------------------------------- little discs

Disc = tuple  # (center: Point, radius: Fraction)


class LittleDiscs:
    """Little n-discs: arity-k elements are k disjoint round sub-discs of the
    unit disc, ``((center, radius), ...)``.  Composition substitutes the
    j-th configuration into disc j via ``y ↦ c_j + r_j y``.

    Only the operations are provided; the sets ``D_n(k)`` are infinite."""

    name = "little-discs"

    def __init__(self, dim: int, max_arity: int = 64):
        self.dim = dim
        self.max_arity = max_arity
        self.unit = ((tuple([Fraction(0)] * dim), Fraction(1)),)

    def disc_config(self, discs) -> tuple:
        out = tuple((as_point(c), Fraction(r)) for c, r in discs)
        check_discs(out, self.dim)
        return out

    def arity(self, x) -> int:
        return len(x)

    def key(self, x):
        return repr(x)

    def elements(self, n):
        raise FMError("little discs form an infinite set; sample configurations instead")

    def compose(self, a, bs):
        if len(bs) != len(a):
            raise FMError(f"arity mismatch: {len(a)} slots, {len(bs)} inputs")
        out = []
        for (c, r), b in zip(a, bs):
            for c2, r2 in b:
                out.append((add(c, scale(c2, r)), r * r2))
        return tuple(out)

    def partial_compose(self, a, i, b):
        bs = [self.unit] * len(a)
        bs[i] = b
        return self.compose(a, bs)

    def act(self, x, sigma):
        # disc j of x receives input sigma[j]
        return P.permute(x, P.inverse(tuple(sigma)))


def _sq(p: Point) -> Fraction:
    return sum((a * a for a in p), Fraction(0))


def check_discs(discs, dim: int):
    """Disjoint round discs inside the closed unit disc (squared L₂ tests)."""
    for c, r in discs:
        if len(c) != dim or r <= 0:
            raise FMError(f"bad disc {(c, r)!r}")
        # |c| + r <= 1  iff  r <= 1 and |c|^2 <= (1 - r)^2
        if r > 1 or _sq(c) > (1 - r) ** 2:
            raise FMError(f"disc {(c, r)!r} leaves the unit disc")
    for (c1, r1), (c2, r2) in itertools.combinations(discs, 2):
        if _sq(sub(c1, c2)) <= (r1 + r2) ** 2:
            raise FMError(f"discs {(c1, r1)!r} and {(c2, r2)!r} overlap")


def little_discs_to_fm(t, dim: int) -> FMPoint:
    """FM point of a W-tree labelled by little-disc configurations.

    The embedding feeding an internal edge of length ``l`` is precomposed
    with the dilatation by ``1 - l``: length 0 is plain composition, length 1
    shrinks the subtree to a point and so becomes an internal FM vertex.
    Twigs are sent to the centres of their (composed) discs.
    """
    from . import wconstruction as W
    D = LittleDiscs(dim)
    for v in W.vertices(t):
        check_discs(v.label, dim)
        if v.length is not None and not 0 <= v.length <= 1:
            raise FMError(f"edge length {v.length} outside [0, 1]")
    zero = tuple([Fraction(0)] * dim)
    if W.is_twig(t):
        return FMPoint(dim, ((zero, t),))

    def screen(v, offset, factor):
        """Points (and child nodes) of the FM vertex rooted at ``v``."""
        pts, nodes = [], []
        for (c, r), child in zip(v.label, v.children):
            where = add(offset, scale(c, factor))
            if W.is_twig(child):
                pts.append(where)
                nodes.append(child)
            elif child.length == 1:
                sub_node = build(child)
                if sub_node is not None:
                    pts.append(where)
                    nodes.append(sub_node)
            else:
                p2, n2 = screen(child, where, factor * r * (1 - child.length))
                pts.extend(p2)
                nodes.extend(n2)
        return pts, nodes

    def build(v):
        pts, nodes = screen(v, zero, Fraction(1))
        if not nodes:
            return None
        if len(nodes) == 1:
            return nodes[0]
        _, _, cloud = normalize_cloud(pts)
        return make_vertex(cloud, nodes)

    node = build(t)
    if node is None:
        return fm_empty(dim)
    return FMPoint(dim, ((zero, node),))


# ---------------------------------------------------------------- I/O

def _pt_json(p: Point) -> list[str]:
    return [str(a) for a in p]


def node_to_json(node: FMNode) -> dict:
    if isinstance(node, int):
        return {"twig": node}
    return {"cloud": [_pt_json(p) for p in node.cloud],
            "children": [node_to_json(c) for c in node.children]}


def node_from_json(obj: dict) -> FMNode:
    if "twig" in obj:
        return int(obj["twig"])
    try:
        cloud = [as_point(p) for p in obj["cloud"]]
        kids = [node_from_json(c) for c in obj["children"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FMError(f"malformed FM node: {exc}") from None
    return make_vertex(cloud, kids)


def to_json(x: FMPoint) -> dict:
    return {"dim": x.dim,
            "components": [{"location": _pt_json(p), "tree": node_to_json(n)}
                           for p, n in x.components]}


def from_json(obj: dict) -> FMPoint:
    try:
        dim = int(obj["dim"])
        comps = [(as_point(c["location"]), node_from_json(c["tree"])) for c in obj["components"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FMError(f"malformed FMPoint JSON: {exc}") from None
    return validate_fm(fm_point(dim, comps))


def to_dot(x: FMPoint, name: str = "fm") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    counter = itertools.count()

    def walk(node):
        ident = f"n{next(counter)}"
        if isinstance(node, int):
            lines.append(f'  {ident} [label="{node}", shape=plaintext];')
        else:
            lines.append(f'  {ident} [label="", shape=circle, width=0.15];')
            for p, c in zip(node.cloud, node.children):
                lines.append(f'  {walk(c)} -> {ident} [label="{_fmt_point(p)}"];')
        return ident

    for p, n in x.components:
        top = walk(n)
        loc = f"loc{next(counter)}"
        lines.append(f'  {loc} [label="{_fmt_point(p)}", shape=box];')
        lines.append(f"  {top} -> {loc};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(x: FMPoint, size: int = 400) -> str:
    """Macroscopic locations (first two coordinates) labelled by their twigs."""
    locs = x.locations
    if not locs:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}"/>\n'
    xs = [float(p[0]) for p in locs]
    ys = [float(p[1]) if x.dim > 1 else 0.0 for p in locs]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = size * 0.1

    def to_px(a, lo):
        return pad + (a - lo) / span * (size - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    for (p, n), px, py in zip(x.components, xs, ys):
        cx, cy = to_px(px, min(xs)), size - to_px(py, min(ys))
        r = 4 + 3 * node_depth(n)
        label = ",".join(str(i) for i in sorted(node_twigs(n)))
        out.append(f'  <circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r}" fill="none" stroke="black"/>')
        out.append(f'  <text x="{cx + r + 2:.2f}" y="{cy:.2f}" font-size="10">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def disc_tree_from_json(obj: dict, dim: int):
    """W-tree JSON whose labels are lists of ``[center, radius]`` discs."""
    from . import wconstruction as W
    D = LittleDiscs(dim)

    def convert(t):
        if W.is_twig(t):
            return t
        return W.WVertex(D.disc_config(t.label), tuple(convert(c) for c in t.children), t.length)

    try:
        return convert(W.from_json(obj))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FMError(f"malformed disc tree: {exc}") from None
