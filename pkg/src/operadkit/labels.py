"""Configurations with summable labels in a discrete partial abelian monoid.

Two levels are modelled:

* :class:`LabelledConfig` - particles at points of a box ``M`` (or all of
  ℚⁿ), each carrying a non-base label.  Coincident particles merge by
  summing their labels; base-point labels vanish.
* :class:`LabelledFMPoint` - an FM point with a label on every twig.  A
  vertex whose children are all twigs collapses to a single twig when the
  labels sum; a base-labelled twig is cut and its vertex's cloud reprojected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from . import fm
from .fm import FMPoint, FMVertex, Point, as_point, make_vertex, normalize_cloud
from .partial import Completion, PartialMonoid


class LabelError(ValueError):
    pass


class CollisionError(LabelError):
    """Coincident particles whose labels cannot be summed."""

    def __init__(self, where, labels, partial=None):
        at = "(" + ", ".join(str(x) for x in where) + ")"
        super().__init__(f"particles at {at} carry non-summable labels {list(labels)}")
        self.where = where
        self.labels = tuple(labels)
        self.partial = partial


Face = tuple  # (axis, side) with side 0 for the lower face and 1 for the upper


@dataclass(frozen=True)
class LabelledConfig:
    points: tuple
    labels: tuple
    box: tuple | None = None
    relative_faces: tuple = ()
    collision: bool = False

    def __post_init__(self):
        if len(self.points) != len(self.labels):
            raise LabelError("points and labels differ in length")

    def __len__(self):
        return len(self.points)

    @property
    def dim(self) -> int | None:
        if self.points:
            return len(self.points[0])
        return None if self.box is None else len(self.box)

    def particles(self) -> list[tuple[Point, object]]:
        return list(zip(self.points, self.labels))

    def canonical(self) -> "LabelledConfig":
        """Particles sorted by (point, label); equality is then set equality."""
        pairs = sorted(zip(self.points, self.labels), key=lambda pl: (pl[0], repr(pl[1])))
        return replace(self, points=tuple(p for p, _ in pairs), labels=tuple(a for _, a in pairs))


def labelled_config(particles: Sequence[tuple], box=None, relative_faces=()) -> LabelledConfig:
    pts = tuple(as_point(p) for p, _ in particles)
    labels = tuple(a for _, a in particles)
    if box is not None:
        box = tuple((Fraction(lo), Fraction(hi)) for lo, hi in box)
        if any(len(p) != len(box) for p in pts):
            raise LabelError("point dimension does not match the box")
        for p in pts:
            if not in_box(p, box):
                raise LabelError(f"point {p} lies outside the box")
    faces = tuple(sorted((int(a), int(s)) for a, s in relative_faces))
    return LabelledConfig(pts, labels, box, faces)


def empty_config(box=None, relative_faces=()) -> LabelledConfig:
    return labelled_config([], box, relative_faces)


# ---------------------------------------------------------------- merging

def merge_outcomes(labels: Sequence, A: PartialMonoid) -> set[tuple]:
    """Terminal label multisets over every order of pairwise merges of the
    particles sitting at one point (base labels already removed)."""
    start = _multiset(labels, A)
    seen = {start}
    stack = [start]
    terminal = set()
    while stack:
        cur = stack.pop()
        moves = _merge_moves(cur, A)
        if not moves:
            terminal.add(cur)
        for nxt in moves:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return terminal


def _multiset(labels, A: PartialMonoid) -> tuple:
    return tuple(sorted((a for a in labels if a != A.zero), key=A.order))


def _merge_moves(ms: tuple, A: PartialMonoid) -> list[tuple]:
    out = []
    for i, j in itertools.combinations(range(len(ms)), 2):
        s = A.add(ms[i], ms[j])
        if s is not None:
            rest = ms[:i] + ms[i + 1:j] + ms[j + 1:]
            out.append(_multiset(rest + (s,), A))
    return out


def _merge_leftmost(labels, A: PartialMonoid, trace: list | None = None) -> tuple:
    ms = _multiset(labels, A)
    while True:
        moves = _merge_moves(ms, A)
        if not moves:
            return ms
        ms = moves[0]
        if trace is not None:
            trace.append(ms)


def normalize_config(c: LabelledConfig, A: PartialMonoid, strict: bool = True,
                     trace: list | None = None) -> LabelledConfig:
    """Merge coincident particles by summing labels and drop base labels.

    Coincident particles that cannot be merged make the configuration
    invalid: :class:`CollisionError` is raised, or with ``strict=False`` the
    partially merged configuration is returned with ``collision=True``.
    ``trace`` (a list) receives the full label multiset after each step.
    """
    if not A.abelian:
        raise LabelError("configurations need an abelian label monoid")
    groups: dict[Point, list] = {}
    for p, a in zip(c.points, c.labels):
        if a not in A.elements:
            raise LabelError(f"label {a!r} is not in the monoid")
        groups.setdefault(p, []).append(a)
    merged: dict[Point, tuple] = {}
    for p in sorted(groups):
        merged[p] = _multiset(groups[p], A)

    def snapshot():
        return _multiset([a for ms in merged.values() for a in ms], A)

    if trace is not None:
        trace.append(snapshot())
    bad = None
    for p in sorted(merged):
        steps: list = []
        merged[p] = _merge_leftmost(merged[p], A, steps)
        if trace is not None:
            for _ in steps:
                trace.append(snapshot())
        if len(merged[p]) > 1 and bad is None:
            bad = p
    pairs = [(p, a) for p in sorted(merged) for a in merged[p]]
    out = LabelledConfig(tuple(p for p, _ in pairs), tuple(a for _, a in pairs),
                         c.box, c.relative_faces, bad is not None)
    if bad is not None and strict:
        raise CollisionError(bad, merged[bad], out)
    return out


# ---------------------------------------------------------------- relative

def in_box(p: Point, box) -> bool:
    return box is None or all(lo <= x <= hi for x, (lo, hi) in zip(p, box))


def on_faces(p: Point, box, faces) -> bool:
    if box is None:
        return False
    for axis, side in faces:
        if p[axis] == box[axis][side]:
            return True
    return False


def relative_reduce(c: LabelledConfig, box=None, faces=None) -> LabelledConfig:
    """Keep only particles in ``M ∖ N``; ``N`` is the union of the selected
    box faces.  Particles outside ``M`` are dropped as well."""
    box = c.box if box is None else tuple((Fraction(lo), Fraction(hi)) for lo, hi in box)
    faces = c.relative_faces if faces is None else tuple(faces)
    keep = [(p, a) for p, a in zip(c.points, c.labels)
            if in_box(p, box) and not on_faces(p, box, faces)]
    return LabelledConfig(tuple(p for p, _ in keep), tuple(a for _, a in keep),
                          box, tuple(faces), c.collision)


def scan_1d(c: LabelledConfig, t) -> LabelledConfig:
    """Value at ``t`` of the scanning loop: shift the first coordinate by
    ``2t - 1`` and restrict to ``I × (rest of the box)`` relative to ``∂I``."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise LabelError("scan parameter must lie in [0, 1]")
    shift = 2 * t - 1
    pts = tuple((p[0] + shift,) + tuple(p[1:]) for p in c.points)
    dim = c.dim or 1
    rest = c.box[1:] if c.box is not None else tuple((None, None) for _ in range(dim - 1))
    box = ((Fraction(0), Fraction(1)),) + tuple(rest)
    keep = [(p, a) for p, a in zip(pts, c.labels)
            if 0 < p[0] < 1 and all(lo is None or lo <= x <= hi for x, (lo, hi) in zip(p[1:], rest))]
    return LabelledConfig(tuple(p for p, _ in keep), tuple(a for _, a in keep),
                          box if all(lo is not None for lo, _ in rest) else None,
                          ((0, 0), (0, 1)), c.collision)


# ---------------------------------------------------------------- FM level

@dataclass(frozen=True)
class LabelledFMPoint:
    point: FMPoint
    labels: tuple  # labels[i] sits on twig i+1

    def __post_init__(self):
        if len(self.labels) != self.point.k:
            raise LabelError(f"{self.point.k} twigs but {len(self.labels)} labels")

    def __repr__(self):
        return f"Labelled({self.point!r}, {list(self.labels)})"


def canonical_twigs(x: LabelledFMPoint) -> LabelledFMPoint:
    """Renumber twigs in traversal order (components by location, children by
    cloud point), carrying labels along.  Twig order is not part of the data
    of a labelled configuration, so this is a canonical form."""
    order: list[int] = []
    for _, n in x.point.components:
        order.extend(fm.node_twigs(n))
    new_of = {old: i + 1 for i, old in enumerate(order)}
    pt = FMPoint(x.point.dim, tuple((p, fm._relabel(n, new_of.__getitem__))
                                    for p, n in x.point.components))
    labels = tuple(x.labels[old - 1] for old in order)
    return LabelledFMPoint(pt, labels)


def _sum_all(labels, A: PartialMonoid):
    total = A.zero
    for a in labels:
        total = A.add(total, a)
        if total is None:
            return None
    return total


def _sum_step(x: LabelledFMPoint, A: PartialMonoid) -> LabelledFMPoint | None:
    """Collapse the first all-twig vertex whose labels sum."""
    labels = list(x.labels)
    done = [False]
    new_labels: dict[int, object] = {}

    def walk(node):
        if isinstance(node, int) or done[0]:
            return node
        if all(isinstance(c, int) for c in node.children):
            s = _sum_all([labels[i - 1] for i in node.children], A)
            if s is not None:
                done[0] = True
                keep = min(node.children)
                new_labels[keep] = s
                for i in node.children:
                    if i != keep:
                        new_labels[i] = None
                return keep
        return FMVertex(node.cloud, tuple(walk(c) for c in node.children))

    comps = tuple((p, walk(n)) for p, n in x.point.components)
    if not done[0]:
        return None
    for i, a in new_labels.items():
        labels[i - 1] = a
    return _compact(FMPoint(x.point.dim, comps), labels)


def _compact(point: FMPoint, labels: list) -> LabelledFMPoint:
    """Renumber surviving twigs 1..k (labels ``None`` mark removed twigs)."""
    alive = [i for i in range(1, len(labels) + 1) if labels[i - 1] is not None]
    new_of = {old: j + 1 for j, old in enumerate(alive)}
    pt = FMPoint(point.dim, tuple((p, fm._relabel(n, new_of.__getitem__))
                                  for p, n in point.components))
    return LabelledFMPoint(pt, tuple(labels[i - 1] for i in alive))


def _base_step(x: LabelledFMPoint, A: PartialMonoid) -> LabelledFMPoint | None:
    """Cut the first base-labelled twig, reprojecting its vertex's cloud."""
    for i, a in enumerate(x.labels, start=1):
        if a == A.zero:
            pt = fm.fm_compose(x.point, i, fm.fm_empty(x.point.dim))
            return LabelledFMPoint(pt, x.labels[:i - 1] + x.labels[i:])
    return None


def fm_label_normalize(x: LabelledFMPoint, A: PartialMonoid,
                       trace: list | None = None) -> LabelledFMPoint:
    """Apply the base-twig cut and the vertex-sum rule until neither fires.
    ``trace`` receives the label multiset after each step."""
    if trace is not None:
        trace.append(_multiset(x.labels, A))
    while True:
        nxt = _base_step(x, A) or _sum_step(x, A)
        if nxt is None:
            return canonical_twigs(x)
        x = nxt
        if trace is not None:
            trace.append(_multiset(x.labels, A))


def fm_label_sites(x: LabelledFMPoint, A: PartialMonoid) -> list[LabelledFMPoint]:
    """All one-step rewrites of ``x`` (every base twig, every summing vertex)."""
    out = []
    for i, a in enumerate(x.labels, start=1):
        if a == A.zero:
            pt = fm.fm_compose(x.point, i, fm.fm_empty(x.point.dim))
            out.append(LabelledFMPoint(pt, x.labels[:i - 1] + x.labels[i:]))
    for path in _all_twig_vertices(x.point):
        y = _sum_at(x, path, A)
        if y is not None:
            out.append(y)
    return out


def _all_twig_vertices(point: FMPoint) -> list[tuple]:
    out = []

    def walk(node, path):
        if isinstance(node, int):
            return
        if all(isinstance(c, int) for c in node.children):
            out.append(path)
        for i, c in enumerate(node.children):
            walk(c, path + (i,))

    for ci, (_, n) in enumerate(point.components):
        walk(n, (ci,))
    return out


def _sum_at(x: LabelledFMPoint, path: tuple, A: PartialMonoid) -> LabelledFMPoint | None:
    comps = list(x.point.components)
    loc, root = comps[path[0]]
    node = root
    for i in path[1:]:
        node = node.children[i]
    s = _sum_all([x.labels[i - 1] for i in node.children], A)
    if s is None:
        return None
    keep = min(node.children)
    labels = list(x.labels)
    for i in node.children:
        labels[i - 1] = None
    labels[keep - 1] = s

    def rebuild(n, rest):
        if not rest:
            return keep
        i = rest[0]
        kids = list(n.children)
        kids[i] = rebuild(kids[i], rest[1:])
        return FMVertex(n.cloud, tuple(kids))

    comps[path[0]] = (loc, rebuild(root, path[1:]))
    return _compact(FMPoint(x.point.dim, tuple(comps)), labels)


def fm_label_outcomes(x: LabelledFMPoint, A: PartialMonoid, limit: int = 100000) -> set:
    """Canonical normal forms reachable over every order of rule applications."""
    seen = {canonical_twigs(x)}
    stack = list(seen)
    terminal = set()
    while stack:
        cur = stack.pop()
        moves = fm_label_sites(cur, A)
        if not moves:
            terminal.add(canonical_twigs(cur))
        for nxt in moves:
            nxt = canonical_twigs(nxt)
            if nxt not in seen:
                if len(seen) >= limit:
                    raise LabelError("rewrite graph exceeds the exploration limit")
                seen.add(nxt)
                stack.append(nxt)
    return terminal


def assemble(c: LabelledConfig, theta=Fraction(1, 10)) -> LabelledFMPoint:
    """Collapse a labelled configuration to one location (its centroid).

    Nearby particles are first grouped by :func:`fm.cluster`; the resulting
    macroscopic locations become the cloud of a new root vertex.
    """
    if len(c) == 0:
        return LabelledFMPoint(fm.fm_empty(c.dim or 1), ())
    if len(set(c.points)) != len(c.points):
        raise LabelError("assemble needs distinct points; normalize the configuration first")
    x = fm.cluster(c.points, theta)
    if len(x.components) == 1:
        return LabelledFMPoint(x, tuple(c.labels))
    locs = [p for p, _ in x.components]
    offset, _, cloud = normalize_cloud(locs)
    root = make_vertex(cloud, [n for _, n in x.components])
    return LabelledFMPoint(FMPoint(x.dim, ((offset, root),)), tuple(c.labels))


def grothendieck_conserved(trace: Sequence[tuple], completion: Completion) -> bool:
    """Every multiset in a normalization trace has the same completion class."""
    classes = {completion.grothendieck_class(ms) for ms in trace}
    return len(classes) <= 1


# ---------------------------------------------------------------- I/O

def config_to_json(c: LabelledConfig) -> dict:
    out = {"points": [[str(a) for a in p] for p in c.points], "labels": list(c.labels)}
    if c.box is not None:
        out["box"] = [[str(lo), str(hi)] for lo, hi in c.box]
    if c.relative_faces:
        out["relative_faces"] = [list(f) for f in c.relative_faces]
    if c.collision:
        out["collision"] = True
    return out


def config_from_json(obj: dict) -> LabelledConfig:
    try:
        pts = obj["points"]
        labels = obj["labels"]
    except (KeyError, TypeError):
        raise LabelError("configuration JSON needs 'points' and 'labels'") from None
    if len(pts) != len(labels):
        raise LabelError("'points' and 'labels' differ in length")
    try:
        particles = [(as_point(p), a) for p, a in zip(pts, labels)]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise LabelError(f"bad point: {exc}") from None
    return labelled_config(particles, obj.get("box"), obj.get("relative_faces", ()))
