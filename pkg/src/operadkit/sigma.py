"""Finite Σ-sets and set-level operads.

Every operad here is truncated at ``max_arity``; a composition whose result
would leave the truncation raises :class:`ArityOverflow` instead of being
dropped.  Operads expose a small duck-typed surface::

    op.max_arity, op.unit, op.elements(n), op.arity(x),
    op.compose(a, bs), op.act(x, sigma), op.key(x)

Σ-actions are right actions on positions, see :mod:`operadkit.perms`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from scipy.cluster.hierarchy import DisjointSet

from . import perms as P
from .perms import Perm


class OperadError(ValueError):
    pass


class ArityOverflow(OperadError):
    """A composition left the truncation bound."""


class NonEquivariantError(OperadError):
    pass


# ---------------------------------------------------------------- Σ-sets

class SigmaSet:
    """Arity-indexed finite sets with right Σ_n actions.

    ``act`` is either ``None`` (trivial actions), a callable ``act(x, sigma)``
    or a dict ``{(x, sigma): y}``.  Elements must be distinct across arities.
    """

    def __init__(self, sets: dict[int, Iterable[Hashable]], act=None):
        self.sets = {n: tuple(xs) for n, xs in sets.items() if tuple(xs)}
        self._arity = {}
        for n, xs in self.sets.items():
            for x in xs:
                if x in self._arity:
                    raise OperadError(f"element {x!r} appears in two arities")
                self._arity[x] = n
        if isinstance(act, dict):
            table = act
            act = lambda x, s: x if s == P.identity(len(s)) else table[(x, s)]  # noqa: E731
        self._act = act

    @property
    def max_arity(self) -> int:
        return max(self.sets, default=-1)

    def arities(self) -> list[int]:
        return sorted(self.sets)

    def elements(self, n: int) -> tuple:
        return self.sets.get(n, ())

    def __getitem__(self, n: int) -> tuple:
        return self.elements(n)

    def arity(self, x) -> int:
        return self._arity[x]

    def act(self, x, sigma: Perm):
        return x if self._act is None else self._act(x, tuple(sigma))

    def check_actions(self) -> list[str]:
        """Verify identity and composition laws of every action table."""
        bad = []
        for n, xs in self.sets.items():
            for x in xs:
                if self.act(x, P.identity(n)) != x:
                    bad.append(f"identity moves {x!r}")
                for s in P.all_perms(n):
                    y = self.act(x, s)
                    if self._arity.get(y) != n:
                        bad.append(f"{x!r}·{s} = {y!r} leaves arity {n}")
                        continue
                    for t in P.adjacent_transpositions(n):
                        if self.act(y, t) != self.act(x, P.mul(s, t)):
                            bad.append(f"({x!r}·{s})·{t} != {x!r}·{P.mul(s, t)}")
        return bad


def unit_sigma_set(name="e") -> SigmaSet:
    """The unit Σ-object ι: one point in arity 1, empty elsewhere."""
    return SigmaSet({1: [name]})


# ---------------------------------------------------------------- tensor

def _fibers(pi: Sequence[int], k: int) -> list[list[int]]:
    fib: list[list[int]] = [[] for _ in range(k)]
    for p, j in enumerate(pi):
        fib[j].append(p)
    return fib


@dataclass
class OrbitSet:
    """Finite quotient set with a Σ_n action on its classes."""

    n: int
    representatives: list
    class_of: Callable[[Any], int]
    _act: Callable[[Any, Perm], Any] = field(repr=False)

    def __len__(self):
        return len(self.representatives)

    def act(self, cls: int, sigma: Perm) -> int:
        return self.class_of(self._act(self.representatives[cls], tuple(sigma)))


def sigma_tensor(A: SigmaSet, B: SigmaSet, n: int) -> OrbitSet:
    """``(A ⊗ B)(n) = ⨿_k A(k) ×_{Σ_k} ⨿_{π: n→k} ∏_i B(π⁻¹(i))``.

    Raw elements are triples ``(a, pi, bs)`` with ``pi`` a map from the ``n``
    positions to the ``k`` slots of ``a`` and ``bs[j]`` in ``B(#π⁻¹(j))``;
    fibers are identified with ``0..#fiber-1`` order-preservingly.  Orbits
    under Σ_k are found by union-find over adjacent transpositions.
    """
    if n < 0:
        raise OperadError("arity must be non-negative")
    raw = []
    for k in A.arities():
        for pi in itertools.product(range(k), repeat=n):
            sizes = [0] * k
            for j in pi:
                sizes[j] += 1
            pools = [B.elements(s) for s in sizes]
            for a in A.elements(k):
                for bs in itertools.product(*pools):
                    raw.append((a, pi, bs))
    uf = DisjointSet(raw)
    for a, pi, bs in raw:
        k = A.arity(a)
        for s in P.adjacent_transpositions(k):
            sinv = P.inverse(s)
            uf.merge((A.act(a, s), pi, bs), (a, tuple(sinv[j] for j in pi), P.permute(bs, s)))
    reps = sorted((min(c, key=repr) for c in uf.subsets()), key=repr)
    index = {}
    for i, r in enumerate(reps):
        for x in uf.subset(r):
            index[x] = i

    def act(x, tau):
        a, pi, bs = x
        k = A.arity(a)
        tinv = P.inverse(tau)
        new_pi = tuple(pi[tinv[q]] for q in range(n))
        old_f, new_f = _fibers(pi, k), _fibers(new_pi, k)
        new_bs = []
        for j in range(k):
            rho = tuple(new_f[j].index(tau[p]) for p in old_f[j])
            new_bs.append(B.act(bs[j], rho))
        return (a, new_pi, tuple(new_bs))

    return OrbitSet(n, reps, index.__getitem__, act)


# ---------------------------------------------------------------- operads

class Operad:
    """Base class; subclasses provide elements/compose/act/arity/unit."""

    max_arity: int
    unit: Any
    name = "operad"

    def elements(self, n: int) -> Sequence:
        raise NotImplementedError

    def arity(self, x) -> int:
        raise NotImplementedError

    def compose(self, a, bs: Sequence):
        raise NotImplementedError

    def act(self, x, sigma: Perm):
        raise NotImplementedError

    def key(self, x):
        return repr(x)

    def partial_compose(self, a, i: int, b):
        """``a ∘_i b`` with 0-based slot ``i``."""
        k = self.arity(a)
        bs = [self.unit] * k
        bs[i] = b
        return self.compose(a, bs)

    def arities(self) -> list[int]:
        cached = self.__dict__.get("_arities")
        if cached is None:
            cached = self.__dict__["_arities"] = [
                n for n in range(self.max_arity + 1) if self.elements(n)]
        return cached

    def _check_arity(self, a, bs) -> int:
        if len(bs) != self.arity(a):
            raise OperadError(f"arity mismatch: {self.arity(a)} slots, {len(bs)} inputs")
        total = sum(self.arity(b) for b in bs)
        if total > self.max_arity:
            raise ArityOverflow(f"result arity {total} exceeds truncation {self.max_arity}")
        return total


class AssociativeOperad(Operad):
    """Ass(n) = Σ_n: the word ``w`` is the operation ``y_{w[0]} y_{w[1]} ...``."""

    name = "ass"

    def __init__(self, max_arity: int, nullary: bool = False):
        self.max_arity = max_arity
        self.nullary = nullary
        self.unit = (0,)

    def elements(self, n):
        if n > self.max_arity or n < 0 or (n == 0 and not self.nullary):
            return ()
        return P.all_perms(n)

    def arity(self, x):
        return len(x)

    def compose(self, a, bs):
        self._check_arity(a, bs)
        offsets = [0]
        for b in bs:
            offsets.append(offsets[-1] + len(b))
        out: list[int] = []
        for p in a:
            out.extend(offsets[p] + v for v in bs[p])
        return tuple(out)

    def act(self, x, sigma):
        return tuple(sigma[v] for v in x)


class CommutativeOperad(Operad):
    """Com: one point per arity, the point of arity ``n`` is the integer ``n``."""

    name = "com"

    def __init__(self, max_arity: int, nullary: bool = False):
        self.max_arity = max_arity
        self.nullary = nullary
        self.unit = 1

    def elements(self, n):
        if n > self.max_arity or n < 0 or (n == 0 and not self.nullary):
            return ()
        return (n,)

    def arity(self, x):
        return x

    def compose(self, a, bs):
        return self._check_arity(a, bs)

    def act(self, x, sigma):
        return x


class TableOperad(Operad):
    """Operad given by explicit finite tables."""

    name = "table"

    def __init__(self, sets: dict[int, Sequence], unit, compose_table: dict,
                 act_table: dict | None = None, max_arity: int | None = None):
        self.sets = {n: tuple(xs) for n, xs in sets.items()}
        self._arity = {x: n for n, xs in self.sets.items() for x in xs}
        self.unit = unit
        self.table = dict(compose_table)
        self.act_table = dict(act_table or {})
        self.max_arity = max(self.sets) if max_arity is None else max_arity

    @classmethod
    def from_operad(cls, op: Operad) -> "TableOperad":
        """Materialize every in-bounds composition and action of ``op``."""
        sets = {n: tuple(op.elements(n)) for n in range(op.max_arity + 1)}
        table, acts = {}, {}
        for a, bs in _compositions_of(op, op.max_arity):
            table[(a, tuple(bs))] = op.compose(a, bs)
        for n, xs in sets.items():
            for x in xs:
                for s in P.all_perms(n):
                    acts[(x, s)] = op.act(x, s)
        return cls(sets, op.unit, table, acts, op.max_arity)

    def elements(self, n):
        return self.sets.get(n, ())

    def arity(self, x):
        return self._arity[x]

    def compose(self, a, bs):
        self._check_arity(a, bs)
        try:
            return self.table[(a, tuple(bs))]
        except KeyError:
            raise OperadError(f"no table entry for {a!r} ∘ {tuple(bs)!r}") from None

    def act(self, x, sigma):
        sigma = tuple(sigma)
        if sigma == P.identity(len(sigma)):
            return x
        return self.act_table.get((x, sigma), x)


# ---------------------------------------------------------------- free operad

def _ft_leaves(t) -> list[int]:
    if isinstance(t, int):
        return [t]
    return [i for c in t[1] for i in _ft_leaves(c)]


def _ft_vertices(t) -> int:
    if isinstance(t, int):
        return 0
    return 1 + sum(_ft_vertices(c) for c in t[1])


def _ft_relabel(t, f):
    if isinstance(t, int):
        return f(t)
    return (t[0], tuple(_ft_relabel(c, f) for c in t[1]))


class FreeOperad(Operad):
    """Free operad on a Σ-set of generators.

    Elements are trees whose vertices of valence ``v`` carry generators in
    ``G(v)``; a leaf is the integer twig label (1-based) and a vertex is the
    pair ``(generator, children)``.  Each vertex is stored in the canonical
    representative of its Σ_v-orbit ``(g·σ, children reordered by σ⁻¹)``.
    """

    name = "free"

    def __init__(self, generators: SigmaSet, max_arity: int, max_vertices: int | None = None):
        self.G = generators
        self.max_arity = max_arity
        self.max_vertices = max_vertices if max_vertices is not None else max(max_arity, 1) * 2
        self.unit = 1
        self._cache: dict[int, tuple] = {}
        self._memo: dict = {}

    def canonical(self, t):
        if isinstance(t, int):
            return t
        g, kids = t
        kids = tuple(self.canonical(c) for c in kids)
        best = None
        for s in P.all_perms(len(kids)):
            sinv = P.inverse(s)
            cand = (self.G.act(g, s), tuple(kids[sinv[p]] for p in range(len(kids))))
            if best is None or repr(cand) < repr(best):
                best = cand
        return best

    def arity(self, x):
        return 1 if isinstance(x, int) else len(_ft_leaves(x))

    def _planar(self, n: int, budget: int) -> Iterator:
        if n == 1:
            yield "leaf"
        if budget <= 0:
            return
        for v in self.G.arities():
            for comp in itertools.product(range(n + 1), repeat=v):
                if sum(comp) != n:
                    continue
                pools = [list(self._planar(c, budget - 1)) for c in comp]
                for g in self.G.elements(v):
                    for combo in itertools.product(*pools):
                        t = (g, tuple(combo))
                        if _ft_vertices_shape(t) <= budget:
                            yield t

    def elements(self, n):
        if n > self.max_arity or n < 0:
            return ()
        if n not in self._cache:
            found = set()
            for shape in self._planar(n, self.max_vertices):
                counter = itertools.count(1)
                planar = _fill_leaves(shape, counter)
                for s in P.all_perms(n):
                    found.add(self.canonical(_ft_relabel(planar, lambda i, s=s: s[i - 1] + 1)))
            self._cache[n] = tuple(sorted(found, key=repr))
        return self._cache[n]

    def compose(self, a, bs):
        key = (a, tuple(bs))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._compose(a, bs)
        return hit

    def _compose(self, a, bs):
        self._check_arity(a, bs)
        sizes = [self.arity(b) for b in bs]
        offsets = [0]
        for s in sizes:
            offsets.append(offsets[-1] + s)

        def walk(t):
            if isinstance(t, int):
                return _ft_relabel(bs[t - 1], lambda i, o=offsets[t - 1]: i + o)
            return (t[0], tuple(walk(c) for c in t[1]))

        out = walk(a)
        if _ft_vertices(out) > self.max_vertices:
            raise ArityOverflow(f"composite has more than {self.max_vertices} vertices")
        return self.canonical(out)

    def act(self, x, sigma):
        key = (x, tuple(sigma))
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self.canonical(_ft_relabel(x, lambda i: sigma[i - 1] + 1))
        return hit


def _ft_vertices_shape(t) -> int:
    if t == "leaf":
        return 0
    return 1 + sum(_ft_vertices_shape(c) for c in t[1])


def _fill_leaves(shape, counter):
    if shape == "leaf":
        return next(counter)
    return (shape[0], tuple(_fill_leaves(c, counter) for c in shape[1]))


def free_operad(G: SigmaSet, max_vertices: int, max_arity: int) -> FreeOperad:
    return FreeOperad(G, max_arity, max_vertices)


def free_sigma2_generator(name="m") -> SigmaSet:
    """One binary generator with free Σ_2 action: ``{m, m'}`` swapped by the
    transposition."""
    swapped = name + "'"
    return SigmaSet({2: [name, swapped]},
                    act={(name, (1, 0)): swapped, (swapped, (1, 0)): name})


# ---------------------------------------------------------------- groups

@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple
    table: dict
    identity: Any

    def mul(self, g, h):
        return self.table[(g, h)]

    def inverse(self, g):
        for h in self.elements:
            if self.table[(g, h)] == self.identity:
                return h
        raise OperadError(f"{g!r} has no inverse")

    def check(self) -> list[str]:
        bad = []
        for g in self.elements:
            if self.mul(g, self.identity) != g or self.mul(self.identity, g) != g:
                bad.append(f"identity law fails at {g!r}")
            for h in self.elements:
                if self.mul(g, h) not in self.elements:
                    bad.append(f"{g!r}{h!r} not closed")
                for c in self.elements:
                    if self.mul(self.mul(g, h), c) != self.mul(g, self.mul(h, c)):
                        bad.append(f"associativity fails at {(g, h, c)!r}")
            try:
                self.inverse(g)
            except OperadError as e:
                bad.append(str(e))
        return bad


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(range(n))
    return FiniteGroup(els, {(a, b): (a + b) % n for a in els for b in els}, 0)


class SemidirectProduct(Operad):
    """``(F ⋊ G)(i) = F(i) × G^i`` with

    ``(x, g) ∘ ((x_1, h_1), ...) = (μ(x; g_1 x_1, ..., g_k x_k), g_1 h_1, ..., g_k h_k)``

    where ``g_j h_j`` multiplies ``g_j`` into every coordinate of ``h_j``.
    ``action(g, x)`` is the G-action on each ``F(i)``.
    """

    name = "semidirect"

    def __init__(self, F: Operad, group: FiniteGroup, action: Callable | None = None,
                 check: bool = True):
        self.F = F
        self.group = group
        self.action = action or (lambda g, x: x)
        self.max_arity = F.max_arity
        self.unit = (F.unit, (group.identity,))
        if check:
            bad = check_group_action(F, group, self.action)
            if bad:
                raise NonEquivariantError("; ".join(bad[:3]))

    def elements(self, n):
        cache = self.__dict__.setdefault("_elements", {})
        if n not in cache:
            cache[n] = tuple((x, gs) for x in self.F.elements(n)
                             for gs in itertools.product(self.group.elements, repeat=n))
        return cache[n]

    def arity(self, x):
        return self.F.arity(x[0])

    def compose(self, a, bs):
        self._check_arity(a, bs)
        x, gs = a
        inner = [self.action(g, b[0]) for g, b in zip(gs, bs)]
        out_gs = tuple(self.group.mul(g, h) for g, b in zip(gs, bs) for h in b[1])
        return (self.F.compose(x, inner), out_gs)

    def act(self, x, sigma):
        sinv = P.inverse(sigma)
        return (self.F.act(x[0], sigma), tuple(x[1][sinv[p]] for p in range(len(sigma))))


def check_group_action(F: Operad, group: FiniteGroup, action: Callable,
                       budget: int = 20000, seed: int = 0) -> list[str]:
    """Group laws, commutation with Σ, and G-equivariance of μ on ``F``."""
    bad = list(group.check())
    for n in F.arities():
        for x in F.elements(n):
            if action(group.identity, x) != x:
                bad.append(f"identity acts nontrivially on {x!r}")
            for g in group.elements:
                for h in group.elements:
                    if action(group.mul(g, h), x) != action(g, action(h, x)):
                        bad.append(f"action law fails at {(g, h, x)!r}")
                for s in P.all_perms(n)[:24]:
                    if action(g, F.act(x, s)) != F.act(action(g, x), s):
                        bad.append(f"G and Σ do not commute at {(g, x, s)!r}")
    pairs, _ = _exhaustive_or_sample(lambda: _compositions_of(F, F.max_arity),
                                     lambda rng: _random_composition(F, F.max_arity, rng),
                                     budget, seed)
    for a, bs in pairs:
        for g in group.elements:
            lhs = action(g, F.compose(a, bs))
            rhs = F.compose(action(g, a), [action(g, b) for b in bs])
            if lhs != rhs:
                bad.append(f"μ not G-equivariant at g={g!r}, {a!r}∘{tuple(bs)!r}")
    return bad


def semidirect_product(F: Operad, group: FiniteGroup, action: Callable | None = None) -> SemidirectProduct:
    return SemidirectProduct(F, group, action)


def operad_compose(O: Operad, a, bs: Sequence):
    return O.compose(a, list(bs))


# ---------------------------------------------------------------- axiom checks

def _tuples_of_total(op: Operad, k: int, max_total: int) -> list[tuple]:
    """All k-tuples of elements whose arities sum to at most ``max_total``."""
    cache = op.__dict__.setdefault("_tuple_cache", {})
    key = (k, max_total)
    if key not in cache:
        if k == 0:
            cache[key] = [()]
        else:
            out = []
            for n in op.arities():
                if n > max_total:
                    break
                rest = _tuples_of_total(op, k - 1, max_total - n)
                for x in op.elements(n):
                    out.extend((x,) + r for r in rest)
            cache[key] = out
    return cache[key]


def _compositions_of(op: Operad, bound: int) -> Iterator[tuple]:
    for k in op.arities():
        for a in op.elements(k):
            for bs in _tuples_of_total(op, k, bound):
                yield a, list(bs)


def _random_tuple(op: Operad, k: int, max_total: int, rng: random.Random) -> tuple:
    out, left = [], max_total
    low = op.arities()[0]
    for i in range(k):
        slots_after = k - i - 1
        choices = [n for n in op.arities() if n + slots_after * low <= left]
        n = rng.choice(choices)
        out.append(rng.choice(op.elements(n)))
        left -= n
    rng.shuffle(out)
    return tuple(out)


def _random_composition(op: Operad, bound: int, rng: random.Random):
    low = op.arities()[0]
    k = rng.choice([k for k in op.arities() if k * low <= bound])
    return rng.choice(op.elements(k)), list(_random_tuple(op, k, bound, rng))


def _exhaustive_or_sample(make_stream, make_random, budget: int, seed: int):
    """The full stream when it has at most ``budget`` items, else ``budget``
    seeded random draws."""
    items = []
    for x in make_stream():
        items.append(x)
        if len(items) > budget:
            rng = random.Random(seed)
            return [make_random(rng) for _ in range(budget)], False
    return items, True


@dataclass(frozen=True)
class Violation:
    law: str
    instance: tuple

    def __str__(self):
        return f"{self.law}: {self.instance!r}"


@dataclass
class AxiomReport:
    violations: list[Violation]
    checked: dict[str, int]
    exhaustive: bool

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return not self.ok


def _instances(op: Operad, N: int):
    for k in op.arities():
        for a in op.elements(k):
            for bs in _tuples_of_total(op, k, N):
                m = sum(op.arity(b) for b in bs)
                for cs in _tuples_of_total(op, m, N):
                    yield ("associativity", (a, tuple(bs), tuple(cs)))
                for s in P.all_perms(k):
                    yield ("equivariance-top", (a, tuple(bs), s))
                for taus in itertools.product(*(P.all_perms(op.arity(b)) for b in bs)):
                    yield ("equivariance-inputs", (a, tuple(bs), taus))


def _random_law_instance(op: Operad, N: int, rng: random.Random):
    law = rng.choice(["associativity", "equivariance-top", "equivariance-inputs"])
    a, bs = _random_composition(op, N, rng)
    bs = tuple(bs)
    if law == "associativity":
        m = sum(op.arity(b) for b in bs)
        return law, (a, bs, _random_tuple(op, m, N, rng))
    if law == "equivariance-top":
        return law, (a, bs, rng.choice(P.all_perms(op.arity(a))))
    return law, (a, bs, tuple(rng.choice(P.all_perms(op.arity(b))) for b in bs))


def _check_instance(op: Operad, law: str, inst) -> bool:
    if law == "associativity":
        a, bs, cs = inst
        lhs = op.compose(op.compose(a, list(bs)), list(cs))
        pieces, pos = [], 0
        for b in bs:
            m = op.arity(b)
            pieces.append(op.compose(b, list(cs[pos:pos + m])))
            pos += m
        return lhs == op.compose(a, pieces)
    if law == "equivariance-top":
        a, bs, s = inst
        lhs = op.compose(op.act(a, s), list(bs))
        sizes = [op.arity(b) for b in bs]
        rhs = op.act(op.compose(a, list(P.permute(bs, s))), P.block_permutation(s, sizes))
        return lhs == rhs
    if law == "equivariance-inputs":
        a, bs, taus = inst
        lhs = op.compose(a, [op.act(b, t) for b, t in zip(bs, taus)])
        return lhs == op.act(op.compose(a, list(bs)), P.block_sum(taus))
    raise ValueError(law)


def check_operad_axioms(op: Operad, sample_budget: int = 200000, seed: int = 0) -> AxiomReport:
    """Check unit, associativity, equivariance and action laws.

    All in-bounds instances are checked when there are at most
    ``sample_budget`` of them; otherwise a reproducible sample of that size
    (seeded by ``seed``) is checked.
    """
    N = op.max_arity
    violations: list[Violation] = []
    checked: dict[str, int] = {}

    def record(law, inst, ok):
        checked[law] = checked.get(law, 0) + 1
        if not ok:
            violations.append(Violation(law, inst))

    u = op.unit
    for n in op.arities():
        for x in op.elements(n):
            record("unit-left", (x,), _safe(lambda: op.compose(u, [x]) == x))
            record("unit-right", (x,), _safe(lambda: op.compose(x, [u] * n) == x))
            record("action-identity", (x,), _safe(lambda: op.act(x, P.identity(n)) == x))
            for s in P.all_perms(n):
                for t in P.adjacent_transpositions(n):
                    record("action-composition", (x, s, t),
                           _safe(lambda: op.act(op.act(x, s), t) == op.act(x, P.mul(s, t))))

    pool, exhaustive = _exhaustive_or_sample(lambda: _instances(op, N),
                                             lambda rng: _random_law_instance(op, N, rng),
                                             sample_budget, seed)
    for law, inst in pool:
        record(law, inst, _safe(lambda: _check_instance(op, law, inst)))
    return AxiomReport(violations, checked, exhaustive)


def _safe(thunk) -> bool:
    try:
        return bool(thunk())
    except OperadError:
        return False
