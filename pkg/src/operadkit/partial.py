"""Discrete partial monoids, their bounded completions, and tensor products
of modules over set-level operads.

A partial monoid is a finite pointed set with a partially defined sum.  The
axioms enforced by :meth:`PartialMonoid.validate` are: ``a + 0 = 0 + a = a``
for every ``a``, strong associativity (``(a+b)+c`` is defined iff
``a+(b+c)`` is, and then they agree) and, for abelian monoids, a symmetric
domain with symmetric sums.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Hashable, Iterable, Sequence

from scipy.cluster.hierarchy import DisjointSet

from . import perms as P
from .sigma import (ArityOverflow, CommutativeOperad, AssociativeOperad, Operad,
                    OperadError, SigmaSet, _fibers)


class PartialMonoidError(ValueError):
    pass


class NonConfluentError(PartialMonoidError):
    def __init__(self, witness):
        word, a, b = witness
        super().__init__(f"word {word!r} rewrites to distinct normal forms {a!r} and {b!r}")
        self.witness = witness


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom}: {self.witness!r}"


@dataclass
class PartialMonoid:
    elements: tuple
    zero: Hashable
    sums: dict
    abelian: bool = False
    weights: dict | None = None
    name: str = ""

    def __post_init__(self):
        self.elements = tuple(self.elements)
        self.sums = dict(self.sums)
        self._order = {x: i for i, x in enumerate(self.elements)}

    @classmethod
    def build(cls, elements, zero, sums, abelian=False, weights=None, name=""):
        """Like the constructor, but adds ``a + 0 = 0 + a = a`` and, when
        ``abelian``, mirrors every given sum."""
        table = {}
        for (a, b), c in dict(sums).items():
            table[(a, b)] = c
            if abelian:
                table.setdefault((b, a), c)
        for a in elements:
            table.setdefault((a, zero), a)
            table.setdefault((zero, a), a)
        return cls(tuple(elements), zero, table, abelian, weights, name)

    @property
    def letters(self) -> tuple:
        return tuple(x for x in self.elements if x != self.zero)

    def add(self, a, b):
        return self.sums.get((a, b))

    def weight(self, a) -> int:
        if a == self.zero:
            return 0
        return 1 if self.weights is None else self.weights[a]

    def order(self, a) -> int:
        return self._order[a]

    def is_total(self) -> bool:
        return all((a, b) in self.sums for a in self.elements for b in self.elements)

    def validate(self) -> list[Violation]:
        bad: list[Violation] = []
        els = set(self.elements)
        if self.zero not in els:
            bad.append(Violation("zero", (self.zero,)))
            return bad
        for (a, b), c in self.sums.items():
            if a not in els or b not in els or c not in els:
                bad.append(Violation("closure", (a, b, c)))
        for a in self.elements:
            if self.add(a, self.zero) != a or self.add(self.zero, a) != a:
                bad.append(Violation("unit", (a,)))
        if self.abelian:
            for (a, b), c in self.sums.items():
                if self.add(b, a) != c:
                    bad.append(Violation("commutativity", (a, b)))
        for a, b, c in itertools.product(self.elements, repeat=3):
            ab, bc = self.add(a, b), self.add(b, c)
            left = None if ab is None else self.add(ab, c)
            right = None if bc is None else self.add(a, bc)
            if left != right:
                bad.append(Violation("strong associativity", (a, b, c)))
        if self.weights is not None:
            for (a, b), c in self.sums.items():
                if self.weight(c) > self.weight(a) + self.weight(b):
                    bad.append(Violation("weight", (a, b, c)))
        return bad

    def to_json(self) -> dict:
        out = {
            "elements": list(self.elements),
            "zero": self.zero,
            "sums": [[a, b, c] for (a, b), c in sorted(self.sums.items(), key=repr)
                     if self.zero not in (a, b)],
            "abelian": self.abelian,
        }
        if self.weights is not None:
            out["weights"] = dict(self.weights)
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PartialMonoid":
        for key in ("elements", "zero"):
            if key not in obj:
                raise PartialMonoidError(f"monoid JSON lacks field '{key}'")
        sums = {}
        for i, triple in enumerate(obj.get("sums", [])):
            if len(triple) != 3:
                raise PartialMonoidError(f"sums[{i}] must be [a, b, a+b]")
            a, b, c = triple
            sums[(a, b)] = c
        return cls.build(obj["elements"], obj["zero"], sums, bool(obj.get("abelian", False)),
                         obj.get("weights"), obj.get("name", ""))


# ---------------------------------------------------------------- examples

def n_vee_n(height: int, abelian: bool = True) -> PartialMonoid:
    """ℕ∨ℕ truncated at ``height``: pairs ``(p, 0)`` or ``(0, q)``, summable
    within a branch while the total stays ≤ ``height``.  Letters are named
    ``"x3"``, ``"y2"``; the weight of ``xp`` is ``p``."""
    xs = [f"x{p}" for p in range(1, height + 1)]
    ys = [f"y{q}" for q in range(1, height + 1)]
    sums = {}
    for branch in ("x", "y"):
        for p in range(1, height + 1):
            for q in range(1, height + 1 - p):
                sums[(f"{branch}{p}", f"{branch}{q}")] = f"{branch}{p + q}"
    weights = {f"{b}{p}": p for b in "xy" for p in range(1, height + 1)}
    return PartialMonoid.build(["0"] + xs + ys, "0", sums, abelian, weights, f"NvN{height}")


def pointed_set(names: Sequence[str], base: str = "*") -> PartialMonoid:
    """A pointed set; the only sums are those with the base point."""
    return PartialMonoid.build([base] + list(names), base, {}, True, None, "pointed")


def cyclic_monoid(n: int) -> PartialMonoid:
    """The total monoid ℤ/n with elements ``"0" .. "n-1"``."""
    els = [str(i) for i in range(n)]
    sums = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    return PartialMonoid(tuple(els), "0", sums, True, None, f"Z/{n}")


def truncated_monoid(n: int, keep: Iterable[tuple[int, int]]) -> PartialMonoid:
    """ℤ/n restricted to the given summable pairs (plus unit sums)."""
    sums = {(str(a), str(b)): str((a + b) % n) for a, b in keep}
    return PartialMonoid.build([str(i) for i in range(n)], "0", sums, True, None, f"Z/{n}-partial")


@lru_cache(maxsize=None)
def all_partial_abelian_monoids(size: int) -> tuple[PartialMonoid, ...]:
    """Every valid abelian partial monoid on ``{"0", .., str(size-1)}``.

    Brute force over all symmetric partial tables on the non-zero letters, so
    only practical for ``size <= 4``.
    """
    if size > 4:
        raise PartialMonoidError("exhaustive enumeration is limited to 4 elements")
    els = [str(i) for i in range(size)]
    pairs = list(itertools.combinations_with_replacement(els[1:], 2))
    out = []
    for values in itertools.product([None] + els, repeat=len(pairs)):
        sums = {pq: v for pq, v in zip(pairs, values) if v is not None}
        cand = PartialMonoid.build(els, "0", sums, True)
        if not cand.validate():
            out.append(cand)
    return tuple(out)


def random_partial_abelian_monoid(rng: random.Random, size: int = 3) -> PartialMonoid:
    """Uniform draw from :func:`all_partial_abelian_monoids`."""
    return rng.choice(all_partial_abelian_monoids(size))


# ---------------------------------------------------------------- completion

@dataclass
class Completion:
    """Bounded monoid completion: the quotient of words of weight ≤ ``bound``
    by ``(... a b ...) → (... a+b ...)``."""

    monoid: PartialMonoid
    bound: int
    normal_forms: list[tuple]
    product: dict
    violations: list[tuple]
    _nf: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.normal_forms)

    def normal_form(self, word: Sequence) -> tuple:
        word = _canon_word(self.monoid, word)
        if word not in self._nf:
            if _weight(self.monoid, word) > self.bound:
                raise PartialMonoidError(f"word {word!r} exceeds the bound {self.bound}")
            self._nf[word] = _leftmost_reduce(self.monoid, word)
        return self._nf[word]

    def multiply(self, u: tuple, v: tuple) -> tuple:
        return self.normal_form(tuple(u) + tuple(v))

    def grothendieck_class(self, labels: Sequence) -> tuple:
        """Class of a label multiset (abelian) or word in the completion."""
        return self.normal_form([a for a in labels if a != self.monoid.zero])


def _canon_word(A: PartialMonoid, word: Sequence) -> tuple:
    word = tuple(a for a in word if a != A.zero)
    if A.abelian:
        word = tuple(sorted(word, key=A.order))
    return word


def _weight(A: PartialMonoid, word: Sequence) -> int:
    return sum(A.weight(a) for a in word)


def rewrite_steps(A: PartialMonoid, word: tuple) -> list[tuple]:
    """All one-step rewrites of a (canonical) word, leftmost first."""
    out = []
    if A.abelian:
        for i, j in itertools.combinations(range(len(word)), 2):
            s = A.add(word[i], word[j])
            if s is not None:
                rest = word[:i] + word[i + 1:j] + word[j + 1:]
                out.append(_canon_word(A, rest + (s,)))
    else:
        for i in range(len(word) - 1):
            s = A.add(word[i], word[i + 1])
            if s is not None:
                out.append(_canon_word(A, word[:i] + (s,) + word[i + 2:]))
    return out


def _leftmost_reduce(A: PartialMonoid, word: tuple) -> tuple:
    while True:
        steps = rewrite_steps(A, word)
        if not steps:
            return word
        word = steps[0]


def _words(A: PartialMonoid, bound: int) -> list[tuple]:
    letters = [a for a in A.letters if A.weight(a) <= bound]
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            start = A.order(w[-1]) if (A.abelian and w) else -1
            for a in letters:
                if A.abelian and A.order(a) < start:
                    continue
                if _weight(A, w) + A.weight(a) <= bound:
                    nxt.append(w + (a,))
        out.extend(nxt)
        frontier = nxt
    return out


def complete_monoid(A: PartialMonoid, max_len: int, strict: bool = True) -> Completion:
    """Normal forms of the bounded completion of ``A``.

    Words run over ``A∖{0}`` and have total weight ≤ ``max_len`` (weight 1 per
    letter unless ``A.weights`` is set).  Abelian monoids are treated as
    multisets.  Every word's full rewriting closure is explored; a word with
    two distinct irreducible descendants is a confluence violation, raised as
    :class:`NonConfluentError` when ``strict``.
    """
    if max_len < 0:
        raise PartialMonoidError("max_len must be non-negative")
    bad = [v for v in A.validate() if v.axiom in ("closure", "unit", "weight")]
    if bad:
        raise PartialMonoidError(f"invalid partial monoid: {bad[0]}")
    words = _words(A, max_len)
    irreducibles: dict[tuple, frozenset] = {}

    def closure(w):
        if w not in irreducibles:
            steps = rewrite_steps(A, w)
            if not steps:
                irreducibles[w] = frozenset([w])
            else:
                irreducibles[w] = frozenset().union(*(closure(s) for s in steps))
        return irreducibles[w]

    violations = []
    nf = {}
    for w in sorted(words, key=len):
        reach = closure(w)
        chosen = _leftmost_reduce(A, w)
        nf[w] = chosen
        if len(reach) > 1:
            a, b = sorted(reach, key=repr)[:2]
            violations.append((w, a, b))
    if violations and strict:
        raise NonConfluentError(violations[0])
    forms = sorted({f for f in nf.values()}, key=lambda f: (len(f), [A.order(a) for a in f]))
    product = {}
    for u in forms:
        for v in forms:
            if _weight(A, u) + _weight(A, v) <= max_len:
                product[(u, v)] = nf[_canon_word(A, u + v)]
    return Completion(A, max_len, forms, product, violations, nf)


# ---------------------------------------------------------------- modules

class OperadModule:
    """An operad as a right module and a left module over itself."""

    def __init__(self, F: Operad):
        self.F = F
        self.max_arity = F.max_arity

    def arities(self):
        return self.F.arities()

    def elements(self, n):
        return self.F.elements(n)

    def arity(self, x):
        return self.F.arity(x)

    def act(self, x, sigma):
        return self.F.act(x, sigma)

    def compose(self, x, fs):
        return self.F.compose(x, list(fs))

    def right_arity(self, f):
        return self.F.arity(f)

    def left_action(self, f, xs):
        return self.F.compose(f, list(xs))


class PartialAlgebra:
    """A partial monoid as a partial algebra over Com (abelian) or Ass.

    ``left_action(f, xs)`` folds the labels in the order prescribed by ``f``
    and returns ``None`` when some partial sum is undefined.
    """

    def __init__(self, monoid: PartialMonoid, F: Operad):
        if not isinstance(F, (CommutativeOperad, AssociativeOperad)):
            raise OperadError("partial monoids are algebras over Com or Ass only")
        if isinstance(F, CommutativeOperad) and not monoid.abelian:
            raise OperadError("a Com-algebra needs an abelian partial monoid")
        self.monoid = monoid
        self.F = F
        self.max_arity = 0

    def arities(self):
        return [0]

    def elements(self, n):
        return self.monoid.elements if n == 0 else ()

    def arity(self, x):
        return 0

    def act(self, x, sigma):
        return x

    def compose(self, x, fs):
        return x

    def left_action(self, f, xs):
        order = range(len(xs)) if isinstance(self.F, CommutativeOperad) else f
        total = self.monoid.zero
        for i in order:
            total = self.monoid.add(total, xs[i])
            if total is None:
                return None
        return total


class FreeRightModule:
    """The free right F-module ``S ⊗ F`` on a Σ-set ``S``.

    Elements are orbit representatives ``(s, pi, fs)`` of the Σ-tensor; F acts
    by composing into the ``fs``.
    """

    def __init__(self, S: SigmaSet, F: Operad, max_arity: int):
        self.S, self.F = S, F
        self.max_arity = max_arity
        self._classes = {}
        for n in range(max_arity + 1):
            self._classes[n] = _orbit_classes(S, F, n)

    def arities(self):
        return [n for n in range(self.max_arity + 1) if self._classes[n][0]]

    def elements(self, n):
        return tuple(self._classes[n][0]) if n in self._classes else ()

    def arity(self, x):
        return len(x[1])

    def _rep(self, raw):
        n = len(raw[1])
        if n > self.max_arity:
            raise ArityOverflow(f"arity {n} exceeds truncation {self.max_arity}")
        return self._classes[n][1][raw]

    def act(self, x, sigma):
        s, pi, fs = x
        n = len(pi)
        k = self.S.arity(s)
        sinv = P.inverse(sigma)
        new_pi = tuple(pi[sinv[q]] for q in range(n))
        old_f, new_f = _fibers(pi, k), _fibers(new_pi, k)
        new_fs = []
        for j in range(k):
            rho = tuple(new_f[j].index(sigma[p]) for p in old_f[j])
            new_fs.append(self.F.act(fs[j], rho))
        return self._rep((s, new_pi, tuple(new_fs)))

    def right_arity(self, f):
        return self.F.arity(f)

    def compose(self, x, gs):
        s, pi, fs = x
        k = self.S.arity(s)
        fib = _fibers(pi, k)
        new_fs = [self.F.compose(fs[j], [gs[p] for p in fib[j]]) for j in range(k)]
        new_pi = tuple(pi[p] for p in range(len(pi)) for _ in range(self.F.arity(gs[p])))
        return self._rep((s, new_pi, tuple(new_fs)))


def _orbit_classes(S: SigmaSet, F: Operad, n: int):
    raw = []
    for k in S.arities():
        for pi in itertools.product(range(k), repeat=n):
            sizes = [0] * k
            for j in pi:
                sizes[j] += 1
            pools = [F.elements(z) for z in sizes]
            for s in S.elements(k):
                for fs in itertools.product(*pools):
                    raw.append((s, pi, fs))
    uf = DisjointSet(raw)
    for s, pi, fs in raw:
        k = S.arity(s)
        for t in P.adjacent_transpositions(k):
            tinv = P.inverse(t)
            uf.merge((S.act(s, t), pi, fs), (s, tuple(tinv[j] for j in pi), P.permute(fs, t)))
    rep_of = {}
    reps = []
    for cls in uf.subsets():
        r = min(cls, key=repr)
        reps.append(r)
        for x in cls:
            rep_of[x] = r
    reps.sort(key=repr)
    return reps, rep_of


def check_right_module(C, F: Operad, budget: int = 100000, seed: int = 0) -> list[str]:
    """Unit, associativity and equivariance of a right F-action on ``C``."""
    from .sigma import _tuples_of_total
    N = C.max_arity
    bad = []
    instances = []
    for k in C.arities():
        for c in C.elements(k):
            if C.compose(c, [F.unit] * k) != c:
                bad.append(f"unit fails at {c!r}")
            for fs in _tuples_of_total(F, k, N):
                m = sum(F.arity(f) for f in fs)
                for gs in _tuples_of_total(F, m, N):
                    instances.append((c, fs, gs))
    rng = random.Random(seed)
    if len(instances) > budget:
        instances = rng.sample(instances, budget)
    for c, fs, gs in instances:
        try:
            lhs = C.compose(C.compose(c, fs), gs)
            pieces, pos = [], 0
            for f in fs:
                m = F.arity(f)
                pieces.append(F.compose(f, list(gs[pos:pos + m])))
                pos += m
            rhs = C.compose(c, pieces)
        except OperadError:
            continue
        if lhs != rhs:
            bad.append(f"associativity fails at {(c, fs, gs)!r}")
        s = rng.choice(P.all_perms(C.arity(c)))
        try:
            lhs = C.compose(C.act(c, s), fs)
            rhs = C.act(C.compose(c, P.permute(fs, s)),
                        P.block_permutation(s, [F.arity(f) for f in fs]))
        except OperadError:
            continue
        if lhs != rhs:
            bad.append(f"equivariance fails at {(c, s, fs)!r}")
    return bad


# ---------------------------------------------------------------- tensor

@dataclass
class TensorClass:
    arity: int
    index: int

    def __hash__(self):
        return hash((self.arity, self.index))


class TensorProduct:
    """``C ⊗_F A``: coequalizer of ``C ⊗ F ⊗ A ⇉ C ⊗ A`` in Σ-sets.

    Raw elements of output arity ``n`` are ``(c, pi, xs)`` with ``c ∈ C(k)``,
    ``pi`` a map from ``n`` positions to the ``k`` slots and ``xs[j]`` in
    ``A(#π⁻¹(j))``.  They are identified along the Σ_k action and along
    ``(c∘(f_1..f_k), pi, xs) ~ (c, pi', (ρ(f_j; xs of block j))_j)`` whenever
    every partial action ``ρ`` is defined.  Classes carry the filtration index
    ``min k`` over their members.

    When ``C`` has a left action by some operad (``C.left_action``) and the
    result is concentrated in arity 0, the result is again a left module; when
    ``A`` has a right action the result is a right module.
    """

    def __init__(self, C, F: Operad, A, max_arity: int | None = None,
                 max_letters: int | None = None):
        self.C, self.F, self.A = C, F, A
        self.max_arity = (A.max_arity if max_arity is None else max_arity)
        self.max_letters = max_letters
        self.classes: dict[int, list[list]] = {}
        self.filtration: dict[int, list[int]] = {}
        self._index: dict = {}
        for n in range(self.max_arity + 1):
            self._build(n)

    # raw elements ---------------------------------------------------------
    def _raw(self, n):
        out = []
        for k in self.C.arities():
            for pi in itertools.product(range(k), repeat=n):
                sizes = [0] * k
                for j in pi:
                    sizes[j] += 1
                pools = [self.A.elements(z) for z in sizes]
                for c in self.C.elements(k):
                    for xs in itertools.product(*pools):
                        if self.max_letters is not None and _letters(self.A, xs) > self.max_letters:
                            continue
                        out.append((c, pi, xs))
        return out

    def _contract(self, c, fs, pi, xs):
        """Image of ``(c∘fs, pi, xs)`` under ρ, or ``None`` if undefined."""
        blocks, pos = [], 0
        for f in fs:
            m = self.F.arity(f)
            blocks.append(list(range(pos, pos + m)))
            pos += m
        slot_fib = _fibers(pi, pos)
        new_pi = [None] * len(pi)
        new_xs = []
        for j, (f, block) in enumerate(zip(fs, blocks)):
            y = self.A.left_action(f, [xs[r] for r in block])
            if y is None:
                return None
            concat = [p for r in block for p in slot_fib[r]]
            merged = sorted(concat)
            rho = tuple(merged.index(p) for p in concat)
            if len(rho) > 1:
                y = self.A.act(y, rho)
            for p in concat:
                new_pi[p] = j
            new_xs.append(y)
        return (c, tuple(new_pi), tuple(new_xs))

    def _build(self, n):
        from .sigma import _tuples_of_total
        raw = self._raw(n)
        present = set(raw)
        uf = DisjointSet(raw)
        for c, pi, xs in raw:
            k = self.C.arity(c)
            for t in P.adjacent_transpositions(k):
                tinv = P.inverse(t)
                other = (self.C.act(c, t), tuple(tinv[j] for j in pi), P.permute(xs, t))
                if other in present:
                    uf.merge((c, pi, xs), other)
        bound = self.C.max_arity
        for k in self.C.arities():
            for c in self.C.elements(k):
                for fs in _tuples_of_total(self.F, k, bound):
                    try:
                        composite = self.C.compose(c, list(fs))
                    except OperadError:
                        continue
                    m = self.C.arity(composite)
                    for pi, xs in self._fillings(n, m):
                        src = (composite, pi, xs)
                        if src not in present:
                            continue
                        try:
                            dst = self._contract(c, fs, pi, xs)
                        except OperadError:
                            continue
                        if dst is not None and dst in present:
                            uf.merge(src, dst)
        # the first member of each class has the fewest slots, so it survives truncation
        size = lambda x: (self.C.arity(x[0]), repr(x))  # noqa: E731
        groups = sorted((sorted(g, key=size) for g in uf.subsets()), key=lambda g: size(g[0]))
        self.classes[n] = groups
        self.filtration[n] = [min(self.C.arity(x[0]) for x in g) for g in groups]
        for i, g in enumerate(groups):
            for x in g:
                self._index[x] = TensorClass(n, i)

    def _fillings(self, n, m):
        for pi in itertools.product(range(m), repeat=n):
            sizes = [0] * m
            for j in pi:
                sizes[j] += 1
            pools = [self.A.elements(z) for z in sizes]
            for xs in itertools.product(*pools):
                yield pi, xs

    # class-level API -------------------------------------------------------
    def __len__(self):
        return sum(len(g) for g in self.classes.values())

    def class_of(self, raw) -> TensorClass:
        try:
            return self._index[raw]
        except KeyError:
            raise ArityOverflow(f"{raw!r} lies outside the computed truncation") from None

    def representative(self, cls: TensorClass):
        return self.classes[cls.arity][cls.index][0]

    def members(self, cls: TensorClass) -> list:
        return self.classes[cls.arity][cls.index]

    def filtration_index(self, cls: TensorClass) -> int:
        return self.filtration[cls.arity][cls.index]

    # module structure on the quotient ----------------------------------------
    def arities(self):
        return [n for n, g in self.classes.items() if g]

    def elements(self, n):
        return tuple(TensorClass(n, i) for i in range(len(self.classes.get(n, ()))))

    def arity(self, cls):
        return cls.arity

    def act(self, cls, sigma):
        c, pi, xs = self.representative(cls)
        n = len(pi)
        k = self.C.arity(c)
        sinv = P.inverse(sigma)
        new_pi = tuple(pi[sinv[q]] for q in range(n))
        old_f, new_f = _fibers(pi, k), _fibers(new_pi, k)
        new_xs = []
        for j in range(k):
            rho = tuple(new_f[j].index(sigma[p]) for p in old_f[j])
            new_xs.append(self.A.act(xs[j], rho))
        return self.class_of((c, new_pi, tuple(new_xs)))

    def right_arity(self, g):
        return self.A.right_arity(g)

    def compose(self, cls, gs):
        """Right action, inherited from the right action on ``A``."""
        c, pi, xs = self.representative(cls)
        k = self.C.arity(c)
        fib = _fibers(pi, k)
        new_xs = tuple(self.A.compose(xs[j], [gs[p] for p in fib[j]]) for j in range(k))
        new_pi = tuple(pi[p] for p in range(len(pi)) for _ in range(self.A.right_arity(gs[p])))
        return self.class_of((c, new_pi, new_xs))

    def left_action(self, f, classes):
        """Left action on arity-0 classes, inherited from the left action on ``C``."""
        reps = [self.representative(y) for y in classes]
        if any(len(r[1]) for r in reps):
            raise OperadError("left action is implemented on arity-0 classes only")
        c = self.C.left_action(f, [r[0] for r in reps])
        xs = tuple(x for r in reps for x in r[2])
        raw = (c, (), xs)
        if self.max_letters is not None and _letters(self.A, xs) > self.max_letters:
            raise ArityOverflow("letter budget exceeded")
        return self.class_of(raw)


def _letters(A, xs) -> int:
    """Number of non-base labels among arity-0 entries of ``xs``."""
    zero = getattr(getattr(A, "monoid", None), "zero", None)
    total = 0
    for x in xs:
        if isinstance(x, TensorClass):
            total += _min_letters(A, x)
        elif x != zero:
            total += 1
    return total


def _min_letters(A, cls) -> int:
    return min(_letters(A.A, raw[2]) for raw in A.members(cls))


def tensor_over_operad(C, F: Operad, A, max_arity: int | None = None,
                       max_letters: int | None = None) -> TensorProduct:
    """``C ⊗_F A`` for a right F-module ``C`` and a partial left F-module ``A``."""
    return TensorProduct(C, F, A, max_arity, max_letters)


@dataclass
class AssociativityWitness:
    """Both bracketings of ``A ⊗_F B ⊗_G X`` and the natural map between them."""

    lhs: TensorProduct
    rhs: TensorProduct
    mapping: dict
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems


def compare_bracketings(A, F: Operad, B, G: Operad, X, max_arity: int) -> AssociativityWitness:
    """Compute ``(A ⊗_F B) ⊗_G X`` and ``A ⊗_F (B ⊗_G X)`` independently.

    ``B`` must be an F-G bimodule (``left_action`` and ``compose``) and ``X`` a
    partial G-algebra.  The map sends ``[(a, π, b), x]`` to
    ``[a, ([b_j, x|fibre j])_j]``; it is evaluated on every member of every
    class, so well-definedness, injectivity and surjectivity are all checked.
    Truncating at ``max_arity`` letters is exact when X's word rewriting is
    confluent.
    """
    inner_left = TensorProduct(A, F, B, max_arity)
    lhs = TensorProduct(inner_left, G, X, 0)
    inner_right = TensorProduct(B, G, X, 0)
    rhs = TensorProduct(A, F, inner_right, 0, max_letters=max_arity)
    problems: list[str] = []
    mapping: dict = {}
    for cls in lhs.elements(0):
        images = set()
        for l1, _, xs in lhs.members(cls):
            for a, pi, bs in inner_left.members(l1):
                fib = _fibers(pi, len(bs))
                ys = tuple(inner_right.class_of((b, (), tuple(xs[p] for p in fib[j])))
                           for j, b in enumerate(bs))
                try:
                    images.add(rhs.class_of((a, (), ys)))
                except ArityOverflow:
                    problems.append(f"image of {(a, pi, bs, xs)!r} leaves the truncation")
        if len(images) != 1:
            problems.append(f"class {cls.index} maps to {len(images)} classes")
            continue
        mapping[cls] = images.pop()
    targets = list(mapping.values())
    if len(set(targets)) != len(targets):
        problems.append("natural map is not injective")
    if set(targets) != set(rhs.elements(0)):
        problems.append("natural map is not surjective")
    return AssociativityWitness(lhs, rhs, mapping, problems)


def random_bracketing_instance(seed: int, max_arity: int = 3):
    """Random ``(S ⊗ F, F, F, F, X)`` data for :func:`compare_bracketings`.

    ``F`` is Ass or Com (with nullary operation), ``S`` a random Σ-set in
    arities ≤ 2 and ``X`` a three-element partial abelian monoid whose word
    rewriting (multiset rewriting for Com) is confluent up to ``max_arity``.
    """
    from dataclasses import replace
    rng = random.Random(seed)
    kind = rng.choice([CommutativeOperad, AssociativeOperad])
    F = kind(max_arity, nullary=True)
    while True:
        M = random_partial_abelian_monoid(rng, 3)
        words = M if kind is CommutativeOperad else replace(M, abelian=False)
        if not complete_monoid(words, max_arity, strict=False).violations:
            break
    sets, act = {}, None
    for k in range(3):
        m = rng.randint(0, 2)
        if m:
            sets[k] = [f"s{k}{i}" for i in range(m)]
    if not sets:
        sets = {1: ["s10"]}
    if len(sets.get(2, ())) == 2 and rng.random() < 0.5:
        a, b = sets[2]
        act = {(a, (1, 0)): b, (b, (1, 0)): a}
    S = SigmaSet(sets, act)
    return FreeRightModule(S, F, max_arity), F, OperadModule(F), F, PartialAlgebra(M, F)
