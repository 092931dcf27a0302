"""Integer chain complexes and their homology via Smith normal form.

Matrices are lists of integer rows (Python ints, so no overflow).  A
:class:`ChainComplex` stores ``∂_q : C_q → C_{q-1}`` as a ``rank(C_{q-1}) ×
rank(C_q)`` matrix for ``q = 1..Q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

Matrix = list[list[int]]


class HomologyError(ValueError):
    pass


# ---------------------------------------------------------------- matrices

def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        o = out[i]
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        o[j] += x * bk[j]
    return out


def determinant(m: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass
class SmithForm:
    diagonal: list[int]   # d_1 | d_2 | ... (non-zero entries only)
    shape: tuple[int, int]
    left: Matrix | None = None
    right: Matrix | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def matrix(self) -> Matrix:
        m, n = self.shape
        d = zeros(m, n)
        for i, x in enumerate(self.diagonal):
            d[i][i] = x
        return d


def smith_normal_form(m: Sequence[Sequence[int]], transforms: bool = True) -> SmithForm:
    """Smith normal form ``L·m·R = D`` with ``d_1 | d_2 | ...`` all positive.

    Elimination pivots on the entry of least absolute value; a pivot that
    fails to divide the remaining block absorbs an offending row and the
    step repeats.  ``transforms=False`` skips the bookkeeping for ``L, R``.
    """
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(r) != cols for r in a):
        raise HomologyError("ragged matrix")
    L = identity(rows) if transforms else None
    R = identity(cols) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if R is not None:
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        ra, rs = a[dst], a[src]
        for j in range(cols):
            if rs[j]:
                ra[j] += q * rs[j]
        if L is not None:
            la, ls = L[dst], L[src]
            for j in range(rows):
                if ls[j]:
                    la[j] += q * ls[j]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if R is not None:
            for row in R:
                if row[src]:
                    row[dst] += q * row[src]

    diag = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda r: r[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next((i for i in range(t + 1, rows)
                        for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            for j in range(cols):
                a[t][j] = -a[t][j]
            if L is not None:
                L[t] = [-x for x in L[t]]
        diag.append(a[t][t])
        t += 1
    return SmithForm(diag, (rows, cols), L, R)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(m, transforms=False).diagonal


# ---------------------------------------------------------------- complexes

@dataclass
class ChainComplex:
    """``ranks[q]`` for ``q = 0..Q`` and ``boundaries[q-1] = ∂_q``.

    Homology is reported through ``valid_through`` (default ``Q``); a
    truncated complex sets it lower so the top degree is not misread.
    """

    ranks: list[int]
    boundaries: list[Matrix]
    valid_through: int | None = None
    basis: list[list] | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise HomologyError("need one boundary matrix per positive degree")
        for q, d in enumerate(self.boundaries, start=1):
            rows, cols = self.ranks[q - 1], self.ranks[q]
            if len(d) != rows or any(len(r) != cols for r in d):
                raise HomologyError(f"∂_{q} has the wrong shape")
        for q in range(2, len(self.ranks)):
            lo, hi = self.boundaries[q - 2], self.boundaries[q - 1]
            if self.ranks[q - 2] and self.ranks[q] and any(any(r) for r in matmul(lo, hi)):
                raise HomologyError(f"∂_{q - 1} ∘ ∂_{q} ≠ 0")
        if self.valid_through is None:
            self.valid_through = len(self.ranks) - 1

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * r for q, r in enumerate(self.ranks))

    def to_json(self) -> dict:
        return {"ranks": list(self.ranks), "boundaries": self.boundaries,
                "valid_through": self.valid_through}

    @classmethod
    def from_json(cls, obj: dict) -> "ChainComplex":
        try:
            bds = [[[int(x) for x in row] for row in d] for d in obj["boundaries"]]
        except (KeyError, TypeError, ValueError):
            raise HomologyError("'boundaries' must be a list of integer matrices") from None
        ranks = obj.get("ranks")
        if ranks is None:
            if not bds:
                raise HomologyError("give 'ranks' when there are no boundaries")
            ranks = [len(bds[0])] + [len(d[0]) if d else 0 for d in bds]
        return cls([int(r) for r in ranks], bds, obj.get("valid_through"))


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for ts in self.torsion:
            if any(t <= 1 for t in ts) or any(b % a for a, b in zip(ts, ts[1:])):
                raise HomologyError(f"bad torsion chain {ts}")

    def group(self, q: int) -> str:
        parts = ["Z"] * self.betti[q] + [f"Z/{t}" for t in self.torsion[q]]
        return " + ".join(parts) if parts else "0"

    def groups(self) -> tuple[str, ...]:
        return tuple(self.group(q) for q in range(len(self.betti)))

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * b for q, b in enumerate(self.betti))

    def __str__(self):
        return "(" + ", ".join(self.groups()) + ")"

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion],
                "groups": list(self.groups())}


def homology(c: ChainComplex) -> HomologyResult:
    """``H_q = ker ∂_q / im ∂_{q+1}`` for ``q = 0..valid_through``."""
    facs = [[]] + [invariant_factors(d) for d in c.boundaries] + [[]]
    betti, torsion = [], []
    for q in range(c.valid_through + 1):
        rank_out = len(facs[q])       # rank ∂_q
        inc = facs[q + 1]             # invariant factors of ∂_{q+1}
        betti.append(c.ranks[q] - rank_out - len(inc))
        torsion.append(tuple(d for d in inc if d > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


# ---------------------------------------------------------------- simplicial

def simplicial_chain_complex(simplices: Sequence[Sequence]) -> ChainComplex:
    """Chain complex of the simplicial complex generated by ``simplices``
    (faces are added automatically; vertex order is the sort order)."""
    faces: set[tuple] = set()
    for s in simplices:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            faces.update(itertools.combinations(s, r))
    return _from_faces(faces)


def _from_faces(faces) -> ChainComplex:
    if not faces:
        return ChainComplex([0], [])
    top = max(len(f) for f in faces) - 1
    basis = [sorted(f for f in faces if len(f) == q + 1) for q in range(top + 1)]
    index = [{f: i for i, f in enumerate(b)} for b in basis]
    bds = []
    for q in range(1, top + 1):
        d = zeros(len(basis[q - 1]), len(basis[q]))
        for j, s in enumerate(basis[q]):
            for i in range(len(s)):
                d[index[q - 1][s[:i] + s[i + 1:]]][j] += (-1) ** i
        bds.append(d)
    return ChainComplex([len(b) for b in basis], bds, basis=basis)


def order_complex(p, among: Sequence[int] | None = None) -> ChainComplex:
    """Simplices are the chains of the poset (optionally restricted to
    ``among``), with the usual alternating-sum boundary."""
    return _from_faces(set(p.chains(among)))


def poset_chains(elements: Sequence, leq: Callable) -> list[tuple]:
    """Chains of an arbitrary finite poset given by ``leq``; used to test
    invariance under relabelling."""
    n = len(elements)
    ups = [[j for j in range(n) if j != i and leq(elements[i], elements[j])] for i in range(n)]
    out = []

    def extend(ch):
        out.append(tuple(ch))
        for j in ups[ch[-1]]:
            extend(ch + [j])

    for i in range(n):
        extend([i])
    return out


# ---------------------------------------------------------------- bar complex

@dataclass(frozen=True)
class FiniteMonoid:
    elements: tuple
    unit: object
    mul: Callable

    def check(self) -> "FiniteMonoid":
        els = self.elements
        if self.unit not in els:
            raise HomologyError("unit is not an element")
        for a in els:
            if self.mul(a, self.unit) != a or self.mul(self.unit, a) != a:
                raise HomologyError(f"{a!r} is not fixed by the unit")
        for a, b in itertools.product(els, repeat=2):
            if self.mul(a, b) not in els:
                raise HomologyError(f"product {a!r}·{b!r} is not an element")
        for a, b, c in itertools.product(els, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise HomologyError(f"non-associative: ({a!r},{b!r},{c!r})")
        return self


def cyclic_group(n: int) -> FiniteMonoid:
    return FiniteMonoid(tuple(range(n)), 0, lambda a, b: (a + b) % n)


def as_finite_monoid(A) -> FiniteMonoid:
    """Accept a :class:`FiniteMonoid`, a total partial monoid, or a bounded
    completion whose product is closed on its normal forms."""
    from .partial import Completion, PartialMonoid

    if isinstance(A, FiniteMonoid):
        return A.check()
    if isinstance(A, PartialMonoid):
        if not A.is_total():
            raise HomologyError(f"monoid {A.name or ''} is partial; complete it first")
        return FiniteMonoid(tuple(A.elements), A.zero, A.add).check()
    if isinstance(A, Completion):
        forms = tuple(A.normal_forms)
        if len(A.product) != len(forms) ** 2:
            raise HomologyError(f"completion is not closed at bound {A.bound}; "
                                "only total truncations are accepted")
        return FiniteMonoid(forms, (), lambda u, v: A.product[(u, v)]).check()
    raise HomologyError(f"cannot read a monoid from {type(A).__name__}")


def bar_complex(A, q_max: int) -> ChainComplex:
    """Normalized bar complex through degree ``q_max + 1``; homology is
    valid through ``q_max``."""
    if q_max < 0:
        raise HomologyError("q_max must be non-negative")
    M = as_finite_monoid(A)
    gens = [a for a in M.elements if a != M.unit]
    basis = [list(itertools.product(gens, repeat=q)) for q in range(q_max + 2)]
    index = [{w: i for i, w in enumerate(b)} for b in basis]
    bds = []
    for q in range(1, q_max + 2):
        d = zeros(len(basis[q - 1]), len(basis[q]))
        for j, w in enumerate(basis[q]):
            d[index[q - 1][w[1:]]][j] += 1
            for i in range(q - 1):
                prod = M.mul(w[i], w[i + 1])
                if prod != M.unit:
                    d[index[q - 1][w[:i] + (prod,) + w[i + 2:]]][j] += (-1) ** (i + 1)
            d[index[q - 1][w[:-1]]][j] += (-1) ** q
        bds.append(d)
    return ChainComplex([len(b) for b in basis], bds, q_max, basis)


def periodic_resolution_complex(n: int, q_max: int) -> ChainComplex:
    """``ℤ ⊗_{ℤG} P`` for the 2-periodic free resolution ``P`` of ``ℤ`` over
    ``G = ℤ/n``: ``ℤG ←(t-1)− ℤG ←N− ℤG ←(t-1)− …``.

    The resolution is built as circulant matrices, checked to square to
    zero, and then augmented (``t ↦ 1``); an oracle independent of the bar
    complex for the group homology of a cyclic group.
    """
    if n < 1:
        raise HomologyError("n must be positive")

    def circulant(coeffs):  # multiplication by sum coeffs[i] t^i on ℤG
        return [[coeffs[(i - j) % n] for j in range(n)] for i in range(n)]

    t_minus_1 = circulant([-1, 1] + [0] * (n - 2)) if n > 1 else [[0]]
    norm = circulant([1] * n)
    maps = [t_minus_1 if q % 2 else norm for q in range(1, q_max + 2)]
    for lo, hi in zip(maps, maps[1:]):
        if any(any(r) for r in matmul(lo, hi)):
            raise HomologyError("resolution differential does not square to zero")
    # augmentation: a G-map ℤG → ℤG given by x ↦ x·c becomes multiplication by ε(c)
    eps = [[[sum(row[0] for row in m)]] for m in maps]
    return ChainComplex([1] * (q_max + 2), eps, q_max)


def cyclic_group_homology(n: int, q_max: int) -> HomologyResult:
    """Closed form for ``H_q(ℤ/n)``: ``ℤ`` in degree 0, ``ℤ/n`` in odd
    degrees, zero in positive even degrees."""
    betti = tuple(int(q == 0) for q in range(q_max + 1))
    tors = tuple((n,) if q % 2 and n > 1 else () for q in range(q_max + 1))
    return HomologyResult(betti, tors)


def matrix_from_json(obj) -> Matrix:
    try:
        m = [[int(x) for x in row] for row in obj]
    except (TypeError, ValueError):
        raise HomologyError("matrix must be a list of integer rows") from None
    if m and any(len(r) != len(m[0]) for r in m):
        raise HomologyError("ragged matrix")
    return m

