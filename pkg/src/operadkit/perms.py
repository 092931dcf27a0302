"""Permutations in one-line notation (0-based tuples).

Convention: ``Σ_n`` acts on the right on positions.  For an operation ``x`` of
arity ``n``, ``x·σ`` feeds input ``σ[i]`` into slot ``i``::

    (x·σ)(y_0, ..., y_{n-1}) = x(y_{σ[0]}, ..., y_{σ[n-1]})

and the product ``mul(s, t)`` is chosen so that ``x·mul(s, t) = (x·s)·t``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(s: Perm, t: Perm) -> Perm:
    """``s`` then ``t``: ``mul(s, t)[i] = t[s[i]]``."""
    return tuple(t[i] for i in s)


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


def is_perm(s: Sequence[int]) -> bool:
    return sorted(s) == list(range(len(s)))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    return tuple(itertools.permutations(range(n)))


def adjacent_transpositions(n: int) -> list[Perm]:
    out = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(tuple(p))
    return out


def permute(seq: Sequence, s: Perm) -> tuple:
    """Reindex a sequence by ``s``: ``out[i] = seq[s[i]]``."""
    return tuple(seq[i] for i in s)


def block_sum(perms: Sequence[Perm]) -> Perm:
    out: list[int] = []
    offset = 0
    for p in perms:
        out.extend(offset + v for v in p)
        offset += len(p)
    return tuple(out)


def block_permutation(sigma: Perm, sizes: Sequence[int]) -> Perm:
    """Permutation of ``sum(sizes)`` points moving whole blocks.

    Block ``p`` of the reordered sequence (of size ``sizes[sigma[p]]``) reads
    from block ``sigma[p]`` of the original layout.
    """
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    out: list[int] = []
    for p in sigma:
        out.extend(range(offsets[p], offsets[p] + sizes[p]))
    return tuple(out)
