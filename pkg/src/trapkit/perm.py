"""Exact permutation arithmetic in one-line notation.

A permutation of degree ``n`` is a tuple ``p`` of length ``n`` whose entries
are a rearrangement of ``1..n``; ``p[i-1]`` is the image of ``i``.  All
indices in this module are 1-based, matching the usual convention for
symmetric-group actions on labelled inputs/outputs.
"""

from __future__ import annotations

import random
from typing import Sequence, TypeVar

Perm = tuple[int, ...]

T = TypeVar("T")


def is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def degree(p: Perm) -> int:
    return len(p)


def identity(n: int) -> Perm:
    if n < 0:
        raise ValueError(f"negative degree {n}")
    return tuple(range(1, n + 1))


def compose(a: Perm, b: Perm) -> Perm:
    """(a o b)(i) = a(b(i))."""
    if len(a) != len(b):
        raise ValueError(f"degree mismatch: {len(a)} vs {len(b)}")
    return tuple(a[b[i] - 1] for i in range(len(a)))


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, v in enumerate(a):
        inv[v - 1] = i + 1
    return tuple(inv)


def tensor_sum(a: Perm, b: Perm) -> Perm:
    """Block sum: acts as ``a`` on 1..m and as ``b`` (shifted) on m+1..m+n."""
    m = len(a)
    return a + tuple(v + m for v in b)


def block_shuffle(m: int, n: int) -> Perm:
    """The block swap c(i) = i+n for i <= m, i-m for i > m."""
    if m < 0 or n < 0:
        raise ValueError("block sizes must be nonnegative")
    return tuple(range(n + 1, n + m + 1)) + tuple(range(1, n + 1))


def delete_index(a: Perm, p: int) -> Perm:
    """Remove the letter ``p`` from the one-line word and close the gap.

    Letters greater than ``p`` are decremented, producing a permutation of
    degree ``n - 1``.
    """
    if not 1 <= p <= len(a):
        raise ValueError(f"letter {p} out of range for degree {len(a)}")
    return tuple(v - 1 if v > p else v for v in a if v != p)


def cycle(points: Sequence[int], n: int) -> Perm:
    """The cycle sending points[0] -> points[1] -> ... -> points[-1] -> points[0],
    embedded in degree ``n``.  An empty or singleton cycle is the identity.
    """
    images = list(range(1, n + 1))
    for i, pt in enumerate(points):
        images[pt - 1] = points[(i + 1) % len(points)]
    return tuple(images)


def transposition(i: int, j: int, n: int) -> Perm:
    return cycle((i, j), n) if i != j else identity(n)


def apply(a: Perm, xs: Sequence[T]) -> tuple[T, ...]:
    """Left action on sequences: position i of the result holds xs[a^-1(i)]."""
    if len(xs) != len(a):
        raise ValueError(f"length mismatch: {len(xs)} vs degree {len(a)}")
    inv = inverse(a)
    return tuple(xs[inv[i] - 1] for i in range(len(a)))


def random_perm(rng: random.Random, n: int) -> Perm:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return tuple(images)


def is_shuffle(a: Perm, split: int) -> bool:
    """True if ``a`` is increasing on 1..split and on split+1..n."""
    head, tail = a[:split], a[split:]
    return all(x < y for x, y in zip(head, head[1:])) and all(
        x < y for x, y in zip(tail, tail[1:])
    )
