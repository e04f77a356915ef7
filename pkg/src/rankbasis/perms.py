"""Permutation and partition arithmetic for the symmetric group S_n.

Conventions used throughout the package:

- A permutation is a tuple ``p`` of length n over {1..n} where ``p[j]`` is
  the item placed in position j+1.  This matches the digit-string notation
  for rankings: "54321" means item 5 is ranked first, item 4 second, etc.
- Composition is ``(p * q)(j) = p(q(j))``, i.e. ``compose(p, q)[j] = p[q[j]-1]``.
- A partition is a weakly decreasing tuple of positive integers.

n is capped at MAX_N = 8 to keep factorial-sized structures bounded.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterator, Sequence

Perm = tuple[int, ...]
Partition = tuple[int, ...]

MAX_N = 8


def check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be between 1 and {MAX_N}, got {n}")


def is_permutation(p: Sequence[int]) -> bool:
    n = len(p)
    return 1 <= n <= MAX_N and sorted(p) == list(range(1, n + 1))


def identity(n: int) -> Perm:
    check_n(n)
    return tuple(range(1, n + 1))


@lru_cache(maxsize=None)
def enumerate_sn(n: int) -> tuple[Perm, ...]:
    """All n! permutations of {1..n} in lexicographic order."""
    check_n(n)
    return tuple(itertools.permutations(range(1, n + 1)))


def compose(p: Perm, q: Perm) -> Perm:
    """(p . q)(j) = p(q(j))."""
    if len(p) != len(q):
        raise ValueError("cannot compose permutations of different degrees")
    return tuple(p[j - 1] for j in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for j, i in enumerate(p):
        inv[i - 1] = j + 1
    return tuple(inv)


def cycle_type(p: Perm) -> Partition:
    """Multiset of cycle lengths of p, as a partition of n."""
    n = len(p)
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j] - 1
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def is_derangement_of(p: Perm, q: Perm) -> bool:
    """True iff p and q disagree in every position (the rankings are disjoint)."""
    if len(p) != len(q):
        raise ValueError("permutations must have the same degree")
    return all(a != b for a, b in zip(p, q))


def permutation_matrix(p: Perm) -> tuple[tuple[int, ...], ...]:
    """0/1 matrix with entry (i, j) = 1 iff p places item i in position j."""
    n = len(p)
    return tuple(
        tuple(1 if p[j] == i + 1 else 0 for j in range(n)) for i in range(n)
    )


def perm_to_str(p: Perm) -> str:
    """Digit-string form, e.g. (5,4,3,2,1) -> "54321".  Needs n <= 9."""
    return "".join(str(i) for i in p)


def perm_from_str(s: str) -> Perm:
    try:
        p = tuple(int(c) for c in s)
    except ValueError:
        raise ValueError(f"invalid ranking string {s!r}") from None
    if not is_permutation(p):
        raise ValueError(f"invalid ranking string {s!r}: not a permutation")
    return p


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse lexicographic order, (n) first."""
    check_n(n)
    return tuple(sorted(_gen_partitions(n, n), reverse=True))


def _gen_partitions(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _gen_partitions(n - first, first):
            yield (first,) + rest


def class_size(mu: Partition) -> int:
    """Size of the conjugacy class of S_n with cycle type mu: n! / z_mu."""
    n = sum(mu)
    z = 1
    mult: dict[int, int] = {}
    for part in mu:
        mult[part] = mult.get(part, 0) + 1
    for length, m in mult.items():
        z *= length**m * math.factorial(m)
    return math.factorial(n) // z
