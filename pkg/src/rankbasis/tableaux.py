"""Magic squares, tableaux, signed moves, and the S_n x S_n symmetry action.

A tableau is a multiset of permutations, stored as a sorted tuple of
rows; its sum of permutation matrices is a magic square whose line sum
equals the number of rows (the degree).  A move is a signed pair of
tableaux with equal sums; moves are normalized so that the two tableaux
share no row and the lexicographically smaller tableau is the plus side
(a move and its negation carry the same statistical content).

The symmetry group S_n x S_n acts on tableaux by (sigma, tau): each row
pi becomes tau . pi . sigma^{-1}; sigma permutes positions (columns of
the tableau), tau relabels items.  On magic squares this permutes
columns by sigma and rows by tau.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

from .perms import (
    Perm,
    compose,
    enumerate_sn,
    identity,
    inverse,
    perm_from_str,
    perm_to_str,
    permutation_matrix,
)
from .spectral import RankFunction

Square = tuple[tuple[int, ...], ...]
Tableau = tuple[Perm, ...]


def make_tableau(rows: Iterable[Perm]) -> Tableau:
    return tuple(sorted(rows))


def line_sum(b: Square) -> int:
    return sum(b[0])


def norm_squared(b: Square) -> int:
    return sum(e * e for row in b for e in row)


def is_magic_square(b: Square) -> bool:
    n = len(b)
    if any(len(row) != n for row in b):
        return False
    if any(e < 0 for row in b for e in row):
        return False
    s = sum(b[0])
    return all(sum(row) == s for row in b) and all(
        sum(b[i][j] for i in range(n)) == s for j in range(n)
    )


def tableau_sum(t: Tableau) -> Square:
    """Entrywise sum of the rows' permutation matrices."""
    if not t:
        raise ValueError("empty tableau")
    n = len(t[0])
    out = [[0] * n for _ in range(n)]
    for p in t:
        for j, i in enumerate(p):
            out[i - 1][j] += 1
    return tuple(tuple(row) for row in out)


@dataclass(frozen=True, order=True)
class Move:
    """A Markov-basis element: plus and minus tableaux with equal sums."""

    plus: Tableau
    minus: Tableau

    @property
    def degree(self) -> int:
        return len(self.plus)

    @property
    def n(self) -> int:
        return len(self.plus[0])


def make_move(a: Iterable[Perm], b: Iterable[Perm]) -> Move:
    """Normalize a signed tableau pair into a Move.

    Common rows are cancelled (such a move is equivalent to one of
    lower degree) and the sign is fixed so plus < minus
    lexicographically.
    """
    plus = list(sorted(a))
    minus = list(sorted(b))
    i = 0
    while i < len(plus):
        row = plus[i]
        if row in minus:
            plus.remove(row)
            minus.remove(row)
        else:
            i += 1
    if not plus or not minus:
        raise ValueError("tableaux are equal after cancelling common rows")
    if len(plus) != len(minus):
        raise ValueError("tableaux have different degrees")
    pt, mt = tuple(plus), tuple(minus)
    if tableau_sum(pt) != tableau_sum(mt):
        raise ValueError("tableaux have different sums")
    return Move(pt, mt) if pt < mt else Move(mt, pt)


def apply_move(f: RankFunction, m: Move, eps: int = 1) -> Optional[RankFunction]:
    """f + eps*m if all resulting counts stay nonnegative, else None."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    add, sub = (m.plus, m.minus) if eps == 1 else (m.minus, m.plus)
    counts = dict(f.counts)
    for p in sub:
        c = counts.get(p, 0) - 1
        if c < 0:
            return None
        counts[p] = c
    for p in add:
        counts[p] = counts.get(p, 0) + 1
    return RankFunction(f.n, counts)


def birkhoff_decompose(b: Square) -> Tableau:
    """Write a magic square as a sum of line_sum permutation matrices.

    Greedy: repeatedly extract a permutation through bipartite matching
    on the positive support.  Deterministic (fixed vertex order); any
    valid decomposition is acceptable.
    """
    if not is_magic_square(b):
        raise ValueError("not a magic square")
    n = len(b)
    s = line_sum(b)
    work = [list(row) for row in b]
    rows: list[Perm] = []
    for _ in range(s):
        match = _perfect_matching(work, n)
        rows.append(tuple(i + 1 for i in match))
        for j, i in enumerate(match):
            work[i][j] -= 1
    return make_tableau(rows)


def _perfect_matching(work: list[list[int]], n: int) -> list[int]:
    """Kuhn's algorithm: match[j] = item index i with work[i][j] > 0."""
    match_of_item = [-1] * n

    def try_assign(j: int, visited: list[bool]) -> bool:
        for i in range(n):
            if work[i][j] > 0 and not visited[i]:
                visited[i] = True
                if match_of_item[i] == -1 or try_assign(match_of_item[i], visited):
                    match_of_item[i] = j
                    return True
        return False

    for j in range(n):
        if not try_assign(j, [False] * n):
            raise ValueError("no perfect matching: not a magic square")
    match = [0] * n
    for i, j in enumerate(match_of_item):
        match[j] = i
    return match


def transform_perm(sigma: Perm, tau: Perm, p: Perm) -> Perm:
    """Row image under (sigma, tau): tau . p . sigma^{-1}."""
    return compose(tau, compose(p, inverse(sigma)))


def apply_symmetry(
    sigma: Perm, tau: Perm, x: Union[Tableau, Move]
) -> Union[Tableau, Move]:
    """Act by (sigma, tau): sigma permutes positions, tau relabels items."""
    sigma_inv = inverse(sigma)

    def act(t: Tableau) -> Tableau:
        return make_tableau(compose(tau, compose(p, sigma_inv)) for p in t)

    if isinstance(x, Move):
        pt, mt = act(x.plus), act(x.minus)
        return Move(pt, mt) if pt < mt else Move(mt, pt)
    return act(x)


@lru_cache(maxsize=None)
def _inverses(n: int) -> dict[Perm, Perm]:
    return {p: inverse(p) for p in enumerate_sn(n)}


def canonical_square(b: Square) -> Square:
    """Lexicographically minimal element of the S_n x S_n orbit of b.

    Rows may be reordered freely, so for each column permutation the
    best row order is ascending sort; minimize over column permutations.
    """
    n = len(b)
    best = None
    for sigma in enumerate_sn(n):
        cand = tuple(sorted(tuple(row[s - 1] for s in sigma) for row in b))
        if best is None or cand < best:
            best = cand
    return best


def canonical_move(m: Move) -> Move:
    """Lexicographically minimal element of the S_n x S_n orbit of m
    (minimized also over swapping plus and minus).

    The minimal representative must contain the identity as the first
    row of its plus tableau (any single row can be mapped to the
    identity, and tableaux sharing no row means only one side can hold
    it), so only group elements (tau . r, tau) for r a row of m need
    inspection: n! * 2 * degree candidates instead of (n!)^2.
    """
    n = m.n
    inv = _inverses(n)
    rows = m.plus + m.minus
    best: Optional[tuple[Tableau, Tableau]] = None
    for tau in enumerate_sn(n):
        tau_rows = {p: compose(tau, p) for p in rows}
        for r in rows:
            sigma_inv = inv[tau_rows[r]]  # sigma = tau . r
            pt = tuple(sorted(compose(tau_rows[p], sigma_inv) for p in m.plus))
            mt = tuple(sorted(compose(tau_rows[p], sigma_inv) for p in m.minus))
            cand = (pt, mt) if pt < mt else (mt, pt)
            if best is None or cand < best:
                best = cand
    return Move(*best)


def move_orbit(m: Move) -> set[Move]:
    """All distinct images of m under S_n x S_n (with sign normalized)."""
    n = m.n
    inv = _inverses(n)
    orbit: set[Move] = set()
    perms = enumerate_sn(n)
    for tau in perms:
        tau_plus = [compose(tau, p) for p in m.plus]
        tau_minus = [compose(tau, p) for p in m.minus]
        for sigma in perms:
            sigma_inv = inv[sigma]
            pt = tuple(sorted(compose(p, sigma_inv) for p in tau_plus))
            mt = tuple(sorted(compose(p, sigma_inv) for p in tau_minus))
            orbit.add(Move(pt, mt) if pt < mt else Move(mt, pt))
    return orbit


def orbit_size(m: Move) -> int:
    return len(move_orbit(m))


def move_to_json(m: Move) -> dict:
    return {
        "plus": [perm_to_str(p) for p in m.plus],
        "minus": [perm_to_str(p) for p in m.minus],
    }


def move_from_json(d: dict) -> Move:
    return make_move(
        [perm_from_str(s) for s in d["plus"]],
        [perm_from_str(s) for s in d["minus"]],
    )


def square_to_json(b: Square) -> list[int]:
    """Row-major flattening."""
    return [e for row in b for e in row]


def square_from_json(flat: list[int], n: int) -> Square:
    return tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))
