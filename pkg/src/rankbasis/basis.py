"""Markov bases for the permutation-representation toric ideal of S_n.

The basis is computed without any Groebner engine: for each line sum d
up to the degree bound, enumerate one magic square per S_n x S_n orbit,
enumerate its fiber (all tableaux with that sum) by depth-first search
with pruning, and add connecting moves whenever the fiber graph under
the moves found so far is disconnected.  Newly added moves are closed
under the symmetry action before moving on, so the output is stored as
class representatives with orbit sizes plus the expanded move set.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

from .perms import (
    Perm,
    compose,
    cycle_type,
    enumerate_sn,
    identity,
    inverse,
    is_derangement_of,
    partitions_of,
    permutation_matrix,
)
from .tableaux import (
    Move,
    Square,
    Tableau,
    canonical_move,
    canonical_square,
    line_sum,
    make_move,
    make_tableau,
    move_from_json,
    move_orbit,
    move_to_json,
    norm_squared,
    tableau_sum,
)

BASIS_SCHEMA = 1


def degree_bound(n: int) -> int:
    """Largest move degree that can be needed: n-1 for n > 3, else n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return n - 1 if n > 3 else n


# ---------------------------------------------------------------------------
# fiber enumeration


def enumerate_fiber(b: Square) -> list[Tableau]:
    """All tableaux summing to b, each exactly once.

    Depth-first search assigning rows in nondecreasing lexicographic
    order; a branch is pruned as soon as a residual entry exceeds the
    number of rows still to be placed (each remaining row can cover a
    cell at most once).
    """
    n = len(b)
    s = line_sum(b)
    if s < 1:
        raise ValueError("line sum must be at least 1")
    residual = [list(row) for row in b]
    out: list[Tableau] = []
    rows: list[Perm] = []

    def place(remaining: int, lower: Perm | None) -> None:
        if remaining == 0:
            out.append(tuple(rows))
            return
        for p in _rows_within(residual, lower, remaining):
            for j, i in enumerate(p):
                residual[i - 1][j] -= 1
            rows.append(p)
            place(remaining - 1, p)
            rows.pop()
            for j, i in enumerate(p):
                residual[i - 1][j] += 1

    place(s, None)
    return out


def _rows_within(
    residual: list[list[int]], lower: Perm | None, remaining: int
) -> list[Perm]:
    """Permutations p >= lower with residual support at every (p[j], j),
    such that no leftover entry would exceed remaining - 1 rows."""
    n = len(residual)
    out: list[Perm] = []
    prefix: list[int] = []
    used = [False] * n

    def go(j: int, tight: bool) -> None:
        if j == n:
            p = tuple(prefix)
            if _row_feasible(residual, p, remaining):
                out.append(p)
            return
        lo = lower[j] if tight else 1
        for item in range(lo, n + 1):
            if used[item - 1] or residual[item - 1][j] == 0:
                continue
            used[item - 1] = True
            prefix.append(item)
            go(j + 1, tight and item == lower[j])
            prefix.pop()
            used[item - 1] = False

    go(0, lower is not None)
    return out


def _row_feasible(residual: list[list[int]], p: Perm, remaining: int) -> bool:
    # after placing p, every residual entry must fit in remaining-1 rows
    cap = remaining - 1
    for i, row in enumerate(residual):
        for j, e in enumerate(row):
            if e - (1 if p[j] == i + 1 else 0) > cap:
                return False
    return True


def naive_fiber(b: Square) -> list[Tableau]:
    """Oracle: filter all multisets of line_sum permutations by their sum."""
    n = len(b)
    s = line_sum(b)
    return [
        t
        for t in combinations_with_replacement(enumerate_sn(n), s)
        if tableau_sum(t) == b
    ]


# ---------------------------------------------------------------------------
# fiber graph connectivity


class MoveIndex:
    """Lookup from a tableau to the tableaux reachable by one move."""

    def __init__(self, moves: "set[Move] | list[Move]" = ()):
        self.partners: dict[Tableau, list[Tableau]] = defaultdict(list)
        self.degrees: set[int] = set()
        for m in moves:
            self.add(m)

    def add(self, m: Move) -> None:
        self.partners[m.plus].append(m.minus)
        self.partners[m.minus].append(m.plus)
        self.degrees.add(m.degree)

    def neighbors(self, t: Tableau) -> list[Tableau]:
        out = []
        for d in self.degrees:
            if d > len(t):
                continue
            seen_subs = set()
            for idxs in combinations(range(len(t)), d):
                sub = tuple(t[i] for i in idxs)
                if sub in seen_subs:
                    continue
                seen_subs.add(sub)
                for partner in self.partners.get(sub, ()):
                    rest = list(t)
                    for i in reversed(idxs):
                        del rest[i]
                    out.append(make_tableau(rest + list(partner)))
        return out


def fiber_components(
    b: Square, available: "set[Move] | list[Move] | MoveIndex"
) -> list[list[Tableau]]:
    """Connected components of the fiber graph of b under the moves."""
    fiber = enumerate_fiber(b)
    index = available if isinstance(available, MoveIndex) else MoveIndex(available)
    return _components(fiber, index)


def _components(fiber: list[Tableau], index: MoveIndex) -> list[list[Tableau]]:
    unvisited = set(fiber)
    comps: list[list[Tableau]] = []
    for start in fiber:
        if start not in unvisited:
            continue
        comp = [start]
        unvisited.discard(start)
        stack = [start]
        while stack:
            t = stack.pop()
            for t2 in index.neighbors(t):
                if t2 in unvisited:
                    unvisited.discard(t2)
                    comp.append(t2)
                    stack.append(t2)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


# ---------------------------------------------------------------------------
# magic square orbit enumeration


def enumerate_square_orbits(n: int, s: int, jobs: int = 1) -> list[Square]:
    """One canonical representative per S_n x S_n orbit of n x n magic
    squares with line sum s.

    Any magic square is a sum of s permutation matrices (Birkhoff); the
    action lets us fix one summand to the identity and a second, up to
    simultaneous conjugation, to a cycle-type representative.  The
    remaining s-2 summands range over sorted tuples; canonical forms
    deduplicate.
    """
    if s < 1:
        raise ValueError("line sum must be at least 1")
    perms = enumerate_sn(n)
    iden = identity(n)
    if s == 1:
        return [canonical_square(tableau_sum((iden,)))]
    class_reps = _cycle_type_reps(n)
    candidates = (
        tableau_sum((iden, rep) + rest)
        for rep in class_reps
        for rest in combinations_with_replacement(perms, s - 2)
    )
    seen: set[Square] = set()
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            seen.update(pool.imap_unordered(canonical_square, candidates, 64))
    else:
        seen.update(canonical_square(b) for b in candidates)
    return sorted(seen)


def random_square_orbits(
    n: int, s: int, samples: int, seed: int = 0, thin: int = 10
) -> set[Square]:
    """Randomized alternative to enumerate_square_orbits for large n.

    Runs an auxiliary swap chain on magic squares of line sum s: each
    step picks two rows and two columns and applies a +1/-1 checkerboard
    if the entries stay nonnegative (these swaps connect all magic
    squares with fixed line sums).  Every ``thin`` steps the canonical
    form of the current square is collected.  Returns the distinct orbit
    representatives seen; unlike the exhaustive enumeration there is no
    completeness guarantee.
    """
    if s < 1:
        raise ValueError("line sum must be at least 1")
    rng = random.Random(seed)
    square = [[s if i == j else 0 for j in range(n)] for i in range(n)]
    seen: set[Square] = set()
    for k in range(samples * thin):
        r1, r2 = rng.sample(range(n), 2)
        c1, c2 = rng.sample(range(n), 2)
        if square[r1][c2] > 0 and square[r2][c1] > 0:
            square[r1][c1] += 1
            square[r2][c2] += 1
            square[r1][c2] -= 1
            square[r2][c1] -= 1
        if k % thin == thin - 1:
            seen.add(canonical_square(tuple(tuple(row) for row in square)))
    return seen


def _cycle_type_reps(n: int) -> list[Perm]:
    """Lexicographically first permutation of each cycle type."""
    reps: dict[tuple, Perm] = {}
    for p in enumerate_sn(n):
        t = cycle_type(p)
        if t not in reps:
            reps[t] = p
    return sorted(reps.values())


# ---------------------------------------------------------------------------
# the Markov basis


@dataclass
class MarkovBasis:
    """Moves connecting every fiber up to the computed degree."""

    n: int
    max_degree: int
    classes: list[tuple[Move, int]] = field(default_factory=list)
    moves: set[Move] = field(default_factory=set)

    def degree_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self.moves:
            out[m.degree] = out.get(m.degree, 0) + 1
        return out

    def class_degree_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m, _ in self.classes:
            out[m.degree] = out.get(m.degree, 0) + 1
        return out

    def classes_of_degree(self, d: int) -> list[tuple[Move, int]]:
        return [(m, s) for m, s in self.classes if m.degree == d]


def compute_markov_basis(
    n: int,
    max_degree: int | None = None,
    use_norm_bound: bool = True,
    jobs: int = 1,
) -> MarkovBasis:
    """Markov basis for S_n by fiber enumeration and connectivity.

    For each degree d = 2..max_degree and each magic-square orbit
    representative with line sum d, connect the fiber: while it has
    c > 1 components, add the move joining the lexicographically least
    tableaux of the first two components, closed under symmetry, and
    recompute.  With use_norm_bound (only applied at the top degree
    d = degree_bound), fibers over squares with ||b||^2 > (n-d+1)*d^2
    are skipped: a pigeonhole count on row agreements shows such fibers
    are already connected by lower-degree moves.
    """
    if not 2 <= n <= 6:
        raise ValueError("supported range is 2 <= n <= 6")
    if max_degree is None:
        max_degree = degree_bound(n)
    basis = MarkovBasis(n, max_degree)
    index = MoveIndex()
    for d in range(2, max_degree + 1):
        prune = use_norm_bound and d == degree_bound(n)
        for b in enumerate_square_orbits(n, d, jobs=jobs):
            if prune and norm_squared(b) > (n - d + 1) * d * d:
                continue
            _connect_fiber(b, basis, index)
    basis.classes.sort(key=lambda pair: (pair[0].degree, pair[0]))
    return basis


def _connect_fiber(b: Square, basis: MarkovBasis, index: MoveIndex) -> None:
    fiber = enumerate_fiber(b)
    if len(fiber) <= 1:
        return
    while True:
        comps = _components(fiber, index)
        if len(comps) == 1:
            return
        move = make_move(comps[0][0], comps[1][0])
        rep = canonical_move(move)
        orbit = move_orbit(rep)
        basis.classes.append((rep, len(orbit)))
        for m in orbit:
            if m not in basis.moves:
                basis.moves.add(m)
                index.add(m)


def verify_basis(
    basis: MarkovBasis,
    n: int,
    up_to_degree: int,
    use_norm_bound: bool = True,
    jobs: int = 1,
) -> tuple[bool, Square | None]:
    """Check every fiber with line sum <= up_to_degree is connected.

    Returns (True, None) or (False, first disconnected square).  Fibers
    are checked degree by degree, so the norm-squared shortcut (see
    compute_markov_basis) may rely on the lower degrees already
    verified within this call; it is only applied at degrees >= 3.
    """
    index = MoveIndex(basis.moves)
    for d in range(1, up_to_degree + 1):
        for b in enumerate_square_orbits(n, d, jobs=jobs):
            if use_norm_bound and d >= 3 and norm_squared(b) > (n - d + 1) * d * d:
                continue
            fiber = enumerate_fiber(b)
            if len(fiber) <= 1:
                continue
            if len(_components(fiber, index)) > 1:
                return False, b
    return True, None


# ---------------------------------------------------------------------------
# degree-2 moves and the D_2 count


def degree2_moves(n: int) -> set[Move]:
    """All degree-2 moves, built directly from pairs of permutations.

    Decompositions of each line-sum-2 square are grouped (a square
    summing two permutations with k nontrivial relative cycles has
    2^(k-1) decompositions) and each fiber is connected by a star from
    its least tableau, giving 2^(k-1) - 1 moves per square.
    """
    if n < 2:
        return set()
    perms = enumerate_sn(n)
    fibers: dict[Square, list[Tableau]] = defaultdict(list)
    for i, p in enumerate(perms):
        for q in perms[i:]:
            fibers[tableau_sum((p, q))].append((p, q))
    moves: set[Move] = set()
    for tabs in fibers.values():
        if len(tabs) < 2:
            continue
        tabs.sort()
        base = tabs[0]
        for other in tabs[1:]:
            moves.add(make_move(base, other))
    return moves


def _partitions_into_parts_at_most(j: int, k: int) -> int:
    """[q^j] of prod_{i=1..k} 1/(1-q^i)."""
    table = [1] + [0] * j
    for part in range(1, k + 1):
        for v in range(part, j + 1):
            table[v] += table[v - part]
    return table[j]


def d2_count(n: int) -> int:
    """Number of degree-2 symmetry classes, by the closed recurrence

        D_2(n) = D_2(n-1)
               + sum_{k=2..n/2} (2^(k-1)-1) * p_<=k(n-2k)

    where p_<=k(j) counts partitions of j into parts of size at most k
    (the blocks of a fully spread square are cycles of length >= 2; a
    square containing a 2 reduces to the n-1 case).
    """
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    for m in range(2, n + 1):
        for k in range(2, m // 2 + 1):
            total += (2 ** (k - 1) - 1) * _partitions_into_parts_at_most(
                m - 2 * k, k
            )
    return total


# ---------------------------------------------------------------------------
# structures from the degree-bound argument


def agreement_matrix(s: Tableau, t: Tableau) -> tuple[tuple[int, ...], ...]:
    """M[i][j] = number of positions where row i of s and row j of t
    agree; the total over all (i, j) equals ||tableau_sum||^2."""
    if tableau_sum(s) != tableau_sum(t):
        raise ValueError("tableaux have different sums")
    return tuple(
        tuple(sum(1 for a, b in zip(si, tj) if a == b) for tj in t) for si in s
    )


def derangement_graph(n: int) -> dict[Perm, list[Perm]]:
    """Vertices are all n! permutations; edges join disjoint pairs."""
    if n < 2:
        raise ValueError("n must be at least 2")
    perms = enumerate_sn(n)
    adj: dict[Perm, list[Perm]] = {p: [] for p in perms}
    for i, p in enumerate(perms):
        for q in perms[i + 1 :]:
            if is_derangement_of(p, q):
                adj[p].append(q)
                adj[q].append(p)
    return adj


def is_connected(graph: dict) -> bool:
    if not graph:
        return True
    start = next(iter(graph))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in graph[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(graph)


# ---------------------------------------------------------------------------
# serialization


def basis_to_json(basis: MarkovBasis, classes_only: bool = False) -> dict:
    doc = {
        "schema": BASIS_SCHEMA,
        "n": basis.n,
        "max_degree": basis.max_degree,
        "degree_counts": {str(k): v for k, v in sorted(basis.degree_counts().items())},
        "classes": [
            {**move_to_json(m), "orbit_size": size, "degree": m.degree}
            for m, size in basis.classes
        ],
    }
    if not classes_only:
        doc["moves"] = [move_to_json(m) for m in sorted(basis.moves)]
    return doc


def basis_from_json(doc: dict) -> MarkovBasis:
    if doc.get("schema") != BASIS_SCHEMA:
        raise ValueError(f"unknown basis schema {doc.get('schema')!r}")
    classes = [
        (move_from_json(c), c["orbit_size"]) for c in doc["classes"]
    ]
    if "moves" in doc:
        moves = {move_from_json(m) for m in doc["moves"]}
    else:
        moves = set()
        for m, _ in classes:
            moves |= move_orbit(m)
    return MarkovBasis(doc["n"], doc["max_degree"], classes, moves)


def save_basis(
    basis: MarkovBasis,
    path: str,
    classes_only: bool = False,
    certificate: dict | None = None,
) -> None:
    doc = basis_to_json(basis, classes_only)
    if certificate is not None:
        doc["certificate"] = certificate
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)


def load_basis(path: str) -> MarkovBasis:
    with open(path) as fh:
        return basis_from_json(json.load(fh))


def render_move(m: Move) -> str:
    """Two-tableau plain-text layout for human inspection."""
    width = max(len(m.plus), len(m.minus))
    lines = []
    for i in range(width):
        left = "".join(map(str, m.plus[i])) if i < len(m.plus) else " " * m.n
        right = "".join(map(str, m.minus[i])) if i < len(m.minus) else " " * m.n
        sep = " - " if i == (width - 1) // 2 else "   "
        lines.append(f"{left}{sep}{right}")
    return "\n".join(lines)
