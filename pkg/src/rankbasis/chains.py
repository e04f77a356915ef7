"""Random walks on fibers, Metropolis sampling, bootstrap, and the
exponential model.

All chains preserve the Fourier transform of the starting data (moves
have zero transform) and are deterministic given the seed.  The RNG is
Python's Mersenne Twister seeded with a 64-bit integer; draws are
consumed in a fixed order per step: move index, sign, symmetry element
(symmetrized walks only), acceptance uniform (Metropolis only, and only
when the proposal is feasible).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .perms import Partition, Perm, enumerate_sn, identity
from .spectral import (
    RankFunction,
    fourier_transform,
    projection_lengths,
    same_transform,
)
from .tableaux import Move, Tableau, apply_symmetry


@dataclass
class ChainConfig:
    target: str = "hypergeometric"  # or "uniform"
    basis_mode: str = "symmetrized"  # or "full"
    steps_per_sample: int = 10_000
    num_samples: int = 100
    seed: int = 0
    burn_in: int = 0  # extra steps before the first sample

    def __post_init__(self) -> None:
        if self.target not in ("hypergeometric", "uniform"):
            raise ValueError(f"unknown target {self.target!r}")
        if self.basis_mode not in ("symmetrized", "full"):
            raise ValueError(f"unknown basis_mode {self.basis_mode!r}")
        if self.steps_per_sample < 1 or self.num_samples < 1:
            raise ValueError("steps_per_sample and num_samples must be >= 1")


@dataclass
class ChainState:
    current: RankFunction
    fixed_transform: tuple
    step_count: int = 0
    rng: random.Random = field(default_factory=random.Random)

    @classmethod
    def start(cls, f0: RankFunction, seed: int = 0) -> "ChainState":
        return cls(f0.copy(), fourier_transform(f0), 0, random.Random(seed))

    def check_conservation(self) -> bool:
        return fourier_transform(self.current) == self.fixed_transform


def _try_shift(counts: dict, add: Tableau, sub: Tableau) -> bool:
    """Apply +1 on add rows / -1 on sub rows in place; roll back and
    return False if any count would go negative."""
    done = 0
    for p in sub:
        c = counts.get(p, 0)
        if c == 0:
            for q in sub[:done]:
                counts[q] += 1
            return False
        counts[p] = c - 1
        done += 1
    for p in add:
        counts[p] = counts.get(p, 0) + 1
    return True


def _undo_shift(counts: dict, add: Tableau, sub: Tableau) -> None:
    for p in add:
        counts[p] -= 1
    for p in sub:
        counts[p] += 1


def walk_step(state: ChainState, moves: list[Move]) -> ChainState:
    """One step of the plain uniform-target walk: uniform move, uniform
    sign, move if the result stays nonnegative, else hold."""
    if not moves:
        raise ValueError("empty move list")
    rng = state.rng
    m = moves[rng.randrange(len(moves))]
    eps = 1 if rng.random() < 0.5 else -1
    add, sub = (m.plus, m.minus) if eps == 1 else (m.minus, m.plus)
    _try_shift(state.current.counts, add, sub)
    state.step_count += 1
    return state


def symmetrized_step(state: ChainState, classes: list[Move]) -> ChainState:
    """One step of the symmetrized walk: uniform class representative,
    uniform sign, uniform (sigma, tau) in S_n x S_n applied to the
    representative, then proceed as walk_step."""
    if not classes:
        raise ValueError("empty class list")
    rng = state.rng
    m = classes[rng.randrange(len(classes))]
    eps = 1 if rng.random() < 0.5 else -1
    perms = enumerate_sn(state.current.n)
    sigma = perms[rng.randrange(len(perms))]
    tau = perms[rng.randrange(len(perms))]
    m = apply_symmetry(sigma, tau, m)
    add, sub = (m.plus, m.minus) if eps == 1 else (m.minus, m.plus)
    _try_shift(state.current.counts, add, sub)
    state.step_count += 1
    return state


def _log_acceptance(counts: dict, add: Tableau, sub: Tableau) -> float:
    """log of prod f(s)!/f'(s)! over changed cells for the target
    prod 1/f(s)!; computed incrementally from the +-1 deltas."""
    delta: dict[Perm, int] = {}
    for p in add:
        delta[p] = delta.get(p, 0) + 1
    for p in sub:
        delta[p] = delta.get(p, 0) - 1
    log_r = 0.0
    for p, d in delta.items():
        c = counts.get(p, 0)
        if d > 0:
            for t in range(1, d + 1):
                log_r -= math.log(c + t)
        else:
            for t in range(-d):
                log_r += math.log(c - t)
    return log_r


def metropolis_step(
    state: ChainState, moves: list[Move], mode: str = "full"
) -> ChainState:
    """One Metropolis step targeting the hypergeometric conditional:
    propose as in walk_step (mode="full") or symmetrized_step
    (mode="symmetrized"), accept with probability min(1, prod
    f(s)!/f'(s)!)."""
    if not moves:
        raise ValueError("empty move list")
    rng = state.rng
    m = moves[rng.randrange(len(moves))]
    eps = 1 if rng.random() < 0.5 else -1
    if mode == "symmetrized":
        perms = enumerate_sn(state.current.n)
        sigma = perms[rng.randrange(len(perms))]
        tau = perms[rng.randrange(len(perms))]
        m = apply_symmetry(sigma, tau, m)
    add, sub = (m.plus, m.minus) if eps == 1 else (m.minus, m.plus)
    counts = state.current.counts
    feasible = all(counts.get(p, 0) >= sum(1 for q in sub if q == p) for p in sub)
    if feasible:
        log_r = _log_acceptance(counts, add, sub)
        u = rng.random()
        if log_r >= 0 or u < math.exp(log_r):
            _try_shift(counts, add, sub)
    state.step_count += 1
    return state


def run_chain(
    f0: RankFunction, basis, config: ChainConfig
) -> list[tuple[RankFunction, dict[Partition, Fraction]]]:
    """Run the configured chain from f0, recording the current data and
    its projection lengths every steps_per_sample steps."""
    state = ChainState.start(f0, config.seed)
    if config.basis_mode == "symmetrized":
        pool = [m for m, _ in basis.classes]
    else:
        pool = sorted(basis.moves)
    if not pool:
        raise ValueError("basis has no moves")
    samples: list[tuple[RankFunction, dict[Partition, Fraction]]] = []

    def step() -> None:
        if config.target == "uniform":
            if config.basis_mode == "symmetrized":
                symmetrized_step(state, pool)
            else:
                walk_step(state, pool)
        else:
            metropolis_step(state, pool, mode=config.basis_mode)

    for _ in range(config.burn_in):
        step()
    for _ in range(config.num_samples):
        for _ in range(config.steps_per_sample):
            step()
        current = state.current.copy()
        if fourier_transform(current) != state.fixed_transform:
            raise AssertionError("transform not conserved")  # pragma: no cover
        samples.append((current, projection_lengths(current)))
    return samples


def mean_lengths(
    samples: list[tuple[RankFunction, dict[Partition, Fraction]]]
) -> dict[Partition, Fraction]:
    if not samples:
        raise ValueError("no samples")
    acc: dict[Partition, Fraction] = {}
    for _, lengths in samples:
        for lam, v in lengths.items():
            acc[lam] = acc.get(lam, Fraction(0)) + v
    return {lam: v / len(samples) for lam, v in acc.items()}


def bootstrap(f: RankFunction, seed: int | random.Random = 0) -> RankFunction:
    """Multinomial resample of total() votes with probabilities f/total."""
    total = f.total()
    if total == 0:
        raise ValueError("empty data")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    support = sorted(p for p, c in f.counts.items() if c)
    weights = [f.counts[p] for p in support]
    out: dict[Perm, int] = {}
    for p in rng.choices(support, weights=weights, k=total):
        out[p] = out.get(p, 0) + 1
    return RankFunction(f.n, out)


@dataclass
class ExponentialModel:
    """P(g) proportional to exp(<theta, rho(g)>), where <.,.> is the
    entrywise product with the permutation matrix of g: theta[i][j]
    weights item i+1 landing in position j+1.  The Fourier transform at
    the permutation representation is sufficient for theta."""

    n: int
    theta: list[list[float]]

    def __post_init__(self) -> None:
        if len(self.theta) != self.n or any(len(r) != self.n for r in self.theta):
            raise ValueError("theta must be n x n")

    def score(self, p: Perm) -> float:
        return sum(self.theta[item - 1][j] for j, item in enumerate(p))

    def log_partition(self) -> float:
        scores = [self.score(p) for p in enumerate_sn(self.n)]
        peak = max(scores)
        return peak + math.log(sum(math.exp(s - peak) for s in scores))


def model_log_density(m: ExponentialModel, p: Perm) -> float:
    return m.score(p) - m.log_partition()


def model_log_likelihood(m: ExponentialModel, f: RankFunction) -> float:
    return sum(c * model_log_density(m, p) for p, c in f.counts.items() if c)
