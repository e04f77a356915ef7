"""Acceptance gate: one test per published-result criterion.

Each test records a PASS/FAIL line that pytest prints in the terminal
summary (see conftest.pytest_terminal_summary).  Two additional tests
are strict xfails: they assert literal printed values that the source
tables themselves get wrong (internally inconsistent entries, documented
in the project notes); the verified corrected claims live in the main
criterion tests.
"""

import math
import random
import time
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from rankbasis.basis import (
    agreement_matrix,
    compute_markov_basis,
    d2_count,
    derangement_graph,
    enumerate_fiber,
    enumerate_square_orbits,
    is_connected,
    verify_basis,
)
from rankbasis.chains import (
    ChainConfig,
    ChainState,
    bootstrap,
    mean_lengths,
    metropolis_step,
    run_chain,
    walk_step,
)
from rankbasis.perms import enumerate_sn, partitions_of
from rankbasis.spectral import (
    RankFunction,
    first_order_summary,
    projection_lengths,
    round_half_away,
    second_order_summary,
)
from rankbasis.tableaux import (
    birkhoff_decompose,
    make_tableau,
    norm_squared,
    tableau_sum,
)

from conftest import ACCEPTANCE_RESULTS

S5_PARTITIONS = [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1),
                 (1, 1, 1, 1, 1)]


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    num, label = marker.args
    outcome = {"passed": False}
    yield outcome
    ACCEPTANCE_RESULTS.append((num, label, outcome["passed"]))


# --- 1: first-order summary ---------------------------------------------

FIRST_ORDER_EXPECTED = (
    (18.3, 26.4, 22.8, 17.4, 14.8),
    (13.5, 18.7, 24.6, 24.6, 18.3),
    (28.0, 16.7, 13.8, 18.2, 23.1),
    (20.4, 16.9, 18.9, 20.2, 23.3),
    (19.6, 21.0, 19.6, 19.2, 20.3),
)


@pytest.mark.criterion("1", "first-order summary matches all 25 entries")
def test_criterion_1_first_order(apa, criterion):
    t0 = time.time()
    got = first_order_summary(apa)
    for grow, erow in zip(got, FIRST_ORDER_EXPECTED):
        for g, e in zip(grow, erow):
            assert abs(g - e) <= 0.05, (grow, erow)
    assert time.time() - t0 < 1.0
    criterion["passed"] = True


# --- 2: projection lengths -----------------------------------------------


@pytest.mark.criterion("2", "projection lengths round to published values")
def test_criterion_2_lengths(apa, criterion):
    t0 = time.time()
    lengths = projection_lengths(apa)
    rounded = [round_half_away(lengths[lam]) for lam in S5_PARTITIONS]
    assert rounded == [2286, 298, 459, 78, 27, 7, 0]
    assert time.time() - t0 < 5.0
    criterion["passed"] = True


# --- 3: second-order summary ----------------------------------------------

# The printed pair-incidence table, with three corrections whose evidence
# is the exact zero row/column-sum invariant of the projection (the
# printed rows violate it; see the project notes): entry ({2,3},{2,5})
# is 28, not 82 (digit transposition), and row {2,4} has its {1,5} and
# {2,3} entries swapped (-93 and -25).
SECOND_ORDER_PRINTED = (
    (-137, -20, 18, 140, 111, 22, 4, 6, -97, -46),
    (476, -88, -179, -209, -147, -169, -160, 107, 128, 241),
    (-189, 51, 113, 24, -9, 98, 99, -65, 23, -146),
    (-150, 57, 47, 45, 43, 49, 56, -48, -53, -48),
    (-42, 84, 19, -61, 30, -16, 82, -76, -39, 72),
    (157, -20, -43, -25, -93, -76, -56, 8, 38, 112),
    (22, -44, 7, 15, -117, 69, 25, 62, 99, -138),
    (-265, -7, 72, 199, 39, 140, 85, 19, -52, -233),
    (-169, 10, 88, 70, 78, 44, 47, -51, -36, -80),
    (296, -24, -142, -130, -5, -163, -128, 38, -9, 267),
)


def _corrected_second_order():
    rows = [list(r) for r in SECOND_ORDER_PRINTED]
    rows[4][6] = 28  # ({2,3},{2,5}): 82 is a digit transposition
    rows[5][3], rows[5][4] = rows[5][4], rows[5][3]  # row {2,4} swap
    return rows


@pytest.mark.criterion("3", "second-order matrix within +-1, max 476")
def test_criterion_3_second_order(apa, criterion):
    t0 = time.time()
    got = second_order_summary(apa)
    expected = _corrected_second_order()
    for grow, erow in zip(got, expected):
        for g, e in zip(grow, erow):
            assert abs(g - e) <= 1, (grow, erow)
    flat = [(v, r, c) for r, row in enumerate(got) for c, v in enumerate(row)]
    assert max(flat) == (476, 1, 0)  # ({1,3},{1,2})
    assert time.time() - t0 < 5.0
    criterion["passed"] = True


@pytest.mark.xfail(
    strict=True,
    reason="three printed entries violate the exact zero row/column-sum "
    "invariant of the projection; corrected values are asserted in "
    "test_criterion_3_second_order",
)
@pytest.mark.criterion("3x", "second-order matrix as literally printed")
def test_criterion_3_literal_table(apa, criterion):
    got = second_order_summary(apa)
    for grow, erow in zip(got, SECOND_ORDER_PRINTED):
        for g, e in zip(grow, erow):
            assert abs(g - e) <= 1
    criterion["passed"] = True


# --- 4: exact bases for n = 3, 4 -------------------------------------------


@pytest.mark.criterion("4", "n=3 and n=4 bases have exact published counts")
def test_criterion_4_small_bases(s4_basis, criterion):
    b3 = compute_markov_basis(3)
    assert len(b3.moves) == 1 and len(b3.classes) == 1
    assert s4_basis.degree_counts() == {2: 18, 3: 160}
    assert s4_basis.class_degree_counts() == {2: 1, 3: 2}
    ok, _ = verify_basis(s4_basis, 4, 4)
    assert ok  # nothing new needed at degree 4
    criterion["passed"] = True


# --- 5: the S_5 basis -------------------------------------------------------


@pytest.mark.slow
@pytest.mark.criterion("5", "S_5 basis: degree-2 1050/2 classes, connectivity "
                       "through degree 4, no degree-4 generators")
def test_criterion_5_s5_basis(s5_basis, criterion):
    counts = s5_basis.degree_counts()
    assert counts[2] == 1050
    assert 4 not in counts  # no degree-4 generators needed (degree bound)
    deg2 = s5_basis.classes_of_degree(2)
    assert len(deg2) == 2
    assert sorted(size for _, size in deg2) == [450, 600]
    # every class orbit size divides |S_5 x S_5| and the sizes add up
    for _, size in s5_basis.classes:
        assert (math.factorial(5) ** 2) % size == 0
    assert sum(size for _, size in s5_basis.classes) == len(s5_basis.moves)
    ok, witness = verify_basis(s5_basis, 5, 4)
    assert ok, f"disconnected fiber at {witness}"
    criterion["passed"] = True


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="the published class table is internally inconsistent: its 14 "
    "printed moves span only 13 distinct symmetry classes (rows 11 and 13 "
    "share an orbit) and 5 of its printed sizes are not orbit sizes; the "
    "verified claims are in test_criterion_5_s5_basis",
)
@pytest.mark.criterion("5x", "S_5 basis: 14 classes with printed orbit sizes")
def test_criterion_5_literal_class_table(s5_basis, criterion):
    assert len(s5_basis.classes) == 14
    printed = sorted(
        [450, 600, 200, 3600, 3600, 600, 3600, 600, 600, 7200, 3600, 7200,
         3600, 1440]
    )
    assert sorted(size for _, size in s5_basis.classes) == printed
    criterion["passed"] = True


# --- 6: D_2 ------------------------------------------------------------------


@pytest.mark.criterion("6", "degree-2 class counts D_2(n)")
def test_criterion_6_d2(criterion):
    t0 = time.time()
    assert [d2_count(n) for n in (3, 4, 5, 6)] == [0, 1, 2, 7]
    assert d2_count(9) == 47
    assert time.time() - t0 < 1.0
    criterion["passed"] = True


# --- 7: derangement graph ----------------------------------------------------


@pytest.mark.criterion("7", "derangement graph connectivity by degree")
def test_criterion_7_derangement_graph(criterion):
    t0 = time.time()
    assert not is_connected(derangement_graph(3))
    for n in (4, 5, 6):
        assert is_connected(derangement_graph(n))
    assert time.time() - t0 < 60.0
    criterion["passed"] = True


# --- 8: agreement matrix ------------------------------------------------------


@pytest.mark.criterion("8", "agreement-matrix identity on 1000 fiber pairs")
def test_criterion_8_agreement(criterion):
    t0 = time.time()
    rng = random.Random(2024)
    for n in (4, 5):
        perms = enumerate_sn(n)
        for _ in range(500):
            deg = rng.randint(2, 4)
            t = make_tableau(rng.choice(perms) for _ in range(deg))
            b = tableau_sum(t)
            other = birkhoff_decompose(b)
            m = agreement_matrix(t, other)
            assert sum(sum(row) for row in m) == norm_squared(b)
    assert time.time() - t0 < 60.0
    criterion["passed"] = True


# --- 9 and 10: MCMC calibration ------------------------------------------------


@pytest.mark.slow
@pytest.mark.criterion("9", "hypergeometric chain calibration")
def test_criterion_9_hypergeometric(apa, s5_basis, criterion):
    data_lengths = projection_lengths(apa)
    cfg = ChainConfig(target="hypergeometric", seed=1)
    samples = run_chain(apa, s5_basis, cfg)
    assert len(samples) == 100
    for _, lengths in samples:
        # exact conservation of the first-order information
        assert lengths[(5,)] == data_lengths[(5,)]
        assert lengths[(4, 1)] == data_lengths[(4, 1)]
    assert round_half_away(data_lengths[(5,)]) == 2286
    assert round_half_away(data_lengths[(4, 1)]) == 298
    means = mean_lengths(samples)
    assert 10 <= means[(3, 2)] <= 25
    assert 12 <= means[(3, 1, 1)] <= 30
    criterion["passed"] = True


@pytest.mark.slow
@pytest.mark.criterion("10", "uniform chain calibration")
def test_criterion_10_uniform(apa, s5_basis, criterion):
    cfg = ChainConfig(target="uniform", seed=1)
    means = mean_lengths(run_chain(apa, s5_basis, cfg))
    assert 420 <= means[(3, 2)] <= 610
    assert 200 <= means[(2, 1, 1, 1)] <= 400
    criterion["passed"] = True


# --- 11: bootstrap --------------------------------------------------------------

BOOTSTRAP_PRINTED = {
    (4, 1): 303,
    (3, 2): 469,
    (3, 1, 1): 93,
    (2, 2, 1): 37,
    (2, 1, 1, 1): 13,
    (1, 1, 1, 1, 1): 1,
}


def _bootstrap_means(apa, replicates=100, seed=0):
    rng = random.Random(seed)
    acc = {lam: Fraction(0) for lam in S5_PARTITIONS}
    for _ in range(replicates):
        lengths = projection_lengths(bootstrap(apa, rng))
        for lam in S5_PARTITIONS:
            acc[lam] += lengths[lam]
    return {lam: acc[lam] / replicates for lam in S5_PARTITIONS}


@pytest.mark.criterion("11", "bootstrap means reproduce the published row")
def test_criterion_11_bootstrap(apa, criterion):
    t0 = time.time()
    means = _bootstrap_means(apa)
    # the five components large enough for a relative tolerance
    for lam, printed in BOOTSTRAP_PRINTED.items():
        if lam == (1, 1, 1, 1, 1):
            continue
        assert abs(float(means[lam]) - printed) <= 0.2 * printed, (lam, means)
    # the sign component's printed 1 is a rounded ~0.6; assert the
    # rounding reproduces rather than a 20% band around the rounding
    assert round_half_away(means[(1, 1, 1, 1, 1)]) == 1
    assert time.time() - t0 < 120.0
    criterion["passed"] = True


@pytest.mark.xfail(
    strict=True,
    reason="the sign component's true bootstrap mean is ~0.59 across seeds; "
    "the printed 1 is its rounding, so a 20% band around the printed "
    "integer is unattainable (see project notes)",
)
@pytest.mark.criterion("11x", "bootstrap within 20% on all six components")
def test_criterion_11_literal_tolerance(apa, criterion):
    means = _bootstrap_means(apa)
    for lam, printed in BOOTSTRAP_PRINTED.items():
        assert abs(float(means[lam]) - printed) <= 0.2 * printed
    criterion["passed"] = True


# --- 12: exact two-state chain ---------------------------------------------------


@pytest.mark.criterion("12", "two-state S_3 fiber chain matches exact weights")
def test_criterion_12_two_state_chain(criterion):
    f0 = RankFunction(3, {p: 1 for p in ((1, 2, 3), (2, 3, 1), (3, 1, 2))})
    moves = sorted(compute_markov_basis(3).moves)
    steps = 10**5
    sigma3 = 3 * math.sqrt(steps * 0.25)

    def occupancy(stepper, seed):
        state = ChainState.start(f0, seed)
        in_first = 0
        for _ in range(steps):
            stepper(state, moves)
            in_first += (1, 2, 3) in state.current.counts and state.current.counts[
                (1, 2, 3)
            ] > 0
        assert state.check_conservation()
        return in_first

    # uniform walk: exactly two states, each with weight 1/2
    assert abs(occupancy(walk_step, 7) - steps / 2) <= sigma3
    # Metropolis: both states have all counts 1, so the hypergeometric
    # weights 1/prod f! are equal and the chain is uniform as well
    assert abs(occupancy(metropolis_step, 8) - steps / 2) <= sigma3
    criterion["passed"] = True


# --- 13: oracle equivalence on every small fiber ----------------------------------


@pytest.mark.criterion("13", "DFS fiber enumeration matches naive filtering")
def test_criterion_13_fiber_oracle(criterion):
    for n in (2, 3, 4):
        perms = enumerate_sn(n)
        for s in range(1, 5):
            # one pass over all multisets gives the naive fiber of every
            # magic square of this line sum at once
            by_square = {}
            for rows in combinations_with_replacement(perms, s):
                by_square.setdefault(tableau_sum(rows), []).append(rows)
            for b, naive in by_square.items():
                assert enumerate_fiber(b) == sorted(naive), b
    criterion["passed"] = True


# --- 14: n = 6 orbit counts --------------------------------------------------------


@pytest.mark.slow
@pytest.mark.criterion("14", "n=6 magic-square orbit counts")
def test_criterion_14_s6_orbits(criterion):
    assert len(enumerate_square_orbits(6, 2)) == 11
    assert len(enumerate_square_orbits(6, 3)) == 103
    criterion["passed"] = True
