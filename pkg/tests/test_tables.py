"""Contingency-table construction, dof counting, merging, and sampling."""

from __future__ import annotations

import math

import numpy as np
import pytest

from depscore import (
    DofMode,
    dof,
    empirical_joint,
    from_counts,
    from_samples,
    make_prob_table,
    marginals,
    merge_states,
    sample_table,
    substream,
    uniform_prob,
)
from conftest import random_count_table


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_from_counts_total():
    t = from_counts([[2, 1], [1, 2]])
    assert t.n == 6 and t.card_a == 2 and t.card_b == 2


def test_from_counts_all_ones():
    assert from_counts(np.ones((4, 4), dtype=int)).n == 16


@pytest.mark.parametrize("bad", [
    [[0, 0], [0, 0]],          # all zero
    [[1, -1], [0, 2]],         # negative
    [[1, 2]],                  # 1 row
    [[1], [2]],                # 1 column
    [[1.5, 2.0], [1.0, 0.0]],  # non-integer
])
def test_from_counts_rejects(bad):
    with pytest.raises(ValueError):
        from_counts(bad)


def test_from_samples_counts():
    t = from_samples([(0, 0), (1, 1), (0, 0)], 2, 2)
    assert t.counts.tolist() == [[2, 0], [0, 1]]
    assert t.n == 3


def test_from_samples_empty_and_range():
    with pytest.raises(ValueError):
        from_samples([], 2, 2)
    with pytest.raises(ValueError):
        from_samples([(0, 2)], 2, 2)
    with pytest.raises(ValueError):
        from_samples([(-1, 0)], 2, 2)


def test_from_samples_length():
    pairs = [(i % 2, (i // 2) % 3) for i in range(1000)]
    assert from_samples(pairs, 2, 3).n == 1000


# ---------------------------------------------------------------------------
# empirical distribution and marginals
# ---------------------------------------------------------------------------

def test_empirical_joint_exact_fractions():
    p = empirical_joint(from_counts([[2, 1], [1, 2]]))
    assert p.probs.tolist() == [[2 / 6, 1 / 6], [1 / 6, 2 / 6]]
    p2 = empirical_joint(from_counts([[5, 0], [0, 5]]))
    assert p2.probs.tolist() == [[0.5, 0.0], [0.0, 0.5]]
    p3 = empirical_joint(from_counts(np.ones((4, 4), dtype=int)))
    assert np.all(p3.probs == 1 / 16)


def test_from_samples_then_empirical_is_exact():
    # relative frequencies come out as exact rationals on small cases
    pairs = [(0, 0)] * 3 + [(0, 1)] * 1 + [(1, 0)] * 2 + [(1, 1)] * 2
    p = empirical_joint(from_samples(pairs, 2, 2))
    assert p.probs.tolist() == [[3 / 8, 1 / 8], [2 / 8, 2 / 8]]


def test_marginals():
    ra, cb = marginals(empirical_joint(from_counts([[2, 1], [1, 2]])))
    assert ra.tolist() == [0.5, 0.5] and cb.tolist() == [0.5, 0.5]
    ra4, cb4 = marginals(uniform_prob(4, 4))
    assert np.allclose(ra4, 0.25) and np.allclose(cb4, 0.25)
    ra1, cb1 = marginals(make_prob_table([[1.0, 0.0], [0.0, 0.0]]))
    assert ra1.tolist() == [1.0, 0.0] and cb1.tolist() == [1.0, 0.0]


def test_make_prob_table_rejects():
    with pytest.raises(ValueError):
        make_prob_table([[0.5, 0.6], [0.2, 0.2]])
    with pytest.raises(ValueError):
        make_prob_table([[0.5, -0.1], [0.3, 0.3]])


# ---------------------------------------------------------------------------
# degrees of freedom
# ---------------------------------------------------------------------------

def test_dof_nominal_and_effective_full_table():
    t = from_counts(np.ones((4, 4), dtype=int))
    assert dof(t, DofMode.NOMINAL) == 9
    assert dof(t, DofMode.EFFECTIVE) == 9


def test_dof_effective_one_empty_cell():
    c = np.ones((4, 4), dtype=int)
    c[2, 3] = 0
    assert dof(from_counts(c), DofMode.EFFECTIVE) == 8


def test_dof_effective_empty_row_reduces_to_smaller_table():
    c = np.ones((4, 4), dtype=int)
    c[0, :] = 0
    # 12 occupied cells, 3 positive rows, 4 positive columns
    assert dof(from_counts(c), DofMode.EFFECTIVE) == (3 - 1) * (4 - 1)


def test_dof_effective_never_exceeds_nominal():
    gen = np.random.default_rng(11)
    for _ in range(300):
        t = random_count_table(gen, max_n=200)
        d_eff = dof(t, DofMode.EFFECTIVE)
        d_nom = dof(t, DofMode.NOMINAL)
        assert d_eff <= d_nom
        if np.all(t.counts > 0):
            assert d_eff == d_nom


# ---------------------------------------------------------------------------
# merging
# ---------------------------------------------------------------------------

def test_merge_states_block_sums():
    t = from_counts(np.arange(16).reshape(4, 4) + 1)
    m = merge_states(t, ((0, 1), (2, 3)), ((0, 1), (2, 3)))
    c = t.counts
    expect = [[int(c[:2, :2].sum()), int(c[:2, 2:].sum())],
              [int(c[2:, :2].sum()), int(c[2:, 2:].sum())]]
    assert m.counts.tolist() == expect
    assert m.n == t.n


def test_merge_states_identity_partition():
    t = from_counts([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    m = merge_states(t, ((0,), (1,), (2,)), ((0,), (1,), (2,)))
    assert m.counts.tolist() == t.counts.tolist()


def test_merge_states_rejects_bad_partitions():
    t = from_counts(np.ones((4, 4), dtype=int))
    with pytest.raises(ValueError):
        merge_states(t, ((0, 1, 2, 3),), ((0, 1), (2, 3)))       # single group
    with pytest.raises(ValueError):
        merge_states(t, ((0, 1), (1, 2, 3)), ((0, 1), (2, 3)))   # overlap
    with pytest.raises(ValueError):
        merge_states(t, ((0, 1), (2,)), ((0, 1), (2, 3)))        # gap


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sample_table_degenerate():
    p = make_prob_table([[1.0, 0.0], [0.0, 0.0]])
    t = sample_table(p, 10, substream(0, 0))
    assert t.counts.tolist() == [[10, 0], [0, 0]]


def test_sample_table_determinism():
    p = uniform_prob(3, 3)
    a = sample_table(p, 500, substream(5, 1))
    b = sample_table(p, 500, substream(5, 1))
    assert a.counts.tolist() == b.counts.tolist()


def test_sample_table_uniform_cells_within_5_sigma():
    n = 160_000
    t = sample_table(uniform_prob(4, 4), n, substream(123, 0))
    sigma = math.sqrt(n * (1 / 16) * (15 / 16))
    assert np.all(np.abs(t.counts - n / 16) <= 5.0 * sigma)
    assert t.n == n


def test_merge_commutes_with_sampling_in_mean():
    # merging the distribution then sampling vs sampling then merging:
    # per-block mean counts agree within 3 sigma over 1000 seeded replicates
    probs = make_prob_table(np.array([
        [0.10, 0.05, 0.05, 0.05],
        [0.05, 0.10, 0.05, 0.05],
        [0.02, 0.03, 0.10, 0.05],
        [0.03, 0.02, 0.05, 0.20],
    ]))
    parts = (((0, 1), (2, 3)), ((0, 1), (2, 3)))
    block = probs.probs.reshape(2, 2, 2, 2).sum(axis=(1, 3))
    merged_probs = make_prob_table(block)
    n, reps = 200, 1000
    acc_a = np.zeros((2, 2))
    acc_b = np.zeros((2, 2))
    for r in range(reps):
        acc_a += merge_states(sample_table(probs, n, substream(77, r)), *parts).counts
        acc_b += sample_table(merged_probs, n, substream(78, r)).counts
    mean_a, mean_b = acc_a / reps, acc_b / reps
    sigma = np.sqrt(n * block * (1 - block) / reps)
    assert np.all(np.abs(mean_a - n * block) <= 3.0 * sigma)
    assert np.all(np.abs(mean_b - n * block) <= 3.0 * sigma)
