"""Two-way contingency tables: construction, marginals, degrees of freedom,
state merging, and sampling.

States are dense 0-based integer indices; mapping from external labels is an
ingestion concern (see :mod:`depscore.cli`). Counts are 64-bit integers so
that ``2 * n * mi`` stays exact for totals up to ~1e12; probabilities are
double precision. Both table types are immutable after construction and safe
to share across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .numerics import RandomStream

__all__ = [
    "CountTable",
    "ProbTable",
    "DofMode",
    "from_counts",
    "from_samples",
    "empirical_joint",
    "make_prob_table",
    "uniform_prob",
    "marginals",
    "dof",
    "merge_states",
    "sample_table",
]


class DofMode(enum.Enum):
    """How degrees of freedom are counted.

    NOMINAL is the full-table count (|A|-1)(|B|-1). EFFECTIVE discounts
    unobserved cells: observed cells minus independently estimable marginal
    parameters, max(0, n_nonzero - rows_positive - cols_positive + 1), the
    standard quasi-independence count. The two agree when no cell is empty.
    """

    NOMINAL = "nominal"
    EFFECTIVE = "effective"


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CountTable:
    """|A| x |B| table of nonnegative integer counts."""

    counts: np.ndarray

    @property
    def card_a(self) -> int:
        return int(self.counts.shape[0])

    @property
    def card_b(self) -> int:
        return int(self.counts.shape[1])

    @property
    def n(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ProbTable:
    """Joint probability matrix over two discrete variables; entries sum to 1."""

    probs: np.ndarray

    @property
    def card_a(self) -> int:
        return int(self.probs.shape[0])

    @property
    def card_b(self) -> int:
        return int(self.probs.shape[1])


def from_counts(counts) -> CountTable:
    """Build a CountTable from a matrix of nonnegative integers.

    Rejects tables smaller than 2x2 (a one-state variable carries no
    dependence), negative entries, and all-zero tables.
    """
    a = np.asarray(counts)
    if a.ndim != 2:
        raise ValueError(f"counts must be a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise ValueError(f"both cardinalities must be >= 2, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        f = np.asarray(counts, dtype=float)
        if not np.all(np.isfinite(f)) or np.any(f != np.round(f)):
            raise ValueError("counts must be integers")
        a = f.astype(np.int64)
    if np.any(a < 0):
        raise ValueError("counts must be nonnegative")
    if not a.any():
        raise ValueError("table is all zero")
    return CountTable(_freeze(a.astype(np.int64)))


def from_samples(pairs, card_a: int, card_b: int) -> CountTable:
    """Count occurrences of (a, b) state pairs into a card_a x card_b table."""
    card_a, card_b = int(card_a), int(card_b)
    if card_a < 2 or card_b < 2:
        raise ValueError("both cardinalities must be >= 2")
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty sample produces an all-zero table")
    idx = np.asarray(pairs, dtype=np.int64)
    if idx.ndim != 2 or idx.shape[1] != 2:
        raise ValueError("pairs must be a sequence of (a, b) index pairs")
    if np.any(idx < 0) or np.any(idx[:, 0] >= card_a) or np.any(idx[:, 1] >= card_b):
        raise ValueError("state index out of range")
    flat = np.bincount(idx[:, 0] * card_b + idx[:, 1], minlength=card_a * card_b)
    return CountTable(_freeze(flat.reshape(card_a, card_b).astype(np.int64)))


def empirical_joint(t: CountTable) -> ProbTable:
    """Relative frequencies N_ab / N as a ProbTable."""
    return ProbTable(_freeze(t.counts / t.n))


def make_prob_table(probs) -> ProbTable:
    """Validate and wrap a probability matrix (entries >= 0, sum within 1e-12 of 1)."""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 2 or p.shape[0] < 2 or p.shape[1] < 2:
        raise ValueError(f"probability matrix must be at least 2x2, got shape {p.shape}")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(float(p.sum()) - 1.0) > 1e-12:
        raise ValueError(f"probabilities must sum to 1 within 1e-12, got {p.sum()!r}")
    return ProbTable(_freeze(p.copy()))


def uniform_prob(card_a: int, card_b: int) -> ProbTable:
    """Uniform joint distribution on a card_a x card_b grid."""
    return make_prob_table(np.full((card_a, card_b), 1.0 / (card_a * card_b)))


def marginals(p: ProbTable) -> tuple[np.ndarray, np.ndarray]:
    """Row and column marginal vectors of a ProbTable."""
    return p.probs.sum(axis=1), p.probs.sum(axis=0)


def dof(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> int:
    """Degrees of freedom of the independence test on this table."""
    if mode is DofMode.NOMINAL:
        return (t.card_a - 1) * (t.card_b - 1)
    if mode is DofMode.EFFECTIVE:
        c = t.counts
        n_nz = int((c > 0).sum())
        r_pos = int((c.sum(axis=1) > 0).sum())
        c_pos = int((c.sum(axis=0) > 0).sum())
        return max(0, n_nz - r_pos - c_pos + 1)
    raise ValueError(f"unknown dof mode {mode!r}")


def _check_partition(part, card: int) -> list[list[int]]:
    groups = [list(g) for g in part]
    if len(groups) < 2:
        raise ValueError("a partition must have at least 2 groups")
    seen = sorted(s for g in groups for s in g)
    if seen != list(range(card)):
        raise ValueError(f"partition must cover every state of 0..{card - 1} exactly once")
    return groups


def merge_states(t: CountTable, part_a, part_b) -> CountTable:
    """Merge states by summing cells within partition groups; the total is unchanged."""
    ga = _check_partition(part_a, t.card_a)
    gb = _check_partition(part_b, t.card_b)
    out = np.zeros((len(ga), len(gb)), dtype=np.int64)
    for i, rows in enumerate(ga):
        for j, cols in enumerate(gb):
            out[i, j] = t.counts[np.ix_(rows, cols)].sum()
    return CountTable(_freeze(out))


def sample_table(p: ProbTable, n: int, stream: RandomStream) -> CountTable:
    """n i.i.d. draws from the joint p, accumulated into counts."""
    if int(n) < 1:
        raise ValueError("n must be >= 1")
    flat = stream.generator.multinomial(int(n), p.probs.ravel())
    return CountTable(_freeze(flat.reshape(p.probs.shape).astype(np.int64)))
