"""Score, rank, threshold, and select among candidate variable pairs.

Candidates are ranked on an orientation-normalized key: higher key means
more dependent for every measure, with p-value candidates keyed on the
negated log survival probability so the ordering survives far past the
point where the naive p-value rounds to zero. Exact key ties break toward
the candidate with fewer degrees of freedom (the simpler hypothesis), then
lexicographically by id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import measures
from .measures import MeasureKind
from .numerics import inv_std_normal_cdf, reg_gamma_upper
from .tables import CountTable, DofMode, dof, empirical_joint, merge_states

__all__ = [
    "ScoredCandidate",
    "Ranking",
    "score_candidates",
    "rank",
    "si_threshold",
    "is_notable",
    "compare_discretizations",
    "select_best_feature",
]

TIE_POLICY = "key descending; ties: smaller dof first, then lexicographic id"

# A refinement must claim at least this share of the mean marginal entropy
# before the normalized-MI rule accepts the finer discretization. The share
# is deliberately independent of N: normalized MI carries no sample-size-
# dependent regularization, and this rule inherits exactly that property.
NI_REFINEMENT_SHARE = 1.0 / 3.0


@dataclass(frozen=True)
class ScoredCandidate:
    """One candidate with its raw score and orientation-normalized key."""

    id: str
    score: float
    key: float
    dof: int
    n: int


@dataclass(frozen=True)
class Ranking:
    """Candidates in non-increasing key order, with the tie policy recorded."""

    candidates: tuple[ScoredCandidate, ...]
    tie_policy: str = TIE_POLICY


def _score_one(cid: str, t: CountTable, kind: MeasureKind, mode: DofMode) -> ScoredCandidate:
    d = dof(t, mode)
    if kind is MeasureKind.MI_PLUGIN:
        score = measures.mi_plugin(t)
        key = score
    elif kind is MeasureKind.NI:
        score = measures.normalized_mi(t)
        key = score
    elif kind is MeasureKind.MI_BC:
        score = measures.mi_bias_corrected(t, mode)
        key = score
    elif kind is MeasureKind.SI:
        score = measures.standardized_information(t, mode)
        key = score
    elif kind is MeasureKind.SI_FISHER:
        score = measures.standardized_information(t, mode, fisher_corrected=True)
        key = score
    elif kind is MeasureKind.P_VALUE:
        p_naive, log_p = measures.p_value(t, mode)
        score = p_naive
        key = -log_p
    else:  # pragma: no cover
        raise ValueError(f"unknown measure kind {kind!r}")
    return ScoredCandidate(id=str(cid), score=float(score), key=float(key), dof=d, n=t.n)


def score_candidates(tables, kind: MeasureKind,
                     mode: DofMode = DofMode.EFFECTIVE) -> list[ScoredCandidate]:
    """Score each (id, CountTable) candidate under one measure.

    A failure on one candidate (e.g. zero effective dof for a dof-based
    measure) is re-raised with that candidate's id attached.
    """
    out = []
    for cid, t in tables:
        try:
            out.append(_score_one(cid, t, kind, mode))
        except ValueError as exc:
            raise ValueError(f"candidate {cid!r}: {exc}") from exc
    return out


def rank(candidates) -> Ranking:
    """Stable ordering by key descending with the documented tie break."""
    ordered = sorted(candidates, key=lambda c: (-c.key, c.dof, c.id))
    return Ranking(candidates=tuple(ordered))


def si_threshold(alpha: float) -> float:
    """Notability threshold c with Phi(sqrt(2) c) = 1 - alpha."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return inv_std_normal_cdf(1.0 - alpha) / math.sqrt(2.0)


def is_notable(si: float, alpha: float) -> bool:
    """Whether a standardized-information value clears the alpha threshold."""
    return float(si) > si_threshold(alpha)


def select_best_feature(tables, kind: MeasureKind,
                        mode: DofMode = DofMode.EFFECTIVE) -> str:
    """Id of the top-ranked candidate (plain argmax with the rank tie policy)."""
    scored = score_candidates(tables, kind, mode)
    if not scored:
        raise ValueError("no candidates supplied")
    return rank(scored).candidates[0].id


def compare_discretizations(t_fine: CountTable, partitions, kind: MeasureKind,
                            mode: DofMode = DofMode.EFFECTIVE,
                            alpha: float = 0.05) -> str:
    """Decide between a table's own resolution and a coarser merging.

    Returns ``"fine"`` or ``"coarse"``. The merged table is nested inside the
    fine one, so the comparison puts the *increment* (the information the
    finer states add beyond the coarse dependence, with the corresponding
    extra degrees of freedom) on the measure's own scale:

    - ``mi_plugin``: any increment at all favors fine (no regularization).
    - ``mi_bc``: increment must exceed its bias d_extra / (2N).
    - ``si`` / ``si_fisher``: the standardized increment must clear the
      notability threshold for ``alpha``.
    - ``p_value``: the increment's chi-square survival (robust log path)
      must fall below ``alpha``.
    - ``ni``: the increment's share of the mean marginal entropy must exceed
      the fixed ``NI_REFINEMENT_SHARE`` (a sample-size-independent rule, in
      keeping with how normalized MI regularizes).

    Exact ties and degenerate cases (no extra estimable structure) go to
    coarse, the simpler hypothesis.
    """
    part_a, part_b = partitions
    t_coarse = merge_states(t_fine, part_a, part_b)
    n = t_fine.n
    i_fine = measures.mi_plugin(t_fine)
    i_coarse = measures.mi_plugin(t_coarse)
    i_within = max(i_fine - i_coarse, 0.0)
    d_within = dof(t_fine, mode) - dof(t_coarse, mode)

    if kind is MeasureKind.MI_PLUGIN:
        return "fine" if i_within > 0.0 else "coarse"
    if kind is MeasureKind.NI:
        p = empirical_joint(t_fine)
        h_bar = 0.5 * (measures.entropy(p.probs.sum(axis=1))
                       + measures.entropy(p.probs.sum(axis=0)))
        if h_bar <= 0.0:
            return "coarse"
        return "fine" if i_within / h_bar > NI_REFINEMENT_SHARE else "coarse"
    if d_within < 1:
        return "coarse"
    if kind is MeasureKind.MI_BC:
        return "fine" if i_within - d_within / (2.0 * n) > 0.0 else "coarse"
    if kind is MeasureKind.SI:
        si = math.sqrt(2.0 * n * i_within) - math.sqrt(d_within)
        return "fine" if si > si_threshold(alpha) else "coarse"
    if kind is MeasureKind.SI_FISHER:
        si = math.sqrt(2.0 * n * i_within) - math.sqrt(d_within - 0.5)
        return "fine" if si > si_threshold(alpha) else "coarse"
    if kind is MeasureKind.P_VALUE:
        _, log_q = reg_gamma_upper(d_within / 2.0, n * i_within)
        return "fine" if log_q < math.log(alpha) else "coarse"
    raise ValueError(f"unknown measure kind {kind!r}")  # pragma: no cover
