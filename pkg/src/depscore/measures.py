"""Dependence measures and entropies over a contingency table.

All quantities share one natural-log scale, so twice the sample size times
the plug-in mutual information is the usual likelihood-ratio statistic that
is asymptotically chi-square under independence. Zero cells contribute zero
to every entropy/information sum (the x*log(x) -> 0 limit); no smoothing
happens here; smoothing is the job of :mod:`depscore.ess`.

The measures:

``mi_plugin``
    Plug-in mutual information of the empirical joint, in nats.
``mi_bias_corrected``
    Plug-in value minus its leading-order inflation d/(2N) under independence.
``independence_std``
    Standard deviation of the plug-in estimator under independence,
    sqrt(d) / (sqrt(2) * N).
``r_score``
    Z-score-like ratio: (plug-in - bias) / (null std), equal to
    (2N*mi - d) / sqrt(2d).
``standardized_information``
    sqrt(2N*mi) - sqrt(d); the same bias correction applied inside square
    roots. Measures weak dependence in multiples of the null standard
    deviation yet stays monotone in mi for strong dependence, so candidates
    with different numbers of states rank on a common scale. The Fisher
    variant subtracts sqrt(d - 1/2), which tracks the chi-square-to-normal
    transform more closely at small d.
``normalized_mi``
    Plug-in value over the mean of the marginal entropies; in [0, 1] and
    popular in practice, but its regularization does not shrink with N.
``p_value``
    Chi-square survival probability of 2N*mi at d degrees of freedom. The
    naive value is deliberately computed as 1 - CDF in double precision and
    rounds to exactly 0.0 once the true tail drops below ~1e-16; the log
    value is computed on the robust log path and stays finite and ordered.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import reg_gamma_upper
from .tables import CountTable, DofMode, dof, empirical_joint

__all__ = [
    "MeasureKind",
    "DependenceReport",
    "entropy",
    "mi_plugin",
    "mi_bias_corrected",
    "independence_std",
    "r_score",
    "standardized_information",
    "normalized_mi",
    "conditional_entropy",
    "p_value",
    "report",
]


class MeasureKind(enum.Enum):
    """Selectable dependence measures, each with a fixed orientation."""

    MI_PLUGIN = "mi_plugin"
    MI_BC = "mi_bc"
    SI = "si"
    SI_FISHER = "si_fisher"
    NI = "ni"
    P_VALUE = "p_value"

    @property
    def higher_is_more_dependent(self) -> bool:
        """Orientation flag: every measure except the p-value grows with dependence."""
        return self is not MeasureKind.P_VALUE

    @property
    def needs_dof(self) -> bool:
        return self in (MeasureKind.MI_BC, MeasureKind.SI, MeasureKind.SI_FISHER,
                        MeasureKind.P_VALUE)


@dataclass(frozen=True)
class DependenceReport:
    """Every measure for one variable pair, plus the dof and N they used.

    Invariants (by construction): ``si = sqrt(2*n*mi_plugin) - sqrt(dof)``
    and ``mi_bc = mi_plugin - dof/(2n)`` exactly; ``exp(log_p)`` matches
    ``p_naive`` up to the naive path's 1-minus-CDF rounding floor.
    """

    n: int
    dof: int
    mi_plugin: float
    mi_bc: float
    indep_std: float
    r_score: float
    si: float
    si_fisher: float
    ni: float
    p_naive: float
    log_p: float


def entropy(p) -> float:
    """Shannon entropy of a probability vector, in nats; 0*log(0) := 0."""
    v = np.asarray(p, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("entropy expects a nonempty 1-D probability vector")
    if np.any(v < 0.0) or not np.all(np.isfinite(v)):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(float(v.sum()) - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {v.sum()!r}")
    pos = v[v > 0.0]
    return float(max(-(pos * np.log(pos)).sum(), 0.0))


def mi_plugin(t: CountTable) -> float:
    """Plug-in mutual information of the empirical joint, in nats.

    Always >= 0 and <= min(log|A|, log|B|); cells with zero count
    contribute nothing.
    """
    c = t.counts
    n = float(t.n)
    ra = c.sum(axis=1, dtype=np.int64)
    cb = c.sum(axis=0, dtype=np.int64)
    mask = c > 0
    cf = c[mask].astype(float)
    # marginal products go through float64: N_a * N_b overflows int64 for N ~ 1e10+
    denom = (ra.astype(float)[:, None] * cb.astype(float)[None, :])[mask]
    ratio = (cf * n) / denom
    return float(max((cf / n * np.log(ratio)).sum(), 0.0))


def _require_dof(t: CountTable, mode: DofMode) -> int:
    d = dof(t, mode)
    if d <= 0:
        raise ValueError(f"operation requires dof > 0, table has {mode.value} dof 0")
    return d


def mi_bias_corrected(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> float:
    """Plug-in MI minus the leading-order independence bias d/(2N); may be negative."""
    return mi_plugin(t) - dof(t, mode) / (2.0 * t.n)


def independence_std(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> float:
    """Standard deviation of the plug-in MI under independence: sqrt(d)/(sqrt(2)*N)."""
    d = _require_dof(t, mode)
    return math.sqrt(d) / (math.sqrt(2.0) * t.n)


def r_score(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> float:
    """Bias-corrected MI in units of the null standard deviation: (2N*mi - d)/sqrt(2d)."""
    d = _require_dof(t, mode)
    return (2.0 * t.n * mi_plugin(t) - d) / math.sqrt(2.0 * d)


def standardized_information(
    t: CountTable,
    mode: DofMode = DofMode.EFFECTIVE,
    fisher_corrected: bool = False,
) -> float:
    """sqrt(2N*mi) - sqrt(d), or sqrt(2N*mi) - sqrt(d - 1/2) with the Fisher refinement.

    The plain variant is bounded below by -sqrt(d); the corrected variant
    requires d >= 1.
    """
    d = _require_dof(t, mode)
    root = math.sqrt(2.0 * t.n * mi_plugin(t))
    return root - math.sqrt(d - 0.5) if fisher_corrected else root - math.sqrt(d)


def normalized_mi(t: CountTable) -> float:
    """Plug-in MI over the mean marginal entropy; dimensionless in [0, 1]."""
    p = empirical_joint(t)
    ha = entropy(p.probs.sum(axis=1))
    hb = entropy(p.probs.sum(axis=0))
    if ha + hb <= 0.0:
        raise ValueError("normalized MI undefined: both marginal entropies are zero")
    return min(mi_plugin(t) / (0.5 * (ha + hb)), 1.0)


def conditional_entropy(t: CountTable, target: str = "a") -> float:
    """Empirical conditional entropy of one axis given the other, in nats.

    ``target='a'`` gives H(A | B) = H(A, B) - H(B); the identity
    H(A) - H(A | B) = mi_plugin(t) holds to roundoff.
    """
    if target not in ("a", "b"):
        raise ValueError(f"target must be 'a' or 'b', got {target!r}")
    p = empirical_joint(t)
    h_joint = entropy(p.probs.ravel())
    other = p.probs.sum(axis=0) if target == "a" else p.probs.sum(axis=1)
    return float(max(h_joint - entropy(other), 0.0))


def p_value(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> tuple[float, float]:
    """Chi-square survival probability of the statistic 2N*mi at d dof.

    Returns ``(p_naive, log_p)``. The naive value reproduces the classic
    instability: it is 1 minus the double-precision CDF, so it hits exactly
    0.0 once the tail is below machine epsilon near 1. ``log_p`` comes from
    the log-space upper incomplete gamma and remains finite and strictly
    ordered far beyond that point.
    """
    d = _require_dof(t, mode)
    stat = 2.0 * t.n * mi_plugin(t)
    q, log_q = reg_gamma_upper(d / 2.0, stat / 2.0)
    cdf = 1.0 - q           # double-precision CDF: rounds to 1.0 once q < ~1e-16
    p_naive = 1.0 - cdf
    return p_naive, log_q


def report(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> DependenceReport:
    """All measures for one table, populated consistently from one mi evaluation."""
    d = _require_dof(t, mode)
    n = t.n
    mi = mi_plugin(t)
    root = math.sqrt(2.0 * n * mi)
    p_naive, log_p = p_value(t, mode)
    return DependenceReport(
        n=n,
        dof=d,
        mi_plugin=mi,
        mi_bc=mi - d / (2.0 * n),
        indep_std=math.sqrt(d) / (math.sqrt(2.0) * n),
        r_score=(2.0 * n * mi - d) / math.sqrt(2.0 * d),
        si=root - math.sqrt(d),
        si_fisher=root - math.sqrt(d - 0.5),
        ni=normalized_mi(t),
        p_naive=p_naive,
        log_p=log_p,
    )
