"""Equivalent sample size for smoothing multinomial parameter estimates.

Smoothed cell probabilities take the form

    p_tilde[a, b] = (N_ab + n' * q[a, b]) / (N + n'),

virtual counts n' spread over the cells according to a prior distribution q
(uniform unless there is background knowledge). The total virtual weight n'
is fixed by a moment-matching constraint: the q-smoothed expectation of the
empirical log-ratio field must equal the bias-adjusted information
``mi - d/N``. For a uniform prior the constraint's left side decreases
monotonically in n', so a bracketed bisection is guaranteed to find the
root; a first-order expansion around n' = 0 also gives the closed-form
approximation ``n' = d / (mi - <L>_q)``, which needs only the empirical
distribution and not N.

Empty cells would put a -inf into the log-ratio field, so the joint (and
only the joint) inside the log is floored at one count: max(N_ab, 1)/N.
The marginals stay exactly empirical. ``used_safe_joint`` on the results
records when that floor was active.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import mi_plugin
from .tables import CountTable, DofMode, ProbTable, dof, uniform_prob

__all__ = [
    "SmoothedParams",
    "EssResult",
    "NoRootError",
    "NonConvergenceError",
    "smoothed_params",
    "log_ratio_field",
    "constraint_lhs",
    "constraint_rhs",
    "solve_ess",
    "approx_ess",
]

_MAX_BRACKET = 2.0 ** 60
_MAX_BISECT = 400


class NoRootError(ValueError):
    """The constraint has no positive root (dependence too weak)."""


class NonConvergenceError(RuntimeError):
    """The solver hit its iteration or bracket cap without meeting tolerance."""


@dataclass(frozen=True)
class SmoothedParams:
    """Smoothed joint estimate (N_ab + n' q_ab)/(N + n') with its inputs."""

    probs: np.ndarray
    n_prime: float
    prior: ProbTable


@dataclass(frozen=True)
class EssResult:
    """Equivalent sample size from the exact constraint and the closed form.

    ``n_prime_exact`` solves the constraint to the requested residual
    tolerance; ``n_prime_approx`` is the first-order closed form; ``rhs`` is
    the constraint's right side mi - d/N; ``iterations`` counts bisection
    steps (bracket doubling included).
    """

    n_prime_exact: float
    n_prime_approx: float
    rhs: float
    used_safe_joint: bool
    iterations: int


def _check_prior(t: CountTable, q: ProbTable | None) -> ProbTable:
    if q is None:
        return uniform_prob(t.card_a, t.card_b)
    if q.probs.shape != t.counts.shape:
        raise ValueError(
            f"prior shape {q.probs.shape} does not match table shape {t.counts.shape}"
        )
    return q


def smoothed_params(t: CountTable, n_prime: float, q: ProbTable | None = None) -> SmoothedParams:
    """Smoothed cell probabilities; n' = 0 reproduces the empirical distribution."""
    n_prime = float(n_prime)
    if not n_prime >= 0.0:
        raise ValueError(f"n_prime must be >= 0, got {n_prime}")
    q = _check_prior(t, q)
    probs = (t.counts + n_prime * q.probs) / (t.n + n_prime)
    probs.setflags(write=False)
    return SmoothedParams(probs=probs, n_prime=n_prime, prior=q)


def log_ratio_field(t: CountTable) -> tuple[np.ndarray, bool]:
    """Cellwise log[ joint / (marginal * marginal) ] of the empirical distribution.

    Returns ``(field, used_safe_joint)``. If any cell is empty, the joint in
    the log argument is replaced by max(N_ab, 1)/N so the field stays finite;
    marginals are never modified. Raises if a whole row or column is empty
    (strip degenerate states first).
    """
    c = t.counts
    n = float(t.n)
    ra = c.sum(axis=1)
    cb = c.sum(axis=0)
    if np.any(ra == 0) or np.any(cb == 0):
        raise ValueError("table has an empty row or column; strip degenerate states first")
    used_safe = bool(np.any(c == 0))
    joint = np.maximum(c, 1) / n if used_safe else c / n
    marg = (ra.astype(float)[:, None] * cb.astype(float)[None, :]) / (n * n)
    field = np.log(joint / marg)
    field.setflags(write=False)
    return field, used_safe


def constraint_lhs(t: CountTable, n_prime: float, q: ProbTable | None = None) -> float:
    """Left side of the matching constraint: sum of p_tilde * log-ratio field."""
    q = _check_prior(t, q)
    field, _ = log_ratio_field(t)
    sp = smoothed_params(t, n_prime, q)
    return float((sp.probs * field).sum())


def constraint_rhs(t: CountTable, mode: DofMode = DofMode.EFFECTIVE) -> float:
    """Right side of the matching constraint: mi - d/N."""
    return mi_plugin(t) - dof(t, mode) / float(t.n)


def approx_ess(t: CountTable, q: ProbTable | None = None,
               mode: DofMode = DofMode.EFFECTIVE) -> float:
    """Closed-form equivalent sample size d / (mi - <L>_q).

    ``<L>_q`` is the prior expectation of the log-ratio field, which is
    non-positive for a uniform prior, so the result is positive whenever the
    table carries any information. Independent of N by construction.
    """
    q = _check_prior(t, q)
    field, _ = log_ratio_field(t)
    l_bar = float((q.probs * field).sum())
    denom = mi_plugin(t) - l_bar
    if denom <= 0.0:
        raise ValueError(f"approximation undefined: mi - <L>_q = {denom} is not positive")
    return dof(t, mode) / denom


def solve_ess(t: CountTable, q: ProbTable | None = None,
              mode: DofMode = DofMode.EFFECTIVE, tol: float = 1e-10) -> EssResult:
    """Equivalent sample size from the exact constraint, by bracketed bisection.

    The bracket [0, hi] doubles hi until the (monotone, for uniform q) left
    side falls below the right side, then bisects on n' until the constraint
    residual is within ``tol``. Raises :class:`NoRootError` when the right
    side already meets or exceeds the left side at n' = 0, and
    :class:`NonConvergenceError` if the bracket or iteration cap is hit.
    """
    if not float(tol) > 0.0:
        raise ValueError("tol must be positive")
    q = _check_prior(t, q)
    field, used_safe = log_ratio_field(t)
    counts = t.counts.astype(float)
    n = float(t.n)
    qf = q.probs

    def lhs(n_prime: float) -> float:
        return float((((counts + n_prime * qf) / (n + n_prime)) * field).sum())

    rhs = constraint_rhs(t, mode)
    iterations = 0
    lhs0 = lhs(0.0)
    if rhs >= lhs0:
        raise NoRootError(
            f"no positive root: rhs {rhs:.6g} >= lhs(0) {lhs0:.6g}; "
            "dependence too weak for a positive equivalent sample size"
        )
    # The left side is a weighted average of lhs(0) and <L>_q, so it can
    # never cross an rhs at or below the prior expectation of the field.
    l_bar = float((qf * field).sum())
    if rhs <= l_bar:
        raise NoRootError(
            f"no positive root: rhs {rhs:.6g} <= limiting value <L>_q {l_bar:.6g}"
        )
    hi = 1.0
    while lhs(hi) > rhs:
        hi *= 2.0
        iterations += 1
        if hi > _MAX_BRACKET:
            raise NonConvergenceError("bracket expansion exceeded 2^60 without a sign change")
    lo = 0.0
    root = hi
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        val = lhs(mid)
        iterations += 1
        if abs(val - rhs) <= tol:
            root = mid
            break
        if val > rhs:
            lo = mid
        else:
            hi = mid
    else:
        raise NonConvergenceError(
            f"bisection did not reach residual tolerance {tol} in {_MAX_BISECT} steps"
        )
    return EssResult(
        n_prime_exact=float(root),
        n_prime_approx=approx_ess(t, q, mode),
        rhs=rhs,
        used_safe_joint=used_safe,
        iterations=iterations,
    )
