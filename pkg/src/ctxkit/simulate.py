"""Monte Carlo simulation of the sequential-measurement protocol.

Each shot prepares the state, measures the term's observables one after
another (projection postulate: rho -> P rho P / p with P = (1 +- A)/2),
and records the product of the outcomes.  Outcome sampling compares one
uniform draw per measurement against the +1 branch probability.

Randomness is organized so results do not depend on evaluation order:
shot ``s`` of term ``t`` consumes exactly the draws of substream
(seed, lane 1, t, s), and a marginal-consistency check of a context uses
(seed, lane 2, digest(context labels), s), so measuring the same context
twice reproduces the same runs while distinct contexts get independent
ensembles.  Estimation batches shots by walking the branching tree of
post-measurement states, which reproduces the per-shot sequential draws
bit for bit (same uniforms, same comparisons) while computing each
distinct branch state only once.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .exceptions import IncompatibleContextError, NumericError
from .inequalities import InequalityExpr, Term
from .linalg import STRUCT_TOL, commutes
from .observables import ObservableSet
from .runtime import substream

PROTOCOL_LANE = 1
MARGINAL_LANE = 2
_P_FLOOR = 1e-12


@dataclass(frozen=True)
class MeasurementRecord:
    outcomes: tuple[tuple[str, int], ...]
    post_state: np.ndarray


@dataclass(frozen=True)
class TermEstimate:
    estimate: float
    standard_error: float
    shots: int


@dataclass(frozen=True)
class EstimateReport:
    inequality_id: str
    seed: int
    shots_per_term: int
    terms: tuple[TermEstimate, ...]
    lhs_estimate: float
    lhs_standard_error: float


@dataclass(frozen=True)
class MarginalReport:
    label: str
    shots: int
    freq_plus_first: float
    freq_plus_second: float
    z_statistic: float


def _compatible_operators(obs: ObservableSet, labels) -> list[np.ndarray]:
    ops = [obs.operator(label) for label in labels]
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            if not commutes(ops[i], ops[j], STRUCT_TOL):
                raise IncompatibleContextError(
                    f"labels {labels[i]} and {labels[j]} cannot be measured jointly"
                )
    return ops


def _check_rho(rho, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValueError(f"state has shape {rho.shape}, set dimension is {dim}")
    return rho


def sequential_measure(
    rho: np.ndarray, obs: ObservableSet, labels, rng: np.random.Generator
) -> MeasurementRecord:
    """One experimental run: measure the labels in order on one copy.

    The labels must be jointly measurable.  Returns the ordered outcomes
    and the final post-measurement state.
    """
    labels = tuple(labels)
    ops = _compatible_operators(obs, labels)
    state = _check_rho(rho, obs.dim)
    eye = np.eye(obs.dim, dtype=complex)
    outcomes = []
    for label, op in zip(labels, ops):
        plus = (eye + op) / 2.0
        p = float(np.real(np.trace(state @ plus)))
        p = min(max(p, 0.0), 1.0)
        if rng.random() < p:
            outcome, proj, prob = 1, plus, p
        else:
            outcome, proj, prob = -1, eye - plus, 1.0 - p
        if prob < _P_FLOOR:
            raise NumericError(
                f"sampled a measurement branch with probability {prob} for {label}"
            )
        state = proj @ state @ proj / prob
        outcomes.append((label, outcome))
    return MeasurementRecord(outcomes=tuple(outcomes), post_state=state)


def _branch_outcomes(rho: np.ndarray, ops: list[np.ndarray], uniforms: np.ndarray) -> np.ndarray:
    """Outcomes for a batch of shots sharing the same initial state.

    uniforms[s, i] is shot s's draw for measurement i.  Equivalent to
    running sequential_measure per shot with those draws: shots that have
    seen the same outcomes share a post-measurement state, so the state
    tree is walked once with index masks.
    """
    shots, depth = uniforms.shape
    outcomes = np.empty((shots, depth), dtype=np.int64)
    eye = np.eye(rho.shape[0], dtype=complex)

    def walk(state: np.ndarray, idx: np.ndarray, level: int) -> None:
        if level == depth:
            return
        plus = (eye + ops[level]) / 2.0
        p = float(np.real(np.trace(state @ plus)))
        p = min(max(p, 0.0), 1.0)
        took_plus = uniforms[idx, level] < p
        plus_idx = idx[took_plus]
        minus_idx = idx[~took_plus]
        outcomes[plus_idx, level] = 1
        outcomes[minus_idx, level] = -1
        if plus_idx.size:
            if p < _P_FLOOR:
                raise NumericError(f"sampled a measurement branch with probability {p}")
            walk(plus @ state @ plus / p, plus_idx, level + 1)
        if minus_idx.size:
            q = 1.0 - p
            if q < _P_FLOOR:
                raise NumericError(f"sampled a measurement branch with probability {q}")
            minus = eye - plus
            walk(minus @ state @ minus / q, minus_idx, level + 1)

    walk(rho, np.arange(shots), 0)
    return outcomes


def _shot_uniforms(seed: int, lane: int, index: int, shots: int, depth: int) -> np.ndarray:
    u = np.empty((shots, depth), dtype=float)
    for s in range(shots):
        u[s] = substream(seed, lane, index, subindex=s).random(depth)
    return u


def _context_stream_index(labels: tuple[str, ...]) -> int:
    """Stable 64-bit index for a context's substream, from its label list."""
    digest = hashlib.blake2b("\x1f".join(labels).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def estimate_term(
    rho: np.ndarray,
    obs: ObservableSet,
    term: Term,
    shots: int,
    seed: int,
    term_index: int = 0,
) -> TermEstimate:
    """Estimate sign * <product of outcomes> from ``shots`` preparations.

    Shot s draws from substream (seed, lane 1, term_index, s).  The
    standard error is the sample standard deviation over shots divided by
    sqrt(shots).
    """
    if shots < 2:
        raise ValueError(f"need at least 2 shots, got {shots}")
    state = _check_rho(rho, obs.dim)
    ops = _compatible_operators(obs, term.factors)
    if ops:
        uniforms = _shot_uniforms(seed, PROTOCOL_LANE, term_index, shots, len(ops))
        outcomes = _branch_outcomes(state, ops, uniforms)
        values = term.sign * outcomes.prod(axis=1).astype(float)
    else:
        values = np.full(shots, float(term.sign))
    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(shots))
    return TermEstimate(estimate=estimate, standard_error=stderr, shots=shots)


def run_protocol(
    rho: np.ndarray,
    obs: ObservableSet,
    expr: InequalityExpr,
    shots_per_term: int,
    seed: int,
) -> EstimateReport:
    """Estimate every term on an independent subensemble and sum.

    Term t uses substreams (seed, lane 1, t, shot), so the full report is
    a pure function of (state, expr, shots_per_term, seed).  The combined
    standard error is the root-sum-square of the per-term errors
    (independent subensembles).
    """
    estimates = [
        estimate_term(rho, obs, term, shots_per_term, seed, term_index=t)
        for t, term in enumerate(expr.terms)
    ]
    lhs = float(sum(e.estimate for e in estimates))
    lhs_err = float(np.sqrt(sum(e.standard_error**2 for e in estimates)))
    return EstimateReport(
        inequality_id=expr.id,
        seed=seed,
        shots_per_term=shots_per_term,
        terms=tuple(estimates),
        lhs_estimate=lhs,
        lhs_standard_error=lhs_err,
    )


def marginal_consistency(
    rho: np.ndarray,
    obs: ObservableSet,
    label: str,
    contexts,
    shots: int,
    seed: int,
) -> MarginalReport:
    """Compare one observable's outcome frequency across two contexts.

    Both contexts are measured in full, ``shots`` times each; a context's
    shots draw from substreams (seed, lane 2, digest(context), shot), so
    passing the same context twice reproduces identical frequencies while
    distinct contexts are measured on independent ensembles.  The report
    holds the +1 frequency of ``label`` in each context and a
    two-proportion z statistic; quantum mechanics predicts equal
    marginals, so |z| stays at noise level.
    """
    if shots < 2:
        raise ValueError(f"need at least 2 shots, got {shots}")
    first, second = (tuple(c) for c in contexts)
    state = _check_rho(rho, obs.dim)
    freqs = []
    for ctx in (first, second):
        if label not in ctx:
            raise ValueError(f"label {label} is not in context {ctx}")
        ops = _compatible_operators(obs, ctx)
        uniforms = _shot_uniforms(seed, MARGINAL_LANE, _context_stream_index(ctx), shots, len(ctx))
        outcomes = _branch_outcomes(state, ops, uniforms)
        col = ctx.index(label)
        freqs.append(float(np.mean(outcomes[:, col] == 1)))
    f1, f2 = freqs
    pooled = (f1 + f2) / 2.0
    spread = pooled * (1.0 - pooled)
    if spread == 0.0:
        z = 0.0
    else:
        z = (f1 - f2) / float(np.sqrt(spread * 2.0 / shots))
    return MarginalReport(
        label=label,
        shots=shots,
        freq_plus_first=f1,
        freq_plus_second=f2,
        z_statistic=float(z),
    )


def report_to_json(report: EstimateReport, state: str) -> dict:
    """The report's JSON form; ``state`` echoes the caller's state spec."""
    return {
        "inequality": report.inequality_id,
        "state": state,
        "seed": report.seed,
        "shots_per_term": report.shots_per_term,
        "terms": [
            {"estimate": t.estimate, "stderr": t.standard_error} for t in report.terms
        ],
        "lhs_estimate": report.lhs_estimate,
        "lhs_stderr": report.lhs_standard_error,
    }
