"""Quantum-side evaluation: expectation values, Bell operators,
state-independence certificates, extremal values, and Haar sweeps.

The Bell operator of an expression is sum(sign * ordered product of
factor operators).  For the state-independent inequalities it is a
multiple c of the identity, which is what ``certify_state_independence``
checks: constant = Tr(B)/d, residual = max |B - c*1|, certified when the
residual is within tolerance.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import IncompatibleContextError, NumericError
from .inequalities import InequalityExpr, Term
from .linalg import STRUCT_TOL, commutes, is_hermitian, product_trace
from .observables import ObservableSet
from .runtime import substream, worker_count
from .states import haar_random

MAX_EIG_DIM = 2**13
POWER_ITERATION_CAP = 100_000


def _term_operators(obs: ObservableSet, term: Term) -> list[np.ndarray]:
    ops = [obs.operator(f) for f in term.factors]
    for i, a in enumerate(term.factors):
        for j in range(i + 1, len(term.factors)):
            if not commutes(ops[i], ops[j], STRUCT_TOL):
                raise IncompatibleContextError(
                    f"term factors {a} and {term.factors[j]} do not commute"
                )
    return ops


def expectation_term(rho: np.ndarray, obs: ObservableSet, term: Term) -> float:
    """sign * <product of the term's factors> in state rho.

    The factors must pairwise commute (otherwise the average of products
    is ill-defined); an empty factor list gives the constant sign.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (obs.dim, obs.dim):
        raise ValueError(f"state has shape {rho.shape}, set dimension is {obs.dim}")
    ops = _term_operators(obs, term)
    val = product_trace(rho, ops)
    if abs(val.imag) > STRUCT_TOL:
        raise NumericError(f"expectation has imaginary part {val.imag}")
    return term.sign * val.real


def evaluate_inequality(rho: np.ndarray, obs: ObservableSet, expr: InequalityExpr) -> float:
    """Left-hand-side value of the expression in state rho."""
    return float(sum(expectation_term(rho, obs, t) for t in expr.terms))


def bell_operator(obs: ObservableSet, expr: InequalityExpr) -> np.ndarray:
    """sum(sign * ordered product of factor operators), Hermitian."""
    total = np.zeros((obs.dim, obs.dim), dtype=complex)
    eye = np.eye(obs.dim, dtype=complex)
    for term in expr.terms:
        ops = _term_operators(obs, term)
        prod = eye
        for op in ops:
            prod = prod @ op
        total += term.sign * prod
    if not is_hermitian(total, STRUCT_TOL):
        raise NumericError("Bell operator is not Hermitian within tolerance")
    return total


@dataclass(frozen=True)
class Certificate:
    is_state_independent: bool
    constant: float
    residual: float


def certify_state_independence(
    obs: ObservableSet, expr: InequalityExpr, tol: float = STRUCT_TOL
) -> Certificate:
    """Whether the Bell operator is a constant multiple of the identity.

    constant = Tr(B)/d; residual = max-magnitude entry of B - constant*1.
    A certified expression takes the value ``constant`` in every state.
    """
    bell = bell_operator(obs, expr)
    constant = float(np.trace(bell).real) / obs.dim
    residual = float(np.max(np.abs(bell - constant * np.eye(obs.dim))))
    return Certificate(
        is_state_independent=residual <= tol, constant=constant, residual=residual
    )


def context_product(obs: ObservableSet, context) -> int:
    """Sign s with product(context operators) = s*1 within 1e-9.

    Raises IncompatibleContextError for non-commuting labels and
    ValueError when the product is not proportional to the identity.
    """
    term = Term(1, tuple(context))
    ops = _term_operators(obs, term)
    prod = np.eye(obs.dim, dtype=complex)
    for op in ops:
        prod = prod @ op
    for s in (1, -1):
        if np.max(np.abs(prod - s * np.eye(obs.dim))) <= STRUCT_TOL:
            return s
    raise ValueError(f"product over context {tuple(context)} is not proportional to identity")


def _power_iteration(
    matrix: np.ndarray,
    start: np.ndarray,
    tol: float = STRUCT_TOL,
    max_iter: int = POWER_ITERATION_CAP,
) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and eigenvector of a Hermitian PSD-shifted matrix.

    The caller must shift so the target eigenvalue is dominant in
    magnitude; convergence is measured on the Rayleigh quotient.
    """
    vec = start / np.linalg.norm(start)
    value = float(np.real(vec.conj() @ matrix @ vec))
    for _ in range(max_iter):
        nxt = matrix @ vec
        norm = float(np.linalg.norm(nxt))
        if norm == 0.0:
            # Only possible when the shifted matrix annihilates vec; the
            # shift construction makes this unreachable for Hermitian input.
            raise NumericError("power iteration hit a zero vector")
        vec = nxt / norm
        new_value = float(np.real(vec.conj() @ matrix @ vec))
        if abs(new_value - value) <= tol * max(1.0, abs(new_value)):
            return new_value, vec
        value = new_value
    raise NumericError(f"power iteration did not converge in {max_iter} steps")


def max_quantum_value(
    obs: ObservableSet, expr: InequalityExpr, tol: float = STRUCT_TOL
) -> float:
    """Largest eigenvalue of the Bell operator (the maximal quantum value
    of the expression over all states), by shifted power iteration."""
    if obs.dim > MAX_EIG_DIM:
        raise ValueError(f"dimension {obs.dim} exceeds the eigenvalue cap {MAX_EIG_DIM}")
    bell = bell_operator(obs, expr)
    # Shift by the 1-norm so the top of the spectrum dominates in magnitude.
    shift = float(np.max(np.abs(bell).sum(axis=0)))
    shifted = bell + (shift + 1.0) * np.eye(obs.dim)
    rng = substream(0, 3, index=obs.dim)
    start = rng.standard_normal(obs.dim) + 1j * rng.standard_normal(obs.dim)
    value, _ = _power_iteration(shifted, start, tol=tol)
    return value - (shift + 1.0)


def haar_sweep(
    obs: ObservableSet, expr: InequalityExpr, count: int, seed: int
) -> np.ndarray:
    """Expression values over ``count`` seeded Haar-random pure states.

    State i comes from substream (seed, lane 0, i), so the result is
    independent of evaluation order and worker count.
    """
    if count < 1:
        raise ValueError(f"sweep needs at least one state, got {count}")

    def one(i: int) -> float:
        return evaluate_inequality(haar_random(obs.dim, seed, index=i), obs, expr)

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, range(count)))
    else:
        values = [one(i) for i in range(count)]
    return np.array(values)
