"""The three dichotomic-observable families and their compatibility structure.

Three families are built here:

* an 18-ray set in dimension 4: nine complete orthogonal bases (contexts)
  of four rays each, every ray shared by exactly two bases; the observable
  for ray v is 2|v><v| - 1, so each context's product is -1,
* the two-qubit Peres-Mermin square: nine observables P_ij arranged in
  three rows and three columns, compatible when they share a subindex,
* the n-qubit star family (n odd, >= 3): four collective observables
  ACAL1..ACAL4 plus single-site B_i = Z_i and C_i = X_i, grouped into
  four mixed contexts and one all-ACAL context.

Label convention for the 18-ray set: "Aij" names the ray shared by
contexts i and j (1-based, in the order of ``KS18_CONTEXTS``).

Rays are stored with exact integer coordinates and normalized only when
projectors are built, so orthogonality checks are exact.  Builders
self-validate the structural invariants (orthogonality, incidence,
involutions, context-wise commutation) and fail hard on violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import ResourceLimitError, UnknownLabelError
from .linalg import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    STRUCT_TOL,
    commutes,
    is_involution,
    kron_all,
)

KS18_RAYS: dict[str, tuple[int, int, int, int]] = {
    "A12": (0, 1, 0, 0),
    "A16": (1, 0, 1, 0),
    "A17": (1, 0, -1, 0),
    "A18": (0, 0, 0, 1),
    "A23": (1, 0, 0, -1),
    "A28": (0, 0, 1, 0),
    "A29": (1, 0, 0, 1),
    "A34": (1, -1, -1, 1),
    "A37": (1, 1, 1, 1),
    "A39": (0, 1, -1, 0),
    "A45": (0, 0, 1, 1),
    "A47": (1, -1, 1, -1),
    "A48": (1, 1, 0, 0),
    "A56": (1, 1, -1, 1),
    "A58": (1, -1, 0, 0),
    "A59": (1, 1, 1, -1),
    "A67": (0, 1, 0, -1),
    "A69": (-1, 1, 1, 1),
}

KS18_CONTEXTS: tuple[tuple[str, ...], ...] = (
    ("A12", "A16", "A17", "A18"),
    ("A12", "A23", "A28", "A29"),
    ("A23", "A34", "A37", "A39"),
    ("A34", "A45", "A47", "A48"),
    ("A45", "A56", "A58", "A59"),
    ("A16", "A56", "A67", "A69"),
    ("A17", "A37", "A47", "A67"),
    ("A18", "A28", "A48", "A58"),
    ("A29", "A39", "A59", "A69"),
)

MERMIN_STAR_MAX_QUBITS = 13


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class RaySet:
    """A family of rays grouped into contexts of mutually orthogonal rays."""

    rays: Mapping[str, np.ndarray]
    contexts: tuple[tuple[str, ...], ...]

    def ray(self, label: str) -> np.ndarray:
        try:
            return self.rays[label]
        except KeyError:
            raise UnknownLabelError(label) from None


@dataclass(frozen=True)
class ObservableSet:
    """A labeled family of +-1-valued observables with listed contexts.

    Two observables are jointly measurable exactly when their operators
    commute; the contexts enumerate the maximal groups used by the
    catalog's inequalities.
    """

    set_id: str
    dim: int
    observables: Mapping[str, np.ndarray] = field(repr=False)
    contexts: tuple[tuple[str, ...], ...]

    def operator(self, label: str) -> np.ndarray:
        try:
            return self.observables[label]
        except KeyError:
            raise UnknownLabelError(label) from None

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.observables)


def _validate_set(obs: ObservableSet) -> None:
    for label, op in obs.observables.items():
        if op.shape != (obs.dim, obs.dim):
            raise RuntimeError(f"{obs.set_id}: {label} has shape {op.shape}")
        if not is_involution(op, STRUCT_TOL):
            raise RuntimeError(f"{obs.set_id}: {label} is not a +-1 observable")
    for ctx in obs.contexts:
        for i, a in enumerate(ctx):
            for b in ctx[i + 1:]:
                if not commutes(obs.observables[a], obs.observables[b], STRUCT_TOL):
                    raise RuntimeError(
                        f"{obs.set_id}: context {ctx} contains non-commuting pair ({a}, {b})"
                    )


def _validate_ks18_rayset(rayset: RaySet) -> None:
    # Exact integer checks: orthogonality within each context, and every
    # ray a member of exactly two contexts.
    counts = {label: 0 for label in rayset.rays}
    for ctx in rayset.contexts:
        if len(ctx) != 4:
            raise RuntimeError(f"context {ctx} does not have 4 rays")
        vecs = [rayset.rays[label] for label in ctx]
        for i in range(4):
            counts[ctx[i]] += 1
            for j in range(i + 1, 4):
                if int(np.dot(vecs[i], vecs[j])) != 0:
                    raise RuntimeError(f"rays {ctx[i]} and {ctx[j]} are not orthogonal")
    bad = {label: c for label, c in counts.items() if c != 2}
    if bad:
        raise RuntimeError(f"rays not in exactly two contexts: {bad}")


def build_ks18() -> tuple[RaySet, ObservableSet]:
    """The embedded 18-ray set and its observables A = 2|v><v| - 1."""
    rays = {label: _frozen(np.array(v, dtype=np.int64)) for label, v in KS18_RAYS.items()}
    rayset = RaySet(rays=rays, contexts=KS18_CONTEXTS)
    _validate_ks18_rayset(rayset)

    observables = {}
    eye = np.eye(4, dtype=complex)
    for label, v in rays.items():
        unit = np.asarray(v, dtype=float) / np.linalg.norm(v)
        observables[label] = _frozen(2.0 * np.outer(unit, unit).astype(complex) - eye)
    obs = ObservableSet(set_id="ks18", dim=4, observables=observables, contexts=KS18_CONTEXTS)
    _validate_set(obs)
    return rayset, obs


def build_peres_mermin() -> ObservableSet:
    """The nine two-qubit square observables, rows then columns as contexts."""
    z1 = kron_all([PAULI_Z, IDENTITY_2])
    z2 = kron_all([IDENTITY_2, PAULI_Z])
    x1 = kron_all([PAULI_X, IDENTITY_2])
    x2 = kron_all([IDENTITY_2, PAULI_X])
    observables = {
        "P14": z1,
        "P15": z2,
        "P16": kron_all([PAULI_Z, PAULI_Z]),
        "P24": x2,
        "P25": x1,
        "P26": kron_all([PAULI_X, PAULI_X]),
        "P34": kron_all([PAULI_Z, PAULI_X]),
        "P35": kron_all([PAULI_X, PAULI_Z]),
        "P36": kron_all([PAULI_Y, PAULI_Y]),
    }
    contexts = (
        ("P14", "P15", "P16"),
        ("P24", "P25", "P26"),
        ("P34", "P35", "P36"),
        ("P14", "P24", "P34"),
        ("P15", "P25", "P35"),
        ("P16", "P26", "P36"),
    )
    obs = ObservableSet(
        set_id="peres_mermin",
        dim=4,
        observables={k: _frozen(v) for k, v in observables.items()},
        contexts=contexts,
    )
    _validate_set(obs)
    return obs


def star_labels(n: int) -> tuple[str, ...]:
    """Labels of the n-qubit star family, without building operators."""
    _check_star_n(n)
    return (
        tuple(f"ACAL{k}" for k in range(1, 5))
        + tuple(f"B{i}" for i in range(1, n + 1))
        + tuple(f"C{i}" for i in range(1, n + 1))
    )


def _check_star_n(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"star family is defined with n (odd) >= 3, got n={n}")


def build_mermin_star(n: int, max_qubits: int = MERMIN_STAR_MAX_QUBITS) -> ObservableSet:
    """The 4 + 2n observables of the n-qubit star family (n odd, >= 3).

    ACAL1 = Z...Z, ACAL2 = Z X X...X, ACAL3 = X Z X...X,
    ACAL4 = X X Z...Z, B_i = Z on site i, C_i = X on site i.
    """
    _check_star_n(n)
    if n > max_qubits:
        raise ResourceLimitError(
            f"star family with n={n} exceeds the {max_qubits}-qubit cap "
            f"(dimension 2^{n})"
        )

    def string_op(site_paulis: dict[int, np.ndarray]) -> np.ndarray:
        return kron_all([site_paulis.get(i, IDENTITY_2) for i in range(1, n + 1)])

    observables: dict[str, np.ndarray] = {
        "ACAL1": string_op({i: PAULI_Z for i in range(1, n + 1)}),
        "ACAL2": string_op({1: PAULI_Z} | {i: PAULI_X for i in range(2, n + 1)}),
        "ACAL3": string_op({2: PAULI_Z} | {i: PAULI_X for i in range(1, n + 1) if i != 2}),
        "ACAL4": string_op({1: PAULI_X, 2: PAULI_X} | {i: PAULI_Z for i in range(3, n + 1)}),
    }
    for i in range(1, n + 1):
        observables[f"B{i}"] = string_op({i: PAULI_Z})
        observables[f"C{i}"] = string_op({i: PAULI_X})

    b_tail = tuple(f"B{i}" for i in range(3, n + 1))
    c_tail = tuple(f"C{i}" for i in range(3, n + 1))
    contexts = (
        ("ACAL1", "B1", "B2") + b_tail,
        ("ACAL2", "B1", "C2") + c_tail,
        ("ACAL3", "C1", "B2") + c_tail,
        ("ACAL4", "C1", "C2") + b_tail,
        ("ACAL1", "ACAL2", "ACAL3", "ACAL4"),
    )
    obs = ObservableSet(
        set_id="mermin_star",
        dim=2**n,
        observables={k: _frozen(v) for k, v in observables.items()},
        contexts=contexts,
    )
    _validate_set(obs)
    return obs


def build_set(set_id: str, n: int | None = None) -> ObservableSet:
    """Build an observable set by family id ("ks18", "peres_mermin",
    "mermin_star"); mermin_star requires n."""
    if set_id == "ks18":
        return build_ks18()[1]
    if set_id == "peres_mermin":
        return build_peres_mermin()
    if set_id == "mermin_star":
        if n is None:
            raise ValueError("mermin_star requires n (odd, >= 3)")
        return build_mermin_star(n)
    raise UnknownLabelError(set_id)


def set_labels(set_id: str, n: int | None = None) -> tuple[str, ...]:
    """Label universe of a family without building any operators."""
    if set_id == "ks18":
        return tuple(KS18_RAYS)
    if set_id == "peres_mermin":
        return tuple(f"P{i}{j}" for i in (1, 2, 3) for j in (4, 5, 6))
    if set_id == "mermin_star":
        if n is None:
            raise ValueError("mermin_star requires n (odd, >= 3)")
        return star_labels(n)
    raise UnknownLabelError(set_id)


def compatible(obs: ObservableSet, a: str, b: str) -> bool:
    """Whether two observables of the set are jointly measurable
    (their operators commute at tolerance 1e-9)."""
    return commutes(obs.operator(a), obs.operator(b), STRUCT_TOL)
