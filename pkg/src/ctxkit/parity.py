"""The two contradiction arguments behind the inequalities.

``ks_colorable`` searches for a 0/1 assignment to rays with exactly one 1
in every context (the noncontextual coloring the 18-ray set famously does
not admit).  ``parity_stats`` exposes the counting argument: with every
label in an even number of contexts, the product of all context outcome
products is forced to +1 for any fixed +-1 assignment, while quantum
mechanics gives (-1)^(number of minus-identity contexts); an odd number
of minus-identity contexts is a contradiction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .observables import ObservableSet, RaySet
from .quantum import context_product


@dataclass(frozen=True)
class ColorabilityResult:
    satisfiable: bool
    witness: dict[str, int] | None


def _check_rayset(rayset: RaySet) -> None:
    for ctx in rayset.contexts:
        if len(ctx) != 4:
            raise ValueError(f"context {ctx} does not have exactly 4 rays")
        for label in ctx:
            if label not in rayset.rays:
                raise ValueError(f"context {ctx} references unknown ray {label}")


def ks_colorable(rayset: RaySet) -> ColorabilityResult:
    """Search for an assignment with exactly one 1 per 4-ray context.

    Backtracking over contexts: pick the 1-ray for each context in turn
    and propagate the forced zeros.  Exhaustive, so UNSAT verdicts are
    proofs.
    """
    _check_rayset(rayset)
    contexts = rayset.contexts
    values: dict[str, int] = {}

    def assign(ctx_index: int) -> bool:
        if ctx_index == len(contexts):
            return True
        ctx = contexts[ctx_index]
        ones = [label for label in ctx if values.get(label) == 1]
        if len(ones) > 1:
            return False
        if len(ones) == 1:
            # The context's 1 is already fixed; the rest must be 0.
            touched = []
            ok = True
            for label in ctx:
                if label == ones[0]:
                    continue
                if values.get(label) == 1:
                    ok = False
                    break
                if label not in values:
                    values[label] = 0
                    touched.append(label)
            if ok and assign(ctx_index + 1):
                return True
            for label in touched:
                del values[label]
            return False
        for pick in ctx:
            if values.get(pick) == 0:
                continue
            touched = []
            ok = True
            for label in ctx:
                want = 1 if label == pick else 0
                if label in values:
                    if values[label] != want:
                        ok = False
                        break
                else:
                    values[label] = want
                    touched.append(label)
            if ok and assign(ctx_index + 1):
                return True
            for label in touched:
                del values[label]
        return False

    if assign(0):
        witness = dict(values)
        for label in rayset.rays:
            witness.setdefault(label, 0)
        return ColorabilityResult(satisfiable=True, witness=witness)
    return ColorabilityResult(satisfiable=False, witness=None)


def _exhaustive_colorable(rayset: RaySet) -> bool:
    """Naive check over all 2^R assignments; cross-check oracle for tests."""
    _check_rayset(rayset)
    labels = sorted(rayset.rays)
    m = len(labels)
    if m > 24:
        raise ValueError(f"{m} rays is too many for the naive check")
    bit = {label: i for i, label in enumerate(labels)}
    masks = np.array(
        [sum(1 << bit[label] for label in ctx) for ctx in rayset.contexts],
        dtype=np.uint64,
    )
    ks = np.arange(1 << m, dtype=np.uint64)
    ok = np.ones(len(ks), dtype=bool)
    for mask in masks:
        ok &= np.bitwise_count(ks & mask) == 1
    return bool(ok.any())


@dataclass(frozen=True)
class ParityStats:
    context_count: int
    occurrences: dict[str, int]
    minus_identity_contexts: int
    parity_contradiction: bool


def parity_stats(family: ObservableSet | RaySet) -> ParityStats:
    """Context count, per-label occurrence counts, and the parity verdict.

    parity_contradiction is true when the number of minus-identity
    context products is odd while every label occurs in an even number of
    contexts: no +-1 assignment can then reproduce the quantum products.
    For a RaySet each context is a complete basis, so its product sign
    is -1 by construction.
    """
    if isinstance(family, RaySet):
        contexts = family.contexts
        signs = [-1] * len(contexts)
    else:
        contexts = family.contexts
        signs = [context_product(family, ctx) for ctx in contexts]

    occurrences: dict[str, int] = {}
    for ctx in contexts:
        for label in ctx:
            occurrences[label] = occurrences.get(label, 0) + 1

    minus = sum(1 for s in signs if s == -1)
    all_even = all(c % 2 == 0 for c in occurrences.values())
    return ParityStats(
        context_count=len(contexts),
        occurrences=occurrences,
        minus_identity_contexts=minus,
        parity_contradiction=(minus % 2 == 1) and all_even,
    )
