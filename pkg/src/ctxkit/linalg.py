"""Dense complex linear algebra for small operator problems.

Operators are plain square complex numpy arrays, kets are 1-D complex
vectors, density matrices are square complex matrices with unit trace.
Structural checks (Hermiticity, commutation, involution, positivity)
use an absolute tolerance of 1e-9; reality checks use 1e-12.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

STRUCT_TOL = 1e-9
REAL_TOL = 1e-12
KET_NORM_SLACK = 1e-6

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _as_operator(a, name: str = "operator") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError(f"{name} has zero dimension")
    return a


def kron(a, b) -> np.ndarray:
    """Tensor product of two matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 or b.size == 0:
        raise ValueError("tensor product with a zero-dimension factor")
    return np.kron(a, b)


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of a sequence of matrices, left to right."""
    if len(factors) == 0:
        raise ValueError("empty tensor product")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = kron(out, f)
    return out


def product_trace(rho, factors: Sequence[np.ndarray]) -> complex:
    """Tr(rho . f1 . f2 ... fk) with factors multiplied left to right.

    An empty factor list gives Tr(rho).
    """
    rho = _as_operator(rho, "rho")
    acc = rho
    for i, f in enumerate(factors):
        f = _as_operator(f, f"factor {i}")
        if f.shape != rho.shape:
            raise ValueError(
                f"factor {i} has shape {f.shape}, expected {rho.shape}"
            )
        acc = acc @ f
    return complex(np.trace(acc))


def commutes(a, b, tol: float = STRUCT_TOL) -> bool:
    """Whether two same-dimension operators commute within tol."""
    a = _as_operator(a, "a")
    b = _as_operator(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.max(np.abs(a @ b - b @ a)) <= tol)


def is_hermitian(a, tol: float = STRUCT_TOL) -> bool:
    a = _as_operator(a, "a")
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_involution(a, tol: float = STRUCT_TOL) -> bool:
    """Whether a is a Hermitian square root of the identity (a dichotomic
    observable with outcomes in {-1, +1})."""
    a = _as_operator(a, "a")
    if not is_hermitian(a, tol):
        return False
    eye = np.eye(a.shape[0])
    return bool(np.max(np.abs(a @ a - eye)) <= tol)


def as_ket(amplitudes) -> np.ndarray:
    """Validate and normalize a state vector.

    Norms within 1e-6 of 1 are silently renormalized; anything further off
    is rejected rather than guessed at.
    """
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if psi.size == 0:
        raise ValueError("empty state vector")
    norm = float(np.linalg.norm(psi))
    if norm == 0.0:
        raise ValueError("zero state vector")
    if abs(norm - 1.0) > KET_NORM_SLACK:
        raise ValueError(f"state vector norm {norm} is not within {KET_NORM_SLACK} of 1")
    return psi / norm


def ket_density(psi) -> np.ndarray:
    """Rank-one density matrix |psi><psi| from a (near-)normalized ket."""
    psi = as_ket(psi)
    return np.outer(psi, psi.conj())


def check_density_matrix(rho, tol: float = STRUCT_TOL) -> np.ndarray:
    """Certify rho as a density matrix: Hermitian, unit trace, positive
    semidefinite within tol.  Returns rho as a complex array on success."""
    rho = _as_operator(rho, "rho")
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace {tr} is not 1")
    eigvals = np.linalg.eigvalsh(rho)
    if float(eigvals.min()) < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {eigvals.min()}")
    return rho
