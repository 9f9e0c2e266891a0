"""Density matrices over R, C and H together with the determinant-based PPT test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DivisionAlgebra
from .quaternion import complex_adjoint, components_to_pair, pair_adjoint, pair_matmul, pair_to_components

DIM = 4
TRACE_TOL = 1e-12
PSD_TOL = 1e-12
IMAG_TOL = 1e-10
PAIR_TOL = 1e-8
TIE_TOL = 1e-14


class PairingError(ArithmeticError):
    """Eigenvalues of a complex adjoint failed to come in equal pairs."""


class NotSelfAdjoint(ValueError):
    pass


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 density matrix over one of the division algebras.

    ``entries`` is a real ``(4, 4)`` array for REAL, a complex ``(4, 4)``
    array for COMPLEX and a real ``(4, 4, 4)`` array of ``(w, x, y, z)``
    components for QUATERNION.
    """

    entries: np.ndarray
    algebra: DivisionAlgebra

    def pair(self) -> tuple[np.ndarray, np.ndarray]:
        """Complex-pair form ``(A, B)``; ``B`` vanishes for R and C."""
        if self.algebra is DivisionAlgebra.QUATERNION:
            return components_to_pair(self.entries)
        A = np.asarray(self.entries, dtype=complex)
        return A, np.zeros_like(A)

    @classmethod
    def from_pair(cls, A: np.ndarray, B: np.ndarray, algebra: DivisionAlgebra) -> "DensityMatrix":
        if algebra is DivisionAlgebra.QUATERNION:
            return cls(pair_to_components(A, B), algebra)
        if algebra is DivisionAlgebra.REAL:
            return cls(np.ascontiguousarray(A.real), algebra)
        return cls(np.asarray(A, dtype=complex), algebra)

    def embedding(self) -> np.ndarray:
        """Complex Hermitian matrix carrying the spectrum (8x8 over H)."""
        if self.algebra is DivisionAlgebra.QUATERNION:
            return complex_adjoint(*self.pair())
        return np.asarray(self.entries, dtype=complex)

    def trace(self) -> float:
        A, _ = self.pair()
        return float(np.trace(A).real)

    def eigenvalues(self) -> np.ndarray:
        ev = np.linalg.eigvalsh(self.embedding())
        if self.algebra is DivisionAlgebra.QUATERNION:
            return _paired(ev)
        return ev

    def validate(self) -> None:
        A, B = self.pair()
        scale = max(1.0, float(np.abs(A).max()))
        if not np.allclose(A, np.conj(A.T), atol=TRACE_TOL * scale) or not np.allclose(B, -B.T, atol=TRACE_TOL * scale):
            raise NotSelfAdjoint("density matrix is not self-adjoint")
        if abs(self.trace() - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {self.trace()!r}, expected 1")
        if self.eigenvalues().min() < -PSD_TOL:
            raise ValueError("density matrix has a negative eigenvalue")


def _paired(ev: np.ndarray, tol: float = PAIR_TOL) -> np.ndarray:
    """One representative per equal pair of ascending eigenvalues."""
    ev = np.asarray(ev)
    lo, hi = ev[..., 0::2], ev[..., 1::2]
    scale = np.maximum(1.0, np.abs(ev).max(axis=-1, keepdims=True))
    if np.any(np.abs(hi - lo) > tol * scale):
        raise PairingError(f"complex-adjoint eigenvalues are not paired (gap {np.abs(hi - lo).max():.3g})")
    return lo


def _block_swap(M: np.ndarray) -> np.ndarray:
    n = M.shape[-1] // 2
    out = M.copy()
    out[..., :n, n:] = M[..., n:, :n]
    out[..., n:, :n] = M[..., :n, n:]
    return out


def partial_transpose(rho: DensityMatrix, check: bool = True) -> DensityMatrix:
    """Swap the off-diagonal 2x2 blocks, the transpose on the first factor.

    The result is self-adjoint but in general not positive, so it is returned
    as a ``DensityMatrix`` only as a container.
    """
    if check:
        rho.validate()
    # the quaternion component axis is the last one, keep the swap on the matrix axes
    if rho.algebra is DivisionAlgebra.QUATERNION:
        e = np.moveaxis(rho.entries, -1, 0)
        return DensityMatrix(np.moveaxis(_block_swap(e), 0, -1), rho.algebra)
    return DensityMatrix(_block_swap(np.asarray(rho.entries)), rho.algebra)


def _is_self_adjoint(M: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.allclose(M, np.conj(np.swapaxes(M, -1, -2)), atol=tol * max(1.0, float(np.abs(M).max()))))


def det_selfadjoint(M) -> float:
    """Determinant of a self-adjoint real or complex matrix."""
    if isinstance(M, DensityMatrix):
        if M.algebra is DivisionAlgebra.QUATERNION:
            raise TypeError("use moore_det for quaternionic matrices")
        M = M.entries
    M = np.asarray(M)
    if not _is_self_adjoint(M):
        raise NotSelfAdjoint("det_selfadjoint needs a self-adjoint matrix")
    d = np.linalg.det(M)
    if abs(np.imag(d)) > IMAG_TOL * max(1.0, abs(d)):
        raise ArithmeticError(f"determinant has imaginary part {np.imag(d)!r}")
    return float(np.real(d))


def moore_det(H) -> float:
    """Moore determinant of a quaternionic self-adjoint matrix.

    ``H`` is a ``DensityMatrix``, a ``(n, n, 4)`` component array or a
    complex pair ``(A, B)``. The eigenvalues of the complex adjoint come in
    equal pairs; the product over one member of each pair is the Moore
    determinant, sign included.
    """
    if isinstance(H, DensityMatrix):
        A, B = H.pair()
    elif isinstance(H, tuple):
        A, B = (np.asarray(x, dtype=complex) for x in H)
    else:
        A, B = components_to_pair(H)
    chi = complex_adjoint(A, B)
    if not _is_self_adjoint(chi):
        raise NotSelfAdjoint("moore_det needs a quaternionic self-adjoint matrix")
    return float(np.prod(_paired(np.linalg.eigvalsh(chi))))


def pt_determinant(rho: DensityMatrix) -> float:
    pt = partial_transpose(rho, check=False)
    if rho.algebra is DivisionAlgebra.QUATERNION:
        return moore_det(pt)
    return det_selfadjoint(pt)


def is_separable(rho: DensityMatrix, tie_tol: float = TIE_TOL) -> bool:
    """PPT test; near-zero determinants count as separable."""
    d = pt_determinant(rho)
    return d >= 0 or abs(d) < tie_tol


# ---------------------------------------------------------------- reference states


def maximally_mixed(algebra: DivisionAlgebra = DivisionAlgebra.COMPLEX) -> DensityMatrix:
    A = np.eye(DIM, dtype=complex) / DIM
    return DensityMatrix.from_pair(A, np.zeros_like(A), algebra)


def bell_state(algebra: DivisionAlgebra = DivisionAlgebra.COMPLEX) -> DensityMatrix:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    v = np.zeros(DIM, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    A = np.outer(v, v.conj())
    return DensityMatrix.from_pair(A, np.zeros_like(A), algebra)


def product_state(rho_a: np.ndarray, rho_b: np.ndarray, algebra: DivisionAlgebra = DivisionAlgebra.COMPLEX) -> DensityMatrix:
    A = np.kron(np.asarray(rho_a, dtype=complex), np.asarray(rho_b, dtype=complex))
    return DensityMatrix.from_pair(A, np.zeros_like(A), algebra)


# ---------------------------------------------------------------- sampling


def bartlett_factor(algebra: DivisionAlgebra, rng: np.random.Generator, n: int, dim: int = DIM):
    """Lower-triangular factors ``L`` (complex-pair form) for ``n`` draws.

    ``L L^dagger / tr`` is distributed by the Hilbert-Schmidt measure: the
    diagonal is ``sqrt(chi^2)`` with ``beta (dim - 1 - i) + 2`` degrees of
    freedom and the strict lower triangle holds standard normals in every
    real component. Returns ``(LA, LB, diag)``.
    """
    beta = algebra.beta
    dof = beta * (dim - 1 - np.arange(dim)) + 2
    diag = np.sqrt(rng.chisquare(dof, size=(n, dim)))
    rows, cols = np.tril_indices(dim, -1)
    m = rows.size
    comps = rng.standard_normal(size=(n, m, beta))
    LA = np.zeros((n, dim, dim), dtype=complex)
    LB = np.zeros((n, dim, dim), dtype=complex)
    idx = np.arange(dim)
    LA[:, idx, idx] = diag
    if beta == 1:
        LA[:, rows, cols] = comps[..., 0]
    elif beta == 2:
        LA[:, rows, cols] = comps[..., 0] + 1j * comps[..., 1]
    else:
        LA[:, rows, cols] = comps[..., 0] + 1j * comps[..., 1]
        LB[:, rows, cols] = comps[..., 2] + 1j * comps[..., 3]
    return LA, LB, diag


def sample_hs_batch(algebra: DivisionAlgebra, rng: np.random.Generator, n: int):
    """``n`` Hilbert-Schmidt density matrices in complex-pair form.

    Returns ``(A, B, det_rho)`` with ``A, B`` of shape ``(n, 4, 4)``; the
    determinant of each state comes straight from the triangular factor.
    """
    LA, LB, diag = bartlett_factor(algebra, rng, n)
    if algebra is DivisionAlgebra.QUATERNION:
        A, B = pair_matmul(LA, LB, *pair_adjoint(LA, LB))
    else:
        A = LA @ np.conj(np.swapaxes(LA, -1, -2))
        B = np.zeros_like(A)
    tr = np.trace(A, axis1=-2, axis2=-1).real
    A /= tr[:, None, None]
    B /= tr[:, None, None]
    det_rho = np.prod(diag**2, axis=-1) / tr**DIM
    return A, B, det_rho


def sample_hs(algebra: DivisionAlgebra, rng: np.random.Generator) -> DensityMatrix:
    """One Hilbert-Schmidt distributed density matrix."""
    A, B, _ = sample_hs_batch(algebra, rng, 1)
    return DensityMatrix.from_pair(A[0], B[0], algebra)
