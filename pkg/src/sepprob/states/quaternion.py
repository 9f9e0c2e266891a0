"""Quaternion scalars and the complex-pair form of quaternion matrices.

A quaternion ``w + x i + y j + z k`` is written ``a + b j`` with
``a = w + x i`` and ``b = y + z i``. Matrices over the quaternions are then
pairs ``(A, B)`` of complex arrays, and the complex adjoint

    chi(A, B) = [[A, B], [-conj(B), conj(A)]]

is an injective algebra homomorphism into complex matrices of twice the size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = other.w, other.x, other.y, other.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other: float) -> "Quaternion":
        return self * other

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def to_pair(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    @classmethod
    def from_pair(cls, a: complex, b: complex) -> "Quaternion":
        return cls(a.real, a.imag, b.real, b.imag)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])


I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def components_to_pair(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a ``(..., 4)`` real component array into complex parts ``(A, B)``."""
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def pair_to_components(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.stack([A.real, A.imag, B.real, B.imag], axis=-1)


def pair_mul(A1, B1, A2, B2):
    """Elementwise quaternion product in complex-pair form."""
    return A1 * A2 - B1 * np.conj(B2), A1 * B2 + B1 * np.conj(A2)


def pair_matmul(A1, B1, A2, B2):
    """Quaternion matrix product ``(A1 + B1 j)(A2 + B2 j)``."""
    return A1 @ A2 - B1 @ np.conj(B2), A1 @ B2 + B1 @ np.conj(A2)


def pair_adjoint(A, B):
    """Quaternion conjugate transpose."""
    return np.conj(np.swapaxes(A, -1, -2)), -np.swapaxes(B, -1, -2)


def complex_adjoint(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """The complex embedding ``chi``; works on stacked ``(..., n, n)`` arrays."""
    top = np.concatenate([A, B], axis=-1)
    bottom = np.concatenate([-np.conj(B), np.conj(A)], axis=-1)
    return np.concatenate([top, bottom], axis=-2)
