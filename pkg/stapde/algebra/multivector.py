import numbers
from typing import Optional, Sequence

import numpy as np

from stapde.algebra.blades import blade_name, parse_blade
from stapde.algebra.cayley import build_table, grade
from stapde.algebra.signature import Signature
from stapde.exceptions import UsageError


class Multivector:
    """Dense multivector: one 64-bit coefficient per blade, blades in ascending bitmask order."""
    signature: Signature
    coeffs: np.ndarray

    def __init__(self, signature: Signature, coeffs: Optional[Sequence[float]] = None):
        self.signature = signature
        if coeffs is None:
            self.coeffs = np.zeros(signature.size, dtype=np.float64)
        else:
            self.coeffs = np.array(coeffs, dtype=np.float64)
        if self.coeffs.shape != (signature.size,):
            raise UsageError('Multivector', f'expected {signature.size} coefficients, got shape {self.coeffs.shape}')
        if not np.all(np.isfinite(self.coeffs)):
            raise UsageError('Multivector', 'coefficients must be finite')

    @classmethod
    def scalar(cls, sig: Signature, value: float = 1.0) -> 'Multivector':
        mv = cls(sig)
        mv.coeffs[0] = value
        return mv

    @classmethod
    def blade(cls, sig: Signature, name: str, value: float = 1.0) -> 'Multivector':
        bits, sign = parse_blade(name, sig)
        mv = cls(sig)
        mv.coeffs[bits] = sign * value
        return mv

    @classmethod
    def pseudoscalar(cls, sig: Signature) -> 'Multivector':
        mv = cls(sig)
        mv.coeffs[sig.pseudoscalar_index] = 1.0
        return mv

    def _check_same(self, other: 'Multivector', operation: str):
        if self.signature != other.signature:
            raise UsageError(operation, f'signature mismatch: {self.signature.name} vs {other.signature.name}')

    def __add__(self, other: 'Multivector') -> 'Multivector':
        self._check_same(other, 'add')
        return Multivector(self.signature, self.coeffs + other.coeffs)

    def __sub__(self, other: 'Multivector') -> 'Multivector':
        self._check_same(other, 'sub')
        return Multivector(self.signature, self.coeffs - other.coeffs)

    def __neg__(self) -> 'Multivector':
        return Multivector(self.signature, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return gp(self, other)
        if isinstance(other, numbers.Real):
            return Multivector(self.signature, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return Multivector(self.signature, self.coeffs * float(other))
        return NotImplemented

    def grade(self, k: int) -> 'Multivector':
        return grade_project(self, k)

    def grades(self):
        return sorted({grade(i) for i in np.flatnonzero(self.coeffs)})

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def reverse(self) -> 'Multivector':
        signs = np.array([(-1) ** (grade(i) * (grade(i) - 1) // 2) for i in range(self.signature.size)], dtype=np.float64)
        return Multivector(self.signature, self.coeffs * signs)

    def dual(self) -> 'Multivector':
        return gp(self, Multivector.pseudoscalar(self.signature))

    def allclose(self, other: 'Multivector', atol=1e-12) -> bool:
        self._check_same(other, 'allclose')
        return bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))

    def __repr__(self):
        terms = [f'{c:+.6g}*{blade_name(i, self.signature)}' for i, c in enumerate(self.coeffs) if c != 0]
        return 'Multivector({}: {})'.format(self.signature.name, ' '.join(terms) or '0')


def gp_array(a: np.ndarray, b: np.ndarray, sig: Signature) -> np.ndarray:
    """Geometric product over the last axis of two broadcastable coefficient arrays."""
    return np.einsum('...i,...j,ijk->...k', a, b, build_table(sig).dense())


def gp(a: Multivector, b: Multivector) -> Multivector:
    a._check_same(b, 'gp')
    return Multivector(a.signature, gp_array(a.coeffs, b.coeffs, a.signature))


def grade_project(x: Multivector, k: int) -> Multivector:
    if not 0 <= k <= x.signature.dim:
        raise UsageError('grade_project', f'grade {k} out of range for {x.signature.name}')
    mask = np.array([grade(i) == k for i in range(x.signature.size)])
    return Multivector(x.signature, np.where(mask, x.coeffs, 0.0))


def square(x: Multivector) -> Multivector:
    return gp(x, x)
