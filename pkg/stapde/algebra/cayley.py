import functools
import logging
from typing import List, Sequence, Tuple

import numpy as np

from stapde.algebra.signature import Signature

log = logging.getLogger(__name__)


def grade(bits: int) -> int:
    return bin(bits).count('1')


def reordering_sign(a: int, b: int) -> int:
    """Sign picked up by moving the vectors of blade b past those of blade a into ascending order."""
    a >>= 1
    swaps = 0
    while a:
        swaps += grade(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


class CayleyTable:
    """Product table of all blade pairs: result[a, b] = a ^ b, sign[a, b] in {-1, 0, +1}."""
    signature: Signature
    result: np.ndarray
    sign: np.ndarray

    def __init__(self, signature: Signature, result: np.ndarray, sign: np.ndarray):
        self.signature = signature
        self.result = result
        self.sign = sign
        self.result.setflags(write=False)
        self.sign.setflags(write=False)
        self._dense = None

    def entry(self, a: int, b: int) -> Tuple[int, int]:
        return int(self.result[a, b]), int(self.sign[a, b])

    def dense(self) -> np.ndarray:
        """Structure tensor T with gp(x, y)[k] = sum_ij x[i] y[j] T[i, j, k]."""
        if self._dense is None:
            size = self.signature.size
            dense = np.zeros((size, size, size), dtype=np.float64)
            rows, cols = np.indices((size, size))
            dense[rows, cols, self.result] = self.sign
            dense.setflags(write=False)
            self._dense = dense
        return self._dense


@functools.lru_cache(maxsize=None)
def build_table(sig: Signature) -> CayleyTable:
    size = sig.size
    result = np.zeros((size, size), dtype=np.int64)
    sign = np.zeros((size, size), dtype=np.int8)
    for a in range(size):
        for b in range(size):
            s = reordering_sign(a, b)
            common = a & b
            for i in range(sig.dim):
                if common >> i & 1:
                    s *= sig.metric[i]
            result[a, b] = a ^ b
            sign[a, b] = s
    log.debug(f'built Cayley table for {sig.name} ({size}x{size})')
    return CayleyTable(sig, result, sign)


def brute_force_product(a: Sequence[int], b: Sequence[int], metric: Sequence[int]) -> Tuple[int, int]:
    """Multiplies two blades given as lists of vector indices by bubble-sorting their concatenation.

    Adjacent equal vectors are contracted with their metric square. Used as an independent check
    of `build_table`.
    """
    symbols: List[int] = list(a) + list(b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(symbols) - 1):
            if symbols[i] > symbols[i + 1]:
                symbols[i], symbols[i + 1] = symbols[i + 1], symbols[i]
                sign = -sign
                changed = True
    reduced: List[int] = []
    for s in symbols:
        if reduced and reduced[-1] == s:
            reduced.pop()
            sign *= metric[s]
        else:
            reduced.append(s)
    bits = 0
    for s in reduced:
        bits |= 1 << s
    return bits, sign


def blade_vectors(bits: int) -> List[int]:
    return [i for i in range(bits.bit_length()) if bits >> i & 1]
