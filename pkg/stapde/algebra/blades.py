from typing import Tuple

from stapde.algebra.cayley import blade_vectors
from stapde.algebra.signature import Signature
from stapde.exceptions import BladeParseError

SCALAR_NAMES = ('1', 'scalar')


def blade_name(bits: int, sig: Signature) -> str:
    if bits == 0:
        return '1'
    return sig.prefix + ''.join(str(i + sig.index_base) for i in blade_vectors(bits))


def parse_blade(name: str, sig: Signature) -> Tuple[int, int]:
    """Parses names like 'e12' or 'g10' into (bits, sign).

    The sign is the permutation parity of the written order, so 'g10' = g1 g0 = -g01.
    """
    text = name.strip().lower()
    if text in SCALAR_NAMES:
        return 0, 1
    if len(text) < 2 or text[0] != sig.prefix:
        raise BladeParseError(name, f'expected the prefix {sig.prefix} of {sig.name} followed by vector indices')
    if sig.dim + sig.index_base > 10:
        raise BladeParseError(name, 'single-digit indices cannot address this algebra')

    indices = []
    for char in text[1:]:
        if not char.isdigit():
            raise BladeParseError(name, f'{char!r} is not a vector index')
        index = int(char) - sig.index_base
        if not 0 <= index < sig.dim:
            raise BladeParseError(name, f'index {char} is out of range for {sig.name}')
        if index in indices:
            raise BladeParseError(name, f'index {char} is repeated')
        indices.append(index)

    inversions = sum(1 for i in range(len(indices)) for j in range(i + 1, len(indices)) if indices[i] > indices[j])
    bits = 0
    for index in indices:
        bits |= 1 << index
    return bits, -1 if inversions & 1 else 1
