import functools
import logging
from typing import List, Tuple

import numpy as np

from stapde.algebra import G2, G3, STA2, STA3, Multivector, Signature, gp
from stapde.exceptions import UsageError
from stapde.fdtd.fields import FieldFrame

log = logging.getLogger(__name__)

# Each field component's unit multivector as a product of named blades, component order as in FieldFrame.
# Magnetic parts are the pseudoscalar times B in 3D (F = E + IB); the 2D forms use the bivector of the plane.
EMBEDDING_FACTORS = {
    G2: (('e1',), ('e2',), ('e12',)),
    STA2: (('g1', 'g0'), ('g2', 'g0'), ('g1', 'g2')),
    G3: (('e1',), ('e2',), ('e3',), ('e123', 'e1'), ('e123', 'e2'), ('e123', 'e3')),
    STA3: (('g1', 'g0'), ('g2', 'g0'), ('g3', 'g0'),
           ('g0123', 'g1', 'g0'), ('g0123', 'g2', 'g0'), ('g0123', 'g3', 'g0')),
}


def _product(sig: Signature, names) -> Multivector:
    result = Multivector.scalar(sig)
    for name in names:
        result = gp(result, Multivector.blade(sig, name))
    return result


@functools.lru_cache(maxsize=None)
def field_embedding(sig: Signature) -> Tuple[Tuple[int, ...], Tuple[float, ...]]:
    """(blade index, sign) of every field component, derived from geometric products."""
    if sig not in EMBEDDING_FACTORS:
        raise UsageError('embed', f'no field embedding for {sig.name}')
    indices, signs = [], []
    for names in EMBEDDING_FACTORS[sig]:
        unit = _product(sig, names)
        nonzero = np.flatnonzero(unit.coeffs)
        if nonzero.size != 1 or abs(unit.coeffs[nonzero[0]]) != 1.0:
            raise UsageError('embed', f'{"*".join(names)} is not a signed basis blade in {sig.name}')
        indices.append(int(nonzero[0]))
        signs.append(float(unit.coeffs[nonzero[0]]))
    log.debug(f'{sig.name} field embedding: blades {indices}, signs {signs}')
    return tuple(indices), tuple(signs)


def field_mask(sig: Signature) -> List[int]:
    """Blades carrying physical field components."""
    return sorted(field_embedding(sig)[0])


def embed_components(components: np.ndarray, sig: Signature, dtype=None) -> np.ndarray:
    """(components, *grid) -> (*grid, blades); blades outside the embedding stay zero."""
    indices, signs = field_embedding(sig)
    if components.shape[0] != len(indices):
        raise UsageError('embed', f'{sig.name} embeds {len(indices)} components, frame has {components.shape[0]}')
    out = np.zeros(components.shape[1:] + (sig.size,), dtype=dtype or components.dtype)
    for c, (index, sign) in enumerate(zip(indices, signs)):
        out[..., index] = sign * components[c]
    return out


def embed(frame: FieldFrame, sig: Signature, dtype=None) -> np.ndarray:
    return embed_components(frame.components, sig, dtype)


def extract(mv: np.ndarray, sig: Signature) -> FieldFrame:
    """(*grid, blades) -> FieldFrame; blades outside the embedding are ignored."""
    indices, signs = field_embedding(sig)
    if mv.shape[-1] != sig.size:
        raise UsageError('extract', f'expected {sig.size} blades, got shape {mv.shape}')
    return FieldFrame(np.stack([sign * mv[..., index] for index, sign in zip(indices, signs)]))
