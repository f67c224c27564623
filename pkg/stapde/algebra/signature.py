from typing import Sequence, Tuple

from stapde.exceptions import ConfigurationError

MAX_DIM = 6


class Signature:
    """Metric of a real Clifford algebra.

    `metric[i]` is the square of basis vector i (+1, -1 or 0). Euclidean algebras name their
    vectors e1..en, spacetime algebras name them g0..g(n-1) with g0 timelike.
    """
    metric: Tuple[int, ...]
    name: str
    prefix: str
    index_base: int

    def __init__(self, metric: Sequence[int], name: str = '', prefix: str = 'e', index_base: int = 1):
        metric = tuple(int(m) for m in metric)
        if not 1 <= len(metric) <= MAX_DIM:
            raise ConfigurationError('signature', f'dimension must be between 1 and {MAX_DIM}, got {len(metric)}')
        if any(m not in (-1, 0, 1) for m in metric):
            raise ConfigurationError('signature', f'metric entries must be +1, -1 or 0, got {metric}')
        self.metric = metric
        self.prefix = prefix
        self.index_base = index_base
        self.name = name or self._default_name()

    @property
    def dim(self) -> int:
        return len(self.metric)

    @property
    def size(self) -> int:
        return 1 << self.dim

    @property
    def pseudoscalar_index(self) -> int:
        return self.size - 1

    @property
    def pqr(self) -> Tuple[int, int, int]:
        return self.metric.count(1), self.metric.count(-1), self.metric.count(0)

    def _default_name(self):
        return 'G({},{},{})'.format(*self.pqr)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.metric == other.metric

    def __hash__(self):
        return hash(self.metric)

    def __repr__(self):
        return f'Signature({self.name}, metric={list(self.metric)})'


G2 = Signature([1, 1], 'G(2,0,0)')
G3 = Signature([1, 1, 1], 'G(3,0,0)')
STA2 = Signature([1, -1, -1], 'G(1,2,0)', prefix='g', index_base=0)
STA3 = Signature([1, -1, -1, -1], 'G(1,3,0)', prefix='g', index_base=0)

NAMED_ALGEBRAS = {
    'g2': G2,
    'g3': G3,
    'sta2': STA2,
    'sta3': STA3,
}


def algebra_by_name(name: str) -> Signature:
    try:
        return NAMED_ALGEBRAS[name.strip().lower()]
    except KeyError:
        raise ConfigurationError('algebra', f'unknown algebra {name!r}, expected one of {sorted(NAMED_ALGEBRAS)}')


def algebra_name(sig: Signature) -> str:
    for name, candidate in NAMED_ALGEBRAS.items():
        if candidate == sig:
            return name
    return sig.name
