import json
import logging
import struct
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from stapde.exceptions import ContainerFormatError
from stapde.mvtensor.tape import Parameter

log = logging.getLogger(__name__)

MAGIC = b'STAPDECK'
# magic, config length (u32)
_PREAMBLE = struct.Struct('<8sI')
_COUNT = struct.Struct('<Q')


def write_checkpoint(path: Path, config: Dict, params: Sequence[Parameter]):
    """Writes the config echo and parameters as little-endian f32 in registration order."""
    config_bytes = json.dumps(config, sort_keys=True).encode('utf-8')
    count = sum(p.data.size for p in params)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('wb') as f:
        f.write(_PREAMBLE.pack(MAGIC, len(config_bytes)))
        f.write(config_bytes)
        f.write(_COUNT.pack(count))
        for p in params:
            f.write(np.ascontiguousarray(p.data, dtype='<f4').tobytes())
    log.debug(f'wrote checkpoint {path} with {count} parameters')


def read_checkpoint(path: Path) -> Tuple[Dict, np.ndarray]:
    """Returns the config echo and the flat f32 parameter vector."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _PREAMBLE.size or raw[:8] != MAGIC:
        raise ContainerFormatError(path, 'missing STAPDECK magic')
    _, config_length = _PREAMBLE.unpack_from(raw, 0)
    offset = _PREAMBLE.size
    try:
        config = json.loads(raw[offset:offset + config_length].decode('utf-8'))
    except ValueError as e:
        raise ContainerFormatError(path, f'unreadable config header ({e})')
    offset += config_length
    if len(raw) < offset + _COUNT.size:
        raise ContainerFormatError(path, 'truncated header')
    (count,) = _COUNT.unpack_from(raw, offset)
    offset += _COUNT.size
    if len(raw) != offset + 4 * count:
        raise ContainerFormatError(path, f'expected {count} parameters, found {(len(raw) - offset) // 4}')
    values = np.frombuffer(raw, dtype='<f4', count=count, offset=offset)
    return config, values


def assign_parameters(params: List[Parameter], values: np.ndarray, path: Path = None):
    expected = sum(p.data.size for p in params)
    if values.size != expected:
        raise ContainerFormatError(path, f'checkpoint holds {values.size} parameters, model needs {expected}')
    offset = 0
    for p in params:
        n = p.data.size
        p.data[...] = values[offset:offset + n].reshape(p.data.shape)
        offset += n
