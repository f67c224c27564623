import logging
from typing import List

import numpy as np

from stapde.algebra import G2, G3, STA2, STA3, Multivector, Signature, build_table, brute_force_product, gp
from stapde.algebra.cayley import blade_vectors
from stapde.dataset.embedding import field_mask
from stapde.fdtd.fields import FieldFrame
from stapde.harness.faraday import faraday_map
from stapde.models.config import ModelConfig
from stapde.models.resnet import build
from stapde.mvtensor import TEST_DTYPE, MvTensor, gradcheck, mse_loss

log = logging.getLogger(__name__)

ALGEBRAS = (G2, G3, STA2, STA3)
GRADCHECK_TOLERANCE = 1e-4
IDENTITY_TOLERANCE = 1e-12


class CheckResult:
    name: str
    passed: bool
    detail: str

    def __init__(self, name: str, passed: bool, detail: str = ''):
        self.name = name
        self.passed = passed
        self.detail = detail

    def __repr__(self):
        return f'CheckResult({self.name}, {"pass" if self.passed else "FAIL"})'


def table_mismatches(sig: Signature) -> int:
    """Blade pairs whose table entry disagrees with the bubble-sort product."""
    table = build_table(sig)
    mismatches = 0
    for a in range(sig.size):
        for b in range(sig.size):
            expected = brute_force_product(blade_vectors(a), blade_vectors(b), sig.metric)
            if table.entry(a, b) != expected:
                mismatches += 1
    return mismatches


def faraday_identity_error(sig: Signature, seed: int = 0, count: int = 100) -> float:
    """Largest deviation of the F² scalar part from Ex²+Ey²−Bz² over random triples."""
    triples = np.random.default_rng(seed).standard_normal((3, count, 1))
    ex, ey, bz = triples
    expected = ex * ex + ey * ey - bz * bz
    return float(np.max(np.abs(faraday_map(FieldFrame(triples), sig).scalar - expected)))


def spacetime_invariant_error(seed: int = 0, count: int = 100) -> float:
    """Largest deviation of F² = E²−B² + 2E·B I over random 3D fields, with F = E + IB built from the dual."""
    sigmas = [gp(Multivector.blade(STA3, f'g{k}'), Multivector.blade(STA3, 'g0')) for k in (1, 2, 3)]
    fields = np.random.default_rng(seed).standard_normal((count, 2, 3))
    error = 0.0
    for e, b in fields:
        electric, magnetic = Multivector(STA3), Multivector(STA3)
        for sigma, ek, bk in zip(sigmas, e, b):
            electric = electric + float(ek) * sigma
            magnetic = magnetic + float(bk) * sigma
        faraday = electric + magnetic.dual()
        square = gp(faraday, faraday)
        error = max(error, abs(square.scalar_part() - float(e @ e - b @ b)),
                    abs(square.coeffs[STA3.pseudoscalar_index] - 2.0 * float(e @ b)))
    return error


def model_gradcheck(sig: Signature, seed: int = 0, h: float = 1e-3) -> float:
    """Taped vs. central-difference gradients for a two-block, two-channel model at 64-bit.

    First-layer biases are pushed to ±1 and inputs kept near 0.1 so no ReLU input sits close to
    its kink and every single-parameter perturbation leaves the loss exactly quadratic.
    """
    cfg = ModelConfig(sig, channels=2, blocks=2, seed=seed, name=f'gradcheck_{sig.name}')
    model = build(cfg, dtype=TEST_DTYPE)
    rng = np.random.default_rng(seed)
    first = model.layers[0].bias
    first.data[...] = np.where(rng.random(first.shape) < 0.5, -1.0, 1.0)
    grid = (4, 4) if cfg.spatial_dim == 2 else (3, 3, 3)
    x = MvTensor(sig, 0.1 * rng.standard_normal((1, 2) + grid + (sig.size,)))
    target = MvTensor(sig, rng.standard_normal((1, 1) + grid + (sig.size,)))
    mask = field_mask(sig)

    def build_loss(tape):
        return mse_loss(model(x, tape), target, mask, tape=tape)

    return gradcheck(build_loss, model.parameters(), h)


def run_selftest(seed: int = 0) -> List[CheckResult]:
    results = []
    for sig in ALGEBRAS:
        mismatches = table_mismatches(sig)
        results.append(CheckResult(f'product table {sig.name}', mismatches == 0,
                                   f'{sig.size * sig.size} pairs, {mismatches} mismatches'))

    for k in (1, 2, 3):
        sigma = gp(Multivector.blade(STA3, f'g{k}'), Multivector.blade(STA3, 'g0'))
        square = gp(sigma, sigma)
        results.append(CheckResult(f'sigma{k} squares to +1', square.allclose(Multivector.scalar(STA3)),
                                   repr(square)))
    pseudo = Multivector.pseudoscalar(STA3)
    square = gp(pseudo, pseudo)
    results.append(CheckResult('STA pseudoscalar squares to -1', square.allclose(Multivector.scalar(STA3, -1.0)),
                               repr(square)))
    for sig in (G2, STA2):
        error = faraday_identity_error(sig, seed)
        results.append(CheckResult(f'F² invariant {sig.name}', error <= IDENTITY_TOLERANCE, f'max error {error:.2e}'))
    error = spacetime_invariant_error(seed)
    results.append(CheckResult(f'F² invariants {STA3.name}', error <= IDENTITY_TOLERANCE, f'max error {error:.2e}'))

    for sig in ALGEBRAS:
        error = model_gradcheck(sig, seed)
        results.append(CheckResult(f'gradient check {sig.name}', error <= GRADCHECK_TOLERANCE,
                                   f'max relative error {error:.2e}'))

    for result in results:
        log.debug(f'{result.name}: {"pass" if result.passed else "FAIL"} ({result.detail})')
    return results
