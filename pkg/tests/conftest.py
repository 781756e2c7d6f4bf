"""Shared fixtures and frozen reference data for the test suite.

The frozen eigenvalue lists were produced by the truncated Fock-space
diagonalization oracle (truncation-stable to 1e-9) and are pinned here so the
unit tests do not re-run the oracle.
"""

import pytest

from rabispec import ModelKind, ModelParams, Sector

# TwoPhoton omega=1, delta=0.5, g=0.2, q=1/4, window [-0.5, 8]:
# oracle eigenvalues, truncation N=128, stable to 1e-9.
TWO_PHOTON_REF_POINT = dict(omega=1.0, delta=0.5, g=0.2, q=0.25, window=(-0.5, 8.0))
TWO_PHOTON_REF_EIGS = [
    0.41651513899116793,
    1.4139797539978411,
    2.094999359285277,
    3.4877656006348703,
    3.7315803023160115,
    5.385988910959033,
    5.542728977145912,
    7.108491418810693,
    7.481587806614793,
]


class ConstCoeffs:
    """Surrogate coefficient sequence with constant a, b (all n, including 0)."""

    def __init__(self, a, b):
        self._a = a
        self._b = b

    def a(self, n):
        return self._a

    def b(self, n):
        return self._b


@pytest.fixture
def two_photon_ref():
    model = ModelParams(
        kind=ModelKind.TWO_PHOTON,
        omega=TWO_PHOTON_REF_POINT["omega"],
        delta=TWO_PHOTON_REF_POINT["delta"],
        g=TWO_PHOTON_REF_POINT["g"],
    )
    sector = Sector.two_photon(TWO_PHOTON_REF_POINT["q"])
    return model, sector, TWO_PHOTON_REF_POINT["window"], TWO_PHOTON_REF_EIGS
