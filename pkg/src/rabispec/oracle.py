"""Truncated Fock-space diagonalization: the ground truth for the spectra.

The Hamiltonians are assembled directly from their ladder-operator matrix
elements in a sector-resolved basis, interleaving spin within the boson index
so the matrices are banded with three superdiagonals.  Eigenvalues come from
LAPACK's banded symmetric solver, which is entirely independent of the
continued-fraction route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import TruncationCeiling
from .models import ModelKind, ModelParams, Sector

N_MAX_DEFAULT = 2**13
_BANDWIDTH = 3  # superdiagonals in the canonical ordering


@dataclass(frozen=True)
class OracleSector:
    """Conserved-quantity label selecting a block of the full Fock space.

    ``parity`` is the photon-number parity (two-photon model), ``mode_diff``
    the occupation difference n1 - n2 (two-mode model); the driven model has
    no conserved label ("full").
    """

    kind: ModelKind
    parity: int | None = None      # 0 = even, 1 = odd
    mode_diff: int | None = None   # d = 2 kappa - 1


def map_sector(sector: Sector) -> OracleSector:
    """Bijection from the analytic sector label to the oracle basis label.

    q = 1/4 is the even photon-parity block, q = 3/4 the odd one; kappa maps to
    the mode difference d = 2 kappa - 1.
    """
    if sector.kind is ModelKind.TWO_PHOTON:
        return OracleSector(sector.kind, parity=0 if sector.value == 0.25 else 1)
    if sector.kind is ModelKind.TWO_MODE:
        d = int(round(2.0 * sector.value - 1.0))
        if d < 0:
            raise ValueError("kappa must be >= 1/2")
        return OracleSector(sector.kind, mode_diff=d)
    return OracleSector(sector.kind)


@dataclass(frozen=True)
class TruncatedHamiltonian:
    """Symmetric banded Hamiltonian block with its basis bookkeeping.

    ``bands`` is upper banded storage (scipy convention,
    bands[u + i - j, j] = H[i, j]); ``labels`` lists (boson quantum number,
    spin) per basis state; ``truncation`` is the boson cutoff N.
    """

    dimension: int
    bands: np.ndarray
    labels: list[tuple[int, int]]
    truncation: int
    model: ModelParams
    sector: OracleSector

    def to_dense(self) -> np.ndarray:
        u = self.bands.shape[0] - 1
        h = np.zeros((self.dimension, self.dimension))
        for j in range(self.dimension):
            for i in range(max(0, j - u), j + 1):
                h[i, j] = self.bands[u + i - j, j]
                h[j, i] = h[i, j]
        return h


def build_hamiltonian(
    model: ModelParams, osector: OracleSector, truncation: int
) -> TruncatedHamiltonian:
    """Assemble the sector Hamiltonian with boson numbers up to ``truncation``.

    Basis states are (n, s) with s = +1/-1 the sigma_z spin, ordered
    (n, +), (n, -), (n', +), ... along increasing boson quantum number.
    """
    if truncation < 4:
        raise ValueError("truncation must be >= 4")
    w, d, g, drive = model.omega, model.delta, model.g, model.drive

    if model.kind is ModelKind.TWO_PHOTON:
        if osector.parity is None:
            raise ValueError("two-photon oracle needs a parity sector")
        ns = list(range(osector.parity, truncation + 1, 2))
        diag_e = [w * n for n in ns]
        # <n+2, -s| g (b^dag)^2 |n, s> with n the photon number
        hop = [g * math.sqrt((n + 1.0) * (n + 2.0)) for n in ns[:-1]]
        spin_flip_same_n = 0.0
    elif model.kind is ModelKind.TWO_MODE:
        if osector.mode_diff is None:
            raise ValueError("two-mode oracle needs a mode-difference sector")
        dd = osector.mode_diff
        ns = list(range(truncation + 1))  # n = occupation of the lower mode
        diag_e = [w * (2 * n + dd) for n in ns]
        hop = [g * math.sqrt((n + 1.0) * (n + dd + 1.0)) for n in ns[:-1]]
        spin_flip_same_n = 0.0
    else:
        ns = list(range(truncation + 1))
        diag_e = [w * n for n in ns]
        hop = [g * math.sqrt(n + 1.0) for n in ns[:-1]]
        spin_flip_same_n = drive

    labels: list[tuple[int, int]] = []
    for n in ns:
        labels += [(n, +1), (n, -1)]
    dim = len(labels)
    u = _BANDWIDTH
    bands = np.zeros((u + 1, dim))
    for m, e in enumerate(diag_e):
        bands[u, 2 * m] = e + d
        bands[u, 2 * m + 1] = e - d
    if spin_flip_same_n != 0.0:
        for m in range(len(ns)):
            j = 2 * m + 1
            bands[u - 1, j] = spin_flip_same_n  # (m,+) <-> (m,-)
    for m, t in enumerate(hop):
        # (m, +) <-> (m+1, -): indices 2m and 2m+3
        bands[u - 3, 2 * m + 3] = t
        # (m, -) <-> (m+1, +): indices 2m+1 and 2m+2
        bands[u - 1, 2 * m + 2] = t
    return TruncatedHamiltonian(
        dimension=dim,
        bands=bands,
        labels=labels,
        truncation=truncation,
        model=model,
        sector=osector,
    )


def eigen_lowest(h: TruncatedHamiltonian, k: int) -> list[float]:
    """The k smallest eigenvalues, ascending."""
    if not 1 <= k <= h.dimension:
        raise ValueError("need 1 <= k <= dimension")
    vals = scipy.linalg.eig_banded(
        h.bands, lower=False, eigvals_only=True, select="i", select_range=(0, k - 1)
    )
    return [float(v) for v in vals]


def eigen_in_range(h: TruncatedHamiltonian, lo: float, hi: float) -> list[float]:
    """All eigenvalues in [lo, hi], ascending."""
    vals = scipy.linalg.eig_banded(
        h.bands, lower=False, eigvals_only=True, select="v", select_range=(lo, hi)
    )
    return [float(v) for v in vals]


def _initial_truncation(model: ModelParams, e_max: float, n_start: int | None) -> int:
    """Cutoff heuristic: bare level well above the window, then doubled to stability."""
    w = model.omega
    n = 16 if n_start is None else max(16, n_start)
    while n < N_MAX_DEFAULT and w * n < 5.0 * (
        max(e_max, 0.0) + model.delta + abs(model.drive) + abs(model.g) * math.sqrt(n)
    ):
        n *= 2
    return n


def oracle_spectrum(
    model: ModelParams,
    sector: Sector,
    window: tuple[float, float],
    n_start: int | None = None,
    stab_tol_factor: float = 1e-9,
    n_max: int = N_MAX_DEFAULT,
) -> tuple[list[float], int]:
    """Truncation-stable eigenvalues in ``window`` plus the cutoff used.

    Doubles the boson cutoff until every in-window eigenvalue moves by less
    than ``stab_tol_factor * omega`` between consecutive truncations; raises
    TruncationCeiling if that never happens below ``n_max``.
    """
    e_min, e_max = window
    if not e_min < e_max:
        raise ValueError("window must satisfy E_min < E_max")
    osector = map_sector(sector)
    tol = stab_tol_factor * model.omega
    n = _initial_truncation(model, e_max, n_start)
    prev: list[float] | None = None
    while n <= n_max:
        h = build_hamiltonian(model, osector, n)
        vals = eigen_in_range(h, e_min, e_max)
        if prev is not None and len(vals) == len(prev):
            if all(abs(a - b) < tol for a, b in zip(vals, prev)):
                return vals, n
        prev = vals
        n *= 2
    raise TruncationCeiling(
        f"eigenvalues did not stabilize below truncation {n_max}"
    )
