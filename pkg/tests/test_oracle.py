"""Truncated Fock-space diagonalization and its independence cross-checks."""

import math

import numpy as np
import pytest

from rabispec import (
    ModelKind,
    ModelParams,
    Sector,
    TruncationCeiling,
    build_hamiltonian,
    closed_form_spectrum_g0,
    eigen_lowest,
    map_sector,
    oracle_spectrum,
)
from rabispec.oracle import TruncatedHamiltonian, eigen_in_range


def inertia_below(a, x):
    """Number of eigenvalues of the symmetric matrix ``a`` below ``x``.

    Pure-python Sylvester inertia: count negative pivots of the LDL^T factors
    of A - xI via elimination without pivoting, retrying with a tiny shift when
    a pivot degenerates.
    """
    n = len(a)
    shift = 0.0
    scale = max(max(abs(v) for v in row) for row in a) + abs(x) + 1.0
    for _ in range(60):
        m = [[a[i][j] - (x + shift) * (i == j) for j in range(n)] for i in range(n)]
        count = 0
        ok = True
        for k in range(n):
            piv = m[k][k]
            if abs(piv) < 1e-13 * scale:
                ok = False
                break
            if piv < 0.0:
                count += 1
            for i in range(k + 1, n):
                f = m[i][k] / piv
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
        if ok:
            return count
        shift += 1e-11 * scale
    raise RuntimeError("degenerate pivots persisted")


def eigs_by_bisection(a, k):
    """k smallest eigenvalues of a small symmetric matrix, ascending."""
    n = len(a)
    radius = max(sum(abs(v) for v in row) for row in a)
    out = []
    for idx in range(1, k + 1):
        lo, hi = -radius, radius
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if inertia_below(a, mid) >= idx:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return out


class TestSectorMapping:
    def test_two_photon_parities(self):
        assert map_sector(Sector.two_photon(0.25)).parity == 0
        assert map_sector(Sector.two_photon(0.75)).parity == 1

    def test_two_mode_difference(self):
        assert map_sector(Sector.two_mode(0.5)).mode_diff == 0
        assert map_sector(Sector.two_mode(1.0)).mode_diff == 1
        assert map_sector(Sector.two_mode(1.5)).mode_diff == 2

    def test_driven_has_no_label(self):
        osec = map_sector(Sector.driven())
        assert osec.parity is None and osec.mode_diff is None


class TestMatrixElements:
    def test_two_photon_pair_hop(self):
        model = ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.2)
        h = build_hamiltonian(model, map_sector(Sector.two_photon(0.25)), 4)
        assert h.dimension == 6
        assert h.labels == [(0, 1), (0, -1), (2, 1), (2, -1), (4, 1), (4, -1)]
        dense = h.to_dense()
        i = h.labels.index((2, -1))
        j = h.labels.index((0, 1))
        assert dense[i, j] == pytest.approx(0.2 * math.sqrt(2.0))
        assert dense[0, 0] == pytest.approx(0.5)   # (0, +): 0*w + delta
        assert dense[1, 1] == pytest.approx(-0.5)  # (0, -)

    def test_two_mode_pair_hop(self):
        model = ModelParams(ModelKind.TWO_MODE, 1.0, 0.5, 0.3)
        h = build_hamiltonian(model, map_sector(Sector.two_mode(1.0)), 4)
        dense = h.to_dense()
        i = h.labels.index((1, -1))
        j = h.labels.index((0, 1))
        assert dense[i, j] == pytest.approx(0.3 * math.sqrt(2.0))
        assert dense[0, 0] == pytest.approx(1.0 + 0.5)  # (2n + d) w + delta

    def test_driven_spin_flip_block(self):
        model = ModelParams(ModelKind.DRIVEN_RABI, 1.0, 0.4, 0.0, 0.3)
        h = build_hamiltonian(model, map_sector(Sector.driven()), 4)
        dense = h.to_dense()
        block = dense[:2, :2]
        assert block == pytest.approx(np.array([[0.4, 0.3], [0.3, -0.4]]))
        gap = math.hypot(0.4, 0.3)
        assert eigen_lowest(h, 2) == pytest.approx([-gap, gap], abs=1e-12)

    def test_dense_is_symmetric(self):
        model = ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.2)
        dense = build_hamiltonian(model, map_sector(Sector.two_photon(0.75)), 20).to_dense()
        assert np.array_equal(dense, dense.T)


class TestBandedSolver:
    def _wrap(self, diag):
        # hand-assembled banded storage exercising eigen_lowest directly
        dim = len(diag)
        bands = np.zeros((4, dim))
        bands[3, :] = diag
        model = ModelParams(ModelKind.DRIVEN_RABI, 1.0, 0.0, 0.1)
        return TruncatedHamiltonian(dim, bands, [(n, 1) for n in range(dim)], 4,
                                    model, map_sector(Sector.driven()))

    def test_diagonal_matrix(self):
        h = self._wrap([3.0, 1.0, 2.0])
        assert eigen_lowest(h, 2) == pytest.approx([1.0, 2.0])
        assert eigen_in_range(h, 1.5, 3.5) == pytest.approx([2.0, 3.0])

    def test_k_validation(self):
        h = self._wrap([1.0, 2.0])
        with pytest.raises(ValueError):
            eigen_lowest(h, 0)
        with pytest.raises(ValueError):
            eigen_lowest(h, 3)

    @pytest.mark.parametrize(
        "model,sector",
        [
            (ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.2), Sector.two_photon(0.25)),
            (ModelParams(ModelKind.TWO_MODE, 1.0, 0.7, 0.4), Sector.two_mode(1.5)),
            (ModelParams(ModelKind.DRIVEN_RABI, 1.0, 0.4, 0.6, 0.3), Sector.driven()),
        ],
    )
    def test_lapack_vs_inertia_bisection(self, model, sector):
        # independent pure-python eigensolver agrees on small blocks
        h = build_hamiltonian(model, map_sector(sector), 4)
        dense = h.to_dense().tolist()
        k = min(h.dimension, 6)
        assert eigen_lowest(h, k) == pytest.approx(
            eigs_by_bisection(dense, k), abs=1e-9
        )


class TestPhysics:
    def test_parity_blocks_partition_full_space(self):
        # the two parity sectors together must reproduce the spectrum of the
        # unsectored two-photon Hamiltonian assembled directly with numpy
        model = ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.2)
        n_cut = 40
        dim = 2 * (n_cut + 1)
        full = np.zeros((dim, dim))
        for n in range(n_cut + 1):
            full[2 * n, 2 * n] = n * model.omega + model.delta
            full[2 * n + 1, 2 * n + 1] = n * model.omega - model.delta
        for n in range(n_cut - 1):
            t = model.g * math.sqrt((n + 1.0) * (n + 2.0))
            # pair creation flips the spin
            full[2 * n, 2 * (n + 2) + 1] = full[2 * (n + 2) + 1, 2 * n] = t
            full[2 * n + 1, 2 * (n + 2)] = full[2 * (n + 2), 2 * n + 1] = t
        ref = sorted(np.linalg.eigvalsh(full))[:10]

        union = []
        for q in (0.25, 0.75):
            h = build_hamiltonian(model, map_sector(Sector.two_photon(q)), n_cut)
            union += eigen_lowest(h, 10)
        assert sorted(union)[:10] == pytest.approx(ref, abs=1e-10)

    def test_sign_of_g_invariance(self):
        win = (-1.0, 5.0)
        base = dict(omega=1.0, delta=0.5)
        a, _ = oracle_spectrum(
            ModelParams(ModelKind.TWO_MODE, g=0.4, **base), Sector.two_mode(1.0), win
        )
        b, _ = oracle_spectrum(
            ModelParams(ModelKind.TWO_MODE, g=-0.4, **base), Sector.two_mode(1.0), win
        )
        assert a == pytest.approx(b, abs=1e-12)

    @pytest.mark.parametrize(
        "model,sector",
        [
            (ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.3, 0.0), Sector.two_photon(0.75)),
            (ModelParams(ModelKind.TWO_MODE, 1.0, 0.3, 0.0), Sector.two_mode(0.5)),
            (ModelParams(ModelKind.DRIVEN_RABI, 1.0, 0.3, 0.0, 0.2), Sector.driven()),
        ],
    )
    def test_decoupled_limit_matches_closed_form(self, model, sector):
        win = (-1.0, 4.0)
        vals, _ = oracle_spectrum(model, sector, win)
        ref = [e for e in closed_form_spectrum_g0(model, sector, 8) if win[0] <= e <= win[1]]
        assert vals == pytest.approx(ref, abs=1e-12)

    def test_variational_monotonicity(self):
        # enlarging the basis can only lower (never raise) each ordered level
        model = ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.35)
        osec = map_sector(Sector.two_photon(0.25))
        v1 = eigen_lowest(build_hamiltonian(model, osec, 64), 20)
        v2 = eigen_lowest(build_hamiltonian(model, osec, 128), 20)
        for a, b in zip(v2, v1):
            assert a <= b + 1e-12

    def test_truncation_ceiling(self):
        model = ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.45)
        with pytest.raises(TruncationCeiling):
            oracle_spectrum(model, Sector.two_photon(0.25), (-0.5, 8.0),
                            n_start=16, n_max=16)

    def test_truncation_stability_reported(self):
        model = ModelParams(ModelKind.TWO_PHOTON, 1.0, 0.5, 0.2)
        vals, n_used = oracle_spectrum(model, Sector.two_photon(0.25), (-0.5, 8.0))
        h = build_hamiltonian(model, map_sector(Sector.two_photon(0.25)), 2 * n_used)
        again = eigen_in_range(h, -0.5, 8.0)
        assert vals == pytest.approx(again, abs=1e-9)
