"""Wigner evaluation: Laguerre kernels, closed form, oracle, grids, metrics."""

import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre, gammaln

import gpssvs
from gpssvs import (
    DimTooSmallError,
    EVEN,
    Nonlinearity,
    ODD,
    SqueezeSpec,
    pssvs,
    squeezed_vacuum,
    resolve_threads,
    wigner_grid,
    wigner_point,
    wigner_point_oracle,
    write_wigner_csv,
    write_wigner_matrix,
)
from gpssvs.wigner import TWO_OVER_PI, displacement_columns, laguerre_assoc, laguerre_assoc_log

PT = Nonlinearity.poschl_teller(1.5, 1.5)
HARM = Nonlinearity.harmonic()


class TestLaguerre:
    def test_known_values(self):
        # L_1^(2)(3) = 3 - 3 = 0; L_2^(0)(2) = 1 - 4 + 2 = -1.
        assert laguerre_assoc(1, 2.0, 3.0) == pytest.approx(0.0, abs=1e-14)
        assert laguerre_assoc(2, 0.0, 2.0) == pytest.approx(-1.0, rel=1e-14)
        assert laguerre_assoc(0, 5.0, 9.0) == 1.0

    @pytest.mark.parametrize("n,alpha,x", [(7, 0.0, 1.5), (20, 4.0, 9.0),
                                           (45, 12.0, 30.0)])
    def test_matches_scipy(self, n, alpha, x):
        assert np.isclose(laguerre_assoc(n, alpha, x),
                          eval_genlaguerre(n, alpha, x), rtol=1e-10)

    @pytest.mark.parametrize("n,alpha,x", [(15, 2.0, 4.0), (60, 10.0, 25.0)])
    def test_log_form_matches_plain(self, n, alpha, x):
        sign, log_mag = laguerre_assoc_log(n, alpha, x)
        plain = laguerre_assoc(n, alpha, x)
        assert sign == np.sign(plain)
        assert np.isclose(sign * math.exp(log_mag), plain, rtol=1e-9)

    def test_log_form_survives_huge_degree(self):
        # Plain recurrence values overflow the double range long before
        # n = 3000; the log form must stay finite.
        sign, log_mag = laguerre_assoc_log(3000, 6.0, 800.0)
        assert sign in (-1.0, 0.0, 1.0)
        assert math.isfinite(log_mag)


class TestClosedFormPoints:
    def test_vacuum_gaussian(self):
        vac = squeezed_vacuum(PT, 0.0, 0.0)
        for z in (0.0 + 0.0j, 0.5 + 0.2j, -1.0 + 1.5j):
            expected = TWO_OVER_PI * math.exp(-2 * abs(z) ** 2)
            assert np.isclose(wigner_point(vac, z), expected, atol=1e-13)

    def test_single_photon_negative_at_origin(self):
        # Weak odd harmonic PSSVS tends to |1>, whose Wigner dip reaches
        # the extremal value -2/pi at the origin.
        state = pssvs(HARM, SqueezeSpec(0.01, 0.0, 0, ODD))
        assert wigner_point(state, 0.0 + 0.0j) == pytest.approx(-TWO_OVER_PI, abs=1e-3)

    def test_origin_value_is_signed_parity(self):
        even = pssvs(PT, SqueezeSpec(1.0, 0.5, 1, EVEN))
        odd = pssvs(PT, SqueezeSpec(1.0, 0.5, 1, ODD))
        assert wigner_point(even, 0j) == pytest.approx(TWO_OVER_PI, abs=1e-12)
        assert wigner_point(odd, 0j) == pytest.approx(-TWO_OVER_PI, abs=1e-12)

    def test_point_symmetry(self):
        state = pssvs(PT, SqueezeSpec(1.2, 0.8, 1, ODD))
        for z in (0.7 + 0.1j, -0.3 + 0.9j):
            assert np.isclose(wigner_point(state, z), wigner_point(state, -z),
                              atol=1e-12)

    def test_bounded(self):
        state = pssvs(PT, SqueezeSpec(1.5, 0.0, 2, EVEN))
        zs = [0.3 * k + 0.2j * j for k in range(-3, 4) for j in range(-3, 4)]
        vals = [wigner_point(state, z) for z in zs]
        assert max(abs(v) for v in vals) <= TWO_OVER_PI + 1e-10


class TestCoherentTransform:
    def test_matches_independent_phase_space_integral(self):
        # Independent route for the harmonic case: write the Wigner function
        # as a coherent-state overlap integral and integrate numerically,
        #   W(z) = (2/pi^2) e^{2|z|^2} Int d^2b <-b|psi><psi|b> e^{2(b* z - b z*)}
        # with <n|b> = b^n e^{-|b|^2/2}/sqrt(n!).  No Laguerre machinery and
        # no displaced-parity sum is involved anywhere in this route.
        state = squeezed_vacuum(HARM, 0.5, 0.0)
        z = 0.3 + 0.2j

        half = 7.0
        count = 240  # even count keeps b = 0 off the nodes
        axis = np.linspace(-half, half, count)
        bu, bv = np.meshgrid(axis, axis, indexing="ij")
        beta = bu + 1j * bv

        nums = state.photon_numbers.astype(float)
        log_b = np.log(np.abs(beta))[..., None]
        ang_b = np.angle(beta)[..., None]
        log_mag = (state.log_mags[None, None, :] + nums * log_b
                   - 0.5 * gammaln(nums + 1.0)[None, None, :]
                   - (np.abs(beta) ** 2 / 2.0)[..., None])
        phase = nums * ang_b - state.phases[None, None, :]
        overlap = np.exp(log_mag + 1j * phase).sum(axis=-1)  # <psi|b>

        overlap_neg = overlap[::-1, ::-1]  # <psi|-b> on the symmetric grid
        kernel = np.exp(2.0 * (np.conj(beta) * z - beta * np.conj(z)))
        integrand = np.conj(overlap_neg) * overlap * kernel
        integral = np.trapezoid(np.trapezoid(integrand, axis, axis=1), axis)
        w_indep = 2.0 / math.pi**2 * math.exp(2 * abs(z) ** 2) * integral

        assert abs(w_indep.imag) < 1e-8
        assert np.isclose(w_indep.real, wigner_point(state, z), atol=1e-4)


class TestOracleAgreement:
    @pytest.mark.parametrize("m,parity", [(0, EVEN), (0, ODD), (1, EVEN), (1, ODD)])
    def test_pt_states(self, m, parity):
        state = pssvs(PT, SqueezeSpec(1.0, 0.5, m, parity))
        rng = np.random.default_rng(7)
        for _ in range(4):
            z = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
            assert np.isclose(wigner_point(state, z), wigner_point_oracle(state, z),
                              atol=1e-10)

    def test_harmonic_state(self):
        state = squeezed_vacuum(HARM, 1.0, 0.9)
        for z in (0.4 + 0.0j, -0.6 + 0.8j, 1.1 - 0.5j):
            assert np.isclose(wigner_point(state, z), wigner_point_oracle(state, z),
                              atol=1e-9)

    def test_oracle_window_too_small(self):
        state = pssvs(PT, SqueezeSpec(1.0, 0.0, 1, EVEN))
        with pytest.raises(DimTooSmallError):
            wigner_point_oracle(state, 1.5 + 0.5j, dim=16)

    def test_banded_columns_match_full(self):
        state = pssvs(PT, SqueezeSpec(1.0, 0.0, 0, EVEN))
        z = 0.7 - 0.4j
        full = wigner_point_oracle(state, z)
        banded = wigner_point_oracle(state, z, band=60)
        assert np.isclose(full, banded, atol=1e-12)

    def test_displacement_columns_are_unitary_slices(self):
        dim = 48
        delta = 0.6 + 0.3j
        cols = displacement_columns(delta, np.arange(6), dim)
        norms = np.linalg.norm(cols, axis=0)
        assert np.allclose(norms, 1.0, atol=1e-10)
        # Columns of a unitary are orthonormal.
        gram = cols.conj().T @ cols
        assert np.allclose(gram, np.eye(6), atol=1e-10)


class TestGrid:
    def test_metrics_and_symmetry(self):
        state = pssvs(PT, SqueezeSpec(1.0, 0.0, 1, EVEN))
        grid = wigner_grid(state, (-4, 4), (-4, 4), 61)
        assert abs(grid.integral - 1.0) < 0.01
        assert grid.min_value < 0  # photon subtraction forces negativity
        assert grid.negative_volume > 0
        assert np.max(np.abs(grid.values)) <= TWO_OVER_PI + 1e-10
        assert np.allclose(grid.values, grid.values[::-1, ::-1], atol=1e-12)

    def test_vacuum_grid_is_positive(self):
        grid = wigner_grid(squeezed_vacuum(PT, 0.0, 0.0), (-3, 3), (-3, 3), 41)
        assert grid.min_value >= 0.0
        assert grid.negative_volume == pytest.approx(0.0, abs=1e-15)
        assert abs(grid.integral - 1.0) < 0.01

    def test_rectangular_resolution(self):
        state = squeezed_vacuum(PT, 0.5, 0.0)
        grid = wigner_grid(state, (-2, 2), (-3, 3), (11, 17))
        assert grid.values.shape == (11, 17)
        assert grid.x_axis.shape == (11,) and grid.p_axis.shape == (17,)

    def test_resolution_validation(self):
        state = squeezed_vacuum(PT, 0.5, 0.0)
        with pytest.raises(ValueError):
            wigner_grid(state, (-2, 2), (-2, 2), 1)

    def test_thread_count_does_not_change_values(self):
        state = pssvs(PT, SqueezeSpec(1.0, 0.0, 1, ODD))
        serial = wigner_grid(state, (-2, 2), (-2, 2), 21, threads=1)
        threaded = wigner_grid(state, (-2, 2), (-2, 2), 21, threads=4)
        assert np.array_equal(serial.values, threaded.values)


class TestThreads:
    def test_explicit_wins(self, monkeypatch):
        monkeypatch.setenv("GPSSVS_THREADS", "7")
        assert resolve_threads(3) == 3

    def test_env_parsing(self, monkeypatch):
        monkeypatch.setenv("GPSSVS_THREADS", "5")
        assert resolve_threads() == 5
        monkeypatch.setenv("GPSSVS_THREADS", "0")
        assert resolve_threads() >= 1
        monkeypatch.setenv("GPSSVS_THREADS", "-2")
        with pytest.raises(ValueError):
            resolve_threads()

    def test_default_when_unset(self, monkeypatch):
        monkeypatch.delenv("GPSSVS_THREADS", raising=False)
        assert resolve_threads() >= 1


class TestFileOutputs:
    def test_csv_and_sidecar(self, tmp_path):
        state = pssvs(PT, SqueezeSpec(1.0, 0.0, 1, EVEN))
        grid = wigner_grid(state, (-2, 2), (-2, 2), 9)
        path = tmp_path / "w.csv"
        write_wigner_csv(grid, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "x,p,w"
        assert len(lines) == 1 + 81
        x0, p0, w0 = lines[1].split(",")
        assert float(x0) == -2.0 and float(p0) == -2.0
        assert float(w0) == grid.values[0, 0]
        sidecar = (tmp_path / "w.csv.json").read_text()
        assert '"min_value"' in sidecar and '"negative_volume"' in sidecar

    def test_matrix_format(self, tmp_path):
        state = squeezed_vacuum(PT, 0.3, 0.0)
        grid = wigner_grid(state, (-1, 1), (-2, 2), (5, 7))
        path = tmp_path / "w.txt"
        write_wigner_matrix(grid, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0].startswith("# x ") and lines[1].startswith("# p ")
        data = np.array([[float(v) for v in line.split()] for line in lines[2:]])
        assert data.shape == (5, 7)
        assert np.array_equal(data, np.array([[float(f"{v:.17g}") for v in row]
                                              for row in grid.values]))
