import math
from dataclasses import dataclass

import numpy as np
import pytest
from scipy import integrate, optimize, special

from specwalk import (
    Lifshits,
    NumericalError,
    ParseError,
    PowerLawDecay,
    PowerSemicircle,
    StretchedExpDecay,
    asymptotic_law,
    classical_return_continuum,
    fit_power_law,
    lattice_return_1d_product,
    parse_dos_spec,
    quantum_amplitude_continuum,
    quantum_return_bound_continuum,
)
from specwalk.transport import TimeGrid, linear_grid, log_grid


# closed-form oracles, derived independently of the quadrature code paths

def semicircle_classical_oracle(nu, lam_max, t):
    # Kummer M(nu+1, 2nu+2, -lam_max t) via the beta-weighted Laplace transform
    return special.hyp1f1(nu + 1, 2 * nu + 2, -lam_max * t)

def band_edge_quantum_oracle(lam_max, t):
    # nu = -1/2 (arcsine law): |alpha|^2 = J0(lam_max t / 2)^2
    return special.j0(lam_max * t / 2) ** 2

def wigner_quantum_oracle(lam_max, t):
    # nu = +1/2 (semicircle): |alpha|^2 = (2 J1(z)/z)^2, z = lam_max t / 2
    z = lam_max * t / 2
    return (2 * special.j1(z) / z) ** 2

def lifshits_classical_oracle(b, t):
    # u = 1/lam maps to int u^{b-2} e^{-u - t/u} du = 2 t^{(b-1)/2} K_{b-1}(2 sqrt t)
    return 2 * t ** ((b - 1) / 2) * special.kv(b - 1, 2 * np.sqrt(t)) / special.gamma(b - 1)

def lifshits_quantum_oracle(b, t):
    amp = 2 * (1j * t) ** ((b - 1) / 2) * special.kv(b - 1, 2 * np.sqrt(1j * t)) \
        / special.gamma(b - 1)
    return np.abs(amp) ** 2


class TestDensities:
    @pytest.mark.parametrize("dos", [
        PowerSemicircle(nu=-0.5, lam_max=4.0),
        PowerSemicircle(nu=0.5, lam_max=2.0),
        PowerSemicircle(nu=1.0, lam_max=1.0),
        PowerSemicircle(nu=2.5, lam_max=3.0),
    ])
    def test_semicircle_normalized(self, dos):
        val, _ = integrate.quad(dos.density, 0, dos.lam_max, limit=200)
        assert val == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("b", [1.5, 2.0, 3.0, 4.0])
    def test_lifshits_normalized(self, b):
        dos = Lifshits(b=b)
        val, _ = integrate.quad(dos.density, 0, np.inf, limit=400)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_density_non_negative(self):
        lam = np.linspace(-1, 5, 400)
        assert np.all(PowerSemicircle(nu=0.5, lam_max=2.0).density(lam) >= 0)
        assert np.all(Lifshits(b=2.0).density(lam) >= 0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            PowerSemicircle(nu=-1.0, lam_max=2.0)
        with pytest.raises(ValueError):
            PowerSemicircle(nu=0.5, lam_max=0.0)
        with pytest.raises(ValueError):
            Lifshits(b=1.0)


class TestClassicalContinuum:
    def test_unit_at_zero(self):
        grid = TimeGrid(np.array([0.0, 1.0]))
        for dos in (PowerSemicircle(nu=0.5, lam_max=2.0), Lifshits(b=2.0)):
            assert classical_return_continuum(dos, grid)[0] == 1.0

    @pytest.mark.parametrize("nu,lam_max", [(0.5, 2.0), (-0.5, 4.0), (1.5, 1.0)])
    def test_semicircle_matches_kummer(self, nu, lam_max):
        dos = PowerSemicircle(nu=nu, lam_max=lam_max)
        grid = log_grid(1e-2, 1e3, 40, include_zero=False)
        got = classical_return_continuum(dos, grid)
        want = semicircle_classical_oracle(nu, lam_max, grid.times)
        np.testing.assert_allclose(got, want, rtol=1e-8)

    def test_band_edge_matches_bessel_i(self):
        # nu=-1/2, lam_max=4 is exp(-2t) I0(2t)
        dos = PowerSemicircle(nu=-0.5, lam_max=4.0)
        grid = log_grid(1e-1, 1e3, 30, include_zero=False)
        want = special.ive(0, 2 * grid.times)  # I0(2t) e^{-2t}
        np.testing.assert_allclose(classical_return_continuum(dos, grid),
                                   want, rtol=1e-8)

    @pytest.mark.parametrize("b", [2.0, 3.0])
    def test_lifshits_matches_bessel_k(self, b):
        dos = Lifshits(b=b)
        grid = TimeGrid(np.array([0.1, 1.0, 10.0, 1e3, 1e4, 3e4]))
        got = classical_return_continuum(dos, grid)
        want = lifshits_classical_oracle(b, grid.times)
        np.testing.assert_allclose(got, want, rtol=1e-9)


class TestQuantumContinuum:
    def test_unit_at_zero(self):
        grid = TimeGrid(np.array([0.0, 2.0]))
        for dos in (PowerSemicircle(nu=0.5, lam_max=2.0), Lifshits(b=3.0)):
            assert quantum_return_bound_continuum(dos, grid)[0] == 1.0

    def test_wigner_matches_bessel_j(self):
        dos = PowerSemicircle(nu=0.5, lam_max=2.0)
        grid = log_grid(1e-1, 500, 40, include_zero=False)
        got = quantum_return_bound_continuum(dos, grid)
        want = wigner_quantum_oracle(2.0, grid.times)
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_band_edge_matches_j0(self):
        dos = PowerSemicircle(nu=-0.5, lam_max=4.0)
        grid = log_grid(1e-1, 500, 40, include_zero=False)
        got = quantum_return_bound_continuum(dos, grid)
        want = band_edge_quantum_oracle(4.0, grid.times)
        np.testing.assert_allclose(got, want, atol=1e-10)

    @pytest.mark.parametrize("b", [2.0, 3.0])
    def test_lifshits_matches_bessel_k(self, b):
        # the complex-ray evaluation must stay accurate far beyond the
        # reach of real-axis oscillatory quadrature
        dos = Lifshits(b=b)
        grid = TimeGrid(np.array([0.1, 1.0, 10.0, 1e3, 1e4, 3e4]))
        got = quantum_return_bound_continuum(dos, grid)
        want = lifshits_quantum_oracle(b, grid.times)
        np.testing.assert_allclose(got, want, rtol=1e-9)

    def test_lifshits_does_not_oscillate(self):
        dos = Lifshits(b=2.0)
        grid = log_grid(1.0, 1e4, 120, include_zero=False)
        a = quantum_return_bound_continuum(dos, grid)
        assert np.all(np.diff(a) < 0)

    def test_lifshits_classical_stretched_shape(self):
        # p(t) / (t^{(2b-3)/4} e^{-2 sqrt t}) is flat in t for large t
        dos = Lifshits(b=2.0)
        grid = TimeGrid(np.array([200.0, 2000.0, 20000.0]))
        p = classical_return_continuum(dos, grid)
        shape = grid.times**0.25 * np.exp(-2 * np.sqrt(grid.times))
        ratios = p / shape
        assert ratios.max() / ratios.min() == pytest.approx(1.0, abs=0.02)

    @pytest.mark.parametrize("b", [2.0, 3.0])
    def test_lifshits_fitted_decay_parameters(self, b):
        from specwalk import fit_stretched_exp
        from specwalk.transport import log_grid

        dos = Lifshits(b=b)
        grid = log_grid(50.0, 2e4, 150, include_zero=False)
        p = classical_return_continuum(dos, grid)
        a = quantum_return_bound_continuum(dos, grid)
        window = (50.0, 2e4)
        fc = fit_stretched_exp(grid.times, p, window)
        assert fc.prefactor_exponent == pytest.approx((2 * b - 3) / 4, abs=0.05)
        assert fc.decay_coeff == pytest.approx(2.0, abs=0.01)
        fq = fit_stretched_exp(grid.times, a, window)
        assert fq.prefactor_exponent == pytest.approx((2 * b - 3) / 2, abs=0.05)
        assert fq.decay_coeff == pytest.approx(2 * math.sqrt(2), abs=0.01)

    def test_lifshits_crossover_time_grows_with_b(self):
        from specwalk import detect_crossover, efficiency_ratio_series
        from specwalk.transport import log_grid

        crossings = []
        for b in (2.0, 4.0):
            dos = Lifshits(b=b)
            grid = log_grid(1e-3, 1e3, 250, include_zero=False)
            p = classical_return_continuum(dos, grid)
            a = quantum_return_bound_continuum(dos, grid)
            ratio = efficiency_ratio_series(grid.times, p, (grid.times, a))
            crossings.append(detect_crossover(ratio.times, ratio.values))
        assert crossings[0] is not None and crossings[1] is not None
        assert crossings[0] != crossings[1]
        assert crossings[0] < crossings[1]


class TestPurePowerIdentity:
    def test_amplitude_equals_classical_for_soft_spectrum(self):
        # for a density ~ lam^nu with nu < 0 the band edge contributes only
        # O(1/t), so |alpha(t)| approaches p(t) itself at large t
        @dataclass(frozen=True)
        class PurePower:
            nu: float
            lam_max: float

            def density(self, lam):
                norm = self.lam_max ** (self.nu + 1) / (self.nu + 1)
                if np.isscalar(lam):
                    if lam <= 0 or lam >= self.lam_max:
                        return 0.0
                    return lam**self.nu / norm
                lam = np.asarray(lam, dtype=float)
                out = np.zeros_like(lam)
                ok = (lam > 0) & (lam < self.lam_max)
                out[ok] = lam[ok] ** self.nu / norm
                return out

        # the band edge enters at relative size ~ t^nu, so the sampling
        # times and tolerances scale with nu
        cases = [(-0.5, [2000.0, 5000.0], 0.03), (-0.3, [2e4, 5e4], 0.08)]
        for nu, times, tol in cases:
            dos = PurePower(nu=nu, lam_max=1.0)
            grid = TimeGrid(np.array(times))
            p = classical_return_continuum(dos, grid)
            amp = np.abs(quantum_amplitude_continuum(dos, grid))
            np.testing.assert_allclose(amp / p, 1.0, atol=tol)


class TestLatticeReturn:
    def test_unit_at_zero(self):
        grid = TimeGrid(np.array([0.0, 1.0]))
        for d in (1, 2, 5):
            assert lattice_return_1d_product(d, grid)[0] == 1.0

    def test_matches_bessel_power(self):
        grid = linear_grid(0.0, 30.0, 500)
        for d in (1, 2, 3):
            want = special.j0(2 * grid.times) ** (2 * d)
            np.testing.assert_allclose(lattice_return_1d_product(d, grid),
                                       want, atol=1e-12)

    def test_first_zero_from_independent_root_finder(self):
        root = optimize.brentq(lambda t: special.j0(2 * t), 1.0, 1.5, xtol=1e-12)
        grid = TimeGrid(np.array([root]))
        assert lattice_return_1d_product(1, grid)[0] == pytest.approx(0.0, abs=1e-12)
        assert root == pytest.approx(1.2024, abs=5e-5)

    def test_envelope_decays_like_one_over_t(self):
        from specwalk import extract_envelope
        grid = linear_grid(5.0, 1100.0, 55000)
        series = lattice_return_1d_product(1, grid)
        env = extract_envelope(grid.times, series, half_width=3)
        fit = fit_power_law(env.times, env.values, (10.0, 1000.0))
        assert fit.exponent == pytest.approx(-1.0, abs=0.05)

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            lattice_return_1d_product(0, linear_grid(0, 1, 10))


class TestAsymptoticLaw:
    def test_band_edge_classical(self):
        law = asymptotic_law(PowerSemicircle(nu=-0.5, lam_max=4.0), "classical")
        assert isinstance(law, PowerLawDecay)
        assert law.exponent == pytest.approx(-0.5)

    def test_wigner_quantum(self):
        law = asymptotic_law(PowerSemicircle(nu=0.5, lam_max=2.0), "quantum")
        assert law.exponent == pytest.approx(-3.0)

    def test_quantum_exponent_doubles_classical(self):
        for nu in (-0.5, 0.0, 0.5, 2.0):
            dos = PowerSemicircle(nu=nu, lam_max=1.0)
            cl = asymptotic_law(dos, "classical").exponent
            qm = asymptotic_law(dos, "quantum").exponent
            assert qm == pytest.approx(2 * cl)

    @pytest.mark.parametrize("b", [2.0, 3.0])
    def test_lifshits_laws(self, b):
        cl = asymptotic_law(Lifshits(b=b), "classical")
        qm = asymptotic_law(Lifshits(b=b), "quantum")
        assert isinstance(cl, StretchedExpDecay)
        assert cl.prefactor_exponent == pytest.approx((2 * b - 3) / 4)
        assert cl.decay_coeff == pytest.approx(2.0)
        assert cl.stretch == 0.5
        assert qm.prefactor_exponent == pytest.approx((2 * b - 3) / 2)
        assert qm.decay_coeff == pytest.approx(2 * math.sqrt(2))

    def test_bad_which(self):
        with pytest.raises(ValueError):
            asymptotic_law(Lifshits(b=2.0), "sideways")


class TestQuadratureMatchesAsymptotics:
    """Fitted slopes of the integrated series vs the closed-form exponents."""

    @pytest.mark.parametrize("nu,lam_max", [(0.5, 2.0), (-0.5, 4.0)])
    def test_classical_slope(self, nu, lam_max):
        dos = PowerSemicircle(nu=nu, lam_max=lam_max)
        grid = log_grid(1.0, 1000.0, 120, include_zero=False)
        p = classical_return_continuum(dos, grid)
        fit = fit_power_law(grid.times, p, (10.0, 100.0))
        want = asymptotic_law(dos, "classical").exponent
        assert abs(fit.exponent - want) <= 0.05 * abs(want)

    def test_quantum_envelope_slope(self):
        from specwalk import extract_envelope
        dos = PowerSemicircle(nu=0.5, lam_max=2.0)
        grid = linear_grid(8.0, 110.0, 1021)
        a = quantum_return_bound_continuum(dos, grid)
        env = extract_envelope(grid.times, a, half_width=3)
        fit = fit_power_law(env.times, env.values, (10.0, 100.0))
        want = asymptotic_law(dos, "quantum").exponent
        assert abs(fit.exponent - want) <= 0.05 * abs(want)

    def test_sharply_peaked_density_decays_like_single_mode(self):
        # large nu concentrates the density at lam_max/2
        dos = PowerSemicircle(nu=200.0, lam_max=2.0)
        grid = TimeGrid(np.array([2.0]))
        p = classical_return_continuum(dos, grid)
        assert p[0] / math.exp(-1.0 * 2.0) == pytest.approx(1.0, abs=0.01)


class TestQuadratureFailure:
    def test_nonintegrable_density_raises(self):
        @dataclass(frozen=True)
        class Divergent:
            lam_max: float = 1.0

            def density(self, lam):
                return 1.0 / lam if lam > 0 else 0.0

        with pytest.raises(NumericalError, match="t="):
            classical_return_continuum(Divergent(), TimeGrid(np.array([1.0])))


class TestParseDOSSpec:
    def test_semicircle(self):
        dos = parse_dos_spec("semicircle:nu=0.5,lmax=2")
        assert dos == PowerSemicircle(nu=0.5, lam_max=2.0)

    def test_negative_nu(self):
        dos = parse_dos_spec("semicircle:nu=-0.5,lmax=4")
        assert dos == PowerSemicircle(nu=-0.5, lam_max=4.0)

    def test_lifshits(self):
        assert parse_dos_spec("lifshits:b=2") == Lifshits(b=2.0)

    @pytest.mark.parametrize("bad", [
        "semicircle", "semicircle:nu=0.5", "semicircle:nu=0.5,lmax=2,x=1",
        "lifshits:b=0.5", "lifshits:c=2", "gauss:s=1", "semicircle:nu=zzz,lmax=2",
    ])
    def test_bad_specs(self, bad):
        with pytest.raises(ParseError):
            parse_dos_spec(bad)
