import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waveguide_nls.diagnostics import (
    ShellSpectrum,
    boundary_mass_fraction,
    cascade_fraction,
    energy,
    h1_bound,
    h1_bound_constant,
    kinetic_energy,
    lp_shells,
    mass,
    shell_index,
    sobolev_norm,
)
from waveguide_nls.errors import ParameterError
from waveguide_nls.evolution import linear_propagate
from waveguide_nls.spectral import (
    DomainSpec,
    Field,
    Spectrum,
    forward_transform,
    inverse_transform,
    project_band,
    spectrum_from_modes,
)

from conftest import random_field, random_spectrum

PI_DOMAIN = DomainSpec(math.pi, 16, 16)


class TestMassEnergy:
    def test_zero(self, small_domain):
        z = Field(np.zeros(small_domain.shape), small_domain)
        assert mass(z) == 0.0 and energy(z) == 0.0

    def test_unit_modulus_mass_is_area(self):
        x1, x2 = PI_DOMAIN.mesh()
        f = Field(np.exp(1j * (x1 + 3 * x2)), PI_DOMAIN)
        assert mass(f) == pytest.approx(4 * math.pi ** 2, rel=1e-14)

    def test_torus_mode_energy(self):
        _, x2 = PI_DOMAIN.mesh()
        f = Field(np.exp(1j * x2), PI_DOMAIN)
        assert energy(f) == pytest.approx(3 * math.pi ** 2, rel=1e-13)

    def test_constant_energy(self, rect_domain):
        c = 0.7 - 0.2j
        f = Field(np.full(rect_domain.shape, c), rect_domain)
        assert energy(f) == pytest.approx(0.25 * abs(c) ** 4 * rect_domain.area, rel=1e-13)

    def test_mass_parseval(self, rect_domain, rng):
        f = random_field(rect_domain, rng)
        assert mass(f) == pytest.approx(sobolev_norm(forward_transform(f), 0) ** 2, rel=1e-12)

    def test_energy_reuses_spectrum(self, rect_domain, rng):
        f = random_field(rect_domain, rng)
        assert energy(f, forward_transform(f)) == energy(f)

    def test_gradient_term_by_finite_modes(self):
        # |grad e^{i(xi x1 + n x2)}|^2 = xi^2 + n^2 pointwise
        d = DomainSpec(2.0, 16, 16)
        x1, x2 = d.mesh()
        xi = d.grid.dxi * 2
        f = Field(np.exp(1j * (xi * x1 - 3 * x2)), d)
        assert kinetic_energy(forward_transform(f)) == pytest.approx(0.5 * (xi ** 2 + 9) * d.area, rel=1e-13)


class TestSobolevNorm:
    def test_order_zero_is_l2(self, rect_domain, rng):
        s = random_spectrum(rect_domain, rng)
        assert sobolev_norm(s, 0) == pytest.approx(s.l2_norm(), rel=1e-14)

    def test_single_mode(self):
        s = spectrum_from_modes(PI_DOMAIN, {(0, 2): 1.0})
        assert sobolev_norm(s, 1) == pytest.approx(3.0)

    def test_monotone(self, rect_domain, rng):
        s = random_spectrum(rect_domain, rng)
        vals = [sobolev_norm(s, o) for o in (0, 0.5, 1, 1.5, 2, 3.5)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_negative(self, rect_domain, rng):
        with pytest.raises(ParameterError):
            sobolev_norm(random_spectrum(rect_domain, rng), -1)


class TestShells:
    def test_zero_mode_in_shell_zero(self):
        sh = lp_shells(spectrum_from_modes(PI_DOMAIN, {(0, 0): 2.0}))
        assert sh.energies[0] == pytest.approx(4.0) and sh.total == pytest.approx(4.0)

    def test_mode_three_in_shell_two(self):
        sh = lp_shells(spectrum_from_modes(PI_DOMAIN, {(0, 3): 1.0}))
        assert dict(sh.shells)[2] == pytest.approx(1.0)
        assert sum(e for k, e in sh.shells if k != 2) == 0.0

    def test_boundaries_half_open(self):
        g = DomainSpec(math.pi, 32, 32).grid
        idx = shell_index(g)
        size = g.frequency_size
        assert np.all(2.0 ** idx <= size) and np.all(size < 2.0 ** (idx + 1))
        # exact powers of two start a new shell
        assert idx[g.mode_index(0, 1)] == 1 and idx[g.mode_index(3, 4)] == 3

    def test_additivity(self, rect_domain, rng):
        s = random_spectrum(rect_domain, rng)
        assert lp_shells(s).total == pytest.approx(s.l2_norm() ** 2, rel=1e-12)
        assert np.all(lp_shells(s).energies >= 0)

    def test_invariant_under_free_flow(self, rect_domain, rng):
        s = random_spectrum(rect_domain, rng)
        a = lp_shells(s).energies
        b = lp_shells(linear_propagate(s, 3.3)).energies
        assert np.allclose(a, b, rtol=1e-13, atol=0)


class TestCascade:
    def test_k0_zero(self, rect_domain, rng):
        assert cascade_fraction(random_spectrum(rect_domain, rng), 0) == pytest.approx(1.0)

    def test_above_top_shell(self, rect_domain, rng):
        s = random_spectrum(rect_domain, rng)
        assert cascade_fraction(s, 50) == 0.0

    def test_single_mode(self):
        assert cascade_fraction(spectrum_from_modes(PI_DOMAIN, {(0, 3): 1.0}), 2) == 1.0

    def test_zero_spectrum(self, small_domain):
        assert cascade_fraction(Spectrum(np.zeros(small_domain.shape), small_domain), 1) == 0.0

    @pytest.mark.parametrize("k0", [-1, 1.5])
    def test_bad_k0(self, rect_domain, rng, k0):
        with pytest.raises(ParameterError):
            cascade_fraction(random_spectrum(rect_domain, rng), k0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_nonincreasing(self, seed):
        s = random_spectrum(DomainSpec(1.3, 32, 16), np.random.default_rng(seed))
        sh = lp_shells(s)
        vals = [cascade_fraction(sh, k) for k in range(8)]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))

    def test_accepts_shell_spectrum(self):
        sh = ShellSpectrum(np.array([1.0, 1.0, 2.0]))
        assert cascade_fraction(sh, 2) == pytest.approx(0.5)


class TestBoundaryAndBounds:
    def test_boundary_fraction_uniform(self):
        d = DomainSpec(1.0, 64, 8)
        f = Field(np.ones(d.shape), d)
        x1, _ = d.coordinates()
        expected = np.mean(np.abs(x1) >= 0.9)
        assert boundary_mass_fraction(f) == pytest.approx(expected)

    def test_boundary_fraction_localized(self):
        d = DomainSpec(50.0, 128, 8)
        x1, _ = d.mesh()
        f = Field(np.exp(-x1 ** 2 / 8), d)
        assert boundary_mass_fraction(f) < 1e-100

    def test_h1_bound_holds(self, rng):
        d = DomainSpec(2.0, 32, 32)
        for peak in (0.1, 1.0, 5.0):
            s = project_band(random_spectrum(d, rng), 4.0)
            u = inverse_transform(s).values
            f = Field(u * peak / np.abs(u).max(), d)
            sp = forward_transform(f)
            h1_sq = sobolev_norm(sp, 1) ** 2
            assert h1_sq <= h1_bound(mass(f), energy(f, sp), d.grid) * (1 + 1e-12)

    def test_h1_constant(self):
        g = DomainSpec(math.pi, 8, 8).grid
        # (1+a+b)^2 - a^2 - b^2 = 1 + 2a + 2b + 2ab, maximal at the corner a = b = 4
        assert h1_bound_constant(g) == pytest.approx(1 + 8 + 8 + 32)
