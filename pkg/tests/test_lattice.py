import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eal.algebra import OMEGA, EisensteinInteger, GaussianInteger
from eal.lattice import (
    HEX,
    SQUARE,
    Ring,
    build_voronoi_constellation,
    distance_spectrum,
    epstein_zeta,
    epstein_zeta_tail,
    fourth_power_spectrum,
    quantize,
    quantize_coords,
    second_moment_continuous,
    second_moment_numeric,
    shaping_gain_db,
    write_constellation_csv,
)


def brute_nearest(lattice, point, r=3):
    """Nearest lattice point by exhaustive search around the rounded point."""
    g = lattice.generator
    v0 = round(point.imag / g.imag)
    u0 = round(point.real - v0 * g.real)
    best = None
    for u in range(u0 - r, u0 + r + 1):
        for v in range(v0 - r, v0 + r + 1):
            d = abs(point - (u + v * g))
            if best is None or d < best[0]:
                best = (d, u, v)
    return best


class TestQuantize:
    def test_examples(self):
        assert quantize(SQUARE, 0.4 - 0.6j) == GaussianInteger(0, -1)
        assert quantize(HEX, 0) == EisensteinInteger(0, 0)
        assert quantize(HEX, 0.49 * OMEGA) == EisensteinInteger(0, 0)
        assert quantize(HEX, 0.51 * OMEGA) == EisensteinInteger(0, 1)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            quantize(HEX, complex(np.nan, 0))

    @pytest.mark.parametrize("lattice", [SQUARE, HEX], ids=["square", "hex"])
    def test_matches_exhaustive_search(self, lattice):
        rng = np.random.default_rng(11)
        pts = rng.uniform(-10, 10, 100_000) + 1j * rng.uniform(-10, 10, 100_000)
        got = quantize_coords(lattice, pts)
        g = lattice.generator
        # all candidates with |du|, |dv| <= 3 around the basis rounding
        v0 = np.rint(pts.imag / g.imag)
        u0 = np.rint(pts.real - v0 * g.real)
        best = np.full(len(pts), np.inf)
        second = np.full(len(pts), np.inf)
        bu = np.zeros(len(pts))
        bv = np.zeros(len(pts))
        for du in range(-3, 4):
            for dv in range(-3, 4):
                d = np.abs(pts - ((u0 + du) + (v0 + dv) * g))
                take = d < best
                second = np.where(take, best, np.minimum(second, d))
                bu = np.where(take, u0 + du, bu)
                bv = np.where(take, v0 + dv, bv)
                best = np.where(take, d, best)
        clear = second - best > 1e-9
        assert clear.mean() > 0.999
        np.testing.assert_array_equal(got[clear, 0], bu[clear])
        np.testing.assert_array_equal(got[clear, 1], bv[clear])

    def test_tie_breaks_lexicographically(self):
        # midpoint of 0 and 1: both at distance 1/2
        assert quantize(SQUARE, 0.5) == GaussianInteger(0, 0)
        assert quantize(SQUARE, 0.5 + 0.5j) == GaussianInteger(0, 0)
        assert quantize(SQUARE, -0.5) == GaussianInteger(-1, 0)
        # deep hole of A2: equidistant from 0, 1 and w
        hole = (1 + OMEGA) / 3
        assert quantize(HEX, hole) == EisensteinInteger(0, 0)
        assert quantize(HEX, 1 + (OMEGA - 1) / 2) == EisensteinInteger(0, 1)

    @settings(max_examples=200)
    @given(st.integers(-50, 50), st.integers(-50, 50),
           st.floats(-5, 5), st.floats(-5, 5), st.sampled_from(["square", "hex"]))
    def test_shift_invariance(self, u, v, x, y, kind):
        lattice = HEX if kind == "hex" else SQUARE
        point = complex(x, y)
        base = quantize_coords(lattice, point)
        shifted = quantize_coords(lattice, lattice.embed(u, v) + point)
        d = abs(point - lattice.embed(*base))
        d_alt = brute_nearest(lattice, point)[0]
        if abs(d - d_alt) < 1e-9:
            # lattice shifts by integers preserve the minimiser unless tied
            dist_shift = abs(lattice.embed(u, v) + point - lattice.embed(*shifted))
            assert dist_shift == pytest.approx(d, abs=1e-9)


class TestVoronoi:
    def test_square_13_is_centred_grid(self):
        c = build_voronoi_constellation("gaussian", 13)
        assert len(c) == 169
        grid = {(u, v) for u in range(-6, 7) for v in range(-6, 7)}
        assert {tuple(l) for l in c.labels.tolist()} == grid
        assert c.raw_energy == pytest.approx(28.0)
        assert c.avg_energy == pytest.approx(1.0, abs=1e-12)

    def test_single_point(self):
        c = build_voronoi_constellation("eisenstein", 1)
        assert len(c) == 1
        assert c.labels.tolist() == [[0, 0]]

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            build_voronoi_constellation("gaussian", 0)
        with pytest.raises(ValueError):
            build_voronoi_constellation("gaussian", -3)

    @pytest.mark.parametrize("ring", ["gaussian", "eisenstein"])
    @pytest.mark.parametrize("p", [2, 3, 7, 13])
    def test_complete_coset_system(self, ring, p):
        c = build_voronoi_constellation(ring, p)
        assert len(c) == p * p
        residues = {(int(u) % p, int(v) % p) for u, v in c.labels}
        assert len(residues) == p * p
        assert len(set(np.round(c.points, 12))) == p * p
        if p > 1:
            assert c.avg_energy == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("ring", ["gaussian", "eisenstein"])
    def test_representatives_have_minimum_norm(self, ring):
        # independent exhaustive search over |u|, |v| <= 20
        p = 13
        c = build_voronoi_constellation(ring, p)
        lat = c.lattice
        r = np.arange(-20, 21)
        U, V = np.meshgrid(r, r, indexing="ij")
        N = lat.norm(U, V)
        best = {}
        for u, v, n in zip(U.ravel(), V.ravel(), N.ravel()):
            key = (u % p, v % p)
            best[key] = min(best.get(key, n), n)
        for u, v in c.labels:
            assert lat.norm(int(u), int(v)) == best[(int(u) % p, int(v) % p)]
        assert sum(best.values()) / p**2 == pytest.approx(c.raw_energy)

    @pytest.mark.parametrize("ring", ["gaussian", "eisenstein"])
    def test_voronoi_membership(self, ring):
        p = 13
        c = build_voronoi_constellation(ring, p)
        lat = c.lattice
        r = np.arange(-4, 5)
        for a in r:
            for b in r:
                coarse = p * lat.embed(a, b)
                if abs(coarse) == 0 or abs(coarse) > 3 * p:
                    continue
                y = lat.embed(c.labels[:, 0], c.labels[:, 1])
                assert np.all(np.abs(y) <= np.abs(y - coarse) + 1e-9)

    def test_hex_ties_broken_consistently(self):
        c1 = build_voronoi_constellation("eisenstein", 13)
        c2 = build_voronoi_constellation(Ring.EISENSTEIN, 13)
        np.testing.assert_array_equal(c1.labels, c2.labels)

    def test_csv_export(self):
        c = build_voronoi_constellation("eisenstein", 3)
        buf = io.StringIO()
        write_constellation_csv(c, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "label_u,label_v,re,im"
        assert len(lines) == 10
        u, v, re, im = lines[1].split(",")
        z = c.points[0]
        assert float(re) == z.real and float(im) == z.imag


class TestSecondMoments:
    def test_closed_forms(self):
        assert second_moment_continuous("square", 1) == pytest.approx(2 / 3, abs=1e-15)
        assert second_moment_continuous("hexagon", 1) == pytest.approx(5 / 9, abs=1e-15)
        for rho in (0.3, 1.0, 7.5):
            ratio = second_moment_continuous("square", rho) / second_moment_continuous("hex", rho)
            assert ratio == pytest.approx(6 / 5, rel=1e-14)

    def test_reject_nonpositive(self):
        with pytest.raises(ValueError):
            second_moment_continuous("square", 0)

    def test_numeric_examples(self):
        assert second_moment_numeric("square", 1, 512) == pytest.approx(0.6667, abs=1e-4)
        assert second_moment_numeric("hexagon", 1, 512) == pytest.approx(0.5556, abs=1e-4)
        assert second_moment_numeric("square", 2, 512) == pytest.approx(
            4 * second_moment_numeric("square", 1, 512), rel=1e-12)

    def test_rejects_low_resolution(self):
        with pytest.raises(ValueError):
            second_moment_numeric("square", 1, 32)

    @pytest.mark.parametrize("cell", ["square", "hexagon"])
    def test_numeric_converges(self, cell):
        exact = second_moment_continuous(cell, 1.0)
        errs = [abs(second_moment_numeric(cell, 1.0, r) - exact) for r in (128, 256, 512)]
        C = errs[0] * 128
        for r, e in zip((128, 256, 512), errs):
            assert e <= 1.01 * C / r
        assert errs[2] < errs[0]

    def test_hexagon_quadrature_by_polar_sectors(self):
        # independent route: 6 sectors of int r^3 dr dtheta, midpoint in theta
        rho = 1.0
        th = (np.arange(20000) + 0.5) / 20000 * (np.pi / 3) - np.pi / 6
        sector = np.sum((rho / np.cos(th)) ** 4 / 4) * (np.pi / 3) / 20000
        area = 2 * np.sqrt(3) * rho**2
        assert 6 * sector / area == pytest.approx(5 / 9, rel=1e-8)


class TestShapingGain:
    def test_examples(self):
        assert shaping_gain_db(2 / 3, 5 / 9) == pytest.approx(0.7918, abs=1e-4)
        assert shaping_gain_db(1, 1) == 0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            shaping_gain_db(0, 1)
        with pytest.raises(ValueError):
            shaping_gain_db(1, -1)

    def test_finite_p13(self):
        sq = build_voronoi_constellation("gaussian", 13).raw_energy
        hx = build_voronoi_constellation("eisenstein", 13).raw_energy
        assert 0.55 <= shaping_gain_db(sq, hx) <= 0.85


class TestSpectrum:
    def test_two_points(self):
        s = distance_spectrum([0, 1])
        assert list(s) == [(1.0, 1.0)]

    def test_three_by_three_grid(self):
        pts = [complex(u, v) for u in (-1, 0, 1) for v in (-1, 0, 1)]
        s = distance_spectrum(pts)
        d, n = next(iter(s))
        assert d == pytest.approx(1.0)
        assert n == pytest.approx(24 / 9)
        assert s.total == pytest.approx(8)

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            distance_spectrum([0, 1, 1])

    def test_hex_patch_interior(self):
        r = np.arange(-10, 11)
        U, V = np.meshgrid(r, r, indexing="ij")
        pts = (U + V * OMEGA).ravel()
        centre = int(np.argmin(np.abs(pts)))
        s = distance_spectrum(pts, reference=[centre])
        d, n = next(iter(s))
        assert d == pytest.approx(1.0)
        assert n == 6

    @pytest.mark.parametrize("ring", ["gaussian", "eisenstein"])
    def test_exact_and_float_routes_agree(self, ring):
        c = build_voronoi_constellation(ring, 7)
        exact = distance_spectrum(c)
        approx = distance_spectrum(np.asarray(c.points))
        np.testing.assert_allclose(exact.distances, approx.distances, rtol=1e-9)
        np.testing.assert_allclose(exact.multiplicities, approx.multiplicities)
        assert exact.total == pytest.approx(len(c) - 1)

    def test_fourth_power_examples(self):
        s = distance_spectrum([0, 1])
        assert fourth_power_spectrum(s) == 1
        from eal.lattice import DistanceSpectrum

        s = DistanceSpectrum(np.array([1.0, math.sqrt(2)]), np.array([4.0, 4.0]))
        assert fourth_power_spectrum(s) == pytest.approx(5.0)

    def test_fourth_power_large_square_patch(self):
        r = np.arange(-150, 151)
        U, V = np.meshgrid(r, r, indexing="ij")
        pts = (U + 1j * V).ravel()
        centre = int(np.argmin(np.abs(pts)))
        s = distance_spectrum(pts, reference=[centre])
        # 4 zeta(2) beta(2) minus a tail below pi / 150^2
        full = 4 * (math.pi**2 / 6) * 0.915965594177219
        val = fourth_power_spectrum(s)
        assert full - math.pi / 150**2 <= val <= full


class TestEpstein:
    def test_square(self):
        assert epstein_zeta("square", 2000) == pytest.approx(6.0268, abs=1e-3)

    def test_hex_closed_form(self):
        # 6 zeta(2) L(2, chi_-3), evaluated independently
        L = sum(1 / (3 * k + 1) ** 2 - 1 / (3 * k + 2) ** 2 for k in range(200000))
        closed = 6 * (math.pi**2 / 6) * L
        assert epstein_zeta("hex", 2000) == pytest.approx(closed, abs=2e-6)

    def test_ratio(self):
        ratio = epstein_zeta("square", 2000) / epstein_zeta("hex", 2000)
        assert ratio == pytest.approx(0.7816, abs=1e-3)

    @pytest.mark.parametrize("kind", ["square", "hex"])
    def test_monotone_and_tail(self, kind):
        vals = [epstein_zeta(kind, r) for r in (10, 50, 100, 500)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        diff = epstein_zeta(kind, 2000) - vals[-1]
        assert 0 <= diff <= 10 * epstein_zeta_tail(kind, 500)

    def test_rejects_small_radius(self):
        with pytest.raises(ValueError):
            epstein_zeta("square", 5)
