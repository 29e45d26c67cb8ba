import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import edge_quadratic, quartic_roots
from qpbands import spectrum
from qpbands.errors import DomainError, PoleError
from qpbands.params import DimensionlessParams, NormalizedParams, normalized_from_dimensionless
from qpbands.presets import PRESET_COMBOS
from qpbands.spectrum import (
    Band,
    Branch,
    band_edge_asymptotic,
    band_edge_closed_form,
    continuum_dispersion,
    continuum_edges,
    edge_root_consistent,
    effective_coupling,
    flatness,
    photon_line,
    repulsive_existence,
    residual,
    scan_bands,
    solve_band1,
    solve_band2,
)

PI = math.pi


def norm(beta, gamma):
    return normalized_from_dimensionless(DimensionlessParams(beta, gamma))


P01_1 = norm(0.1, 1.0)
P05_02 = norm(0.5, 0.2)

# Frozen from the squared-equation quartic (tests/_oracles.quartic_roots).
QUARTIC = {
    (0.1, 1.0): {0.0: (-1.498599960849989, 155.66261069441825),
                 PI / 2: (-0.5017876359362896, 155.68028886335193),
                 PI: (0.4949838545864807, 155.69802442856408)},
    (0.5, 0.2): {0.0: (-1.0005298359345849, 16.753854815832565),
                 PI / 2: (-0.0005603296270244209, 16.945544170281703),
                 PI: (0.9994055050380011, 17.174038839497115)},
    (0.1, 10.0): {0.0: (-1.9246906347617356, 166.0141580643289),
                  PI / 2: (-0.9302118605701953, 166.15863349730188),
                  PI: (0.06420105525335101, 166.31646158129976)},
}


def test_continuum_dispersion():
    p = P05_02
    assert continuum_dispersion(0.0, 0.0, p) == p.delta - 1
    assert continuum_dispersion(PI / 2, 0.3, p) == pytest.approx(p.delta, abs=1e-15)
    assert continuum_dispersion(1.1, PI, p) == pytest.approx(p.delta, abs=1e-15)


def test_continuum_edges():
    p = P05_02
    s = continuum_edges(0.0, p)
    assert (s.lo, s.hi) == (p.delta - 1, p.delta + 1)
    s = continuum_edges(PI, p)
    assert s.lo == pytest.approx(p.delta, abs=1e-15) and s.hi == pytest.approx(p.delta, abs=1e-15)
    s = continuum_edges(PI / 2, p)
    assert s.lo == pytest.approx(p.delta - math.cos(PI / 4))
    assert s.hi == pytest.approx(p.delta + math.cos(PI / 4))


def test_photon_line():
    assert photon_line(0.0) == -1.0
    assert photon_line(PI / 2) == pytest.approx(0.0, abs=1e-16)
    assert photon_line(PI) == 1.0


def test_effective_coupling():
    p0 = dataclasses.replace(P01_1, b=0.0)
    for eps, K in [(3.0, 0.1), (-2.0, 2.0), (1.0, PI)]:
        assert effective_coupling(eps, K, p0) == -p0.a
    # -17.678 + 78.125/154.70
    assert effective_coupling(155.70, PI, P01_1) == pytest.approx(-17.173, abs=5e-4)
    assert effective_coupling(1.0 - 1e-9, PI, P01_1) < -1e9
    with pytest.raises(PoleError):
        effective_coupling(1.0, PI, P01_1)


def test_residual_zero_for_b0():
    p = dataclasses.replace(P01_1, b=0.0)
    for K in (0.0, 0.7, PI):
        c = math.cos(K / 2)
        assert residual(p.delta - math.hypot(p.a, c), K, p) == pytest.approx(0.0, abs=1e-12)


def test_residual_brackets():
    assert residual(150.0, PI, P01_1) > 0 > residual(160.0 if 160 < P01_1.delta else 0, PI, P01_1)
    assert residual(0.0, PI, P01_1) > 0 > residual(0.99, PI, P01_1)


def test_residual_errors():
    with pytest.raises(DomainError):
        residual(P01_1.delta, 0.0, P01_1)
    with pytest.raises(DomainError):
        residual(P01_1.delta - 0.5, 0.0, P01_1)
    with pytest.raises(PoleError):
        residual(1.0, PI, P01_1)


@pytest.mark.parametrize("bg", sorted(QUARTIC))
@pytest.mark.parametrize("K", [0.0, PI / 2, PI])
def test_roots_match_quartic(bg, K):
    p = norm(*bg)
    e2, e1 = QUARTIC[bg][K]
    assert solve_band1(K, p).eps == pytest.approx(e1, abs=1e-9)
    assert solve_band2(K, p).eps == pytest.approx(e2, abs=1e-9)


def test_band_examples():
    b1, b2 = solve_band1(PI, P01_1), solve_band2(PI, P01_1)
    assert b1.band is Band.BAND1 and b2.band is Band.BAND2
    assert b1.eps == pytest.approx(155.699, abs=1e-3)
    assert b2.eps == pytest.approx(0.49498, abs=1e-5)
    assert 1.0 - b2.eps == pytest.approx(0.507, abs=2e-3)
    p = P05_02
    asym = p.delta - p.a + p.b**2 / (p.delta - p.a - 1)
    assert solve_band1(PI, p).eps == pytest.approx(asym, abs=1e-7)
    assert photon_line(PI) - solve_band2(PI, p).eps == pytest.approx(p.b**2 / (p.delta - 1 - p.a), rel=1e-3)
    assert photon_line(PI) - solve_band2(PI, p).eps == pytest.approx(5.9e-4, abs=1e-5)


@pytest.mark.parametrize("K", np.linspace(-PI, PI, 9))
def test_b0_limit(K):
    p = dataclasses.replace(P01_1, b=0.0)
    assert solve_band1(K, p).eps == pytest.approx(p.delta - math.hypot(p.a, math.cos(K / 2)), abs=1e-10)
    assert solve_band2(K, p) is None


def test_bad_tolerance():
    with pytest.raises(DomainError):
        solve_band1(0.0, P01_1, 0.0)
    with pytest.raises(DomainError):
        solve_band2(0.0, P01_1, -1.0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRESET_COMBOS), st.floats(-PI, PI))
def test_solver_properties(bg, K):
    p = norm(*bg)
    b1, b2 = solve_band1(K, p), solve_band2(K, p)
    lo = p.delta - abs(math.cos(K / 2))
    assert abs(b1.residual) < 1e-10 and abs(b2.residual) < 1e-10
    assert b2.eps < -math.cos(K) < b1.eps < lo
    assert b1.a_prime < 0 and b2.a_prime < 0
    assert abs(b1.eps - solve_band1(-K, p).eps) < 1e-11
    assert abs(b2.eps - solve_band2(-K, p).eps) < 1e-11
    # monotone bracket: G positive below the root, negative above
    for pt in (b1, b2):
        h = 1e-6 * max(1.0, abs(pt.eps))
        if pt.band is Band.BAND2:
            h = min(h, 0.5 * (-math.cos(K) - pt.eps))
        assert residual(pt.eps - h, K, p) > 0 > residual(pt.eps + h, K, p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRESET_COMBOS), st.floats(-PI, PI))
def test_solver_matches_quartic_everywhere(bg, K):
    p = norm(*bg)
    roots = quartic_roots(K, p.a, p.b, p.delta)
    assert len(roots) == 2
    assert solve_band2(K, p).eps == pytest.approx(roots[0], abs=1e-7)
    assert solve_band1(K, p).eps == pytest.approx(roots[1], abs=1e-7)


def test_closed_form_values():
    e = band_edge_closed_form(P01_1)
    assert e.real
    q2, q1 = edge_quadratic(P01_1.a, P01_1.b, P01_1.delta)
    assert e.eps_minus == pytest.approx(q1, abs=1e-10)
    assert e.eps_plus == pytest.approx(q2, abs=1e-10)
    assert e.eps_minus == pytest.approx(155.69802442856428, abs=1e-9)
    assert e.eps_plus == pytest.approx(0.4949838545864935, abs=1e-9)


def test_closed_form_degenerate():
    e = band_edge_closed_form(NormalizedParams(a=0.0, b=0.0, delta=7.0))
    assert sorted([e.eps_plus, e.eps_minus]) == [1.0, 7.0]


def test_repulsive_closed_form_inconsistent():
    e = band_edge_closed_form(P01_1, Branch.REPULSIVE)
    assert e.real
    for root in (e.eps_plus, e.eps_minus):
        assert not edge_root_consistent(root, P01_1)
    for root in (band_edge_closed_form(P01_1).eps_plus, band_edge_closed_form(P01_1).eps_minus):
        assert edge_root_consistent(root, P01_1)


def test_repulsive_no_real_solution():
    p = NormalizedParams(a=1.0, b=3.0, delta=4.0)
    # 1 - (2b/(1-delta-a))**2 = 1 - (6/4)**2 < 0
    e = band_edge_closed_form(p, Branch.REPULSIVE)
    assert not e.real and e.eps_plus is None


def test_asymptotic_examples():
    a = band_edge_asymptotic(P01_1)
    assert a.eps_minus == pytest.approx(155.699, abs=2e-3)
    assert a.eps_plus == pytest.approx(0.4933, abs=1e-4)
    cf = band_edge_closed_form(P01_1)
    assert abs(a.eps_minus - cf.eps_minus) / cf.eps_minus < 0.01
    assert abs(a.eps_plus - cf.eps_plus) / cf.eps_plus < 0.01
    assert a.warning is None
    p0 = dataclasses.replace(P01_1, b=0.0)
    assert band_edge_asymptotic(p0).eps_minus == p0.delta - p0.a


@pytest.mark.parametrize("bg", PRESET_COMBOS)
def test_asymptotic_error_order(bg):
    # deviation measured on the scale of the square-root prefactor is x^4/8
    p = norm(*bg)
    cf, asym = band_edge_closed_form(p), band_edge_asymptotic(p)
    x2 = asym.expansion_parameter**2
    scale = 0.5 * abs(1 - p.delta + p.a)
    for c, s in ((cf.eps_plus, asym.eps_plus), (cf.eps_minus, asym.eps_minus)):
        assert abs(c - s) / scale <= x2**2 / 8 * (1 + 1e-6) + 1e-15
    assert abs(cf.eps_minus - asym.eps_minus) / cf.eps_minus < x2


def test_asymptotic_repulsive_matches_closed_form():
    p = P01_1
    cf, asym = band_edge_closed_form(p, Branch.REPULSIVE), band_edge_asymptotic(p, Branch.REPULSIVE)
    x2 = asym.expansion_parameter**2
    scale = 0.5 * abs(1 - p.delta - p.a)
    assert abs(cf.eps_plus - asym.eps_plus) / scale < x2
    assert abs(cf.eps_minus - asym.eps_minus) / scale < x2


def test_asymptotic_warning():
    p = NormalizedParams(a=1.0, b=5.0, delta=3.0)
    assert band_edge_asymptotic(p).warning is not None
    assert band_edge_asymptotic(norm(0.5, 10.0)).warning is None


def test_repulsive_existence():
    for bg in PRESET_COMBOS:
        r = repulsive_existence(norm(*bg))
        assert not r.exists and r.margin < 0
    r = repulsive_existence(norm(0.1, 100.0))
    assert r.exists and r.margin > 0
    assert not repulsive_existence(norm(0.5, 1e-6)).exists


@pytest.mark.parametrize("bg, positive", [((0.1, 100.0), True)] + [(bg, False) for bg in PRESET_COMBOS])
def test_existence_is_sign_of_coupling_at_leading_root(bg, positive):
    p = norm(*bg)
    assert (effective_coupling(p.delta + p.a, PI, p) > 0) is positive
    assert repulsive_existence(p).exists is positive


def test_scan_structure():
    s = scan_bands(P01_1)
    assert len(s.k) == 401 and s.k[0] == -PI and s.k[-1] == PI and s.k[200] == 0.0
    e1, e2 = s.band1.energies(), s.band2.energies()
    assert np.array_equal(e1, e1[::-1]) or np.max(np.abs(e1 - e1[::-1])) < 1e-11
    assert np.max(np.abs(e2 - e2[::-1])) < 1e-11
    cf = band_edge_closed_form(P01_1)
    assert abs(e1[0] - cf.eps_minus) < 1e-10 and abs(e1[-1] - cf.eps_minus) < 1e-10
    assert abs(e2[0] - cf.eps_plus) < 1e-10
    assert np.allclose(s.photon, -np.cos(s.k))


def test_scan_gaps_are_none():
    p = dataclasses.replace(P01_1, b=0.0)
    s = scan_bands(p, spectrum.k_grid(11))
    assert all(pt is None for pt in s.band2.points)
    assert all(pt is not None for pt in s.band1.points)


def test_scan_rejects_bad_grid():
    with pytest.raises(DomainError):
        scan_bands(P01_1, [0.0, 4.0])
    with pytest.raises(DomainError):
        spectrum.k_grid(400)


def test_band2_tracks_photon_line_large_beta():
    s = scan_bands(P05_02)
    assert np.max(np.abs(s.band2.energies() - s.photon)) < 1e-2


def test_flatness():
    curve = spectrum.BandCurve(k=np.zeros(3), points=[
        spectrum.BandPoint(0.0, 2.0, Band.BAND1, 0.0, -1.0)] * 3, params=P01_1, band=Band.BAND1)
    assert flatness(curve).bandwidth == 0.0
    assert flatness(scan_bands(norm(0.1, 10.0)).band1).relative < 0.01
    p = norm(0.1, 0.2)
    assert flatness(scan_bands(p).band1).bandwidth == pytest.approx(1 / (2 * p.a), rel=0.02)
    with pytest.raises(DomainError):
        flatness(spectrum.BandCurve(np.zeros(1), [None], P01_1, Band.BAND1))
