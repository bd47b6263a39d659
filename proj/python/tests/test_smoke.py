import math

import pytest

import ptlattice as pt


def test_two_site_spectrum():
    spec = pt.LatticeSpec(2, 1, 0.6, pt.HoppingProfile.two_segment(1.0, 1.0))
    s = pt.spectrum(spec)
    assert s.n_complex == 0
    assert sorted(e.real for e in s.eigenvalues) == pytest.approx([-0.8, 0.8], abs=1e-12)


def test_nearest_neighbour_threshold():
    shape = pt.LatticeSpec(20, 10, 0.0, pt.HoppingProfile.two_segment(1.0, 0.7))
    r = pt.find_gamma_c(shape)
    assert r.gamma_c == pytest.approx(0.7, rel=1e-6)
    assert r.n_complex_above == 20


def test_invalid_spec_is_value_error():
    with pytest.raises(ValueError, match="m <= N/2"):
        pt.LatticeSpec(20, 15, 0.0, pt.HoppingProfile.two_segment(1.0, 1.0))
    with pytest.raises(pt.InvalidSpec):
        pt.HoppingProfile.custom([1.0, 2.0, 1.5])


def test_exponent_for_adjacent_impurities():
    grid = pt.log_grid(0.05, 0.3, 8)
    fit = pt.fit_exponent(pt.sweep(20, [1], grid))
    assert fit.eta == pytest.approx(1.0, abs=1e-6)
    assert fit.n_points == 8
    with pytest.raises(pt.InsufficientData):
        pt.fit_exponent(pt.sweep(20, [1], grid[:3]))


def test_fragility_ratio_shrinks():
    pts = pt.fragility_scan(-1.0, [8, 16, 32])
    ratios = [p.ratio for p in pts]
    assert ratios == sorted(ratios, reverse=True)
    assert all(math.isfinite(r) for r in ratios)


def test_oracle_suite_passes():
    checks = pt.verify("oracle", 3)
    assert checks and all(c.passed for c in checks)
