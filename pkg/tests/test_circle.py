"""Arc families, the indicator approximant, its exact L2 error, and the
direct-vs-approximated twisted sums."""

import math

import numpy as np
import pytest

from subconv import characters, circle, forms
from subconv.errors import EmptyFamilyError, InsufficientPrimesError


def test_family_construction_and_reduced_fractions():
    fam = circle.build_family(7, 1, 6, 1e-3)
    assert fam.phi == (1, 2, 3, 4, 5, 6)
    fractions = fam.reduced_fractions()
    assert len(fractions) == fam.L
    assert (0, 1) in fractions and (1, 2) in fractions
    assert all(math.gcd(d, q) == 1 or q == 1 for d, q in fractions)


def test_family_excludes_the_avoided_prime():
    fam = circle.build_family(5, 2, 12, 1e-3)
    assert 5 not in fam.phi and 10 not in fam.phi


def test_family_errors():
    with pytest.raises(EmptyFamilyError):
        circle.build_family(5, 5, 5, 1e-3)
    with pytest.raises(ValueError):
        circle.build_family(5, 3, 2, 1e-3)
    with pytest.raises(ValueError):
        circle.build_family(5, 1, 4, 0.7)


def test_product_family_structure():
    fam = circle.build_product_family(101, 0.1, 1e-4)
    phi1, phi3, phi4 = fam.product_structure
    assert set(phi1).isdisjoint(phi3) and set(phi1).isdisjoint(phi4)
    assert set(phi3).isdisjoint(phi4)
    products = sorted({a * b * c for a in phi1 for b in phi3 for c in phi4})
    assert list(fam.phi) == products
    with pytest.raises(ValueError):
        circle.build_product_family(10, 0.1, 1e-4)
    with pytest.raises(InsufficientPrimesError):
        circle.build_product_family(11, 1e-6, 1e-4)


def test_approximant_counts_covering_arcs():
    fam = circle.build_family(7, 1, 3, 1e-3)
    height = 1.0 / (2 * fam.delta * fam.L)
    # x = 1/2 is covered by exactly one arc center (1/2 itself)
    assert circle.i_tilde(fam, 0.5) == pytest.approx(height)
    # far from every center, the approximant vanishes
    assert circle.i_tilde(fam, 0.41) == 0.0


def test_approximant_mass_is_one():
    for q_hi, delta in ((6, 1e-3), (15, 1e-4)):
        fam = circle.build_family(7, 1, q_hi, delta)
        assert circle.i_tilde_mass(fam) == pytest.approx(1.0, abs=1e-12)


def test_l2_error_against_riemann_sampling():
    fam = circle.build_family(7, 2, 5, 1e-3)
    exact = circle.l2_error(fam)
    xs = np.linspace(-0.25, 1.25, 600_001)
    vals = np.array([circle.i_tilde(fam, float(x)) for x in xs])
    ind = ((xs >= 0.0) & (xs <= 1.0)).astype(float)
    riemann = float(np.trapezoid((ind - vals) ** 2, xs))
    assert exact == pytest.approx(riemann, rel=2e-2)


def test_l2_error_shrinks_with_larger_families():
    delta = 1e-3
    errs = [
        circle.l2_error(circle.build_family(7, q, 2 * q, delta))
        for q in (10, 20, 40)
    ]
    assert errs[0] > errs[1] > errs[2]


def test_s_direct_matches_plain_loop():
    f = forms.cached_form(12, 1000)
    g = forms.cached_form(16, 1000)
    chi = characters.enumerate_characters(5)[1]
    n_len = 300
    got = circle.s_direct(f, g, chi, n_len)
    win = circle.window("bump_12")
    want = sum(
        f.lam(n) * g.lam(n) * chi.chi(n) * win(n / n_len)
        for n in range(n_len, 2 * n_len + 1)
    )
    assert got == pytest.approx(want, abs=1e-12)
    assert circle.s_direct(f, g, chi, 0) == 0.0


def test_s_tilde_tracks_s_direct():
    f = forms.cached_form(12, 2000)
    g = forms.cached_form(16, 2000)
    chi = characters.enumerate_characters(13)[3]
    n_len = 500
    fam = circle.build_family(13, 31, 62, 1.0 / n_len)
    sd = circle.s_direct(f, g, chi, n_len)
    st = circle.s_tilde(f, g, chi, n_len, fam)
    # the approximation error is controlled by N sqrt(Q^2/(delta L^2))
    bound = n_len * math.sqrt(31**2 / ((1.0 / n_len) * fam.L**2))
    assert abs(sd - st) < 0.05 * bound


def test_s_tilde_node_count_validation():
    f = forms.cached_form(12, 2000)
    g = forms.cached_form(16, 2000)
    chi = characters.enumerate_characters(5)[1]
    fam = circle.build_family(5, 4, 8, 1e-3)
    with pytest.raises(ValueError):
        circle.s_tilde(f, g, chi, 100, fam, nodes=1)
