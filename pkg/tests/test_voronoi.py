"""Both sides of the summation identity, the twisted variant, and the
supporting modular arithmetic."""

import math

import numpy as np
import pytest

from subconv import characters, forms, voronoi
from subconv.errors import NonInvertibleError, TableTooShortError


def test_mod_inverse():
    assert voronoi.mod_inverse(3, 7) == 5
    assert voronoi.mod_inverse(1, 2) == 1
    assert voronoi.mod_inverse(0, 1) == 0
    assert voronoi.mod_inverse(10, 7) == 5
    with pytest.raises(NonInvertibleError):
        voronoi.mod_inverse(6, 9)


def test_job_validation():
    f = forms.cached_form(12, 200)
    with pytest.raises(NonInvertibleError):
        voronoi.VoronoiJob(f, 2, 4, 50.0)
    with pytest.raises(ValueError):
        voronoi.VoronoiJob(f, 1, 0, 50.0)
    with pytest.raises(ValueError):
        voronoi.VoronoiJob(f, 1, 3, 0.5)


def test_direct_side_matches_plain_loop():
    f = forms.cached_form(12, 500)
    job = voronoi.VoronoiJob(f, 2, 7, 100.0, x_shift=0.013)
    got = voronoi.direct_side(job)
    want = 0j
    for n in range(100, 201):
        want += (
            f.lam(n)
            * np.exp(2j * np.pi * (2 * n / 7 + 0.013 * n))
            * job.window(n / 100.0)
        )
    assert got == pytest.approx(want, abs=1e-12)


def test_direct_side_table_too_short():
    f = forms.cached_form(12, 50)
    with pytest.raises(TableTooShortError):
        voronoi.direct_side(voronoi.VoronoiJob(f, 1, 3, 40.0))


def test_identity_at_modulus_one():
    f = forms.cached_form(12, 40000)
    job = voronoi.VoronoiJob(f, 0, 1, 50.0)
    lhs = voronoi.direct_side(job)
    rhs = voronoi.hankel_side(job)
    assert abs(lhs - rhs) / (abs(lhs) + 1.0) <= 1e-6


def test_identity_documented_instance():
    f = forms.cached_form(12, 40000)
    job = voronoi.VoronoiJob(f, 2, 5, 50.0)
    lhs = voronoi.direct_side(job)
    rhs = voronoi.hankel_side(job)
    assert abs(lhs - rhs) / (abs(lhs) + 1.0) <= 1e-6


def test_truncation_doubling_is_negligible():
    f = forms.cached_form(12, 40000)
    base = voronoi.hankel_side(voronoi.VoronoiJob(f, 1, 3, 50.0))
    doubled = voronoi.hankel_side(
        voronoi.VoronoiJob(f, 1, 3, 50.0, truncation=2 * voronoi.DEFAULT_TRUNCATION)
    )
    assert abs(base - doubled) < 1e-9


def test_partial_sums_converge_to_full_value():
    f = forms.cached_form(12, 40000)
    job = voronoi.VoronoiJob(f, 1, 3, 50.0, truncation=2000)
    partial = voronoi.hankel_partial_sums(job)
    full = voronoi.hankel_side(job)
    assert partial[-1] == pytest.approx(full, abs=1e-8)
    direct = voronoi.direct_side(job)
    early = abs(partial[20] - direct)
    late = abs(partial[-1] - direct)
    assert late < early


def test_dual_length_scales_like_q_squared_over_y():
    """The first truncation index beyond which the dual partial sums stay
    within 1e-8 of their limit should scale like q^2/Y across (q, Y)."""
    f = forms.cached_form(12, 40000)
    normalized = []
    for q, a, y, trunc in ((3, 1, 50.0, 2500), (5, 2, 50.0, 2500),
                           (3, 1, 200.0, 2500), (5, 2, 200.0, 2500)):
        job = voronoi.VoronoiJob(f, a, q, y, truncation=trunc)
        partial = voronoi.hankel_partial_sums(job)
        limit = partial[-1]
        devs = np.abs(partial - limit)
        beyond = np.where(devs > 1e-8)[0]
        t_star = int(beyond[-1]) + 2 if beyond.size else 1
        assert t_star < len(partial)  # the window actually captured the tail
        normalized.append(t_star * y / (q * q))
    assert max(normalized) / min(normalized) <= 8.0


def test_hankel_raises_when_table_cannot_converge():
    f = forms.cached_form(12, 600)
    with pytest.raises(TableTooShortError):
        voronoi.hankel_side(voronoi.VoronoiJob(f, 3, 7, 50.0))


def test_twisted_direct_edges_and_oracle():
    g = forms.cached_form(12, 2000)
    chi = characters.primitive_characters(5)[0]
    assert voronoi.twisted_T_direct(g, chi, 1, 2, 0.0, 0) == 0
    n_len = 80
    got = voronoi.twisted_T_direct(g, chi, 0, 1, 0.0, n_len)
    win = voronoi.window("plateau_half_52")
    want = sum(
        g.lam(m) * chi.chi(m) * win(m / n_len)
        for m in range(n_len // 2, 3 * n_len)
    )
    assert got == pytest.approx(want, abs=1e-12)


def test_twisted_argument_validation():
    g = forms.cached_form(12, 2000)
    chi = characters.primitive_characters(5)[0]
    with pytest.raises(NonInvertibleError):
        voronoi.twisted_T_direct(g, chi, 2, 4, 0.0, 40)
    with pytest.raises(ValueError):
        voronoi.twisted_T_direct(g, chi, 1, 5, 0.0, 40)
    with pytest.raises(TableTooShortError):
        voronoi.twisted_T_direct(g, chi, 1, 2, 0.0, 1000)
    with pytest.raises(ValueError):
        voronoi.twisted_T_voronoi(g, chi, 1, 2, 0.0, 40, convention="times")


def test_twisted_identity_and_convention_contrast():
    g = forms.cached_form(12, 40000)
    chi = characters.primitive_characters(3)[0]
    direct = voronoi.twisted_T_direct(g, chi, 1, 2, 0.0, 40)
    minus = voronoi.twisted_T_voronoi(g, chi, 1, 2, 0.0, 40, convention="minus")
    plus = voronoi.twisted_T_voronoi(g, chi, 1, 2, 0.0, 40, convention="plus")
    assert abs(direct - minus) / abs(direct) <= 1e-5
    assert abs(direct - plus) / abs(direct) > 1e-2
    assert voronoi.DEFAULT_TWIST_CONVENTION == "minus"


def test_twisted_conjugation_symmetry():
    g = forms.cached_form(12, 40000)
    chi = characters.primitive_characters(5)[1]
    n_len = 40
    x = 1.0 / (4 * n_len)
    lhs = voronoi.twisted_T_direct(g, chi, 1, 4, x, n_len)
    rhs = voronoi.twisted_T_direct(g, chi.conjugate(), -1, 4, -x, n_len)
    assert lhs == pytest.approx(np.conj(rhs), abs=1e-12)
