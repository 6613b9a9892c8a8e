"""The ordered verification suite: one function per suite name, each
returning report rows; run_suite stitches them together, writes the CSV,
and returns a nonzero status iff a hard check failed.

Suite order: hecke, gauss, ramanujan, charsum, bessel, voronoi, twisted,
circle, shifted, exponent.  Soft (bound-comparison) rows carry an infinite
tolerance and always pass; their measured constants live in the parameters
column.  Stability assertions over soft constants are hard rows.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np
from sympy import primerange

from .. import circle, sums, voronoi
from ..characters import (
    additive_expansion,
    enumerate_characters,
    gauss_sum,
    primitive_characters,
)
from ..forms import SUPPORTED_WEIGHTS, cached_form
from ..special import bessel_branch_values, bessel_seam, window
from .config import HarnessConfig
from .exponents import DISCREPANCY_NOTE, exponent_calculator
from .report import make_report, write_csv

SUITE_ORDER = (
    "hecke",
    "gauss",
    "ramanujan",
    "charsum",
    "bessel",
    "voronoi",
    "twisted",
    "circle",
    "shifted",
    "exponent",
)

SOFT = float("inf")


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def _suite_hecke(cfg: HarnessConfig):
    reports = []
    limit = 2000
    for weight in SUPPORTED_WEIGHTS:
        form = cached_form(weight, limit)
        t0 = time.perf_counter()

        worst = (-1, 2, 3, form.a(6), form.a(2) * form.a(3))
        for m in range(2, int(math.isqrt(limit)) + 1):
            for n in range(m + 1, limit // m + 1):
                if math.gcd(m, n) != 1:
                    continue
                lhs, rhs = form.a(m * n), form.a(m) * form.a(n)
                dev = abs(lhs - rhs)
                if dev > worst[0]:
                    worst = (dev, m, n, lhs, rhs)
        reports.append(
            make_report(
                "hecke_multiplicativity",
                {"weight": weight, "limit": limit, "m": worst[1], "n": worst[2]},
                worst[3],
                worst[4],
                0.0,
                time.perf_counter() - t0,
            )
        )

        worst = (
            -1,
            2,
            2,
            form.a(4),
            form.a(2) * form.a(2) - 2 ** (weight - 1),
        )
        for p in (2, 3, 5, 7, 11, 13):
            pj = p
            while pj * p <= limit:
                # a(p^{j+1}) = a(p) a(p^j) - p^{k-1} a(p^{j-1}); a(1) = 1
                lhs = form.a(pj * p)
                rhs = form.a(p) * form.a(pj) - p ** (weight - 1) * form.a(pj // p)
                dev = abs(lhs - rhs)
                if dev > worst[0]:
                    worst = (dev, p, pj, lhs, rhs)
                pj *= p
        reports.append(
            make_report(
                "hecke_prime_power_recursion",
                {"weight": weight, "limit": limit, "p": worst[1], "pj": worst[2]},
                worst[3],
                worst[4],
                0.0,
            )
        )

        lam = form.normalized[1 : limit + 1]
        ns = np.arange(1, limit + 1)
        divisor_counts = np.zeros(limit + 1)
        for d in range(1, limit + 1):
            divisor_counts[d::d] += 1
        margin = np.abs(lam) / divisor_counts[1:]
        i_worst = int(np.argmax(margin))
        reports.append(
            make_report(
                "hecke_eigenvalue_divisor_bound",
                {"weight": weight, "limit": limit, "n": int(ns[i_worst])},
                abs(lam[i_worst]),
                divisor_counts[1 + i_worst],
                SOFT if margin[i_worst] <= 1.0 else 0.0,
            )
        )
        reports[-1].passed = bool(margin[i_worst] <= 1.0)
        reports[-1].tolerance = 1.0

    delta = cached_form(12, 1000)
    worst = (0, 1, 0, 0)
    for n in range(1, 1001):
        s11 = sum(d**11 for d in range(1, n + 1) if n % d == 0)
        dev = (delta.a(n) - s11) % 691
        if dev > worst[0]:
            worst = (dev, n, delta.a(n) % 691, s11 % 691)
    reports.append(
        make_report(
            "tau_congruence_mod_691",
            {"limit": 1000, "n": worst[1]},
            worst[2],
            worst[3],
            0.0,
        )
    )
    return reports


def _suite_gauss(cfg: HarnessConfig):
    reports = []
    tol = cfg.gauss_tolerance
    for p in primerange(3, 102):
        chars = primitive_characters(p)
        taus = [gauss_sum(c) for c in chars]
        t0 = time.perf_counter()

        devs = [abs(abs(t) ** 2 - p) for t in taus]
        j = int(np.argmax(devs))
        reports.append(
            make_report(
                "gauss_modulus_squared",
                {"p": p, "chi_index": chars[j].index},
                abs(taus[j]) ** 2,
                p,
                tol,
                time.perf_counter() - t0,
            )
        )

        devs = []
        for c, t in zip(chars, taus):
            t_bar = gauss_sum(c.conjugate())
            devs.append(abs(t * t_bar - c.parity() * p))
        j = int(np.argmax(devs))
        c = chars[j]
        reports.append(
            make_report(
                "gauss_conjugate_product",
                {"p": p, "chi_index": c.index},
                taus[j] * gauss_sum(c.conjugate()),
                c.parity() * p,
                tol,
            )
        )

        devs = []
        picks = []
        for c in chars[:: max(1, len(chars) // 8)]:
            for m in (1, 2, p - 1, p + 3):
                devs.append(abs(additive_expansion(c, m) - c.chi(m)))
                picks.append((c, m))
        j = int(np.argmax(devs))
        c, m = picks[j]
        reports.append(
            make_report(
                "gauss_additive_expansion",
                {"p": p, "chi_index": c.index, "m": m},
                additive_expansion(c, m),
                c.chi(m),
                tol,
            )
        )
    return reports


def _suite_ramanujan(cfg: HarnessConfig):
    reports = []
    t0 = time.perf_counter()
    worst = (0.0, 1, 0)
    for q in range(1, 51):
        for n in range(-50, 51):
            lhs = sums.ramanujan_sum(q, n)
            rhs = sums.ramanujan_sum_direct(q, n)
            dev = abs(lhs - rhs)
            if dev > worst[0]:
                worst = (dev, q, n)
    q, n = worst[1], worst[2]
    reports.append(
        make_report(
            "ramanujan_vs_direct_grid",
            {"q_max": 50, "n_max": 50, "worst_q": q, "worst_n": n},
            sums.ramanujan_sum(q, n),
            sums.ramanujan_sum_direct(q, n),
            1e-9,
            time.perf_counter() - t0,
        )
    )
    for (q, n), expected in (((6, 1), 1), ((4, 2), -2), ((12, 0), 4)):
        reports.append(
            make_report(
                "ramanujan_fixture",
                {"q": q, "n": n},
                sums.ramanujan_sum(q, n),
                expected,
                0.0,
            )
        )
    return reports


def _suite_charsum(cfg: HarnessConfig):
    reports = []
    for p in (3, 5, 7):
        t0 = time.perf_counter()
        worst = (0.0, None)
        count = 0
        for ch in primitive_characters(p):
            for q in (1, 2, 3, 4, 6, 8, 9, 12):
                if math.gcd(q, p) != 1:
                    continue
                for m in range(1, 13):
                    for n in range(1, 13):
                        for conv in ("plus", "minus"):
                            inst = sums.CharSumInstance(p, q, ch, m, n, conv)
                            bf = sums.char_sum_bruteforce(inst)
                            cf = sums.char_sum_closed(inst)
                            count += 1
                            dev = abs(bf - cf)
                            if dev > worst[0]:
                                worst = (dev, (inst, bf, cf))
        inst, bf, cf = worst[1]
        reports.append(
            make_report(
                "charsum_closed_vs_bruteforce",
                {
                    "p": p,
                    "cases": count,
                    "worst_q": inst.q,
                    "worst_m": inst.m,
                    "worst_n": inst.n,
                    "worst_convention": inst.convention,
                },
                bf,
                cf,
                cfg.charsum_tolerance,
                time.perf_counter() - t0,
            )
        )
    ch3 = primitive_characters(3)[0]
    root3 = math.sqrt(3.0)
    for conv, expected in (("plus", 1j * root3), ("minus", -1j * root3)):
        inst = sums.CharSumInstance(3, 2, ch3, 1, 1, conv)
        reports.append(
            make_report(
                "charsum_hand_fixture",
                {"p": 3, "q": 2, "m": 1, "n": 1, "convention": conv},
                sums.char_sum_bruteforce(inst),
                expected,
                1e-12,
            )
        )
    return reports


def _suite_bessel(cfg: HarnessConfig):
    reports = []
    for order in range(0, 31):
        seam = bessel_seam(order)
        lo, hi = bessel_branch_values(order, seam)
        reports.append(
            make_report(
                "bessel_seam_continuity",
                {"order": order, "seam": seam},
                lo,
                hi,
                1e-9,
            )
        )
    return reports


def _suite_voronoi(cfg: HarnessConfig):
    reports = []
    cases = [(12, 1, 0, 50.0), (12, 5, 2, 50.0), (16, 3, 1, 50.0)]
    for weight, q, a, y in cases:
        form = cached_form(weight, 40000)
        t0 = time.perf_counter()
        job = voronoi.VoronoiJob(form, a, q, y, truncation=cfg.truncation)
        lhs = voronoi.direct_side(job)
        rhs = voronoi.hankel_side(job)
        reports.append(
            make_report(
                "voronoi_identity",
                {"weight": weight, "q": q, "a": a, "Y": y},
                lhs,
                rhs,
                cfg.voronoi_tolerance,
                time.perf_counter() - t0,
            )
        )
    return reports


def _suite_twisted(cfg: HarnessConfig):
    reports = []
    g = cached_form(12, 40000)
    ch = primitive_characters(3)[0]
    a, q, n_len = 1, 2, 40
    x = 1.0 / (4 * n_len)
    t0 = time.perf_counter()
    direct = voronoi.twisted_T_direct(g, ch, a, q, x, n_len)
    via_minus = voronoi.twisted_T_voronoi(
        g, ch, a, q, x, n_len, convention="minus"
    )
    via_plus = voronoi.twisted_T_voronoi(
        g, ch, a, q, x, n_len, convention="plus"
    )
    reports.append(
        make_report(
            "twisted_identity_pinned_convention",
            {"p": 3, "q": q, "a": a, "N": n_len, "convention": "minus"},
            direct,
            via_minus,
            cfg.twisted_tolerance,
            time.perf_counter() - t0,
        )
    )
    contrast = make_report(
        "twisted_convention_contrast",
        {
            "p": 3,
            "q": q,
            "a": a,
            "N": n_len,
            "rejected_convention": "plus",
            "note": "rejected sign must disagree with the direct sum",
        },
        direct,
        via_plus,
        cfg.twisted_tolerance,
    )
    contrast.passed = contrast.rel_error > 1e-2  # resolution is decisive
    reports.append(contrast)
    return reports


def _suite_circle(cfg: HarnessConfig):
    reports = []
    p_avoid = 13

    fam = circle.build_family(p_avoid, 10, 20, 1e-3)
    reports.append(
        make_report(
            "circle_approximant_mass",
            {"p_avoid": p_avoid, "Q": 10, "delta": 1e-3},
            circle.i_tilde_mass(fam),
            1.0,
            1e-9,
        )
    )

    ratios = []
    for q_size in (10, 20, 40, 80):
        for delta in (1e-3, 1e-4):
            fam = circle.build_family(p_avoid, q_size, 2 * q_size, delta)
            err = circle.l2_error(fam)
            bound = q_size * q_size / (delta * fam.L**2)
            ratios.append(err / bound)
            reports.append(
                make_report(
                    "circle_l2_ratio",
                    {"Q": q_size, "delta": delta, "L": fam.L, "soft": 1},
                    err,
                    bound,
                    SOFT,
                )
            )
    single_c = make_report(
        "circle_l2_single_constant",
        {"ladder": "Q in 10..80, delta in 1e-3,1e-4", "C": 1.0},
        max(ratios),
        1.0,
        1.0,
    )
    single_c.passed = max(ratios) <= 1.0
    reports.append(single_c)

    f = cached_form(12, 8000)
    g = cached_form(16, 8000)
    chars = enumerate_characters(p_avoid)
    mean_ratios = []
    for n_len in (500, 1000, 2000):
        t0 = time.perf_counter()
        q_size = math.ceil(n_len**0.55)
        delta = 1.0 / n_len
        fam = circle.build_family(p_avoid, q_size, 2 * q_size, delta)
        denom = n_len * math.sqrt(q_size**2 / (delta * fam.L**2))
        devs = []
        for idx in (1, 2, 3):
            ch = chars[idx]
            sd = circle.s_direct(f, g, ch, n_len)
            st = circle.s_tilde(f, g, ch, n_len, fam, nodes=cfg.quadrature_nodes)
            devs.append(abs(sd - st))
        mean_ratios.append(float(np.mean(devs)) / denom)
        reports.append(
            make_report(
                "circle_direct_vs_tilde_ratio",
                {"N": n_len, "Q": q_size, "L": fam.L, "soft": 1},
                float(np.mean(devs)),
                denom,
                SOFT,
                time.perf_counter() - t0,
            )
        )
    stability = make_report(
        "circle_ratio_stability",
        {"grid": "N in 500,1000,2000", "factor": 4},
        max(mean_ratios),
        min(mean_ratios),
        4.0,
    )
    stability.passed = max(mean_ratios) <= 4.0 * min(mean_ratios)
    reports.append(stability)
    return reports


def _oracle_shifted(form, q1, q1p, shift, m_len):
    win = window("bump_unit")
    lam = form.normalized
    lo = max(1, math.floor(m_len / 2))
    us = np.arange(lo, 3 * m_len + 1)
    total = 0.0
    for u in us:
        top = q1p * int(u) - shift
        if top <= 0 or top % q1:
            continue
        v = top // q1
        if lo <= v <= 3 * m_len:
            total += lam[u] * lam[v] * win(u / m_len) * win(v / m_len)
    return total


def _suite_shifted(cfg: HarnessConfig):
    reports = []
    form = cached_form(12, 8000)
    for q1, q1p, shift, m_len in (
        (2, 3, 0, 200),
        (3, 2, 12, 500),
        (5, 3, -30, 300),
        (2, 2, 4, 400),
    ):
        t0 = time.perf_counter()
        lhs = sums.shifted_convolution(form, q1, q1p, shift, m_len)
        rhs = _oracle_shifted(form, q1, q1p, shift, m_len)
        reports.append(
            make_report(
                "shifted_convolution_vs_oracle",
                {"q1": q1, "q1p": q1p, "shift": shift, "M": m_len},
                lhs,
                rhs,
                1e-12,
                time.perf_counter() - t0,
            )
        )
        ratio = sums.shifted_convolution_bound_ratio(form, q1, q1p, shift, m_len)
        reports.append(
            make_report(
                "shifted_convolution_bound_ratio",
                {"q1": q1, "q1p": q1p, "shift": shift, "M": m_len,
                 "theta": "7/64", "soft": 1},
                abs(lhs),
                float(q1p * m_len + q1 * m_len) ** (0.5 + 7 / 64),
                SOFT,
            )
        )
        reports[-1].rel_error = ratio
    return reports


def _suite_exponent(cfg: HarnessConfig):
    reports = []
    paper = exponent_calculator(0, "paper")
    fixtures = [
        ("exponent_paper_final", paper.final_exponent, Fraction(27, 28)),
        ("exponent_paper_eta", paper.eta, Fraction(1, 14)),
        ("exponent_paper_q1", paper.q1_exp, Fraction(1, 5) + Fraction(1, 140)),
        ("exponent_paper_q3", paper.q3_exp, Fraction(2, 5) + Fraction(1, 70)),
        ("exponent_paper_q4", paper.q4_exp, Fraction(2, 5) + Fraction(1, 70)),
    ]
    balanced = exponent_calculator(0, "balanced")
    fixtures += [
        ("exponent_balanced_final", balanced.final_exponent, Fraction(18, 19)),
        ("exponent_balanced_eta", balanced.eta, Fraction(2, 19)),
    ]
    h = exponent_calculator(Fraction(7, 64), "h_theta")
    fixtures.append(
        (
            "exponent_h_theta_record",
            h.final_exponent,
            Fraction(19, 20) + Fraction(202, 100) * Fraction(7, 64),
        )
    )
    for name, got, expected in fixtures:
        r = make_report(
            name,
            {"exact": f"{got}"},
            float(got),
            float(expected),
            0.0,
        )
        r.passed = got == expected  # exact rational equality
        reports.append(r)
    print(DISCREPANCY_NOTE)
    return reports


_SUITES = {
    "hecke": _suite_hecke,
    "gauss": _suite_gauss,
    "ramanujan": _suite_ramanujan,
    "charsum": _suite_charsum,
    "bessel": _suite_bessel,
    "voronoi": _suite_voronoi,
    "twisted": _suite_twisted,
    "circle": _suite_circle,
    "shifted": _suite_shifted,
    "exponent": _suite_exponent,
}


def run_suite(config: HarnessConfig = None):
    """Run the selected suites in order; returns (reports, exit_status)."""
    cfg = config or HarnessConfig()
    selected = SUITE_ORDER
    if cfg.only:
        wanted = [s.strip() for s in cfg.only.split(",") if s.strip()]
        unknown = [s for s in wanted if s not in _SUITES]
        if unknown:
            raise ValueError(f"unknown suite name(s): {unknown}")
        selected = [s for s in SUITE_ORDER if s in wanted]
    reports = []
    for name in selected:
        rows = _SUITES[name](cfg)
        reports.extend(rows)
    if cfg.out:
        write_csv(reports, cfg.out)
    status = 0 if all(r.passed for r in reports) else 1
    return reports, status
