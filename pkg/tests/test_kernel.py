"""Kernel, flow projections, transition identity, and separation scans."""

import math
from fractions import Fraction

import numpy as np
import pytest

import weierlab.kernel as K
import weierlab.phi as P
from weierlab import make_params

import oracle


def _p2():
    return make_params(2, 0.7)


def test_word_reverse():
    w = K.Word((1, 0, 1, 1))
    assert w.reverse().symbols == (1, 1, 0, 1)
    assert len(w) == 4


def test_code_symbols_and_shift():
    """Eventually periodic codes index and shift like the digit stream."""
    c = K.periodic_code(2, (1,), (0, 1))
    assert [c.symbol(i) for i in range(6)] == [1, 0, 1, 0, 1, 0]
    s = c.shift()
    assert [s.symbol(i) for i in range(5)] == [0, 1, 0, 1, 0]
    p = c.prepend((0, 1))
    assert [p.symbol(i) for i in range(5)] == [0, 1, 1, 0, 1]


def test_seeded_code_is_reproducible():
    a = K.seeded_code(2, 42)
    bcode = K.seeded_code(2, 42)
    assert a.prefix(64) == bcode.prefix(64)
    shifted = a.shift()
    assert shifted.prefix(10) == a.prefix(11)[1:]
    assert K.seeded_code(2, 43).prefix(64) != a.prefix(64)


def test_code_validation():
    with pytest.raises(ValueError, match="exactly one"):
        K.Code(b=2, cycle=(0,), seed=(1,))
    with pytest.raises(ValueError, match="out of range"):
        K.periodic_code(2, (), (2,))


def test_code_offsets_exact_values():
    """o_n stacks the first n symbols as reversed digits over b^n."""
    c = K.periodic_code(2, (1, 0, 1), (1,))
    offs = K.code_offsets_exact(c, 3)
    assert offs == [Fraction(1, 2), Fraction(1, 4), Fraction(5, 8)]
    floats = K.code_offsets(c, 3)
    assert np.max(np.abs(floats - [0.5, 0.25, 0.625])) == 0.0


def test_offsets_float_rounding():
    c = K.seeded_code(3, 5)
    exact = K.code_offsets_exact(c, 40)
    floats = K.code_offsets(c, 40)
    err = [abs(float(e) - f) for e, f in zip(exact, floats)]
    assert max(err) < 1e-15


def test_kernel_matches_high_precision_sum():
    """Y agrees with the 50-digit reference over periodic and seeded codes."""
    cos = P.cos_phi()
    p = _p2()
    for code in [K.periodic_code(2, (), (1, 0)), K.seeded_code(2, 7)]:
        offs = K.code_offsets_exact(code, 200)
        for x in [0.0, 0.3, 0.5, 0.99]:
            ref = oracle.mp_y_cos(2, 0.7, x, offs)
            assert abs(K.eval_y(p, cos, x, code) - ref) < 5e-10


def test_kernel_oracle_base_three():
    p = make_params(3, 0.5)
    code = K.periodic_code(3, (2,), (0, 1))
    offs = K.code_offsets_exact(code, 150)
    for x in [0.2, 0.9]:
        ref = oracle.mp_y_cos(3, 0.5, x, offs)
        assert abs(K.eval_y(p, P.cos_phi(), x, code) - ref) < 5e-10


def test_kernel_vec_matches_scalar():
    p = _p2()
    code = K.periodic_code(2, (), (1, 0))
    xs = np.linspace(0, 1, 257)
    v = K.eval_y_vec(p, P.cos_phi(), xs, code)
    s = np.array([K.eval_y(p, P.cos_phi(), float(x), code) for x in xs])
    assert np.max(np.abs(v - s)) < 1e-12


def test_kernel_rejects_discontinuous_generator():
    with pytest.raises(ValueError, match="discontinuous"):
        K.eval_y(_p2(), P.rademacher_phi(), 0.3, K.seeded_code(2, 0))


def test_analytic_kernel_equals_w_derivative():
    """When W = cos(2 pi x), every code gives the same kernel, namely W'."""
    p = _p2()
    an = P.phi_from_w0(P.cos_phi(), 2, 0.7)
    xs = np.linspace(0, 1, 257)
    ref = -2 * np.pi * np.sin(2 * np.pi * xs)
    for code in [K.periodic_code(2, (), (1, 0)), K.seeded_code(2, 3)]:
        v = K.eval_y_vec(p, an, xs, code)
        assert np.max(np.abs(v - ref)) < 1e-8


def test_gamma_matches_quadrature():
    """Stable increments agree with adaptive quadrature of the kernel."""
    p = _p2()
    cos = P.cos_phi()
    code = K.periodic_code(2, (), (1, 0))
    for x in [0.3, 0.7, 1.0]:
        got = K.eval_gamma(p, cos, x, code)
        ref = oracle.quad_gamma(lambda t: K.eval_y(p, cos, t, code), x)
        assert abs(got - ref) < 1e-8


def test_gamma_prime_is_kernel():
    p = _p2()
    cos = P.cos_phi()
    code = K.seeded_code(2, 11)
    for x in [0.2, 0.5, 0.8]:
        cd = oracle.central_difference(
            lambda t: K.eval_gamma(p, cos, t, code), x, 1e-6
        )
        assert abs(cd - K.eval_y(p, cos, x, code)) < 1e-6


def test_gamma_at_zero_and_vectorized():
    p = _p2()
    cos = P.cos_phi()
    code = K.periodic_code(2, (), (0, 1))
    assert K.eval_gamma(p, cos, 0.0, code) == 0.0
    xs = np.random.default_rng(0).random(200)
    gv = K.eval_gamma_vec(p, cos, xs, code)
    gs = np.array([K.eval_gamma(p, cos, float(x), code) for x in xs])
    assert np.max(np.abs(gv - gs)) < 1e-9


def test_gamma_first_order_at_tiny_arguments():
    """Far below machine epsilon the increment linearizes without noise."""
    p = _p2()
    cos = P.cos_phi()
    code = K.periodic_code(2, (), (1, 0))
    x = 2.0**-100
    y0 = K.eval_y(p, cos, 0.0, code)
    got = K.eval_gamma(p, cos, x, code)
    assert got == pytest.approx(x * y0, rel=1e-12)


def test_apply_ifs_preserves_graph():
    """Graph points map to graph points under every branch map.

    Points with short mantissas keep (x + i) / b exact; a generic float
    would shift by an ulp and the rough graph amplifies that to 1e-8.
    """
    import weierlab.weier as W

    p = _p2()
    cos = P.cos_phi()
    for x in [0.125, 0.6875, 0.3125]:
        y = W.eval_w(p, cos, x)
        for i in range(2):
            xn, yn = K.apply_ifs(p, cos, i, x, y)
            assert yn == pytest.approx(W.eval_w(p, cos, xn), abs=1e-11)
    with pytest.raises(ValueError):
        K.apply_ifs(p, cos, 2, 0.1, 0.0)


def test_apply_word_digit_convention():
    """The word gives the base-b digits of the image cell, leading digit first."""
    p = _p2()
    cos = P.cos_phi()
    x, y = 0.3, -0.2
    xn, _ = K.apply_word(p, cos, (1, 0), x, y)
    assert xn == pytest.approx((x + 0 + 1 * 2) / 4)
    xe, ye = K.apply_word(p, cos, (), x, y)
    assert (xe, ye) == (x, y)


def test_transition_identity():
    """pi(g_u p) = lam^|u| pi_shifted(p) + pi(g_u 0) over random data."""
    p = _p2()
    cos = P.cos_phi()
    rng = np.random.default_rng(1)
    worst = 0.0
    for i in range(120):
        length = int(rng.integers(1, 7))
        word = tuple(int(t) for t in rng.integers(0, 2, length))
        x, y = float(rng.random()), float(rng.random()) * 4 - 2
        code = K.seeded_code(2, int(i))
        worst = max(worst, K.transition_residual(p, cos, word, code, x, y))
    assert worst < 1e-11


def test_transition_identity_triangle():
    p = make_params(2, 0.6)
    tri = P.triangle_phi()
    rng = np.random.default_rng(2)
    worst = 0.0
    for i in range(40):
        length = int(rng.integers(1, 5))
        word = tuple(int(t) for t in rng.integers(0, 2, length))
        code = K.seeded_code(2, int(i))
        worst = max(worst, K.transition_residual(
            p, tri, word, code, float(rng.random()), float(rng.random())))
    assert worst < 1e-11


def test_separation_sup_basic():
    p = _p2()
    cos = P.cos_phi()
    u = K.periodic_code(2, (0,), (0, 1))
    v = K.periodic_code(2, (1,), (0, 1))
    r = K.separation_sup(p, cos, u, v, 1 << 10)
    assert not r.identical
    assert r.sup > 1.0
    same = K.separation_sup(p, cos, u, u)
    assert same.identical and same.sup == 0.0
    raw = K.separation_sup(p, cos, u, v, 1 << 10, refine=False)
    assert r.sup >= raw.sup - 1e-12


def test_separation_sup_analytic_degenerate():
    p = _p2()
    an = P.phi_from_w0(P.cos_phi(), 2, 0.7)
    u = K.periodic_code(2, (0,), (0, 1))
    v = K.periodic_code(2, (1,), (0, 1))
    r = K.separation_sup(p, an, u, v, 1 << 10)
    assert r.sup < 1e-8


def test_condition_h_scan_classifications():
    """Rough cosine scans as distinct directions, the analytic twin as merged."""
    p = _p2()
    rough = K.condition_h_scan(p, P.cos_phi(), depth=1, samples_per_pair=2,
                               grid_size=1 << 10)
    assert rough.classification == "H-evidence"
    assert rough.min_sep > 1e-6
    an = P.phi_from_w0(P.cos_phi(), 2, 0.7)
    smooth = K.condition_h_scan(p, an, depth=1, samples_per_pair=2,
                                grid_size=1 << 10)
    assert smooth.classification == "H*-evidence"
    assert smooth.max_sep < 1e-8


def test_h_scan_csv():
    p = _p2()
    rep = K.condition_h_scan(p, P.cos_phi(), depth=1, samples_per_pair=1,
                             grid_size=1 << 8)
    lines = K.h_scan_to_csv(rep).strip().splitlines()
    assert lines[0] == "u_prefix,v_prefix,seed,sep"
    assert len(lines) == 1 + len(rep.rows)
    for row in lines[1:]:
        ua, vb, s, sep = row.split(",")
        int(s)
        float(sep)


def test_k_regularity_reports():
    p = _p2()
    cos = P.cos_phi()
    u = K.periodic_code(2, (0,), (0, 1))
    v = K.periodic_code(2, (1,), (0, 1))
    rep = K.k_regularity(p, cos, u, v, level=1, k_max=3)
    assert len(rep.rows) == 2
    assert not rep.degenerate
    an = P.phi_from_w0(P.cos_phi(), 2, 0.7)
    rep2 = K.k_regularity(p, an, u, v, level=1, k_max=2)
    assert rep2.degenerate
    tri = K.k_regularity(make_params(2, 0.6), P.triangle_phi(), u, v, level=1, k_max=3)
    assert tri.truncated_k == 1


def test_transversality_pairs_and_certificate():
    p = _p2()
    pairs = K.transversality_pairs(p, count=4)
    assert len(pairs) == 4
    for u, v in pairs:
        assert u.symbol(0) != v.symbol(0)
    rep = K.transversality_certificate(p, P.cos_phi(), pairs, l0=2)
    assert 0.0 < rep.rho0_hat <= 1.0
    assert rep.rho0_hat <= rep.median_ratio <= 1.0
    for entry in rep.per_pair:
        assert 0.0 <= entry["ratio"] <= 1.0
        assert entry["lhs"] <= entry["rhs_sup"] + 1e-12


def test_transversality_identical_pair_scores_zero():
    p = _p2()
    u = K.periodic_code(2, (), (0, 1))
    rep = K.transversality_certificate(p, P.cos_phi(), [(u, u)], l0=1)
    assert rep.per_pair[0]["identical"]
    assert rep.rho0_hat == 0.0


def test_transversality_stability_and_csv():
    p = _p2()
    pairs = K.transversality_pairs(p, count=2)
    level, history = K.transversality_stability(p, P.cos_phi(), pairs, l0_max=3)
    assert 1 <= level <= 3
    assert set(history) == {1, 2, 3}
    rep = K.transversality_certificate(p, P.cos_phi(), pairs, l0=2)
    lines = K.certificate_to_csv(rep).strip().splitlines()
    assert lines[0] == "interval_index,inf,sup"
    assert len(lines) == 1 + 4
    for row in lines[1:]:
        idx, lo, hi = row.split(",")
        int(idx)
        assert 0.0 <= float(lo) <= float(hi)
