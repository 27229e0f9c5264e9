import math

import numpy as np
import pytest

from toruslab.lattice import frequency_set, trilinear_example
from toruslab.trilinear import (TrilinearError, TrilinearInput, time_kernel,
                                trilinear_alpha_sweep, trilinear_closed_form,
                                trilinear_grid_oracle)

TWO_PI = 2 * math.pi


def _singleton(d, k, coeff=1.0):
    return frequency_set(np.array([k]).reshape(1, d), [coeff])


def test_time_kernel_values():
    assert time_kernel(0.0) == pytest.approx(TWO_PI)
    assert time_kernel(1.0) == pytest.approx(0.0, abs=1e-14)
    assert time_kernel(0.5) == pytest.approx(4.0)
    assert time_kernel(-0.5) == time_kernel(0.5)
    # quadrature cross-check at an irrational modulation
    om = math.sqrt(2)
    ts = np.linspace(-math.pi, math.pi, 20001)
    ref = np.trapezoid(np.exp(1j * ts * om), ts)
    assert time_kernel(om) == pytest.approx(ref.real, abs=1e-6)


def test_nonresonant_singletons_vanish_structurally():
    # k1 - k2 + k3 != 0: no contributing triple at all
    inp = TrilinearInput(_singleton(2, [1, 0]), _singleton(2, [0, 1]),
                         _singleton(2, [2, 2]))
    assert trilinear_closed_form(inp) == 0.0


def test_resonant_singleton_value():
    # k1=(1,0), k3=(1,0), k2=(2,0): Omega = -1 + 4 + sign*1
    k1 = _singleton(2, [1, 0])
    k2 = _singleton(2, [2, 0])
    inp = TrilinearInput(k1, k2, k1, wave_sign=+1)
    expected = TWO_PI ** 2 * time_kernel(4.0)
    assert trilinear_closed_form(inp) == pytest.approx(expected, rel=1e-12)


def test_exact_zero_modulation_detected():
    # the canonical triple sits exactly on Omega = 0: T must be 2 pi,
    # not a rounded sinc value
    s1, s2, s3 = trilinear_example(2, 8)
    val = trilinear_closed_form(TrilinearInput(s1, s2, s3, wave_sign=-1))
    assert val == pytest.approx(TWO_PI ** 3, rel=1e-14)


def test_closed_form_vs_grid_oracle_random():
    rng = np.random.default_rng(4)
    for d in (1, 2):
        pts = np.unique(rng.integers(-3, 4, (10, d)), axis=0)

        def rand_set():
            sel = np.unique(rng.integers(0, len(pts), 6))
            return frequency_set(pts[sel],
                                 rng.standard_normal(len(sel))
                                 + 1j * rng.standard_normal(len(sel)))

        for sign in (+1, -1):
            inp = TrilinearInput(rand_set(), rand_set(), rand_set(),
                                 wave_sign=sign)
            cf = trilinear_closed_form(inp)
            gr = trilinear_grid_oracle(inp)
            assert cf == pytest.approx(gr, abs=1e-9 + 1e-9 * abs(gr))


def test_plane_triple_ratio_constant_in_n():
    for d in (2, 3):
        vals = []
        for n in (4, 8, 16):
            s1, s2, s3 = trilinear_example(d, n)
            inp = TrilinearInput(s1, s2, s3, wave_sign=-1)
            val = abs(trilinear_closed_form(inp))
            denom = (TWO_PI ** (d / 2)) ** 3
            vals.append(val / denom)
        expected = TWO_PI ** (1 - d / 2)
        assert vals == pytest.approx([expected] * 3, rel=1e-13)


def test_dimension_mismatch_and_sign_validation():
    with pytest.raises(TrilinearError):
        TrilinearInput(_singleton(1, [0]), _singleton(2, [0, 0]),
                       _singleton(1, [0]))
    with pytest.raises(TrilinearError):
        TrilinearInput(_singleton(1, [0]), _singleton(1, [0]),
                       _singleton(1, [0]), wave_sign=2)


def test_grid_oracle_aliasing_guard():
    s1, s2, s3 = trilinear_example(2, 4)
    with pytest.raises(TrilinearError, match="aliasing"):
        trilinear_grid_oracle(TrilinearInput(s1, s2, s3, wave_sign=-1), m_x=3)


def test_pair_budget():
    s1, s2, s3 = trilinear_example(2, 4)
    with pytest.raises(TrilinearError, match="budget"):
        trilinear_closed_form(TrilinearInput(s1, s2, s3), max_pairs=0)


def test_alpha_sweep_plane_triple_flat():
    fit, rows = trilinear_alpha_sweep(3, [4, 8, 16],
                                      generator="plane_triple", seed=0)
    assert abs(fit.slope) < 1e-10
    ratios = {r[3] for r in rows}
    assert len(rows) == 3
    assert max(ratios) - min(ratios) < 1e-12


def test_alpha_sweep_input_validation():
    with pytest.raises(TrilinearError, match="distinct"):
        trilinear_alpha_sweep(2, [4, 4, 8])
    with pytest.raises(TrilinearError, match="unknown generator"):
        trilinear_alpha_sweep(2, [4, 8, 16], generator="bogus")
