import math

import numpy as np
import pytest

from toruslab.fields import (FieldError, GridSpec, NormSpec, PhaseFunction,
                             SCHRODINGER, evaluate_field, l4_norm_by_counting,
                             lp_norm, mixed_norm_streaming, norm2_exact,
                             resonance_l4_quartic)
from toruslab.lattice import Ball, enumerate_region, frequency_set

TWO_PI = 2 * math.pi


def _random_set(rng, d, kmax, n=20):
    pts = np.unique(rng.integers(-kmax, kmax + 1, (n, d)), axis=0)
    return frequency_set(pts, rng.standard_normal(len(pts))
                         + 1j * rng.standard_normal(len(pts)))


def test_phase_kinds():
    sq = np.array([0.0, 1.0, 4.0])
    assert np.allclose(PhaseFunction("schrodinger").omega(sq), -sq)
    assert np.allclose(PhaseFunction("half_wave_plus").omega(sq),
                       np.sqrt(sq))
    assert np.allclose(PhaseFunction("kg_plus").omega(sq), np.sqrt(1 + sq))
    with pytest.raises(FieldError):
        PhaseFunction("nope")


def test_plancherel_grid_vs_exact():
    rng = np.random.default_rng(1)
    for d in (1, 2, 3):
        fset = _random_set(rng, d, 5)
        grid = GridSpec.for_set(fset, SCHRODINGER, oversample=1,
                                product_degree=2)
        field = evaluate_field(fset, SCHRODINGER, grid)
        val = lp_norm(field, NormSpec(2.0, 2.0))
        assert val == pytest.approx(norm2_exact(fset), rel=1e-12)


def test_single_mode_lp():
    # |u| is constant 1, so every L^p norm is the measure power
    fset = frequency_set(np.array([[2, 1]]), [1.0])
    for p in (2.0, 4.0, 6.0):
        grid = GridSpec.for_set(fset, SCHRODINGER, product_degree=int(p))
        val = lp_norm(evaluate_field(fset, SCHRODINGER, grid),
                      NormSpec(p, p))
        assert val == pytest.approx(TWO_PI ** (3 / p), rel=1e-12)


def test_linf_norm():
    fset = frequency_set(np.array([[0, 0], [1, 0]]), [1.0, 1.0])
    grid = GridSpec.for_set(fset, SCHRODINGER, oversample=8)
    val = lp_norm(evaluate_field(fset, SCHRODINGER, grid),
                  NormSpec(math.inf, math.inf))
    assert val == pytest.approx(2.0, rel=1e-3)


def test_aliasing_errors():
    fset = frequency_set(np.array([[4, 0]]), [1.0])
    with pytest.raises(FieldError, match="m_x"):
        evaluate_field(fset, SCHRODINGER, GridSpec(2, 5, 64))
    with pytest.raises(FieldError, match="m_t"):
        evaluate_field(fset, SCHRODINGER, GridSpec(2, 32, 8))


def test_grid_too_large():
    fset = frequency_set(np.array([[1, 1, 1]]), [1.0])
    with pytest.raises(FieldError, match="too large"):
        evaluate_field(fset, SCHRODINGER, GridSpec(3, 1024, 1024))


def test_l4_counting_vs_grid():
    rng = np.random.default_rng(2)
    fset = _random_set(rng, 2, 4)
    norm, path = l4_norm_by_counting(fset)
    grid = mixed_norm_streaming(fset, SCHRODINGER, NormSpec(4.0, 4.0))
    assert norm == pytest.approx(grid, rel=1e-10)


def test_stream_matches_pairs():
    fset = enumerate_region(Ball(radius=6), 2)
    fset = fset.with_coeffs(np.ones(len(fset), dtype=np.complex128))
    s_pairs, tag_p = resonance_l4_quartic(fset, method="pairs")
    s_stream, tag_s = resonance_l4_quartic(fset, method="stream")
    assert tag_p == "pairs" and tag_s == "stream"
    assert s_stream == pytest.approx(s_pairs, rel=1e-5)
    # indicator data: the pair path is an exact integer
    assert float(s_pairs).is_integer()


def test_l4_indicator_is_quadruple_count():
    # {0, 1} on Z: quadruples with equal sums and square sums = 6
    fset = frequency_set(np.array([[0], [1]]), [1.0, 1.0])
    s, _ = resonance_l4_quartic(fset, method="pairs")
    assert s == 6
    norm, _ = l4_norm_by_counting(fset)
    assert norm == pytest.approx((TWO_PI ** 2 * 6) ** 0.25, rel=1e-14)


def test_mixed_norm_refinement_converges():
    fset = frequency_set(np.array([[0, 0], [1, 2]]), [1.0, 0.5])
    v = mixed_norm_streaming(fset, SCHRODINGER, NormSpec(2.0, 2.0),
                             oversample=1)
    assert v == pytest.approx(norm2_exact(fset), rel=1e-10)
