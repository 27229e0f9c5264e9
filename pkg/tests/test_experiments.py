import math

import numpy as np
import pytest

from toruslab.experiments import (ExperimentError, RATIO_CSV_HEADER,
                                  RatioRecord, data_norm, decoupling_ratio,
                                  decoupling_sweep, mixed_strichartz_probe,
                                  sharpness_slab_sweep, strichartz_ratio,
                                  wave_admissible, wave_mixed_norm_check)
from toruslab.fields import NormSpec, PhaseFunction, SCHRODINGER
from toruslab.fitting import fit_exponent
from toruslab.lattice import (Ball, enumerate_region, frequency_set,
                              partition_blocks)

TWO_PI = 2 * math.pi


def test_single_mode_ratio_is_measure_quotient():
    # |u| = |a| everywhere, so the ratio is (2pi)^{(d+1)/p} / (2pi)^{d/2}
    for d, p in ((1, 4.0), (2, 4.0), (2, 6.0)):
        fset = frequency_set(np.array([[2] + [0] * (d - 1)]), [3.0])
        rec = strichartz_ratio(fset, SCHRODINGER, NormSpec(p, p))
        expected = TWO_PI ** ((d + 1) / p) / TWO_PI ** (d / 2)
        assert rec.ratio == pytest.approx(expected, rel=1e-9)


def test_ratio_translation_invariance():
    rng = np.random.default_rng(8)
    pts = np.unique(rng.integers(-3, 4, (12, 2)), axis=0)
    fset = frequency_set(pts, rng.standard_normal(len(pts))
                         + 1j * rng.standard_normal(len(pts)))
    spec = NormSpec(4.0, 4.0)
    r0 = strichartz_ratio(fset, SCHRODINGER, spec)
    r1 = strichartz_ratio(fset.translated([5, -2]), SCHRODINGER, spec)
    assert r1.ratio == pytest.approx(r0.ratio, rel=1e-10)


def test_ratio_modulus_invariance():
    # multiplying all coefficients by a unimodular constant changes nothing
    fset = frequency_set(np.array([[0, 0], [1, 1], [2, -1]]),
                         [1.0, 0.5, 0.25])
    spec = NormSpec(4.0, 4.0)
    r0 = strichartz_ratio(fset, SCHRODINGER, spec)
    r1 = strichartz_ratio(
        fset.with_coeffs(fset.coeffs * np.exp(0.7j)), SCHRODINGER, spec)
    assert r1.ratio == pytest.approx(r0.ratio, rel=1e-12)


def test_counting_path_selection():
    fset = frequency_set(np.array([[0], [1]]), [1.0, 1.0])
    assert strichartz_ratio(fset, SCHRODINGER, NormSpec(4.0, 4.0)).path \
        in ("pairs", "stream")
    assert strichartz_ratio(fset, SCHRODINGER, NormSpec(6.0, 6.0)).path \
        == "grid"
    assert strichartz_ratio(fset, PhaseFunction("half_wave_plus"),
                            NormSpec(4.0, 4.0)).path == "grid"


def test_empty_set_rejected():
    fset = frequency_set(np.empty((0, 2), dtype=np.int64), [])
    with pytest.raises(ExperimentError, match="empty"):
        strichartz_ratio(fset, SCHRODINGER, NormSpec(4.0, 4.0))


def test_csv_row_roundtrip():
    rec = RatioRecord(2, 8, 4.0, 4.0, "all_ones_ball", 1.25, "pairs")
    row = rec.csv_row()
    assert len(row.split(",")) == len(RATIO_CSV_HEADER.split(","))
    assert float(row.split(",")[5]) == 1.25


def test_fit_scale_equivariance():
    pts = [(8, 2.0), (16, 3.1), (32, 4.7)]
    base = fit_exponent(pts)
    scaled = fit_exponent([(n, 10 * v) for n, v in pts])
    assert scaled.slope == pytest.approx(base.slope, rel=1e-12)


def test_wave_admissible_line():
    assert wave_admissible(3, 4.0, 4.0)
    assert wave_admissible(2, 6.0, 6.0)
    assert wave_admissible(3, 2.0, math.inf)
    assert not wave_admissible(3, 4.0, 6.0)


def test_wave_check_rejects_off_line_and_endpoint():
    with pytest.raises(ExperimentError, match="admissible"):
        wave_mixed_norm_check(3, [8, 16, 32], 4.0, 6.0)
    with pytest.raises(ExperimentError, match="forbidden"):
        wave_mixed_norm_check(3, [8, 16, 32], 2.0, math.inf)


def test_wave_check_small_sweep():
    fit, records = wave_mixed_norm_check(2, [4, 8, 16], 6.0, 6.0)
    assert len(records) == 3
    assert fit.slope <= 2 / 2 - 2 / 6 - 1 / 6 + 0.1


def test_decoupling_single_block_is_one():
    fset = enumerate_region(Ball(center=(5, 5), radius=2), 2)
    rng = np.random.default_rng(2)
    fset = fset.with_coeffs(rng.standard_normal(len(fset))
                            + 1j * rng.standard_normal(len(fset)))
    part = partition_blocks(fset, 100)
    assert decoupling_ratio(fset, part, 4.0) == pytest.approx(1.0, rel=1e-12)


def test_decoupling_p2_orthogonality():
    rng = np.random.default_rng(6)
    pts = np.unique(rng.integers(0, 8, (20, 2)), axis=0)
    fset = frequency_set(pts, rng.standard_normal(len(pts))
                         + 1j * rng.standard_normal(len(pts)))
    ratio = decoupling_ratio(fset, partition_blocks(fset, 2), 2.0)
    assert ratio == pytest.approx(1.0, rel=1e-12)


def test_decoupling_partition_identity_check():
    f1 = enumerate_region(Ball(radius=3), 2)
    f2 = enumerate_region(Ball(radius=3), 2)
    part = partition_blocks(f1, 2)
    with pytest.raises(ExperimentError, match="partition"):
        decoupling_ratio(f2, part, 4.0)


def test_decoupling_sweep_bounded():
    rows, ok = decoupling_sweep(2, [8, 16], p=4.0, seed=0)
    assert ok
    assert all(0.5 < r < 2.0 for _, _, r in rows)


def test_slab_sweep_homogeneity():
    fit, records = sharpness_slab_sweep(3, [16, 32, 64])
    assert all(a.ratio <= b.ratio * (1 + 1e-12)
               for a, b in zip(records, records[1:]))
    assert 0.0 <= fit.slope <= 0.15
    with pytest.raises(ExperimentError, match="d in"):
        sharpness_slab_sweep(1, [16, 32, 64])


def test_mixed_probe_validation():
    with pytest.raises(ExperimentError, match="scaling line"):
        mixed_strichartz_probe(2, [8, 16, 32], 4.0, 6.0)
    with pytest.raises(ExperimentError, match="q <= p"):
        mixed_strichartz_probe(1, [8, 16, 32], 8.0, 4.0)


def test_mixed_probe_runs():
    fits, records, flag = mixed_strichartz_probe(2, [4, 8, 16], 4.0, 4.0,
                                                 seed=1)
    assert flag == "exploratory"
    assert set(fits) == {"all_ones", "random"}
    assert len(records) == 6


def test_data_norm_single_mode():
    fset = frequency_set(np.array([[1, 2, 3]]), [2.0])
    assert data_norm(fset) == pytest.approx(2.0 * TWO_PI ** 1.5, rel=1e-14)
