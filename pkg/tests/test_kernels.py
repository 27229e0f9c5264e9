import numpy as np
import pytest

from toruslab import _kernels
from toruslab._kernels import (BudgetError, dio_bruteforce_count,
                               resonance_quadruple_count,
                               resonance_weighted_sum)
from toruslab.lattice import Ball, Shell, enumerate_region


def _reference_quadruple_count(pts):
    """O(n^2) hash-free reference via sorted (sum, sq-sum) pair classes."""
    pts = np.asarray(pts, dtype=np.int64)
    n, d = pts.shape
    sums = pts[:, None, :] + pts[None, :, :]
    m = (pts ** 2).sum(axis=1)
    msum = (m[:, None] + m[None, :]).reshape(-1, 1)
    keys = np.concatenate([sums.reshape(n * n, d), msum], axis=1)
    _, counts = np.unique(keys, axis=0, return_counts=True)
    return int((counts ** 2).sum())


@pytest.mark.parametrize("d,radius", [(1, 6), (2, 4), (3, 2)])
def test_quadruple_count_vs_reference(d, radius):
    pts = enumerate_region(Ball(radius=radius), d).points
    assert resonance_quadruple_count(pts) == _reference_quadruple_count(pts)


def test_quadruple_count_random_points():
    rng = np.random.default_rng(0)
    pts = np.unique(rng.integers(-7, 8, (40, 3)), axis=0)
    assert resonance_quadruple_count(pts) == _reference_quadruple_count(pts)


def test_quadruple_count_trivial():
    assert resonance_quadruple_count(np.empty((0, 2), dtype=np.int64)) == 0
    assert resonance_quadruple_count(np.array([[3, -1]])) == 1


def test_quadruple_budget():
    pts = enumerate_region(Ball(radius=3), 2).points
    with pytest.raises(BudgetError, match="pairs"):
        resonance_quadruple_count(pts, max_pairs=10)


def test_weighted_sum_matches_count_on_indicators():
    pts = enumerate_region(Shell(3.0, 1.0), 2).points
    ones = np.ones(len(pts), dtype=np.complex128)
    assert resonance_weighted_sum(pts, ones) == pytest.approx(
        resonance_quadruple_count(pts), rel=1e-12)


def test_weighted_sum_vs_direct():
    rng = np.random.default_rng(3)
    pts = np.unique(rng.integers(-4, 5, (15, 2)), axis=0)
    a = rng.standard_normal(len(pts)) + 1j * rng.standard_normal(len(pts))
    # direct O(n^2) class aggregation
    m = (pts ** 2).sum(axis=1)
    classes = {}
    for i in range(len(pts)):
        for j in range(len(pts)):
            key = (*(pts[i] + pts[j]), m[i] + m[j])
            classes[key] = classes.get(key, 0) + a[i] * a[j]
    direct = sum(abs(v) ** 2 for v in classes.values())
    assert resonance_weighted_sum(pts, a) == pytest.approx(direct, rel=1e-12)


def test_dio_bruteforce_small():
    # S = {1, 2} in Z: solutions of x+y=z+w, x^2+y^2=z^2+w^2 in S^4
    pts = np.array([[1], [2]])
    assert dio_bruteforce_count(pts) == 6


def test_dio_bruteforce_matches_quadruple_count():
    for d, radius in ((2, 3), (3, 2)):
        pts = enumerate_region(Ball(radius=radius), d).points
        assert dio_bruteforce_count(pts) == _reference_quadruple_count(pts)


def test_dio_budget():
    pts = enumerate_region(Ball(radius=4), 3).points
    with pytest.raises(BudgetError, match="triples"):
        dio_bruteforce_count(pts, max_triples=100)


def _subprocess_backend(flag):
    import subprocess
    import sys
    code = (
        "import numpy as np\n"
        "from toruslab.accel import backend_name\n"
        "from toruslab._kernels import resonance_quadruple_count, "
        "dio_bruteforce_count\n"
        "from toruslab.lattice import Ball, enumerate_region\n"
        "pts = enumerate_region(Ball(radius=5), 2).points\n"
        "print(backend_name(), resonance_quadruple_count(pts), "
        "dio_bruteforce_count(pts))\n"
    )
    import os
    env = dict(os.environ, TORUSLAB_NO_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return out.stdout.split()


def test_backends_agree_across_processes():
    name_nb, c1_nb, c2_nb = _subprocess_backend("0")
    name_np, c1_np, c2_np = _subprocess_backend("1")
    assert name_np == "numpy"
    assert (c1_nb, c2_nb) == (c1_np, c2_np)


def test_numpy_fallback_paths_in_process(monkeypatch):
    monkeypatch.setattr(_kernels, "numba_available", lambda: False)
    pts = enumerate_region(Ball(radius=4), 2).points
    assert resonance_quadruple_count(pts) == _reference_quadruple_count(pts)
    assert dio_bruteforce_count(pts) == _reference_quadruple_count(pts)
