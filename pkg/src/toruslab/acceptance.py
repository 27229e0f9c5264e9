"""The acceptance suite: one function per claimed numerical property.

Each criterion returns a CriterionResult with a pass flag, a one-line
detail string (measured value vs tolerance), and the CSV rows it produced.
Criterion 11 re-runs criteria 2-8 under a different worker count and
compares every row bit-for-bit.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import accel

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    rows: tuple = ()


def _random_set(rng, d, kmax, max_points=30):
    from .lattice import frequency_set
    pts = np.unique(rng.integers(-kmax, kmax + 1, (max_points, d)), axis=0)
    coeffs = rng.standard_normal(len(pts)) + 1j * rng.standard_normal(len(pts))
    return frequency_set(pts, coeffs)


def criterion_1() -> CriterionResult:
    """Plancherel: grid L^2 norm vs (2 pi)^{(d+1)/2} ||a||_2, 100 sets."""
    from .fields import NormSpec, SCHRODINGER, _mixed_norm_once, norm2_exact
    rng = np.random.default_rng(20260823)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 4))
        kmax = int(rng.integers(1, 17))
        fset = _random_set(rng, d, kmax)
        exact = norm2_exact(fset)
        grid = _mixed_norm_once(fset, SCHRODINGER, NormSpec(2.0, 2.0), 1)
        worst = max(worst, abs(grid - exact) / exact)
    ok = worst <= 1e-10
    return CriterionResult(1, "Plancherel suite", ok,
                           f"max rel error {worst:.3e} (tol 1e-10)")


def criterion_2() -> CriterionResult:
    """Trilinear closed form vs grid quadrature; plane-wave triple ratio."""
    from .lattice import trilinear_example
    from .trilinear import TrilinearInput, _l2_torus, trilinear_closed_form, \
        trilinear_grid_oracle
    from .lattice import frequency_set
    rng = np.random.default_rng(7)
    rows = []
    worst_rand = 0.0
    dims = [1] * 20 + [2] * 20 + [3] * 10
    for inst, d in enumerate(dims):
        # the seeded sum set doubles the bandwidth, so keep d=3 grids small
        kmax = int(rng.integers(1, 7 if d < 3 else 4))
        s1 = _random_set(rng, d, kmax, max_points=8)
        s3 = _random_set(rng, d, kmax, max_points=8)
        # seed set 2 with actual pair sums so the form has resonant mass
        sums = s1.points[rng.integers(0, len(s1), 6)] \
            + s3.points[rng.integers(0, len(s3), 6)]
        extra = rng.integers(-kmax, kmax + 1, (2, d))
        p2 = np.unique(np.concatenate([sums, extra]), axis=0)
        s2 = frequency_set(
            p2, rng.standard_normal(len(p2)) + 1j * rng.standard_normal(len(p2)))
        sign = +1 if rng.integers(2) else -1
        inp = TrilinearInput(s1, s2, s3, wave_sign=sign)
        cf = trilinear_closed_form(inp)
        go = trilinear_grid_oracle(inp)
        rel = abs(cf - go) / max(abs(cf), 1e-12)
        worst_rand = max(worst_rand, rel)
        rows.append(f"random,{inst},{d},{sign},{cf.real!r},{cf.imag!r}")
    worst_triple = 0.0
    ratios = []
    for n in (4, 8, 16):
        s1, s2, s3 = trilinear_example(3, n)
        inp = TrilinearInput(s1, s2, s3, wave_sign=-1)
        cf = trilinear_closed_form(inp)
        go = trilinear_grid_oracle(inp)
        worst_triple = max(worst_triple, abs(cf - go) / abs(cf))
        ratio = abs(cf) / (_l2_torus(s1) * _l2_torus(s2) * _l2_torus(s3))
        ratios.append(ratio)
        rows.append(f"triple,{n},3,-1,{cf.real!r},{cf.imag!r}")
    spread = max(ratios) - min(ratios)
    ok = worst_rand <= 1e-6 and worst_triple <= 1e-8 and spread < 1e-9
    detail = (f"random rel {worst_rand:.3e} (tol 1e-6), triple rel "
              f"{worst_triple:.3e} (tol 1e-8), ratio spread {spread:.3e} "
              f"(tol 1e-9)")
    return CriterionResult(2, "trilinear dual-path oracle", ok, detail,
                           tuple(rows))


def criterion_3() -> CriterionResult:
    """Diophantine triple oracle plus the shell exponent sweep."""
    from .diophantine import DioQuery, dio_exponent_sweep, triple_oracle

    def _row(c):
        # drop the trailing seconds column: timings are not reproducible
        return ",".join(c.csv_row().split(",")[:4])

    rows = []
    for n, delta in ((1, 1), (2, 2), (3, 1), (4, 1)):
        counts = triple_oracle(DioQuery("shell", n, delta))
        rows.extend(_row(c) for c in counts)
    fit, counts = dio_exponent_sweep([8, 12, 16, 24], delta=2)
    rows.extend(_row(c) for c in counts)
    floor_ok = True
    for c in counts:
        size = len(c.query.lattice_points())
        floor_ok = floor_ok and c.count >= size * size
    ok = 3.0 <= fit.slope <= 5.0 and floor_ok
    detail = (f"oracles agree, sweep slope {fit.slope:.3f} (need [3, 5]), "
              f"trivial floor {'held' if floor_ok else 'violated'}")
    return CriterionResult(3, "diophantine triple oracle", ok, detail,
                           tuple(rows))


def criterion_4() -> CriterionResult:
    """Ball vs shell L^4 contrast, d=3."""
    from .experiments import ball_vs_shell_contrast
    bf, sf, recs = ball_vs_shell_contrast([8, 16, 24, 32, 48])
    ok = (0.10 <= bf.slope <= 0.40 and -0.10 <= sf.slope <= 0.30
          and sf.slope < bf.slope)
    detail = (f"ball slope {bf.slope:.3f} (need [0.10, 0.40]), shell slope "
              f"{sf.slope:.3f} (need [-0.10, 0.30], below ball)")
    return CriterionResult(4, "ball-vs-shell contrast", ok, detail,
                           tuple(r.csv_row() for r in recs))


def criterion_5() -> CriterionResult:
    """d=2 Strichartz at the sharp exponent p=4: log growth only."""
    from .experiments import strichartz_ball_sweep
    fit, recs = strichartz_ball_sweep(2, [8, 16, 32, 64])
    ok = fit.slope <= 0.15
    return CriterionResult(5, "d=2 sharp-exponent Strichartz", ok,
                           f"slope {fit.slope:.3f} (need <= 0.15)",
                           tuple(r.csv_row() for r in recs))


def criterion_6() -> CriterionResult:
    """Wave mixed norm (q, p) = (10, 5/2) in d=3."""
    from .experiments import ExperimentError, wave_mixed_norm_check
    try:
        fit, recs = wave_mixed_norm_check(3, [8, 16, 32], 10.0, 2.5)
    except ExperimentError as exc:
        return CriterionResult(6, "wave mixed-norm consistency", False,
                               str(exc))
    ok = fit.slope <= 0.2 + 0.1
    return CriterionResult(6, "wave mixed-norm consistency", ok,
                           f"slope {fit.slope:.3f} (need <= 0.3)",
                           tuple(r.csv_row() for r in recs))


def criterion_7() -> CriterionResult:
    """Decoupling ratio: exact 1 at p=2; single block exact 1."""
    from .experiments import decoupling_ratio
    from .lattice import partition_blocks
    rng = np.random.default_rng(11)
    worst = 0.0
    rows = []
    for inst in range(20):
        d = int(rng.integers(1, 4))
        fset = _random_set(rng, d, 8)
        part = partition_blocks(fset, int(rng.integers(1, 6)))
        r = decoupling_ratio(fset, part, 2.0)
        worst = max(worst, abs(r - 1.0))
        rows.append(f"p2,{inst},{d},{part.block_side},{r!r}")
    single = _random_set(np.random.default_rng(12), 2, 2)
    single = single.translated(-single.points.min(axis=0))
    part = partition_blocks(single, 100)
    r4 = decoupling_ratio(single, part, 4.0)
    rows.append(f"single_block,0,2,100,{r4!r}")
    ok = worst <= 1e-10 and r4 == 1.0
    detail = (f"p=2 max |ratio-1| {worst:.3e} (tol 1e-10), single-block "
              f"ratio {r4!r} (need exactly 1.0)")
    return CriterionResult(7, "decoupling ratio", ok, detail, tuple(rows))


def criterion_8() -> CriterionResult:
    """Picard inflation slopes for s in {-1/2, 0, 1/2}."""
    from .picard import PicardError, inflation_sweep_multi
    try:
        res = inflation_sweep_multi(3, [-0.5, 0.0, 0.5], [8, 16, 32])
    except PicardError as exc:
        return CriterionResult(8, "picard inflation slopes", False, str(exc))
    rows = []
    parts = []
    ok = True
    for s, (fit, rws) in sorted(res.items()):
        expected = -s
        ok = ok and abs(fit.slope - expected) <= 0.25
        parts.append(f"s={s:+.1f}: {fit.slope:+.3f} (want {expected:+.1f})")
        rows.extend(f"{d},{sv},{n},{t!r},{h!r}" for d, sv, n, t, h in rws)
    return CriterionResult(8, "picard inflation slopes", ok,
                           "; ".join(parts) + " tol 0.25", tuple(rows))


def criterion_9() -> CriterionResult:
    """Picard coefficient formula vs 10^4-node quadrature."""
    from .lattice import frequency_set
    from .picard import PicardInput, picard_coefficients, \
        picard_quadrature_singleton
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        kp = rng.integers(-8, 9, 3)
        kpp = rng.integers(-8, 9, 3)
        t = float(rng.uniform(0.005, 2.0))
        f = frequency_set(kp.reshape(1, 3), [1.0])
        g = frequency_set(kpp.reshape(1, 3), [1.0])
        out = picard_coefficients(PicardInput(f, g, 0.0, t))
        q = picard_quadrature_singleton(kp, kpp, t)
        worst = max(worst, abs(out.coeffs[0] - q))
    ok = worst <= 1e-8
    return CriterionResult(9, "picard coefficient oracle", ok,
                           f"max abs error {worst:.3e} (tol 1e-8)")


def criterion_10() -> CriterionResult:
    """Zakharov conservation drift and order-2 step halving."""
    from .zakharov import run
    _, r1 = run(2, 64, 1e-3, 200, report_every=200, seed=1)
    _, r2 = run(2, 64, 5e-4, 400, report_every=400, seed=1)
    m1, e1 = r1[-1][4], r1[-1][5]
    m2, e2 = r2[-1][4], r2[-1][5]
    ok = (m1 <= 1e-8 and e1 <= 1e-4
          and m1 >= 3.0 * m2 and e1 >= 3.0 * e2)
    detail = (f"mass drift {m1:.3e} (tol 1e-8, halving x{m1 / m2:.1f}), "
              f"energy drift {e1:.3e} (tol 1e-4, halving x{e1 / e2:.1f}), "
              f"need halving >= x3")
    return CriterionResult(10, "zakharov conservation", ok, detail)


_REPRODUCIBLE = {2: criterion_2, 3: criterion_3, 4: criterion_4,
                 5: criterion_5, 6: criterion_6, 7: criterion_7,
                 8: criterion_8}


def criterion_11(first_pass: dict) -> CriterionResult:
    """Re-run criteria 2-8 at a different worker count; rows must match."""
    old = os.environ.get("TORUSLAB_THREADS")
    alt = "2" if accel.configure_threads() == 1 else "1"
    os.environ["TORUSLAB_THREADS"] = alt
    try:
        accel.configure_threads()
        mismatched = []
        for num, fn in _REPRODUCIBLE.items():
            if fn().rows != first_pass[num]:
                mismatched.append(num)
    finally:
        if old is None:
            os.environ.pop("TORUSLAB_THREADS", None)
        else:
            os.environ["TORUSLAB_THREADS"] = old
        accel.configure_threads()
    ok = not mismatched
    detail = ("all rows bit-identical across worker counts" if ok
              else f"row mismatch in criteria {mismatched}")
    return CriterionResult(11, "determinism across worker counts", ok, detail)


def run_all(only=None) -> list:
    """Execute the acceptance suite; returns CriterionResult list."""
    selected = set(only) if only else set(range(1, 12))
    simple = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
              5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
              9: criterion_9, 10: criterion_10}
    results = []
    first_rows = {}
    for num in sorted(selected & set(simple)):
        res = simple[num]()
        first_rows[num] = res.rows
        results.append(res)
    if 11 in selected:
        for num in _REPRODUCIBLE:
            if num not in first_rows:
                first_rows[num] = _REPRODUCIBLE[num]().rows
        results.append(criterion_11(first_rows))
    return results
