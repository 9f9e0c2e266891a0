import csv
import io
import math
from fractions import Fraction

import numpy as np
import pytest

from sepprob.states import CHUNK, DivisionAlgebra, McEstimate, mc_moments, mc_separability, run_mc
from sepprob.states.montecarlo import MOMENT_HEADER


def test_bit_identical_across_thread_counts():
    a = run_mc("complex", 2 * CHUNK + 123, seed=9, threads=1, moment_order=4)
    b = run_mc("complex", 2 * CHUNK + 123, seed=9, threads=3, moment_order=4)
    assert a == b
    assert a.moments.pt == b.moments.pt


def test_repeat_is_identical_and_seed_matters():
    a = mc_separability("real", 5000, seed=1)
    assert a == mc_separability("real", 5000, seed=1)
    assert a != mc_separability("real", 5000, seed=2)


def test_prefix_chunks_are_shared():
    # chunk c is keyed only by (seed, c), so a longer run extends a shorter one
    short = run_mc("real", CHUNK, seed=4)
    long = run_mc("real", 2 * CHUNK, seed=4)
    assert short.estimate.det_min >= long.estimate.det_min


def test_estimate_fields():
    est = mc_separability("quaternion", 20000, seed=3)
    p = est.probability_estimate
    assert 0 <= p <= 1
    assert est.standard_error == pytest.approx(math.sqrt(p * (1 - p) / est.samples))
    assert est.samples == 20000 and est.seed == 3 and est.algebra is DivisionAlgebra.QUATERNION
    assert est.det_in_range


def test_z_score():
    est = McEstimate(0.5, 0.01, 100, 0, DivisionAlgebra.REAL)
    assert est.z_score(0.48) == pytest.approx(2.0)


@pytest.mark.parametrize("algebra", list(DivisionAlgebra))
def test_moment_bounds(algebra):
    m = mc_moments(algebra, 8, 20000, seed=5)
    assert m.pt[0] == 1.0 and m.joint[0] == 1.0 and m.pt_stderr[0] == 0.0
    for n, mu in enumerate(m.pt):
        assert -((1 / 16) ** n) <= mu <= max((1 / 256) ** n, (1 / 16) ** n)
    assert all(e >= 0 for e in m.pt_stderr)


def test_first_moment_self_consistency():
    a = mc_moments("complex", 1, 1_000_000, seed=101)
    b = mc_moments("complex", 1, 1_000_000, seed=202)
    sigma = math.hypot(a.pt_stderr[1], b.pt_stderr[1])
    assert abs(a.pt[1] - b.pt[1]) < 5 * sigma


def test_stderr_matches_direct_sample_statistics():
    from sepprob.states.density import sample_hs_batch
    from sepprob.states.montecarlo import _chunk_rng, pt_determinants

    n = 1000
    m = mc_moments("real", 2, n, seed=8)
    A, B, _ = sample_hs_batch(DivisionAlgebra.REAL, _chunk_rng(8, 0), n)
    d = pt_determinants(DivisionAlgebra.REAL, A, B)
    assert m.pt[1] == pytest.approx(d.mean(), rel=1e-12)
    assert m.pt_stderr[1] == pytest.approx(d.std(ddof=1) / math.sqrt(n), rel=1e-9)


def test_bivariate_grid():
    m = mc_moments("complex", 2, 5000, seed=6, bivariate_order=2)
    assert m.bivariate.shape == (3, 3)
    assert m.bivariate[0, 0] == pytest.approx(1.0)
    assert m.bivariate[1, 0] == pytest.approx(m.pt[1])
    assert m.bivariate[1, 1] == pytest.approx(m.joint[1])


def test_moment_csv_format():
    m = mc_moments("real", 3, 3000, seed=2)
    rows = list(csv.reader(io.StringIO(m.to_csv())))
    assert tuple(rows[0]) == MOMENT_HEADER
    assert len(rows) == 5
    assert rows[1][1] == "1" and rows[2][4] == "real" and rows[2][5] == "2"
    # 17 significant digits round-trip the doubles exactly
    assert float(rows[2][1]) == m.pt[1]


def test_moment_sequence_conversion():
    ms = mc_moments("quaternion", 4, 3000, seed=1).moment_sequence()
    assert ms.order == 4
    assert ms.interval == (Fraction(-1, 16), Fraction(1, 256))


def test_invalid_arguments():
    with pytest.raises(ValueError):
        mc_separability("real", 0)
    with pytest.raises(ValueError):
        mc_moments("real", 0, 10)
    with pytest.raises(ValueError):
        run_mc("real", 10, threads=0)


def test_spectrum_check_runs_on_real_and_complex():
    # raises SpectrumViolation if any partial transpose had two negative eigenvalues
    for alg in ("real", "complex"):
        run_mc(alg, 20000, seed=12, spectrum_check=True)


def test_moderate_run_hits_known_values():
    for alg, p in (("real", 29 / 64), ("complex", 8 / 33), ("quaternion", 26 / 323)):
        est = mc_separability(alg, 100_000, seed=21)
        assert abs(est.z_score(p)) < 4
