import math

import numpy as np
import pytest

from zonal import haar
from zonal.errors import ConstraintViolated, DimensionMismatch
from zonal.exact import EvalPoint
from zonal.genfun import phi_pq, quad_F, GenFunParams
from zonal.series import WeightLabel, phi_n2


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_sampled_frames_are_rotations(N):
    Q = haar.sample_frames(N, 2000, haar.shard_rng(1, N))
    eye = np.eye(N)
    assert np.abs(np.einsum("sij,sik->sjk", Q, Q) - eye).max() <= 1e-12
    assert np.abs(np.linalg.det(Q) - 1).max() <= 1e-12
    haar.sample_haar(N, 3)  # OrthoFrame validates on construction


def test_orthoframe_rejects_reflections():
    with pytest.raises(ValueError):
        haar.OrthoFrame(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(ValueError):
        haar.OrthoFrame(np.ones((2, 2)))


def test_euler_angles_ranges():
    with pytest.raises(ValueError):
        haar.EulerAngles(0, 4, 0)
    with pytest.raises(ValueError):
        haar.EulerAngles(2 * math.pi, 0, 0)


def test_euler_frame_identity_angles():
    f = haar.euler_frame(haar.EulerAngles(0, 0, 0))
    n, l, m = f.column(0), f.column(1), f.column(2)
    assert np.allclose(n, [0, 0, 1], atol=1e-15)
    assert np.allclose(m, [0, 1, 0], atol=1e-15)
    assert np.allclose(l, np.cross(m, n), atol=1e-15)


def test_euler_frames_valid():
    rng = haar.shard_rng(2, 0)
    for _ in range(200):
        f = haar.euler_frame(haar.sample_euler(rng))
        assert abs(np.linalg.det(f.columns) - 1) <= 1e-12


def test_xi_identity_frame():
    x = EvalPoint((2.0, 3.0, 5.0))
    xi = haar.xi_values(x, haar.OrthoFrame(np.eye(3)), 2).values
    assert xi == (2, 6)


def test_xi_all_ones_point():
    frames = haar.sample_frames(5, 100, haar.shard_rng(3, 0))
    xi = haar.xi_batch(EvalPoint.ones(5), frames, 4)
    assert (xi == 1).all()


def test_xi_n2_rotation():
    for phi in np.linspace(0, 2 * math.pi, 9):
        c, s = math.cos(phi), math.sin(phi)
        frame = haar.OrthoFrame(np.array([[c, -s], [s, c]]))
        xi = haar.xi_values((2.0, 0.5), frame, 1).values[0]
        assert abs(xi - (2 * c * c + 0.5 * s * s)) <= 1e-14


def test_xi_gram_determinant_oracle():
    # Xi_j = det(K^T X K) restricted to the first j columns (Cauchy-Binet)
    rng = haar.shard_rng(4, 0)
    x = rng.uniform(0.2, 3, 4) + 1j * rng.uniform(-1, 1, 4)
    frames = haar.sample_frames(4, 50, rng)
    xi = haar.xi_batch(x, frames, 3)
    for s, K in enumerate(frames):
        for j in range(1, 4):
            Kj = K[:, :j]
            want = np.linalg.det(Kj.T @ np.diag(x) @ Kj)
            assert abs(xi[s, j - 1] - want) <= 1e-12 * max(1, abs(want))


def test_xi_invariant_under_in_block_rotation():
    rng = haar.shard_rng(5, 0)
    N = 4
    x = np.exp(1j * rng.uniform(-3, 3, N))
    frames = haar.sample_frames(N, 20, rng)
    base = haar.xi_batch(x, frames, N - 1)
    for j in range(1, N):
        R = np.eye(N)
        R[:j, :j] = haar.sample_frames(j, 1, rng)[0] if j > 1 else np.eye(1)
        rotated = np.einsum("sij,jk->sik", frames, R)
        assert np.abs(haar.xi_batch(x, rotated, N - 1)[:, j - 1] - base[:, j - 1]).max() <= 1e-12


def test_mc_phi_trivial_at_identity_point():
    est = haar.mc_phi(WeightLabel.pq(1, 0), EvalPoint.ones(3), 1000, 7)
    assert est.mean == 1 and est.stderr == 0


def test_mc_phi_n2_example():
    x = (2.0, 0.5)
    exact = phi_n2(2)(*x)
    assert exact == 59 / 32
    est = haar.mc_phi(WeightLabel.fundamental(2, 2), x, 200_000, 11)
    assert est.within(exact, 5)


def test_mc_phi_pq_torus_point():
    pt = EvalPoint.from_angles([0.9, -0.2, -0.7])
    est = haar.mc_phi(WeightLabel.pq(1, 1), pt, 200_000, 12)
    assert est.within(phi_pq(1, 1)(*pt.coords), 5)


def test_mc_genfun_examples():
    est = haar.mc_genfun(EvalPoint.ones(3), (0.5, 0.5), 100_000, 13)
    assert est.within(4.0, 5)
    est = haar.mc_genfun((2.0, 0.5, 1.0), (0, 0), 1000, 13)
    assert est.mean == 1 and est.stderr == 0


def test_mc_genfun_vs_quadrature():
    pt = EvalPoint((2.0, 0.5, 1.0), unimodular=True)
    est = haar.mc_genfun(pt, (0.1, 0.2), 200_000, 14)
    assert est.within(quad_F(pt, GenFunParams(0.1, 0.2)).value, 5)


def test_mc_bc_sphere_examples():
    est = haar.mc_bc_sphere(EvalPoint.ones(3), 0, 0, 1000, 15)
    assert est.mean == 1 and est.stderr == 0
    est = haar.mc_bc_sphere(EvalPoint.ones(3), 0.5, 0.5, 100_000, 15)
    assert est.within(4.0, 5)
    with pytest.raises(ConstraintViolated):
        haar.mc_bc_sphere((2.0, 1.0, 1.0), 0.1, 0.1, 10, 15)


def test_mc_moments_match_sphere_values():
    for N in (2, 3, 4):
        m2, m4 = haar.mc_moments(N, 100_000, 16 + N)
        assert m2.within(1 / N, 5)
        assert m4.within(3 / (N * (N + 2)), 5)


def test_determinism_and_thread_invariance():
    pt = EvalPoint.from_angles([0.3, 0.5, -0.8])
    labels = [WeightLabel.pq(p, q) for p in range(3) for q in range(3 - p)]
    samples = 3 * haar.SHARD_SIZE + 17
    a = haar.mc_phi_many(labels, pt, samples, 99, threads=1)
    b = haar.mc_phi_many(labels, pt, samples, 99, threads=1)
    c = haar.mc_phi_many(labels, pt, samples, 99, threads=4)
    assert a == b == c
    assert [e.to_json() for e in a] == [e.to_json() for e in c]
    d = haar.mc_phi_many(labels, pt, samples, 100)
    assert a != d


def test_estimate_json_fields():
    est = haar.mc_phi(WeightLabel.pq(0, 1), EvalPoint.ones(3), 10, 1)
    assert set(est.to_json()) == {"mean_re", "mean_im", "stderr", "samples", "seed"}


def test_stderr_definition():
    # one shard: stderr is the sample standard deviation over sqrt(n)
    n = 5000
    vals = haar.shard_rng(21, 0).standard_normal((n, 1))
    mean, err = haar.run_sharded(lambda rng, k: vals[:k] if k == n else None, n, 21)
    assert abs(err[0] - vals.std(ddof=1) / math.sqrt(n)) <= 1e-15
    assert abs(mean[0] - vals.mean()) <= 1e-15


def test_shard_merge_matches_pooled_statistics():
    n = 2 * haar.SHARD_SIZE + 100
    pool = []

    def draw(rng, k):
        v = rng.standard_normal((k, 1))
        pool.append(v)
        return v

    mean, err = haar.run_sharded(draw, n, 22)
    allv = np.concatenate(pool)
    assert abs(mean[0] - allv.mean()) <= 1e-14
    assert abs(err[0] - allv.std(ddof=1) / math.sqrt(n)) <= 1e-15


def test_dimension_checks():
    frames = haar.sample_frames(3, 2, 1)
    with pytest.raises(DimensionMismatch):
        haar.xi_batch((1, 1), frames, 2)
    with pytest.raises(DimensionMismatch):
        haar.xi_batch((1, 1, 1), frames, 3)
