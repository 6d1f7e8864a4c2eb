import numpy as np
import pytest

from locco import (DomainError, LoopContraction, SampledPath, edge_fill,
                   linear_combination, linear_contraction, path_battery,
                   path_from_function, path_group_contraction,
                   path_loop_contraction, sigma_fill, vector_battery)
from locco.loopfill import check_barycentric, random_barycentric


def test_linear_contraction_endpoints():
    phi = linear_contraction()
    v = np.array([2.0, -1.0])
    assert np.allclose(phi(v, 0.0), v)
    assert np.allclose(phi(v, 1.0), 0.0)
    assert np.allclose(phi(v, 0.25), 0.75 * v)


def test_edge_fill_midpoint():
    got = edge_fill(linear_contraction(), (1.0, 0.0), (0.0, 1.0), 0.5)
    assert np.allclose(got, (0.5, 0.5))
    assert np.allclose(edge_fill(linear_contraction(), (1.0, 0.0), (0.0, 1.0), 1.0),
                       (1.0, 0.0))
    assert np.allclose(edge_fill(linear_contraction(), (1.0, 0.0), (0.0, 1.0), 0.0),
                       (0.0, 1.0))


def test_sigma_fill_barycenter():
    got = sigma_fill(linear_contraction(), [(1, 0), (0, 1), (0, 0)],
                     [1 / 3, 1 / 3, 1 / 3])
    assert np.allclose(got, (1 / 3, 1 / 3), atol=1e-12)


def test_sigma_fill_matches_linear_combination():
    rng = np.random.default_rng(0)
    phi = linear_contraction()
    for n in range(1, 5):
        for _ in range(50):
            vs = [rng.uniform(-1, 1, size=3) for _ in range(n + 1)]
            ws = random_barycentric(rng, n + 1)
            got = sigma_fill(phi, vs, ws)
            want = linear_combination(vs, ws)
            assert np.max(np.abs(got - want)) < 1e-12


def test_sigma_fill_weight_one_branch():
    phi = linear_contraction()
    vs = [(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]
    assert np.allclose(sigma_fill(phi, vs, [1.0, 0.0, 0.0]), vs[0])
    assert np.allclose(sigma_fill(phi, vs, [0.0, 1.0, 0.0]), vs[1])
    near_one = 1.0 - 1e-14
    assert np.allclose(sigma_fill(phi, vs, [near_one, 1.0 - near_one, 0.0]), vs[0])


def test_barycentric_validation():
    with pytest.raises(DomainError):
        check_barycentric([])
    with pytest.raises(DomainError):
        check_barycentric([0.5, 0.6])
    with pytest.raises(DomainError):
        check_barycentric([-0.2, 1.2])
    with pytest.raises(DomainError):
        sigma_fill(linear_contraction(), [(1.0,)], [0.5, 0.5])


def test_vector_battery_passes():
    for dim in (1, 2, 3):
        reports = vector_battery(dim, 4, seed=dim, trials=60)
        assert all(r.passed for r in reports)
        assert max(r.max_deviation for r in reports) < 1e-12


def test_reversed_contraction_flag():
    backwards = LoopContraction(name="linear-backwards",
                                apply=lambda v, t: t * v, reversed=True)
    v = np.array([1.0, -2.0])
    assert np.allclose(backwards(v, 0.0), v)
    assert np.allclose(backwards(v, 1.0), 0.0)
    got = sigma_fill(backwards, [(1, 0), (0, 1)], [0.25, 0.75])
    assert np.allclose(got, (0.25, 0.75))


def test_sampled_path_validation():
    with pytest.raises(DomainError):
        SampledPath(np.array([1.0, 0.0]))
    path = SampledPath(np.array([0.0, 0.5, 1.0]))
    assert path.samples == 3
    assert np.allclose(path.at(0.25), 0.25)


def test_path_group_contraction_endpoints():
    path = path_from_function(lambda t: np.sin(np.pi * t / 2), samples=257)
    frozen = path_group_contraction(path, 0.0)
    assert np.allclose(frozen.values, path.values)
    killed = path_group_contraction(path, 1.0)
    assert np.allclose(killed.values, 0.0)
    half = path_group_contraction(path, 0.5)
    grid = path.grid()
    assert np.allclose(half.values, path.at(0.5 * grid))
    with pytest.raises(DomainError):
        path_group_contraction(path, 1.5)


def test_path_contraction_is_additive():
    rng = np.random.default_rng(7)
    phi = path_loop_contraction(129)
    a = rng.uniform(-1, 1, size=129)
    b = rng.uniform(-1, 1, size=129)
    a[0] = b[0] = 0.0
    lhs = phi(a + b, 0.37)
    rhs = np.asarray(phi(a, 0.37)) + np.asarray(phi(b, 0.37))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_path_battery_passes():
    reports = path_battery(3, seed=5, trials=15)
    assert all(r.passed for r in reports)
    assert max(r.max_deviation for r in reports) < 1e-9
