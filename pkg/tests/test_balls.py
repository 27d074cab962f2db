import numpy as np
import pytest

from rfw import (ConfigError, Euclidean, GeodesicBall, Hyperboloid,
                 NoIntersectionError, Spd, Sphere, alpha_phi_sphere,
                 boundary_section_grid, lmo_brute_force,
                 lmo_constant_curvature_ball, lmo_sphere_ball,
                 random_boundary_best)
from rfw.balls import _alpha_phi_bisect, _section_frame, grid_objectives


def sphere_ball(n=3, r=0.8, seed=0):
    k = Sphere(n)
    c = k.random_point(np.random.default_rng(seed))
    return k, GeodesicBall(k, c, r)


def test_membership_and_diameter():
    k, ball = sphere_ball()
    assert ball.membership(ball.center)
    assert ball.diameter == pytest.approx(1.6)
    rng = np.random.default_rng(1)
    for _ in range(50):
        p = ball.sample(rng)
        assert ball.membership(p)
        assert k.dist(ball.center, p) <= ball.radius + 1e-9
    far = k.exp(ball.center, 1.01 * ball.radius
                * k.random_unit_tangent(ball.center, rng))
    assert not ball.membership(far)


def test_sphere_ball_radius_cap():
    k = Sphere(3)
    with pytest.raises(ConfigError):
        GeodesicBall(k, k.base_point(), 0.5 * np.pi)
    with pytest.raises(ConfigError):
        GeodesicBall(k, k.base_point(), -0.1)


def test_euclidean_lmo_closed_form():
    k = Euclidean(3)
    ball = GeodesicBall(k, np.array([1.0, 0.0, 0.0]), 2.0)
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        res = ball.lmo(w, x)
        expect = ball.center + ball.radius * w / np.linalg.norm(w)
        np.testing.assert_allclose(res.vertex, expect, atol=1e-12)
        assert res.objective == pytest.approx(float(w @ (expect - x)))


def test_sphere_lmo_on_boundary_and_dominant():
    k, ball = sphere_ball(n=3, r=0.6, seed=3)
    rng = np.random.default_rng(4)
    for _ in range(15):
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        res = ball.lmo(w, x)
        assert k.dist(ball.center, res.vertex) == pytest.approx(
            ball.radius, abs=1e-8)
        _, brute = lmo_brute_force(ball, w, x, 20000)
        brute = max(brute, random_boundary_best(ball, w, x, 500, rng))
        assert res.objective >= brute - 1e-7 * max(1.0, abs(brute))


def test_sphere_lmo_consistent_objective():
    k, ball = sphere_ball(n=4, r=0.5, seed=5)
    rng = np.random.default_rng(6)
    x = ball.sample(rng)
    w = k.random_unit_tangent(x, rng)
    res = ball.lmo(w, x)
    assert res.objective == pytest.approx(
        k.inner(x, w, k.log(x, res.vertex)), abs=1e-12)


def test_sphere_lmo_from_center():
    k, ball = sphere_ball(n=3, r=0.7, seed=7)
    w = k.random_unit_tangent(ball.center, np.random.default_rng(8))
    res = ball.lmo(w, ball.center)
    expect = k.exp(ball.center, ball.radius * w)
    np.testing.assert_allclose(res.vertex, expect, atol=1e-9)


def test_sphere_lmo_degenerate_section():
    # w parallel to log_x(center): the search plane collapses to a line
    k, ball = sphere_ball(n=3, r=0.4, seed=9)
    rng = np.random.default_rng(10)
    x = k.exp(ball.center, 0.3 * k.random_unit_tangent(ball.center, rng))
    g = k.log(x, ball.center)
    for w in (g / k.norm(x, g), -g / k.norm(x, g)):
        res = ball.lmo(w, x)
        _, brute = lmo_brute_force(ball, w, x, 20000)
        assert res.objective >= brute - 1e-7
        assert k.dist(ball.center, res.vertex) <= ball.radius + 1e-8


def test_generic_lmo_matches_sphere_closed_form():
    k, ball = sphere_ball(n=3, r=1.0, seed=11)
    rng = np.random.default_rng(12)
    for _ in range(10):
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        closed = lmo_sphere_ball(w, x, ball)
        generic = lmo_constant_curvature_ball(w, x, ball)
        assert abs(closed.objective - generic.objective) <= 1e-6


def test_hyperboloid_lmo():
    k = Hyperboloid(3)
    ball = GeodesicBall(k, k.base_point(), 1.0)
    rng = np.random.default_rng(13)
    for _ in range(10):
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        res = ball.lmo(w, x)
        assert k.dist(ball.center, res.vertex) == pytest.approx(
            ball.radius, abs=1e-7)
        best = random_boundary_best(ball, w, x, 2000, rng)
        assert res.objective >= best - 1e-6


def test_spd_ball_has_no_oracle():
    k = Spd(3)
    ball = GeodesicBall(k, np.eye(3), 0.5)
    with pytest.raises(ConfigError):
        ball.lmo(k.random_tangent(np.eye(3), np.random.default_rng(0)),
                 np.eye(3))


def test_alpha_phi_closed_form_against_bisection():
    k, ball = sphere_ball(n=3, r=0.9, seed=14)
    rng = np.random.default_rng(15)
    worst = 0.0
    checked = 0
    for _ in range(30):
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        res = ball.lmo(w, x)
        if res.phi is None:
            continue
        u1, u2 = _section_frame(k, ball, x, w, 1.0)
        if u2 is None:
            continue
        p = np.cos(res.phi) * u1 + np.sin(res.phi) * u2
        a = max(float(ball.center @ x), np.cos(ball.radius))
        b = float(ball.center @ p)
        c = np.cos(ball.radius)
        worst = max(worst, abs(alpha_phi_sphere(a, b, c)
                               - _alpha_phi_bisect(a, b, c)))
        checked += 1
    assert checked > 10
    assert worst <= 1e-8


def test_alpha_phi_no_intersection():
    # a*cos + b*sin can never reach c: the ray misses the cap boundary
    with pytest.raises(NoIntersectionError):
        alpha_phi_sphere(0.1, 0.1, 0.99)


def test_alpha_phi_positive_wrap():
    a, b, c = 0.95, -0.2, np.cos(0.4)
    al = alpha_phi_sphere(a, b, c)
    assert al > 0.0
    assert a * np.cos(al) + b * np.sin(al) == pytest.approx(c, abs=1e-12)


def test_boundary_section_grid_lies_on_boundary():
    for k, ball in [sphere_ball(n=3, r=0.5, seed=16),
                    (Hyperboloid(3), GeodesicBall(Hyperboloid(3),
                                                  Hyperboloid(3).base_point(),
                                                  0.8)),
                    (Euclidean(3), GeodesicBall(Euclidean(3),
                                                np.zeros(3), 1.5))]:
        rng = np.random.default_rng(17)
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        z = boundary_section_grid(ball, x, w, 64)
        for p in z:
            assert k.dist(ball.center, p) == pytest.approx(
                ball.radius, abs=1e-9)


def test_grid_objectives_matches_pointwise():
    for k, ball in [sphere_ball(n=3, r=0.5, seed=18),
                    (Hyperboloid(3), GeodesicBall(Hyperboloid(3),
                                                  Hyperboloid(3).base_point(),
                                                  0.8)),
                    (Euclidean(3), GeodesicBall(Euclidean(3),
                                                np.zeros(3), 1.5))]:
        rng = np.random.default_rng(19)
        x = ball.sample(rng)
        w = k.random_unit_tangent(x, rng)
        z = boundary_section_grid(ball, x, w, 32)
        vals = grid_objectives(k, x, w, z)
        for p, got in zip(z, vals):
            assert got == pytest.approx(k.inner(x, w, k.log(x, p)),
                                        abs=1e-10)


def test_lmo_result_records_phi_for_planar_search():
    k, ball = sphere_ball(n=3, r=0.6, seed=20)
    rng = np.random.default_rng(21)
    x = ball.sample(rng)
    w = k.random_unit_tangent(x, rng)
    res = lmo_sphere_ball(w, x, ball)
    assert res.phi is None or -np.pi <= res.phi <= np.pi
