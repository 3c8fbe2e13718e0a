import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from spinframe.curves import CurveSpec, circle_spec, cubic_polyline_spec, helix_spec, line_spec, sample_curve
from spinframe.errors import FrameError, SingularityError
from spinframe.frames import (
    CurvatureProfile,
    FramePath,
    bishop1_by_transport,
    bishop1_from_frenet,
    bishop2_from_frenet,
    cartan_bishop1,
    cartan_bishop2,
    cartan_frenet,
    curvatures_from_bishop1,
    default_normal,
    frenet_apparatus,
    initial_bishop1_frame,
    orthonormality_defect,
    propagate_bishop1,
    propagate_bishop2,
    propagate_frenet,
    step_rotation_angles,
    theta1_profile,
    theta2_profile,
)


def circle_frames(s, r=1.0):
    """Closed-form Frenet frames of the counter-clockwise circle of radius r."""
    u = s / r
    t = np.stack([-np.sin(u), np.cos(u), 0 * u], axis=1)
    n = np.stack([-np.cos(u), -np.sin(u), 0 * u], axis=1)
    b = np.broadcast_to([0.0, 0.0, 1.0], t.shape)
    return np.stack([t, n, b], axis=1)


def fd_derivative(path, h):
    """Central differences of the frame rows (interior samples only)."""
    return (path.frames[2:] - path.frames[:-2]) / (2 * h)


class TestFrenetApparatus:
    def test_helix(self):
        fr, kappa, tau = frenet_apparatus(sample_curve(helix_spec(1, 1, samples=300)))
        assert np.allclose(kappa, 0.5, atol=1e-14)
        assert np.allclose(tau, 0.5, atol=1e-14)
        assert np.max(orthonormality_defect(fr.frames)) < 1e-14

    def test_circle(self):
        c = sample_curve(circle_spec(2.0, samples=300))
        fr, kappa, tau = frenet_apparatus(c)
        assert np.allclose(kappa, 0.5, atol=1e-14)
        assert np.max(np.abs(tau)) < 1e-14
        assert np.allclose(fr.frames, circle_frames(c.s, 2.0), atol=1e-14)

    def test_line_is_singular(self):
        with pytest.raises(SingularityError, match="sample 0") as err:
            frenet_apparatus(sample_curve(line_spec(samples=11)))
        assert err.value.index == 0

    def test_frenet_serret_by_finite_differences(self):
        c = sample_curve(helix_spec(2.0, 0.7, 6.0, samples=3001))
        fr, kappa, tau = frenet_apparatus(c)
        d = fd_derivative(fr, c.h)
        expected = cartan_frenet(kappa, tau)[1:-1] @ fr.frames[1:-1]
        assert np.max(np.abs(d - expected)) < 1e-6


class TestPropagation:
    def test_zero_curvature_constant_frame(self):
        s = np.linspace(0, 1, 101)
        r = Rotation.from_rotvec([0.1, 0.2, 0.3]).as_matrix()
        for prop in (propagate_frenet, propagate_bishop1, propagate_bishop2):
            path = prop(0 * s, 0 * s, r, s)
            assert np.allclose(path.frames, r, atol=1e-15)

    def test_circle_closes_after_one_turn(self):
        s = np.linspace(0, 2 * np.pi, 6284)
        path = propagate_frenet(np.ones_like(s), 0 * s, circle_frames(s[:1])[0], s)
        assert np.max(np.abs(path.frames[-1] - path.frames[0])) <= 1e-6
        assert np.max(np.abs(path.frames - circle_frames(s))) <= 1e-10

    def test_helix_frenet_matches_closed_form(self, helix_routes):
        dev = np.abs(helix_routes.vector["frenet"].frames - helix_routes.closed["frenet"].frames)
        assert dev.max() <= 1e-6

    @pytest.mark.parametrize("kind", ["bishop1", "bishop2"])
    def test_helix_bishop_matches_closed_form(self, helix_routes, kind):
        dev = np.abs(helix_routes.vector[kind].frames - helix_routes.closed[kind].frames)
        assert dev.max() <= 1e-6

    def test_circle_bishop2_keeps_frenet_binormal(self):
        c = sample_curve(circle_spec(1.0, samples=500))
        fr, kappa, tau = frenet_apparatus(c)
        prof = CurvatureProfile.from_frenet(c.s, kappa, tau)
        assert np.max(np.abs(prof.eps1)) < 1e-14 and np.max(np.abs(prof.eps2)) < 1e-14
        b2, _, _ = bishop2_from_frenet(fr, tau, prof.theta2)
        path = propagate_bishop2(prof.eps1, prof.eps2, b2.frames[0], c.s)
        assert np.allclose(path.e3, fr.e3, atol=1e-14)
        assert np.allclose(path.frames, path.frames[0], atol=1e-14)

    @settings(max_examples=25)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([propagate_frenet, propagate_bishop1, propagate_bishop2]))
    def test_stays_orthonormal_for_random_profiles(self, seed, prop):
        rng = np.random.default_rng(seed)
        s = np.linspace(0, 5, 501)
        c1, c2 = rng.uniform(-2, 2, size=(2, 4))
        p = c1[0] + c1[1] * np.sin(c1[2] * s + c1[3])
        q = c2[0] + c2[1] * np.cos(c2[2] * s + c2[3])
        path = prop(p, q, Rotation.random(random_state=seed).as_matrix(), s)
        assert np.max(orthonormality_defect(path.frames)) <= 1e-13
        assert np.all(np.linalg.det(path.frames) > 0)

    def test_bad_initial_frames(self):
        s = np.linspace(0, 1, 11)
        with pytest.raises(FrameError, match="not orthonormal"):
            propagate_frenet(s, s, 1.01 * np.eye(3), s)
        with pytest.raises(FrameError, match="left-handed"):
            propagate_frenet(s, s, np.diag([1.0, 1.0, -1.0]), s)
        with pytest.raises(FrameError, match="does not match"):
            propagate_frenet(s[:-1], s, np.eye(3), s)
        with pytest.raises(FrameError, match="uniform"):
            propagate_frenet(s, s, np.eye(3), s**2)


class TestAngles:
    def test_zero_torsion(self):
        assert np.array_equal(theta1_profile(np.zeros(11), 0.3, h=0.1), np.full(11, 0.3))
        assert np.array_equal(theta2_profile(np.zeros(11), -1.0, h=0.1), np.full(11, -1.0))

    def test_helix_theta1_linear(self):
        s = np.linspace(0, 4 * np.pi, 1001)
        assert np.max(np.abs(theta1_profile(np.full_like(s, 0.5), s=s) - 0.5 * s)) <= 1e-9

    def test_sine_torsion(self):
        s = np.linspace(0, np.pi, 1001)
        assert theta1_profile(np.sin(s), s=s)[-1] == pytest.approx(2.0, abs=1e-8)

    def test_circle_theta2(self):
        s = np.linspace(0, 2 * np.pi, 777)
        assert np.max(np.abs(theta2_profile(np.full_like(s, 0.5), s=s) - s / 2)) <= 1e-9

    def test_unit_kappa(self):
        s = np.linspace(0, 1, 11)
        assert theta2_profile(np.ones(11), s=s)[-1] == pytest.approx(1.0, abs=1e-15)


class TestBishopFromFrenet:
    def test_planar_curve(self):
        c = sample_curve(circle_spec(1.5, samples=200))
        fr, kappa, tau = frenet_apparatus(c)
        b1, k1, k2 = bishop1_from_frenet(fr, kappa, tau, theta1_profile(tau, h=c.h))
        assert np.allclose(b1.frames, fr.frames, atol=1e-14)
        assert np.allclose(k1, kappa, atol=1e-15) and np.allclose(k2, 0, atol=1e-14)

    def test_helix_at_pi(self):
        c = sample_curve(helix_spec(1, 1, 4 * np.pi, samples=4001))
        fr, kappa, tau = frenet_apparatus(c)
        _, k1, k2 = bishop1_from_frenet(fr, kappa, tau, theta1_profile(tau, h=c.h))
        i = np.argmin(np.abs(c.s - np.pi))
        assert c.s[i] == pytest.approx(np.pi, abs=1e-12)
        assert k1[i] == pytest.approx(0.0, abs=1e-12)
        assert k2[i] == pytest.approx(0.5, abs=1e-12)

    def test_bishop1_normals_are_parallel_transported(self):
        c = sample_curve(helix_spec(1.0, 0.4, 5.0, samples=5001))
        fr, kappa, tau = frenet_apparatus(c)
        b1, k1, k2 = bishop1_from_frenet(fr, kappa, tau, theta1_profile(tau, h=c.h))
        d = fd_derivative(b1, c.h)
        # N1' and N2' have no component along the other normal
        assert np.max(np.abs(np.sum(d[:, 1] * b1.e3[1:-1], axis=1))) < 1e-6
        assert np.max(np.abs(d - cartan_bishop1(k1, k2)[1:-1] @ b1.frames[1:-1])) < 1e-6

    def test_bishop2_equations_by_finite_differences(self):
        c = sample_curve(helix_spec(1.0, 0.4, 5.0, samples=5001))
        fr, kappa, tau = frenet_apparatus(c)
        b2, e1, e2 = bishop2_from_frenet(fr, tau, theta2_profile(kappa, h=c.h))
        d = fd_derivative(b2, c.h)
        assert np.max(np.abs(d - cartan_bishop2(e1, e2)[1:-1] @ b2.frames[1:-1])) < 1e-6

    def test_theta2_quarter_turn(self):
        c = sample_curve(helix_spec(samples=50))
        fr, _, tau = frenet_apparatus(c)
        b2, _, _ = bishop2_from_frenet(fr, tau, np.full(50, np.pi / 2))
        assert np.allclose(b2.e1, fr.e1, atol=1e-15)
        assert np.allclose(b2.e2, fr.e2, atol=1e-15)

    def test_planar_bishop2_rotates_in_tn_plane(self):
        c = sample_curve(circle_spec(1.0, samples=200))
        fr, kappa, tau = frenet_apparatus(c)
        b2, e1, e2 = bishop2_from_frenet(fr, tau, theta2_profile(kappa, h=c.h))
        assert np.max(np.abs(e1)) < 1e-14 and np.max(np.abs(e2)) < 1e-14
        assert np.max(np.abs(b2.e1[:, 2])) < 1e-15

    def test_wrong_kind(self):
        c = sample_curve(helix_spec(samples=50))
        fr, kappa, tau = frenet_apparatus(c)
        b1, _, _ = bishop1_from_frenet(fr, kappa, tau, np.zeros(50))
        with pytest.raises(FrameError):
            bishop1_from_frenet(b1, kappa, tau, np.zeros(50))


class TestCurvaturesFromBishop1:
    @pytest.mark.parametrize("k1, k2, kappa, theta", [
        (0.5, 0.0, 0.5, 0.0),
        (0.0, 0.5, 0.5, np.pi / 2),
    ])
    def test_examples(self, k1, k2, kappa, theta):
        kap, th = curvatures_from_bishop1(k1, k2)
        assert kap[0] == pytest.approx(kappa) and th[0] == pytest.approx(theta)

    def test_unwrapped(self):
        t = np.linspace(0, 10, 400)
        _, th = curvatures_from_bishop1(np.cos(t), np.sin(t))
        assert np.allclose(th, t, atol=1e-12)

    def test_flat_samples_hold_angle(self):
        k1 = np.array([0.0, 0.0, 1.0, 0.0, 0.0, -1.0])
        k2 = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 1.0])
        kappa, th = curvatures_from_bishop1(k1, k2)
        assert kappa[0] == 0
        assert th.tolist() == pytest.approx([np.pi / 4] * 5 + [3 * np.pi / 4])


class TestTransport:
    def test_default_normal(self):
        for t in ([1.0, 0, 0], [0, 0, 1.0], np.array([1.0, 2, 3]) / np.sqrt(14)):
            n = default_normal(np.asarray(t))
            assert abs(np.dot(n, t)) < 1e-15 and np.linalg.norm(n) == pytest.approx(1.0)

    def test_matches_closed_form_on_helix(self, helix, helix_routes):
        path, k1, k2 = bishop1_by_transport(helix)
        assert np.max(np.abs(path.frames - helix_routes.closed["bishop1"].frames)) <= 1e-6
        assert np.max(np.abs(k1 - helix_routes.profile.k1)) <= 1e-6

    def test_line(self):
        c = sample_curve(line_spec(2.0, samples=21))
        path, k1, k2 = bishop1_by_transport(c)
        assert np.allclose(path.frames, path.frames[0], atol=1e-15)
        assert np.all(k1 == 0) and np.all(k2 == 0)

    def test_initial_frame_uses_theta(self):
        c = sample_curve(helix_spec(samples=50))
        f0 = initial_bishop1_frame(c, 0.0)
        f1 = initial_bishop1_frame(c, np.pi / 2)
        assert np.allclose(f1[1], -f0[2], atol=1e-15)

    def test_cubic_inflection(self):
        c = sample_curve(cubic_polyline_spec(points=2001))
        path, k1, k2 = bishop1_by_transport(c)
        assert np.max(orthonormality_defect(path.frames)) <= 1e-9
        bound = c.h * np.max(np.hypot(k1, k2)) + 1e-6
        assert np.max(step_rotation_angles(path)) <= bound
        # planar curve: N2 stays the plane normal, no flip at the inflection
        assert np.allclose(np.abs(path.e3[:, 2]), 1.0, atol=1e-9)
        assert np.all(path.e3[:, 2] * path.e3[0, 2] > 0)

    def test_generic_cubic_matches_polyline(self):
        spec = CurveSpec("generic-parametric", {}, (-1.0, 1.0), 2001, expr=("t", "t**3", "0"))
        path, _, _ = bishop1_by_transport(sample_curve(spec))
        assert np.max(orthonormality_defect(path.frames)) <= 1e-9
        tangent_jump = np.linalg.norm(np.diff(path.e1, axis=0), axis=1)
        assert tangent_jump.max() < 0.01


def test_frame_path_accessors():
    s = np.linspace(0, 1, 5)
    path = FramePath(s, np.broadcast_to(np.eye(3), (5, 3, 3)).copy(), "frenet")
    assert len(path) == 5
    assert np.array_equal(path.e2, np.tile([0.0, 1.0, 0.0], (5, 1)))
    assert np.array_equal(path[2].as_matrix(), np.eye(3))
