import numpy as np
import pytest

from liftfold import lie


def rand_points(rng, n, scale=3.0):
    return rng.uniform(-scale, scale, (n, 2))


def rand_complex(rng, floor=0.05):
    """A random non-null vector; near-null complexes are rejected since
    the inversion itself is ill-conditioned there (1/<a,a> amplification)."""
    while True:
        a = rng.standard_normal(5)
        if abs(lie.ip(a, a)) > floor * np.sum(a * a):
            return a


def test_signature_constants():
    assert lie.ip(lie.P5, lie.P5) == -1.0
    assert lie.ip(lie.Q0_5, lie.Q0_5) == 0.0
    assert lie.ip(lie.P6, lie.P6) == -1.0
    v = lie.encode_point(1.0, 0.0)
    assert lie.ip(v, v) == 0.0
    assert lie.ip(v, lie.P5) == 0.0
    with pytest.raises(lie.DimensionMismatch):
        lie.ip(lie.P5, lie.P6)


def test_point_codec_table_rows():
    np.testing.assert_allclose(lie.encode_point(0, 0),
                               [0, 0, 0.5, 0.5, 0], atol=0)
    np.testing.assert_allclose(lie.encode_point(1, 0),
                               [1, 0, 0, 1, 0], atol=0)
    np.testing.assert_allclose(lie.decode_point(2.0 * lie.encode_point(3, -4)),
                               [3, -4], rtol=0, atol=1e-15)
    assert lie.decode_point(lie.Q0_5) is None
    with pytest.raises(lie.NotAPoint):
        lie.decode_point(lie.encode_circle((0, 0), 1.0))


def test_point_codec_roundtrip_large_range():
    rng = np.random.default_rng(1)
    xy = rng.uniform(-1e3, 1e3, (500, 2))
    back = lie.decode_points(lie.encode_points(xy))
    assert np.abs(back - xy).max() < 1e-13 * 1e3


def test_circle_codec_table_rows():
    np.testing.assert_allclose(lie.encode_circle((0, 0), 1.0),
                               [0, 0, 1, 0, 1], atol=0)
    np.testing.assert_allclose(lie.encode_line((0, 1), 0.0),
                               [0, 1, 0, 0, 1], atol=0)
    kind, center, r = lie.decode_circle(lie.encode_circle((2, 3), -0.5))
    assert kind == "circle"
    np.testing.assert_allclose(center, [2, 3], atol=1e-14)
    assert abs(r + 0.5) < 1e-14
    kind, normal, d = lie.decode_circle(-2.0 * lie.encode_line((0.6, 0.8), 2.5))
    assert kind == "line"
    np.testing.assert_allclose(normal, [0.6, 0.8], atol=1e-14)
    assert abs(d - 2.5) < 1e-14
    with pytest.raises(lie.NotACircle):
        lie.decode_circle(np.array([1.0, 0, 0, 0, 0]))


def test_sphere_codec():
    s = lie.encode_sphere((1, -2, 0.5), 2.0)
    assert abs(lie.ip(s, s)) < 1e-14
    kind, c, r = lie.decode_sphere(s)
    assert kind == "sphere"
    np.testing.assert_allclose(c, [1, -2, 0.5], atol=1e-14)
    kind, n, d = lie.decode_sphere(lie.encode_plane((0, 0, 1), 0.0))
    assert kind == "plane"


def test_inversion_axis_and_fixed_points():
    rng = np.random.default_rng(2)
    a = rand_complex(rng)
    np.testing.assert_allclose(lie.inversion(a, a), -a, rtol=1e-12)
    # vector orthogonal to a is fixed
    basis = lie.orthogonal_complement(a[None, :])
    for x in basis:
        np.testing.assert_allclose(lie.inversion(a, x), x, atol=1e-12)
    with pytest.raises(lie.DegenerateComplex):
        lie.inversion(lie.encode_point(1, 2), lie.P5)


def test_inversion_unit_circle_oracle():
    # reflection in the unit circle is z -> z/|z|^2
    rng = np.random.default_rng(3)
    a = lie.m_complex(lie.encode_circle((0, 0), 1.0))
    for xy in rand_points(rng, 50):
        z = complex(*xy)
        w = z / abs(z) ** 2
        img = lie.decode_point(lie.inversion(a, lie.encode_point(*xy)))
        assert abs(complex(*img) - w) < 1e-12 * max(1.0, abs(w))


def test_inversion_involution_and_isometry_randomized():
    rng = np.random.default_rng(4)
    worst_inv = worst_iso = 0.0
    for _ in range(200):
        a = rand_complex(rng)
        x = rng.standard_normal(5)
        y = rng.standard_normal(5)
        xx = lie.inversion(a, lie.inversion(a, x))
        worst_inv = max(worst_inv,
                        np.abs(xx - x).max() / np.abs(x).max())
        lhs = lie.ip(lie.inversion(a, x), lie.inversion(a, y))
        rhs = lie.ip(x, y)
        worst_iso = max(worst_iso, abs(lhs - rhs) /
                        (np.linalg.norm(x) * np.linalg.norm(y)))
    assert worst_inv < 1e-11
    assert worst_iso < 1e-11


def test_m_inversion_preserves_points():
    rng = np.random.default_rng(5)
    for _ in range(50):
        s = lie.encode_circle(rng.uniform(-2, 2, 2), rng.uniform(0.2, 2))
        a = lie.m_complex(s)
        assert abs(lie.ip(a, lie.P5)) < 1e-14
        x = lie.encode_point(*rng.uniform(-3, 3, 2))
        assert abs(lie.ip(lie.inversion(a, x), lie.P5)) < 1e-12


def test_fact_difference_inversion_swaps_circles():
    # for lightlike a, b with <a,a> = <b,b>, sigma_{a-b} swaps their spans
    rng = np.random.default_rng(6)
    for _ in range(30):
        a = lie.normalize_sphere(
            lie.encode_circle(rng.uniform(-2, 2, 2), rng.uniform(0.2, 2)))
        b = lie.normalize_sphere(
            lie.encode_circle(rng.uniform(-2, 2, 2), rng.uniform(0.2, 2)))
        img = lie.inversion(a - b, a)
        assert lie.proj_dist(img, b) < 1e-11


def test_oriented_angle():
    u = lie.encode_circle((0.3, -1), 0.7)
    assert abs(lie.oriented_angle(u, u) - 1.0) < 1e-14
    x_axis = lie.encode_line((0, 1), 0.0)
    y_axis = lie.encode_line((1, 0), 0.0)
    assert abs(lie.oriented_angle(x_axis, y_axis)) < 1e-14
    c1 = lie.encode_circle((0, 0), 1.0)
    c2 = lie.encode_circle((0, 0), 2.0)
    assert abs(lie.oriented_angle(c1, c2) - 1.25) < 1e-14
    # oriented contact <=> cos = 1
    t1 = lie.encode_circle((0, 1), 1.0)
    t2 = lie.encode_line((0, 1), 0.0)
    assert abs(lie.ip(t1, t2)) < 1e-14
    assert abs(lie.oriented_angle(t1, t2) - 1.0) < 1e-14
    with pytest.raises(lie.NotACircle):
        lie.oriented_angle(lie.encode_point(1, 1), c1)


def test_geodesic_curvature():
    q0 = lie.Q0_5
    assert abs(lie.geodesic_curvature(lie.encode_line((0.6, 0.8), 1.2),
                                      q0)) < 1e-14
    # sign convention: positively oriented circles have kappa = -1/r
    assert abs(lie.geodesic_curvature(lie.encode_circle((0, 0), 1.0), q0)
               + 1.0) < 1e-14
    assert abs(lie.geodesic_curvature(lie.encode_circle((4, -7), 2.0), q0)
               + 0.5) < 1e-14


def test_space_form_kinds():
    assert lie.SpaceForm(lie.Q0_5).kind == "euclidean"
    assert lie.SpaceForm(lie.Q0_5).kappa == 0.0
    line = lie.encode_line((1, 0), 0.5)
    hyp = lie.SpaceForm(line + lie.ip(line, lie.P5) * lie.P5)
    assert hyp.kind == "hyperbolic" and hyp.kappa < 0
    sph = lie.SpaceForm(np.array([0, 0, 0.0, 1.0, 0.0]))
    assert sph.kind == "spherical" and sph.kappa > 0


def test_directrix():
    # lightlike complex with <a,p> >= 0: lambda = 0, directrix is the circle
    c = lie.encode_circle((1, 1), -0.5)
    d = lie.directrix(c)
    assert d.kind == "contact" and d.real
    assert abs(d.lam_re) < 1e-14
    assert lie.proj_dist(d.vector, c) < 1e-12
    # spacelike complex: real lightlike directrix
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = rng.standard_normal(5)
        if lie.ip(a, a) <= 1e-3:
            continue
        d = lie.directrix(a)
        assert d.kind == "elliptic" and d.real
        assert abs(lie.ip(d.vector, d.vector)) < 1e-12 * np.sum(d.vector ** 2)
    # negative discriminant (timelike p-orthogonal part) flags a complex
    # directrix: disc = <a,p>^2 + <a,a> = <w,w> for a = alpha p + w, w perp p
    a = 0.7 * lie.P5 + np.array([0, 0, 1.0, 2.0, 0.0])
    d = lie.directrix(a)
    assert not d.real and abs(d.lam_im) > 0


def test_embed_isometry():
    rng = np.random.default_rng(8)
    u, v = rng.standard_normal(5), rng.standard_normal(5)
    assert abs(lie.ip(lie.embed(u), lie.embed(v)) - lie.ip(u, v)) < 1e-14
    np.testing.assert_allclose(lie.embed(lie.P5), lie.P6, atol=0)
    pt = lie.embed(lie.encode_point(1.0, 0.0))
    np.testing.assert_allclose(lie.decode_point(pt), [1, 0, 0], atol=1e-14)
    np.testing.assert_allclose(lie.restrict(pt), lie.encode_point(1, 0))


def test_circle_intersection_oracles():
    c = lie.encode_circle((0, 0), 1.0)
    axis = lie.encode_line((0, 1), 0.0)
    pts = sorted(tuple(np.round(lie.decode_point(x), 12))
                 for x in lie.circle_intersection(c, axis))
    assert pts == [(-1.0, 0.0), (1.0, 0.0)]
    c2 = lie.encode_circle((1, 0), 1.0)
    pts = {tuple(np.round(lie.decode_point(x), 9))
           for x in lie.circle_intersection(c, c2)}
    assert (0.5, round(np.sqrt(3) / 2, 9)) in pts
    assert (0.5, round(-np.sqrt(3) / 2, 9)) in pts
    with pytest.raises(lie.TangentPencil):
        lie.circle_intersection(lie.encode_circle((0, 1), 1.0), axis)
    with pytest.raises(lie.NoRealIntersection):
        lie.circle_intersection(c, lie.encode_circle((5, 0), -1.0))


def test_circle_codec_large_scale():
    rng = np.random.default_rng(10)
    for _ in range(200):
        center = rng.uniform(-1e3, 1e3, 2)
        r = rng.uniform(1e-2, 1e3) * rng.choice([-1.0, 1.0])
        kind, c2, r2 = lie.decode_circle(-1.7 * lie.encode_circle(center, r))
        assert kind == "circle"
        # rounding floor of the quadratic slots: half-ulp of 1 +-|c|^2 +- r^2
        scale = 1.0 + center @ center + r * r
        assert np.abs(c2 - center).max() < 1e-13 * scale
        assert abs(r2 - r) < 1e-13 * scale
