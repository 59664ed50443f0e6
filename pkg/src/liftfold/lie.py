"""Light-cone model of two- and three-dimensional inversive geometry.

Points, oriented circles and oriented lines of the plane are homogeneous
vectors on the projective light cone of R^{3,2}; points, spheres and planes
of 3-space live in R^{4,2}.  The vector length (5 or 6) selects the model.
The inner product has signature (+,+,+,-,-) resp. (+,+,+,+,-,-), with the
coordinate order of the identification table:

    infinity            (0, 0, 1, -1, 0)
    point (x,y)         (x, y, (1-|x|^2)/2, (1+|x|^2)/2, 0)
    circle (c, r)       (c_x, c_y, (1-|c|^2+r^2)/2, (1+|c|^2-r^2)/2, r)
    line (n, d)         (n_x, n_y, -d, d, 1)

Incidence and oriented contact are orthogonality; inversions are linear
reflections.  All functions accept batched arrays (leading axes free).
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LieError", "DimensionMismatch", "NotAPoint", "NotACircle",
    "DegenerateComplex", "TangentPencil", "NoRealIntersection",
    "P5", "P6", "Q0_5", "Q0_6", "E0",
    "ip", "rel_ip", "is_lightlike", "proj_dist", "point_complex", "infinity",
    "encode_point", "encode_points", "encode_point3", "decode_point",
    "decode_points", "encode_circle", "encode_line", "encode_sphere",
    "encode_plane", "decode_circle", "decode_sphere", "inversion",
    "reflection", "m_complex", "oriented_angle", "geodesic_curvature",
    "SpaceForm", "Directrix", "directrix", "embed", "restrict",
    "orthogonal_complement", "lightlike_in_pencil", "circle_intersection",
    "normalize_point", "normalize_sphere", "canonical_point",
]

TOL = 1e-9


class LieError(Exception):
    """Base class for geometric failures in the light-cone kernel."""


class DimensionMismatch(LieError):
    pass


class NotAPoint(LieError):
    pass


class NotACircle(LieError):
    pass


class DegenerateComplex(LieError):
    pass


class TangentPencil(LieError):
    pass


class NoRealIntersection(LieError):
    pass


_SIG5 = np.array([1.0, 1.0, 1.0, -1.0, -1.0])
_SIG6 = np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0])

P5 = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
P6 = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
Q0_5 = np.array([0.0, 0.0, 1.0, -1.0, 0.0])
Q0_6 = np.array([0.0, 0.0, 0.0, 1.0, -1.0, 0.0])
# the x-y plane of 3-space as an oriented sphere vector (normal (0,0,1), d=0)
E0 = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 1.0])


def sig(d):
    if d == 5:
        return _SIG5
    if d == 6:
        return _SIG6
    raise DimensionMismatch(f"expected vectors of length 5 or 6, got {d}")


def point_complex(d=5):
    """The point-sphere complex p of the chosen model."""
    return P5 if d == 5 else P6


def infinity(d=5):
    return Q0_5 if d == 5 else Q0_6


def ip(u, v):
    """Indefinite inner product; u, v broadcast over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatch(
            f"mixed models: {u.shape[-1]} vs {v.shape[-1]} coordinates")
    return np.sum(u * v * sig(u.shape[-1]), axis=-1)


def rel_ip(u, v):
    """Inner product scaled by the Euclidean norms, for residual checks."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    den = np.linalg.norm(u, axis=-1) * np.linalg.norm(v, axis=-1)
    return ip(u, v) / den


def is_lightlike(v, tol=TOL):
    v = np.asarray(v, dtype=float)
    return np.all(np.abs(ip(v, v)) <= tol * np.sum(v * v, axis=-1))


def proj_dist(u, v):
    """Distance of projective classes: unit representatives up to sign."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    un = u / np.linalg.norm(u, axis=-1, keepdims=True)
    vn = v / np.linalg.norm(v, axis=-1, keepdims=True)
    return np.minimum(np.linalg.norm(un - vn, axis=-1),
                      np.linalg.norm(un + vn, axis=-1))


# ---------------------------------------------------------------------------
# codecs

def encode_point(x, y):
    s = x * x + y * y
    return np.array([x, y, 0.5 * (1.0 - s), 0.5 * (1.0 + s), 0.0])


def encode_points(xy):
    """Vectorized planar point encoding, xy of shape (..., 2)."""
    xy = np.asarray(xy, dtype=float)
    s = np.sum(xy * xy, axis=-1)
    zero = np.zeros_like(s)
    return np.stack([xy[..., 0], xy[..., 1],
                     0.5 * (1.0 - s), 0.5 * (1.0 + s), zero], axis=-1)


def encode_point3(x, y, z):
    s = x * x + y * y + z * z
    return np.array([x, y, z, 0.5 * (1.0 - s), 0.5 * (1.0 + s), 0.0])


def decode_point(v, tol=TOL):
    """Euclidean coordinates of a light-cone point, or None for infinity."""
    v = np.asarray(v, dtype=float)
    d = v.shape[-1]
    p = point_complex(d)
    nv = np.linalg.norm(v)
    if abs(ip(v, p)) > tol * nv:
        raise NotAPoint("vector is not orthogonal to the point complex")
    den = v[d - 3] + v[d - 2]
    if abs(den) <= tol * nv:
        return None
    return v[: d - 3] / den


def decode_points(vs):
    """Batched point decode; all points must be finite."""
    vs = np.asarray(vs, dtype=float)
    d = vs.shape[-1]
    den = vs[..., d - 3] + vs[..., d - 2]
    return vs[..., : d - 3] / den[..., None]


def encode_circle(center, r):
    if r == 0:
        raise NotACircle("circle radius must be nonzero")
    cx, cy = center
    s = cx * cx + cy * cy
    return np.array([cx, cy, 0.5 * (1.0 - s + r * r),
                     0.5 * (1.0 + s - r * r), r])


def encode_line(normal, d):
    nx, ny = normal
    nn = np.hypot(nx, ny)
    return np.array([nx / nn, ny / nn, -d, d, 1.0])


def encode_sphere(center, r):
    if r == 0:
        raise NotACircle("sphere radius must be nonzero")
    cx, cy, cz = center
    s = cx * cx + cy * cy + cz * cz
    return np.array([cx, cy, cz, 0.5 * (1.0 - s + r * r),
                     0.5 * (1.0 + s - r * r), r])


def encode_plane(normal, d):
    nx, ny, nz = normal
    nn = np.sqrt(nx * nx + ny * ny + nz * nz)
    return np.array([nx, ny, nz, -d, d, 1.0]) / nn


def decode_circle(v, tol=TOL):
    """Classify a lightlike 5-vector as ("circle", center, r) or ("line", normal, d)."""
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if abs(ip(v, v)) > tol * nv * nv:
        raise NotACircle("vector is not lightlike")
    den = ip(v, Q0_5)  # = v2 + v3, vanishes exactly for lines
    if abs(den) <= tol * nv:
        w = v / v[4]
        return "line", w[:2], -w[2]
    w = v / den
    return "circle", w[:2], w[4]


def decode_sphere(v, tol=TOL):
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if abs(ip(v, v)) > tol * nv * nv:
        raise NotACircle("vector is not lightlike")
    den = ip(v, Q0_6)
    if abs(den) <= tol * nv:
        w = v / v[5]
        return "plane", w[:3], -w[3]
    w = v / den
    return "sphere", w[:3], w[5]


# ---------------------------------------------------------------------------
# inversions and invariants

def inversion(a, x, tol=TOL):
    """Reflection sigma_a(x) = x - 2<x,a>/<a,a> a."""
    a = np.asarray(a, dtype=float)
    aa = ip(a, a)
    if abs(aa) <= tol * np.sum(a * a):
        raise DegenerateComplex("inversion in a null vector")
    x = np.asarray(x, dtype=float)
    co = 2.0 * ip(x, a) / aa
    return x - np.multiply.outer(co, a) if x.ndim > 1 else x - co * a


def reflection(a, tol=TOL):
    """Matrix of sigma_a, acting on column vectors."""
    a = np.asarray(a, dtype=float)
    aa = ip(a, a)
    if abs(aa) <= tol * np.sum(a * a):
        raise DegenerateComplex("inversion in a null vector")
    d = a.shape[-1]
    return np.eye(d) - 2.0 * np.outer(a, a * sig(d)) / aa


def m_complex(s):
    """The M-inversion complex of reflection in the circle/sphere s."""
    s = np.asarray(s, dtype=float)
    p = point_complex(s.shape[-1])
    return s + ip(s, p) * p


def oriented_angle(u, v, tol=TOL):
    """cos(phi) = 1 + <u,v>/(<u,p><v,p>) for two oriented circles/spheres."""
    u = np.asarray(u, dtype=float)
    p = point_complex(u.shape[-1])
    up, vp = ip(u, p), ip(v, p)
    if abs(up) <= tol * np.linalg.norm(u) or abs(vp) <= tol * np.linalg.norm(v):
        raise NotACircle("angle is undefined for point vectors")
    return 1.0 + ip(u, v) / (up * vp)


def geodesic_curvature(s, q, tol=TOL):
    """kappa = <s,q>/<s,p> of the circle s in the space form of q."""
    s = np.asarray(s, dtype=float)
    p = point_complex(s.shape[-1])
    sp = ip(s, p)
    if np.any(np.abs(sp) <= tol * np.linalg.norm(s, axis=-1)):
        raise NotACircle("geodesic curvature is undefined for points")
    return ip(s, q) / sp


@dataclass
class SpaceForm:
    """Space form selected by a vector q orthogonal to the point complex."""
    q: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        p = point_complex(self.q.shape[-1])
        if abs(ip(self.q, p)) > TOL * np.linalg.norm(self.q):
            raise LieError("space form vector must be orthogonal to p")

    @property
    def kappa(self):
        return -ip(self.q, self.q)

    @property
    def kind(self):
        qq = ip(self.q, self.q)
        scale = np.sum(self.q * self.q)
        if abs(qq) <= TOL * scale:
            return "euclidean"
        return "hyperbolic" if qq > 0 else "spherical"


@dataclass
class Directrix:
    """Directrix a* = a + lambda p of a linear circle complex."""
    vector: np.ndarray    # real part a + Re(lambda) p
    lam_re: float
    lam_im: float
    real: bool
    kind: str             # contact | elliptic | hyperbolic


def directrix(a):
    a = np.asarray(a, dtype=float)
    p = point_complex(a.shape[-1])
    ap, aa = ip(a, p), ip(a, a)
    scale = np.sum(a * a)
    disc = ap * ap + aa
    if abs(aa) <= TOL * scale:
        kind = "contact"
    elif aa > 0:
        kind = "elliptic"
    else:
        kind = "hyperbolic"
    if disc >= 0:
        lam = ap - np.sqrt(disc)
        return Directrix(a + lam * p, lam, 0.0, True, kind)
    lam_re, lam_im = ap, -np.sqrt(-disc)
    return Directrix(a + lam_re * p, lam_re, lam_im, False, kind)


def embed(v):
    """Canonical isometric embedding R^{3,2} -> R^{4,2}: insert a zero slot."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 5:
        raise DimensionMismatch("embed expects 5-vectors")
    return np.insert(v, 2, 0.0, axis=-1)


def restrict(v, tol=TOL):
    """Inverse of embed for vectors with vanishing third slot."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 6:
        raise DimensionMismatch("restrict expects 6-vectors")
    if np.any(np.abs(v[..., 2]) > tol * np.linalg.norm(v, axis=-1)):
        raise LieError("vector does not lie in the embedded plane model")
    return np.delete(v, 2, axis=-1)


# ---------------------------------------------------------------------------
# linear subspace utilities

def orthogonal_complement(rows):
    """Orthonormal basis (Euclidean) of the ip-orthogonal complement of rows."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    d = rows.shape[-1]
    m = rows * sig(d)
    m = m / np.linalg.norm(m, axis=-1, keepdims=True)
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > 1e-10 * s[0]))
    return vt[rank:]


def lightlike_in_pencil(u, v, tol=1e-13):
    """The up to two lightlike projective classes in span(u, v).

    Returns a list of representatives; an empty list if the restricted form
    is definite, one element for a double root.
    """
    a, b, c = ip(u, u), ip(u, v), ip(v, v)
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return [np.asarray(u, dtype=float)]
    if abs(a) <= tol * scale:
        out = [np.asarray(u, dtype=float)]
        if abs(b) > tol * scale:
            out.append(-c / (2.0 * b) * u + v)
        return out
    disc = b * b - a * c
    if disc < -tol * scale * scale:
        return []
    if disc <= tol * scale * scale:
        return [(-b / a) * u + v]
    r = np.sqrt(disc)
    return [((-b + r) / a) * u + v, ((-b - r) / a) * u + v]


def circle_intersection(c1, c2, tol=TOL):
    """The two intersection points of two circles/lines, as point vectors."""
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    p = point_complex(c1.shape[-1])
    if abs(rel_ip(c1, c2)) <= tol:
        raise TangentPencil("circles are in oriented contact")
    basis = orthogonal_complement(np.stack([c1, c2, p]))
    if basis.shape[0] != 2:
        raise DegenerateComplex("degenerate circle pair")
    roots = lightlike_in_pencil(basis[0], basis[1])
    if len(roots) < 2:
        if len(roots) == 1:
            raise TangentPencil("circles are tangent")
        raise NoRealIntersection("circles do not intersect in real points")
    return roots[0], roots[1]


# ---------------------------------------------------------------------------
# canonical representatives

def canonical_point(v):
    """Unit-norm representative with positive (1+|x|^2)/2 slot.

    Stable for points near infinity, unlike the affine normalization.
    """
    v = np.asarray(v, dtype=float)
    d = v.shape[-1]
    nrm = np.linalg.norm(v, axis=-1, keepdims=True)
    sgn = np.sign(v[..., d - 2 : d - 1])
    sgn = np.where(sgn == 0, 1.0, sgn)
    return v / (nrm * sgn)


def normalize_point(v):
    """Scale a point representative so the two quadratic slots sum to 1."""
    v = np.asarray(v, dtype=float)
    d = v.shape[-1]
    den = v[..., d - 3] + v[..., d - 2]
    return v / den[..., None] if v.ndim > 1 else v / den


def normalize_sphere(s):
    """Scale a circle/sphere representative to <s,p> = -1."""
    s = np.asarray(s, dtype=float)
    p = point_complex(s.shape[-1])
    den = -ip(s, p)
    return s / den[..., None] if s.ndim > 1 else s / den
