"""Discrete curves in the plane model: evolution maps, circle pencils,
arc-length and elastic circle congruences, explicit discrete elastica,
quasi-periodicity and the Joachimsthal seed nets.

Curves are arrays of light-cone point representatives of shape (n, 5); a
`closed` flag makes all neighbor indexing wrap around.  Congruence arrays
returned for open curves are aligned to the interior vertices 1..n-2.
"""

from dataclasses import dataclass, field

import numpy as np

from .elliptic import ModulusOutOfRange, ellint_K, sncndn
from .lie import (P5, Q0_5, TOL, LieError, decode_points, encode_points,
                  inversion, ip, lightlike_in_pencil, orthogonal_complement)

__all__ = [
    "NotRibaucour", "DegenerateQuad", "DegeneratePencil",
    "ImaginaryCongruence", "NotConstrainedElastic", "NotQuasiPeriodic",
    "NotConcentricPencil",
    "DiscreteCurve", "EvolutionMap", "ElasticData", "MonodromyResult",
    "edge_index", "triple_index", "quad_kernel", "r_evolution", "evolve",
    "pencil_basis", "arc_length_check", "arc_length_congruence",
    "tangent_lines", "elastic_circles", "elastic_fit", "discrete_curvature",
    "elastic_curve_euclidean", "solve_figure_eight", "monodromy_detect",
    "joachimsthal_seed",
]


class NotRibaucour(LieError):
    pass


class DegenerateQuad(LieError):
    pass


class DegeneratePencil(LieError):
    pass


class ImaginaryCongruence(LieError):
    pass


class NotConstrainedElastic(LieError):
    pass


class NotQuasiPeriodic(LieError):
    pass


class NotConcentricPencil(LieError):
    pass


@dataclass
class DiscreteCurve:
    """Planar discrete curve with its ambient space form vector."""
    points: np.ndarray          # (n, 5) light-cone representatives
    q: np.ndarray = field(default_factory=lambda: Q0_5.copy())
    closed: bool = False

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.q = np.asarray(self.q, dtype=float)

    def __len__(self):
        return len(self.points)

    def decode(self):
        return decode_points(self.points)

    def n_interior(self):
        return len(self.points) if self.closed else len(self.points) - 2


@dataclass
class EvolutionMap:
    """Per-edge M-inversion complexes, with optional declared fixed vectors."""
    complexes: np.ndarray               # (n_edges, 5)
    fixed_space: np.ndarray | None = None
    residual: float = 0.0


@dataclass
class ElasticData:
    """Everything the Darboux machinery needs from a constrained elastic curve."""
    q: np.ndarray
    chi: float
    arc_circles: np.ndarray       # a_i at every vertex, <a,p> = -1
    elastic_circles: np.ndarray   # d_j at interior vertices, <d,p> = -1
    tangents: np.ndarray          # oriented geodesic edges t_ij, <t,p> = -1
    complex_D: np.ndarray
    fit_residual: float
    contact_residual: float


@dataclass
class MonodromyResult:
    L: np.ndarray
    residual: float
    orthogonality: float
    fixes_p: float
    fixes_q0: float
    fixes_q: float = float("nan")

    @property
    def is_space_form_motion(self):
        return self.fixes_q < 1e-8


def edge_index(n, closed):
    i = np.arange(n if closed else n - 1)
    return i, (i + 1) % n


def triple_index(n, closed):
    """(i-1, i, i+1) triples; interior vertices only for open curves."""
    if closed:
        j = np.arange(n)
        return (j - 1) % n, j, (j + 1) % n
    j = np.arange(1, n - 1)
    return j - 1, j, j + 1


# ---------------------------------------------------------------------------
# Ribaucour pairs and evolution maps

def quad_kernel(reps, tol=1e-8):
    """Linear dependence of four concircular representatives.

    Returns coefficients (alpha, beta, gamma, delta) with
    alpha*v0 + beta*v1 + gamma*v2 + delta*v3 = 0, the rank residual
    (smallest singular value of the normalized 4-row matrix) and the
    third singular value, whose vanishing flags a degenerate quad.
    """
    m = np.asarray(reps, dtype=float)
    norms = np.linalg.norm(m, axis=1)
    mn = m / norms[:, None]
    u, s, _ = np.linalg.svd(mn)
    coef = u[:, 3] / norms
    return coef, s[3] / s[0], s[2] / s[0]


def r_evolution(f_pts, g_pts, closed=False, tol=1e-8):
    """R-evolution complexes of a Ribaucour pair of curves.

    Representatives per quad are rescaled so f_i - f_j + g_j - g_i = 0 and
    the complex is r_ij = f_i - f_j in those coordinates.
    """
    f_pts = np.asarray(f_pts, dtype=float)
    g_pts = np.asarray(g_pts, dtype=float)
    i_idx, j_idx = edge_index(len(f_pts), closed)
    complexes = np.empty((len(i_idx), 5))
    worst = 0.0
    for e, (i, j) in enumerate(zip(i_idx, j_idx)):
        coef, res, rank3 = quad_kernel([f_pts[i], f_pts[j], g_pts[j],
                                        g_pts[i]])
        if res > tol:
            raise NotRibaucour(f"quad at edge {i}-{j} has rank 4 "
                               f"(residual {res:.2e})")
        scale = np.max(np.abs(coef))
        if rank3 < 1e-10 or np.min(np.abs(coef)) < 1e-10 * scale:
            raise DegenerateQuad(f"quad at edge {i}-{j} is degenerate")
        fi = coef[0] * f_pts[i]
        fj = -coef[1] * f_pts[j]
        complexes[e] = fi - fj
        worst = max(worst, res)
    return EvolutionMap(complexes, residual=worst)


def evolve(complexes, g0, closed=False):
    """Iterate the per-edge inversions from an initial point."""
    complexes = np.asarray(complexes, dtype=float)
    out = [np.asarray(g0, dtype=float)]
    n_pts = len(complexes) if closed else len(complexes) + 1
    for e in range(n_pts - 1):
        out.append(inversion(complexes[e], out[-1]))
    return np.stack(out)


def pencil_basis(f_pts, i, closed=False):
    """Basis of span(f_{i-1}, f_{i+1})^perp, the circle pencil at vertex i."""
    f_pts = np.asarray(f_pts, dtype=float)
    n = len(f_pts)
    if not closed and (i <= 0 or i >= n - 1):
        raise DegeneratePencil("pencil needs both neighbors")
    fm, fp = f_pts[(i - 1) % n], f_pts[(i + 1) % n]
    basis = orthogonal_complement(np.stack([fm, fp]))
    if basis.shape[0] != 3:
        raise DegeneratePencil("neighbor points are projectively equal")
    return basis


# ---------------------------------------------------------------------------
# arc length in a space form

def arc_length_check(curve, tol=1e-8):
    """Constant of <f_i,f_j>/(<f_i,q><f_j,q>) over edges and its max deviation."""
    f, q = curve.points, curve.q
    i_idx, j_idx = edge_index(len(f), curve.closed)
    chi = ip(f[i_idx], f[j_idx]) / (ip(f[i_idx], q) * ip(f[j_idx], q))
    mean = float(np.mean(chi))
    dev = float(np.max(np.abs(chi - mean)))
    return mean, dev


def arc_length_congruence(curve, sign=1.0):
    """a_i = (alpha/chi) f_i + alpha q + p with <f_i,q> = -1 coordinates.

    sign=+1 picks the branch whose first circle has positive decoded
    radius, so the branch does not depend on the representative of q.
    """
    from .lie import decode_circle
    f, q = curve.points, curve.q
    chi, _ = arc_length_check(curve)
    radicand = -chi / (2.0 - ip(q, q) * chi)
    if radicand <= 0:
        raise ImaginaryCongruence("arc-length circles have imaginary radius")
    alpha = np.sqrt(radicand)
    fq = f / (-ip(f, q))[:, None]
    a = (alpha / chi) * fq + alpha * q + P5
    if sign * decode_circle(a[0])[2] < 0:
        a = (-alpha / chi) * fq - alpha * q + P5
    return a


def _traversal_dir(t, pt, tol=TOL):
    """Euclidean travel direction of the oriented circle/line t at the point pt."""
    if abs(ip(t, Q0_5)) <= tol * np.linalg.norm(t):
        return np.array([t[1], -t[0]])        # line, <t,p> = -1 scaled
    w = t / ip(t, Q0_5)
    radial = pt - w[:2]
    return np.sign(w[4]) * np.array([-radial[1], radial[0]])


def tangent_lines(curve, orientation=1):
    """Oriented geodesic edge extensions t_ij with <t,p> = -1.

    The default orientation follows the direction of travel along the curve;
    orientation=-1 selects the second global branch.
    """
    f, q = curve.points, curve.q
    pts = decode_points(f)
    i_idx, j_idx = edge_index(len(f), curve.closed)
    out = np.empty((len(i_idx), 5))
    for e, (i, j) in enumerate(zip(i_idx, j_idx)):
        basis = orthogonal_complement(np.stack([f[i], f[j], q]))
        if basis.shape[0] != 2:
            raise DegeneratePencil(f"edge {i}-{j} is degenerate")
        roots = lightlike_in_pencil(basis[0], basis[1])
        chord = (pts[j] - pts[i]) * orientation
        best = None
        for t in roots:
            t = t / (-ip(t, P5))
            if np.dot(_traversal_dir(t, pts[i]), chord) > 0:
                best = t
        if best is None:
            raise DegeneratePencil(f"no oriented geodesic on edge {i}-{j}")
        out[e] = best
    return out


def elastic_circles(curve, tangents=None, orientation=1):
    """Vertex circles tangent to both oriented geodesic edges.

    d_j = f_{j-1} <t_{ij}, f_{j+1}> - t_{ij} <f_{j-1}, f_{j+1}>, normalized
    to <d,p> = -1; for an arc-length curve these are tangent to the outgoing
    edge as well (the residual is reported by elastic_fit).
    """
    f = curve.points
    if tangents is None:
        tangents = tangent_lines(curve, orientation)
    im, j, ipl = triple_index(len(f), curve.closed)
    t_in = tangents[im] if curve.closed else tangents[:-1]
    fm, fp = f[im], f[ipl]
    d = fm * ip(t_in, fp)[:, None] - t_in * ip(fm, fp)[:, None]
    return d / (-ip(d, P5))[:, None]


def elastic_fit(curve, orientation=1, tol=1e-8):
    """Fit the elastic circle congruence and its linear complex D.

    Raises NotConstrainedElastic when the vertex circles do not lie in a
    common linear complex (relative smallest singular value above tol).
    """
    f, q = curve.points, curve.q
    chi, chi_dev = arc_length_check(curve)
    tangents = tangent_lines(curve, orientation)
    d = elastic_circles(curve, tangents, orientation)
    # contact with the outgoing edge certifies the constant arc length
    im, j, ipl = triple_index(len(f), curve.closed)
    t_out = tangents[j] if curve.closed else tangents[1:]
    contact = float(np.max(np.abs(ip(d, t_out))))
    rows = d / np.linalg.norm(d, axis=1)[:, None]
    _, s, vt = np.linalg.svd(rows)
    resid = s[4] / s[0]
    if resid > tol:
        raise NotConstrainedElastic(
            f"elastic circles span rank 5 (residual {resid:.2e})")
    complex_d = sig5_flip(vt[-1])
    arc = arc_length_congruence(curve, sign=orientation)
    return ElasticData(q, chi, arc, d, tangents, complex_d, float(resid),
                       contact)


def sig5_flip(v):
    """Euclidean kernel vector -> metric-orthogonal complex vector."""
    from .lie import sig
    v = np.asarray(v, dtype=float)
    return v * sig(v.shape[-1])


def discrete_curvature(curve, orientation=1):
    """Vertex curvature: twice the geodesic curvature of the tangent circle."""
    d = elastic_circles(curve, orientation=orientation)
    return 2.0 * ip(d, curve.q) / ip(d, P5)


# ---------------------------------------------------------------------------
# explicit discrete elastica in Euclidean space

def _unit_tangent_factors(k, z, q_phase, n):
    """w_n with tangent T_n = h * w_n * w_{n+1} (complex notation).

    k in (0,1): non-inflectional branch, w = cn + i sn at (z n + q)/k.
    k > 1:      inflectional branch with internal modulus 1/k,
                w = dn + i (1/k) sn at z n + q.
    """
    idx = np.arange(n)
    if 0.0 < k < 1.0:
        u = (z * idx + q_phase) / k
        sn, cn, dn = sncndn(u, k)
        return cn, sn
    if k > 1.0:
        kap = 1.0 / k
        v = z * idx + q_phase
        sn, cn, dn = sncndn(v, kap)
        return dn, kap * sn
    raise ModulusOutOfRange(f"modulus k={k} must be in (0,1) or (1,inf)")


def elastica_z(k, r):
    """Step z giving r-periodic curvature: 4kK(k)/r below 1, 4K(1/k)/r above."""
    if 0.0 < k < 1.0:
        return 4.0 * k * ellint_K(k) / r
    if k > 1.0:
        return 4.0 * ellint_K(1.0 / k) / r
    raise ModulusOutOfRange(f"modulus k={k} must be in (0,1) or (1,inf)")


def elastica_curvature(k, z, q_phase, h, n, closed=False):
    """Curvature list of the explicit elastica, (2/h) tan of half turning angles."""
    idx = np.arange(n) if closed else np.arange(1, n - 1)
    if 0.0 < k < 1.0:
        snz, cnz, dnz = sncndn(z / k, k)
        _, _, dn = sncndn((z * idx + q_phase) / k, k)
        return (2.0 / h) * (snz / cnz) * dn
    kap = 1.0 / k
    snz, cnz, dnz = sncndn(z, kap)
    _, cn, _ = sncndn(z * idx + q_phase, kap)
    return (2.0 * kap / h) * (snz / dnz) * cn


def elastica_edge_vectors(k, z, q_phase, h, n):
    f_, g_ = _unit_tangent_factors(k, z, q_phase, n)
    dx = h * (f_[:-1] * f_[1:] - g_[:-1] * g_[1:])
    dy = h * (f_[:-1] * g_[1:] + g_[:-1] * f_[1:])
    return dx, dy


def elastica_closure_gap(k, r, h=1.0, q_phase=0.0):
    """Translation after one curvature period; zero for closed curves."""
    z = elastica_z(k, r)
    dx, dy = elastica_edge_vectors(k, z, q_phase, h, r + 1)
    return float(np.sum(dx)), float(np.sum(dy))


def elastic_curve_euclidean(k, h, n, r=12, q_phase=0.0, z=None, closed=False):
    """Explicit discrete elastica with n points; returns (curve, curvatures).

    z defaults to the r-periodic-curvature choice.  With closed=True the n
    points are taken as a closed polygon; the caller is responsible for k
    solving the closure condition (see solve_figure_eight) and n being a
    multiple of r.
    """
    if k == 1.0 or k <= 0.0:
        raise ModulusOutOfRange("modulus k = 1 is the asymptotic borderline")
    if z is None:
        z = elastica_z(k, r)
    dx, dy = elastica_edge_vectors(k, z, q_phase, h, n)
    pts = np.zeros((n, 2))
    pts[1:, 0] = np.cumsum(dx)
    pts[1:, 1] = np.cumsum(dy)
    curve = DiscreteCurve(encode_points(pts), Q0_5.copy(), closed=closed)
    kappa = elastica_curvature(k, z, q_phase, h, n, closed=closed)
    return curve, kappa


def solve_figure_eight(r, h=1.0, bracket=(1.02, 1.25), tol=1e-13):
    """Modulus k > 1 closing the inflectional elastica after one period.

    Scans the closure gap for a sign change, then bisects.  With phase 0 the
    vertical component cancels by symmetry, so the gap is scalar.
    """
    def gap(k):
        return elastica_closure_gap(k, r, h)[0]

    ks = np.linspace(bracket[0], bracket[1], 64)
    vals = [gap(k) for k in ks]
    lo = hi = None
    for a, b, va, vb in zip(ks[:-1], ks[1:], vals[:-1], vals[1:]):
        if va == 0.0:
            return float(a)
        if va * vb < 0:
            lo, hi, vlo = a, b, va
            break
    if lo is None:
        raise NotConstrainedElastic("no figure-eight closure in bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        vm = gap(mid)
        if abs(hi - lo) < tol:
            break
        if vlo * vm <= 0:
            hi = mid
        else:
            lo, vlo = mid, vm
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# quasi-periodicity

def monodromy_detect(curve, T, tol=1e-7):
    """Least-squares O(3,2) map L with f_{i+T} ~ L f_i, fixing p.

    Scales between windows are recovered from Gram-matrix ratios; curve
    points only span the 4-dimensional complement of p, so the p-row is
    appended to pin the last degree of freedom.
    """
    f = np.asarray(curve.points, dtype=float)
    n = len(f)
    if n < T + 5:
        raise NotQuasiPeriodic("curve too short for the requested period")
    x = f / np.linalg.norm(f, axis=1)[:, None]
    nw = n - T
    c = np.ones(nw)
    for j in range(nw):
        k, l = (j + 1) % nw, (j + 2) % nw
        g_jk, g_jl, g_kl = ip(x[j], x[k]), ip(x[j], x[l]), ip(x[k], x[l])
        h_jk = ip(x[j + T], x[k + T])
        h_jl = ip(x[j + T], x[l + T])
        h_kl = ip(x[k + T], x[l + T])
        c[j] = np.sqrt(abs(h_jk * h_jl * g_kl / (g_jk * g_jl * h_kl)))
    # sign pattern from consecutive pairs (always distinct points)
    ratio = ip(x[T:T + nw - 1], x[T + 1:T + nw]) / ip(x[:nw - 1], x[1:nw])
    s = np.concatenate([[1.0], np.cumprod(np.sign(ratio))])
    c = c * s
    k_mat = np.vstack([x[:nw], P5])
    k2_mat = np.vstack([x[T:T + nw] / c[:, None], P5])
    # directions unseen by the window (e.g. the circle complex of a
    # concircular curve) are pinned to the identity
    unseen = orthogonal_complement(k_mat)
    if len(unseen):
        k_mat = np.vstack([k_mat, unseen])
        k2_mat = np.vstack([k2_mat, unseen])
    lt, _, _, _ = np.linalg.lstsq(k_mat, k2_mat, rcond=None)
    L = lt.T
    resid = 0.0
    for i in range(nw):
        y = L @ x[i]
        y = y / np.linalg.norm(y)
        resid = max(resid, min(np.linalg.norm(y - x[i + T]),
                               np.linalg.norm(y + x[i + T])))
    from .lie import sig
    g5 = np.diag(sig(5))
    orth = float(np.abs(L.T @ g5 @ L - g5).max())
    if resid > tol or orth > 100 * tol:
        raise NotQuasiPeriodic(
            f"no monodromy at period {T}: residual {resid:.2e}, "
            f"orthogonality {orth:.2e}")

    def fix_resid(v):
        w = L @ v
        w = w / np.linalg.norm(w)
        v = v / np.linalg.norm(v)
        return float(min(np.linalg.norm(w - v), np.linalg.norm(w + v)))

    return MonodromyResult(L, float(resid), orth, fix_resid(P5),
                           fix_resid(Q0_5), fix_resid(curve.q))


# ---------------------------------------------------------------------------
# Joachimsthal seed nets

def joachimsthal_seed(circles, n_samples=24, samples=None, tol=1e-8):
    """Planar net from circles with collinear centers.

    Samples on the first circle propagate by the M-inversions with complexes
    a_ij = c_i <c_j,p> - c_j <c_i,p>; every stripe i lies on circle c_i.
    Returns (stripes, complexes, line) with stripes of shape (S, T, 5).
    """
    from .lie import decode_circle, encode_line
    circles = np.asarray(circles, dtype=float)
    centers = []
    radii = []
    for cv in circles:
        kind, center, rad = decode_circle(cv)
        if kind != "circle":
            raise NotConcentricPencil("seed entries must be circles")
        centers.append(center)
        radii.append(rad)
    centers = np.array(centers)
    # common line through the centers (degenerate to any direction if equal)
    spread = centers - centers.mean(axis=0)
    if np.abs(spread).max() < tol:
        direction = np.array([1.0, 0.0])
    else:
        _, _, vt = np.linalg.svd(spread)
        direction = vt[0]
        if np.abs(spread @ vt[1]).max() > tol * (1 + np.abs(spread).max()):
            raise NotConcentricPencil("circle centers are not collinear")
    normal = np.array([-direction[1], direction[0]])
    line = encode_line(normal, float(normal @ centers[0]))

    if samples is None:
        ang = 2.0 * np.pi * np.arange(n_samples) / n_samples
        samples = encode_points(
            centers[0] + radii[0] * np.stack([np.cos(ang), np.sin(ang)], 1))
    else:
        samples = np.asarray(samples, dtype=float)
        if np.abs(ip(samples, circles[0])).max() > \
                tol * np.linalg.norm(circles[0]):
            raise NotConcentricPencil("samples must lie on the first circle")
    stripes = [samples]
    complexes = []
    for i in range(len(circles) - 1):
        a = circles[i] * ip(circles[i + 1], P5) \
            - circles[i + 1] * ip(circles[i], P5)
        complexes.append(a)
        stripes.append(inversion(a, stripes[-1]))
    return np.stack(stripes), np.stack(complexes), line
