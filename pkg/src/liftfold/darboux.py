"""Darboux machinery for planar discrete curves: tangential circles, the
two iterative constructions, congruence combinations, explicit Darboux
transforms and the extension of a constrained elastic curve to a discrete
holomorphic map whose stripe pairs all carry fixed linear complexes.
"""

from dataclasses import dataclass, field

import numpy as np

from .curves import DiscreteCurve, elastic_fit, triple_index
from .lie import (P5, LieError, circle_intersection, inversion, ip,
                  normalize_point, proj_dist, rel_ip, sig)

__all__ = [
    "NotIncident", "SingularStep", "PoleParameter", "NotCompatible",
    "NoRealTransform", "StepFailed",
    "MDarbouxStep", "HolomorphicMapMType",
    "tangential_circle", "construction1_step", "construction2_step",
    "construction2_run", "combine_congruences", "s_lambda",
    "congruence_complex", "darboux_explicit", "next_space_form",
    "extend_holomorphic", "lambda_for_step",
]


class NotIncident(LieError):
    pass


class SingularStep(LieError):
    pass


class PoleParameter(LieError):
    pass


class NotCompatible(LieError):
    pass


class NoRealTransform(LieError):
    pass


class StepFailed(LieError):
    pass


def tangential_circle(fa, c, fb, tol=1e-8):
    """Circle through fa and fb in oriented contact with c at fa.

    t = fa <c,fb> - c <fa,fb>; requires fa to lie on c.
    """
    fa = np.asarray(fa, dtype=float)
    c = np.asarray(c, dtype=float)
    fb = np.asarray(fb, dtype=float)
    if fa.ndim == 1:
        if abs(rel_ip(c, fa)) > tol:
            raise NotIncident("fa does not lie on c")
        return fa * ip(c, fb) - c * ip(fa, fb)
    if np.max(np.abs(rel_ip(c, fa))) > tol:
        raise NotIncident("fa does not lie on c")
    return fa * ip(c, fb)[..., None] - c * ip(fa, fb)[..., None]


def _second_intersection(ca, cb, f1, tol=1e-9):
    """The intersection point of circles ca, cb distinct from f1."""
    x1, x2 = circle_intersection(ca, cb)
    d1, d2 = proj_dist(x1, f1), proj_dist(x2, f1)
    return x2 if d1 < d2 else x1


def construction1_step(f0, f1, f2, c1, m, tol=1e-9):
    """One step of the single-complex construction.

    Returns (c2, t01, t12); the next curve point is a free choice on c2.
    """
    t01 = tangential_circle(f0, c1, f1)
    t12 = tangential_circle(f2, c1, f1)
    c2 = f1 * ip(t12, m) - t12 * ip(f1, m)
    return c2, t01, t12


def construction2_step(f0, f1, f2, c1a, c1b, m1, m2, tol=1e-9):
    """One step of the two-complex construction: next point and circles.

    Both seed circles pass through f0 and f2 and lie in their complexes;
    the two propagated circles meet in f1 and in the new point f3.
    """
    t12a = tangential_circle(f2, c1a, f1)
    t12b = tangential_circle(f2, c1b, f1)
    c2a = f1 * ip(t12a, m1) - t12a * ip(f1, m1)
    c2b = f1 * ip(t12b, m2) - t12b * ip(f1, m2)
    c2a = c2a / np.linalg.norm(c2a)
    c2b = c2b / np.linalg.norm(c2b)
    if abs(rel_ip(c2a, c2b)) <= tol:
        raise SingularStep("propagated circles are in oriented contact")
    from .lie import TangentPencil
    try:
        f3 = _second_intersection(c2a, c2b, f1)
    except TangentPencil as exc:
        raise SingularStep(str(exc)) from exc
    return f3 / np.linalg.norm(f3), c2a, c2b


def construction2_run(f0, f1, f2, c1a, c1b, m1, m2, n_steps):
    """Iterate construction 2; returns the generated point list (length n_steps+3)."""
    pts = [np.asarray(f0, float), np.asarray(f1, float), np.asarray(f2, float)]
    ca, cb = np.asarray(c1a, float), np.asarray(c1b, float)
    for _ in range(n_steps):
        f3, ca, cb = construction2_step(pts[-3], pts[-2], pts[-1], ca, cb,
                                        m1, m2)
        pts.append(f3)
    return np.stack(pts)


def combine_congruences(c1, c2, lam, tol=1e-8):
    """c^lam = lam c1 + lt c2 + p with lt = (1+2 lam)/(2 xi lam - 2).

    Both congruences must be <.,p> = -1 normalized and intersect at the
    constant angle xi = <c1_i, c2_i>.
    """
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    xi_all = ip(c1, c2)
    xi = float(np.mean(xi_all))
    if np.max(np.abs(xi_all - xi)) > tol * max(1.0, abs(xi)):
        raise NotCompatible("congruences do not meet at a constant angle")
    if abs(xi * lam - 1.0) < 1e-12:
        raise PoleParameter("lambda = 1/xi is the pole of the combination")
    lt = (1.0 + 2.0 * lam) / (2.0 * xi * lam - 2.0)
    return lam * c1 + lt * c2 + P5, xi


def s_lambda(arc, ela, lam):
    """s^lam = lam a + lt d + p with lt = -(1+2 lam)/(2(1+lam)).

    Specialization of combine_congruences to the arc-length and elastic
    congruences, which intersect orthogonally (xi = -1).
    """
    if abs(1.0 + lam) < 1e-12:
        raise PoleParameter("lambda = -1 is the pole of s^lambda")
    lt = -(1.0 + 2.0 * lam) / (2.0 * (1.0 + lam))
    return lam * np.asarray(arc, float) + lt * np.asarray(ela, float) + P5


def congruence_complex(c_rows, tol=1e-8):
    """Fixed linear complex of a circle congruence (metric kernel vector)."""
    rows = np.asarray(c_rows, dtype=float)
    rows = rows / np.linalg.norm(rows, axis=1)[:, None]
    _, s, vt = np.linalg.svd(rows)
    resid = s[-1] / s[0]
    if resid > tol:
        raise NotCompatible(
            f"congruence does not lie in a fixed complex ({resid:.2e})")
    return vt[-1] * sig(rows.shape[-1]), float(resid)


@dataclass
class MDarbouxStep:
    """Explicit Darboux transform data for one congruence and complex."""
    case: str                     # "two" | "one" | "circle"
    m_bar: np.ndarray
    congruence: np.ndarray        # <c,p> = -1 normalized rows
    transforms: list              # point rows, one entry per branch
    mus: list
    b_vectors: list


def darboux_explicit(c_rows, m_bar=None, tol=1e-10):
    """Explicit (m)-type Darboux transforms from an evolved congruence.

    Case dispatch on the complex m_bar (unit-normalized): hyperbolic
    complexes give two transforms, the parabolic boundary one, lightlike
    complexes a transform lying on the circle m_bar itself.  Elliptic
    complexes admit no real transform.
    """
    c = np.asarray(c_rows, dtype=float)
    c = c / (-ip(c, P5))[:, None]
    if m_bar is None:
        m_bar, _ = congruence_complex(c)
    m_bar = np.asarray(m_bar, dtype=float)
    m_bar = m_bar / np.linalg.norm(m_bar)
    mm = ip(m_bar, m_bar)
    beta = ip(m_bar, P5)
    disc = beta * beta + mm
    if abs(mm) <= tol:
        if abs(beta) <= tol:
            raise NoRealTransform("complex is the point complex itself")
        g = c + m_bar / beta
        return MDarbouxStep("circle", m_bar, c, [g], [1.0 / beta],
                            [m_bar / beta])
    if abs(disc) <= tol:
        if abs(beta) <= tol:
            raise NoRealTransform("parabolic complex with <m,p> = 0")
        b = m_bar / (2.0 * beta) - 0.5 * P5
        return MDarbouxStep("one", m_bar, c, [c + b], [0.5 / beta], [b])
    if mm < 0.0:
        root = np.sqrt(-mm)
        transforms, mus, bs = [], [], []
        for sgn in (1.0, -1.0):
            mu = (beta + sgn * root) / disc
            b = mu * m_bar + (mu * beta - 1.0) * P5
            transforms.append(c + b)
            mus.append(mu)
            bs.append(b)
        return MDarbouxStep("two", m_bar, c, transforms, mus, bs)
    raise NoRealTransform("elliptic complex admits no real Darboux transform")


def next_space_form(s_rows, q, b, closed=False, tol=1e-3):
    """Space form vector of a Darboux transform g = sigma_b(s^lam).

    nu is fixed by b_j = s_i <s_k,s_j> - s_k <s_i,s_j> being orthogonal to
    q + nu p; then q^g = n + <n,p> p with n = sigma_b(q + nu p).
    """
    s = np.asarray(s_rows, dtype=float)
    im, j, ipl = triple_index(len(s), closed)
    bj = s[im] * ip(s[ipl], s[j])[:, None] - s[ipl] * ip(s[im], s[j])[:, None]
    qn = np.asarray(q, dtype=float)
    qn = qn / np.linalg.norm(qn)
    bq, bp = ip(bj, qn), ip(bj, P5)
    # rows with <b_j, p> ~ 0 (symmetric vertices) carry no information
    informative = np.abs(bp) > 1e-7 * np.linalg.norm(bj, axis=1)
    if not np.any(informative):
        raise StepFailed("space-form shift nu is undetermined")
    nu = float(-np.sum(bq * bp) / np.sum(bp * bp))
    spread = np.abs(bq[informative] + nu * bp[informative]) \
        / np.abs(bp[informative])
    if spread.max() > tol * max(1.0, abs(nu)):
        raise StepFailed("no consistent space-form shift nu")
    n = inversion(b, qn + nu * P5)
    out = n + ip(n, P5) * P5
    return out / np.linalg.norm(out)


@dataclass
class HolomorphicMapMType:
    """Sequence of Darboux transformed curves with per-gap fixed complexes."""
    stripes: list                 # list of DiscreteCurve (aligned, see offset)
    m_gaps: np.ndarray            # (S-1, 5) complexes of the stripe pairs
    lambdas: np.ndarray           # (S-1,)
    cases: list                   # per gap: "two+" | "two-" | "one" | ...
    cross_ratios: np.ndarray      # (S-1,) stripe cross-ratio constants
    cross_ratio_dev: np.ndarray   # (S-1,) max deviation from the constant
    closed: bool = False
    meta: dict = field(default_factory=dict)

    def stripe_points(self):
        """Common-length point array (S, T, 5); open maps are trimmed so
        that entry t of every stripe refers to the same seed vertex."""
        if self.closed:
            return np.stack([c.points for c in self.stripes])
        t_len = len(self.stripes[-1])
        out = []
        for c in self.stripes:
            off = (len(c) - t_len) // 2
            out.append(c.points[off:off + t_len])
        return np.stack(out)


def _stripe_cross_ratio(f_pts, s_rows, g_rows, closed):
    """Cross-ratio constant of the quads of a Darboux pair, via the
    evolution complexes r = s_i - s_j of the evolved congruence."""
    n = len(s_rows)
    i = np.arange(n if closed else n - 1)
    jn = (i + 1) % n
    r = s_rows[i] - s_rows[jn]
    cr = ip(f_pts[i], g_rows[i]) * ip(r, r) / (
        2.0 * ip(f_pts[i], r) * ip(g_rows[i], r))
    mean = float(np.mean(cr))
    return mean, float(np.max(np.abs(cr - mean)))


def _transform_for(arc, ela, lam, fit_tol=1e-6):
    """s^lam, its complex and the explicit transforms for one candidate."""
    s_rows = s_lambda(arc, ela, lam)
    s_rows = s_rows / (-ip(s_rows, P5))[:, None]
    m_bar, _ = congruence_complex(s_rows, tol=fit_tol)
    return s_rows, darboux_explicit(s_rows, m_bar)


def _step_score(g_rows, target_edge, prev_pts=None, step_length=None):
    """Conditioning proxy of a candidate stripe: edge-length spread plus a
    drift penalty.  Darboux transforms with wildly uneven Euclidean edges
    pinch in the plane picture and lose digits downstream.  When a target
    stripe separation is given, candidates near it are preferred."""
    from .lie import decode_points
    pts = decode_points(g_rows)
    el = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    if el.min() < 1e-6:
        return np.inf
    score = (np.log(el.max() / el.min())
             + 0.3 * abs(np.log(el.mean() / target_edge))
             + 0.1 * np.log1p(np.abs(pts).max()))
    if step_length is not None and prev_pts is not None:
        sep = float(np.mean(np.linalg.norm(pts - prev_pts, axis=1)))
        if sep < 1e-9:
            return np.inf
        score += 2.0 * abs(np.log(sep / step_length))
    return score


_AUTO_GRID = np.concatenate([np.linspace(-5.0, -1.2, 20),
                             np.linspace(-0.85, 5.0, 30)])


def admissible_lambdas(arc, ela, grid=_AUTO_GRID):
    """Grid values of lambda whose complex admits a real Darboux transform."""
    good = []
    for lam in grid:
        try:
            _, res = _transform_for(arc, ela, lam)
        except (NoRealTransform, NotCompatible, PoleParameter):
            continue
        if res.case != "circle":
            good.append(float(lam))
    return good


def extend_holomorphic(curve, n_stripes, lambdas=0.7, branch="+",
                       orientation=1, tol=1e-8, step_length=None):
    """Extend a constrained elastic curve to a discrete holomorphic map.

    Each step combines the arc-length and elastic congruences into s^lam,
    reads off the fixed complex, applies the explicit Darboux transform and
    re-fits the new stripe in its own space form.  lambdas may be a scalar,
    a per-gap sequence, or "auto" (per-step choice minimizing the
    edge-spread score over a grid -- the stepsize freedom of the extension).
    branch selects mu^+ or mu^- in the two-solution case ("+", "-", "auto",
    or a sequence).
    """
    auto_lam = isinstance(lambdas, str) and lambdas == "auto"
    if not auto_lam:
        lam_list = np.broadcast_to(np.asarray(lambdas, dtype=float),
                                   (n_stripes,)).copy()
    br_list = [branch] * n_stripes if isinstance(branch, str) else list(branch)
    target_edge = None
    stripes = [curve]
    m_gaps, cases, crs, crdevs, used_lams = [], [], [], [], []
    for step in range(n_stripes):
        cur = stripes[-1]
        data = elastic_fit(cur, orientation=orientation, tol=1e-4)
        arc = data.arc_circles if cur.closed else data.arc_circles[1:-1]
        if target_edge is None:
            from .lie import decode_points
            pts = decode_points(cur.points)
            target_edge = float(np.mean(
                np.linalg.norm(np.diff(pts, axis=0), axis=1)))
        if auto_lam or br_list[step] == "auto":
            cand_lams = _AUTO_GRID if auto_lam else [lam_list[step]]
            best = None
            from .lie import decode_points
            prev_pts = decode_points(
                cur.points if cur.closed else cur.points[1:-1])
            for lam in cand_lams:
                try:
                    s_rows, res = _transform_for(arc, data.elastic_circles,
                                                 lam)
                except (NoRealTransform, NotCompatible, PoleParameter):
                    continue
                if res.case == "circle":
                    continue
                for pick in range(len(res.transforms)):
                    score = _step_score(res.transforms[pick], target_edge,
                                        prev_pts, step_length)
                    if best is None or score < best[0]:
                        best = (score, lam, pick, s_rows, res)
            if best is None:
                raise StepFailed(f"step {step}: no admissible parameter "
                                 f"on the scan grid")
            _, lam, pick, s_rows, res = best
        else:
            lam = lam_list[step]
            try:
                s_rows, res = _transform_for(arc, data.elastic_circles, lam)
            except (NoRealTransform, NotCompatible) as exc:
                good = admissible_lambdas(arc, data.elastic_circles)
                raise StepFailed(
                    f"step {step}: lambda={lam} gives {exc}; admissible "
                    f"grid values: {good[:4]}..{good[-4:] if good else []}"
                    ) from exc
            if res.case == "circle":
                raise StepFailed(
                    f"step {step}: transform collapses to a circle")
            pick = 1 if (res.case == "two" and br_list[step] == "-") else 0
        g_rows = res.transforms[pick]
        q_next = next_space_form(s_rows, cur.q, res.b_vectors[pick],
                                 closed=cur.closed)
        interior = cur.points if cur.closed else cur.points[1:-1]
        cr, crdev = _stripe_cross_ratio(interior, s_rows, g_rows, cur.closed)
        g_rows = normalize_point(g_rows)
        stripes.append(DiscreteCurve(g_rows, q_next, closed=cur.closed))
        m_gaps.append(res.m_bar + ip(res.m_bar, P5) * P5)  # p-orthogonal part
        cases.append(res.case + ("+" if pick == 0 else "-")
                     if res.case == "two" else res.case)
        crs.append(cr)
        crdevs.append(crdev)
        used_lams.append(lam)
    return HolomorphicMapMType(stripes, np.stack(m_gaps) if m_gaps else
                               np.zeros((0, 5)),
                               np.array(used_lams), cases,
                               np.array(crs), np.array(crdevs),
                               closed=curve.closed,
                               meta={"orientation": orientation})


def lambda_for_step(curve, target_len, bracket=(0.05, 5.0), orientation=1,
                    iters=60):
    """Bisection on lambda so one Darboux step has a given mean point distance."""
    from .lie import decode_points

    def step_len(lam):
        hmap = extend_holomorphic(curve, 1, lambdas=lam,
                                  orientation=orientation)
        a = decode_points(hmap.stripes[0].points)
        b = decode_points(hmap.stripes[1].points)
        if not curve.closed:
            a = a[1:-1]
        return float(np.mean(np.linalg.norm(a - b, axis=1)))

    lo, hi = bracket
    flo, fhi = step_len(lo) - target_len, step_len(hi) - target_len
    if flo * fhi > 0:
        raise StepFailed("target step length not bracketed")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = step_len(mid) - target_len
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
