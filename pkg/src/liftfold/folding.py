"""Lifted folding of circular nets with spherical stripes.

A net is a stripe-indexed family of curves in R^{4,2}, each lying on its
stripe sphere.  Folding applies cumulative M-inversions to the stripes; the
gap complexes either come from the sphere pair (sphere mode) or from the
stored stripe-pair complexes of a planar lift (complex mode, the route that
moves a flat net out of its plane).
"""

from dataclasses import dataclass, field

import numpy as np

from .darboux import HolomorphicMapMType
from .lie import (E0, P6, LieError, canonical_point, embed, ip, m_complex,
                  oriented_angle, proj_dist, reflection)

__all__ = [
    "DegenerateFold", "NoSolutionInRange", "HyperbolicPencil", "NotClosed",
    "CircularNet", "FoldPlan", "lift_net", "fold", "fold_spheres", "flatten",
    "reflect_extend", "boundary_angle", "solve_closure", "close_torus",
]


class DegenerateFold(LieError):
    pass


class NoSolutionInRange(LieError):
    pass


class HyperbolicPencil(LieError):
    pass


class NotClosed(LieError):
    pass


@dataclass
class CircularNet:
    """Circular net with spherical stripes along axis 0 of `points`."""
    points: np.ndarray                  # (S, T, 6)
    spheres: np.ndarray                 # (S, 6), normalized <s,p> = -1
    m_gaps: np.ndarray | None = None    # (S-1, 6) stripe-pair complexes
    closed_stripes: bool = False
    stripe_axis: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.spheres = np.asarray(self.spheres, dtype=float)
        if self.m_gaps is not None:
            self.m_gaps = np.asarray(self.m_gaps, dtype=float)

    @property
    def n_stripes(self):
        return self.points.shape[0]

    @property
    def n_vertices(self):
        return self.points.shape[1]


@dataclass
class FoldPlan:
    """Folding parameters per stripe gap.

    mode "sphere": n = s_j + lam s_k - (1+lam) p on the current spheres
    (lam = -1 flattens).  mode "complex": n = s_j + (1+lam) m_jk + <..,p> p
    on the stored pair complexes (lam = -1 is the identity on a flat base).
    """
    lambdas: np.ndarray
    mode: str = "sphere"

    def __post_init__(self):
        self.lambdas = np.atleast_1d(np.asarray(self.lambdas, dtype=float))


def lift_net(hmap: HolomorphicMapMType) -> CircularNet:
    """Embed a planar holomorphic map as a flat net in 3-space.

    All stripes land on the x-y plane sphere; the per-gap complexes are
    embedded alongside for complex-mode folding.
    """
    pts = canonical_point(embed(hmap.stripe_points()))
    s_count = pts.shape[0]
    spheres = np.tile(E0, (s_count, 1))
    m_gaps = embed(hmap.m_gaps)
    meta = {
        "cross_ratios": hmap.cross_ratios.tolist(),
        "lambdas": hmap.lambdas.tolist(),
        "cases": list(hmap.cases),
    }
    meta.update(hmap.meta)
    return CircularNet(pts, spheres, m_gaps, closed_stripes=hmap.closed,
                       meta=meta)


def _gap_complex(net, plan, g):
    """None means the identity transformation for this gap."""
    lam = plan.lambdas[g]
    s_j = net.spheres[g]
    if plan.mode == "sphere":
        return s_j + lam * net.spheres[g + 1] - (1.0 + lam) * P6
    if plan.mode == "complex":
        if net.m_gaps is None:
            raise DegenerateFold("net carries no stripe-pair complexes")
        if abs(1.0 + lam) < 1e-14:
            # lambda = -1: the complex s_j - p fixes stripe points and the
            # identity keeps the sphere orientations too
            return None
        base = s_j + (1.0 + lam) * net.m_gaps[g]
        return base + ip(base, P6) * P6
    raise ValueError(f"unknown fold mode {plan.mode!r}")


def _fold_transforms(net, plan, tol=1e-12):
    """Cumulative inversion matrices per stripe (the first is the identity)."""
    s_count = net.n_stripes
    if len(plan.lambdas) != s_count - 1:
        raise ValueError("plan length must match the number of stripe gaps")
    mats = [np.eye(6)]
    pre_gap = []
    phi = np.eye(6)
    scale = float(np.linalg.norm(net.spheres[0]))
    for g in range(s_count - 1):
        pre_gap.append(phi)
        nh = _gap_complex(net, plan, g)
        if nh is None or np.linalg.norm(nh) <= 1e-10 * scale:
            # coincident-sphere gap at the flattening parameter: leave alone
            mats.append(phi)
            continue
        if abs(ip(nh, nh)) <= tol * np.sum(nh * nh):
            raise DegenerateFold(
                f"gap {g}: folding complex is null (contact spheres)")
        phi = reflection(phi @ nh) @ phi
        mats.append(phi)
    return mats, pre_gap


def fold(net: CircularNet, plan: FoldPlan) -> CircularNet:
    """Lifted folding: stripe k moves by the composed gap inversions."""
    mats, pre_gap = _fold_transforms(net, plan)
    pts = np.stack([canonical_point(net.points[i] @ mats[i].T)
                    for i in range(net.n_stripes)])
    spheres = np.stack([mats[i] @ net.spheres[i]
                        for i in range(net.n_stripes)])
    m_gaps = None
    if net.m_gaps is not None:
        m_gaps = np.stack([pre_gap[g] @ net.m_gaps[g]
                           for g in range(net.n_stripes - 1)])
    meta = dict(net.meta)
    meta["fold_plan"] = {"lambdas": plan.lambdas.tolist(), "mode": plan.mode}
    return CircularNet(pts, spheres, m_gaps,
                       closed_stripes=net.closed_stripes, meta=meta)


def fold_spheres(net: CircularNet, plan: FoldPlan) -> np.ndarray:
    """Spheres of the folded net only (cheap path for closure solving)."""
    mats, _ = _fold_transforms(net, plan)
    return np.stack([mats[i] @ net.spheres[i] for i in range(net.n_stripes)])


def flatten(net: CircularNet) -> CircularNet:
    """The lifted folding with all parameters -1: one common sphere."""
    return fold(net, FoldPlan(-np.ones(net.n_stripes - 1), mode="sphere"))


def reflect_extend(net: CircularNet) -> CircularNet:
    """Append the mirror image through the last stripe sphere."""
    a = m_complex(net.spheres[-1])
    refl = reflection(a)
    new_pts = np.concatenate([net.points,
                              canonical_point(net.points[-2::-1] @ refl.T)],
                             axis=0)
    new_sph = np.concatenate([net.spheres,
                              net.spheres[-2::-1] @ refl.T], axis=0)
    m_gaps = None
    if net.m_gaps is not None:
        m_gaps = np.concatenate([net.m_gaps,
                                 net.m_gaps[::-1] @ refl.T], axis=0)
    meta = dict(net.meta)
    meta["reflected"] = meta.get("reflected", 0) + 1
    return CircularNet(new_pts, new_sph, m_gaps,
                       closed_stripes=net.closed_stripes, meta=meta)


def boundary_angle(net: CircularNet) -> float:
    """cos of the angle between the first sphere and its mirror image
    through the last sphere (the extended-piece boundary pair)."""
    a = m_complex(net.spheres[-1])
    mirrored = reflection(a) @ net.spheres[0]
    return float(oriented_angle(net.spheres[0], mirrored))


def _bisect(fn, lo, hi, flo, iters=200, tol=1e-14):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if abs(hi - lo) < tol * max(1.0, abs(mid)):
            return mid
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def solve_closure(net: CircularNet, p: int, q: int, plan: FoldPlan,
                  free_gaps=None, lam_range=(-10.0, 10.0), samples=2048):
    """Folding parameters hitting a boundary angle of 2 pi p/q.

    Scans the free parameters (default: first and last gap, the two-sphere
    freedom of the fundamental piece) for a sign change of
    cos(angle) - cos(2 pi p/q) and bisects.  The orientation of the
    reflected sphere is conventional, so the sign-flipped target describes
    the same unoriented dihedral configuration and is also accepted.
    """
    target = float(np.cos(2.0 * np.pi * p / q))
    if free_gaps is None:
        free_gaps = [0, len(plan.lambdas) - 1] if len(plan.lambdas) > 1 \
            else [len(plan.lambdas) - 1]

    orthogonal_case = abs(abs(target) - 1.0) < 1e-12

    def angle_of(lams):
        p2 = FoldPlan(lams, mode=plan.mode)
        spheres = fold_spheres(net, p2)
        if orthogonal_case:
            # sigma_a(s1) = s1 (the half-turn torus) iff s1 is orthogonal
            # to s_n; that zero crossing is transversal, unlike the
            # extremum of the mirrored angle
            return float(oriented_angle(spheres[0], spheres[-1]))
        a = m_complex(spheres[-1])
        mirrored = reflection(a) @ spheres[0]
        return float(oriented_angle(spheres[0], mirrored))

    # projective parameter grid: lambda = tan(t) covers the whole pencil
    # of folding complexes, including the neighborhood of lambda = infinity
    tgrid = np.linspace(-np.pi / 2 + 2e-4, np.pi / 2 - 2e-4, samples)
    grid = np.tan(tgrid)

    def solve_1d(base, gap, tgt):
        vals = np.empty(len(grid))
        for i, x in enumerate(grid):
            lams = base.copy()
            lams[gap] = x
            vals[i] = angle_of(lams) - tgt

        def f(x, gap=gap, base=base):
            lams = base.copy()
            lams[gap] = x
            return angle_of(lams) - tgt

        found = []
        changes = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
        for c in changes:
            lam = _bisect(f, grid[c], grid[c + 1], vals[c])
            # secant polish
            x0, x1 = lam, lam + 1e-7
            f0, f1 = f(x0), f(x1)
            for _ in range(8):
                if f1 == f0:
                    break
                x0, x1, f0 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1
                f1 = f(x1)
                if abs(f1) < 1e-14:
                    break
            lam = x1 if abs(f1) < abs(f(lam)) else lam
            lams = base.copy()
            lams[gap] = lam
            if abs(angle_of(lams) - tgt) < 1e-10:
                found.append(lams)
        if not found and abs(tgt) >= 1.0 - 1e-12:
            # extremum target (tangent boundary): refine the best grid
            # point by golden-section
            c = int(np.argmin(np.abs(vals)))
            lo = grid[max(c - 1, 0)]
            hi = grid[min(c + 1, len(grid) - 1)]
            gr = 0.5 * (np.sqrt(5) - 1)
            a_, b_ = lo, hi
            for _ in range(200):
                m1 = b_ - gr * (b_ - a_)
                m2 = a_ + gr * (b_ - a_)
                if abs(f(m1)) < abs(f(m2)):
                    b_ = m2
                else:
                    a_ = m1
            lam = 0.5 * (a_ + b_)
            lams = base.copy()
            lams[gap] = lam
            if abs(angle_of(lams) - tgt) < 1e-10:
                found.append(lams)
        return found

    def _sphere_seam(lams, fixed_m=None):
        """Projective gap between the boundary sphere after m reflections
        and the first sphere; m is located on the first call."""
        spheres = fold_spheres(net, FoldPlan(lams, plan.mode))
        piece = spheres
        best, best_m = np.inf, None
        for m in range(1, 65):
            a = m_complex(piece[-1])
            refl = reflection(a)
            mirr = piece[-2::-1] @ refl.T
            gap_v = float(proj_dist(mirr[-1], spheres[0]))
            if fixed_m is None:
                if gap_v < best:
                    best, best_m = gap_v, m
                if gap_v < 1e-4:
                    # first return of the boundary: the torus period
                    return gap_v, m
            elif m == fixed_m:
                return gap_v, m
            piece = np.concatenate([piece[-1:], mirr], axis=0)
        return best, best_m

    def polish_on_seam(lams, gap):
        """Parabolic refinement of the free parameter on the squared
        sphere-seam defect, which the angle residual amplifies."""
        x0 = lams[gap]
        v0, m_star = _sphere_seam(lams)
        if m_star is None or v0 > 1e-2:
            return lams
        h = 1e-6 * max(1.0, abs(x0))

        def g(x):
            l2 = lams.copy()
            l2[gap] = x
            return _sphere_seam(l2, fixed_m=m_star)[0]

        xa, xb, xc = x0 - h, x0, x0 + h
        for _ in range(25):
            fa, fb, fc = g(xa), g(xb), g(xc)
            denom = (xb - xa) * (fb - fc) - (xb - xc) * (fb - fa)
            if denom == 0:
                break
            xv = xb - 0.5 * ((xb - xa) ** 2 * (fb - fc)
                             - (xb - xc) ** 2 * (fb - fa)) / denom
            if not np.isfinite(xv) or abs(xv - xb) > 10 * abs(xc - xa):
                break
            fv = g(xv)
            pts_ = sorted([(fa, xa), (fb, xb), (fc, xc), (fv, xv)])[:3]
            xa, xb, xc = sorted(x for _, x in pts_)
            if abs(xc - xa) < 1e-15 * max(1.0, abs(xb)):
                break
        best_x = min(((g(x), x) for x in (xa, xb, xc)))[1]
        out = lams.copy()
        out[gap] = best_x
        return out

    def acceptable(lams):
        p2 = FoldPlan(lams, mode=plan.mode)
        spheres = fold_spheres(net, p2)
        a = m_complex(spheres[-1])
        mirrored = reflection(a) @ spheres[0]
        cosv = float(oriented_angle(spheres[0], mirrored))
        if abs(cosv) >= 1.0 - 1e-9:
            # only the coincident configuration closes; a tangent pair of
            # boundary spheres never does
            return proj_dist(mirrored, spheres[0]) < 1e-6
        return not orthogonal_case

    base = plan.lambdas.copy()
    targets = (0.0,) if orthogonal_case else (target, -target)
    best = None
    for tgt in targets:
        candidates = [c for c in solve_1d(base, free_gaps[-1], tgt)
                      if acceptable(c)]
        if not candidates and len(free_gaps) > 1:
            for first in np.linspace(lam_range[0], lam_range[1], 33):
                base2 = base.copy()
                base2[free_gaps[0]] = first
                candidates = [c for c in solve_1d(base2, free_gaps[-1], tgt)
                              if acceptable(c)]
                if candidates:
                    break
        for cand in candidates:
            polished = polish_on_seam(cand, free_gaps[-1])
            seam, _ = _sphere_seam(polished)
            if best is None or seam < best[0]:
                best = (seam, polished)
        if best is not None and best[0] < 1e-9:
            break
    if best is None:
        raise NoSolutionInRange(
            f"target cos(2 pi {p}/{q}) = {target:+.6f} not reached on "
            f"lambda in {lam_range}")
    return FoldPlan(best[1], mode=plan.mode)


def close_torus(net: CircularNet, max_reflections=64, tol=1e-8):
    """Close a fundamental piece to a torus by successive reflections.

    Appends mirror pieces in the running outer boundary sphere until the
    boundary returns to the first sphere and the seam stripe matches the
    first stripe.  Returns (torus net, reflections used, seam residual).
    """
    cos_b = boundary_angle(net)
    if abs(cos_b) > 1.0 + 1e-9:
        raise HyperbolicPencil(
            f"boundary spheres do not intersect (cos = {cos_b:.4f})")
    stripes = [net.points[i] for i in range(net.n_stripes)]
    spheres = [net.spheres[i] for i in range(net.n_stripes)]
    piece_pts = net.points
    piece_sph = net.spheres
    best = np.inf
    for refl_count in range(1, max_reflections + 1):
        a = m_complex(piece_sph[-1])
        refl = reflection(a)
        mirr_pts = canonical_point(piece_pts[-2::-1] @ refl.T)
        mirr_sph = piece_sph[-2::-1] @ refl.T
        stripes.extend(mirr_pts)
        spheres.extend(mirr_sph)
        piece_pts = np.concatenate([piece_pts[-1:][::1], mirr_pts], axis=0)
        piece_sph = np.concatenate([piece_sph[-1:], mirr_sph], axis=0)
        sphere_gap = proj_dist(spheres[-1], spheres[0])
        seam = float(np.max(proj_dist(stripes[-1], stripes[0])))
        best = min(best, seam)
        if sphere_gap < 1e-6 and seam < tol:
            torus = CircularNet(np.stack(stripes[:-1]),
                                np.stack(spheres[:-1]),
                                closed_stripes=net.closed_stripes,
                                meta=dict(net.meta))
            torus.meta["closure"] = {
                "reflections": refl_count,
                "seam_residual": seam,
                "stripes_per_turn": len(stripes) - 1,
            }
            return torus, refl_count, seam
    raise NotClosed(
        f"no closure within {max_reflections} reflections "
        f"(best seam residual {best:.3e})")
