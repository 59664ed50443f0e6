"""Diagnostics for curves and nets: every invariant the construction is
supposed to satisfy, evaluated with scale-free residuals and collected in a
machine-readable report.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .curves import quad_kernel
from .lie import LieError, ip, point_complex, proj_dist, sig

__all__ = ["DegenerateQuadRatio", "cross_ratio", "quad_complex",
           "stripe_cross_ratios", "Check", "DiagnosticReport", "check_net"]


class DegenerateQuadRatio(LieError):
    pass


def cross_ratio(f1, f2, r):
    """cr = <f1,f2><r,r> / (2 <f1,r><f2,r>) for the quad spanned by the
    edge (f1, f2) and the evolution inversion with complex r."""
    d1, d2 = ip(f1, r), ip(f2, r)
    n1 = np.linalg.norm(np.asarray(f1, float)) * np.linalg.norm(r)
    n2 = np.linalg.norm(np.asarray(f2, float)) * np.linalg.norm(r)
    if abs(d1) < 1e-14 * n1 or abs(d2) < 1e-14 * n2:
        raise DegenerateQuadRatio("edge point orthogonal to the complex")
    return float(ip(f1, f2) * ip(r, r) / (2.0 * d1 * d2))


def quad_complex(v0, v1, v2, v3):
    """Evolution complex of the concircular quad (v0, v1, v2, v3), cyclic.

    Representatives are rescaled to v0 - v1 + v2 - v3 = 0; the returned
    complex r = v0 - v3 swaps v0<->v3 and v1<->v2, so that
    cross_ratio(v0, v1, r) is the cross-ratio of the quad.
    Returns (r, rank residual).
    """
    coef, resid, _ = quad_kernel([v0, v1, v2, v3])
    return coef[0] * np.asarray(v0, float) + coef[3] * np.asarray(v3, float), \
        resid


def _batched_quads(points, closed):
    """All elementary quads as an (N, 4, d) array in the cyclic order
    (f_t^i, f_t^{i+1}, f_{t+1}^{i+1}, f_{t+1}^i): the leading pair is the
    transversal edge, the quad's evolution inversion acts along the stripes.
    """
    s_count, t_count, d = points.shape
    if closed:
        nxt = np.roll(points, -1, axis=1)
        a, b, c, e = points[:-1], points[1:], nxt[1:], nxt[:-1]
        t_edges = t_count
    else:
        a, b = points[:-1, :-1], points[1:, :-1]
        c, e = points[1:, 1:], points[:-1, 1:]
        t_edges = t_count - 1
    quads = np.stack([a, b, c, e], axis=2)
    return quads.reshape(-1, 4, d), (s_count - 1, t_edges)


def _quad_rank_residuals(quads):
    qn = quads / np.linalg.norm(quads, axis=2, keepdims=True)
    s = np.linalg.svd(qn, compute_uv=False)
    return s[:, 3] / s[:, 0]


def stripe_cross_ratios(points, closed=False):
    """Per-gap cross-ratio constants and deviations of a net.

    Magnitudes come from the projective product of inner products,
    cr^2 = <12><34> / (<23><41>), which needs no rank extraction and is
    exact up to rounding; the sign per gap is read off one mid-stripe quad
    through its evolution complex.
    """
    quads, (gaps, t_edges) = _batched_quads(points, closed)
    qn = quads / np.linalg.norm(quads, axis=2, keepdims=True)
    g12 = ip(qn[:, 0], qn[:, 1])
    g34 = ip(qn[:, 2], qn[:, 3])
    g23 = ip(qn[:, 1], qn[:, 2])
    g41 = ip(qn[:, 3], qn[:, 0])
    crsq = (g12 * g34 / (g23 * g41)).reshape(gaps, t_edges)
    s = np.linalg.svd(qn, compute_uv=False)
    cr_abs = np.sqrt(np.abs(crsq))
    signs = np.empty(gaps)
    for g in range(gaps):
        mid = t_edges // 2
        r, _ = quad_complex(*quads[g * t_edges + mid])
        f1, f2 = quads[g * t_edges + mid, 0], quads[g * t_edges + mid, 1]
        val = ip(f1, f2) * ip(r, r) / (2.0 * ip(f1, r) * ip(f2, r))
        signs[g] = 1.0 if val >= 0 else -1.0
    cr = signs[:, None] * cr_abs
    means = cr.mean(axis=1)
    devs = np.abs(cr - means[:, None]).max(axis=1)
    return means, devs, s[:, 3].reshape(gaps, t_edges)


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    sense: str = "max"   # "max": value <= threshold, "min": value >= threshold

    def to_dict(self):
        return {"name": self.name, "value": self.value,
                "threshold": self.threshold, "passed": bool(self.passed),
                "sense": self.sense}


@dataclass
class DiagnosticReport:
    checks: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add_max(self, name, value, threshold):
        self.checks.append(Check(name, float(value), float(threshold),
                                 bool(value <= threshold), "max"))

    def add_min(self, name, value, threshold):
        self.checks.append(Check(name, float(value), float(threshold),
                                 bool(value >= threshold), "min"))

    def to_dict(self):
        return {"passed": bool(self.passed),
                "checks": [c.to_dict() for c in self.checks],
                "details": self.details}

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    def __str__(self):
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            op = "<=" if c.sense == "max" else ">="
            lines.append(f"[{mark}] {c.name}: {c.value:.3e} {op} "
                         f"{c.threshold:.1e}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def default_tol(fallback=1e-8):
    """Default residual threshold; LIFTFOLD_TOL overrides it."""
    try:
        return float(os.environ["LIFTFOLD_TOL"])
    except (KeyError, ValueError):
        return fallback


def check_net(net, tol=None, cr_tol=None, optional=()):
    """Run the net diagnostics; `optional` may include "planar_preset" and
    "sphere_span_4d".  Thresholds default to 1e-8 (1e-7 for cross-ratio
    constancy), overridable through the LIFTFOLD_TOL environment variable."""
    if tol is None:
        tol = default_tol()
    if cr_tol is None:
        cr_tol = 10.0 * tol
    pts = net.points
    s_count, t_count, d = pts.shape
    p = point_complex(d)
    norms2 = np.sum(pts * pts, axis=2)
    report = DiagnosticReport()

    report.add_max("lightcone", np.abs(ip(pts, pts) / norms2).max(), tol)
    report.add_max("point_complex",
                   np.abs(ip(pts, p) / np.sqrt(norms2)).max(), tol)

    quads, (gaps, t_edges) = _batched_quads(pts, net.closed_stripes)
    quad_res = _quad_rank_residuals(quads).reshape(gaps, t_edges)
    report.add_max("quad_circularity", quad_res.max(), tol)
    worst = np.unravel_index(int(np.argmax(quad_res)), quad_res.shape)
    report.details["worst_quad"] = [int(worst[0]), int(worst[1])]

    sph = net.spheres
    inc = np.abs(ip(pts, sph[:, None, :])) / (
        np.sqrt(norms2) * np.linalg.norm(sph, axis=1)[:, None])
    report.add_max("sphere_incidence", inc.max(), tol)
    report.details["stripe_incidence"] = inc.max(axis=1).tolist()

    means, devs, _ = stripe_cross_ratios(pts, net.closed_stripes)
    rel = devs / np.maximum(np.abs(means), 1.0)
    report.add_max("cross_ratio_constancy", rel.max(), cr_tol)
    report.details["stripe_cross_ratios"] = means.tolist()
    report.details["stripe_cross_ratio_dev"] = devs.tolist()

    gap_dist = proj_dist(sph[:-1], sph[1:])
    if gap_dist.max() < 1e-10:
        # a flat net: all stripes share one sphere by construction
        report.add_max("flat_net_spheres_coincide", gap_dist.max(), 1e-10)
    else:
        report.add_min("adjacent_spheres_distinct", gap_dist.min(), 1e-7)

    if "planar_preset" in optional:
        from .lie import Q0_6
        val = np.abs(ip(sph, Q0_6)) / np.linalg.norm(sph, axis=1)
        report.add_max("planar_preset", val.max(), tol)
    if "sphere_span_4d" in optional:
        rows = np.vstack([sph / np.linalg.norm(sph, axis=1)[:, None],
                          p[None, :]])
        sv = np.linalg.svd(rows, compute_uv=False)
        report.add_max("sphere_span_4d", sv[4] / sv[0], 1e-8)
    return report
