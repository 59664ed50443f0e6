"""JSON interchange formats and the OBJ export.

Version-1 documents share {"version": 1, "kind": ...}; kinds are "curve"
(planar discrete curve + space form), "map" (holomorphic map: stripes with
their space forms and gap complexes) and "net" (circular net in R^{4,2}
with stripe spheres).  Floats go through repr, so load(save(x)) is
bit-exact.
"""

import json

import numpy as np

from .curves import DiscreteCurve
from .darboux import HolomorphicMapMType
from .folding import CircularNet
from .lie import decode_points

__all__ = ["save_doc", "load_doc", "curve_to_doc", "curve_from_doc",
           "map_to_doc", "map_from_doc", "net_to_doc", "net_from_doc",
           "to_doc", "from_doc", "export_obj"]

VERSION = 1


def _arr(x):
    return np.asarray(x, dtype=float).tolist()


def curve_to_doc(curve, meta=None):
    return {"version": VERSION, "kind": "curve", "model": "R32",
            "points": _arr(curve.points), "q": _arr(curve.q),
            "closed": bool(curve.closed), "meta": meta or {}}


def curve_from_doc(doc):
    return DiscreteCurve(np.array(doc["points"], dtype=float),
                         np.array(doc["q"], dtype=float),
                         closed=bool(doc.get("closed", False)))


def map_to_doc(hmap, meta=None):
    return {
        "version": VERSION, "kind": "map", "model": "R32",
        "stripes": [_arr(c.points) for c in hmap.stripes],
        "qs": [_arr(c.q) for c in hmap.stripes],
        "m_gaps": _arr(hmap.m_gaps),
        "lambdas": _arr(hmap.lambdas),
        "cases": list(hmap.cases),
        "cross_ratios": _arr(hmap.cross_ratios),
        "cross_ratio_dev": _arr(hmap.cross_ratio_dev),
        "closed": bool(hmap.closed),
        "meta": {**hmap.meta, **(meta or {})},
    }


def map_from_doc(doc):
    stripes = [DiscreteCurve(np.array(pts, dtype=float),
                             np.array(q, dtype=float),
                             closed=bool(doc.get("closed", False)))
               for pts, q in zip(doc["stripes"], doc["qs"])]
    return HolomorphicMapMType(
        stripes, np.array(doc["m_gaps"], dtype=float),
        np.array(doc["lambdas"], dtype=float), list(doc["cases"]),
        np.array(doc["cross_ratios"], dtype=float),
        np.array(doc["cross_ratio_dev"], dtype=float),
        closed=bool(doc.get("closed", False)), meta=dict(doc.get("meta", {})))


def net_to_doc(net, meta=None):
    doc = {
        "version": VERSION, "kind": "net", "model": "R42",
        "stripes": _arr(net.points),
        "spheres": _arr(net.spheres),
        "stripe_axis": net.stripe_axis,
        "closed_stripes": bool(net.closed_stripes),
        "meta": {**net.meta, **(meta or {})},
    }
    if net.m_gaps is not None:
        doc["meta"]["m_complexes"] = _arr(net.m_gaps)
    return doc


def net_from_doc(doc):
    meta = dict(doc.get("meta", {}))
    m_gaps = meta.pop("m_complexes", None)
    if m_gaps is not None:
        m_gaps = np.array(m_gaps, dtype=float)
    return CircularNet(np.array(doc["stripes"], dtype=float),
                       np.array(doc["spheres"], dtype=float),
                       m_gaps,
                       closed_stripes=bool(doc.get("closed_stripes", False)),
                       stripe_axis=int(doc.get("stripe_axis", 0)),
                       meta=meta)


def to_doc(obj, meta=None):
    if isinstance(obj, DiscreteCurve):
        return curve_to_doc(obj, meta)
    if isinstance(obj, HolomorphicMapMType):
        return map_to_doc(obj, meta)
    if isinstance(obj, CircularNet):
        return net_to_doc(obj, meta)
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def from_doc(doc):
    kind = doc.get("kind")
    if kind == "curve":
        return curve_from_doc(doc)
    if kind == "map":
        return map_from_doc(doc)
    if kind == "net":
        return net_from_doc(doc)
    raise ValueError(f"unknown document kind {kind!r}")


def save_doc(doc, fp):
    if isinstance(fp, str):
        with open(fp, "w") as fh:
            json.dump(doc, fh)
    else:
        json.dump(doc, fp)


def load_doc(fp):
    if isinstance(fp, str):
        with open(fp) as fh:
            return json.load(fh)
    return json.load(fp)


def export_obj(net, fp, groups=True):
    """Wavefront OBJ of a net: decoded vertices, lattice quads, 1-based
    counter-clockwise faces, optional per-stripe groups."""
    pts = decode_points(net.points)          # (S, T, 3)
    s_count, t_count, _ = pts.shape
    lines = ["# liftfold net export",
             f"# stripes {s_count} vertices-per-stripe {t_count}"]
    for i in range(s_count):
        if groups:
            lines.append(f"g stripe_{i}")
        for t in range(t_count):
            x, y, z = pts[i, t]
            lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")

    def vid(i, t):
        return i * t_count + t + 1

    if groups:
        lines.append("g faces")
    for i in range(s_count - 1):
        for t in range(t_count - 1):
            lines.append("f {} {} {} {}".format(
                vid(i, t), vid(i, t + 1), vid(i + 1, t + 1), vid(i + 1, t)))
    text = "\n".join(lines) + "\n"
    if isinstance(fp, str):
        with open(fp, "w") as fh:
            fh.write(text)
    else:
        fp.write(text)
    return s_count * t_count, (s_count - 1) * (t_count - 1)
