"""Report rendering: the verify pipeline writes the JSON report plus a
delimited check table and matplotlib figures next to it.
"""

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

import numpy as np  # noqa: E402

from .lie import decode_points  # noqa: E402

__all__ = ["write_report"]


def _net_figure(net, path):
    pts = decode_points(net.points)
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(111, projection="3d")
    cmap = plt.get_cmap("viridis")
    s_count = pts.shape[0]
    for i in range(s_count):
        stripe = pts[i]
        if net.closed_stripes:
            stripe = np.vstack([stripe, stripe[:1]])
        ax.plot(stripe[:, 0], stripe[:, 1], stripe[:, 2],
                color=cmap(i / max(s_count - 1, 1)), lw=0.8)
    for t in range(pts.shape[1]):
        ax.plot(pts[:, t, 0], pts[:, t, 1], pts[:, t, 2],
                color="0.55", lw=0.4)
    ax.set_box_aspect((1, 1, 1))
    lo, hi = pts.min(), pts.max()
    for setter in (ax.set_xlim, ax.set_ylim, ax.set_zlim):
        setter(lo, hi)
    ax.set_title("net (stripes colored)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def _residual_figure(report, path):
    names = [c.name for c in report.checks]
    vals = [max(c.value, 1e-18) for c in report.checks]
    thrs = [c.threshold for c in report.checks]
    colors = ["tab:green" if c.passed else "tab:red" for c in report.checks]
    fig, ax = plt.subplots(figsize=(7, 0.6 * len(names) + 1.4))
    y = np.arange(len(names))
    ax.barh(y, vals, color=colors)
    ax.scatter(thrs, y, marker="|", s=200, color="black", zorder=3,
               label="threshold")
    ax.set_xscale("log")
    ax.set_yticks(y, names)
    ax.invert_yaxis()
    ax.set_xlabel("residual")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def write_report(report, outdir, net=None, stem="report"):
    """Write report.json, checks.csv and figures into outdir.

    Returns the list of files written.
    """
    os.makedirs(outdir, exist_ok=True)
    files = []
    jpath = os.path.join(outdir, f"{stem}.json")
    with open(jpath, "w") as fh:
        fh.write(report.to_json())
    files.append(jpath)

    cpath = os.path.join(outdir, "checks.csv")
    with open(cpath, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "value", "threshold", "sense", "passed"])
        for c in report.checks:
            writer.writerow([c.name, repr(c.value), repr(c.threshold),
                             c.sense, c.passed])
    files.append(cpath)

    rpath = os.path.join(outdir, "residuals.png")
    _residual_figure(report, rpath)
    files.append(rpath)

    if net is not None:
        npath = os.path.join(outdir, "net.png")
        _net_figure(net, npath)
        files.append(npath)
    return files
