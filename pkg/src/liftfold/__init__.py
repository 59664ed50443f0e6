"""liftfold: discrete isothermic nets with planar or spherical curvature
lines, built from planar holomorphic maps by lifted folding."""

from . import curves, darboux, elliptic, folding, lie, netfile, verify
from .curves import DiscreteCurve, elastic_curve_euclidean, elastic_fit
from .darboux import extend_holomorphic
from .folding import CircularNet, FoldPlan, close_torus, flatten, fold, \
    lift_net, reflect_extend, solve_closure
from .verify import check_net

__version__ = "0.1.0"

__all__ = [
    "curves", "darboux", "elliptic", "folding", "lie", "netfile", "verify",
    "DiscreteCurve", "elastic_curve_euclidean", "elastic_fit",
    "extend_holomorphic", "CircularNet", "FoldPlan", "lift_net", "fold",
    "flatten", "reflect_extend", "solve_closure", "close_torus", "check_net",
]
