import json
import threading
import urllib.request

import numpy as np
import pytest

from liftfold.curves import elastic_curve_euclidean
from liftfold.darboux import extend_holomorphic
from liftfold.folding import lift_net
from liftfold.server import make_server


@pytest.fixture(scope="module")
def server():
    curve, _ = elastic_curve_euclidean(1.15, 0.3, 24, r=8)
    hmap = extend_holomorphic(curve, 4, lambdas="auto")
    net = lift_net(hmap)
    httpd = make_server(net, port=0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}", net
    httpd.shutdown()


def _get(url):
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.status, json.loads(resp.read().decode())


def _post(url, body):
    data = json.dumps(body).encode()
    req = urllib.request.Request(url, data=data,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read().decode())


def test_get_net_and_report(server):
    base, net = server
    status, payload = _get(base + "/net")
    assert status == 200
    assert np.array(payload["net"]["stripes"]).shape == net.points.shape
    status, report = _get(base + "/report")
    assert status == 200 and report["passed"]


def test_fold_identity_at_minus_one(server):
    base, net = server
    lam = [-1.0] * (net.n_stripes - 1)
    status, payload = _post(base + "/fold", {"lambdas": lam})
    assert status == 200
    pts = np.array(payload["net"]["stripes"])
    assert np.abs(pts - net.points).max() < 1e-12


def test_fold_stateless_repeatable(server):
    base, net = server
    lam = list(np.linspace(-2.0, 0.5, net.n_stripes - 1))
    s1, p1 = _post(base + "/fold", {"lambdas": lam})
    s2, p2 = _post(base + "/fold", {"lambdas": lam})
    assert s1 == s2 == 200
    assert p1["net"]["stripes"] == p2["net"]["stripes"]
    assert p1["report"]["passed"]


def test_fold_bad_requests(server):
    base, net = server
    status, err = _post(base + "/fold", {"lambdas": [0.5]})
    assert status == 400
    status, err = _post(base + "/fold", {})
    assert status == 400
    assert "error" in err


def test_reflect_endpoint(server):
    base, net = server
    lam = list(np.linspace(-1.8, 0.4, net.n_stripes - 1))
    _post(base + "/fold", {"lambdas": lam})
    status, payload = _post(base + "/reflect", {})
    assert status == 200
    pts = np.array(payload["net"]["stripes"])
    assert pts.shape[0] == 2 * net.n_stripes - 1


@pytest.fixture(scope="module")
def hyperbolic_server():
    from liftfold.folding import CircularNet
    from liftfold.lie import embed, encode_circle, normalize_sphere
    from liftfold.curves import joachimsthal_seed
    radii = [1.0, 1.5, 2.2]
    circles = np.stack([encode_circle((0, 0), r) for r in radii])
    stripes, _, _ = joachimsthal_seed(circles, n_samples=10)
    net = CircularNet(embed(stripes), normalize_sphere(embed(circles)),
                      closed_stripes=True)
    httpd = make_server(net, port=0, default_mode="sphere")
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()


def test_close_unreachable_is_422(hyperbolic_server):
    # nested spheres: hyperbolic pencils everywhere, no closure angle
    status, err = _post(hyperbolic_server + "/close", {"p": 1, "q": 4})
    assert status == 422
    assert err["error"]["type"] in ("NoSolutionInRange", "HyperbolicPencil")
