"""Local HTTP endpoint for the interactive viewer.

One session per process: a base net (normally a flat lift carrying stripe
pair complexes) plus the latest fold.  POST /fold always refolds from the
base, so slider values are absolute; mutations are serialized by a lock.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .folding import (CircularNet, FoldPlan, HyperbolicPencil, NotClosed,
                      NoSolutionInRange, close_torus, fold, reflect_extend,
                      solve_closure)
from .lie import LieError
from .netfile import net_to_doc
from .verify import check_net

__all__ = ["Session", "make_server", "serve_forever"]


class Session:
    def __init__(self, base: CircularNet, default_mode=None):
        self.base = base
        if default_mode is None:
            default_mode = "complex" if base.m_gaps is not None else "sphere"
        self.mode = default_mode
        self.lock = threading.Lock()
        self.current = base
        self.report = check_net(base)

    def refold(self, lambdas, mode=None):
        lam = np.asarray(lambdas, dtype=float)
        if lam.shape != (self.base.n_stripes - 1,):
            raise ValueError(
                f"expected {self.base.n_stripes - 1} folding parameters, "
                f"got {lam.shape}")
        plan = FoldPlan(lam, mode or self.mode)
        net = fold(self.base, plan)
        with self.lock:
            self.current = net
            self.report = check_net(net)
        return net, self.report

    def reflect(self):
        with self.lock:
            net = reflect_extend(self.current)
            self.current = net
            self.report = check_net(net)
        return net, self.report

    def close(self, p, q, free_gaps=None):
        with self.lock:
            cur_plan = self.current.meta.get("fold_plan")
            if cur_plan is not None:
                plan = FoldPlan(np.array(cur_plan["lambdas"]),
                                cur_plan["mode"])
            else:
                plan = FoldPlan(np.zeros(self.base.n_stripes - 1), self.mode)
            plan = solve_closure(self.base, p, q, plan, free_gaps=free_gaps)
            net = fold(self.base, plan)
            torus, refl, resid = close_torus(net)
            self.current = torus
            self.report = check_net(torus)
        return torus, self.report, plan, resid


def _net_payload(session, net, report, extra=None):
    doc = net_to_doc(net)
    payload = {"net": doc, "report": report.to_dict()}
    if extra:
        payload.update(extra)
    return payload


class _Handler(BaseHTTPRequestHandler):
    session: Session = None
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, code, payload):
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, code, exc):
        self._send(code, {"error": {"type": type(exc).__name__,
                                    "message": str(exc)}})

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        ses = self.session
        if self.path == "/net":
            with ses.lock:
                payload = _net_payload(ses, ses.current, ses.report)
            self._send(200, payload)
        elif self.path == "/report":
            with ses.lock:
                self._send(200, ses.report.to_dict())
        else:
            self._send(404, {"error": {"type": "NotFound",
                                       "message": self.path}})

    def _body(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b"{}"
        return json.loads(raw.decode() or "{}")

    def do_POST(self):
        ses = self.session
        try:
            body = self._body()
        except (ValueError, json.JSONDecodeError) as exc:
            return self._error(400, exc)
        try:
            if self.path == "/fold":
                if "lambdas" not in body:
                    return self._send(400, {"error": {
                        "type": "BadRequest", "message": "missing lambdas"}})
                net, report = ses.refold(body["lambdas"], body.get("mode"))
                self._send(200, _net_payload(ses, net, report))
            elif self.path == "/reflect":
                net, report = ses.reflect()
                self._send(200, _net_payload(ses, net, report))
            elif self.path == "/close":
                p, q = int(body.get("p", 1)), int(body.get("q", 4))
                net, report, plan, resid = ses.close(
                    p, q, body.get("free_gaps"))
                self._send(200, _net_payload(ses, net, report, {
                    "plan": {"lambdas": plan.lambdas.tolist(),
                             "mode": plan.mode},
                    "closure_residual": resid}))
            else:
                self._send(404, {"error": {"type": "NotFound",
                                           "message": self.path}})
        except ValueError as exc:
            self._error(400, exc)
        except (NoSolutionInRange, HyperbolicPencil, NotClosed,
                LieError) as exc:
            self._error(422, exc)


def make_server(base_net, port=0, default_mode=None):
    handler = type("SessionHandler", (_Handler,), {})
    handler.session = Session(base_net, default_mode)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve_forever(base_net, port, default_mode=None):
    httpd = make_server(base_net, port, default_mode)
    host, actual_port = httpd.server_address
    print(f"serving on http://{host}:{actual_port}", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
