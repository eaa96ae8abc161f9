"""Local JSON-over-HTTP endpoint backing the explorer UI.

Stateless: every request carries its own document.  The `iqp` field of a
/mutate response is the same document the CLI prints for
`mutate FILE -v V` (serialize it with io.dumps_document to compare bytes):
vertex ids survive mutation unchanged, so a client can chain clicks by the
labels it displays, and the trace refers to arrows of the response document.
"""

import json
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .dg import (build_ginzburg_functor, build_pi2, build_relative_ginzburg,
                 check_d_squared, jacobian_quotient)
from .errors import (DocumentError, IQPError, NotMutableError, ReductionError,
                     TruncationError)
from .io import (decode_document, encode_document, status_payload,
                 validation_payload)
from .mutation import IQP, mutate_with_trace
from .quiver import check_mutable, ice_quiver_isomorphic
from .quotient import corner_dims
from .series import Potential

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".map": "application/json; charset=utf-8",
}


def _series_json(series):
    out = []
    for p, c in series.items():
        entry = {"coeff": str(c)}
        if p.arrows:
            entry["path"] = list(p.arrows)
        else:
            entry["at"] = p.at
        out.append(entry)
    return out


def _trace_json(trace):
    return {
        "removed_2cycles": [list(pair) for pair in trace.removed_2cycles],
        "frozen_replacements": [list(pair) for pair in trace.frozen_replacements],
        "substitutions": [
            {"arrow": aid, "value": _series_json(series)}
            for sub in trace.substitutions
            for aid, series in sorted(sub.assignment.items())
        ],
    }


def _retruncated(iqp, n):
    if n == iqp.truncation:
        return iqp
    return IQP(iqp.ice_quiver,
               Potential(iqp.ice_quiver.quiver, iqp.potential.terms, n))


def _decode_field(payload, key):
    if key not in payload:
        raise DocumentError(f"request is missing the {key!r} field")
    return decode_document(payload[key])


def handle_mutate(payload):
    iqp = _decode_field(payload, "iqp")
    vertex = payload.get("vertex")
    if not isinstance(vertex, str):
        raise DocumentError("request needs a 'vertex' string")
    status = check_mutable(iqp.ice_quiver, vertex)
    result, trace = mutate_with_trace(iqp, vertex)
    return {
        "iqp": encode_document(result),
        "mutability": status_payload(status),
        "trace": _trace_json(trace),
    }


def handle_invariants(payload):
    iqp = _decode_field(payload, "iqp")
    n = payload.get("N", iqp.truncation)
    if not isinstance(n, int) or isinstance(n, bool):
        raise DocumentError("'N' must be an integer")
    iqp = _retruncated(iqp, n)
    quotient = jacobian_quotient(iqp, n)
    boundary = corner_dims(quotient, iqp.ice_quiver.frozen_vertices)
    d2_ok = (check_d_squared(build_relative_ginzburg(iqp, n)).ok
             and check_d_squared(build_pi2(iqp.ice_quiver, n)).ok)
    if d2_ok:
        try:
            build_ginzburg_functor(iqp, n)
        except IQPError:
            d2_ok = False
    return {
        "jacobian_dims": quotient.dims,
        "boundary_dims": boundary,
        "d2_ok": d2_ok,
    }


def handle_iso(payload):
    a = _decode_field(payload, "a").ice_quiver
    b = _decode_field(payload, "b").ice_quiver
    iso = ice_quiver_isomorphic(a, b)
    out = {"isomorphic": iso is not None}
    if iso is not None:
        out["vertex_map"] = dict(sorted(iso.vertex_map.items()))
        out["arrow_map"] = dict(sorted(iso.arrow_map.items()))
    return out


def handle_validate(payload):
    return validation_payload(_decode_field(payload, "iqp").ice_quiver)


_POST_ROUTES = {
    "/mutate": handle_mutate,
    "/invariants": handle_invariants,
    "/iso": handle_iso,
    "/validate": handle_validate,
}


class Handler(BaseHTTPRequestHandler):
    static_dir = None
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _send(self, code, payload):
        body = (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path == "/health":
            self._send(200, {"status": "ok"})
            return
        if self.static_dir is not None:
            self._send_static()
            return
        self._send(404, {"error": "not found"})

    def _send_static(self):
        relative = self.path.lstrip("/") or "index.html"
        root = os.path.realpath(self.static_dir)
        full = os.path.realpath(os.path.join(root, relative))
        if full != root and not full.startswith(root + os.sep):
            self._send(404, {"error": "not found"})
            return
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            self._send(404, {"error": "not found"})
            return
        with open(full, "rb") as fh:
            body = fh.read()
        self.send_response(200)
        suffix = os.path.splitext(full)[1]
        self.send_header("Content-Type",
                         _CONTENT_TYPES.get(suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        handler = _POST_ROUTES.get(self.path)
        if handler is None:
            self._send(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            payload = json.loads(raw.decode("utf-8"))
            if not isinstance(payload, dict):
                raise DocumentError("request body must be a JSON object")
            self._send(200, handler(payload))
        except json.JSONDecodeError as e:
            self._send(400, {"error": f"not valid JSON: {e}"})
        except DocumentError as e:
            self._send(400, {"error": str(e)})
        except NotMutableError as e:
            self._send(422, {"error": str(e), "vertex": e.vertex,
                             "mutability": status_payload(e.status)})
        except (ReductionError, TruncationError) as e:
            self._send(422, {"error": str(e), "kind": type(e).__name__})
        except IQPError as e:
            self._send(400, {"error": str(e)})


def make_server(port=0, static_dir=None):
    """A ready ThreadingHTTPServer (port 0 picks an ephemeral port)."""
    handler = type("BoundHandler", (Handler,), {"static_dir": static_dir})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(port=8175, static_dir=None):
    server = make_server(port, static_dir)
    host, actual_port = server.server_address[:2]
    print(f"serving on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    finally:
        server.server_close()
