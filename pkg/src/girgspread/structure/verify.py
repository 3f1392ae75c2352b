"""Independent re-verification of paths and hierarchies.

Nothing here reuses the search code: distances, balls and bands are
recomputed from the graph and the parameters stored on the result.
"""
from ..errors import UsageError
from ..geometry import GeometryKind, dist, torus_coord_dist

_TOL = 1e-9


def _adjacent(graph, u, v):
    return int(v) in set(graph.neighbors(int(u)).tolist())


def _boi(w, p):
    v = min(1.0, w / p.n)
    if p.geometry is GeometryKind.EuclideanInf:
        return v ** (1.0 / p.d) / 2.0
    return (1.0 - (1.0 - v) ** (1.0 / p.d)) / 2.0


def _d(graph, u, v):
    return float(dist(graph.positions[u], graph.positions[v], graph.params.geometry))


def _in_band(x, lo):
    return lo * (1 - _TOL) <= x <= 2 * lo * (1 + _TOL)


_MACRO = {"direct": ("next",), "via-low-weight": ("low", "next"),
          "relay3hop": ("low", "mid", "next"), "mcd-alt": ("low", "next")}


def verify_path(graph, res):
    """Return ``(ok, problems)`` for a :class:`PathResult`."""
    p = graph.params
    W = graph.weights
    probs = []
    vs = [int(x) for x in res.vertices]
    if not vs:
        return False, ["empty path"]
    for a, b in zip(vs, vs[1:]):
        if not _adjacent(graph, a, b):
            probs.append(f"({a}, {b}) is not an edge")
    if len(res.steps) != len(vs) - 1:
        probs.append("step annotations do not match the vertex list")
        return False, probs
    for k, s in enumerate(res.steps):
        if (s.src, s.dst) != (vs[k], vs[k + 1]) or abs(s.weight - W[s.dst]) > 0:
            probs.append(f"step {k} annotation inconsistent with the graph")
    roles = _MACRO.get(res.mechanism)
    if roles is None:
        return False, probs + [f"unknown mechanism {res.mechanism}"]
    if (len(vs) - 1) % len(roles):
        probs.append("path length is not a whole number of macro-steps")
        return False, probs
    for m in range((len(vs) - 1) // len(roles)):
        base = m * len(roles)
        s = vs[base]
        w = W[s]
        hop = dict(zip(roles, vs[base + 1: base + 1 + len(roles)]))
        for k, role in enumerate(roles):
            if res.steps[base + k].role != role:
                probs.append(f"macro-step {m}: expected role {role}")
        nxt = hop["next"]
        if res.mechanism == "mcd-alt":
            j = 1 + m % 2
            jo = 3 - j
            q = hop["low"]
            if W[q] > res.cap:
                probs.append(f"macro-step {m}: low vertex {q} heavier than cap")
            if torus_coord_dist(graph.positions[q, j - 1], graph.positions[s, j - 1]) > res.scale * w / p.n * (1 + _TOL):
                probs.append(f"macro-step {m}: {q} outside the dimension-{j} plate of {s}")
            if torus_coord_dist(graph.positions[nxt, jo - 1], graph.positions[q, jo - 1]) > W[q] * W[nxt] / p.n * (1 + _TOL):
                probs.append(f"macro-step {m}: {nxt} not strong to {q} along dimension {jo}")
            if res.steps[base].plate_dim != j or res.steps[base + 1].plate_dim != jo:
                probs.append(f"macro-step {m}: plate dimensions do not alternate")
            if W[nxt] < w ** (1 + res.beta) * (1 - _TOL):
                probs.append(f"macro-step {m}: weight did not grow to w^(1+beta)")
            continue
        r0 = p.n ** (-1.0 / p.d) * w ** (((1 + res.beta) * (p.tau - 1) + res.eps) / p.d)
        dn = _d(graph, s, nxt)
        if not (r0 * (1 - _TOL) <= dn <= 2 * r0 * (1 + _TOL)):
            probs.append(f"macro-step {m}: {nxt} outside the annulus of {s}")
        if not _in_band(W[nxt], w ** (1 + res.beta)):
            probs.append(f"macro-step {m}: weight of {nxt} outside the target band")
        boi = _boi(w, p)
        if "low" in hop:
            q = hop["low"]
            if W[q] > res.cap or _d(graph, s, q) > boi * (1 + _TOL):
                probs.append(f"macro-step {m}: low vertex {q} violates cap or ball of influence")
        if "mid" in hop:
            x = w ** (p.tau - 2 + res.eps)
            mid = hop["mid"]
            if not _in_band(W[mid], x) or _d(graph, s, mid) > boi * (1 + _TOL):
                probs.append(f"macro-step {m}: relay {mid} violates band or ball of influence")
    reached = W[vs[-1]] >= res.target_weight
    if res.success != bool(reached):
        probs.append("success flag disagrees with the final weight")
    return not probs, probs


def verify_hierarchy(graph, h):
    """Return ``(ok, problems)`` checking H1, H2, H4 and the weight/distance bands."""
    p = graph.params
    W = graph.weights
    k = p.n ** (1.0 / p.d)
    probs = []
    root = h.root
    L0 = _d(graph, root.a, root.b) * k
    seen = {}

    def walk(x, level):
        L = _d(graph, x.a, x.b) * k
        if x.level != level:
            probs.append(f"node ({x.a}, {x.b}) has inconsistent level")
        if level >= 1 and h.scale <= 1 and L > L0 ** (h.gamma ** level) * (1 + _TOL):
            probs.append(f"H1 fails at level {level} for ({x.a}, {x.b})")
        if x.bridge is None:
            if x.failure is None and not (L <= h.stop_dist or level >= h.R_cap - 1):
                probs.append(f"gap ({x.a}, {x.b}) left open without a failure note")
            return
        ua, vb = x.bridge
        if not _adjacent(graph, ua, vb):
            probs.append(f"H2 fails: bridge ({ua}, {vb}) is not an edge")
        for y in (ua, vb):
            seen[y] = seen.get(y, 0) + 1
        rad = L ** h.gamma
        for anchor, y in ((x.a, ua), (x.b, vb)):
            dy = _d(graph, anchor, y) * k
            if not (rad / 2 * (1 - _TOL) <= dy <= h.scale * rad * (1 + _TOL)):
                probs.append(f"bridge endpoint {y} outside the ball around {anchor}")
        if h.mode == "weak":
            b1, b2 = h.w_h1, L ** (p.d * h.gamma / (p.tau - 1) - h.eps)
        else:
            b1, b2 = L ** (p.d * (1 - h.gamma / (p.tau - 1))), L ** (p.d * h.gamma / (p.tau - 1))
        straight = _in_band(W[ua], b1) and _in_band(W[vb], b2)
        swapped = _in_band(W[ua], b2) and _in_band(W[vb], b1)
        if not (straight or swapped):
            probs.append(f"bridge ({ua}, {vb}) weights outside the {h.mode} bands")
        if x.left is None or x.right is None:
            probs.append("internal node without two children")
            return
        if (x.left.a, x.left.b) != (x.a, ua) or (x.right.a, x.right.b) != (vb, x.b):
            probs.append(f"children of ({x.a}, {x.b}) do not follow the bridge")
        walk(x.left, level + 1)
        walk(x.right, level + 1)

    walk(root, 0)
    twice = [y for y, c in seen.items() if c > 1]
    if twice:
        probs.append(f"H4 fails: vertices {sorted(twice)} lie on several bridges")
    return not probs, probs


def alternating_check(graph, path, k):
    """True iff every consecutive pair of ``path`` has an endpoint of degree <= k."""
    deg = graph.degrees
    path = [int(x) for x in path]
    ok = True
    for a, b in zip(path, path[1:]):
        if not _adjacent(graph, a, b):
            raise UsageError(f"({a}, {b}) is not an edge")
        if min(deg[a], deg[b]) > k:
            ok = False
    return ok
