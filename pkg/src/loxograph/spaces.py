"""Lazy locally finite graphs, certified metric balls, l2 products and the
four-point hyperbolicity estimator.

Vertices are opaque canonical byte strings (``VertexKey``): two keys are
byte-equal iff they denote the same vertex, and keys give a total order used
for deterministic tie-breaking.  A space is a basepoint plus a neighbor
oracle returning a finite ordered list of keys; everything else (balls,
distances, delta estimates) is derived and certified from BFS data.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    BadParameter,
    NotInBall,
    OracleAsymmetry,
    TooLarge,
    Uncertified,
    ValenceExceeded,
)

VertexKey = bytes


# -- key codecs ------------------------------------------------------------

def int_key(n: int, prefix: bytes = b"L") -> VertexKey:
    """Canonical key for an integer-indexed vertex (e.g. the simplicial line)."""
    return prefix + struct.pack(">q", n)


def key_int(key: VertexKey) -> int:
    return struct.unpack(">q", key[-8:])[0]


def tuple_key(keys: Sequence[VertexKey]) -> VertexKey:
    """Length-prefixed concatenation; canonical key of a product vertex."""
    return b"P" + b"".join(struct.pack(">I", len(k)) + k for k in keys)


def key_tuple(key: VertexKey) -> tuple[VertexKey, ...]:
    if not key.startswith(b"P"):
        raise BadParameter("not a product key")
    out, pos = [], 1
    while pos < len(key):
        (n,) = struct.unpack(">I", key[pos:pos + 4])
        pos += 4
        out.append(key[pos:pos + n])
        pos += n
    return tuple(out)


# -- spaces ------------------------------------------------------------------

class LazySpace:
    """A lazily generated locally finite graph.

    ``neighbors`` must return, for every reached vertex, a finite ordered
    list of keys; the relation must be symmetric on any explored ball.
    ``exact_distance``, when supplied, is a declared-exact metric shortcut
    (tree meet formulas, |a-b| on the line, ...); it is cross-checked
    against BFS in the test suite and used to certify distances cheaply.
    """

    def __init__(self, name, basepoint, neighbors,
                 valence_bound=None, quasitree_claim=False, line_factor=False,
                 exact_distance=None, describe=None):
        self.name = name
        self.basepoint = basepoint
        self._oracle = neighbors
        self.valence_bound = valence_bound
        self.quasitree_claim = quasitree_claim
        self.line_factor = line_factor
        self.exact_distance = exact_distance
        self.describe = describe or (lambda k: k.hex())
        self._cache: dict[VertexKey, tuple[VertexKey, ...]] = {}

    def neighbors(self, v: VertexKey) -> tuple[VertexKey, ...]:
        got = self._cache.get(v)
        if got is None:
            got = tuple(self._oracle(v))
            self._cache[v] = got
        return got

    def __repr__(self):
        return f"LazySpace({self.name!r})"


class ProductSpace:
    """Finite ordered product of lazy spaces with the l2 metric.

    Points are tuples of factor keys.  All metric comparisons happen on
    exact squared integers; no floating point enters any decision.
    """

    def __init__(self, factors: Sequence[LazySpace], name: str = ""):
        self.factors = tuple(factors)
        if not self.factors:
            raise BadParameter("empty product")
        self.name = name or " x ".join(f.name for f in self.factors)
        self.basepoint = tuple(f.basepoint for f in self.factors)

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return f"ProductSpace({self.name!r})"


def product_skeleton(product: ProductSpace) -> LazySpace:
    """1-skeleton of the cube complex on a product (l1 exploration).

    Vertices are packed tuple keys; moving one coordinate to a factor
    neighbor is an edge.  The path metric of this graph is the l1
    combination of the factor path metrics.
    """
    factors = product.factors

    def nbrs(key):
        parts = key_tuple(key)
        out = []
        for i, f in enumerate(factors):
            for w in f.neighbors(parts[i]):
                out.append(tuple_key(parts[:i] + (w,) + parts[i + 1:]))
        return out

    exact = None
    if all(f.exact_distance is not None for f in factors):
        def exact(a, b):
            pa, pb = key_tuple(a), key_tuple(b)
            return sum(f.exact_distance(x, y)
                       for f, x, y in zip(factors, pa, pb))

    vb = None
    if all(f.valence_bound is not None for f in factors):
        vb = sum(f.valence_bound for f in factors)
    return LazySpace(
        name=f"skeleton({product.name})",
        basepoint=tuple_key(product.basepoint),
        neighbors=nbrs,
        valence_bound=vb,
        exact_distance=exact,
        describe=lambda k: "(" + ", ".join(
            f.describe(x) for f, x in zip(factors, key_tuple(k))) + ")",
    )


# -- balls -------------------------------------------------------------------

class Ball:
    """All vertices within graph distance R of a center, with exact BFS
    distances from the center and the induced adjacency.

    A pair distance is CERTIFIED only when min(d(c,u), d(c,v)) + d(u,v) <= R,
    which forces every competing path to stay inside the ball.
    """

    def __init__(self, space, center, radius, order, dist, adj):
        self.space = space
        self.center = center
        self.radius = radius
        self.order = order            # BFS discovery order, deterministic
        self.dist = dist              # exact distance from center
        self.adj = adj                # induced adjacency, oracle order
        self._bfs: dict[VertexKey, dict[VertexKey, int]] = {}

    @property
    def members(self):
        return self.dist.keys()

    def __len__(self):
        return len(self.order)

    def __contains__(self, v):
        return v in self.dist

    def dist_from_center(self, v: VertexKey) -> int:
        if v not in self.dist:
            raise NotInBall(f"vertex {v.hex()} not in ball")
        return self.dist[v]

    def edges(self):
        """Unordered member edges, each reported once (key order)."""
        for u, vs in self.adj.items():
            for v in vs:
                if u < v:
                    yield (u, v)

    def _bfs_from(self, u):
        got = self._bfs.get(u)
        if got is None:
            got = {u: 0}
            frontier = [u]
            while frontier:
                nxt = []
                for x in frontier:
                    dx = got[x]
                    for y in self.adj[x]:
                        if y not in got:
                            got[y] = dx + 1
                            nxt.append(y)
                frontier = nxt
            self._bfs[u] = got
        return got

    def distance(self, u, v):
        """Induced-subgraph distance plus certification flag."""
        if u not in self.dist or v not in self.dist:
            raise NotInBall("endpoint outside ball")
        d = self._bfs_from(u).get(v)
        if d is None:
            raise Uncertified("ball not connected between endpoints")
        certified = min(self.dist[u], self.dist[v]) + d <= self.radius
        return d, certified

    def shrink(self, r: int) -> "Ball":
        if r > self.radius:
            raise BadParameter("can only shrink")
        keep = {v for v, d in self.dist.items() if d <= r}
        order = [v for v in self.order if v in keep]
        dist = {v: self.dist[v] for v in order}
        adj = {v: tuple(w for w in self.adj[v] if w in keep) for v in order}
        return Ball(self.space, self.center, r, order, dist, adj)


def grow_ball(space: LazySpace, center: VertexKey, radius: int) -> Ball:
    """BFS ball of the given radius; validates the oracle as it explores."""
    if radius < 0:
        raise BadParameter("radius must be >= 0")
    dist = {center: 0}
    order = [center]
    raw = {}
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        du = dist[u]
        nbrs = space.neighbors(u)
        seen = set()
        for v in nbrs:
            if v == u:
                raise OracleAsymmetry(f"self-loop at {space.describe(u)}")
            if v in seen:
                raise OracleAsymmetry(f"duplicate neighbor at {space.describe(u)}")
            seen.add(v)
        if space.valence_bound is not None and len(nbrs) > space.valence_bound:
            raise ValenceExceeded(
                f"{space.describe(u)} has {len(nbrs)} neighbors; "
                f"bound {space.valence_bound}")
        raw[u] = nbrs
        if du < radius:
            for v in nbrs:
                if v not in dist:
                    dist[v] = du + 1
                    order.append(v)
    adj = {u: tuple(v for v in raw[u] if v in dist) for u in order}
    adjset = {u: frozenset(vs) for u, vs in adj.items()}
    for u in order:
        for v in adj[u]:
            if u not in adjset[v]:
                raise OracleAsymmetry(
                    f"edge {space.describe(u)} -> {space.describe(v)} not symmetric")
    return Ball(space, center, radius, order, dist, adj)


def certified_distance(ball: Ball, u: VertexKey, v: VertexKey):
    """Distance in the induced subgraph plus certification flag."""
    return ball.distance(u, v)


# -- exact distances on lazy spaces -----------------------------------------

def space_distance(space: LazySpace, u: VertexKey, v: VertexKey,
                   max_radius: int = 512) -> int:
    """Exact graph distance.

    Uses the space's declared-exact metric when present, otherwise a
    bidirectional BFS whose answer is exact on termination: once the two
    fully-expanded radii satisfy r_u + r_v >= best candidate, any shorter
    path would have produced a smaller candidate already.
    """
    if u == v:
        return 0
    if space.exact_distance is not None:
        return space.exact_distance(u, v)
    du, dv = {u: 0}, {v: 0}
    fu, fv = [u], [v]
    ru = rv = 0
    best = None
    while True:
        if best is not None and ru + rv >= best:
            return best
        if ru + rv >= max_radius:
            raise Uncertified(
                f"distance not settled within radius {max_radius}")
        if len(du) <= len(dv):
            mine, other, front, r = du, dv, fu, ru
        else:
            mine, other, front, r = dv, du, fv, rv
        nxt = []
        for x in front:
            for y in space.neighbors(x):
                if y not in mine:
                    mine[y] = mine[x] + 1
                    nxt.append(y)
                    if y in other:
                        cand = mine[y] + other[y]
                        if best is None or cand < best:
                            best = cand
        if not nxt and best is None:
            raise Uncertified("components separated (disconnected graph?)")
        if mine is du:
            fu, ru = nxt, ru + 1
        else:
            fv, rv = nxt, rv + 1


# -- products -----------------------------------------------------------------

def product_distance(product: ProductSpace, x, y, balls=None) -> int:
    """Exact squared l2 distance between two product points.

    With ``balls`` (one per factor) every coordinate pair must be certified
    in its ball; otherwise factor distances come from ``space_distance``.
    """
    if len(x) != len(product.factors) or len(y) != len(product.factors):
        raise BadParameter("point arity does not match product")
    total = 0
    for i, f in enumerate(product.factors):
        if balls is not None:
            d, ok = balls[i].distance(x[i], y[i])
            if not ok:
                raise Uncertified(f"factor {i} distance uncertified")
        else:
            d = space_distance(f, x[i], y[i])
        total += d * d
    return total


# -- four point delta ---------------------------------------------------------

@dataclass(frozen=True)
class DeltaEstimate:
    radius: int
    delta: Fraction                    # half-integer, >= 0
    witness: tuple                     # 4 vertex keys attaining the max
    exhaustive: bool                   # False => lower bound only (sampled)
    scanned: int


def four_point_defect(d, w, x, y, z) -> int:
    """Largest pair-sum minus second largest over the three matchings."""
    s = sorted((d(w, x) + d(y, z), d(w, y) + d(x, z), d(w, z) + d(x, y)))
    return s[2] - s[1]


def four_point_delta(ball: Ball, budget: int = 20_000, seed: int = 0,
                     sample: bool = True) -> DeltaEstimate:
    """Four-point hyperbolicity constant over the ball's members.

    Scans exhaustively while the number of 4-subsets stays within budget;
    beyond that it switches to deterministic seeded sampling and the result
    is a lower bound (``exhaustive=False``).  All pairwise distances are
    exact: the space's declared metric or bidirectional BFS, both certified.
    """
    keys = ball.order
    n = len(keys)
    if n < 4:
        return DeltaEstimate(ball.radius, Fraction(0), tuple(keys[:4]), True, 0)
    cap = 2 * ball.radius + 2
    D = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        D[i, i] = 0
    for i, j in combinations(range(n), 2):
        D[i, j] = D[j, i] = space_distance(ball.space, keys[i], keys[j],
                                           max_radius=cap)
    total = comb(n, 4)
    best = -1
    best_idx = (0, 1, 2, 3)
    if total <= budget:
        kk, ll = np.triu_indices(n, 1)
        for i in range(n - 3):
            for j in range(i + 1, n - 2):
                m = kk > j
                k, l = kk[m], ll[m]
                s1 = D[i, j] + D[k, l]
                s2 = D[i, k] + D[j, l]
                s3 = D[i, l] + D[j, k]
                s = np.stack((s1, s2, s3))
                top = s.max(axis=0)
                mid = s.sum(axis=0) - top - s.min(axis=0)
                defect = top - mid
                t = int(defect.argmax())
                if defect[t] > best:
                    best = int(defect[t])
                    best_idx = (i, j, int(k[t]), int(l[t]))
        scanned = total
        exhaustive = True
    else:
        if not sample:
            raise TooLarge(f"{total} four-tuples exceed budget {budget}")
        rng = np.random.default_rng(seed)
        draws = rng.integers(0, n, size=(budget, 4))
        ok = ((draws[:, 0] != draws[:, 1]) & (draws[:, 0] != draws[:, 2])
              & (draws[:, 0] != draws[:, 3]) & (draws[:, 1] != draws[:, 2])
              & (draws[:, 1] != draws[:, 3]) & (draws[:, 2] != draws[:, 3]))
        draws = draws[ok]
        a, b, c, e = draws[:, 0], draws[:, 1], draws[:, 2], draws[:, 3]
        s = np.stack((D[a, b] + D[c, e], D[a, c] + D[b, e], D[a, e] + D[b, c]))
        top = s.max(axis=0)
        mid = s.sum(axis=0) - top - s.min(axis=0)
        defect = top - mid
        t = int(defect.argmax())
        best = int(defect[t])
        best_idx = tuple(int(v) for v in draws[t])
        scanned = len(draws)
        exhaustive = False
    witness = tuple(keys[i] for i in best_idx)
    return DeltaEstimate(ball.radius, Fraction(max(best, 0), 2), witness,
                         exhaustive, scanned)


# -- ball dump format ---------------------------------------------------------

def ball_dump(ball: Ball) -> dict:
    """JSON-ready dump: hex keys plus index-pair edges."""
    index = {v: i for i, v in enumerate(ball.order)}
    edges = sorted([index[u], index[v]] if index[u] < index[v]
                   else [index[v], index[u]] for u, v in ball.edges())
    return {
        "space": ball.space.name,
        "center": ball.center.hex(),
        "radius": ball.radius,
        "vertices": [v.hex() for v in ball.order],
        "edges": edges,
    }


def space_from_dump(dump: dict) -> LazySpace:
    """Static space over a dumped ball; oracle is total on dumped vertices."""
    keys = [bytes.fromhex(h) for h in dump["vertices"]]
    adj = {k: [] for k in keys}
    for i, j in dump["edges"]:
        adj[keys[i]].append(keys[j])
        adj[keys[j]].append(keys[i])

    def nbrs(v):
        if v not in adj:
            from .errors import OutOfExploredRegion
            raise OutOfExploredRegion("vertex outside dumped region")
        return adj[v]

    return LazySpace(name=dump["space"] + ":static",
                     basepoint=bytes.fromhex(dump["center"]),
                     neighbors=nbrs)
