"""Set descriptions on R^d with exact module coordinates.

Supported classes: half-open interval unions (d=1), simple polygons (d=2),
parallelepipeds, zonotopes, cylinders over a lower-dimensional base, and
finite disjoint unions.  Every class carries enough exact data to compute its
measure as an element of Q + Q*alpha_1 + ... + Q*alpha_d, and a numeric
membership test used by the torus multiplicity function

    chi_S(x) = #{k in Z^d : x + k in S}.

Half-open conventions are used throughout ([a, b), coefficients t_k in [0,1))
so that translated tiles partition exactly; multiplicity at boundary points is
resolved by those conventions and callers doing measure-theoretic work must
sample away from boundaries.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .context import AlphaContext
from .modarith import ModuleVector, ScalarModule, _as_frac

__all__ = [
    "IntervalUnion1D", "Polygon2D", "Parallelepiped", "Zonotope",
    "Cylinder", "DisjointUnion", "multiplicity", "volume_symbolic",
    "is_simple", "contains_point", "bounding_box", "cross_module",
    "det_module", "boundary_distance",
]


class UnsupportedSetError(TypeError):
    pass


# ---------------------------------------------------------------------------
# exact linear algebra helpers on module data


def cross_module(u: ModuleVector, v: ModuleVector) -> ScalarModule:
    """2D cross product u x v of module vectors; alpha x alpha cancels, so the
    result stays in the scalar module."""
    if u.d != 2 or v.d != 2:
        raise ValueError("cross_module requires d=2")
    ru, (u1, u2) = u.r, u.m
    rv, (v1, v2) = v.r, v.m
    c0 = u1 * v2 - u2 * v1
    ca1 = ru * v2 - rv * u2
    ca2 = rv * u1 - ru * v1
    return ScalarModule(c0, (ca1, ca2))


def _frac_det(rows) -> Fraction:
    """Exact determinant of a small square Fraction matrix (Laplace)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _frac_det(minor)
        total += term if j % 2 == 0 else -term
    return total


def det_module(vectors) -> ScalarModule:
    """det(v_1, ..., v_d) for module vectors, exactly.

    Expanding multilinearly in the alpha-parts, any term with two alpha
    columns has proportional columns and vanishes, so the determinant is
    det(m-part) + sum_k r_k * det(m-part with alpha at column k), an element
    of the scalar module.
    """
    d = len(vectors)
    for v in vectors:
        if v.d != d:
            raise ValueError("need d vectors of dimension d")
    rows = [[vectors[k].m[i] for k in range(d)] for i in range(d)]
    c0 = _frac_det(rows)
    c = []
    for i in range(d):
        # coefficient of alpha_i: sum_k r_k * det(m with e_i at column k)
        coef = Fraction(0)
        for k in range(d):
            if vectors[k].r == 0:
                continue
            modrows = [
                [Fraction(1) if (kk == k and ii == i) else
                 (Fraction(0) if kk == k else vectors[kk].m[ii])
                 for kk in range(d)]
                for ii in range(d)
            ]
            coef += vectors[k].r * _frac_det(modrows)
        c.append(coef)
    return ScalarModule(c0, tuple(c))


# ---------------------------------------------------------------------------
# set description types


@dataclass(frozen=True)
class IntervalUnion1D:
    """Union of half-open intervals [a, b) with module endpoints, d=1."""

    intervals: tuple  # tuple of (ScalarModule, ScalarModule)
    certificate: object = field(default=None, compare=False)

    @staticmethod
    def make(intervals, certificate=None) -> "IntervalUnion1D":
        return IntervalUnion1D(tuple((a, b) for a, b in intervals), certificate)

    def validate(self, ctx: AlphaContext) -> None:
        ends = []
        for a, b in self.intervals:
            if (b - a).sign(ctx) <= 0:
                raise ValueError("interval with nonpositive length")
            ends.append((a.evaluate_float(ctx), b.evaluate_float(ctx)))
        for (a1, b1), (a2, b2) in zip(ends, ends[1:]):
            if a2 < b1:
                raise ValueError("intervals must be sorted and disjoint")

    def translated(self, t: ScalarModule) -> "IntervalUnion1D":
        return IntervalUnion1D(tuple((a + t, b + t) for a, b in self.intervals),
                               self.certificate)


@dataclass(frozen=True)
class Polygon2D:
    """Simple polygon, counterclockwise, module-coordinate vertices, d=2."""

    vertices: tuple  # tuple of ModuleVector
    certificate: object = field(default=None, compare=False)

    @staticmethod
    def make(vertices, certificate=None) -> "Polygon2D":
        return Polygon2D(tuple(vertices), certificate)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def validate(self, ctx: AlphaContext) -> None:
        if self.n < 3:
            raise ValueError("polygon needs >= 3 vertices")
        area2 = ScalarModule.constant(0, 2)
        vs = self.vertices
        for i in range(self.n):
            area2 = area2 + cross_module(vs[i], vs[(i + 1) % self.n])
        if area2.sign(ctx) <= 0:
            raise ValueError("polygon must be counterclockwise with positive area")
        for i in range(self.n):
            a = vs[(i + 1) % self.n] - vs[i]
            b = vs[(i + 2) % self.n] - vs[(i + 1) % self.n]
            if cross_module(a, b).is_zero():
                raise ValueError("three consecutive collinear vertices")
        pts = [np.array(v.evaluate_float(ctx)) for v in vs]
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if j in (i, (i + 1) % self.n) or (j + 1) % self.n == i:
                    continue
                if _segments_cross(pts[i], pts[(i + 1) % self.n],
                                   pts[j], pts[(j + 1) % self.n]):
                    raise ValueError("polygon is self-intersecting")

    def translated(self, t: ModuleVector) -> "Polygon2D":
        return Polygon2D(tuple(v + t for v in self.vertices), self.certificate)

    def is_convex(self, ctx: AlphaContext) -> bool:
        vs = self.vertices
        for i in range(self.n):
            a = vs[(i + 1) % self.n] - vs[i]
            b = vs[(i + 2) % self.n] - vs[(i + 1) % self.n]
            if cross_module(a, b).sign(ctx) < 0:
                return False
        return True


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


@dataclass(frozen=True)
class Parallelepiped:
    """base + {sum t_k v_k : t_k in [0,1)} with module base and generators."""

    base: ModuleVector
    gens: tuple  # tuple of ModuleVector, length d
    certificate: object = field(default=None, compare=False)

    @staticmethod
    def make(base, gens, certificate=None) -> "Parallelepiped":
        return Parallelepiped(base, tuple(gens), certificate)

    @property
    def d(self) -> int:
        return self.base.d

    def validate(self, ctx: AlphaContext) -> None:
        if len(self.gens) != self.d:
            raise ValueError("need d generators")
        det = det_module(self.gens)
        if det.is_zero():
            raise ValueError("degenerate parallelepiped (zero symbolic volume)")
        if abs(det.evaluate_float(ctx)) <= 1e-12:
            raise ValueError("numerically degenerate generators")

    def translated(self, t: ModuleVector) -> "Parallelepiped":
        return Parallelepiped(self.base + t, self.gens, self.certificate)

    def vertex_list(self):
        out = []
        for sub in itertools.product((0, 1), repeat=len(self.gens)):
            v = self.base
            for s, g in zip(sub, self.gens):
                if s:
                    v = v + g
            out.append(v)
        return out

    def as_polygon(self, ctx: AlphaContext) -> Polygon2D:
        if self.d != 2:
            raise UnsupportedSetError("as_polygon requires d=2")
        b, (u, v) = self.base, self.gens
        if cross_module(u, v).sign(ctx) < 0:
            u, v = v, u
        return Polygon2D((b, b + u, b + u + v, b + v), self.certificate)


@dataclass(frozen=True)
class Zonotope:
    """base + {sum t_j g_j : t_j in [0,1)} with n >= d generators."""

    base: ModuleVector
    gens: tuple
    certificate: object = field(default=None, compare=False)

    @staticmethod
    def make(base, gens, certificate=None) -> "Zonotope":
        return Zonotope(base, tuple(gens), certificate)

    @property
    def d(self) -> int:
        return self.base.d

    def validate(self, ctx: AlphaContext) -> None:
        if len(self.gens) < self.d:
            raise ValueError("zonotope needs at least d generators")
        mat = np.array([g.evaluate_float(ctx) for g in self.gens], dtype=float)
        if np.linalg.matrix_rank(mat, tol=1e-9) < self.d:
            raise ValueError("generators do not span R^d")

    def vertex_list(self):
        out = []
        for sub in itertools.product((0, 1), repeat=len(self.gens)):
            v = self.base
            for s, g in zip(sub, self.gens):
                if s:
                    v = v + g
            out.append(v)
        return out


@dataclass(frozen=True)
class Cylinder:
    """{(x, 0) + t*v : x in sigma, 0 <= t < 1} + offset, v_d > 0.

    ``sigma`` is a set description in dimension d-1 whose module coordinates
    refer to the derived rotation vector (v_1/v_d, ..., v_{d-1}/v_d); that
    derived context is stored alongside.  ``offset`` absorbs the
    normalization S(sigma, -v) = S(sigma, v) - v.
    """

    sigma: object
    v: ModuleVector
    sigma_ctx: AlphaContext
    offset: ModuleVector = None
    certificate: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.offset is None:
            object.__setattr__(self, "offset", ModuleVector.zero(self.v.d))

    @property
    def d(self) -> int:
        return self.v.d


@dataclass(frozen=True)
class DisjointUnion:
    parts: tuple
    certificate: object = field(default=None, compare=False)

    @staticmethod
    def make(parts, certificate=None) -> "DisjointUnion":
        return DisjointUnion(tuple(parts), certificate)


SetDescription = (IntervalUnion1D, Polygon2D, Parallelepiped, Zonotope,
                  Cylinder, DisjointUnion)


# ---------------------------------------------------------------------------
# numeric membership / bounding boxes


def bounding_box(S, ctx: AlphaContext):
    """Numeric axis-aligned bounding box (lo, hi) as float arrays."""
    if isinstance(S, IntervalUnion1D):
        a = min(iv[0].evaluate_float(ctx) for iv in S.intervals)
        b = max(iv[1].evaluate_float(ctx) for iv in S.intervals)
        return np.array([a]), np.array([b])
    if isinstance(S, Polygon2D):
        pts = np.array([v.evaluate_float(ctx) for v in S.vertices])
        return pts.min(axis=0), pts.max(axis=0)
    if isinstance(S, (Parallelepiped, Zonotope)):
        base = np.array(S.base.evaluate_float(ctx))
        lo = base.copy()
        hi = base.copy()
        for g in S.gens:
            gv = np.array(g.evaluate_float(ctx))
            lo += np.minimum(gv, 0.0)
            hi += np.maximum(gv, 0.0)
        return lo, hi
    if isinstance(S, Cylinder):
        slo, shi = bounding_box(S.sigma, S.sigma_ctx)
        vv = np.array(S.v.evaluate_float(ctx))
        off = np.array(S.offset.evaluate_float(ctx))
        lo = np.concatenate([slo, [0.0]]) + np.minimum(vv, 0.0) + off
        hi = np.concatenate([shi, [0.0]]) + np.maximum(vv, 0.0) + off
        return lo, hi
    if isinstance(S, DisjointUnion):
        boxes = [bounding_box(p, ctx) for p in S.parts]
        return (np.min([b[0] for b in boxes], axis=0),
                np.max([b[1] for b in boxes], axis=0))
    raise UnsupportedSetError(f"unsupported set type {type(S).__name__}")


def contains_point(S, y, ctx: AlphaContext) -> bool:
    """Indicator of S at the numeric point y in R^d (half-open conventions)."""
    y = np.asarray(y, dtype=float)
    if isinstance(S, IntervalUnion1D):
        for a, b in S.intervals:
            if a.evaluate_float(ctx) <= y[0] < b.evaluate_float(ctx):
                return True
        return False
    if isinstance(S, Polygon2D):
        return _polygon_contains(S, y, ctx)
    if isinstance(S, Parallelepiped):
        G = np.array([g.evaluate_float(ctx) for g in S.gens], dtype=float).T
        t = np.linalg.solve(G, y - np.array(S.base.evaluate_float(ctx)))
        return bool(np.all(t >= 0.0) and np.all(t < 1.0))
    if isinstance(S, Zonotope):
        raise UnsupportedSetError(
            "zonotope membership: tile it first (constructions.zonotope_tiling)")
    if isinstance(S, Cylinder):
        yy = y - np.array(S.offset.evaluate_float(ctx))
        vv = np.array(S.v.evaluate_float(ctx))
        t = yy[-1] / vv[-1]
        if not (0.0 <= t < 1.0):
            return False
        x = yy[:-1] - t * vv[:-1]
        return contains_point(S.sigma, x, S.sigma_ctx)
    if isinstance(S, DisjointUnion):
        return any(contains_point(p, y, ctx) for p in S.parts)
    raise UnsupportedSetError(f"unsupported set type {type(S).__name__}")


def _polygon_contains(S: Polygon2D, y, ctx) -> bool:
    # crossing-number test with a half-open convention: points on boundary
    # are resolved by nudging the ray start; callers sample off the boundary.
    pts = np.array([v.evaluate_float(ctx) for v in S.vertices])
    x0, y0 = float(y[0]), float(y[1])
    inside = False
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        if (y1 <= y0) != (y2 <= y0):
            xs = x1 + (y0 - y1) * (x2 - x1) / (y2 - y1)
            if x0 < xs:
                inside = not inside
    return inside


def multiplicity(S, x, ctx: AlphaContext) -> int:
    """chi_S(x) = #{k in Z^d : x + k in S} by enumerating integer translates
    within the bounding box of S (widened by one)."""
    x = np.asarray(x, dtype=float)
    lo, hi = bounding_box(S, ctx)
    ranges = [range(math.floor(l - xi) - 1, math.ceil(h - xi) + 2)
              for l, h, xi in zip(lo, hi, x)]
    count = 0
    for k in itertools.product(*ranges):
        if contains_point(S, x + np.array(k, dtype=float), ctx):
            count += 1
    return count


# ---------------------------------------------------------------------------
# symbolic volume


def volume_symbolic(S, ctx: AlphaContext) -> ScalarModule:
    """Exact measure of S as an element of Q + Q*alpha_1 + ... + Q*alpha_d."""
    if isinstance(S, IntervalUnion1D):
        tot = ScalarModule.constant(0, ctx.d)
        for a, b in S.intervals:
            tot = tot + (b - a)
        return tot
    if isinstance(S, Polygon2D):
        vs = S.vertices
        area2 = ScalarModule.constant(0, 2)
        for i in range(len(vs)):
            area2 = area2 + cross_module(vs[i], vs[(i + 1) % len(vs)])
        return area2.scale(Fraction(1, 2))
    if isinstance(S, Parallelepiped):
        det = det_module(S.gens)
        s = det.sign(ctx)
        if s == 0:
            raise ValueError("degenerate parallelepiped")
        return det if s > 0 else -det
    if isinstance(S, Zonotope):
        d = S.d
        tot = ScalarModule.constant(0, d)
        for idx in itertools.combinations(range(len(S.gens)), d):
            det = det_module([S.gens[i] for i in idx])
            sgn = det.sign(ctx) if not det.is_zero() else 0
            if sgn > 0:
                tot = tot + det
            elif sgn < 0:
                tot = tot - det
        return tot
    if isinstance(S, Cylinder):
        vol_sigma = volume_symbolic(S.sigma, S.sigma_ctx)
        # mes(S) = mes(sigma) * v_d; alpha'_i = v_i / v_d collapses exactly:
        # (c0' + sum c'_i v_i/v_d) * v_d = c0' * v_d + sum c'_i * v_i
        out = S.v.coord(S.d - 1).scale(vol_sigma.c0)
        for i, ci in enumerate(vol_sigma.c):
            if ci:
                out = out + S.v.coord(i).scale(ci)
        if out.sign(ctx) < 0:
            out = -out
        return out
    if isinstance(S, DisjointUnion):
        tot = ScalarModule.constant(0, ctx.d)
        for p in S.parts:
            tot = tot + volume_symbolic(p, ctx)
        return tot
    raise UnsupportedSetError(f"unsupported set type {type(S).__name__}")


# ---------------------------------------------------------------------------
# simplicity


def is_simple(S, ctx: AlphaContext) -> bool:
    """Exact test of (S - S) ∩ Z^d = {0} (i.e. chi_S is {0,1}-valued)."""
    if isinstance(S, IntervalUnion1D):
        return _interval_union_simple(S, ctx)
    if isinstance(S, Parallelepiped):
        return _parallelepiped_simple(S, ctx)
    raise UnsupportedSetError("is_simple supports IntervalUnion1D and Parallelepiped")


def _interval_union_simple(S: IntervalUnion1D, ctx) -> bool:
    one = ScalarModule.constant(1, ctx.d)
    total = volume_symbolic(S, ctx)
    if (one - total).sign(ctx) < 0:
        return False
    for a1, b1 in S.intervals:
        for a2, b2 in S.intervals:
            lo = math.floor(a1.evaluate_float(ctx) - b2.evaluate_float(ctx)) - 1
            hi = math.ceil(b1.evaluate_float(ctx) - a2.evaluate_float(ctx)) + 1
            for z in range(lo, hi + 1):
                # [a1,b1) ∩ [a2+z, b2+z) nonempty  <=>  a1 < b2+z and a2+z < b1
                if z == 0 and (a1, b1) == (a2, b2):
                    continue
                c1 = (b2.shift_int(z) - a1).sign(ctx)
                c2 = (b1 - a2.shift_int(z)).sign(ctx)
                if c1 > 0 and c2 > 0:
                    return False
    return True


def _parallelepiped_simple(P: Parallelepiped, ctx) -> bool:
    d = P.d
    det = det_module(P.gens)
    sd = det.sign(ctx)
    absdet = det if sd > 0 else -det
    lo, hi = bounding_box(P, ctx)
    base = np.array(P.base.evaluate_float(ctx))
    lo = lo - base
    hi = hi - base
    ranges = [range(math.floor(l - h) - 1, math.ceil(h - l) + 2)
              for l, h in zip(lo, hi)]
    for z in itertools.product(*ranges):
        if all(zi == 0 for zi in z):
            continue
        zvec = ModuleVector.make(0, [Fraction(zi) for zi in z])
        inside = True
        for k in range(d):
            cols = list(P.gens)
            cols[k] = zvec
            dk = det_module(cols)
            sk = dk.sign(ctx)
            absdk = dk if sk >= 0 else -dk
            # z in P - P requires |t_k| = |det_k| / |det| < 1 strictly
            if (absdet - absdk).sign(ctx) <= 0:
                inside = False
                break
        if inside:
            return False
    return True


# ---------------------------------------------------------------------------
# boundary hazard estimation (sampling hygiene)


def boundary_distance(S, x, ctx: AlphaContext) -> float:
    """Approximate distance from x to the boundary of the projection of S,
    over integer translates in the bounding box.  Used to resample points
    that are too close to a boundary for stable multiplicity evaluation."""
    x = np.asarray(x, dtype=float)
    lo, hi = bounding_box(S, ctx)
    ranges = [range(math.floor(l - xi) - 1, math.ceil(h - xi) + 2)
              for l, h, xi in zip(lo, hi, x)]
    best = np.inf
    for k in itertools.product(*ranges):
        y = x + np.array(k, dtype=float)
        best = min(best, _boundary_distance_one(S, y, ctx))
    return best


def _boundary_distance_one(S, y, ctx) -> float:
    if isinstance(S, IntervalUnion1D):
        ds = []
        for a, b in S.intervals:
            ds.append(abs(y[0] - a.evaluate_float(ctx)))
            ds.append(abs(y[0] - b.evaluate_float(ctx)))
        return min(ds)
    if isinstance(S, Polygon2D):
        pts = np.array([v.evaluate_float(ctx) for v in S.vertices])
        return min(_point_segment_distance(y, pts[i], pts[(i + 1) % len(pts)])
                   for i in range(len(pts)))
    if isinstance(S, Parallelepiped):
        G = np.array([g.evaluate_float(ctx) for g in S.gens], dtype=float).T
        t = np.linalg.solve(G, y - np.array(S.base.evaluate_float(ctx)))
        # distance in coefficient space scaled by the smallest singular value
        dt = np.min(np.minimum(np.abs(t), np.abs(1.0 - t)))
        smin = np.linalg.svd(G, compute_uv=False)[-1]
        return float(dt * smin)
    if isinstance(S, Cylinder):
        yy = y - np.array(S.offset.evaluate_float(ctx))
        vv = np.array(S.v.evaluate_float(ctx))
        t = yy[-1] / vv[-1]
        d1 = min(abs(t), abs(1.0 - t)) * abs(vv[-1])
        x = yy[:-1] - t * vv[:-1]
        d2 = _boundary_distance_one(S.sigma, x, S.sigma_ctx)
        return min(d1, d2)
    if isinstance(S, DisjointUnion):
        return min(_boundary_distance_one(p, y, ctx) for p in S.parts)
    raise UnsupportedSetError(f"unsupported set type {type(S).__name__}")


def _point_segment_distance(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = float((p - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(p - (a + t * ab)))
