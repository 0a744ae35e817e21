"""Builders for the bounded-remainder set families, each returning a set
description tagged with a certificate naming the construction that guarantees
the bounded remainder property.

Families:
  * intervals [0, beta) with admissible length (d=1),
  * parallelepipeds spanned by vectors of Z*alpha + Z^d,
  * sheared parallelepipeds (lattice spans modified inside earlier spans),
  * parallelepipeds with prescribed admissible measure (simple when <= 1),
  * cylinders over a lower-dimensional bounded remainder base,
  * tilings of lattice-vertex zonotopes into lattice parallelepipeds.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .context import PRECISION_DPS, AlphaContext, context_from_values
from .lattices import biorthogonal_columns, complete_to_unimodular, primitive_part
from .modarith import (ModuleVector, ScalarModule, _as_frac,
                       admissible_measure, is_lattice_member)
from .sets import (Cylinder, IntervalUnion1D, Parallelepiped, Zonotope,
                   det_module, is_simple, volume_symbolic)


class KestenObstruction(ValueError):
    """The requested measure is not of the form n0 + n1 a1 + ... + nd ad."""


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    family: str
    params: dict = field(default_factory=dict)

    def describe(self) -> str:
        if not self.params:
            return self.family
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}({inner})"


def hecke_interval(beta: ScalarModule, ctx: AlphaContext) -> IntervalUnion1D:
    """The interval [0, beta) for beta in Z*alpha + Z, beta > 0 (d=1)."""
    if ctx.d != 1:
        raise ConstructionError("hecke_interval requires a d=1 context")
    if not admissible_measure(beta):
        raise KestenObstruction(
            f"length {beta} is not in Z*alpha + Z; the interval cannot have "
            "bounded remainder")
    if beta.sign(ctx) <= 0:
        raise ConstructionError("length must be positive")
    cert = Certificate("hecke-ostrowski", {"length": str(beta)})
    return IntervalUnion1D(((ScalarModule.constant(0, 1), beta),), cert)


def module_parallelepiped(base: ModuleVector, vs, ctx: AlphaContext) -> Parallelepiped:
    """Parallelepiped spanned by lattice vectors (members of Z*alpha + Z^d)."""
    vs = tuple(vs)
    for v in vs:
        if not is_lattice_member(v):
            raise ConstructionError(f"generator {v} is not in Z*alpha + Z^d")
    det = det_module(vs)
    if det.is_zero():
        raise ConstructionError("degenerate: generators have zero volume")
    cert = Certificate("lattice-parallelepiped",
                       {"q": [str(v.r) for v in vs]})
    P = Parallelepiped(base, vs, cert)
    P.validate(ctx)
    return P


def sheared_parallelepiped(vs, shear, ctx: AlphaContext,
                           base: ModuleVector | None = None) -> Parallelepiped:
    """Parallelepiped spanned by w_1 = v_1, w_k = v_k + sum_{i<k} s_{k,i} v_i.

    ``shear`` maps (k, i) with i < k to a coefficient (dict, or nested list
    where shear[k][i] is used).  Rational coefficients keep the result exact;
    float coefficients are stored as their exact binary rational value and the
    certificate is flagged, since the idealized real-coefficient target is not
    module-representable.
    """
    vs = tuple(vs)
    d = len(vs)
    for v in vs:
        if not is_lattice_member(v):
            raise ConstructionError(f"generator {v} is not in Z*alpha + Z^d")

    def coeff(k, i):
        if isinstance(shear, dict):
            return shear.get((k, i), 0)
        try:
            return shear[k][i]
        except (IndexError, TypeError, KeyError):
            return 0

    float_seen = False
    ws = []
    for k in range(d):
        w = vs[k]
        for i in range(k):
            s = coeff(k, i)
            if isinstance(s, float):
                float_seen = True
            s = _as_frac(s)
            if s:
                w = w + vs[i].scale(s)
        ws.append(w)
    det = det_module(ws)
    if det.is_zero():
        raise ConstructionError("degenerate sheared parallelepiped")
    cert = Certificate("sheared-parallelepiped", {"float_shear": float_seen})
    P = Parallelepiped(base if base is not None else ModuleVector.zero(d),
                       tuple(ws), cert)
    P.validate(ctx)
    return P


def measure_parallelepiped(gamma: ScalarModule, ctx: AlphaContext) -> Parallelepiped:
    """Lattice parallelepiped with exact prescribed measure gamma; simple
    whenever gamma <= 1.

    Writes gamma = q<alpha, m> + r with m primitive, completes m to a
    unimodular integer basis, and spans the biorthogonal vectors
    p_1, ..., p_{d-1} together with q*alpha + r*p_d.
    """
    if not admissible_measure(gamma):
        raise KestenObstruction(f"measure {gamma} is not admissible")
    if gamma.sign(ctx) <= 0:
        raise ConstructionError("measure must be positive")
    d = ctx.d
    cint = [int(x) for x in gamma.c]
    r = int(gamma.c0)
    if all(x == 0 for x in cint):
        # purely integer measure: an integer box r*e_1 x e_2 x ... x e_d
        gens = [ModuleVector.unit(0, d).scale(r)] + \
               [ModuleVector.unit(i, d) for i in range(1, d)]
        cert = Certificate("prescribed-measure-parallelepiped",
                           {"q": 0, "r": r})
        return Parallelepiped(ModuleVector.zero(d), tuple(gens), cert)
    q, m = primitive_part(cint)
    if d == 1 and m[0] == -1:
        m = [1]
        q = -q
    M = complete_to_unimodular(m)
    ps = biorthogonal_columns(M)
    gens = [ModuleVector.make(0, [Fraction(x) for x in ps[j]])
            for j in range(d - 1)]
    last = ModuleVector.make(Fraction(q), [Fraction(r * x) for x in ps[d - 1]])
    gens.append(last)
    cert = Certificate("prescribed-measure-parallelepiped",
                       {"q": q, "r": r, "m": m})
    P = Parallelepiped(ModuleVector.zero(d), tuple(gens), cert)
    vol = volume_symbolic(P, ctx)
    if vol != gamma:
        raise ConstructionError("internal: constructed volume mismatch")
    one = ScalarModule.constant(1, d)
    if (one - gamma).sign(ctx) >= 0 and not is_simple(P, ctx):
        raise ConstructionError("internal: expected a simple parallelepiped")
    return P


def derived_cylinder_context(v: ModuleVector, ctx: AlphaContext) -> AlphaContext:
    """The (d-1)-dimensional context with rotation (v_1/v_d, ..., v_{d-1}/v_d)."""
    with mpmath.workdps(PRECISION_DPS):
        coords = [v.coord(i).evaluate(ctx) for i in range(v.d)]
        vals = [coords[i] / coords[-1] for i in range(v.d - 1)]
    return context_from_values(vals)


def liardet_cylinder(sigma, v: ModuleVector, ctx: AlphaContext,
                     sigma_ctx: AlphaContext | None = None) -> Cylinder:
    """Cylinder {(x,0) + t*v : x in sigma, 0 <= t < 1} over a bounded
    remainder base sigma in dimension d-1.

    sigma's module coordinates refer to the derived rotation vector
    (v_1/v_d, ..., v_{d-1}/v_d); the bounded remainder property of sigma with
    respect to that vector is the caller's responsibility unless sigma carries
    a certificate from this module.
    """
    d = ctx.d
    if v.d != d:
        raise ConstructionError("dimension mismatch")
    if not is_lattice_member(v):
        raise ConstructionError("v must be in Z*alpha + Z^d")
    vd = v.coord(d - 1)
    if vd.is_zero():
        raise ConstructionError("last coordinate of v must be nonzero")
    offset = ModuleVector.zero(d)
    if vd.sign(ctx) < 0:
        offset = v
        v = -v
    dctx = derived_cylinder_context(v, ctx)
    if sigma_ctx is not None:
        with mpmath.workdps(PRECISION_DPS):
            for a, b in zip(sigma_ctx.alpha, dctx.alpha):
                if abs(a - b) > mpmath.mpf("1e-25"):
                    raise ConstructionError(
                        "sigma context does not match v_0/v_d of the cylinder")
        dctx = sigma_ctx
    caller_asserted = getattr(sigma, "certificate", None) is None
    cert = Certificate("liardet-cylinder",
                       {"v": {"r": str(v.r), "m": [str(x) for x in v.m]},
                        "base_caller_asserted": caller_asserted})
    return Cylinder(sigma, v, dctx, offset, cert)


def zonotope_lattice(base: ModuleVector, gens, ctx: AlphaContext) -> Zonotope:
    """Zonotope with lattice generators (hence lattice-difference vertices)."""
    gens = tuple(gens)
    for g in gens:
        if not is_lattice_member(g):
            raise ConstructionError(f"generator {g} is not in Z*alpha + Z^d")
    Z = Zonotope(base, gens, Certificate("zonotope-lattice-vertices",
                                         {"n_gens": len(gens)}))
    Z.validate(ctx)
    return Z


def zonotope_tiling(Z: Zonotope, ctx: AlphaContext) -> list:
    """Tiling of a lattice-generator zonotope by lattice parallelepipeds,
    one per independent d-subset of the generators.

    Uses the lexicographic half-open decomposition: the tile of a basis
    B = {i_1 < ... < i_d} is shifted by sum of the generators v_j (j not in
    B) whose insertion raises the lexicographically first affected
    coefficient; all sign decisions are made exactly on module determinants.
    """
    for g in Z.gens:
        if not is_lattice_member(g):
            raise ConstructionError("zonotope tiling requires lattice generators")
    gens = list(Z.gens)
    d = Z.d
    n = len(gens)
    pieces = []
    for idx in itertools.combinations(range(n), d):
        B = [gens[i] for i in idx]
        D = det_module(B)
        if D.is_zero():
            continue
        sD = D.sign(ctx)
        shift = ModuleVector.zero(d)
        for j in range(n):
            if j in idx:
                continue
            # coefficients of gens[j] over B: c_k = det(B with col k -> v_j)/det(B)
            signs = {}
            for k in range(d):
                cols = list(B)
                cols[k] = gens[j]
                Dk = det_module(cols)
                sk = 0 if Dk.is_zero() else Dk.sign(ctx) * sD
                if sk != 0:
                    signs[idx[k]] = sk
            i_star = min(list(signs.keys()) + [j])
            if i_star == j or signs[i_star] < 0:
                shift = shift + gens[j]
        cert = Certificate("lattice-parallelepiped",
                           {"tiling_of": "zonotope", "basis": list(idx)})
        pieces.append(Parallelepiped(Z.base + shift, tuple(B), cert))
    if not pieces:
        raise ConstructionError("generators do not span R^d")
    total = volume_symbolic(pieces[0], ctx)
    for P in pieces[1:]:
        total = total + volume_symbolic(P, ctx)
    if total != volume_symbolic(Z, ctx):
        raise ConstructionError("internal: tiling volumes do not sum to the zonotope")
    return pieces
