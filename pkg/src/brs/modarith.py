"""Exact arithmetic in the rational span of {1, alpha_1, ..., alpha_d}.

Scalars are c0 + <c, alpha> and vectors are r*alpha + m, both with rational
coefficients (``fractions.Fraction``).  Because 1, alpha_1, ..., alpha_d are
linearly independent over Q, coefficient equality is value equality, so
membership in the translation group Z*alpha + Z^d ("lattice membership") and
all orbit decisions reduce to exact rational tests.  Numeric evaluation is a
separate, lossy view used only for sampling and sign determination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

import mpmath

from .context import PRECISION_DPS, SIGN_GUARD, AlphaContext

Rat = Fraction


def _as_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class InvalidDirectionError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarModule:
    """The real number c0 + c1*alpha_1 + ... + cd*alpha_d, rational c's."""

    c0: Fraction
    c: tuple  # tuple[Fraction, ...]

    @staticmethod
    def make(c0, c) -> "ScalarModule":
        return ScalarModule(_as_frac(c0), tuple(_as_frac(x) for x in c))

    @staticmethod
    def constant(c0, d: int) -> "ScalarModule":
        return ScalarModule(_as_frac(c0), (Fraction(0),) * d)

    @staticmethod
    def alpha_coord(i: int, d: int, coeff=1) -> "ScalarModule":
        c = [Fraction(0)] * d
        c[i] = _as_frac(coeff)
        return ScalarModule(Fraction(0), tuple(c))

    @property
    def d(self) -> int:
        return len(self.c)

    def __add__(self, other: "ScalarModule") -> "ScalarModule":
        return ScalarModule(self.c0 + other.c0,
                            tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "ScalarModule") -> "ScalarModule":
        return ScalarModule(self.c0 - other.c0,
                            tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "ScalarModule":
        return ScalarModule(-self.c0, tuple(-a for a in self.c))

    def scale(self, t) -> "ScalarModule":
        t = _as_frac(t)
        return ScalarModule(self.c0 * t, tuple(a * t for a in self.c))

    def shift_int(self, k: int) -> "ScalarModule":
        return ScalarModule(self.c0 + k, self.c)

    def is_zero(self) -> bool:
        return self.c0 == 0 and all(x == 0 for x in self.c)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c)

    def is_integral(self) -> bool:
        """True iff every coefficient (c0 and all c_i) is an integer."""
        return self.c0.denominator == 1 and all(x.denominator == 1 for x in self.c)

    def evaluate(self, ctx: AlphaContext) -> mpmath.mpf:
        if len(self.c) != ctx.d:
            raise ValueError("dimension mismatch")
        with mpmath.workdps(PRECISION_DPS):
            s = mpmath.mpf(self.c0.numerator) / self.c0.denominator
            for coef, a in zip(self.c, ctx.alpha):
                if coef:
                    s += a * mpmath.mpf(coef.numerator) / coef.denominator
            return s

    def evaluate_float(self, ctx: AlphaContext) -> float:
        return float(self.evaluate(ctx))

    def sign(self, ctx: AlphaContext) -> int:
        """Exact sign: 0 iff symbolically zero, else sign of the numeric value.

        A symbolically nonzero element evaluating below the guard magnitude
        signals precision exhaustion and raises.
        """
        if self.is_zero():
            return 0
        v = self.evaluate(ctx)
        if abs(v) < SIGN_GUARD:
            raise ArithmeticError(
                f"cannot determine sign of tiny nonzero module element {self}")
        return 1 if v > 0 else -1

    def compare(self, other: "ScalarModule", ctx: AlphaContext) -> int:
        return (self - other).sign(ctx)

    def __str__(self) -> str:
        parts = [str(self.c0)]
        for i, x in enumerate(self.c):
            if x:
                parts.append(f"{x}a{i+1}")
        return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class ModuleVector:
    """The point r*alpha + m in R^d, with rational r and m."""

    r: Fraction
    m: tuple  # tuple[Fraction, ...]

    @staticmethod
    def make(r, m) -> "ModuleVector":
        return ModuleVector(_as_frac(r), tuple(_as_frac(x) for x in m))

    @staticmethod
    def zero(d: int) -> "ModuleVector":
        return ModuleVector(Fraction(0), (Fraction(0),) * d)

    @staticmethod
    def unit(i: int, d: int) -> "ModuleVector":
        m = [Fraction(0)] * d
        m[i] = Fraction(1)
        return ModuleVector(Fraction(0), tuple(m))

    @staticmethod
    def alpha(d: int, coeff=1) -> "ModuleVector":
        return ModuleVector(_as_frac(coeff), (Fraction(0),) * d)

    @property
    def d(self) -> int:
        return len(self.m)

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector(self.r + other.r,
                            tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return ModuleVector(self.r - other.r,
                            tuple(a - b for a, b in zip(self.m, other.m)))

    def __neg__(self) -> "ModuleVector":
        return ModuleVector(-self.r, tuple(-a for a in self.m))

    def scale(self, t) -> "ModuleVector":
        t = _as_frac(t)
        return ModuleVector(self.r * t, tuple(a * t for a in self.m))

    def is_zero(self) -> bool:
        return self.r == 0 and all(x == 0 for x in self.m)

    def coord(self, i: int) -> ScalarModule:
        """Coordinate i as a scalar module element (r*alpha_i + m_i)."""
        c = [Fraction(0)] * self.d
        c[i] = self.r
        return ScalarModule(self.m[i], tuple(c))

    def evaluate(self, ctx: AlphaContext):
        if self.d != ctx.d:
            raise ValueError("dimension mismatch")
        with mpmath.workdps(PRECISION_DPS):
            rr = mpmath.mpf(self.r.numerator) / self.r.denominator
            return tuple(
                rr * a + mpmath.mpf(mi.numerator) / mi.denominator
                for a, mi in zip(ctx.alpha, self.m)
            )

    def evaluate_float(self, ctx: AlphaContext):
        return tuple(float(v) for v in self.evaluate(ctx))


def is_lattice_member(v: ModuleVector) -> bool:
    """Membership in Z*alpha + Z^d: r and every m_i integral."""
    return v.r.denominator == 1 and all(x.denominator == 1 for x in v.m)


def admissible_measure(gamma: ScalarModule) -> bool:
    """Necessary condition on the measure of a bounded remainder set:
    gamma = n0 + n1 alpha_1 + ... + nd alpha_d with integer n's."""
    return gamma.is_integral()


def _progression_intersect(a1: Fraction, p1: Fraction, a2: Fraction, p2: Fraction):
    """Intersect arithmetic progressions a1 + p1*Z and a2 + p2*Z (p1, p2 > 0).

    Returns (a, p) describing the intersection a + p*Z, or None if empty.
    """
    # Solve a1 + p1*k = a2 + p2*l over integers k, l.
    # Scale to integers: common denominator D of a2-a1, p1, p2.
    diff = a2 - a1
    den = diff.denominator
    den = den * p1.denominator // _gcd(den, p1.denominator)
    den = den * p2.denominator // _gcd(den, p2.denominator)
    A = int(diff * den)
    P1 = int(p1 * den)
    P2 = int(p2 * den)
    g = _gcd(P1, P2)
    if A % g != 0:
        return None
    # p1*k ≡ A (mod p2): k = (A/g) * inv(P1/g) mod (P2/g)
    P1g, P2g, Ag = P1 // g, P2 // g, A // g
    k0 = (Ag * pow(P1g, -1, P2g)) % P2g if P2g != 1 else 0
    a = a1 + p1 * k0
    p = p1 * P2g  # lcm(p1, p2)
    return (a, p)


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _coef_progressions(w_coefs, u_coefs):
    """t-constraints making each coefficient w_i + t*u_i an integer.

    Yields either ("empty",), ("all",) per coefficient, or progressions
    (a, p): t in a + p*Z.
    """
    for wc, uc in zip(w_coefs, u_coefs):
        if uc == 0:
            if wc.denominator != 1:
                yield ("empty",)
            else:
                yield ("all",)
        else:
            # wc + t*uc in Z  <=>  t in (Z - wc)/uc = -wc/uc + (1/uc)Z
            yield (-wc / uc, abs(Fraction(1, 1) / uc))


def line_lattice_solutions(w: ModuleVector, u: ModuleVector):
    """All rational t with w + t*u in Z*alpha + Z^d, as a progression.

    Returns None (no solutions) or a pair (t0, period) with period > 0
    describing {t0 + period*Z}, or (t0, None) for a single solution set that
    is all of R (cannot happen for u != 0, kept for safety).
    """
    if u.is_zero():
        raise InvalidDirectionError("direction vector must be nonzero")
    w_coefs = (w.r,) + tuple(w.m)
    u_coefs = (u.r,) + tuple(u.m)
    cur = None  # (a, p) or "all"
    for constraint in _coef_progressions(w_coefs, u_coefs):
        if constraint == ("empty",):
            return None
        if constraint == ("all",):
            continue
        a, p = constraint
        if cur is None:
            cur = (a, p)
        else:
            nxt = _progression_intersect(cur[0], cur[1], a, p)
            if nxt is None:
                return None
            cur = nxt
    if cur is None:
        # every coefficient of u vanished -- impossible since u != 0
        raise InvalidDirectionError("direction vector must be nonzero")
    return cur


def segment_lattice_solutions(w: ModuleVector, u: ModuleVector, lo, hi) -> list:
    """Sorted rational t in [lo, hi] with w + t*u a lattice member.

    All solutions are rational: each one solves a linear equation with
    rational coefficients (coefficient-wise integrality of w + t*u).
    """
    lo = _as_frac(lo)
    hi = _as_frac(hi)
    if lo > hi:
        raise ValueError("lo must be <= hi")
    sol = line_lattice_solutions(w, u)
    if sol is None:
        return []
    t0, p = sol
    # enumerate t0 + k*p within [lo, hi]
    kmin = ceil((lo - t0) / p)
    kmax = floor((hi - t0) / p)
    return [t0 + p * k for k in range(kmin, kmax + 1)]
