"""Rotation contexts: the vector alpha, its precision, and irrationality provenance.

All exact decisions in this package run on rational coefficients; alpha itself
is kept only as a high-precision numeric vector used for evaluation, sampling
and sign determination.  Built-in presets use fractional parts of square roots
of distinct primes, for which 1, alpha_1, ..., alpha_d are linearly independent
over the rationals (square roots of distinct squarefree integers are Q-linearly
independent together with 1).  User-supplied numeric alphas cannot be certified
irrational and are flagged as such; the flag propagates into reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

# Working precision (decimal digits) for all mpf evaluations.  30+ significant
# digits are required by the evaluation contracts; 50 leaves headroom for
# sign determination of small module elements.
PRECISION_DPS = 50

# Magnitude below which a numeric value of a symbolically nonzero module
# element is considered suspicious (precision exhaustion).
SIGN_GUARD = mpmath.mpf("1e-30")

_PRESET_PRIMES = {
    "sqrt2": 2,
    "sqrt3": 3,
    "sqrt5": 5,
    "sqrt7": 7,
    "sqrt11": 11,
    "sqrt13": 13,
}


def _frac_sqrt(p: int) -> mpmath.mpf:
    with mpmath.workdps(PRECISION_DPS):
        r = mpmath.sqrt(p)
        return r - mpmath.floor(r)


@dataclass(frozen=True)
class AlphaContext:
    """The rotation vector alpha in R^d plus numeric/irrationality metadata."""

    d: int
    alpha: tuple  # tuple of mpmath.mpf, length d
    preset_id: str | None = None
    irrationality_certified: bool = False
    alpha_float: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if len(self.alpha) != self.d:
            raise ValueError("alpha has wrong length")
        for a in self.alpha:
            if not mpmath.isfinite(a):
                raise ValueError("alpha components must be finite")
        object.__setattr__(
            self, "alpha_float", np.array([float(a) for a in self.alpha], dtype=float)
        )

    @property
    def unverified(self) -> bool:
        return not self.irrationality_certified

    def alpha_str(self, digits: int = 40) -> list[str]:
        with mpmath.workdps(PRECISION_DPS):
            return [mpmath.nstr(a, digits) for a in self.alpha]


def preset_context(name: str) -> AlphaContext:
    """Build a context from a preset id like ``sqrt2`` or ``sqrt2_sqrt3_sqrt5``.

    Components are fractional parts of square roots of distinct primes, in the
    order listed in the id.
    """
    parts = name.split("_")
    vals = []
    for part in parts:
        if part not in _PRESET_PRIMES:
            raise ValueError(f"unknown preset component {part!r}")
        vals.append(_frac_sqrt(_PRESET_PRIMES[part]))
    if len(set(parts)) != len(parts):
        raise ValueError("preset components must be distinct")
    return AlphaContext(
        d=len(vals),
        alpha=tuple(vals),
        preset_id=name,
        irrationality_certified=True,
    )


def context_from_values(values, certified: bool = False) -> AlphaContext:
    """Context from user numeric values (floats, strings or mpf).

    Unless ``certified`` is set the context carries the "unverified
    irrationality" flag.
    """
    with mpmath.workdps(PRECISION_DPS):
        vals = tuple(mpmath.mpf(v) for v in values)
    return AlphaContext(d=len(vals), alpha=vals, irrationality_certified=certified)


DEFAULT_PRESETS = {
    1: "sqrt2",
    2: "sqrt2_sqrt3",
    3: "sqrt2_sqrt3_sqrt5",
    4: "sqrt2_sqrt3_sqrt5_sqrt7",
}


def default_context(d: int) -> AlphaContext:
    try:
        return preset_context(DEFAULT_PRESETS[d])
    except KeyError:
        raise ValueError(f"no default preset for dimension {d}")
