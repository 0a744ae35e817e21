"""Discrepancy scans, growth diagnostic, verdict combiner."""
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from brs.config import DEFAULT_DIAGNOSTIC
from brs.constructions import hecke_interval, module_parallelepiped
from brs.context import PRECISION_DPS
from brs.discrepancy import (DiscrepancyReport, boundedness_diagnostic,
                             brs_verdict, discrepancy_series,
                             default_checkpoints, membership_spec,
                             multiplicity_on_torus, sweep)
from brs.modarith import ModuleVector, ScalarModule
from brs.sets import IntervalUnion1D, Parallelepiped, Polygon2D, multiplicity

MV = ModuleVector.make
SM = ScalarModule.make


def naive_max_abs_series(S, x0, N, checkpoints, ctx):
    """Independent oracle: orbit positions via mpmath, multiplicity via the
    slow per-point enumerator, plain Python running max."""
    out = []
    with mpmath.workdps(PRECISION_DPS):
        x = [mpmath.mpf(v) for v in x0]
        vol = None
        from brs.sets import volume_symbolic
        vol = volume_symbolic(S, ctx).evaluate(ctx)
        D = mpmath.mpf(0)
        best = mpmath.mpf(0)
        ci = 0
        for n in range(1, N + 1):
            pos = [float(xx - mpmath.floor(xx)) for xx in x]
            D += multiplicity(S, pos, ctx) - vol
            best = max(best, abs(D))
            if ci < len(checkpoints) and n == checkpoints[ci]:
                out.append(float(best))
                ci += 1
            x = [xx + a for xx, a in zip(x, ctx.alpha)]
    return out


class TestSeries:
    def test_full_torus_zero(self, ctx1):
        S = hecke_interval(SM(1, (0,)), ctx1)
        vals = discrepancy_series(S, [0.3], 10_000, [100, 1000, 10_000], ctx1)
        assert max(vals) < 1e-9

    def test_hecke_interval_bounded_by_one(self, ctx1):
        S = hecke_interval(SM(0, (1,)), ctx1)
        vals = discrepancy_series(S, [0.1], 100_000,
                                  [100, 1000, 10_000, 100_000], ctx1)
        assert vals[-1] <= 1 + 1e-9

    def test_kernel_matches_naive_oracle_1d(self, ctx1):
        S = IntervalUnion1D(((SM(0, (0,)), SM(Fraction(1, 2), (0,))),))
        cps = [10, 100, 500, 2000]
        got = discrepancy_series(S, [0.1234], 2000, cps, ctx1)
        want = naive_max_abs_series(S, [0.1234], 2000, cps, ctx1)
        assert got == pytest.approx(want, abs=1e-8)

    def test_kernel_matches_naive_oracle_2d(self, ctx2):
        P = module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.alpha(2),
                                   ModuleVector.unit(1, 2)), ctx2)
        cps = [10, 100, 400]
        x0 = [0.271, 0.823]
        got = discrepancy_series(P, x0, 400, cps, ctx2)
        want = naive_max_abs_series(P, x0, 400, cps, ctx2)
        assert got == pytest.approx(want, abs=1e-8)

    def test_half_interval_grows(self, ctx1):
        S = IntervalUnion1D(((SM(0, (0,)), SM(Fraction(1, 2), (0,))),))
        vals = discrepancy_series(S, [0.1], 1_000_000,
                                  default_checkpoints(1_000_000), ctx1)
        assert vals[-1] > vals[0] + 1.25

    def test_telescoping(self, ctx2):
        P = module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.alpha(2),
                                   ModuleVector.unit(1, 2)), ctx2)
        from brs.sets import volume_symbolic
        vol = float(volume_symbolic(P, ctx2).evaluate(ctx2))
        x0 = np.array([0.37, 0.58])
        cps = list(range(1, 40))
        vals = []
        # D_n via the kernels at successive checkpoints
        from brs.discrepancy import orbit_bases
        from brs import _kernels
        spec = membership_spec(P, ctx2)
        bases = orbit_bases(x0, ctx2, 64)
        pos = _kernels.pure.orbit_block(bases[0], ctx2.alpha_float, 40)
        counts = _kernels.multiplicity_batch(spec, pos)
        D = np.cumsum(counts) - np.arange(1, 41) * vol
        for n in range(39):
            chi = multiplicity(P, pos[n + 1 - 1 + 1], ctx2)  # chi at x + (n+1) alpha
            assert abs((D[n + 1] - D[n]) - (chi - vol)) < 1e-9


class TestDiagnostic:
    def test_hecke_no_growth(self, ctx1):
        S = hecke_interval(SM(0, (1,)), ctx1)
        rep = sweep(S, ctx1, N=10_000, n_starts=10, seed=1)
        assert rep.verdict_diagnostic == "no-growth"

    def test_half_interval_growth(self, ctx1):
        S = IntervalUnion1D(((SM(0, (0,)), SM(Fraction(1, 2), (0,))),))
        rep = sweep(S, ctx1, N=1_000_000, n_starts=5, seed=1)
        assert rep.verdict_diagnostic == "growth"

    def test_constant_zero_no_growth(self):
        rep = DiscrepancyReport("z", [[0.1]], [100, 1000, 10000],
                                [[0.0, 0.0, 0.0]])
        assert boundedness_diagnostic(rep) == "no-growth"

    def test_insufficient_checkpoints(self):
        rep = DiscrepancyReport("z", [[0.1]], [100, 200], [[0.0, 0.0]])
        with pytest.raises(ValueError):
            boundedness_diagnostic(rep)

    def test_max_abs_nondecreasing(self, ctx1):
        S = hecke_interval(SM(0, (1,)), ctx1)
        rep = sweep(S, ctx1, N=10_000, n_starts=5, seed=3)
        rep.validate()

    def test_sweep_deterministic(self, ctx1):
        S = hecke_interval(SM(0, (1,)), ctx1)
        r1 = sweep(S, ctx1, N=10_000, n_starts=5, seed=42)
        r2 = sweep(S, ctx1, N=10_000, n_starts=5, seed=42)
        assert r1.max_abs == r2.max_abs and r1.start_points == r2.start_points


class TestVerdict:
    def test_half_interval_measure_obstruction(self, ctx1):
        S = IntervalUnion1D(((SM(0, (0,)), SM(Fraction(1, 2), (0,))),))
        v = brs_verdict(S, ctx1)
        assert v.kind == "notBRS"
        assert v.witness["reason"] == "measure-obstruction"

    def test_lattice_hexagon_brs(self, ctx2):
        a = ModuleVector.alpha(2)
        e1 = ModuleVector.unit(0, 2)
        e2 = ModuleVector.unit(1, 2)
        z = ModuleVector.zero(2)
        hexagon = Polygon2D((z, e1, e1 + a, e1 + a + e2, a + e2, e2))
        hexagon.validate(ctx2)
        v = brs_verdict(hexagon, ctx2)
        assert v.kind == "BRS"

    def test_translation_invariance_of_verdict(self, ctx2):
        a = ModuleVector.alpha(2)
        e1 = ModuleVector.unit(0, 2)
        e2 = ModuleVector.unit(1, 2)
        z = ModuleVector.zero(2)
        hexagon = Polygon2D((z, e1, e1 + a, e1 + a + e2, a + e2, e2))
        shift = MV(2, (-1, 3))
        assert brs_verdict(hexagon, ctx2).kind == \
            brs_verdict(hexagon.translated(shift), ctx2).kind

    def test_uncertified_d3_parallelepiped_unknown(self, ctx3):
        P = Parallelepiped(ModuleVector.zero(3),
                           (ModuleVector.alpha(3), ModuleVector.unit(1, 3),
                            ModuleVector.unit(2, 3)))
        v = brs_verdict(P, ctx3, N=10_000, n_starts=5)
        assert v.kind == "unknown"
        assert v.diagnostic == "no-growth"

    def test_certificate_path(self, ctx2):
        P = module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.alpha(2),
                                   ModuleVector.unit(1, 2)), ctx2)
        v = brs_verdict(P, ctx2)
        assert v.kind == "BRS"
        assert v.certificate.family == "lattice-parallelepiped"
