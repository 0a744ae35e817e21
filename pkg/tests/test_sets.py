"""Set descriptions: multiplicity, symbolic volume, simplicity."""
from fractions import Fraction

import numpy as np
import pytest

from brs.modarith import ModuleVector, ScalarModule
from brs.sets import (DisjointUnion, IntervalUnion1D, Parallelepiped,
                      Polygon2D, Zonotope, cross_module, det_module,
                      is_simple, multiplicity, volume_symbolic)

MV = ModuleVector.make
SM = ScalarModule.make


def unit_cube(d):
    return Parallelepiped(ModuleVector.zero(d),
                          tuple(ModuleVector.unit(i, d) for i in range(d)))


def strip_alpha_e2():
    # spanned by alpha and e_2 in d=2
    return Parallelepiped(ModuleVector.zero(2),
                          (ModuleVector.alpha(2), ModuleVector.unit(1, 2)))


class TestMultiplicity:
    def test_unit_cube_fundamental_domain(self, ctx2):
        S = unit_cube(2)
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = rng.random(2)
            assert multiplicity(S, x, ctx2) == 1

    def test_long_interval(self, ctx1):
        S = IntervalUnion1D(((SM(0, (0,)), SM(Fraction(3, 2), (0,))),))
        assert multiplicity(S, [0.25], ctx1) == 2
        assert multiplicity(S, [0.75], ctx1) == 1

    def test_strip(self, ctx2):
        S = strip_alpha_e2()
        assert multiplicity(S, [0.2, 0.9], ctx2) == 1
        # {x1} >= alpha_1 is outside the strip
        assert multiplicity(S, [0.5, 0.9], ctx2) == 0

    def test_translation_shifts_multiplicity(self, ctx2):
        S = strip_alpha_e2()
        v = MV(1, (2, -1))
        Sv = S.translated(v)
        vf = np.array(v.evaluate_float(ctx2))
        rng = np.random.default_rng(1)
        for _ in range(50):
            x = rng.random(2) * 3 - 1
            assert multiplicity(Sv, x, ctx2) == multiplicity(S, x - vf, ctx2)


class TestVolume:
    def test_unit_cube(self, ctx2):
        v = volume_symbolic(unit_cube(2), ctx2)
        assert v == SM(1, (0, 0))

    def test_strip_volume_alpha1(self, ctx2):
        v = volume_symbolic(strip_alpha_e2(), ctx2)
        assert v == SM(0, (1, 0))

    def test_triangle_shoelace(self, ctx2):
        T = Polygon2D((ModuleVector.zero(2), MV(0, (1, 0)), MV(0, (0, 1))))
        assert volume_symbolic(T, ctx2) == SM(Fraction(1, 2), (0, 0))

    def test_volume_matches_monte_carlo(self, ctx2):
        S = strip_alpha_e2()
        vol = float(volume_symbolic(S, ctx2).evaluate(ctx2))
        rng = np.random.default_rng(3)
        n = 100_000
        from brs.discrepancy import multiplicity_on_torus
        X = rng.random((n, 2))
        counts = multiplicity_on_torus(S, X, ctx2)
        mean = counts.mean()
        se = counts.std() / np.sqrt(n)
        assert abs(mean - vol) <= 3 * se + 1e-9

    def test_translation_invariance(self, ctx2):
        S = strip_alpha_e2()
        v = MV(2, (1, 1))
        assert volume_symbolic(S, ctx2) == volume_symbolic(S.translated(v), ctx2)

    def test_degenerate_rejected(self, ctx2):
        P = Parallelepiped(ModuleVector.zero(2),
                           (ModuleVector.alpha(2), ModuleVector.alpha(2, 2)))
        with pytest.raises(ValueError):
            volume_symbolic(P, ctx2)

    def test_zonotope_volume(self, ctx2):
        Z = Zonotope(ModuleVector.zero(2),
                     (ModuleVector.unit(0, 2), ModuleVector.unit(1, 2),
                      ModuleVector.alpha(2)))
        # |det(e1,e2)| + |det(e1,a)| + |det(e2,a)| = 1 + a2 + a1
        assert volume_symbolic(Z, ctx2) == SM(1, (1, 1))

    def test_disjoint_union_adds(self, ctx1):
        A = IntervalUnion1D(((SM(0, (0,)), SM(0, (1,))),))
        B = IntervalUnion1D(((SM(2, (0,)), SM(Fraction(5, 2), (0,))),))
        U = DisjointUnion((A, B))
        assert volume_symbolic(U, ctx1) == SM(Fraction(1, 2), (1,))


class TestCrossAndDet:
    def test_cross_alpha_term_cancels(self):
        a = ModuleVector.alpha(2)
        assert cross_module(a, a).is_zero()

    def test_det_matches_numeric(self, ctx2):
        import numpy.linalg as la
        rng = np.random.default_rng(5)
        for _ in range(50):
            vs = [MV(int(rng.integers(-3, 4)),
                     tuple(int(x) for x in rng.integers(-3, 4, size=2)))
                  for _ in range(2)]
            sym = det_module(vs)
            num = la.det(np.array([v.evaluate_float(ctx2) for v in vs]).T)
            assert abs(sym.evaluate_float(ctx2) - num) < 1e-9


class TestSimplicity:
    def test_unit_cube_simple(self, ctx2):
        assert is_simple(unit_cube(2), ctx2)

    def test_long_interval_not_simple(self, ctx1):
        S = IntervalUnion1D(((SM(0, (0,)), SM(Fraction(3, 2), (0,))),))
        assert not is_simple(S, ctx1)

    def test_strip_simple(self, ctx2):
        assert is_simple(strip_alpha_e2(), ctx2)

    def test_wide_box_not_simple(self, ctx2):
        P = Parallelepiped(ModuleVector.zero(2),
                           (MV(0, (2, 0)), MV(0, (0, 1))))
        assert not is_simple(P, ctx2)

    def test_simple_set_multiplicity_01(self, ctx2):
        S = strip_alpha_e2()
        rng = np.random.default_rng(9)
        from brs.discrepancy import multiplicity_on_torus
        X = rng.random((10_000, 2))
        counts = multiplicity_on_torus(S, X, ctx2)
        assert set(np.unique(counts)) <= {0, 1}
