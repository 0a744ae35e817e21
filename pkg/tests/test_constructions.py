"""Constructions: certified bounded remainder families."""
from fractions import Fraction

import numpy as np
import pytest

from brs.constructions import (ConstructionError, KestenObstruction,
                               hecke_interval, liardet_cylinder,
                               measure_parallelepiped, module_parallelepiped,
                               sheared_parallelepiped, zonotope_lattice,
                               zonotope_tiling)
from brs.context import preset_context
from brs.modarith import ModuleVector, ScalarModule, admissible_measure
from brs.sets import (is_simple, multiplicity, volume_symbolic)

MV = ModuleVector.make
SM = ScalarModule.make


class TestHecke:
    def test_alpha_interval(self, ctx1):
        S = hecke_interval(SM(0, (1,)), ctx1)
        assert S.certificate.family == "hecke-ostrowski"
        a, b = S.intervals[0]
        assert a == SM(0, (0,)) and b == SM(0, (1,))

    def test_full_circle(self, ctx1):
        S = hecke_interval(SM(1, (0,)), ctx1)
        assert volume_symbolic(S, ctx1) == SM(1, (0,))

    def test_two_alpha(self, ctx1):
        S = hecke_interval(SM(0, (2,)), ctx1)
        v = volume_symbolic(S, ctx1).evaluate_float(ctx1)
        assert v == pytest.approx(0.8284271247, abs=1e-9)

    def test_kesten_obstruction(self, ctx1):
        with pytest.raises(KestenObstruction):
            hecke_interval(SM(Fraction(1, 2), (0,)), ctx1)


class TestModuleParallelepiped:
    def test_strip(self, ctx2):
        P = module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.alpha(2),
                                   ModuleVector.unit(1, 2)), ctx2)
        assert volume_symbolic(P, ctx2) == SM(0, (1, 0))

    def test_unit_cube(self, ctx2):
        P = module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.unit(0, 2),
                                   ModuleVector.unit(1, 2)), ctx2)
        assert volume_symbolic(P, ctx2) == SM(1, (0, 0))

    def test_parallel_generators_rejected(self, ctx2):
        with pytest.raises(ConstructionError):
            module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.alpha(2),
                                   ModuleVector.alpha(2, 2)), ctx2)

    def test_non_lattice_generator_rejected(self, ctx2):
        with pytest.raises(ConstructionError):
            module_parallelepiped(ModuleVector.zero(2),
                                  (MV(Fraction(1, 2), (0, 0)),
                                   ModuleVector.unit(1, 2)), ctx2)


class TestShearedParallelepiped:
    def test_identity_shear(self, ctx2):
        vs = (ModuleVector.alpha(2), ModuleVector.unit(1, 2))
        P = sheared_parallelepiped(vs, {}, ctx2)
        assert P.gens == vs

    def test_szusz_type_float_shear(self, ctx2):
        vs = (ModuleVector.alpha(2), ModuleVector.unit(1, 2))
        s = -1.0 / float(ctx2.alpha[1])
        P = sheared_parallelepiped(vs, {(1, 0): s}, ctx2)
        assert P.certificate.params["float_shear"] is True
        # second generator nearly on the x-axis
        w2 = np.array(P.gens[1].evaluate_float(ctx2))
        assert abs(w2[1]) < 1e-12
        # shear preserves the volume
        assert volume_symbolic(P, ctx2) == volume_symbolic(
            module_parallelepiped(ModuleVector.zero(2), vs, ctx2), ctx2)

    def test_3d_rational_shear_volume_unchanged(self, ctx3):
        vs = tuple(ModuleVector.unit(i, 3) for i in range(3))
        P = sheared_parallelepiped(vs, {(2, 0): Fraction(1, 2)}, ctx3)
        assert P.certificate.params["float_shear"] is False
        assert volume_symbolic(P, ctx3) == ScalarModule.constant(1, 3)


class TestMeasureParallelepiped:
    def test_alpha1_simple(self, ctx2):
        g = SM(0, (1, 0))
        P = measure_parallelepiped(g, ctx2)
        assert volume_symbolic(P, ctx2) == g
        assert is_simple(P, ctx2)

    def test_unit_measure_integer_box(self, ctx2):
        P = measure_parallelepiped(SM(1, (0, 0)), ctx2)
        assert volume_symbolic(P, ctx2) == SM(1, (0, 0))

    def test_mixed_measure(self, ctx2):
        g = SM(2, (0, 1))
        P = measure_parallelepiped(g, ctx2)
        assert volume_symbolic(P, ctx2) == g

    def test_non_admissible_rejected(self, ctx2):
        with pytest.raises(KestenObstruction):
            measure_parallelepiped(SM(Fraction(1, 3), (0, 0)), ctx2)

    def test_negative_rejected(self, ctx2):
        with pytest.raises(ConstructionError):
            measure_parallelepiped(SM(-1, (1, 0)), ctx2)

    def test_random_measures_in_unit_range(self, ctx2):
        rng = np.random.default_rng(17)
        done = 0
        while done < 25:
            c0 = int(rng.integers(-3, 4))
            c1 = int(rng.integers(-3, 4))
            c2 = int(rng.integers(-3, 4))
            g = SM(c0, (c1, c2))
            if g.is_zero():
                continue
            val = g.evaluate_float(ctx2)
            if not (0 < val <= 1):
                continue
            P = measure_parallelepiped(g, ctx2)
            assert volume_symbolic(P, ctx2) == g
            assert is_simple(P, ctx2)
            done += 1

    def test_d3_measure(self, ctx3):
        g = SM(1, (0, -1, 1))
        val = g.evaluate_float(ctx3)
        assert val > 0
        P = measure_parallelepiped(g, ctx3)
        assert volume_symbolic(P, ctx3) == g


class TestLiardetCylinder:
    def test_vertical_prism(self, ctx2):
        from brs.context import preset_context
        base_ctx = None
        v = ModuleVector.unit(1, 2)
        # sigma = [0, 1/2) is just a set; certificate is caller-asserted
        sigma = __import__("brs.sets", fromlist=["IntervalUnion1D"]).IntervalUnion1D(
            ((ScalarModule.make(0, (0,)), ScalarModule.make(Fraction(1, 2), (0,))),))
        S = liardet_cylinder(sigma, v, ctx2)
        assert S.certificate.params["base_caller_asserted"] is True
        # prism [0,1/2) x [0,1): multiplicity 1 on the left half
        assert multiplicity(S, [0.2, 0.7], ctx2) == 1
        assert multiplicity(S, [0.7, 0.2], ctx2) == 0

    def test_szusz_parallelogram_volume(self, ctx2):
        from brs.constructions import derived_cylinder_context
        v = MV(1, (0, 0))  # alpha itself; v2 = alpha_2 > 0
        dctx = derived_cylinder_context(v, ctx2)
        # sigma = [0, l), l = 1*(v1/v2) + 1 > 0
        ell = ScalarModule.make(1, (1,))
        sigma = hecke_interval(ell, dctx)
        S = liardet_cylinder(sigma, v, ctx2, dctx)
        # mes S = l * v2 = (v1/v2 + 1)*v2 = v1 + v2 = alpha_1 + alpha_2
        assert volume_symbolic(S, ctx2) == SM(0, (1, 1))
        assert admissible_measure(volume_symbolic(S, ctx2))

    def test_negative_vd_normalized(self, ctx2):
        v = MV(-1, (0, 0))
        ell = ScalarModule.make(1, (1,))
        from brs.constructions import derived_cylinder_context
        dctx = derived_cylinder_context(-v, ctx2)
        sigma = hecke_interval(ell, dctx)
        S = liardet_cylinder(sigma, v, ctx2)
        assert not S.offset.is_zero()
        assert volume_symbolic(S, ctx2) == SM(0, (1, 1))

    def test_zero_last_coordinate_rejected(self, ctx2):
        with pytest.raises(ConstructionError):
            liardet_cylinder(None, MV(0, (1, 0)), ctx2)


class TestZonotopeTiling:
    def test_square_single_piece(self, ctx2):
        Z = zonotope_lattice(ModuleVector.zero(2),
                             (ModuleVector.unit(0, 2), ModuleVector.unit(1, 2)),
                             ctx2)
        pieces = zonotope_tiling(Z, ctx2)
        assert len(pieces) == 1

    def test_three_generators(self, ctx2):
        Z = zonotope_lattice(ModuleVector.zero(2),
                             (ModuleVector.unit(0, 2), ModuleVector.unit(1, 2),
                              ModuleVector.alpha(2)), ctx2)
        pieces = zonotope_tiling(Z, ctx2)
        assert len(pieces) == 3
        total = volume_symbolic(pieces[0], ctx2)
        for P in pieces[1:]:
            total = total + volume_symbolic(P, ctx2)
        assert total == volume_symbolic(Z, ctx2)

    def test_three_generators_alt(self, ctx2):
        Z = zonotope_lattice(ModuleVector.zero(2),
                             (ModuleVector.alpha(2), MV(0, (2, 0)),
                              ModuleVector.unit(1, 2)), ctx2)
        pieces = zonotope_tiling(Z, ctx2)
        assert len(pieces) == 3

    def test_interior_disjoint_by_sampling(self, ctx2):
        from brs.discrepancy import multiplicity_on_torus
        from brs.sets import DisjointUnion, bounding_box, contains_point
        Z = zonotope_lattice(ModuleVector.zero(2),
                             (ModuleVector.unit(0, 2), ModuleVector.unit(1, 2),
                              ModuleVector.alpha(2)), ctx2)
        pieces = zonotope_tiling(Z, ctx2)
        lo, hi = bounding_box(Z, ctx2)
        rng = np.random.default_rng(23)
        pts = lo + rng.random((2000, 2)) * (hi - lo)
        for p in pts:
            inside = sum(contains_point(P, p, ctx2) for P in pieces)
            assert inside <= 1

    def test_pieces_cover_zonotope_volume_numerically(self, ctx2):
        Z = zonotope_lattice(ModuleVector.zero(2),
                             (MV(1, (1, 0)), MV(0, (0, 1)), MV(-1, (1, 1))),
                             ctx2)
        pieces = zonotope_tiling(Z, ctx2)
        total = volume_symbolic(pieces[0], ctx2)
        for P in pieces[1:]:
            total = total + volume_symbolic(P, ctx2)
        assert total == volume_symbolic(Z, ctx2)
        for P in pieces:
            for g in P.gens:
                from brs.modarith import is_lattice_member
                assert is_lattice_member(g)
            assert is_lattice_member(P.base)

    def test_every_constructed_volume_admissible(self, ctx2):
        sets = [
            module_parallelepiped(ModuleVector.zero(2),
                                  (ModuleVector.alpha(2),
                                   ModuleVector.unit(1, 2)), ctx2),
            measure_parallelepiped(SM(0, (1, 0)), ctx2),
            measure_parallelepiped(SM(2, (0, 1)), ctx2),
        ]
        for S in sets:
            assert admissible_measure(volume_symbolic(S, ctx2))
