"""Lie-algebra structure: closure, constants, series, Killing form, recognition."""

import json
import os
import random
from fractions import Fraction

import pytest

from mongesym.catalog import symmetry_fields
from mongesym.charts import J20
from mongesym.fields import VectorField, lie_bracket
from mongesym.liealg import (ClosureCapExceeded, analyze, center,
                             close_under_bracket, derived_series,
                             express_in_basis, is_nilpotent, is_solvable,
                             jacobi_holds, killing_form, lower_central_series,
                             presentation_from_basis, sample_point)

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

S = symmetry_fields()
ALL_S = [S[f"S{i}"] for i in range(1, 7)]


@pytest.fixture(scope="module")
def p6():
    return close_under_bracket(ALL_S, cap=8)


class TestExpressInBasis:
    def test_heisenberg_bracket_coordinates(self, p6):
        b = lie_bracket(S["S4"], S["S5"])
        coords = express_in_basis(b, list(p6.basis))
        assert coords == [0, 0, 0, 0, 0, 1]

    def test_zero_field(self, p6):
        coords = express_in_basis(VectorField.zero(J20), list(p6.basis))
        assert coords == [0] * 6

    def test_not_in_span(self):
        dy = VectorField.coordinate(J20, "y")
        assert express_in_basis(dy, [S["S4"]]) is None

    def test_rejects_perturbed_identity(self, p6):
        # a field that agrees with S1 at many points but not identically
        tweak = VectorField.from_strings(J20, {"y1": "1/720720*y1^7"})
        v = S["S1"] + tweak
        coords = express_in_basis(v, list(p6.basis))
        assert coords is None

    def test_symbolic_fallback_with_exp_atoms(self):
        f = VectorField.from_strings(J20, {"y": "exp(x)", "y1": "exp(x)"})
        g = VectorField.from_strings(J20, {"y": "exp(x)"})
        h = VectorField.from_strings(J20, {"y1": "exp(x)"})
        coords = express_in_basis(f, [g, h])
        assert coords == [1, 1]
        assert express_in_basis(VectorField.coordinate(J20, "y"), [g, h]) is None

    def test_sample_points_admissible(self):
        from mongesym.rationals import exact_pow
        for t in range(6):
            pt = sample_point(J20, t)
            assert exact_pow(pt["y2"], Fraction(1, 3)) is not None  # perfect cubes


class TestClosure:
    def test_six_fields_already_closed(self, p6):
        assert p6.dimension == 6

    def test_single_field_abelian(self):
        p = close_under_bracket([S["S4"]], cap=4)
        assert p.dimension == 1
        assert p.constants[0][0] == (0,)

    def test_sl2_closure_from_two(self):
        p = close_under_bracket([S["S1"], S["S3"]], cap=6)
        assert p.dimension == 3
        rep = analyze(p)
        assert rep.verdict == "sl2"

    def test_cap_exceeded(self):
        with pytest.raises(ClosureCapExceeded):
            close_under_bracket(ALL_S, cap=3)

    def test_constants_validity(self, p6):
        assert p6.antisymmetry_ok()
        assert p6.jacobi_ok()


class TestGoldenTable:
    def test_bracket_table_byte_stable(self, p6):
        table = {}
        for i in range(6):
            for j in range(6):
                table[f"[{i},{j}]"] = [str(c) for c in p6.constants[i][j]]
        with open(os.path.join(GOLDEN, "bracket_table_eq2.json")) as fh:
            golden = json.load(fh)
        assert table == golden

    def test_key_relations(self, p6):
        c = p6.constants
        # [S2,S1] = 2*S1, [S2,S3] = -2*S3, [S1,S3] = S2, [S4,S5] = S6
        assert c[1][0] == (2, 0, 0, 0, 0, 0)
        assert c[1][2] == (0, 0, -2, 0, 0, 0)
        assert c[0][2] == (0, 1, 0, 0, 0, 0)
        assert c[3][4] == (0, 0, 0, 0, 0, 1)
        for j in range(6):
            assert c[5][j] == (0,) * 6  # S6 central


class TestSeries:
    def test_center(self, p6):
        zc = center(p6)
        assert len(zc) == 1
        assert list(zc[0]) == [0, 0, 0, 0, 0, 1]

    def test_six_dim_not_solvable(self, p6):
        dims = derived_series(p6)
        assert dims[0] == 6 and dims[-1] == 6  # perfect algebra, stabilizes above 0
        assert not is_solvable(p6)
        assert not is_nilpotent(p6)

    def test_heisenberg_series(self):
        p = close_under_bracket([S["S4"], S["S5"], S["S6"]], cap=4)
        assert lower_central_series(p) == [3, 1, 0]
        assert is_nilpotent(p)
        assert is_solvable(p)


class TestKilling:
    def test_sl2_signature(self):
        p = presentation_from_basis([S["S1"], S["S2"], S["S3"]])
        km, rank, signature = killing_form(p)
        assert rank == 3
        assert signature == (2, 1)
        assert km[1][1] == 8 and km[0][2] == 4

    def test_nilpotent_killing_vanishes(self):
        p = close_under_bracket([S["S4"], S["S5"], S["S6"]], cap=4)
        km, rank, _ = killing_form(p)
        assert rank == 0
        assert all(v == 0 for row in km for v in row)

    def test_one_dim_abelian(self):
        p = close_under_bracket([S["S6"]], cap=2)
        km, rank, _ = killing_form(p)
        assert km == [[0]] and rank == 0


class TestRecognition:
    def test_full_algebra(self, p6):
        rep = analyze(p6)
        assert rep.verdict == "sl2_semidirect_heisenberg"
        assert rep.radical_indices == [3, 4, 5]
        assert rep.center_indices == [5]
        assert rep.complement is not None
        with open(os.path.join(GOLDEN, "structure_eq2.json")) as fh:
            golden = json.load(fh)
        assert rep.to_json() == golden

    def test_heisenberg_alone(self):
        p = close_under_bracket([S["S4"], S["S5"], S["S6"]], cap=4)
        assert analyze(p).verdict == "heisenberg"

    def test_two_dim_abelian_unrecognized(self):
        p = close_under_bracket([S["S4"], S["S6"]], cap=4)
        rep = analyze(p)
        assert rep.verdict == "unrecognized"
        assert rep.dimension == 2

    def test_invariance_under_basis_change(self, p6):
        rng = random.Random(2024)
        for _ in range(4):
            n = 6
            m = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
            for _ in range(10):
                i, j = rng.sample(range(n), 2)
                c = Fraction(rng.choice([-2, -1, 1, 2, 3]))
                for k in range(n):
                    m[i][k] += c * m[j][k]
            new_fields = []
            for i in range(n):
                f = VectorField.zero(J20)
                for j in range(n):
                    if m[i][j]:
                        f = f + ALL_S[j].scale(m[i][j])
                new_fields.append(f)
            p = close_under_bracket(new_fields, cap=8)
            rep = analyze(p)
            assert p.dimension == 6
            assert rep.verdict == "sl2_semidirect_heisenberg"
            assert rep.complement is not None

    def test_perturbed_constants_fail_jacobi(self, p6):
        c = [list(list(row) for row in plane) for plane in p6.constants]
        c[0][1] = tuple(Fraction(v) for v in (0, 0, 1, 0, 0, 0))
        c[1][0] = tuple(-v for v in c[0][1])
        tampered = tuple(tuple(tuple(x) if isinstance(x, tuple) else tuple(x)
                               for x in row) for row in
                         [[tuple(map(Fraction, c[i][j])) for j in range(6)]
                          for i in range(6)])
        assert not jacobi_holds(tampered)
