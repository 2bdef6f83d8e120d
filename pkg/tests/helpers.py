"""Shared test utilities: random expression generation and independent oracles."""

from __future__ import annotations

import random
from fractions import Fraction

from mongesym.charts import J20
from mongesym.expr import ExpAtom, Expr, NonRationalPowerError
from mongesym.fields import (VectorField, distribution_from_monge,
                             symmetry_residuals)
from mongesym.linalg import dense_nullspace, rref
from mongesym.solver import AnsatzSpec, build_ansatz


# ---------------------------------------------------------------------------
# random expressions (seeded, deterministic)
# ---------------------------------------------------------------------------

def random_polynomial(rng: random.Random, chart=J20, max_terms=4, max_degree=3) -> Expr:
    e = Expr.zero(chart)
    for _ in range(rng.randint(1, max_terms)):
        coeff = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        if coeff == 0:
            coeff = Fraction(1)
        term = Expr.constant(chart, coeff)
        for _ in range(rng.randint(0, max_degree)):
            term = term * Expr.coordinate(chart, rng.choice(chart.coords))
        e = e + term
    return e


def random_expr(rng: random.Random, chart=J20, allow_atoms=True) -> Expr:
    e = random_polynomial(rng, chart)
    if allow_atoms and rng.random() < 0.5:
        kind = rng.random()
        if kind < 0.6:
            q = Fraction(rng.choice([1, 2, -1, -2, 4, 5]), rng.choice([3, 3, 2]))
            coord = rng.choice(["y2", "y1"])
            e = e + Expr.coordinate(chart, coord).pow_rational(q).scale(
                Fraction(rng.randint(1, 3)))
        elif kind < 0.85:
            arg = random_polynomial(rng, chart, max_terms=2, max_degree=1)
            atom_expr = Expr.from_raw(
                chart, [(Fraction(1), (), (ExpAtom(arg.as_poly()),))])
            e = e + atom_expr
        else:
            base = random_polynomial(rng, chart, max_terms=2, max_degree=2)
            if not base.is_zero():
                try:
                    e = e + base.pow_rational(Fraction(rng.choice([1, 2]), 3))
                except NonRationalPowerError:
                    pass
    return e


def admissible_point(rng: random.Random, chart=J20) -> dict:
    """Rational points with y2 a positive perfect cube and y1 a perfect square,
    so fractional powers of bare coordinates evaluate exactly."""
    pt = {}
    for c in chart.coords:
        pt[c] = Fraction(rng.randint(1, 5))
    if "y1" in chart:
        pt["y1"] = Fraction(rng.randint(1, 3) ** 6)
    if "y2" in chart:
        pt["y2"] = Fraction(rng.randint(1, 3) ** 6)
    return pt


# ---------------------------------------------------------------------------
# approximate flow-commutator oracle for the Lie bracket
# ---------------------------------------------------------------------------

def _flow(field: VectorField, point: dict, time: float, steps: int = 16) -> dict:
    names = field.chart.coords
    state = [float(point[c]) for c in names]
    h = time / steps

    def rhs(s):
        assignment = dict(zip(names, s))
        return [c.approx(assignment) for c in field.coefficients]

    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs([s + h / 2 * k for s, k in zip(state, k1)])
        k3 = rhs([s + h / 2 * k for s, k in zip(state, k2)])
        k4 = rhs([s + h * k for s, k in zip(state, k3)])
        state = [s + h / 6 * (a + 2 * b + 2 * c + d)
                 for s, a, b, c, d in zip(state, k1, k2, k3, k4)]
    return dict(zip(names, state))


def flow_commutator(v: VectorField, w: VectorField, point: dict, t: float = 1 / 64):
    """Approximate [v, w] at a point from the commutator of the flows.

    The displacement of flow_w(-t) flow_v(-t) flow_w(t) flow_v(t) is
    t^2 [v, w] + O(t^3); one Richardson step removes the O(t) error of the
    divided difference."""
    names = v.chart.coords

    def displaced(tt):
        p = _flow(v, point, tt)
        p = _flow(w, p, tt)
        p = _flow(v, p, -tt)
        p = _flow(w, p, -tt)
        return [(p[c] - float(point[c])) / (tt * tt) for c in names]

    d1 = displaced(t)
    d2 = displaced(t / 2)
    return [2 * b - a for a, b in zip(d1, d2)]


# ---------------------------------------------------------------------------
# brute-force symmetry solver for low degrees (independent of the sparse path)
# ---------------------------------------------------------------------------

def brute_force_symmetry_space(equation, degree: int):
    """Dimension and nullspace of the symmetry condition on a generic
    polynomial field, computed by direct symbolic coefficient matching on the
    six residual expressions and a dense rational reduction."""
    d = distribution_from_monge(equation)
    ansatz = build_ansatz(AnsatzSpec(degree))
    keys: dict = {}
    cols = []
    for u in ansatz.unknowns:
        res = symmetry_residuals(u.field(), d)
        col = {}
        for rid, e in enumerate(res):
            for t in e.terms:
                k = (rid, t.monomial, t.atoms)
                keys.setdefault(k, len(keys))
                col[keys[k]] = t.coefficient
        cols.append(col)
    matrix = [[cols[j].get(i, Fraction(0)) for j in range(len(cols))]
              for i in range(len(keys))]
    null = dense_nullspace(matrix, len(cols))
    return len(null), null, ansatz


def same_span(vectors_a, vectors_b) -> bool:
    if not vectors_a and not vectors_b:
        return True
    ra = rref([list(map(Fraction, v)) for v in vectors_a])[0]
    rb = rref([list(map(Fraction, v)) for v in vectors_b])[0]
    return ra == rb
