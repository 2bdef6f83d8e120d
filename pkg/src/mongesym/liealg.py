"""Abstract Lie-algebra structure extracted from finite sets of vector fields.

The entry point is close_under_bracket, which grows a basis until brackets
close, producing exact rational structure constants.  Coordinates of a field
in a basis are found by sampling coefficient functions at admissible rational
points (fast) and then confirming the candidate identity symbolically, so a
sampled answer is never trusted on its own; when sampling is impossible
(exp atoms have no exact rational values) a fully symbolic coefficient match
is used instead.

On the structure-constant tensor everything is standard and exact: center,
derived and lower central series, Killing form with rank and signature, the
radical as the Killing-orthogonal complement of the derived algebra, and a
recognition step for the three shapes this package has to distinguish:
sl(2, R) (dimension 3, nondegenerate indefinite Killing form), the Heisenberg
algebra (dimension 3, two-step nilpotent), and their semidirect product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charts import Chart
from .expr import EvaluationError, NonRationalPowerError
from .fields import VectorField, lie_bracket
from .linalg import (dense_nullspace, matrix_rank, rref, solve_exact,
                     symmetric_signature)


class ClosureCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# expressing fields in a basis
# ---------------------------------------------------------------------------

def sample_point(chart: Chart, t: int) -> dict:
    """Deterministic admissible rational points; y2 is a positive perfect cube
    so that cube-root atoms take exact rational values."""
    vals = {}
    for k, name in enumerate(chart.coords):
        vals[name] = Fraction(2 + ((3 * t + 5 * k + 1) % 11))
    if "y2" in chart:
        vals["y2"] = Fraction(((t % 4) + 2) ** 3)
    return vals


def _coefficient_rows(fields, chart):
    """Key-indexed exact linear description of the fields' coefficients."""
    keys = {}
    columns = []
    for f in fields:
        col = {}
        for i, e in enumerate(f.coefficients):
            for term in e.terms:
                key = (i, term.monomial, term.atoms)
                keys.setdefault(key, len(keys))
                col[key] = term.coefficient
        columns.append(col)
    return keys, columns


def express_in_basis(v: VectorField, basis):
    """Exact rational coordinates of v in the basis, or None when not in the span.

    Sampling produces the candidate, a symbolic zero-test confirms it; the
    final answer never depends on the choice of sample points.
    """
    if not basis:
        return [] if v.is_zero() else None
    chart = v.chart
    candidate = None
    try:
        npts = len(basis) + 3
        rows, rhs = [], []
        for t in range(npts):
            pt = sample_point(chart, t)
            for i in range(len(chart)):
                rows.append([b.coefficients[i].substitute(pt) for b in basis])
                rhs.append(v.coefficients[i].substitute(pt))
        candidate = solve_exact(rows, rhs)
        if candidate is None:
            return None  # exact sample values already contradict membership
    except (EvaluationError, NonRationalPowerError, ZeroDivisionError):
        candidate = None
    if candidate is not None and _verify_combination(v, basis, candidate):
        return candidate
    # symbolic coefficient matching over canonical-form keys
    keys, columns = _coefficient_rows(list(basis) + [v], chart)
    matrix = []
    rhs = []
    for key in sorted(keys, key=lambda k: keys[k]):
        matrix.append([col.get(key, Fraction(0)) for col in columns[:-1]])
        rhs.append(columns[-1].get(key, Fraction(0)))
    solution = solve_exact(matrix, rhs)
    if solution is not None and _verify_combination(v, basis, solution):
        return solution
    return None


def _verify_combination(v: VectorField, basis, coords) -> bool:
    residual = v
    for c, b in zip(coords, basis):
        if c:
            residual = residual - b.scale(c)
    return residual.is_zero()


def close_under_bracket(fields, cap: int = 32) -> "LieAlgebraPresentation":
    """Basis and exact structure constants of the algebra the fields generate.

    Raises ClosureCapExceeded when more than cap independent fields appear.
    """
    basis: list = []

    def try_add(f):
        if f.is_zero():
            return False
        if express_in_basis(f, basis) is not None:
            return False
        basis.append(f)
        if len(basis) > cap:
            raise ClosureCapExceeded(f"dimension exceeded cap {cap}")
        return True

    for f in fields:
        try_add(f)
    pending = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pending:
        i, j = pending.pop(0)
        if try_add(lie_bracket(basis[i], basis[j])):
            k = len(basis) - 1
            pending.extend((t, k) for t in range(k))
    return presentation_from_basis(basis)


def presentation_from_basis(basis) -> "LieAlgebraPresentation":
    n = len(basis)
    zero_row = tuple(Fraction(0) for _ in range(n))
    constants = [[zero_row] * n for _ in range(n)]
    for j in range(n):
        for i in range(j):
            coords = express_in_basis(lie_bracket(basis[i], basis[j]), basis)
            if coords is None:
                raise ValueError("fields are not closed under bracket")
            row = tuple(coords)
            constants[i][j] = row
            constants[j][i] = tuple(-c for c in coords)
    return LieAlgebraPresentation(tuple(basis),
                                  tuple(tuple(r) for r in constants))


# ---------------------------------------------------------------------------
# tensor-level computations
# ---------------------------------------------------------------------------

def bracket_vec(constants, u, v):
    n = len(constants)
    out = [Fraction(0)] * n
    for i, ui in enumerate(u):
        if not ui:
            continue
        ci = constants[i]
        for j, vj in enumerate(v):
            if not vj:
                continue
            row = ci[j]
            f = ui * vj
            for k in range(n):
                if row[k]:
                    out[k] += f * row[k]
    return out


def span_rows(vectors):
    reduced, pivots = rref(list(vectors))
    return [tuple(r) for r in reduced], pivots


def subspace_bracket(constants, rows_a, rows_b):
    prods = []
    for a in rows_a:
        for b in rows_b:
            w = bracket_vec(constants, a, b)
            if any(w):
                prods.append(w)
    return span_rows(prods)[0]


def derived_series_dims(constants, rows):
    dims = [len(rows)]
    current = rows
    while True:
        nxt = subspace_bracket(constants, current, current)
        dims.append(len(nxt))
        if len(nxt) == 0 or len(nxt) == len(current):
            return dims
        current = nxt

def lower_central_dims(constants, rows):
    dims = [len(rows)]
    current = rows
    while True:
        nxt = subspace_bracket(constants, rows, current)
        dims.append(len(nxt))
        if len(nxt) == 0 or len(nxt) == len(current):
            return dims
        current = nxt


def center_rows(constants):
    n = len(constants)
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([constants[i][j][k] for i in range(n)])
    return [tuple(v) for v in dense_nullspace(rows, n)]


def killing_matrix(constants):
    n = len(constants)
    km = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = Fraction(0)
            for l in range(n):
                cil = constants[i][l]
                for k in range(n):
                    if cil[k]:
                        s += cil[k] * constants[j][k][l]
            km[i][j] = s
            km[j][i] = s
    return km


def radical_rows(constants, killing=None):
    """The radical as the Killing-orthogonal complement of the derived algebra."""
    n = len(constants)
    full = [tuple(Fraction(1) if t == i else Fraction(0) for t in range(n))
            for i in range(n)]
    derived = subspace_bracket(constants, full, full)
    if not derived:
        return full  # abelian: everything is radical
    km = killing if killing is not None else killing_matrix(constants)
    rows = []
    for d in derived:
        rows.append([sum(d[k] * km[k][i] for k in range(n)) for i in range(n)])
    return [tuple(v) for v in dense_nullspace(rows, n)]


def sub_tensor(constants, rows):
    """Structure constants of a bracket-closed subspace, or None."""
    m = len(rows)
    matrix_cols = [list(r) for r in rows]
    matrix = [[matrix_cols[a][i] for a in range(m)] for i in range(len(constants))]
    sub = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            w = bracket_vec(constants, rows[a], rows[b])
            coords = solve_exact(matrix, w)
            if coords is None:
                return None
            if [sum(matrix[i][t] * coords[t] for t in range(m)) for i in range(len(constants))] != list(w):
                return None
            sub[a][b] = tuple(coords)
    return tuple(tuple(r) for r in sub)


def quotient_tensor(constants, rad_rows):
    """Constants of g / radical on the complementary unit coordinates.

    Returns (tensor, complement_indices)."""
    n = len(constants)
    reduced, pivots = span_rows(rad_rows)
    comp = [i for i in range(n) if i not in pivots]

    def reduce_mod(vec):
        v = list(vec)
        for r, p in zip(reduced, pivots):
            f = v[p]
            if f:
                for t in range(n):
                    v[t] -= f * r[t]
        return v

    m = len(comp)
    tensor = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            u = [Fraction(1) if t == comp[a] else Fraction(0) for t in range(n)]
            v = [Fraction(1) if t == comp[b] else Fraction(0) for t in range(n)]
            w = reduce_mod(bracket_vec(constants, u, v))
            tensor[a][b] = tuple(w[c] for c in comp)
    return tuple(tuple(r) for r in tensor), comp


def is_sl2_tensor(constants) -> bool:
    if len(constants) != 3:
        return False
    km = killing_matrix(constants)
    if matrix_rank(km) != 3:
        return False
    plus, minus, _ = symmetric_signature(km)
    return (plus, minus) in ((2, 1), (1, 2))


def is_heisenberg_tensor(constants) -> bool:
    if len(constants) != 3:
        return False
    full = [tuple(Fraction(1) if t == i else Fraction(0) for t in range(3))
            for i in range(3)]
    lcs = lower_central_dims(constants, full)
    if lcs != [3, 1, 0]:
        return False
    zc = center_rows(constants)
    der = subspace_bracket(constants, full, full)
    return len(zc) == 1 and span_rows(zc)[0] == span_rows(der)[0]


def jacobi_holds(constants) -> bool:
    n = len(constants)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    s = Fraction(0)
                    for m in range(n):
                        s += (constants[j][k][m] * constants[i][m][l]
                              + constants[k][i][m] * constants[j][m][l]
                              + constants[i][j][m] * constants[k][m][l])
                    if s:
                        return False
    return True


def antisymmetry_holds(constants) -> bool:
    n = len(constants)
    return all(constants[i][j][k] == -constants[j][i][k]
               for i in range(n) for j in range(n) for k in range(n))


# ---------------------------------------------------------------------------
# Levi complement for a two-step nilpotent radical
# ---------------------------------------------------------------------------

def levi_complement(constants, rad_rows):
    """A subalgebra complementary to the radical, as coordinate vectors.

    Implemented for radicals with [R, [R, R]] = 0 by correcting an arbitrary
    complement in two linear stages (first modulo the derived part of the
    radical, then inside it).  Returns None when no correction is found.
    """
    n = len(constants)
    rad, rad_pivots = span_rows(rad_rows)
    z = subspace_bracket(constants, rad, rad)
    if subspace_bracket(constants, rad, z):
        return None  # radical is not two-step nilpotent
    qt, comp = quotient_tensor(constants, rad)
    m = len(comp)
    w = [[Fraction(1) if t == comp[a] else Fraction(0) for t in range(n)]
         for a in range(m)]

    def correct(ws, target_rows, mod_rows):
        """Solve for phi: W -> span(target_rows) killing the defect modulo
        span(mod_rows); equations and images are decomposed over the direct
        sum target + mod and only the target components are constrained."""
        r = len(target_rows)
        if r == 0:
            return ws
        full_rows = list(target_rows) + list(mod_rows)
        mat_cols = [[full_rows[s][i] for s in range(len(full_rows))]
                    for i in range(n)]

        def target_components(vec):
            sol = solve_exact(mat_cols, list(vec))
            return None if sol is None else sol[:r]

        nun = m * r  # unknowns phi[a][s]
        eq_rows, eq_rhs = [], []
        for a in range(m):
            for b in range(a + 1, m):
                defect = bracket_vec(constants, ws[a], ws[b])
                for t in range(m):
                    if qt[a][b][t]:
                        defect = [d - qt[a][b][t] * x
                                  for d, x in zip(defect, ws[t])]
                coeffs = [[Fraction(0)] * nun for _ in range(n)]
                for s in range(r):
                    img_b = bracket_vec(constants, ws[a], target_rows[s])
                    img_a = bracket_vec(constants, ws[b], target_rows[s])
                    for i in range(n):
                        coeffs[i][b * r + s] += img_b[i]
                        coeffs[i][a * r + s] -= img_a[i]
                for t in range(m):
                    if qt[a][b][t]:
                        for s in range(r):
                            for i in range(n):
                                coeffs[i][t * r + s] -= qt[a][b][t] * target_rows[s][i]
                dcomp = target_components(defect)
                ccomp = [target_components([coeffs[i][u] for i in range(n)])
                         for u in range(nun)]
                if dcomp is None or any(c is None for c in ccomp):
                    return None
                for pos in range(r):
                    eq_rows.append([ccomp[u][pos] for u in range(nun)])
                    eq_rhs.append(-dcomp[pos])
        phi = solve_exact(eq_rows, eq_rhs)
        if phi is None:
            return None
        out = []
        for a in range(m):
            vec = list(ws[a])
            for s in range(r):
                f = phi[a * r + s]
                if f:
                    for i in range(n):
                        vec[i] += f * target_rows[s][i]
            out.append(vec)
        return out

    # stage 1: correct along a complement of z inside rad, equations mod z;
    # stage 2: correct inside z, equations exact (quadratic terms vanish)
    z_red, _ = span_rows(z)
    rad_comp = []
    cur = list(z_red)
    for row in rad:
        trial, _ = span_rows(cur + [row])
        if len(trial) > len(cur):
            rad_comp.append(row)
            cur = trial
    ws = correct(w, rad_comp, z_red)
    if ws is None:
        return None
    if z_red:
        ws = correct(ws, z_red, [])
        if ws is None:
            return None
    # final exact check: the corrected span closes with quotient constants
    for a in range(m):
        for b in range(m):
            wab = bracket_vec(constants, ws[a], ws[b])
            expected = [Fraction(0)] * n
            for t in range(m):
                if qt[a][b][t]:
                    for i in range(n):
                        expected[i] += qt[a][b][t] * ws[t][i]
            if list(wab) != expected:
                return None
    return [tuple(v) for v in ws]


# ---------------------------------------------------------------------------
# presentation and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebraPresentation:
    basis: tuple
    constants: tuple  # constants[i][j] is the coordinate tuple of [b_i, b_j]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def bracket_coords(self, i: int, j: int):
        return self.constants[i][j]

    def antisymmetry_ok(self) -> bool:
        return antisymmetry_holds(self.constants)

    def jacobi_ok(self) -> bool:
        return jacobi_holds(self.constants)

    def combination(self, coords) -> VectorField:
        out = VectorField.zero(self.basis[0].chart)
        for c, b in zip(coords, self.basis):
            if c:
                out = out + b.scale(c)
        return out

    def bracket_table(self):
        """Human-readable bracket table in basis coordinates."""
        return [[tuple(str(c) for c in self.constants[i][j])
                 for j in range(self.dimension)] for i in range(self.dimension)]


def _aligned_indices(rows):
    """Indices when every row is supported on a single coordinate, else None."""
    idx = []
    for r in rows:
        support = [i for i, v in enumerate(r) if v]
        if len(support) != 1:
            return None
        idx.append(support[0])
    return sorted(idx)


@dataclass(frozen=True)
class StructureReport:
    dimension: int
    center: tuple
    center_indices: object
    derived_dims: tuple
    lcs_dims: tuple
    solvable: bool
    nilpotent: bool
    killing: tuple
    killing_rank: int
    killing_signature: tuple
    radical: tuple
    radical_indices: object
    verdict: str
    complement: object  # coordinate vectors of a complementary subalgebra, or None

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "center": (list(self.center_indices) if self.center_indices is not None
                       else [[str(v) for v in row] for row in self.center]),
            "derived_dims": list(self.derived_dims),
            "lcs_dims": list(self.lcs_dims),
            "solvable": self.solvable,
            "nilpotent": self.nilpotent,
            "killing": {
                "matrix": [[str(v) for v in row] for row in self.killing],
                "rank": self.killing_rank,
                "signature": list(self.killing_signature),
            },
            "radical": (list(self.radical_indices) if self.radical_indices is not None
                        else [[str(v) for v in row] for row in self.radical]),
            "verdict": self.verdict,
            "complement": (None if self.complement is None
                           else [[str(v) for v in row] for row in self.complement]),
        }


def analyze(p: LieAlgebraPresentation) -> StructureReport:
    c = p.constants
    n = p.dimension
    full = [tuple(Fraction(1) if t == i else Fraction(0) for t in range(n))
            for i in range(n)]
    zc = center_rows(c)
    dseries = derived_series_dims(c, full)
    lseries = lower_central_dims(c, full)
    solvable = dseries[-1] == 0
    nilpotent = lseries[-1] == 0
    km = killing_matrix(c)
    k_rank = matrix_rank(km)
    plus, minus, _ = symmetric_signature(km)
    rad = radical_rows(c, km)
    rad_span, _ = span_rows(rad)
    verdict = "unrecognized"
    complement = None
    if n == 3 and is_sl2_tensor(c):
        verdict = "sl2"
    elif n == 3 and is_heisenberg_tensor(c):
        verdict = "heisenberg"
    elif n == 6 and len(rad_span) == 3:
        st = sub_tensor(c, rad_span)
        qt, _ = quotient_tensor(c, rad_span)
        if st is not None and is_heisenberg_tensor(st) and is_sl2_tensor(qt):
            complement = levi_complement(c, rad_span)
            if complement is not None:
                verdict = "sl2_semidirect_heisenberg"
    return StructureReport(
        dimension=n,
        center=tuple(zc),
        center_indices=_aligned_indices(zc),
        derived_dims=tuple(dseries),
        lcs_dims=tuple(lseries),
        solvable=solvable,
        nilpotent=nilpotent,
        killing=tuple(tuple(r) for r in km),
        killing_rank=k_rank,
        killing_signature=(plus, minus),
        radical=tuple(rad_span),
        radical_indices=_aligned_indices(rad_span),
        verdict=verdict,
        complement=None if complement is None else tuple(complement),
    )


# spec-shaped convenience wrappers ------------------------------------------

def structure_constants(basis) -> tuple:
    return presentation_from_basis(list(basis)).constants

def center(p: LieAlgebraPresentation):
    return center_rows(p.constants)

def derived_series(p: LieAlgebraPresentation):
    n = p.dimension
    full = [tuple(Fraction(1) if t == i else Fraction(0) for t in range(n))
            for i in range(n)]
    return derived_series_dims(p.constants, full)

def lower_central_series(p: LieAlgebraPresentation):
    n = p.dimension
    full = [tuple(Fraction(1) if t == i else Fraction(0) for t in range(n))
            for i in range(n)]
    return lower_central_dims(p.constants, full)

def is_solvable(p: LieAlgebraPresentation) -> bool:
    return derived_series(p)[-1] == 0

def is_nilpotent(p: LieAlgebraPresentation) -> bool:
    return lower_central_series(p)[-1] == 0

def killing_form(p: LieAlgebraPresentation):
    km = killing_matrix(p.constants)
    plus, minus, _ = symmetric_signature(km)
    return km, matrix_rank(km), (plus, minus)

def recognize(p: LieAlgebraPresentation) -> StructureReport:
    return analyze(p)
