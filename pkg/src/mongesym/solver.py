"""Degree-bounded symmetry algebras via exact determining equations.

An unknown vector field S = sum_i a_i d/du_i is a symmetry of the
distribution exactly when the six membership residuals of [S, X1] and
[S, X2] vanish.  The residuals are linear in S, so restricting the a_i to a
finite function class turns the condition into a homogeneous exact linear
system: one row per (residual, monomial, atom) key, one column per ansatz
coefficient.  The nullspace dimension is the dimension of the symmetry space
inside the ansatz class, and every nullspace vector reassembles into a field
that is re-verified symbolically.

The ansatz class is polynomial coefficients of bounded total degree,
optionally multiplied by rational powers y2^q (offsets) and by exponentials
exp(rho*x) (rates).  Rates matter because for the quadratic equations
z' = y2^2 + r1*y1^2 + r2*y^2 the one-parameter family

    g(x) d/dy + g' d/dy1 + g'' d/dy2 + (2 g'' y1 + (2 r1 g' - 2 g''') y) d/dz

is a symmetry iff g'''' - r1 g'' + r2 g = 0, so the symmetry fields carry
exp(lambda*x) factors for the roots lambda of lambda^4 - r1 lambda^2 + r2.
When those roots are rational the full algebra lives in the exact expression
class and the solver finds it; rates are auto-detected from the
characteristic polynomial (see exp_rates_for).
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .charts import J20
from .expr import Expr, PowerAtom, ExpAtom, mono_from_dict
from .fields import (Distribution2, MongeEquation, VectorField,
                     distribution_from_monge, is_symmetry)
from .linalg import rows_to_integer, sparse_nullspace
from .rationals import exact_pow


@dataclass(frozen=True)
class AnsatzSpec:
    """Function class for the unknown field's coefficients.

    degree: total-degree bound of the polynomial part (all five coordinates);
    offsets: admitted exponents q in y2^q multipliers (0 must be present);
    rates:   admitted rho in exp(rho*x) multipliers (0 must be present).
    """
    degree: int
    offsets: tuple = (Fraction(0),)
    rates: tuple = (Fraction(0),)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        offs = tuple(sorted({Fraction(q) for q in self.offsets}))
        rates = tuple(sorted({Fraction(r) for r in self.rates}))
        if Fraction(0) not in offs:
            raise ValueError("offset 0 is required")
        if Fraction(0) not in rates:
            raise ValueError("rate 0 is required")
        object.__setattr__(self, "offsets", offs)
        object.__setattr__(self, "rates", rates)


def monomials_up_to(degree: int, nvars: int):
    """Exponent tuples with total degree <= degree, ascending (degree, lex)."""
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            exps = [0] * nvars
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    seen = sorted(set(out), key=lambda e: (sum(e), e))
    return seen


@dataclass(frozen=True)
class UnknownBasis:
    """One ansatz coefficient: x^alpha * y2^q * exp(rho x) on direction d/du_i."""
    direction: int
    exponents: tuple
    offset: Fraction
    rate: Fraction

    def coefficient_expr(self) -> Expr:
        mono = mono_from_dict({i: e for i, e in enumerate(self.exponents)})
        atoms = []
        if self.offset:
            if self.offset.denominator == 1:
                mono = mono_from_dict(
                    {**dict(mono), 3: dict(mono).get(3, 0) + int(self.offset)})
            else:
                atoms.append(PowerAtom(((((3, 1),), Fraction(1)),), self.offset))
        if self.rate:
            atoms.append(ExpAtom(((((0, 1),), self.rate),)))
        return Expr.from_raw(J20, [(Fraction(1), mono, tuple(atoms))])

    def field(self) -> VectorField:
        coeffs = [Expr.zero(J20)] * 5
        coeffs[self.direction] = self.coefficient_expr()
        return VectorField(J20, tuple(coeffs))


@dataclass(frozen=True)
class Ansatz:
    spec: AnsatzSpec
    unknowns: tuple

    @property
    def size(self) -> int:
        return len(self.unknowns)

    def assemble(self, vector) -> VectorField:
        coeffs = [Expr.zero(J20) for _ in range(5)]
        for c, u in zip(vector, self.unknowns):
            if c:
                coeffs[u.direction] = coeffs[u.direction] + u.coefficient_expr().scale(c)
        return VectorField(J20, tuple(coeffs))


def build_ansatz(spec: AnsatzSpec) -> Ansatz:
    monos = monomials_up_to(spec.degree, 5)
    unknowns = []
    for rate in spec.rates:
        for offset in spec.offsets:
            for direction in range(5):
                for exps in monos:
                    unknowns.append(UnknownBasis(direction, exps, offset, rate))
    return Ansatz(spec, tuple(unknowns))


# ---------------------------------------------------------------------------
# determining system
# ---------------------------------------------------------------------------

@dataclass
class DeterminingSystem:
    distribution: Distribution2
    ansatz: Ansatz
    rows: dict  # (residual_id, monomial, atoms) -> {column: Fraction}

    @property
    def n_unknowns(self) -> int:
        return self.ansatz.size

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def provenance(self, key):
        names = ("[S,X1]: dy - y1 dx", "[S,X1]: dy1 - y2 dx", "[S,X1]: dz - F dx",
                 "[S,X2]: dy - y1 dx", "[S,X2]: dy1 - y2 dx", "[S,X2]: dz - F dx")
        return names[key[0]], key[1], key[2]


def _residuals_for_unknown(u: UnknownBasis, F: Expr, f_partials, y1, y2):
    """The six membership residual expressions of the basis field u."""
    a = u.coefficient_expr()
    i = u.direction
    zero = Expr.zero(J20)
    da_dy2 = a.diff("y2")
    w = -da_dy2  # [E, X1] is -da/dy2 on direction i
    ra1 = ra2 = ra3 = zero
    if i == 0:
        ra1 = -(y1 * w)
        ra2 = -(y2 * w)
        ra3 = -(F * w)
    elif i == 1:
        ra1 = w
    elif i == 2:
        ra2 = w
    elif i == 4:
        ra3 = w
    b = a.diff("x") + y1 * a.diff("y") + y2 * a.diff("y1") + F * a.diff("z")
    # components of [E, X2]
    vx = -b if i == 0 else zero
    vy = (a if i == 2 else zero) - (b if i == 1 else zero)
    vy1 = (a if i == 3 else zero) - (b if i == 2 else zero)
    vy2 = -b if i == 3 else zero
    vz = a * f_partials[i] - (b if i == 4 else zero)
    rb1 = vy - y1 * vx
    rb2 = vy1 - y2 * vx
    rb3 = vz - F * vx
    return (ra1, ra2, ra3, rb1, rb2, rb3)


def _scatter_chunk(args):
    distribution, unknowns, start = args
    F = distribution.equation.F
    y1 = Expr.coordinate(J20, "y1")
    y2 = Expr.coordinate(J20, "y2")
    f_partials = tuple(F.diff(c) for c in J20.coords)
    entries = []
    for off, u in enumerate(unknowns):
        col = start + off
        residuals = _residuals_for_unknown(u, F, f_partials, y1, y2)
        for rid, expr in enumerate(residuals):
            for term in expr.terms:
                entries.append(((rid, term.monomial, term.atoms), col, term.coefficient))
    return entries


def worker_count() -> int:
    raw = os.environ.get("MONGESYM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def determining_equations(distribution: Distribution2, ansatz: Ansatz) -> DeterminingSystem:
    """Expand the six residuals over the ansatz and collect exact linear rows."""
    unknowns = ansatz.unknowns
    workers = worker_count()
    if workers > 1 and len(unknowns) >= 64:
        chunk = (len(unknowns) + workers - 1) // workers
        jobs = [(distribution, unknowns[s:s + chunk], s)
                for s in range(0, len(unknowns), chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scatter_chunk, jobs))
        all_entries = [e for chunk_entries in results for e in chunk_entries]
    else:
        all_entries = _scatter_chunk((distribution, unknowns, 0))
    rows: dict = {}
    for key, col, coeff in all_entries:
        row = rows.setdefault(key, {})
        row[col] = row.get(col, Fraction(0)) + coeff
    for key in list(rows):
        rows[key] = {c: v for c, v in rows[key].items() if v}
        if not rows[key]:
            del rows[key]
    return DeterminingSystem(distribution, ansatz, rows)


def nullspace(system: DeterminingSystem):
    """Exact nullspace (dimension, integer basis vectors) of the system."""
    int_rows = rows_to_integer(system.rows.values())
    rank, basis = sparse_nullspace(int_rows, system.n_unknowns)
    return system.n_unknowns - rank, basis


# ---------------------------------------------------------------------------
# rate auto-detection for quadratic equations
# ---------------------------------------------------------------------------

def _quadratic_profile(F: Expr):
    """(p, q, s) when F = p*y2^2 + q*y1^2 + s*y^2 with p != 0, else None."""
    p = q = s = Fraction(0)
    for t in F.terms:
        if t.atoms:
            return None
        m = dict(t.monomial)
        if m == {3: 2}:
            p = t.coefficient
        elif m == {2: 2}:
            q = t.coefficient
        elif m == {1: 2}:
            s = t.coefficient
        else:
            return None
    return (p, q, s) if p else None


def exp_rates_for(m: MongeEquation):
    """Candidate exp rates {0, ±a, ±b, ±(a+b), ±(a-b)} from the roots of the
    characteristic polynomial p t^4 - q t^2 + s, when they are rational."""
    prof = _quadratic_profile(m.F)
    rates = {Fraction(0)}
    if prof is None:
        return tuple(sorted(rates))
    p, q, s = prof
    disc = q * q - 4 * p * s
    rdisc = exact_pow(disc, Fraction(1, 2)) if disc >= 0 else None
    if rdisc is None:
        return tuple(sorted(rates))
    for branch in (1, -1):
        lam2 = (q + branch * rdisc) / (2 * p)
        if lam2 <= 0:
            continue
        lam = exact_pow(lam2, Fraction(1, 2))
        if lam is None:
            continue
        rates.update({lam, -lam})
    pos = sorted(r for r in rates if r > 0)
    if len(pos) == 2:
        a, b = pos
        rates.update({a + b, -(a + b), b - a, a - b})
    elif len(pos) == 1:
        rates.update({2 * pos[0], -2 * pos[0]})
    return tuple(sorted(rates))


# ---------------------------------------------------------------------------
# solve reports
# ---------------------------------------------------------------------------

@dataclass
class SolveReport:
    equation: str
    offsets: tuple
    rates: tuple
    table: list          # [{degree, unknowns, rows, dimension}]
    stabilized: bool
    stabilized_at: object
    dimension: int
    basis: list          # VectorFields at the top degree
    verified: bool
    timings: dict

    def to_json(self, include_timings: bool = False) -> dict:
        out = {
            "equation": self.equation,
            "offsets": [str(q) for q in self.offsets],
            "rates": [str(r) for r in self.rates],
            "table": self.table,
            "stabilized": self.stabilized,
            "stabilized_at": self.stabilized_at,
            "dimension": self.dimension,
            "basis": [f.to_json() for f in self.basis],
            "verified": self.verified,
        }
        if include_timings:
            out["timings"] = self.timings
        return out

    def to_text(self) -> str:
        lines = [f"equation: {self.equation}",
                 f"offsets: {', '.join(str(q) for q in self.offsets)}",
                 f"rates: {', '.join(str(r) for r in self.rates)}",
                 "degree  unknowns  rows  dimension"]
        for row in self.table:
            lines.append(f"{row['degree']:>6}  {row['unknowns']:>8}  {row['rows']:>4}  {row['dimension']:>9}")
        if self.stabilized:
            lines.append(f"stabilized (heuristic) at degree {self.stabilized_at}: dimension {self.dimension}")
        else:
            lines.append(f"not stabilized within the degree bound; last dimension {self.dimension}")
        lines.append(f"basis fields verified symbolically: {self.verified}")
        return "\n".join(lines)


def symmetry_dimension(m: MongeEquation, max_degree: int,
                       offsets=(Fraction(0),), rates=None,
                       equation_label: str = "", verify: bool = True,
                       progress=None) -> SolveReport:
    """Dimension table for degrees 0..max_degree plus the top-degree basis.

    Stabilization (two consecutive degrees with equal dimension) is a
    reporting heuristic, not a completeness theorem for the ansatz class.
    An optional progress callback receives one line per finished degree.
    """
    if rates is None:
        rates = exp_rates_for(m)
    distribution = distribution_from_monge(m)
    table = []
    timings = {}
    basis_fields: list = []
    last_dim = None
    stabilized = False
    stabilized_at = None
    top_vectors: list = []
    top_ansatz = None
    for degree in range(max_degree + 1):
        t0 = time.perf_counter()
        ansatz = build_ansatz(AnsatzSpec(degree, tuple(offsets), tuple(rates)))
        system = determining_equations(distribution, ansatz)
        dim, vectors = nullspace(system)
        timings[str(degree)] = round(time.perf_counter() - t0, 3)
        table.append({"degree": degree, "unknowns": ansatz.size,
                      "rows": system.n_rows, "dimension": dim})
        if progress:
            progress(f"degree {degree}: dimension {dim} "
                     f"({ansatz.size} unknowns, {system.n_rows} rows)")
        if last_dim is not None and dim < last_dim:
            raise AssertionError("dimension must be monotone in the degree")
        if last_dim is not None and dim == last_dim and not stabilized:
            stabilized = True
            stabilized_at = degree
        last_dim = dim
        top_vectors = vectors
        top_ansatz = ansatz
    basis_fields = [top_ansatz.assemble(v) for v in top_vectors]
    verified = True
    if verify:
        for f in basis_fields:
            if not is_symmetry(f, distribution).ok:
                verified = False
    return SolveReport(
        equation=equation_label or str(m),
        offsets=tuple(offsets),
        rates=tuple(rates),
        table=table,
        stabilized=stabilized,
        stabilized_at=stabilized_at,
        dimension=last_dim if last_dim is not None else 0,
        basis=basis_fields,
        verified=verified,
        timings=timings,
    )


# ---------------------------------------------------------------------------
# the solvability comparison behind maximality
# ---------------------------------------------------------------------------

@dataclass
class MaximalityReport:
    six_dim_solvable: bool
    candidates: list  # [{label, dimension, solvable}]
    verdict: str

    def to_json(self) -> dict:
        return {"six_dim_solvable": self.six_dim_solvable,
                "candidates": self.candidates,
                "verdict": self.verdict}


def maximality_argument(six_presentation, candidate_presentations) -> MaximalityReport:
    """Check that every 7-dimensional candidate algebra is solvable while the
    6-dimensional algebra is not, so the latter embeds in none of them."""
    from .liealg import is_solvable
    six_solvable = is_solvable(six_presentation)
    rows = []
    ok = not six_solvable
    for label, p in candidate_presentations:
        if p.dimension != 7:
            raise ValueError(f"candidate {label} is {p.dimension}-dimensional, not 7")
        solv = is_solvable(p)
        rows.append({"label": label, "dimension": p.dimension, "solvable": solv})
        ok = ok and solv
    verdict = ("the 6-dimensional non-solvable algebra embeds in none of the "
               "7-dimensional (solvable) algebras; it is maximal"
               if ok else "inconclusive")
    return MaximalityReport(six_solvable, rows, verdict)
