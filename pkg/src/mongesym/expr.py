"""Exact symbolic expressions in canonical normal form.

An expression is a finite sum of terms

    coefficient * monomial * atom * atom * ...

where the coefficient is a Fraction, the monomial maps chart coordinates to
integer exponents, and the atoms are fractional powers of polynomials,
exponentials of polynomials, or logarithms of polynomials.  The constructor
normalizes aggressively (merging equal power bases, folding integer
exponents, absorbing single-coordinate powers) so that equality of canonical
forms is decidable syntactically: an expression is zero iff its term list is
empty.

Monomial exponents may be negative (y2^(-1) arises from products such as
y2^(1/3) * y2^(-4/3) and from differentiating ln); evaluation guards against
vanishing denominators.

Simplifications outside the supported fragment are intentionally not
attempted: (4*y2)^(1/3) is not rewritten as 4^(1/3)*y2^(1/3) because the
content 4^(1/3) is irrational, and no polynomial factorization is performed.
Zero-testing is complete on the fragment actually exercised here (all bases
that occur are primitive after content extraction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .charts import Chart, require_same_chart
from .rationals import exact_pow

Mono = tuple  # tuple[(coord_index, exponent), ...] sorted by index, exponent != 0
Poly = tuple  # tuple[(Mono, Fraction), ...] in canonical descending term order

ONE_MONO: Mono = ()


class ExprError(ValueError):
    pass


class NonRationalPowerError(ExprError):
    """A rational power with an irrational value was requested exactly."""


class EvaluationError(ExprError):
    """Exact substitution hit an atom it cannot evaluate (exp/ln/irrational)."""


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_from_dict(d: Mapping[int, int]) -> Mono:
    return tuple(sorted((i, e) for i, e in d.items() if e))

def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        e2 = d.get(i, 0) + e
        if e2:
            d[i] = e2
        else:
            del d[i]
    return tuple(sorted(d.items()))

def mono_pow(m: Mono, k: int) -> Mono:
    if k == 0:
        return ONE_MONO
    return tuple((i, e * k) for i, e in m)

def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)

def mono_key(m: Mono, nvars: int):
    """Graded-lex key (total degree first, then exponent vector)."""
    dense = [0] * nvars
    for i, e in m:
        dense[i] = e
    return (mono_degree(m), tuple(dense))


# ---------------------------------------------------------------------------
# atom-free polynomials (used for power bases and exp/ln arguments)
# ---------------------------------------------------------------------------

def _poly_sorted(d: dict, nvars: int) -> Poly:
    items = [(m, c) for m, c in d.items() if c]
    items.sort(key=lambda mc: mono_key(mc[0], nvars), reverse=True)
    return tuple(items)

def poly_add(a: Poly, b: Poly, nvars: int) -> Poly:
    d = dict(a)
    for m, c in b:
        c2 = d.get(m, Fraction(0)) + c
        if c2:
            d[m] = c2
        else:
            d.pop(m, None)
    return _poly_sorted(d, nvars)

def poly_scale(a: Poly, s: Fraction) -> Poly:
    if s == 0:
        return ()
    return tuple((m, c * s) for m, c in a)

def poly_mul(a: Poly, b: Poly, nvars: int) -> Poly:
    d: dict = {}
    for m1, c1 in a:
        for m2, c2 in b:
            m = mono_mul(m1, m2)
            c = d.get(m, Fraction(0)) + c1 * c2
            if c:
                d[m] = c
            else:
                d.pop(m, None)
    return _poly_sorted(d, nvars)

def poly_pow(a: Poly, k: int, nvars: int) -> Poly:
    out: Poly = ((ONE_MONO, Fraction(1)),)
    for _ in range(k):
        out = poly_mul(out, a, nvars)
    return out

def poly_diff(a: Poly, idx: int, nvars: int) -> Poly:
    d: dict = {}
    for m, c in a:
        for j, e in m:
            if j == idx:
                m2 = mono_mul(m, ((idx, -1),))
                c2 = d.get(m2, Fraction(0)) + c * e
                if c2:
                    d[m2] = c2
                else:
                    d.pop(m2, None)
    return _poly_sorted(d, nvars)

def poly_eval(a: Poly, values) -> Fraction:
    total = Fraction(0)
    for m, c in a:
        v = c
        for i, e in m:
            base = values[i]
            if e < 0 and base == 0:
                raise ZeroDivisionError("negative power of zero in evaluation")
            v *= Fraction(base) ** e
        total += v
    return total

def poly_key(a: Poly, nvars: int):
    return tuple((mono_key(m, nvars), c) for m, c in a)

POLY_ONE: Poly = ((ONE_MONO, Fraction(1)),)


def _poly_content_split(base: Poly, nvars: int):
    """Split base into sign * content * common_monomial * primitive_part."""
    union: set = set()
    for m, _ in base:
        union.update(i for i, _ in m)
    common = {}
    for i in union:
        e = min(dict(m).get(i, 0) for m, _ in base)
        if e:
            common[i] = e
    m_c = mono_from_dict(common)
    num_gcd = 0
    den_lcm = 1
    for _, c in base:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    inv_m = mono_pow(m_c, -1)
    reduced = tuple((mono_mul(m, inv_m), c / content) for m, c in base)
    sign = 1 if reduced[0][1] > 0 else -1
    if sign < 0:
        reduced = tuple((m, -c) for m, c in reduced)
    return sign, content, m_c, reduced


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerAtom:
    base: Poly
    exponent: Fraction

@dataclass(frozen=True)
class ExpAtom:
    argument: Poly

@dataclass(frozen=True)
class LnAtom:
    argument: Poly

Atom = Union[PowerAtom, ExpAtom, LnAtom]


def _unit_coord_index(base: Poly):
    """Coordinate index when the base is a bare coordinate, else None."""
    if len(base) == 1:
        m, c = base[0]
        if c == 1 and len(m) == 1 and m[0][1] == 1:
            return m[0][0]
    return None

def _coord_base(idx: int) -> Poly:
    return ((((idx, 1),), Fraction(1)),)

def atom_sort_key(atom: Atom, nvars: int):
    if isinstance(atom, PowerAtom):
        return (0, poly_key(atom.base, nvars), atom.exponent)
    if isinstance(atom, ExpAtom):
        return (1, poly_key(atom.argument, nvars), Fraction(0))
    return (2, poly_key(atom.argument, nvars), Fraction(0))


# ---------------------------------------------------------------------------
# terms and normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    coefficient: Fraction
    monomial: Mono
    atoms: tuple

    def key(self):
        return (self.monomial, self.atoms)


def _power_parts(base: Poly, q: Fraction, nvars: int):
    """Decompose base**q into (rational_factor, coord_exponents, atoms, poly_factors).

    coord_exponents maps coordinate index -> Fraction exponent contribution;
    poly_factors are expanded polynomials to be multiplied into the carrying
    term (from non-negative integer powers of multi-term bases).
    """
    if not base:
        if q > 0:
            return Fraction(0), {}, [], []
        raise ExprError("zero raised to a non-positive power")
    coord: dict = {}
    if len(base) == 1:
        m, c = base[0]
        if q.denominator == 1:
            n = int(q)
            for i, e in m:
                coord[i] = coord.get(i, Fraction(0)) + e * n
            return c ** n, coord, [], []
        cf = exact_pow(c, q)
        if cf is not None:
            for i, e in m:
                coord[i] = coord.get(i, Fraction(0)) + e * q
            return cf, coord, [], []
        if not m:
            raise NonRationalPowerError(f"{c}^({q}) is not rational")
        sign_factor = Fraction(1)
        c_kept = c
        if c < 0 and q.denominator % 2 == 1:
            sign_factor = Fraction(-1) if q.numerator % 2 else Fraction(1)
            c_kept = -c
        return sign_factor, coord, [PowerAtom(((m, c_kept),), q)], []
    sign, content, m_c, primitive = _poly_content_split(base, nvars)
    if q.denominator == 1:
        n = int(q)
        factor = Fraction(sign) ** n * content ** n
        for i, e in m_c:
            coord[i] = coord.get(i, Fraction(0)) + e * n
        if n > 0:
            return factor, coord, [], [poly_pow(primitive, n, nvars)]
        # negative integer power of an irreducible-for-us polynomial: kept as
        # an atom (closure needed by the ln chain rule)
        return factor, coord, [PowerAtom(primitive, q)], []
    for i, e in m_c:
        coord[i] = coord.get(i, Fraction(0)) + e * q
    sc = exact_pow(Fraction(sign) * content, q)
    if sc is not None:
        return sc, coord, [PowerAtom(primitive, q)], []
    sign_factor = Fraction(1)
    kept_scale = Fraction(sign) * content
    if sign < 0 and q.denominator % 2 == 1:
        sign_factor = Fraction(-1) if q.numerator % 2 else Fraction(1)
        kept_scale = content
    return sign_factor, coord, [PowerAtom(poly_scale(primitive, kept_scale), q)], []


def _canonical_term(coeff: Fraction, mono: Mono, atoms: Iterable, nvars: int):
    """Return (coeff, mono, atoms, poly_factors); coeff 0 means the term died."""
    coord: dict = {i: Fraction(e) for i, e in mono}
    powers: dict = {}
    exp_arg: Poly = ()
    lns: list = []
    polys: list = []
    for atom in atoms:
        if isinstance(atom, PowerAtom):
            if atom.exponent == 0:
                continue
            idx = _unit_coord_index(atom.base)
            if idx is not None:
                coord[idx] = coord.get(idx, Fraction(0)) + atom.exponent
            else:
                q = powers.get(atom.base, Fraction(0)) + atom.exponent
                if q:
                    powers[atom.base] = q
                else:
                    powers.pop(atom.base, None)
        elif isinstance(atom, ExpAtom):
            exp_arg = poly_add(exp_arg, atom.argument, nvars)
        elif isinstance(atom, LnAtom):
            if not atom.argument:
                raise ExprError("ln(0) is undefined")
            if atom.argument == POLY_ONE:
                return Fraction(0), ONE_MONO, (), []
            lns.append(atom)
        else:  # pragma: no cover
            raise TypeError(f"unknown atom {atom!r}")
    out_atoms: list = []
    pending = powers
    while pending:
        decomposed: dict = {}
        identity = True
        for base in sorted(pending, key=lambda b: poly_key(b, nvars)):
            q = pending[base]
            cf, coord_add, atoms_o, polys_o = _power_parts(base, q, nvars)
            if cf == 0:
                return Fraction(0), ONE_MONO, (), []
            coeff *= cf
            polys.extend(polys_o)
            for i, e in coord_add.items():
                coord[i] = coord.get(i, Fraction(0)) + e
            if not (cf == 1 and not coord_add and not polys_o
                    and len(atoms_o) == 1
                    and atoms_o[0].base == base and atoms_o[0].exponent == q):
                identity = False
            for a in atoms_o:
                idx = _unit_coord_index(a.base)
                if idx is not None:
                    coord[idx] = coord.get(idx, Fraction(0)) + a.exponent
                    identity = False
                    continue
                q2 = decomposed.get(a.base, Fraction(0)) + a.exponent
                if q2:
                    decomposed[a.base] = q2
                else:
                    decomposed.pop(a.base, None)
        if identity and len(decomposed) == len(pending):
            for b in sorted(decomposed, key=lambda b: poly_key(b, nvars)):
                out_atoms.append(PowerAtom(b, decomposed[b]))
            break
        pending = decomposed
    mono_out: dict = {}
    for i in sorted(coord):
        e = coord[i]
        if e == 0:
            continue
        if e.denominator == 1:
            mono_out[i] = int(e)
        else:
            out_atoms.append(PowerAtom(_coord_base(i), e))
    if exp_arg:
        out_atoms.append(ExpAtom(exp_arg))
    out_atoms.extend(lns)
    out_atoms.sort(key=lambda a: atom_sort_key(a, nvars))
    return coeff, mono_from_dict(mono_out), tuple(out_atoms), polys


def _normalize(chart: Chart, raw) -> tuple:
    nvars = len(chart)
    acc: dict = {}
    stack = list(raw)
    while stack:
        coeff, mono, atoms = stack.pop()
        if coeff == 0:
            continue
        coeff, mono, atoms, polys = _canonical_term(coeff, mono, atoms, nvars)
        if coeff == 0:
            continue
        if polys:
            prod = polys[0]
            for p in polys[1:]:
                prod = poly_mul(prod, p, nvars)
            for m2, c2 in prod:
                stack.append((coeff * c2, mono_mul(mono, m2), atoms))
            continue
        key = (mono, atoms)
        c2 = acc.get(key, Fraction(0)) + coeff
        if c2:
            acc[key] = c2
        else:
            acc.pop(key, None)
    terms = [Term(c, m, a) for (m, a), c in acc.items()]
    terms.sort(
        key=lambda t: (mono_key(t.monomial, nvars),
                       tuple(atom_sort_key(a, nvars) for a in t.atoms)),
        reverse=True,
    )
    return tuple(terms)


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    chart: Chart
    terms: tuple

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_raw(chart: Chart, raw) -> "Expr":
        return Expr(chart, _normalize(chart, raw))

    @staticmethod
    def zero(chart: Chart) -> "Expr":
        return Expr(chart, ())

    @staticmethod
    def constant(chart: Chart, value) -> "Expr":
        value = Fraction(value)
        if value == 0:
            return Expr.zero(chart)
        return Expr(chart, (Term(value, ONE_MONO, ()),))

    @staticmethod
    def coordinate(chart: Chart, name: str) -> "Expr":
        idx = chart.index(name)
        return Expr(chart, (Term(Fraction(1), ((idx, 1),), ()),))

    @staticmethod
    def from_poly(chart: Chart, poly: Poly) -> "Expr":
        return Expr.from_raw(chart, [(c, m, ()) for m, c in poly])

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Expr") -> "Expr":
        require_same_chart(self, other)
        return Expr.from_raw(
            self.chart,
            [(t.coefficient, t.monomial, t.atoms) for t in self.terms]
            + [(t.coefficient, t.monomial, t.atoms) for t in other.terms],
        )

    def __sub__(self, other: "Expr") -> "Expr":
        return self + (-other)

    def __neg__(self) -> "Expr":
        return Expr(self.chart,
                    tuple(Term(-t.coefficient, t.monomial, t.atoms) for t in self.terms))

    def scale(self, s) -> "Expr":
        s = Fraction(s)
        if s == 0:
            return Expr.zero(self.chart)
        return Expr(self.chart,
                    tuple(Term(t.coefficient * s, t.monomial, t.atoms) for t in self.terms))

    def __mul__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        require_same_chart(self, other)
        raw = []
        for t1 in self.terms:
            for t2 in other.terms:
                raw.append((t1.coefficient * t2.coefficient,
                            mono_mul(t1.monomial, t2.monomial),
                            t1.atoms + t2.atoms))
        return Expr.from_raw(self.chart, raw)

    __rmul__ = __mul__

    def __pow__(self, exponent) -> "Expr":
        exponent = Fraction(exponent)
        if exponent.denominator == 1 and exponent >= 0:
            out = Expr.constant(self.chart, 1)
            for _ in range(int(exponent)):
                out = out * self
            return out
        return self.pow_rational(exponent)

    def pow_rational(self, exponent) -> "Expr":
        """Raise to a rational power; the base must be atom-free."""
        exponent = Fraction(exponent)
        poly = self.as_poly()
        return Expr.from_raw(self.chart,
                             [(Fraction(1), ONE_MONO, (PowerAtom(poly, exponent),))])

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def equals(self, other: "Expr") -> bool:
        require_same_chart(self, other)
        return (self - other).is_zero()

    def as_poly(self) -> Poly:
        """The expression as an atom-free polynomial; raises if atoms occur."""
        for t in self.terms:
            if t.atoms:
                raise ExprError("expression is not a polynomial (atoms present)")
            for _, e in t.monomial:
                if e < 0:
                    raise ExprError("expression is not a polynomial (negative power)")
        d = {t.monomial: t.coefficient for t in self.terms}
        return _poly_sorted(d, len(self.chart))

    def is_polynomial(self) -> bool:
        return all(not t.atoms and all(e >= 0 for _, e in t.monomial)
                   for t in self.terms)

    def coordinates_used(self) -> set:
        used = set()
        for t in self.terms:
            for i, _ in t.monomial:
                used.add(i)
            for a in t.atoms:
                poly = a.base if isinstance(a, PowerAtom) else a.argument
                for m, _ in poly:
                    for i, _ in m:
                        used.add(i)
        return used

    def total_degree(self) -> int:
        """Largest monomial degree over all terms (atoms not counted)."""
        return max((mono_degree(t.monomial) for t in self.terms), default=0)

    # -- calculus ----------------------------------------------------------

    def diff(self, coord: str) -> "Expr":
        idx = self.chart.index(coord)
        nvars = len(self.chart)
        raw = []
        for t in self.terms:
            for j, e in t.monomial:
                if j == idx:
                    raw.append((t.coefficient * e,
                                mono_mul(t.monomial, ((idx, -1),)),
                                t.atoms))
            for k, atom in enumerate(t.atoms):
                rest = t.atoms[:k] + t.atoms[k + 1:]
                if isinstance(atom, PowerAtom):
                    da = poly_diff(atom.base, idx, nvars)
                    if not da:
                        continue
                    for m2, c2 in da:
                        raw.append((t.coefficient * atom.exponent * c2,
                                    mono_mul(t.monomial, m2),
                                    rest + (PowerAtom(atom.base, atom.exponent - 1),)))
                elif isinstance(atom, ExpAtom):
                    da = poly_diff(atom.argument, idx, nvars)
                    for m2, c2 in da:
                        raw.append((t.coefficient * c2,
                                    mono_mul(t.monomial, m2),
                                    t.atoms))
                else:  # LnAtom
                    da = poly_diff(atom.argument, idx, nvars)
                    for m2, c2 in da:
                        raw.append((t.coefficient * c2,
                                    mono_mul(t.monomial, m2),
                                    rest + (PowerAtom(atom.argument, Fraction(-1)),)))
        return Expr.from_raw(self.chart, raw)

    # -- evaluation --------------------------------------------------------

    def _values_vector(self, assignment: Mapping[str, object], cast):
        missing = {self.chart.coords[i] for i in self.coordinates_used()} - set(assignment)
        if missing:
            raise EvaluationError(f"missing values for {sorted(missing)}")
        return [cast(assignment.get(c, 0)) for c in self.chart.coords]

    def substitute(self, assignment: Mapping[str, object]) -> Fraction:
        """Exact value at a rational point.

        Raises EvaluationError for exp/ln atoms (unless the argument
        evaluates to 0 resp. 1) and NonRationalPowerError when a power atom
        has an irrational value at the point.
        """
        values = self._values_vector(assignment, Fraction)
        total = Fraction(0)
        for t in self.terms:
            v = t.coefficient
            for i, e in t.monomial:
                base = values[i]
                if base == 0 and e < 0:
                    raise ZeroDivisionError(
                        f"{self.chart.coords[i]} = 0 not admissible (negative power)")
                v *= base ** e
            for atom in t.atoms:
                if isinstance(atom, PowerAtom):
                    b = poly_eval(atom.base, values)
                    p = exact_pow(b, atom.exponent)
                    if p is None:
                        raise NonRationalPowerError(
                            f"{b}^({atom.exponent}) is not rational")
                    v *= p
                elif isinstance(atom, ExpAtom):
                    a = poly_eval(atom.argument, values)
                    if a != 0:
                        raise EvaluationError(
                            "exp atom with nonzero argument has no exact rational value")
                else:
                    a = poly_eval(atom.argument, values)
                    if a != 1:
                        raise EvaluationError(
                            "ln atom with argument != 1 has no exact rational value")
                    v = Fraction(0)
            total += v
        return total

    def approx(self, assignment: Mapping[str, object]) -> float:
        """Floating-point value; used only for randomized cross-checks."""
        values = self._values_vector(assignment, float)
        total = 0.0
        for t in self.terms:
            v = float(t.coefficient)
            for i, e in t.monomial:
                v *= values[i] ** e
            for atom in t.atoms:
                if isinstance(atom, PowerAtom):
                    b = sum(float(c) * math.prod(values[i] ** e for i, e in m)
                            for m, c in atom.base)
                    q = atom.exponent
                    if b > 0:
                        v *= b ** float(q)
                    elif b == 0 and q > 0:
                        v = 0.0
                    elif b < 0 and q.denominator % 2 == 1:
                        mag = (-b) ** float(q)
                        v *= mag * (-1.0 if q.numerator % 2 else 1.0)
                    else:
                        raise EvaluationError(f"{b}^({q}) not a real value")
                elif isinstance(atom, ExpAtom):
                    a = sum(float(c) * math.prod(values[i] ** e for i, e in m)
                            for m, c in atom.argument)
                    v *= math.exp(a)
                else:
                    a = sum(float(c) * math.prod(values[i] ** e for i, e in m)
                            for m, c in atom.argument)
                    if a <= 0:
                        raise EvaluationError("ln of a non-positive value")
                    v *= math.log(a)
            total += v
        return total

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Expr({self.chart.name}: {to_text(self)})"


# ---------------------------------------------------------------------------
# deterministic printing (the output re-parses to the same canonical form)
# ---------------------------------------------------------------------------

def _exp_text(e) -> str:
    if isinstance(e, Fraction) and e.denominator == 1:
        e = int(e)
    if isinstance(e, int):
        return f"^{e}" if e >= 0 else f"^({e})"
    return f"^({e})"

def _mono_factors(m: Mono, chart: Chart):
    out = []
    for i, e in m:
        name = chart.coords[i]
        out.append(name if e == 1 else name + _exp_text(e))
    return out

def _poly_text(poly: Poly, chart: Chart) -> str:
    if not poly:
        return "0"
    pieces = []
    for n, (m, c) in enumerate(poly):
        factors = _mono_factors(m, chart)
        mag = abs(c)
        if mag != 1 or not factors:
            factors = [str(mag)] + factors
        body = "*".join(factors)
        if n == 0:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append((" + " if c > 0 else " - ") + body)
    return "".join(pieces)

def _atom_text(atom: Atom, chart: Chart) -> str:
    if isinstance(atom, PowerAtom):
        idx = _unit_coord_index(atom.base)
        if idx is not None:
            return chart.coords[idx] + _exp_text(atom.exponent)
        return "(" + _poly_text(atom.base, chart) + ")" + _exp_text(atom.exponent)
    if isinstance(atom, ExpAtom):
        return "exp(" + _poly_text(atom.argument, chart) + ")"
    return "ln(" + _poly_text(atom.argument, chart) + ")"

def to_text(expr: Expr) -> str:
    if not expr.terms:
        return "0"
    pieces = []
    for n, t in enumerate(expr.terms):
        factors = _mono_factors(t.monomial, expr.chart)
        factors += [_atom_text(a, expr.chart) for a in t.atoms]
        mag = abs(t.coefficient)
        if mag != 1 or not factors:
            factors = [str(mag)] + factors
        body = "*".join(factors)
        if n == 0:
            # a leading negative coefficient is emitted as a signed literal,
            # so a lone "-x" prints as "-1*x" and stays inside the grammar
            if t.coefficient < 0:
                if mag == 1 and len(t.monomial) + len(t.atoms) > 0:
                    body = "-1*" + body
                else:
                    body = "-" + body
            pieces.append(body)
        else:
            pieces.append((" + " if t.coefficient > 0 else " - ") + body)
    return "".join(pieces)
