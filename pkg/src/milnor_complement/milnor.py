"""The Milnor polynomial ``f_I = sum_i y_i f_i`` of an ideal and its report.

For ``I = (f_1, ..., f_r)`` in ``n`` variables, ``f_I`` lives on
``C^(n+r)``.  Its Milnor fibre is homotopy equivalent to the complement
``C(I)`` of the zero set of ``I`` near the origin, and its geometric
monodromy is trivial (rotate the ``y`` coordinates).  This module emits
``f_I``, finds weights making it quasi-homogeneous, and attaches the
complement invariants as the Milnor-fibre invariants.

Each ``y_i`` multiplies the full generator ``f_i(x_1, ..., x_n)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import InputError, Monomial, MonomialIdeal, complement_complex, minimal_generators
from .complement import METHODS, ComplementReport, Connectivity, complement_report
from .dga import FormalityReport, build_model, formality_probe
from .homology import InvariantViolation

FIBRE_CONTRACT = "Milnor fibre is homotopy equivalent to the complement C(I)"
MONODROMY = "trivial"

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Generator:
    """One generator ``f_i`` as a list of ``(coefficient, x-exponents)``."""

    terms: tuple[tuple[Fraction, Exponents], ...]
    n: int

    @classmethod
    def from_monomial(cls, m: Monomial) -> "Generator":
        exps = [0] * m.n
        for i, e in m.exponents:
            exps[i - 1] = e
        return cls(((Fraction(1), tuple(exps)),), m.n)

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {sum(w * e for w, e in zip(weights, exps)) for _, exps in self.terms}

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and self.terms[0][0] == 1


_SYMBOL = re.compile(r"[A-Za-z_]\w*")


def parse_polynomial(text: str, n: int | None = None) -> Generator:
    """Parse a polynomial in ``x1..xn`` with integer or rational coefficients."""
    import sympy

    names = set(_SYMBOL.findall(text))
    bad = [s for s in names if not re.fullmatch(r"x\d+", s)]
    if bad:
        raise InputError(f"unknown symbol {bad[0]!r} in generator {text!r}")
    indices = sorted(int(s[1:]) for s in names)
    if indices and indices[0] < 1:
        raise InputError("variable indices start at 1")
    if n is None:
        n = indices[-1] if indices else 1
    elif indices and indices[-1] > n:
        raise InputError(f"generator {text!r} uses x{indices[-1]} but n={n}")
    symbols = sympy.symbols(f"x1:{n + 1}")
    local = {f"x{i + 1}": s for i, s in enumerate(symbols)}
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=local)
        poly = sympy.Poly(sympy.expand(expr), *symbols, domain="QQ")
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as exc:
        raise InputError(f"cannot parse polynomial {text!r}: {exc}") from exc
    if poly.is_zero:
        raise InputError(f"generator {text!r} is zero")
    terms = tuple(
        (Fraction(int(c.numerator), int(c.denominator)), tuple(int(e) for e in exps))
        for exps, c in poly.terms()
    )
    return Generator(terms, n)


def _format_x(exps: Exponents) -> str:
    return "*".join(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e)


@dataclass
class PolynomialExpr:
    """``sum_i y_i f_i`` on ``x1..xn, y1..yr``; terms are ``(coeff, x-exps, y-exps)``."""

    n: int
    generators: list[Generator]

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def variables(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.n + 1)] + [f"y{i}" for i in range(1, self.r + 1)]

    @property
    def terms(self) -> list[tuple[Fraction, Exponents, Exponents]]:
        out = []
        for i, g in enumerate(self.generators):
            y = tuple(int(k == i) for k in range(self.r))
            out += [(c, x, y) for c, x in g.terms]
        return out

    def is_linear_in_y(self) -> bool:
        for g_index in range(self.r):
            seen = [t for t in self.terms if t[2][g_index]]
            if not seen:
                return False
        return all(sum(y) == 1 for _, _, y in self.terms)

    def __str__(self) -> str:
        pieces = []
        for i, g in enumerate(self.generators, 1):
            if g.is_monomial:
                body = _format_x(g.terms[0][1])
                pieces.append(f"y{i}*{body}" if body else f"y{i}")
                continue
            inner = []
            for c, x in g.terms:
                mono = _format_x(x)
                if not mono:
                    inner.append(str(c))
                elif c == 1:
                    inner.append(mono)
                elif c == -1:
                    inner.append("-" + mono)
                else:
                    inner.append(f"{c}*{mono}")
            pieces.append(f"y{i}*(" + " + ".join(inner).replace("+ -", "- ") + ")")
        return " + ".join(pieces)

    def to_json(self) -> dict:
        return {
            "variables": self.variables,
            "terms": [
                {
                    "coefficient": str(c),
                    "monomial": {
                        **{f"x{i + 1}": e for i, e in enumerate(x) if e},
                        **{f"y{i + 1}": e for i, e in enumerate(y) if e},
                    },
                }
                for c, x, y in self.terms
            ],
        }


def _as_generators(gens, n: int | None) -> tuple[list[Generator], int]:
    if isinstance(gens, MonomialIdeal):
        return [Generator.from_monomial(g) for g in gens.generators], gens.n
    items = list(gens)
    if items and all(isinstance(g, Monomial) for g in items):
        n = items[0].n
        return [Generator.from_monomial(g) for g in items], n
    if n is None:
        idx = [int(s[1:]) for g in items for s in re.findall(r"x\d+", str(g))]
        n = max(idx, default=1)
    out = [g if isinstance(g, Generator) else parse_polynomial(str(g), n) for g in items]
    return out, n


def milnor_polynomial(gens, n: int | None = None) -> PolynomialExpr:
    """``f_I = sum_i y_i f_i``; accepts an ideal, monomials or polynomial strings.

    Generator order is kept: ``y_i`` pairs with the ``i``-th generator.
    """
    generators, n = _as_generators(gens, n)
    if not generators:
        raise InputError("the Milnor polynomial needs at least one generator")
    return PolynomialExpr(n, generators)


@dataclass
class WeightSystem:
    x_weights: list[int]
    y_weights: list[int]
    total_degree: int

    def check(self, f: PolynomialExpr) -> bool:
        w = self.x_weights + self.y_weights
        return all(
            sum(a * e for a, e in zip(w, x + y)) == self.total_degree for _, x, y in f.terms
        )

    def to_json(self) -> dict:
        return {"x": self.x_weights, "y": self.y_weights, "total_degree": self.total_degree}


def quasi_homogeneous_weights(gens, x_weights: Sequence[int] | None = None, total_degree: int | None = None,
                              n: int | None = None) -> WeightSystem:
    """Weights ``w(y_i) = d - deg_w(f_i)`` making ``f_I`` quasi-homogeneous.

    The default ``d`` is one more than the largest generator degree, the
    smallest choice keeping every ``y`` weight positive.
    """
    generators, n = _as_generators(gens, n)
    x_weights = list(x_weights) if x_weights is not None else [1] * n
    if len(x_weights) != n or any(w < 1 for w in x_weights):
        raise InputError(f"need {n} positive x-weights, got {x_weights}")
    degrees = []
    for i, g in enumerate(generators, 1):
        ds = g.weighted_degrees(x_weights)
        if len(ds) != 1:
            raise InputError(f"generator {i} is not quasi-homogeneous for weights {x_weights}")
        degrees.append(ds.pop())
    top = max(degrees)
    if total_degree is None:
        total_degree = top + 1
    elif total_degree <= top:
        raise InputError(f"total degree {total_degree} must exceed the largest generator degree {top}")
    return WeightSystem(x_weights, [total_degree - d for d in degrees], total_degree)


@dataclass
class MilnorReport:
    polynomial: PolynomialExpr
    weights: WeightSystem | None
    complement: ComplementReport | None
    formality: FormalityReport | None
    model: object = field(default=None, repr=False)
    notes: list[str] = field(default_factory=list)

    @property
    def simply_connected(self) -> Connectivity | None:
        return self.complement.simply_connected if self.complement else None

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "polynomial": str(self.polynomial),
            "polynomial_terms": self.polynomial.to_json(),
            "ambient_dimension": self.polynomial.n + self.polynomial.r,
            "weights": self.weights.to_json() if self.weights else None,
            "fibre": FIBRE_CONTRACT,
            "monodromy": MONODROMY,
            "milnor_fibre_homology": None,
            "simply_connected": None,
            "formality": None,
            "notes": self.notes,
        }
        if self.complement:
            comp = self.complement.to_json()
            out["milnor_fibre_homology"] = comp["homology"]
            out["betti"] = comp["betti"]
            out["simply_connected"] = comp["simply_connected"]
            out["circle_factor"] = comp["circle_factor"]
            out["methods"] = list(comp["methods"])
        if self.formality:
            out["formality"] = {
                "verdict": self.formality.message,
                "degree_cap": self.formality.degree_cap,
                "triples_checked": self.formality.triples_checked,
                "witness": self.formality.witness.to_json(self.model) if self.formality.witness else None,
            }
        return out

    def text(self) -> str:
        p = self.polynomial
        lines = [f"f = {p}", f"variables: {', '.join(p.variables)} (C^{p.n + p.r})"]
        if self.weights:
            w = self.weights
            lines.append(f"weights: x = {w.x_weights}, y = {w.y_weights}, total degree {w.total_degree}")
        lines.append(f"fibre: {FIBRE_CONTRACT}")
        lines.append(f"monodromy: {MONODROMY}")
        if self.complement:
            lines.append("Milnor fibre homology (via the complement):")
            lines += ["  " + s for s in self.complement.homology.lines()]
            lines.append(f"simply connected: {self.complement.simply_connected.value}")
            cf = self.complement.circle_factor
            lines.append("circle factor: " + ("none" if cf is None else " ".join(map(str, cf))))
        if self.formality:
            lines.append(f"formality: {self.formality.message}")
            if self.formality.witness:
                lines += ["  " + s for s in self.formality.witness.text(self.model).splitlines()]
        lines += self.notes
        return "\n".join(lines)


def milnor_report(gens, n: int | None = None, x_weights: Sequence[int] | None = None,
                  total_degree: int | None = None, methods: Sequence[str] = METHODS,
                  degree_cap: int | None = None, threads: int = 1, formality: bool = True) -> MilnorReport:
    """Polynomial, weights and, for square-free monomial ideals, the
    complement invariants read as Milnor-fibre invariants."""
    f = milnor_polynomial(gens, n)
    notes = []
    try:
        weights = quasi_homogeneous_weights(f.generators, x_weights, total_degree, f.n)
    except InputError as exc:
        if total_degree is not None or x_weights is not None:
            raise
        weights = None
        notes.append(f"no weight system: {exc}")
    if weights is not None and not weights.check(f):
        raise InvariantViolation("weight system does not make every term the same degree")

    complement = probe = model = None
    if all(g.is_monomial for g in f.generators) and all(e <= 1 for g in f.generators for e in g.terms[0][1]):
        ideal = _to_ideal(f)
        complement = complement_report(ideal, methods, threads)
        if formality:
            model = build_model(complement_complex(ideal))
            probe = formality_probe(model, degree_cap, threads)
    else:
        notes.append("invariants are computed for square-free monomial ideals only")
    return MilnorReport(f, weights, complement, probe, model, notes)


def _to_ideal(f: PolynomialExpr) -> MonomialIdeal:
    monomials = [
        Monomial.from_exponents({i + 1: e for i, e in enumerate(g.terms[0][1])}, f.n) for g in f.generators
    ]
    return minimal_generators(monomials, f.n)
