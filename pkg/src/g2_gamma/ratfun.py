"""Exact scalars and Laurent rational functions in X = q**(-s)

Scalars live in the field generated over the rationals by u (with u**2 = q), the
Satake indeterminates, and any other named symbols. In symbolic mode u is the
generator and q is bound to u**2; with a numeric q, u is bound to sqrt(q).

A LaurentRational is kept in factored canonical form

    unit * X**x_power * prod(f_i ** e_i)

where every f_i is a monic irreducible polynomial in X with nonzero constant term
and canonical coefficients. Factorization in the Laurent ring is unique, so two
values are equal exactly when their canonical forms agree, and products never
need to be expanded.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations
from sympy.polys.polyerrors import PolynomialError

from g2_gamma import MalformedInputError, UnsupportedConfigurationError

log = logging.getLogger(__name__)

X = sympy.Symbol('X')
U = sympy.Symbol('u')

_PARSER_GLOBALS = {
    'Integer': sympy.Integer,
    'Rational': sympy.Rational,
    'Float': sympy.Float,
    'Symbol': sympy.Symbol,
    'sqrt': sympy.sqrt,
}

Number = Union[int, Fraction, sympy.Expr]


def _is_prime_power(value: int) -> bool:
    return value >= 2 and len(sympy.factorint(value)) == 1


@lru_cache(maxsize=65536)
def _sort_key(expr: sympy.Expr) -> tuple:
    return sympy.default_sort_key(expr)


@lru_cache(maxsize=65536)
def _canonical_scalar(expr: sympy.Expr, extension: Optional[sympy.Expr]) -> sympy.Expr:
    # sympy's Mul flattening already gives monomials a unique form
    if not expr.has(sympy.Add):
        return expr
    if extension is None:
        return sympy.cancel(expr)

    expr = sympy.radsimp(sympy.cancel(expr))
    parts = sympy.collect(sympy.expand(expr), extension, evaluate=False)
    rational = sympy.cancel(parts.pop(sympy.Integer(1), sympy.Integer(0)))
    irrational = sympy.cancel(parts.pop(extension, sympy.Integer(0)))
    if parts:
        raise MalformedInputError(f'Cannot reduce {expr} over Q({extension})')
    return rational + irrational * extension


@dataclass(frozen=True)
class SymbolRing:
    """Session configuration for the scalar field: q symbolic (None) or a prime power"""
    q_value: Optional[int] = None

    def __post_init__(self):
        if self.q_value is None:
            return
        if isinstance(self.q_value, bool) or not isinstance(self.q_value, int):
            raise MalformedInputError(f'q must be an integer prime power, not {self.q_value!r}')
        if not _is_prime_power(self.q_value):
            raise MalformedInputError(f'q must be a prime power, not {self.q_value}')

    @classmethod
    def from_option(cls, text: str) -> 'SymbolRing':
        text = str(text).strip()
        if text.lower() in ('', 'symbolic'):
            return cls()
        try:
            value = int(text)
        except ValueError:
            raise MalformedInputError(f'--q expects an integer prime power or "symbolic", not {text!r}')
        return cls(value)

    @property
    def is_symbolic(self) -> bool:
        return self.q_value is None

    @property
    def u(self) -> sympy.Expr:
        if self.is_symbolic:
            return U
        return sympy.sqrt(sympy.Integer(self.q_value))

    @property
    def q(self) -> sympy.Expr:
        if self.is_symbolic:
            return U ** 2
        return sympy.Integer(self.q_value)

    @property
    def extension(self) -> Optional[sympy.Expr]:
        """The radical adjoined to Q when q is a numeric non-square"""
        u = self.u
        if self.is_symbolic or u.is_Integer:
            return None
        return u.as_coeff_Mul()[1]

    @property
    def factor_options(self) -> dict:
        if self.extension is None:
            return {}
        return {'extension': self.extension}

    def describe(self) -> str:
        return 'symbolic' if self.is_symbolic else str(self.q_value)

    def q_power(self, exponent: Union[int, Fraction]) -> sympy.Expr:
        """q**exponent for a half-integral exponent, written through u"""
        exponent = Fraction(exponent)
        doubled = 2 * exponent
        if doubled.denominator != 1:
            raise UnsupportedConfigurationError(
                f'Only half-integral powers of q are representable, not q**({exponent})'
            )
        return self.u ** int(doubled)

    def scalar(self, value: Number) -> sympy.Expr:
        if isinstance(value, Fraction):
            value = sympy.Rational(value.numerator, value.denominator)
        expr = sympy.sympify(value)
        if expr.has(sympy.Float):
            raise MalformedInputError(f'Floating point values are not exact: {expr}')
        if X in expr.free_symbols:
            raise MalformedInputError(f'Scalar {expr} must not depend on X')
        if not self.is_symbolic and U in expr.free_symbols:
            expr = expr.subs(U, self.u)
        return _canonical_scalar(expr, self.extension)

    def parse(self, text: Union[str, int], where: str = 'value', allow_x: bool = False) -> sympy.Expr:
        """Parse a scalar (or, with allow_x, a Laurent expression) from its string form"""
        if isinstance(text, bool) or not isinstance(text, (str, int)):
            raise MalformedInputError(f'{where}: expected a string or integer, not {text!r}')
        local_dict = {'u': self.u, 'q': self.q, 'X': X}
        try:
            expr = parse_expr(str(text), local_dict=local_dict, global_dict=dict(_PARSER_GLOBALS),
                              transformations=standard_transformations)
        except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as e:
            raise MalformedInputError(f'{where}: cannot parse {text!r} ({e})')
        if not isinstance(expr, sympy.Expr):
            raise MalformedInputError(f'{where}: {text!r} is not an algebraic expression')
        if expr.has(sympy.Float):
            raise MalformedInputError(f'{where}: {text!r} is not exact; write rationals as p/q')
        if expr.has(sympy.zoo, sympy.oo, -sympy.oo, sympy.nan):
            raise MalformedInputError(f'{where}: {text!r} is not a finite value')
        if allow_x:
            return expr
        if X in expr.free_symbols:
            raise MalformedInputError(f'{where}: {text!r} must not contain X')
        return self.scalar(expr)


DEFAULT_RING = SymbolRing()


def _monic(piece: sympy.Expr, ring: SymbolRing) -> Tuple[sympy.Expr, sympy.Expr]:
    coefficients = sympy.Poly(piece, X).all_coeffs()
    lead = coefficients[0]
    degree = len(coefficients) - 1
    monic = sympy.Add(*[
        ring.scalar(coefficient / lead) * X ** (degree - i)
        for i, coefficient in enumerate(coefficients)
    ])
    return monic, lead


def _factor_piece(expr: sympy.Expr, ring: SymbolRing) -> Tuple[sympy.Expr, int, Counter]:
    """Split a rational expression into (scalar, power of X, Counter of monic irreducible factors)"""
    if expr.has(sympy.Float):
        raise MalformedInputError(f'Floating point values are not exact: {expr}')
    if not ring.is_symbolic and U in expr.free_symbols:
        expr = expr.subs(U, ring.u)
    numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(expr)))

    unit = sympy.Integer(1)
    x_power = 0
    factors = Counter()
    for part, sign in ((numerator, 1), (denominator, -1)):
        try:
            coefficient, pieces = sympy.factor_list(part, **ring.factor_options)
        except PolynomialError as e:
            raise MalformedInputError(f'{expr} is not a rational function of X: {e}')
        unit *= coefficient ** sign
        for factor, multiplicity in pieces:
            exponent = sign * multiplicity
            if X not in factor.free_symbols:
                unit *= factor ** exponent
            elif factor == X:
                x_power += exponent
            else:
                monic, lead = _monic(factor, ring)
                unit *= lead ** exponent
                factors[monic] += exponent
    return unit, x_power, factors


@dataclass(frozen=True)
class LaurentRational:
    """A ratio of Laurent polynomials in X, in factored canonical form.

    Build values through the classmethod constructors; the raw fields are the
    canonical form and are not re-validated.
    """
    unit: sympy.Expr
    x_power: int = 0
    factors: Tuple[Tuple[sympy.Expr, int], ...] = ()
    ring: SymbolRing = DEFAULT_RING

    @classmethod
    def _build(cls, unit: sympy.Expr, x_power: int, factors: Mapping[sympy.Expr, int],
               ring: SymbolRing) -> 'LaurentRational':
        unit = ring.scalar(unit)
        if unit == 0:
            return cls.zero(ring)
        kept = sorted(((f, e) for f, e in factors.items() if e), key=lambda fe: _sort_key(fe[0]))
        return cls(unit, int(x_power), tuple(kept), ring)

    @classmethod
    def zero(cls, ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        return cls(sympy.Integer(0), 0, (), ring)

    @classmethod
    def one(cls, ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        return cls(sympy.Integer(1), 0, (), ring)

    @classmethod
    def constant(cls, value: Number, ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        return cls._build(value, 0, {}, ring)

    @classmethod
    def monomial(cls, coefficient: Number, power: int, ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        return cls._build(coefficient, power, {}, ring)

    @classmethod
    def binomial(cls, coefficient: Number, ring: SymbolRing = DEFAULT_RING,
                 inverse_x: bool = False) -> 'LaurentRational':
        """1 - c*X, or 1 - c/X when inverse_x is set"""
        c = ring.scalar(coefficient)
        if c == 0:
            return cls.one(ring)
        if inverse_x:
            return cls._build(1, -1, {X + ring.scalar(-c): 1}, ring)
        return cls._build(-c, 0, {X + ring.scalar(-1 / c): 1}, ring)

    @classmethod
    def from_expr(cls, expr: Union[str, Number], ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        if isinstance(expr, str):
            expr = ring.parse(expr, allow_x=True)
        if isinstance(expr, Fraction):
            expr = sympy.Rational(expr.numerator, expr.denominator)
        return cls.from_fraction(expr, 1, ring)

    @classmethod
    def from_fraction(cls, numerator: Number, denominator: Number,
                      ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        numerator = sympy.sympify(numerator)
        denominator = sympy.sympify(denominator)
        if sympy.cancel(sympy.together(denominator)) == 0:
            raise MalformedInputError('Zero denominator')
        if sympy.cancel(sympy.together(numerator)) == 0:
            return cls.zero(ring)
        unit, x_power, factors = _factor_piece(numerator / denominator, ring)
        return cls._build(unit, x_power, factors, ring)

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def is_one(self) -> bool:
        return self.unit == 1 and self.x_power == 0 and not self.factors

    def degrees(self) -> Tuple[int, int]:
        """X-degrees (numerator, denominator) of the non-monomial part"""
        numerator = sum(sympy.degree(f, X) * e for f, e in self.factors if e > 0)
        denominator = sum(sympy.degree(f, X) * -e for f, e in self.factors if e < 0)
        return int(numerator), int(denominator)

    def _coerce(self, other) -> 'LaurentRational':
        if isinstance(other, LaurentRational):
            if other.ring != self.ring:
                raise MalformedInputError(f'Cannot combine values over {self.ring} and {other.ring}')
            return other
        return LaurentRational.constant(other, self.ring)

    def __mul__(self, other) -> 'LaurentRational':
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return LaurentRational.zero(self.ring)
        factors = Counter(dict(self.factors))
        factors.update(dict(other.factors))
        return LaurentRational._build(self.unit * other.unit, self.x_power + other.x_power, factors, self.ring)

    __rmul__ = __mul__

    @classmethod
    def product(cls, values: Iterable['LaurentRational'], ring: SymbolRing = DEFAULT_RING) -> 'LaurentRational':
        """Multiply many values with a single canonicalization"""
        units = []
        x_power = 0
        factors = Counter()
        for value in values:
            if value.ring != ring:
                raise MalformedInputError(f'Cannot combine values over {ring} and {value.ring}')
            if value.is_zero:
                return cls.zero(ring)
            units.append(value.unit)
            x_power += value.x_power
            factors.update(dict(value.factors))
        return cls._build(sympy.Mul(*units), x_power, factors, ring)

    def inverse(self) -> 'LaurentRational':
        if self.is_zero:
            raise MalformedInputError('Division by the zero rational function')
        return LaurentRational._build(1 / self.unit, -self.x_power, {f: -e for f, e in self.factors}, self.ring)

    def __truediv__(self, other) -> 'LaurentRational':
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> 'LaurentRational':
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> 'LaurentRational':
        if exponent < 0:
            return self.inverse() ** -exponent
        if self.is_zero:
            return self if exponent else LaurentRational.one(self.ring)
        return LaurentRational._build(self.unit ** exponent, self.x_power * exponent,
                                      {f: e * exponent for f, e in self.factors}, self.ring)

    def __neg__(self) -> 'LaurentRational':
        return self * -1

    def __add__(self, other) -> 'LaurentRational':
        other = self._coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        return LaurentRational.from_expr(self.as_expr() + other.as_expr(), self.ring)

    __radd__ = __add__

    def __sub__(self, other) -> 'LaurentRational':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'LaurentRational':
        return self._coerce(other) - self

    def substitute_dual(self) -> 'LaurentRational':
        """Replace X by q**-1 * X**-1, i.e. s by 1 - s"""
        if self.is_zero:
            return self
        q = self.ring.q
        unit = self.unit * q ** -self.x_power
        x_power = -self.x_power
        factors = Counter()
        for factor, exponent in self.factors:
            if sympy.degree(factor, X) == 1:
                # X - r  ->  -r (X - 1/(r q)) / X
                root = self.ring.scalar(X - factor)
                unit *= (-root) ** exponent
                x_power -= exponent
                factors[X + self.ring.scalar(-1 / (root * q))] += exponent
                continue
            coefficients = sympy.Poly(factor, X).all_coeffs()
            degree = len(coefficients) - 1
            reflected = sympy.Add(*[
                coefficient * q ** (i - degree) * X ** i for i, coefficient in enumerate(coefficients)
            ])
            monic, lead = _monic(reflected, self.ring)
            unit *= lead ** exponent
            x_power -= degree * exponent
            factors[monic] += exponent
        return LaurentRational._build(unit, x_power, factors, self.ring)

    def as_expr(self) -> sympy.Expr:
        return self.unit * X ** self.x_power * sympy.Mul(*[f ** e for f, e in self.factors])

    def _factor_dicts(self, sign: int) -> list:
        entries = []
        for factor, exponent in self.factors:
            if exponent * sign <= 0:
                continue
            coefficients = sympy.Poly(factor, X).all_coeffs()
            degree = len(coefficients) - 1
            entries.append({
                'coefficients': {
                    str(degree - i): sympy.sstr(c) for i, c in enumerate(coefficients) if c != 0
                },
                'multiplicity': abs(exponent),
            })
        return entries

    def to_dict(self) -> dict:
        return {
            'ring': self.ring.describe(),
            'unit': sympy.sstr(self.unit),
            'x_power': self.x_power,
            'numerator': self._factor_dicts(1),
            'denominator': self._factor_dicts(-1),
        }

    @classmethod
    def from_dict(cls, data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'rational') -> 'LaurentRational':
        if not isinstance(data, Mapping):
            raise MalformedInputError(f'{where}: expected an object, not {data!r}')
        try:
            unit = ring.parse(data['unit'], where=f'{where}.unit')
            x_power = data.get('x_power', 0)
        except KeyError as e:
            raise MalformedInputError(f'{where}: missing field {e}')
        if isinstance(x_power, bool) or not isinstance(x_power, int):
            raise MalformedInputError(f'{where}.x_power: expected an integer, not {x_power!r}')
        if unit == 0:
            return cls.zero(ring)

        factors = Counter()
        for key, sign in (('numerator', 1), ('denominator', -1)):
            for index, entry in enumerate(data.get(key, [])):
                here = f'{where}.{key}[{index}]'
                polynomial = cls._polynomial_from_dict(entry, ring, here)
                multiplicity = entry.get('multiplicity', 1)
                if isinstance(multiplicity, bool) or not isinstance(multiplicity, int) or multiplicity < 1:
                    raise MalformedInputError(f'{here}.multiplicity: expected a positive integer')
                piece_unit, piece_power, piece_factors = _factor_piece(polynomial, ring)
                exponent = sign * multiplicity
                unit *= piece_unit ** exponent
                x_power += piece_power * exponent
                for factor, e in piece_factors.items():
                    factors[factor] += e * exponent
        return cls._build(unit, x_power, factors, ring)

    @staticmethod
    def _polynomial_from_dict(entry: Mapping, ring: SymbolRing, where: str) -> sympy.Expr:
        if not isinstance(entry, Mapping) or not isinstance(entry.get('coefficients'), Mapping):
            raise MalformedInputError(f'{where}: expected an object with a "coefficients" map')
        terms = []
        for power, coefficient in entry['coefficients'].items():
            try:
                power = int(power)
            except ValueError:
                raise MalformedInputError(f'{where}.coefficients: exponent {power!r} is not an integer')
            if power < 0:
                raise MalformedInputError(f'{where}.coefficients: exponent {power} is negative')
            terms.append(ring.parse(coefficient, where=f'{where}.coefficients[{power}]') * X ** power)
        polynomial = sympy.Add(*terms)
        if polynomial == 0:
            raise MalformedInputError(f'{where}: zero polynomial')
        return polynomial

    def _parts(self, render) -> Tuple[list, list]:
        numerator, denominator = [], []
        if self.unit != 1:
            numerator.append(render(self.unit, 1, True))
        if self.x_power:
            (numerator if self.x_power > 0 else denominator).append(render(X, abs(self.x_power), False))
        for factor, exponent in self.factors:
            (numerator if exponent > 0 else denominator).append(render(factor, abs(exponent), True))
        return numerator, denominator

    def to_text(self) -> str:
        def render(expr, power, group):
            text = sympy.sstr(expr)
            if group and not (expr.is_Symbol or expr.is_Integer and expr > 0):
                text = f'({text})'
            return text if power == 1 else f'{text}**{power}'

        if self.is_zero:
            return '0'
        numerator, denominator = self._parts(render)
        top = '*'.join(numerator) or '1'
        if not denominator:
            return top
        bottom = denominator[0] if len(denominator) == 1 else f'({"*".join(denominator)})'
        return f'{top}/{bottom}'

    def to_latex(self) -> str:
        def render(expr, power, group):
            text = sympy.latex(expr)
            if group and not (expr.is_Symbol or expr.is_Integer and expr > 0):
                text = f'\\left({text}\\right)'
            return text if power == 1 else f'{text}^{{{power}}}'

        if self.is_zero:
            return '0'
        numerator, denominator = self._parts(render)
        top = ' '.join(numerator) or '1'
        if not denominator:
            return top
        return f'\\frac{{{top}}}{{{" ".join(denominator)}}}'

    def __str__(self) -> str:
        return self.to_text()


def normalize(f: LaurentRational) -> LaurentRational:
    """Re-derive the canonical form of f, splitting any factor that is not irreducible"""
    unit = f.unit
    x_power = f.x_power
    factors: Dict[sympy.Expr, int] = Counter()
    if f.is_zero:
        return LaurentRational.zero(f.ring)
    for factor, exponent in f.factors:
        if sympy.degree(factor, X) == 1:
            factors[factor] += exponent
            continue
        piece_unit, piece_power, piece_factors = _factor_piece(factor, f.ring)
        unit *= piece_unit ** exponent
        x_power += piece_power * exponent
        for piece, e in piece_factors.items():
            factors[piece] += e * exponent
    return LaurentRational._build(unit, x_power, factors, f.ring)


def substitute_dual(f: LaurentRational) -> LaurentRational:
    return f.substitute_dual()


def equal(f: LaurentRational, g: LaurentRational) -> bool:
    """Exact equality; canonical forms are unique, so f - g normalizes to zero iff they agree"""
    return normalize(f) == normalize(g)
