"""Characters of the local field and the Tate GL_1 factors L, epsilon, gamma"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Tuple, Union

import sympy

from g2_gamma import DomainError, MalformedInputError, UnsupportedConfigurationError
from g2_gamma.gamma_expr import GammaAtom, GammaExpr
from g2_gamma.ratfun import DEFAULT_RING, LaurentRational, SymbolRing

log = logging.getLogger(__name__)


def _fraction(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str, Fraction)):
        raise MalformedInputError(f'{where}: expected a rational number, not {value!r}')
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise MalformedInputError(f'{where}: {value!r} is not a rational number')


def _exponent(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedInputError(f'{where}: expected an integer exponent, not {value!r}')
    try:
        return int(value)
    except ValueError:
        raise MalformedInputError(f'{where}: {value!r} is not an integer exponent')


@dataclass(frozen=True)
class AdditiveCharacter:
    """A nontrivial additive character psi, recorded by its conductor exponent n(psi)"""
    conductor_exponent: int = 0

    def require_unramified(self):
        if self.conductor_exponent != 0:
            raise UnsupportedConfigurationError(
                f'Additive characters with n(psi) = {self.conductor_exponent} are not supported; only n(psi) = 0'
            )

    def to_dict(self) -> dict:
        return {'conductor_exponent': self.conductor_exponent}

    @classmethod
    def from_dict(cls, data: Mapping, where: str = 'psi') -> 'AdditiveCharacter':
        if not isinstance(data, Mapping):
            raise MalformedInputError(f'{where}: expected an object, not {data!r}')
        exponent = data.get('conductor_exponent', 0)
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            raise MalformedInputError(f'{where}.conductor_exponent: expected an integer, not {exponent!r}')
        return cls(exponent)


PSI = AdditiveCharacter()


@dataclass(frozen=True)
class MultChar:
    """chi = (ramified part) * (unramified character with chi(varpi) = alpha) * |.|**twist

    The ramified part is an element of the free abelian group on atom labels, so
    products and inverses of ramified atoms stay exact.
    """
    alpha: sympy.Expr = sympy.Integer(1)
    twist: Fraction = Fraction(0)
    ramified: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        alpha = DEFAULT_RING.scalar(self.alpha)
        if alpha == 0:
            raise MalformedInputError('A character value chi(varpi) must be nonzero')
        labels = Counter()
        for label, exponent in self.ramified:
            labels[str(label)] += int(exponent)
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'twist', Fraction(self.twist))
        object.__setattr__(self, 'ramified', tuple(sorted((k, e) for k, e in labels.items() if e)))

    @classmethod
    def trivial(cls) -> 'MultChar':
        return cls()

    @property
    def kind(self) -> str:
        return 'ramified' if self.ramified else 'unramified'

    @property
    def is_unramified(self) -> bool:
        return not self.ramified

    @property
    def is_trivial(self) -> bool:
        return self.is_unramified and self.alpha == 1 and self.twist == 0

    @property
    def dim(self) -> int:
        return 1

    def inverse(self) -> 'MultChar':
        return MultChar(1 / self.alpha, -self.twist, tuple((label, -e) for label, e in self.ramified))

    def dual(self) -> 'MultChar':
        return self.inverse()

    def __mul__(self, other: 'MultChar') -> 'MultChar':
        if not isinstance(other, MultChar):
            return NotImplemented
        return MultChar(self.alpha * other.alpha, self.twist + other.twist, self.ramified + other.ramified)

    def __pow__(self, exponent: int) -> 'MultChar':
        return MultChar(self.alpha ** exponent, self.twist * exponent,
                        tuple((label, e * exponent) for label, e in self.ramified))

    def twisted(self, twist: Union[int, Fraction]) -> 'MultChar':
        """chi * |.|**twist"""
        return MultChar(self.alpha, self.twist + Fraction(twist), self.ramified)

    def untwisted(self) -> 'MultChar':
        return MultChar(self.alpha, 0, self.ramified)

    def frobenius(self, ring: SymbolRing = DEFAULT_RING) -> sympy.Expr:
        """chi(varpi) = alpha * q**(-twist) for an unramified character"""
        if not self.is_unramified:
            raise DomainError(f'{self} is ramified and has no Frobenius eigenvalue')
        return ring.scalar(ring.scalar(self.alpha) * ring.q_power(-self.twist))

    def sort_key(self) -> tuple:
        return (self.kind, str(self.ramified), str(self.twist), sympy.sstr(self.alpha))

    def to_dict(self) -> dict:
        data = {'kind': self.kind}
        if len(self.ramified) == 1 and self.ramified[0][1] == 1:
            data['label'] = self.ramified[0][0]
        elif self.ramified:
            data['labels'] = dict(self.ramified)
        if self.is_unramified or self.alpha != 1:
            data['alpha'] = sympy.sstr(self.alpha)
        data['twist'] = str(self.twist)
        return data

    @classmethod
    def from_dict(cls, data: Union[Mapping, str, int], ring: SymbolRing = DEFAULT_RING,
                  where: str = 'character') -> 'MultChar':
        if isinstance(data, (str, int)) and not isinstance(data, bool):
            return cls(ring.parse(data, where=where))
        if not isinstance(data, Mapping):
            raise MalformedInputError(f'{where}: expected a character object or value, not {data!r}')

        kind = data.get('kind', 'ramified' if 'label' in data or 'labels' in data else 'unramified')
        twist = _fraction(data.get('twist', '0'), f'{where}.twist')
        alpha = ring.parse(data.get('alpha', '1'), where=f'{where}.alpha')
        if kind == 'unramified':
            return cls(alpha, twist)
        if kind != 'ramified':
            raise MalformedInputError(f'{where}.kind: unknown character kind {kind!r}; expected unramified|ramified')

        if 'label' in data:
            ramified = ((str(data['label']), 1),)
        elif isinstance(data.get('labels'), Mapping):
            ramified = tuple((str(k), _exponent(v, f'{where}.labels.{k}')) for k, v in data['labels'].items())
        else:
            raise MalformedInputError(f'{where}: a ramified character needs a "label"')
        character = cls(alpha, twist, ramified)
        if character.is_unramified:
            raise MalformedInputError(f'{where}: ramified labels cancel to an unramified character')
        return character

    def __str__(self) -> str:
        if self.is_trivial:
            return '1'
        parts = []
        for label, exponent in self.ramified:
            parts.append(label if exponent == 1 else f'{label}^{exponent}')
        if self.alpha != 1 or not parts:
            parts.append(f'mu[{sympy.sstr(self.alpha)}]')
        if self.twist:
            parts.append(f'|.|^({self.twist})')
        return '*'.join(parts)


TRIVIAL = MultChar.trivial()


def unramified(alpha: Union[int, str, sympy.Expr] = 1, twist: Union[int, Fraction] = 0) -> MultChar:
    return MultChar(sympy.sympify(alpha), Fraction(twist))


def ramified(label: str, alpha: Union[int, sympy.Expr] = 1, twist: Union[int, Fraction] = 0) -> MultChar:
    return MultChar(sympy.sympify(alpha), Fraction(twist), ((label, 1),))


def tate_L(chi: MultChar, ring: SymbolRing = DEFAULT_RING) -> LaurentRational:
    """L(s, chi) = 1 / (1 - chi(varpi) X); 1 for ramified chi"""
    if not chi.is_unramified:
        return LaurentRational.one(ring)
    return LaurentRational.binomial(chi.frobenius(ring), ring).inverse()


def tate_epsilon(chi: MultChar, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    psi.require_unramified()
    if chi.is_unramified:
        return GammaExpr.one(ring)
    return GammaExpr.from_atom(GammaAtom(chi.untwisted(), TRIVIAL, chi.twist, kind='epsilon'), ring)


def tate_gamma(chi: MultChar, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """gamma(s, chi, psi) = epsilon(s, chi, psi) L(1 - s, chi^-1) / L(s, chi)

    For unramified chi with value c = chi(varpi) this is
    (1 - c X) / (1 - c^-1 q^-1 X^-1); ramified chi gives a formal atom.
    """
    psi.require_unramified()
    if not chi.is_unramified:
        return GammaExpr.from_atom(GammaAtom(chi.untwisted(), TRIVIAL, chi.twist), ring)
    value = chi.frobenius(ring)
    numerator = LaurentRational.binomial(value, ring)
    denominator = LaurentRational.binomial(1 / (value * ring.q), ring, inverse_x=True)
    return GammaExpr(numerator / denominator)
