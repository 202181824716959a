"""Products of an explicit LaurentRational with formal gamma- and epsilon-atoms"""

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Tuple

from g2_gamma import MalformedInputError, UnsupportedConfigurationError
from g2_gamma.ratfun import DEFAULT_RING, LaurentRational, SymbolRing

ATOM_KINDS = ('gamma', 'epsilon')


def _format_twist(twist: Fraction) -> str:
    if twist == 0:
        return 's'
    sign = '+' if twist > 0 else '-'
    return f's {sign} {abs(twist)}'


def _latex_label(value: Any) -> str:
    return str(value).replace('_', '\\_').replace('~', '\\sim')


@dataclass(frozen=True)
class GammaAtom:
    """The formal factor kind(s + twist, left x right, psi)

    left and right are characters or atom-like bases from wdrep; anything with
    to_dict() and __str__ works.
    """
    left: Any
    right: Any
    twist: Fraction = Fraction(0)
    kind: str = 'gamma'

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise MalformedInputError(f'Unknown atom kind {self.kind!r}; expected one of {ATOM_KINDS}')
        object.__setattr__(self, 'twist', Fraction(self.twist))

    def sort_key(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dict(self) -> dict:
        from g2_gamma.wdrep import encode_base

        return {
            'kind': self.kind,
            'left': encode_base(self.left),
            'right': encode_base(self.right),
            'twist': str(self.twist),
        }

    @classmethod
    def from_dict(cls, data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'atom') -> 'GammaAtom':
        from g2_gamma.wdrep import decode_base

        if not isinstance(data, Mapping):
            raise MalformedInputError(f'{where}: expected an object, not {data!r}')
        for key in ('left', 'right'):
            if key not in data:
                raise MalformedInputError(f'{where}: missing field {key!r}')
        try:
            twist = Fraction(str(data.get('twist', '0')))
        except (ValueError, ZeroDivisionError):
            raise MalformedInputError(f'{where}.twist: {data.get("twist")!r} is not a rational number')
        return cls(
            left=decode_base(data['left'], ring, where=f'{where}.left'),
            right=decode_base(data['right'], ring, where=f'{where}.right'),
            twist=twist,
            kind=data.get('kind', 'gamma'),
        )

    def __str__(self) -> str:
        return f'{self.kind}({_format_twist(self.twist)}, {self.left} x {self.right})'

    def to_latex(self) -> str:
        symbol = '\\gamma' if self.kind == 'gamma' else '\\varepsilon'
        twist = '' if self.twist == 0 else (
            f' {"+" if self.twist > 0 else "-"} \\tfrac{{{abs(self.twist).numerator}}}{{{abs(self.twist).denominator}}}'
        )
        left, right = (_latex_label(side) for side in (self.left, self.right))
        return f'{symbol}(s{twist}, \\mathrm{{{left}}} \\times \\mathrm{{{right}}})'


@dataclass(frozen=True)
class GammaExpr:
    """rational * prod(atom ** exponent); exponents may be negative"""
    rational: LaurentRational
    atoms: Tuple[Tuple[GammaAtom, int], ...] = ()

    @classmethod
    def build(cls, rational: LaurentRational, atoms: Mapping[GammaAtom, int]) -> 'GammaExpr':
        kept = sorted(((a, e) for a, e in atoms.items() if e), key=lambda ae: ae[0].sort_key())
        return cls(rational, tuple(kept))

    @classmethod
    def one(cls, ring: SymbolRing = DEFAULT_RING) -> 'GammaExpr':
        return cls(LaurentRational.one(ring))

    @classmethod
    def from_atom(cls, atom: GammaAtom, ring: SymbolRing = DEFAULT_RING, exponent: int = 1) -> 'GammaExpr':
        return cls.build(LaurentRational.one(ring), {atom: exponent})

    @classmethod
    def product(cls, factors: Iterable['GammaExpr'], ring: SymbolRing = DEFAULT_RING) -> 'GammaExpr':
        rationals = []
        atoms = Counter()
        for factor in factors:
            rationals.append(factor.rational)
            atoms.update(dict(factor.atoms))
        return cls.build(LaurentRational.product(rationals, ring), atoms)

    @property
    def ring(self) -> SymbolRing:
        return self.rational.ring

    @property
    def atom_counter(self) -> Counter:
        return Counter(dict(self.atoms))

    @property
    def is_explicit(self) -> bool:
        return not self.atoms

    def degrees(self) -> Tuple[int, int]:
        return self.rational.degrees()

    def _coerce(self, other) -> 'GammaExpr':
        if isinstance(other, GammaExpr):
            return other
        return GammaExpr(self.rational._coerce(other))

    def __mul__(self, other) -> 'GammaExpr':
        return GammaExpr.product([self, self._coerce(other)], self.ring)

    __rmul__ = __mul__

    def inverse(self) -> 'GammaExpr':
        return GammaExpr.build(self.rational.inverse(), {a: -e for a, e in self.atoms})

    def __truediv__(self, other) -> 'GammaExpr':
        return self * self._coerce(other).inverse()

    def __pow__(self, exponent: int) -> 'GammaExpr':
        return GammaExpr.build(self.rational ** exponent, {a: e * exponent for a, e in self.atoms})

    def substitute_dual(self) -> 'GammaExpr':
        if self.atoms:
            raise UnsupportedConfigurationError('Formal atoms cannot be evaluated at 1 - s')
        return GammaExpr(self.rational.substitute_dual())

    def to_dict(self) -> dict:
        return {
            'rational': self.rational.to_dict(),
            'atoms': [dict(atom.to_dict(), exponent=exponent) for atom, exponent in self.atoms],
        }

    @classmethod
    def from_dict(cls, data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'gamma') -> 'GammaExpr':
        if not isinstance(data, Mapping) or 'rational' not in data:
            raise MalformedInputError(f'{where}: expected an object with a "rational" field')
        rational = LaurentRational.from_dict(data['rational'], ring, where=f'{where}.rational')
        atoms = Counter()
        for index, entry in enumerate(data.get('atoms', [])):
            here = f'{where}.atoms[{index}]'
            exponent = entry.get('exponent', 1) if isinstance(entry, Mapping) else None
            if isinstance(exponent, bool) or not isinstance(exponent, int):
                raise MalformedInputError(f'{here}.exponent: expected an integer')
            atoms[GammaAtom.from_dict(entry, ring, where=here)] += exponent
        return cls.build(rational, atoms)

    def to_text(self) -> str:
        parts = [] if self.rational.is_one and self.atoms else [self.rational.to_text()]
        for atom, exponent in self.atoms:
            parts.append(str(atom) if exponent == 1 else f'{atom}**{exponent}')
        return ' * '.join(parts)

    def to_latex(self) -> str:
        parts = [] if self.rational.is_one and self.atoms else [self.rational.to_latex()]
        for atom, exponent in self.atoms:
            parts.append(atom.to_latex() if exponent == 1 else f'{atom.to_latex()}^{{{exponent}}}')
        return ' \\cdot '.join(parts)

    def __str__(self) -> str:
        return self.to_text()
