"""Weil-Deligne parameters for GL_n and their L-, epsilon- and gamma-factors

A parameter is a multiset of indecomposables base (x) Sp(n), where the base is a
character, an opaque supercuspidal atom, or a formal tensor / exterior square of
atoms. Formal bases are never expanded; their factors are emitted as atoms of a
GammaExpr.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from g2_gamma import DomainError, MalformedInputError, UnsupportedAtomError
from g2_gamma.gamma_expr import GammaAtom, GammaExpr
from g2_gamma.localchar import PSI, TRIVIAL, AdditiveCharacter, MultChar, tate_gamma, tate_L
from g2_gamma.ratfun import DEFAULT_RING, LaurentRational, SymbolRing, X

log = logging.getLogger(__name__)

DIHEDRAL_TYPES = ('non-dihedral', 'dihedral-1', 'dihedral-3')


@dataclass(frozen=True)
class SupercuspidalAtom:
    """An opaque irreducible parameter of dimension dim, twisted by a character

    ad_support is the parameter of Ad(tau) for a two dimensional atom; its block
    shape must match gl2_dihedral_type (3 | 2+1 | 1+1+1).
    """
    label: str
    dim: int
    central_character: MultChar = TRIVIAL
    dual_label: Optional[str] = None
    gl2_dihedral_type: Optional[str] = None
    ad_support: Optional['WDParam'] = None
    twist: MultChar = TRIVIAL

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise MalformedInputError(f'Atom labels must be nonempty strings, not {self.label!r}')
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 2:
            raise MalformedInputError(f'{self.label}: atom dimension must be an integer >= 2, not {self.dim!r}')
        if self.dual_label is None:
            object.__setattr__(self, 'dual_label', f'{self.label}_dual')
        if self.dual_label == self.label and not (self.central_character ** 2).is_trivial:
            raise MalformedInputError(f'{self.label}: a self-dual atom needs a central character of order <= 2')

        if self.gl2_dihedral_type is not None:
            if self.dim != 2:
                raise MalformedInputError(f'{self.label}: gl2_dihedral_type is only meaningful for dim 2')
            if self.gl2_dihedral_type not in DIHEDRAL_TYPES:
                raise MalformedInputError(
                    f'{self.label}: gl2_dihedral_type must be one of {DIHEDRAL_TYPES}, not {self.gl2_dihedral_type!r}'
                )
        if self.ad_support is not None:
            self._check_ad_support()

    def _check_ad_support(self):
        if self.dim != 2:
            raise MalformedInputError(f'{self.label}: ad_support is only meaningful for dim 2')
        if self.gl2_dihedral_type is None:
            raise MalformedInputError(f'{self.label}: ad_support needs an explicit gl2_dihedral_type')
        if self.ad_support.dim != 3:
            raise MalformedInputError(f'{self.label}: ad_support must be 3-dimensional, not {self.ad_support.dim}')

        shape = sorted((s.dim, isinstance(s.base, MultChar)) for s in self.ad_support)
        expected = {
            'non-dihedral': [(3, False)],
            'dihedral-1': [(1, True), (2, False)],
            'dihedral-3': [(1, True), (1, True), (1, True)],
        }[self.gl2_dihedral_type]
        if shape != expected or any(s.sp_size != 1 for s in self.ad_support):
            raise MalformedInputError(
                f'{self.label}: ad_support {self.ad_support} does not match a {self.gl2_dihedral_type} atom'
            )

    @property
    def kind(self) -> str:
        return 'supercuspidal'

    @property
    def core(self) -> 'SupercuspidalAtom':
        return replace(self, twist=TRIVIAL)

    def determinant(self) -> MultChar:
        return self.central_character * self.twist ** self.dim

    def dual(self) -> 'SupercuspidalAtom':
        # Ad(tau) is self-dual and insensitive to twists, so ad_support is kept
        return replace(self, label=self.dual_label, dual_label=self.label,
                       central_character=self.central_character.inverse(), twist=self.twist.inverse())

    def twisted_by(self, chi: MultChar) -> 'SupercuspidalAtom':
        return replace(self, twist=self.twist * chi)

    def to_dict(self) -> dict:
        data = {
            'kind': self.kind,
            'label': self.label,
            'dim': self.dim,
            'central_character': self.central_character.to_dict(),
            'dual_label': self.dual_label,
        }
        if self.gl2_dihedral_type is not None:
            data['gl2_dihedral_type'] = self.gl2_dihedral_type
        if self.ad_support is not None:
            data['ad_support'] = self.ad_support.to_dict()
        if not self.twist.is_trivial:
            data['twist_character'] = self.twist.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'atom') -> 'SupercuspidalAtom':
        for key in ('label', 'dim'):
            if key not in data:
                raise MalformedInputError(f'{where}: missing field {key!r}')
        central = MultChar.from_dict(data.get('central_character', '1'), ring, where=f'{where}.central_character')
        twist = MultChar.from_dict(data.get('twist_character', '1'), ring, where=f'{where}.twist_character')
        ad_support = None
        if data.get('ad_support') is not None:
            ad_support = WDParam.from_dict(data['ad_support'], ring, where=f'{where}.ad_support')
        try:
            return cls(data['label'], data['dim'], central, data.get('dual_label'),
                       data.get('gl2_dihedral_type'), ad_support, twist)
        except MalformedInputError as e:
            raise MalformedInputError(f'{where}: {e}')

    def __str__(self) -> str:
        return self.label if self.twist.is_trivial else f'{self.label}*{self.twist}'


@dataclass(frozen=True)
class TensorAtom:
    """The formal tensor product of atom cores, twisted by a character"""
    factors: Tuple[Union[SupercuspidalAtom, 'ExteriorSquareAtom'], ...]
    twist: MultChar = TRIVIAL

    def __post_init__(self):
        object.__setattr__(self, 'factors', tuple(sorted(self.factors, key=_base_key)))

    @classmethod
    def of(cls, left: 'Atom', right: 'Atom') -> 'TensorAtom':
        factors = []
        for atom in (left, right):
            factors.extend(atom.factors if isinstance(atom, TensorAtom) else (atom.core,))
        return cls(tuple(factors), left.twist * right.twist)

    @property
    def kind(self) -> str:
        return 'tensor'

    @property
    def dim(self) -> int:
        dim = 1
        for factor in self.factors:
            dim *= factor.dim
        return dim

    @property
    def core(self) -> 'TensorAtom':
        return replace(self, twist=TRIVIAL)

    def dual(self) -> 'TensorAtom':
        return TensorAtom(tuple(f.dual() for f in self.factors), self.twist.inverse())

    def twisted_by(self, chi: MultChar) -> 'TensorAtom':
        return replace(self, twist=self.twist * chi)

    def to_dict(self) -> dict:
        data = {'kind': self.kind, 'factors': [encode_base(f) for f in self.factors]}
        if not self.twist.is_trivial:
            data['twist_character'] = self.twist.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'atom') -> 'TensorAtom':
        factors = data.get('factors')
        if not isinstance(factors, list) or len(factors) < 2:
            raise MalformedInputError(f'{where}.factors: expected a list of at least two atoms')
        decoded = [decode_base(f, ring, where=f'{where}.factors[{i}]') for i, f in enumerate(factors)]
        if any(not isinstance(f, (SupercuspidalAtom, ExteriorSquareAtom)) for f in decoded):
            raise MalformedInputError(f'{where}.factors: tensor factors must be atoms')
        twist = MultChar.from_dict(data.get('twist_character', '1'), ring, where=f'{where}.twist_character')
        return cls(tuple(f.core for f in decoded), twist * _product(f.twist for f in decoded))

    def __str__(self) -> str:
        text = '(' + ' (x) '.join(str(f) for f in self.factors) + ')'
        return text if self.twist.is_trivial else f'{text}*{self.twist}'


@dataclass(frozen=True)
class ExteriorSquareAtom:
    """wedge^2 of an atom core of dimension >= 3, twisted by a character"""
    base: Union[SupercuspidalAtom, TensorAtom]
    twist: MultChar = TRIVIAL

    @classmethod
    def of(cls, atom: 'Atom') -> 'ExteriorSquareAtom':
        return cls(atom.core, atom.twist ** 2)

    @property
    def kind(self) -> str:
        return 'exterior_square'

    @property
    def dim(self) -> int:
        return self.base.dim * (self.base.dim - 1) // 2

    @property
    def core(self) -> 'ExteriorSquareAtom':
        return replace(self, twist=TRIVIAL)

    def dual(self) -> 'ExteriorSquareAtom':
        return ExteriorSquareAtom(self.base.dual(), self.twist.inverse())

    def twisted_by(self, chi: MultChar) -> 'ExteriorSquareAtom':
        return replace(self, twist=self.twist * chi)

    def to_dict(self) -> dict:
        data = {'kind': self.kind, 'base': encode_base(self.base)}
        if not self.twist.is_trivial:
            data['twist_character'] = self.twist.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'atom') -> 'ExteriorSquareAtom':
        if 'base' not in data:
            raise MalformedInputError(f'{where}: missing field \'base\'')
        base = decode_base(data['base'], ring, where=f'{where}.base')
        if isinstance(base, MultChar) or base.dim < 3:
            raise MalformedInputError(f'{where}.base: exterior squares are formal only for atoms of dim >= 3')
        twist = MultChar.from_dict(data.get('twist_character', '1'), ring, where=f'{where}.twist_character')
        return cls(base.core, twist * base.twist ** 2)

    def __str__(self) -> str:
        text = f'wedge2({self.base})'
        return text if self.twist.is_trivial else f'{text}*{self.twist}'


Atom = Union[SupercuspidalAtom, TensorAtom, ExteriorSquareAtom]
Base = Union[MultChar, Atom]

_ATOM_DECODERS = {
    'supercuspidal': SupercuspidalAtom,
    'tensor': TensorAtom,
    'exterior_square': ExteriorSquareAtom,
}


def _product(characters: Iterable[MultChar]) -> MultChar:
    result = TRIVIAL
    for chi in characters:
        result = result * chi
    return result


def encode_base(base: Base) -> dict:
    return base.to_dict()


def decode_base(data: Union[Mapping, str, int], ring: SymbolRing = DEFAULT_RING, where: str = 'base') -> Base:
    """Decode a character or an atom; objects with a dim field default to supercuspidal atoms"""
    if not isinstance(data, Mapping):
        return MultChar.from_dict(data, ring, where=where)
    kind = data.get('kind', 'supercuspidal' if 'dim' in data else 'unramified')
    if kind in _ATOM_DECODERS:
        return _ATOM_DECODERS[kind].from_dict(data, ring, where=where)
    return MultChar.from_dict(data, ring, where=where)


def _base_key(base: Base) -> str:
    return json.dumps(encode_base(base), sort_keys=True)


def twist_base(base: Base, chi: MultChar) -> Base:
    if isinstance(base, MultChar):
        return base * chi
    return base.twisted_by(chi)


def shift_base(base: Base, shift: Fraction) -> Base:
    """base * |.|**shift"""
    return twist_base(base, TRIVIAL.twisted(shift))


@dataclass(frozen=True)
class Indecomposable:
    base: Base
    sp_size: int = 1

    def __post_init__(self):
        if isinstance(self.sp_size, bool) or not isinstance(self.sp_size, int) or self.sp_size < 1:
            raise MalformedInputError(f'Sp(n) needs a positive integer n, not {self.sp_size!r}')

    @property
    def dim(self) -> int:
        return self.base.dim * self.sp_size

    @property
    def is_unramified(self) -> bool:
        return isinstance(self.base, MultChar) and self.base.is_unramified

    def shifts(self) -> List[Fraction]:
        """The exponents (n - 1)/2 - i of the Sp(n) collapse, most positive first"""
        n = self.sp_size
        return [Fraction(n - 1, 2) - i for i in range(n)]

    def dual(self) -> 'Indecomposable':
        return Indecomposable(self.base.dual(), self.sp_size)

    def sort_key(self) -> tuple:
        return self.dim, self.sp_size, self.base.kind, _base_key(self.base)

    def to_dict(self) -> dict:
        return dict(encode_base(self.base), sp=self.sp_size)

    @classmethod
    def from_dict(cls, data: Union[Mapping, str, int], ring: SymbolRing = DEFAULT_RING,
                  where: str = 'summand') -> 'Indecomposable':
        if not isinstance(data, Mapping):
            return cls(decode_base(data, ring, where=where))
        sp_size = data.get('sp', 1)
        if isinstance(sp_size, bool) or not isinstance(sp_size, int) or sp_size < 1:
            raise MalformedInputError(f'{where}.sp: expected a positive integer, not {sp_size!r}')
        base = decode_base({k: v for k, v in data.items() if k != 'sp'}, ring, where=where)
        return cls(base, sp_size)

    def __str__(self) -> str:
        return str(self.base) if self.sp_size == 1 else f'{self.base} (x) Sp({self.sp_size})'


@dataclass(frozen=True)
class WDParam:
    """A multiset of indecomposables, kept sorted so equality is multiset equality"""
    summands: Tuple[Indecomposable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'summands', tuple(sorted(self.summands, key=Indecomposable.sort_key)))

    @classmethod
    def of(cls, *bases: Base, sp_size: int = 1) -> 'WDParam':
        return cls(tuple(Indecomposable(b, sp_size) for b in bases))

    @classmethod
    def trivial(cls) -> 'WDParam':
        return cls.of(TRIVIAL)

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.summands)

    @property
    def is_unramified(self) -> bool:
        return all(s.is_unramified for s in self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def counter(self) -> Counter:
        return Counter(self.summands)

    def dual(self) -> 'WDParam':
        return WDParam(tuple(s.dual() for s in self.summands))

    def __add__(self, other: 'WDParam') -> 'WDParam':
        if not isinstance(other, WDParam):
            return NotImplemented
        return WDParam(self.summands + other.summands)

    def remove(self, other: 'WDParam') -> 'WDParam':
        """Multiset difference; every summand of other must occur in self"""
        remaining = self.counter()
        remaining.subtract(other.counter())
        if any(count < 0 for count in remaining.values()):
            raise DomainError(f'{other} is not contained in {self}')
        return WDParam(tuple(remaining.elements()))

    def twisted_by(self, chi: MultChar) -> 'WDParam':
        return WDParam(tuple(Indecomposable(twist_base(s.base, chi), s.sp_size) for s in self.summands))

    def to_dict(self) -> list:
        return [s.to_dict() for s in self.summands]

    @classmethod
    def from_dict(cls, data: Union[Sequence, str], ring: SymbolRing = DEFAULT_RING, where: str = 'rho') -> 'WDParam':
        if isinstance(data, str) and data.strip().lower() == 'trivial':
            return cls.trivial()
        if isinstance(data, Mapping) and 'summands' in data:
            data = data['summands']
        if isinstance(data, (str, bytes)) or not isinstance(data, Sequence):
            raise MalformedInputError(f'{where}: expected a list of summands or "trivial", not {data!r}')
        if not data:
            raise MalformedInputError(f'{where}: a parameter needs at least one summand')
        return cls(tuple(Indecomposable.from_dict(s, ring, where=f'{where}[{i}]') for i, s in enumerate(data)))

    def __str__(self) -> str:
        return ' + '.join(str(s) for s in self.summands) or '0'


def _tensor_bases(left: Base, right: Base) -> Base:
    if isinstance(left, MultChar):
        return twist_base(right, left)
    if isinstance(right, MultChar):
        return twist_base(left, right)
    return TensorAtom.of(left, right)


def tensor(V: WDParam, W: WDParam) -> WDParam:
    """Bilinear tensor product; Sp(m) (x) Sp(n) follows Clebsch-Gordan"""
    summands = []
    for left in V:
        for right in W:
            base = _tensor_bases(left.base, right.base)
            m, n = left.sp_size, right.sp_size
            summands.extend(Indecomposable(base, m + n - 1 - 2 * j) for j in range(min(m, n)))
    return WDParam(tuple(summands))


def _exterior_square_summand(summand: Indecomposable, formal: bool, rewrite_three_dim: bool) -> List[Indecomposable]:
    base, n = summand.base, summand.sp_size
    if isinstance(base, MultChar):
        return [Indecomposable(base ** 2, 2 * n - 1 - 2 * j) for j in range(1, n, 2)]
    if n > 1:
        raise UnsupportedAtomError(f'wedge^2 of {summand} needs Sym^2 of the atom, which is not modelled')
    if base.dim == 2:
        return [Indecomposable(base.determinant())]
    if rewrite_three_dim and base.dim == 3 and isinstance(base, SupercuspidalAtom):
        return [Indecomposable(base.dual().twisted_by(base.determinant()))]
    if formal:
        log.debug(f'Keeping wedge^2({base}) as a formal atom')
        return [Indecomposable(ExteriorSquareAtom.of(base))]
    raise UnsupportedAtomError(f'wedge^2 of the {base.dim}-dimensional atom {base} is not supported')


def exterior_square(V: WDParam, formal: bool = False, rewrite_three_dim: bool = False) -> WDParam:
    """wedge^2(V) = sum of wedge^2 of the summands plus the pairwise tensors

    Atoms of dimension >= 3 give a formal ExteriorSquareAtom when formal is set, or
    sigma^vee (x) det(sigma) for a three dimensional atom with rewrite_three_dim.
    """
    summands = list(V)
    result = []
    for i, summand in enumerate(summands):
        result.extend(_exterior_square_summand(summand, formal, rewrite_three_dim))
        for other in summands[i + 1:]:
            result.extend(tensor(WDParam((summand,)), WDParam((other,))))
    return WDParam(tuple(result))


def frobenius_eigenvalues(V: WDParam, ring: SymbolRing = DEFAULT_RING) -> List[sympy.Expr]:
    """The eigenvalues chi(varpi) q**(-(n-1)/2 + i) of Frobenius, sorted canonically"""
    eigenvalues = []
    for summand in V:
        if not summand.is_unramified:
            raise DomainError(f'{summand} has no Frobenius eigenvalues; only unramified characters do')
        eigenvalues.extend(summand.base.twisted(shift).frobenius(ring) for shift in summand.shifts())
    return sorted(eigenvalues, key=sympy.default_sort_key)


def _summand_L(summand: Indecomposable, ring: SymbolRing) -> LaurentRational:
    base = summand.base
    if isinstance(base, MultChar):
        return tate_L(base.twisted(Fraction(summand.sp_size - 1, 2)), ring)
    if isinstance(base, SupercuspidalAtom):
        return LaurentRational.one(ring)
    raise UnsupportedAtomError(f'The L-factor of the formal atom {base} is not determined by its labels')


def wd_L(V: WDParam, ring: SymbolRing = DEFAULT_RING) -> LaurentRational:
    """L(s, V); the kernel of N on chi (x) Sp(n) carries chi * |.|**((n-1)/2)"""
    return LaurentRational.product((_summand_L(summand, ring) for summand in V), ring)


def _descriptor(base: Base) -> Tuple[Base, Base, Fraction]:
    if isinstance(base, MultChar):
        return base.untwisted(), TRIVIAL, base.twist
    mu = base.twist
    if isinstance(base, TensorAtom):
        first, rest = base.factors[0], base.factors[1:]
        right = rest[0].twisted_by(mu.untwisted()) if len(rest) == 1 else TensorAtom(rest, mu.untwisted())
        return first, right, mu.twist
    if isinstance(base, ExteriorSquareAtom):
        return replace(base, twist=mu.untwisted()), TRIVIAL, mu.twist
    return base.core, mu.untwisted(), mu.twist


def _atom_factor(base: Base, kind: str, ring: SymbolRing) -> GammaExpr:
    left, right, twist = _descriptor(base)
    return GammaExpr.from_atom(GammaAtom(left, right, twist, kind=kind), ring)


def _unramified_epsilon(summand: Indecomposable, ring: SymbolRing) -> LaurentRational:
    value = summand.base.frobenius(ring)
    return LaurentRational.monomial(-value * ring.u, 1, ring) ** (summand.sp_size - 1)


def wd_epsilon(V: WDParam, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """epsilon(s, V, psi): (-chi(varpi) u X)**(n-1) on unramified chi (x) Sp(n), atoms otherwise"""
    psi.require_unramified()
    factors = []
    for summand in V:
        if summand.is_unramified:
            factors.append(GammaExpr(_unramified_epsilon(summand, ring)))
        elif summand.sp_size > 1 and not isinstance(summand.base, (MultChar, SupercuspidalAtom)):
            raise UnsupportedAtomError(f'epsilon of {summand} depends on the unknown L-factor of its base')
        else:
            factors.extend(_atom_factor(shift_base(summand.base, shift), 'epsilon', ring)
                           for shift in summand.shifts())
    return GammaExpr.product(factors, ring)


@lru_cache(maxsize=16384)
def _summand_gamma(summand: Indecomposable, psi: AdditiveCharacter, ring: SymbolRing) -> GammaExpr:
    if summand.is_unramified:
        L = _summand_L(summand, ring)
        L_dual = _summand_L(summand.dual(), ring).substitute_dual()
        return GammaExpr(_unramified_epsilon(summand, ring) * L_dual / L)

    factors = []
    for shift in summand.shifts():
        base = shift_base(summand.base, shift)
        if isinstance(base, MultChar):
            factors.append(tate_gamma(base, psi, ring))
        else:
            factors.append(_atom_factor(base, 'gamma', ring))
    return GammaExpr.product(factors, ring)


def wd_gamma(V: WDParam, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """gamma(s, V, psi) = epsilon(s, V, psi) L(1 - s, V^vee) / L(s, V), multiplicative in V"""
    psi.require_unramified()
    return GammaExpr.product((_summand_gamma(s, psi, ring) for s in V), ring)


def rs_gamma(V: WDParam, W: WDParam, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """The Rankin-Selberg factor gamma(s, V x W, psi) = gamma(s, V (x) W, psi)"""
    return wd_gamma(tensor(V, W), psi, ring)


__all__ = [
    'X',
    'DIHEDRAL_TYPES',
    'ExteriorSquareAtom',
    'GammaAtom',
    'GammaExpr',
    'Indecomposable',
    'SupercuspidalAtom',
    'TensorAtom',
    'WDParam',
    'decode_base',
    'encode_base',
    'exterior_square',
    'frobenius_eigenvalues',
    'rs_gamma',
    'shift_base',
    'tensor',
    'twist_base',
    'wd_L',
    'wd_epsilon',
    'wd_gamma',
]
