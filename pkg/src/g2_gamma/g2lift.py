"""Cuspidal supports of G2, the lift to GL_7 and the support map f"""

import logging
from dataclasses import dataclass
from typing import ClassVar, Mapping, Optional, Tuple, Union

from g2_gamma import (
    AtomicLiftError,
    DomainError,
    IncompleteInputError,
    InternalConsistencyError,
    MalformedInputError,
    SatakeConstraintError,
    UnsupportedConfigurationError,
)
from g2_gamma.localchar import TRIVIAL, MultChar
from g2_gamma.ratfun import DEFAULT_RING, SymbolRing
from g2_gamma.wdrep import Base, SupercuspidalAtom, WDParam, decode_base, exterior_square

log = logging.getLogger(__name__)

FAMILIES = ('torus', 'heisenberg', 'non_heisenberg', 'supercuspidal')


@dataclass(frozen=True)
class Torus:
    """Principal series support [T, chi] with chi1 * chi2 * chi3 = 1"""
    chi1: MultChar
    chi2: MultChar
    chi3: MultChar
    family: ClassVar[str] = 'torus'

    def __post_init__(self):
        product = self.chi1 * self.chi2 * self.chi3
        if not product.is_trivial:
            raise SatakeConstraintError(f'chi1 * chi2 * chi3 must be trivial, not {product}')

    @classmethod
    def from_pair(cls, chi1: MultChar, chi2: MultChar) -> 'Torus':
        return cls(chi1, chi2, (chi1 * chi2).inverse())

    @property
    def characters(self) -> Tuple[MultChar, MultChar, MultChar]:
        return self.chi1, self.chi2, self.chi3

    def to_dict(self) -> dict:
        return {'family': self.family, 'chars': [chi.to_dict() for chi in self.characters]}

    def __str__(self) -> str:
        return f'Torus({", ".join(str(chi) for chi in self.characters)})'


def _require_gl2_atom(tau, family: str):
    if not isinstance(tau, SupercuspidalAtom) or tau.dim != 2:
        raise MalformedInputError(f'{family}: tau must be a 2-dimensional supercuspidal atom, not {tau}')


@dataclass(frozen=True)
class Heisenberg:
    """[M, tau] for the Levi GL_2 of the Heisenberg parabolic"""
    tau: SupercuspidalAtom
    family: ClassVar[str] = 'heisenberg'

    def __post_init__(self):
        _require_gl2_atom(self.tau, self.family)

    @property
    def omega(self) -> MultChar:
        return self.tau.determinant()

    def to_dict(self) -> dict:
        return {'family': self.family, 'tau': self.tau.to_dict()}

    def __str__(self) -> str:
        return f'Heisenberg({self.tau})'


@dataclass(frozen=True)
class NonHeisenberg:
    """[L, tau] for the other maximal parabolic; Ad(tau) enters through tau.ad_support"""
    tau: SupercuspidalAtom
    family: ClassVar[str] = 'non_heisenberg'

    def __post_init__(self):
        _require_gl2_atom(self.tau, self.family)

    @property
    def ad_support(self) -> WDParam:
        if self.tau.ad_support is None:
            raise IncompleteInputError('pi.tau.ad_support', 'the cuspidal support of Ad(tau) is needed here')
        return self.tau.ad_support

    def to_dict(self) -> dict:
        return {'family': self.family, 'tau': self.tau.to_dict()}

    def __str__(self) -> str:
        return f'NonHeisenberg({self.tau})'


@dataclass(frozen=True)
class SupercuspidalPi:
    """An opaque supercuspidal pi, optionally the boxplus transfer of a 3-dimensional sigma"""
    label: str
    boxplus_source: Optional[WDParam] = None
    family: ClassVar[str] = 'supercuspidal'

    def __post_init__(self):
        if self.boxplus_source is not None and self.boxplus_source.dim != 3:
            raise MalformedInputError(
                f'{self.label}: boxplus_source must be 3-dimensional, not {self.boxplus_source.dim}'
            )

    def to_dict(self) -> dict:
        data = {'family': self.family, 'label': self.label}
        if self.boxplus_source is not None:
            data['boxplus_source'] = self.boxplus_source.to_dict()
        return data

    def __str__(self) -> str:
        return f'Supercuspidal({self.label})'


G2Support = Union[Torus, Heisenberg, NonHeisenberg, SupercuspidalPi]


@dataclass(frozen=True)
class GL7Support:
    """A cuspidal support of GL_7: Levi block sizes and the representation on each block"""
    levi: Tuple[int, ...]
    reps: Tuple[Base, ...]

    def __post_init__(self):
        if sum(self.levi) != 7:
            raise MalformedInputError(f'GL_7 Levi blocks must sum to 7, not {self.levi}')
        if len(self.levi) != len(self.reps) or any(n != rep.dim for n, rep in zip(self.levi, self.reps)):
            raise MalformedInputError(f'Block sizes {self.levi} do not match the representations given')

    def to_param(self) -> WDParam:
        return WDParam.of(*self.reps)

    def __str__(self) -> str:
        return f'GL{self.levi}: ' + ' x '.join(str(rep) for rep in self.reps)


def boxplus(sigma: WDParam) -> WDParam:
    """sigma + 1 + sigma^vee for a 3-dimensional parameter"""
    if sigma.dim != 3:
        raise MalformedInputError(f'boxplus is defined on 3-dimensional parameters, not dim {sigma.dim}')
    return sigma + WDParam.trivial() + sigma.dual()


def std_parameter(support: G2Support) -> WDParam:
    """The parameter of Lif(pi), std composed with the L-parameter of pi"""
    if isinstance(support, Torus):
        characters = support.characters
        return WDParam.of(*characters, TRIVIAL, *(chi.inverse() for chi in characters))
    if isinstance(support, Heisenberg):
        tau = support.tau
        return WDParam.of(tau, tau.dual(), support.omega, support.omega.inverse(), TRIVIAL)
    if isinstance(support, NonHeisenberg):
        tau = support.tau
        return WDParam.of(tau, tau.dual()) + support.ad_support
    if isinstance(support, SupercuspidalPi):
        if support.boxplus_source is None:
            raise AtomicLiftError(
                f'{support.label} has no boxplus source; its lift to GL_7 is not computable from labels'
            )
        return boxplus(support.boxplus_source)
    raise MalformedInputError(f'Unknown support {support!r}')


def map_f(support: G2Support) -> GL7Support:
    """f: SC(G2) -> SC(GL_7)"""
    if isinstance(support, Torus):
        characters = support.characters
        return GL7Support((1,) * 7, (*characters, TRIVIAL, *(chi.inverse() for chi in reversed(characters))))
    if isinstance(support, Heisenberg):
        tau, omega = support.tau, support.omega
        return GL7Support((2, 2, 1, 1, 1), (tau, tau.dual(), omega, omega.inverse(), TRIVIAL))
    if isinstance(support, NonHeisenberg):
        tau = support.tau
        # GL_3 | GL_2 x GL_1 | GL_1^3 depending on how dihedral tau is
        blocks = sorted(support.ad_support, key=lambda s: -s.dim)
        reps = (tau, tau.dual(), *(s.base for s in blocks))
        return GL7Support(tuple(rep.dim for rep in reps), reps)
    raise DomainError(f'f is only defined on supports of non-supercuspidal representations, not {support}')


def ad_parameter(support: G2Support) -> WDParam:
    """The 14-dimensional parameter Ad(pi) with wedge^2(std) = std + Ad"""
    std = std_parameter(support)
    wedge = exterior_square(std, formal=True)
    try:
        ad = wedge.remove(std)
    except DomainError as e:
        if isinstance(support, (Torus, Heisenberg)):
            raise InternalConsistencyError(f'std is not contained in wedge^2(std) for {support}: {e}')
        raise UnsupportedConfigurationError(
            f'Ad({support}) cannot be read off wedge^2(std) as a literal multiset difference'
        )
    if ad.dim != 14:
        raise InternalConsistencyError(f'Ad({support}) has dimension {ad.dim}, not 14')
    log.debug(f'Ad({support}) = {ad}')
    return ad


def same_cuspidal_support(first: G2Support, second: G2Support) -> bool:
    """Compare supports through their lifted parameters, which ignores Weyl-group reordering"""
    return std_parameter(first) == std_parameter(second)


def _torus_from_dict(data: Mapping, ring: SymbolRing, where: str) -> Torus:
    chars = data.get('chars')
    if not isinstance(chars, list) or len(chars) not in (2, 3):
        raise MalformedInputError(f'{where}.chars: expected a list of 2 or 3 characters')
    characters = [MultChar.from_dict(c, ring, where=f'{where}.chars[{i}]') for i, c in enumerate(chars)]
    if len(characters) == 2:
        return Torus.from_pair(*characters)
    try:
        return Torus(*characters)
    except SatakeConstraintError as e:
        raise SatakeConstraintError(f'{where}.chars: {e}')


def _tau_from_dict(data: Mapping, ring: SymbolRing, where: str) -> SupercuspidalAtom:
    if 'tau' not in data:
        raise IncompleteInputError(f'{where}.tau', 'a 2-dimensional supercuspidal atom is required')
    tau = decode_base(dict(data['tau'], kind='supercuspidal') if isinstance(data['tau'], Mapping) else data['tau'],
                      ring, where=f'{where}.tau')
    _require_gl2_atom(tau, f'{where}.tau')
    return tau


def support_from_dict(data: Mapping, ring: SymbolRing = DEFAULT_RING, where: str = 'pi') -> G2Support:
    if not isinstance(data, Mapping):
        raise MalformedInputError(f'{where}: expected an object with a "family" field, not {data!r}')
    family = data.get('family')
    if family == 'torus':
        return _torus_from_dict(data, ring, where)
    if family == 'heisenberg':
        return Heisenberg(_tau_from_dict(data, ring, where))
    if family == 'non_heisenberg':
        return NonHeisenberg(_tau_from_dict(data, ring, where))
    if family == 'supercuspidal':
        if 'label' not in data:
            raise MalformedInputError(f'{where}: missing field \'label\'')
        source = None
        if data.get('boxplus_source') is not None:
            source = WDParam.from_dict(data['boxplus_source'], ring, where=f'{where}.boxplus_source')
        return SupercuspidalPi(str(data['label']), source)
    raise MalformedInputError(f'{where}.family: unknown family {family!r}; expected one of {FAMILIES}')


def support_to_dict(support: G2Support) -> dict:
    return support.to_dict()
