import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from conftest import WEDGE_SEED
from hypothesis import given, strategies as st

from g2_gamma import (
    AtomicLiftError,
    DomainError,
    IncompleteInputError,
    MalformedInputError,
    SatakeConstraintError,
    UnsupportedConfigurationError,
)
from g2_gamma.g2lift import (
    GL7Support,
    Heisenberg,
    NonHeisenberg,
    SupercuspidalPi,
    Torus,
    ad_parameter,
    boxplus,
    map_f,
    same_cuspidal_support,
    std_parameter,
    support_from_dict,
    support_to_dict,
)
from g2_gamma.localchar import TRIVIAL, ramified, unramified
from g2_gamma.wdrep import SupercuspidalAtom, TensorAtom, WDParam, frobenius_eigenvalues

a, b, w = sympy.symbols('a b w')
HALF = Fraction(1, 2)

CHARACTERS = [TRIVIAL, unramified(a), unramified(b, HALF), unramified(-3, -1), ramified('eta'),
              ramified('eta', 2, HALF)]
NONTRIVIAL = [unramified(2), unramified(1, HALF), unramified(a), ramified('xi'), unramified(-1)]


def _random_torus(rng):
    def character():
        alpha = sympy.Rational(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 5))
        return unramified(alpha * rng.choice([1, a, b, a * b, a / b]), Fraction(rng.randint(-2, 2), 2))

    return Torus.from_pair(character(), character())


def _sorted(values, ring):
    return sorted((ring.scalar(v) for v in values), key=sympy.default_sort_key)


def _adjoint_oracle(torus, ring):
    """The G2 roots chi_i^{+-1} and chi_i chi_j^-1 plus two copies of the trivial character"""
    values = [chi.frobenius(ring) for chi in torus.characters]
    roots = [v ** sign for v in values for sign in (1, -1)]
    roots += [values[i] / values[j] for i in range(3) for j in range(3) if i != j]
    return _sorted(roots + [1, 1], ring)


@pytest.fixture
def sigma():
    return SupercuspidalAtom('sigma', 3, central_character=unramified('w'))


@given(st.sampled_from(CHARACTERS), st.sampled_from(CHARACTERS), st.sampled_from(NONTRIVIAL))
def test_torus_constraint(chi1, chi2, defect):
    Torus.from_pair(chi1, chi2)
    with pytest.raises(SatakeConstraintError, match='must be trivial'):
        Torus(chi1, chi2, (chi1 * chi2).inverse() * defect)


def test_torus_std():
    torus = Torus.from_pair(unramified(a), ramified('eta', twist=HALF))
    chi3 = (unramified(a) * ramified('eta', twist=HALF)).inverse()
    std = std_parameter(torus)
    assert std.dim == 7
    assert std == WDParam.of(unramified(a), ramified('eta', twist=HALF), chi3, TRIVIAL, unramified(1 / a),
                             ramified('eta', twist=HALF).inverse(), chi3.inverse())
    assert std.dual() == std


def test_heisenberg_std(tau):
    std = std_parameter(Heisenberg(tau))
    assert std == WDParam.of(tau, tau.dual(), unramified(w), unramified(1 / w), TRIVIAL)
    assert std.dim == 7
    assert std.dual() == std


def test_non_heisenberg_std(dihedral_tau, non_dihedral_tau):
    std = std_parameter(NonHeisenberg(dihedral_tau))
    assert std == WDParam.of(dihedral_tau, dihedral_tau.dual(), unramified('e1'), unramified('e2'), TRIVIAL)

    std = std_parameter(NonHeisenberg(non_dihedral_tau))
    assert std.dim == 7
    assert std.dual() == std


def test_non_heisenberg_needs_ad_support(tau):
    with pytest.raises(IncompleteInputError, match='ad_support') as excinfo:
        std_parameter(NonHeisenberg(tau))
    assert excinfo.value.field == 'pi.tau.ad_support'


def test_supercuspidal_std(sigma):
    pi = SupercuspidalPi('pi0', WDParam.of(sigma))
    assert std_parameter(pi) == WDParam.of(sigma, TRIVIAL, sigma.dual())
    assert std_parameter(pi) == boxplus(WDParam.of(sigma))
    with pytest.raises(AtomicLiftError, match='boxplus'):
        std_parameter(SupercuspidalPi('pi0'))
    with pytest.raises(MalformedInputError, match='3-dimensional'):
        SupercuspidalPi('pi0', WDParam.of(unramified(a), unramified(b)))


def test_gl2_atoms_only(sigma):
    with pytest.raises(MalformedInputError, match='2-dimensional'):
        Heisenberg(sigma)
    with pytest.raises(MalformedInputError, match='2-dimensional'):
        NonHeisenberg(sigma)


def test_map_f_torus():
    chi1, chi2 = unramified(a), unramified(b, HALF)
    torus = Torus.from_pair(chi1, chi2)
    support = map_f(torus)
    assert support.levi == (1,) * 7
    assert support.reps == (chi1, chi2, torus.chi3, TRIVIAL, torus.chi3.inverse(), chi2.inverse(), chi1.inverse())
    assert support.to_param() == std_parameter(torus)


def test_map_f_heisenberg(tau):
    support = map_f(Heisenberg(tau))
    assert support.levi == (2, 2, 1, 1, 1)
    assert support.reps == (tau, tau.dual(), unramified(w), unramified(1 / w), TRIVIAL)
    assert support.to_param() == std_parameter(Heisenberg(tau))


def test_map_f_non_heisenberg(dihedral_tau, non_dihedral_tau):
    assert map_f(NonHeisenberg(dihedral_tau)).levi == (2, 2, 1, 1, 1)
    support = map_f(NonHeisenberg(non_dihedral_tau))
    assert support.levi == (2, 2, 3)
    assert support.to_param() == std_parameter(NonHeisenberg(non_dihedral_tau))


def test_map_f_flattens_dihedral_supports(dihedral_tau):
    support = map_f(NonHeisenberg(dihedral_tau))
    assert support.reps[:2] == (dihedral_tau, dihedral_tau.dual())
    assert support.to_param() == std_parameter(NonHeisenberg(dihedral_tau))
    assert support.to_param().dim == 7

    theta = SupercuspidalAtom('theta', 2, central_character=unramified(-1), dual_label='theta')
    tau = SupercuspidalAtom('tau1', 2, central_character=unramified(w), gl2_dihedral_type='dihedral-1',
                            ad_support=WDParam.of(theta, ramified('eta')))
    support = map_f(NonHeisenberg(tau))
    assert support.levi == (2, 2, 2, 1)
    assert support.reps == (tau, tau.dual(), theta, ramified('eta'))
    assert support.to_param() == std_parameter(NonHeisenberg(tau))
    assert std_parameter(NonHeisenberg(tau)) == WDParam.of(tau, tau.dual(), theta, ramified('eta'))


def test_map_f_is_undefined_on_supercuspidals(sigma):
    with pytest.raises(DomainError):
        map_f(SupercuspidalPi('pi0', WDParam.of(sigma)))


def test_gl7_support_validation(tau):
    with pytest.raises(MalformedInputError, match='sum to 7'):
        GL7Support((2, 2, 1), (tau, tau, TRIVIAL))
    with pytest.raises(MalformedInputError, match='do not match'):
        GL7Support((2, 2, 1, 1, 1), (tau, TRIVIAL, TRIVIAL, TRIVIAL, TRIVIAL))


def test_ad_parameter_of_trivial_torus():
    ad = ad_parameter(Torus(TRIVIAL, TRIVIAL, TRIVIAL))
    assert ad == WDParam.of(*[TRIVIAL] * 14)


def test_ad_parameter_matches_the_roots_of_g2(ring):
    rng = random.Random(WEDGE_SEED)
    for _ in range(100):
        torus = _random_torus(rng)
        std, ad = std_parameter(torus), ad_parameter(torus)
        assert ad.dim == 14
        assert ad.dual() == ad
        assert frobenius_eigenvalues(ad, ring) == _adjoint_oracle(torus, ring)

        std_eigenvalues = frobenius_eigenvalues(std, ring)
        pairs = [x * y for x, y in combinations(std_eigenvalues, 2)]
        assert _sorted(pairs, ring) == _sorted(std_eigenvalues + frobenius_eigenvalues(ad, ring), ring)


def test_ad_parameter_heisenberg(tau):
    ad = ad_parameter(Heisenberg(tau))
    assert ad.dim == 14
    bases = Counter(s.base for s in ad)
    assert bases[unramified(w)] == 1
    assert bases[unramified(1 / w)] == 1
    tensors = [base for base in bases if isinstance(base, TensorAtom)]
    assert len(tensors) == 1
    assert {f.label for f in tensors[0].factors} == {'tau', 'tau_dual'}
    twisted = sorted(str(base) for base in bases if isinstance(base, SupercuspidalAtom))
    assert len(twisted) == 4


def test_ad_parameter_is_unsupported_beyond_literal_differences(dihedral_tau, sigma):
    with pytest.raises(UnsupportedConfigurationError, match='multiset difference'):
        ad_parameter(NonHeisenberg(dihedral_tau))
    with pytest.raises(UnsupportedConfigurationError):
        ad_parameter(SupercuspidalPi('pi0', WDParam.of(sigma)))


def test_same_cuspidal_support(tau):
    chi1, chi2 = unramified(a), unramified(b)
    torus = Torus.from_pair(chi1, chi2)
    assert same_cuspidal_support(torus, Torus(chi2, torus.chi3, chi1))
    assert same_cuspidal_support(torus, Torus(chi1.inverse(), chi2.inverse(), torus.chi3.inverse()))
    assert not same_cuspidal_support(torus, Torus.from_pair(chi1, chi1))
    assert not same_cuspidal_support(torus, Heisenberg(tau))


def test_support_from_dict(tau):
    torus = support_from_dict({'family': 'torus', 'chars': ['a', 'b']})
    assert torus == Torus.from_pair(unramified(a), unramified(b))
    assert torus.chi3 == unramified(1 / (a * b))

    data = {'family': 'heisenberg', 'tau': {'label': 'tau', 'dim': 2, 'central_character': 'w'}}
    assert support_from_dict(data) == Heisenberg(tau)

    pi = support_from_dict({'family': 'supercuspidal', 'label': 'pi0',
                            'boxplus_source': [{'label': 'sigma', 'dim': 3}]})
    assert pi.boxplus_source.dim == 3


def test_support_dict_round_trip(tau, dihedral_tau, sigma):
    supports = [
        Torus.from_pair(unramified(a, HALF), ramified('eta')),
        Heisenberg(tau.twisted_by(unramified(b))),
        NonHeisenberg(dihedral_tau),
        SupercuspidalPi('pi0', WDParam.of(sigma)),
        SupercuspidalPi('pi1'),
    ]
    for support in supports:
        assert support_from_dict(support_to_dict(support)) == support


@pytest.mark.parametrize('data, error, message', [
    ({'family': 'unipotent'}, MalformedInputError, 'unknown family'),
    ({'family': 'torus', 'chars': ['a']}, MalformedInputError, 'pi.chars'),
    ({'family': 'torus', 'chars': ['a', 'b', 'a*b']}, SatakeConstraintError, 'pi.chars'),
    ({'family': 'heisenberg'}, IncompleteInputError, 'pi.tau'),
    ({'family': 'heisenberg', 'tau': {'label': 'sigma', 'dim': 3}}, MalformedInputError, '2-dimensional'),
    ({'family': 'supercuspidal'}, MalformedInputError, "missing field 'label'"),
    (['torus'], MalformedInputError, 'expected an object'),
])
def test_support_from_dict_errors(data, error, message):
    with pytest.raises(error, match=message):
        support_from_dict(data)
