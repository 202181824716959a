import random
from fractions import Fraction

import pytest
import sympy
from conftest import ADJOINT_SEED, FUNCTIONAL_EQUATION_SEED, MULTIPLICATIVITY_SEED, TWO_PATH_SEED

from g2_gamma import AtomicLiftError, UnsupportedAtomError, UnsupportedConfigurationError
from g2_gamma import gamma_engine
from g2_gamma.g2lift import Heisenberg, NonHeisenberg, SupercuspidalPi, Torus
from g2_gamma.gamma_expr import GammaAtom, GammaExpr
from g2_gamma.localchar import TRIVIAL, AdditiveCharacter, ramified, tate_gamma, unramified
from g2_gamma.ratfun import LaurentRational, SymbolRing
from g2_gamma.wdrep import ExteriorSquareAtom, Indecomposable, SupercuspidalAtom, TensorAtom, WDParam

a, b, w = sympy.symbols('a b w')
HALF = Fraction(1, 2)
TRIVIAL_TORUS = Torus(TRIVIAL, TRIVIAL, TRIVIAL)


@pytest.fixture
def sigma():
    return SupercuspidalAtom('sigma', 3, central_character=unramified('w'))


def _random_rho(rng, tau):
    summands = []
    for _ in range(rng.randint(1, 2)):
        base = rng.choice([
            gamma_engine.random_character(rng, gamma_engine.SATAKE_SYMBOLS),
            ramified('eta', twist=rng.choice(gamma_engine.RANDOM_TWISTS)),
            tau,
        ])
        summands.append(Indecomposable(base, rng.randint(1, 2)))
    return WDParam(tuple(summands))


def test_two_path_suite():
    reports = gamma_engine.run_two_path_suite(TWO_PATH_SEED, 200)
    assert len(reports) == 600
    for report in reports:
        assert report.equal
        assert report.path_a.is_explicit
        assert gamma_engine.within_degree_bound(report.path_a, report.rho)
    assert [report.rho.dim for report in reports] == [1, 2, 3] * 200
    expected_seeds = [gamma_engine.instance_seed(TWO_PATH_SEED, i) for i in range(200) for _ in range(3)]
    assert [report.seed for report in reports] == expected_seeds


@pytest.mark.parametrize('q_value', [4, 5], ids=['q4', 'q5'])
def test_two_path_suite_numeric(q_value):
    reports = gamma_engine.run_two_path_suite(TWO_PATH_SEED, 20, SymbolRing(q_value))
    assert len(reports) == 60
    for report in reports:
        assert report.equal
        assert gamma_engine.within_degree_bound(report.path_a, report.rho)


def test_suite_is_deterministic_across_workers():
    serial = gamma_engine.run_two_path_suite(3, 6, workers=1)
    parallel = gamma_engine.run_two_path_suite(3, 6, workers=2)
    assert len(serial) == 18
    assert serial == parallel
    assert serial == gamma_engine.run_two_path_suite(3, 6)


def test_torus_against_trivial():
    chi1, chi2 = unramified(a), unramified(b, HALF)
    torus = Torus.from_pair(chi1, chi2)
    characters = [chi1, chi2, torus.chi3, TRIVIAL, chi1.inverse(), chi2.inverse(), torus.chi3.inverse()]
    expected = GammaExpr.product(tate_gamma(chi) for chi in characters)
    assert gamma_engine.gamma_via_lift(torus, WDParam.trivial()) == expected
    assert gamma_engine.gamma_via_lift(TRIVIAL_TORUS, WDParam.trivial()) == tate_gamma(TRIVIAL) ** 7


def test_heisenberg_against_trivial(tau):
    gamma = gamma_engine.gamma_via_lift(Heisenberg(tau), WDParam.trivial())
    assert gamma.atom_counter == {GammaAtom(tau, TRIVIAL): 1, GammaAtom(tau.dual(), TRIVIAL): 1}
    expected = tate_gamma(unramified(w)) * tate_gamma(unramified(1 / w)) * tate_gamma(TRIVIAL)
    assert gamma.rational == expected.rational


def test_multiplicativity(tau, dihedral_tau, sigma):
    rng = random.Random(MULTIPLICATIVITY_SEED)
    supports = [
        lambda: gamma_engine.random_torus(rng),
        lambda: Heisenberg(tau.twisted_by(gamma_engine.random_character(rng))),
        lambda: NonHeisenberg(dihedral_tau),
        lambda: SupercuspidalPi('pi0', WDParam.of(sigma)),
    ]
    for _ in range(100):
        pi = rng.choice(supports)()
        rho = _random_rho(rng, tau)
        path_a = gamma_engine.gamma_via_lift(pi, rho)
        path_b = gamma_engine.gamma_via_multiplicativity(pi, rho)
        assert gamma_engine.gamma_equal(path_a, path_b)
        assert gamma_engine.within_degree_bound(path_a, rho)

        other = _random_rho(rng, tau)
        split = gamma_engine.gamma_via_lift(pi, rho) * gamma_engine.gamma_via_lift(pi, other)
        assert gamma_engine.gamma_equal(gamma_engine.gamma_via_lift(pi, rho + other), split)


def test_functional_equation(ring):
    rng = random.Random(FUNCTIONAL_EQUATION_SEED)
    for _ in range(50):
        pi = gamma_engine.random_torus(rng)
        rho = WDParam(tuple(Indecomposable(gamma_engine.random_character(rng, gamma_engine.SATAKE_SYMBOLS),
                                           rng.randint(1, 3)) for _ in range(rng.randint(1, 2))))
        assert gamma_engine.within_degree_bound(gamma_engine.gamma_via_lift(pi, rho, ring=ring), rho)
        defect = gamma_engine.functional_equation_defect(pi, rho, ring=ring)
        assert defect.is_explicit
        assert defect.rational.is_one


def test_adjoint_suite():
    reports = gamma_engine.run_two_path_suite(ADJOINT_SEED, 100, adjoint=True)
    assert all(report.equal for report in reports)
    assert all(report.rho.dim == 1 for report in reports)
    for report in reports:
        assert gamma_engine.within_degree_bound(report.path_a, report.rho, gamma_engine.ADJOINT_DIMENSION)


def test_adjoint_of_trivial_torus():
    assert gamma_engine.gamma_adjoint(TRIVIAL_TORUS, TRIVIAL) == tate_gamma(TRIVIAL) ** 14
    assert gamma_engine.L_adjoint(TRIVIAL_TORUS, TRIVIAL) == LaurentRational.from_expr('1/(1 - X)**14')
    assert gamma_engine.epsilon_adjoint(TRIVIAL_TORUS, TRIVIAL).rational.is_one


@pytest.mark.parametrize('chi', [TRIVIAL, unramified(a, HALF), ramified('eta')], ids=['trivial', 'unramified',
                                                                                        'ramified'])
def test_heisenberg_adjoint(tau, chi):
    omega = tau.determinant()
    gamma = gamma_engine.gamma_adjoint(Heisenberg(tau), chi)
    assert gamma == gamma_engine.gamma_adjoint_direct(Heisenberg(tau), chi)
    assert gamma_engine.within_degree_bound(gamma, WDParam.of(chi), gamma_engine.ADJOINT_DIMENSION)

    expected = tate_gamma(omega * chi) * tate_gamma(omega.inverse() * chi)
    assert gamma.rational == expected.rational

    atoms = gamma.atom_counter
    for atom, exponent in expected.atoms:
        assert atoms.pop(atom) == exponent
    for base in (tau, tau.dual()):
        for mu in (omega * chi, omega.inverse() * chi):
            assert atoms.pop(GammaAtom(base, mu.untwisted(), mu.twist)) == 1

    (tensor_atom, exponent), = atoms.items()
    assert exponent == 1
    assert {tensor_atom.left.label, tensor_atom.right.label} == {'tau', 'tau_dual'}
    assert tensor_atom.right.twist == chi.untwisted()
    assert tensor_atom.twist == chi.twist


def test_non_dihedral_adjoint(non_dihedral_tau):
    pi = NonHeisenberg(non_dihedral_tau)
    formal = gamma_engine.gamma_adjoint(pi, TRIVIAL)
    assert any(isinstance(atom.left, ExteriorSquareAtom) for atom, _ in formal.atoms)

    rewritten = gamma_engine.gamma_adjoint(pi, TRIVIAL, rewrite_three_dim=True)
    assert not any(isinstance(atom.left, ExteriorSquareAtom) for atom, _ in rewritten.atoms)
    assert rewritten.rational == formal.rational


def test_L_and_epsilon_via_lift(tau):
    assert gamma_engine.L_via_lift(TRIVIAL_TORUS, WDParam.trivial()) == LaurentRational.from_expr('1/(1 - X)**7')
    assert gamma_engine.L_via_lift(Heisenberg(tau), WDParam.trivial()) == LaurentRational.from_expr(
        '1/((1 - w*X)*(1 - X/w)*(1 - X))'
    )

    torus = Torus.from_pair(unramified(a), unramified(b, HALF))
    assert gamma_engine.epsilon_via_lift(torus, WDParam.trivial()).rational.is_one
    epsilon = gamma_engine.epsilon_via_lift(torus, WDParam.of(TRIVIAL, sp_size=2))
    assert epsilon.rational == LaurentRational.from_expr('-u**7*X**7')

    epsilon = gamma_engine.epsilon_via_lift(Heisenberg(tau), WDParam.trivial())
    assert epsilon.atom_counter == {GammaAtom(tau, TRIVIAL, kind='epsilon'): 1,
                                    GammaAtom(tau.dual(), TRIVIAL, kind='epsilon'): 1}


def test_L_adjoint_needs_explicit_summands(tau):
    with pytest.raises(UnsupportedAtomError):
        gamma_engine.L_adjoint(Heisenberg(tau), TRIVIAL)


def test_supercuspidal_lift(sigma):
    rho = WDParam.of(unramified(a), ramified('eta'))
    report = gamma_engine.check_two_paths(SupercuspidalPi('pi0', WDParam.of(sigma)), rho)
    assert report.equal

    with pytest.raises(AtomicLiftError):
        gamma_engine.gamma_via_lift(SupercuspidalPi('pi1'), rho)
    with pytest.raises(AtomicLiftError):
        gamma_engine.gamma_via_multiplicativity(SupercuspidalPi('pi1'), rho)


def test_ramified_additive_character():
    with pytest.raises(UnsupportedConfigurationError):
        gamma_engine.gamma_via_lift(TRIVIAL_TORUS, WDParam.trivial(), psi=AdditiveCharacter(1))


def test_report_to_dict(tau):
    report = gamma_engine.check_two_paths(Heisenberg(tau), WDParam.of(unramified(a)), seed=5)
    data = report.to_dict()
    assert set(data) == {'path_a', 'path_b', 'equal', 'support', 'rho', 'seed'}
    assert data['equal'] is True
    assert data['seed'] == 5
    assert data['support']['family'] == 'heisenberg'
    assert GammaExpr.from_dict(data['path_a']) == report.path_a


def test_within_degree_bound():
    rho = WDParam.trivial()
    assert gamma_engine.within_degree_bound(gamma_engine.gamma_via_lift(TRIVIAL_TORUS, rho), rho)
    assert not gamma_engine.within_degree_bound(tate_gamma(TRIVIAL) ** 8, rho)


def test_random_characters_are_exact():
    rng = random.Random(TWO_PATH_SEED)
    for _ in range(200):
        chi = gamma_engine.random_character(rng, gamma_engine.SATAKE_SYMBOLS)
        assert not chi.alpha.has(sympy.Float)
        assert chi.alpha.free_symbols <= set(gamma_engine.SATAKE_SYMBOLS)
        assert gamma_engine.random_rho(rng, 3).dim == 3
