"""gamma-, L- and epsilon-factors of G2 x GL_r, through the lift and through multiplicativity"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import repeat
from typing import List, Optional

import sympy

from g2_gamma import AtomicLiftError
from g2_gamma.g2lift import (
    G2Support,
    Heisenberg,
    NonHeisenberg,
    SupercuspidalPi,
    Torus,
    ad_parameter,
    std_parameter,
)
from g2_gamma.gamma_expr import GammaExpr
from g2_gamma.localchar import PSI, AdditiveCharacter, MultChar, unramified
from g2_gamma.ratfun import DEFAULT_RING, LaurentRational, SymbolRing, equal
from g2_gamma.wdrep import WDParam, exterior_square, rs_gamma, tensor, wd_epsilon, wd_L

log = logging.getLogger(__name__)

SATAKE_SYMBOLS = sympy.symbols('a b')
RANDOM_TWISTS = tuple(Fraction(k, 2) for k in range(-2, 3))
SUITE_RHO_DIMENSIONS = (1, 2, 3)
STD_DIMENSION = 7
ADJOINT_DIMENSION = 14


@dataclass(frozen=True)
class TwoPathReport:
    path_a: GammaExpr
    path_b: GammaExpr
    equal: bool
    support: G2Support
    rho: WDParam
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            'path_a': self.path_a.to_dict(),
            'path_b': self.path_b.to_dict(),
            'equal': self.equal,
            'support': self.support.to_dict(),
            'rho': self.rho.to_dict(),
            'seed': self.seed,
        }


def gamma_equal(first: GammaExpr, second: GammaExpr) -> bool:
    return first.atoms == second.atoms and equal(first.rational, second.rational)


def within_degree_bound(value: GammaExpr, rho: WDParam, lift_dim: int = STD_DIMENSION) -> bool:
    """Both X-degrees of the rational part are at most lift_dim * dim(rho)

    lift_dim is 7 for the standard lift and 14 for the adjoint one.
    """
    return max(value.degrees()) <= lift_dim * rho.dim


def gamma_via_lift(pi: G2Support, rho: WDParam, psi: AdditiveCharacter = PSI,
                   ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """gamma(s, pi x rho, psi) := gamma(s, Lif(pi) x rho, psi)"""
    return rs_gamma(std_parameter(pi), rho, psi, ring)


def _multiplicativity_pieces(pi: G2Support) -> List[WDParam]:
    if isinstance(pi, Torus):
        pieces = [WDParam.trivial()]
        for chi in pi.characters:
            pieces.extend([WDParam.of(chi), WDParam.of(chi.inverse())])
        return pieces
    if isinstance(pi, Heisenberg):
        tau, omega = pi.tau, pi.omega
        return [WDParam.of(tau), WDParam.of(tau.dual()), WDParam.of(omega), WDParam.of(omega.inverse()),
                WDParam.trivial()]
    if isinstance(pi, NonHeisenberg):
        return [WDParam.of(pi.tau), WDParam.of(pi.tau.dual()), pi.ad_support]
    if isinstance(pi, SupercuspidalPi) and pi.boxplus_source is not None:
        sigma = pi.boxplus_source
        return [sigma, WDParam.trivial(), sigma.dual()]
    raise AtomicLiftError(f'No multiplicativity formula applies to {pi}')


def gamma_via_multiplicativity(pi: G2Support, rho: WDParam, psi: AdditiveCharacter = PSI,
                               ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """The product formula for the family of pi, applied to rho one summand at a time

    gamma(s, rho, psi) in the torus and Heisenberg formulas is the factor of the
    trivial character against rho.
    """
    pieces = _multiplicativity_pieces(pi)
    factors = []
    for summand in rho:
        single = WDParam((summand,))
        factors.extend(rs_gamma(piece, single, psi, ring) for piece in pieces)
    return GammaExpr.product(factors, ring)


def L_via_lift(pi: G2Support, rho: WDParam, ring: SymbolRing = DEFAULT_RING) -> LaurentRational:
    return wd_L(tensor(std_parameter(pi), rho), ring)


def epsilon_via_lift(pi: G2Support, rho: WDParam, psi: AdditiveCharacter = PSI,
                     ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    return wd_epsilon(tensor(std_parameter(pi), rho), psi, ring)


def gamma_adjoint(pi: G2Support, chi: MultChar, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING,
                  rewrite_three_dim: bool = False) -> GammaExpr:
    """gamma(s, pi, Ad x chi, psi) := gamma(s, Lif(pi), wedge^2 x chi, psi) / gamma(s, Lif(pi) x chi, psi)"""
    std = std_parameter(pi)
    twist = WDParam.of(chi)
    wedge = exterior_square(std, formal=True, rewrite_three_dim=rewrite_three_dim)
    return rs_gamma(wedge, twist, psi, ring) / rs_gamma(std, twist, psi, ring)


def gamma_adjoint_direct(pi: G2Support, chi: MultChar, psi: AdditiveCharacter = PSI,
                         ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    return rs_gamma(ad_parameter(pi), WDParam.of(chi), psi, ring)


def L_adjoint(pi: G2Support, chi: MultChar, ring: SymbolRing = DEFAULT_RING) -> LaurentRational:
    std = std_parameter(pi)
    twist = WDParam.of(chi)
    return wd_L(tensor(exterior_square(std), twist), ring) / wd_L(tensor(std, twist), ring)


def epsilon_adjoint(pi: G2Support, chi: MultChar, psi: AdditiveCharacter = PSI,
                    ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    std = std_parameter(pi)
    twist = WDParam.of(chi)
    wedge = exterior_square(std, formal=True)
    return wd_epsilon(tensor(wedge, twist), psi, ring) / wd_epsilon(tensor(std, twist), psi, ring)


def functional_equation_defect(pi: G2Support, rho: WDParam, psi: AdditiveCharacter = PSI,
                               ring: SymbolRing = DEFAULT_RING) -> GammaExpr:
    """gamma(s, pi x rho) * gamma(1 - s, pi x rho^vee); exactly 1 for unramified data"""
    return gamma_via_lift(pi, rho, psi, ring) * gamma_via_lift(pi, rho.dual(), psi, ring).substitute_dual()


def check_two_paths(pi: G2Support, rho: WDParam, psi: AdditiveCharacter = PSI, ring: SymbolRing = DEFAULT_RING,
                    seed: Optional[int] = None) -> TwoPathReport:
    path_a = gamma_via_lift(pi, rho, psi, ring)
    path_b = gamma_via_multiplicativity(pi, rho, psi, ring)
    report = TwoPathReport(path_a, path_b, gamma_equal(path_a, path_b), pi, rho, seed)
    if not report.equal:
        log.warning(f'Lift and multiplicativity disagree for {pi} x {rho}')
    return report


def check_adjoint_paths(pi: G2Support, chi: MultChar, psi: AdditiveCharacter = PSI,
                        ring: SymbolRing = DEFAULT_RING, seed: Optional[int] = None) -> TwoPathReport:
    path_a = gamma_adjoint(pi, chi, psi, ring)
    path_b = gamma_adjoint_direct(pi, chi, psi, ring)
    report = TwoPathReport(path_a, path_b, gamma_equal(path_a, path_b), pi, WDParam.of(chi), seed)
    if not report.equal:
        log.warning(f'Adjoint factor via wedge^2 and via Ad(pi) disagree for {pi} x {chi}')
    return report


def instance_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _random_value(rng: random.Random, symbols=()) -> sympy.Expr:
    value = sympy.Rational(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 5))
    if symbols:
        value *= sympy.sympify(rng.choice([1, *symbols])) ** rng.choice([1, -1])
    return value


def random_character(rng: random.Random, symbols=()) -> MultChar:
    return unramified(_random_value(rng, symbols), rng.choice(RANDOM_TWISTS))


def random_torus(rng: random.Random) -> Torus:
    """chi1, chi2 with Satake values r1*a, r2*b and chi3 = (chi1 chi2)^-1"""
    a, b = SATAKE_SYMBOLS
    chi1 = unramified(_random_value(rng) * a, rng.choice(RANDOM_TWISTS))
    chi2 = unramified(_random_value(rng) * b, rng.choice(RANDOM_TWISTS))
    return Torus.from_pair(chi1, chi2)


def random_rho(rng: random.Random, dim: int) -> WDParam:
    return WDParam.of(*(random_character(rng, SATAKE_SYMBOLS) for _ in range(dim)))


def _suite_instance(seed: int, adjoint: bool, ring: SymbolRing, psi: AdditiveCharacter) -> List[TwoPathReport]:
    rng = random.Random(seed)
    pi = random_torus(rng)
    if adjoint:
        return [check_adjoint_paths(pi, random_character(rng), psi, ring, seed=seed)]
    return [check_two_paths(pi, random_rho(rng, dim), psi, ring, seed=seed) for dim in SUITE_RHO_DIMENSIONS]


def run_two_path_suite(seed: int, instances: int, ring: SymbolRing = DEFAULT_RING, workers: int = 1,
                       psi: AdditiveCharacter = PSI, adjoint: bool = False) -> List[TwoPathReport]:
    """Seeded random torus supports, each against unramified rho of dimension 1, 2 and 3

    With adjoint set, each support gives a single adjoint check against a random
    character instead. Reports come back in instance order whatever the number of
    workers.
    """
    seeds = [instance_seed(seed, index) for index in range(instances)]
    kind = 'adjoint' if adjoint else 'two-path'
    log.info(f'Running {kind} checks on {instances} supports with seed {seed} over q={ring.describe()}')
    arguments = (seeds, repeat(adjoint), repeat(ring), repeat(psi))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            batches = list(executor.map(_suite_instance, *arguments))
    else:
        batches = list(map(_suite_instance, *arguments))

    reports = [report for batch in batches for report in batch]
    passed = sum(report.equal for report in reports)
    log.info(f'{passed}/{len(reports)} checks agree')
    return reports
