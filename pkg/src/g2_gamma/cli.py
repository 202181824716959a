"""
Local gamma-, L- and epsilon-factors of G2 x GL_r from cuspidal support data
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, List, Mapping, Optional

from g2_gamma import (
    DomainError,
    IncompleteInputError,
    InternalConsistencyError,
    MalformedInputError,
    UnsupportedConfigurationError,
)
from g2_gamma.g2lift import support_from_dict
from g2_gamma.gamma_engine import (
    L_adjoint,
    L_via_lift,
    TwoPathReport,
    check_adjoint_paths,
    check_two_paths,
    epsilon_adjoint,
    epsilon_via_lift,
    gamma_adjoint,
    gamma_via_lift,
    run_two_path_suite,
)
from g2_gamma.gamma_expr import GammaExpr
from g2_gamma.localchar import MultChar
from g2_gamma.ratfun import SymbolRing
from g2_gamma.wdrep import WDParam

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_UNSUPPORTED = 2
EXIT_CHECK_FAILED = 3

FACTORS = ('gamma', 'L', 'epsilon')
FORMATS = ('text', 'latex', 'json')


def load_json(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f'{where}: line {e.lineno} column {e.colno}: {e.msg}')


def _inline_value(text: Optional[str], where: str) -> Any:
    """Inline options are JSON, except bare scalars such as `a` or `trivial`"""
    if text is None:
        return None
    if text.lstrip()[:1] in ('{', '[', '"'):
        return load_json(text, where)
    return text.strip()


def read_instance(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as e:
        raise MalformedInputError(f'{path}: {e.strerror}')
    instance = load_json(text, str(path))
    if not isinstance(instance, Mapping):
        raise MalformedInputError(f'{path}: expected a JSON object with "pi" and "rho" fields')
    return instance


def render(value: GammaExpr, output_format: str) -> str:
    if output_format == 'latex':
        return value.to_latex()
    if output_format == 'json':
        return json.dumps(value.to_dict(), indent=2, sort_keys=True)
    return value.to_text()


def render_reports(reports: List[TwoPathReport], output_format: str) -> str:
    passed = sum(report.equal for report in reports)
    if output_format == 'json':
        summary = {'checks': len(reports), 'agree': passed, 'reports': [r.to_dict() for r in reports]}
        return json.dumps(summary, indent=2, sort_keys=True)
    lines = [
        f'DISAGREE seed={report.seed}: {report.support} x {report.rho}: {report.path_a} != {report.path_b}'
        for report in reports if not report.equal
    ]
    lines.append(f'{passed}/{len(reports)} checks agree')
    return '\n'.join(lines)


def compute(instance: Mapping, ring: SymbolRing, factor: str = 'gamma', adjoint: bool = False) -> GammaExpr:
    if instance.get('pi') is None:
        raise IncompleteInputError('pi')
    pi = support_from_dict(instance['pi'], ring, where='pi')

    if adjoint:
        chi = MultChar.from_dict(instance.get('chi') or '1', ring, where='chi')
        if factor == 'L':
            return GammaExpr(L_adjoint(pi, chi, ring))
        if factor == 'epsilon':
            return epsilon_adjoint(pi, chi, ring=ring)
        return gamma_adjoint(pi, chi, ring=ring)

    if instance.get('rho') is None:
        raise IncompleteInputError('rho')
    rho = WDParam.from_dict(instance['rho'], ring, where='rho')
    if factor == 'L':
        return GammaExpr(L_via_lift(pi, rho, ring))
    if factor == 'epsilon':
        return epsilon_via_lift(pi, rho, ring=ring)
    return gamma_via_lift(pi, rho, ring=ring)


def check(instance: Mapping, ring: SymbolRing, adjoint: bool = False,
          seed: Optional[int] = None) -> TwoPathReport:
    if instance.get('pi') is None:
        raise IncompleteInputError('pi')
    pi = support_from_dict(instance['pi'], ring, where='pi')
    if adjoint:
        chi = MultChar.from_dict(instance.get('chi') or '1', ring, where='chi')
        return check_adjoint_paths(pi, chi, ring=ring, seed=seed)
    if instance.get('rho') is None:
        raise IncompleteInputError('rho')
    return check_two_paths(pi, WDParam.from_dict(instance['rho'], ring, where='rho'), ring=ring, seed=seed)


def run(args: argparse.Namespace) -> int:
    instance = dict(read_instance(args.instance)) if args.instance else {}
    options = instance.pop('options', {}) or {}
    if not isinstance(options, Mapping):
        raise MalformedInputError(f'{args.instance}: "options" must be an object')

    for key, text in (('pi', args.pi), ('rho', args.rho), ('chi', args.chi)):
        value = _inline_value(text, f'--{key}')
        if value is not None:
            instance[key] = value

    ring = SymbolRing.from_option(args.q or options.get('q') or os.getenv('G2_GAMMA_Q') or 'symbolic')
    factor = args.factor or options.get('factor', 'gamma')
    output_format = args.format or options.get('format', 'text')
    adjoint = args.adjoint or bool(options.get('adjoint', False))
    if factor not in FACTORS:
        raise MalformedInputError(f'options.factor: expected one of {FACTORS}, not {factor!r}')
    if output_format not in FORMATS:
        raise MalformedInputError(f'options.format: expected one of {FORMATS}, not {output_format!r}')
    log.debug(f'Computing over q={ring.describe()}: factor={factor} adjoint={adjoint} format={output_format}')

    if args.check:
        if instance.get('pi') is not None:
            reports = [check(instance, ring, adjoint=adjoint, seed=args.seed)]
        else:
            reports = run_two_path_suite(args.seed, args.instances, ring, workers=args.workers, adjoint=adjoint)
        print(render_reports(reports, output_format))
        return EXIT_OK if all(report.equal for report in reports) else EXIT_CHECK_FAILED

    print(render(compute(instance, ring, factor=factor, adjoint=adjoint), output_format))
    return EXIT_OK


def main():
    parser = argparse.ArgumentParser(
        prog='g2_gamma', description=__doc__, formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    parser.add_argument('instance', nargs='?', type=Path,
                        help='JSON instance file with "pi", "rho", "chi" and "options" fields')
    parser.add_argument('--q', help='Residue field size: a prime power or "symbolic". '
                                    'Defaults to $G2_GAMMA_Q, then to symbolic')
    parser.add_argument('--pi', help='G2 cuspidal support as JSON with a "family" discriminator')
    parser.add_argument('--rho', help='GL_r parameter as a JSON list of summands, or "trivial"')
    parser.add_argument('--chi', help='Twisting character for --adjoint, as JSON or a Satake value')
    parser.add_argument('--adjoint', action='store_true', help='Compute the twisted adjoint factor of pi')
    parser.add_argument('--factor', choices=FACTORS, help='Local factor to compute (default: gamma)')
    parser.add_argument('--format', choices=FORMATS, help='Output format (default: text)')
    parser.add_argument('--check', action='store_true',
                        help='Compare the two independent computations; without --pi run a seeded random suite')
    parser.add_argument('--seed', type=int, default=0, help='Seed for the random suite')
    parser.add_argument('--instances', type=int, default=200, help='Number of random suite instances')
    parser.add_argument('--workers', type=int, default=1, help='Worker processes for the random suite')
    parser.add_argument('--verbose', action='store_true', help='Log per-instance detail')
    args = parser.parse_args()

    logging.basicConfig(stream=sys.stderr, format='%(asctime)s - %(levelname)s - %(message)s',
                        datefmt='%m/%d/%Y %I:%M:%S %p', level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        exit_code = run(args)
    except MalformedInputError as e:
        log.error(f'Malformed input: {e}')
        exit_code = EXIT_MALFORMED
    except (UnsupportedConfigurationError, DomainError) as e:
        log.error(f'Unsupported: {e}')
        exit_code = EXIT_UNSUPPORTED
    except InternalConsistencyError as e:
        log.error(f'Internal consistency check failed: {e}')
        exit_code = EXIT_CHECK_FAILED
    sys.exit(exit_code)


if __name__ == '__main__':
    main()
