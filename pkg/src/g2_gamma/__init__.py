"""Exact local gamma-, L- and epsilon-factors for G2 x GL_r via the lift to GL_7"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    print(f'{__name__} package is not installed!\n'
          f'Install in editable/develop mode via (from the top of this repo):\n'
          f'   python -m pip install -e .[develop]\n'
          f'Or, to just get the version number use:\n'
          f'   python setup.py --version')


class G2GammaError(Exception):
    """Base class for every error raised by g2_gamma"""


class MalformedInputError(G2GammaError, ValueError):
    """Input data violates the schema or an algebraic precondition"""


class IncompleteInputError(MalformedInputError):
    """A field needed for the requested computation was not supplied"""

    def __init__(self, field: str, message: str = ''):
        self.field = field
        super().__init__(f'{field}: {message or "required for this computation but not provided"}')


class SatakeConstraintError(MalformedInputError):
    """Torus data with chi1 * chi2 * chi3 != 1"""


class DomainError(G2GammaError, ValueError):
    """Operation applied outside of its domain of definition"""


class UnsupportedConfigurationError(G2GammaError, NotImplementedError):
    """A configuration this release deliberately does not compute"""


class UnsupportedAtomError(UnsupportedConfigurationError):
    """A formal atom appears where an explicit decomposition is required"""


class AtomicLiftError(UnsupportedConfigurationError):
    """A supercuspidal G2 support without a boxplus source has no computable lift"""


class InternalConsistencyError(G2GammaError, RuntimeError):
    """An identity that must always hold has failed"""


__all__ = [
    '__version__',
    'AtomicLiftError',
    'DomainError',
    'G2GammaError',
    'IncompleteInputError',
    'InternalConsistencyError',
    'MalformedInputError',
    'SatakeConstraintError',
    'UnsupportedAtomError',
    'UnsupportedConfigurationError',
]
