"""
Exception hierarchy shared by all surround_tools modules.

Library code raises these; only the command line converts them into exit codes.
Most classes also derive from the builtin exception a caller would naturally expect
(ValueError for bad input, RuntimeError for failures during play or solving).
"""


class SurroundError(Exception):
    """Root of every error raised by surround_tools."""


class GraphError(SurroundError, ValueError):
    """Invalid graph construction or violated graph precondition."""


class FieldError(SurroundError, ValueError):
    """Unsupported or inconsistent finite field."""


class LatinSquareError(SurroundError, ValueError):
    """Malformed Latin square or order mismatch."""


class FamilyError(SurroundError, ValueError):
    """Invalid family parameters."""


class MissingAnnotationError(FamilyError):
    """A controller needs a role annotation the graph does not carry."""


class GameRulesError(SurroundError, ValueError):
    """Query outside the game rules (wrong side to move, position out of domain)."""


class ConfigError(SurroundError, ValueError):
    """Invalid configuration value."""


class SolverBudgetError(SurroundError, RuntimeError):
    """The state space exceeds the configured budget."""

    def __init__(self, states: int, budget: int, unit: str = 'states'):
        self.states = states
        self.budget = budget
        super().__init__(f'state space of {states:,} {unit} exceeds budget of {budget:,} states')


class StrategyError(SurroundError, RuntimeError):
    """A strategy was queried outside its winning region."""


class ScriptedStrategyAbort(StrategyError):
    """A scripted controller met a situation its case analysis does not cover."""


class IllegalMoveError(SurroundError, RuntimeError):
    """A controller emitted a move the rules do not allow."""

    def __init__(self, diagnosis: str):
        self.diagnosis = diagnosis
        super().__init__(diagnosis)
