"""
Exception hierarchy for paramvex
"""


class ParamvexError(Exception):
    """Base class for every error raised by paramvex"""


class DimensionMismatchError(ParamvexError):
    """Vector or matrix shapes do not agree with the program dimensions"""


class DimensionLimitError(ParamvexError):
    """A program exceeds the configured size caps"""


class InvalidProgramError(ParamvexError):
    """A program definition cannot be turned into a convex program"""


class SolverError(ParamvexError):
    """An inner minimization could not produce a trustworthy outcome"""


class CyclingError(SolverError):
    """The simplex iteration cap tripped (a bug under Bland's rule)"""


class NoConvergenceError(SolverError):
    """An iterative kernel hit its iteration cap without converging"""


class UndeclaredNonAttainmentError(SolverError):
    """The infimum is approached along a tail but non-attainment was not declared"""


class BracketExpansionError(ParamvexError):
    """Bisection could not bracket the boundary of the feasible cost set"""


class PreconditionViolatedError(ParamvexError):
    """The hypotheses of a certifier do not hold on the requested region"""


class ScenarioError(ParamvexError):
    """A scenario file, program file or output path is unusable"""
