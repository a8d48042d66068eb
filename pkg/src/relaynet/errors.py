"""Exception hierarchy shared across the package."""


class RelayNetError(Exception):
    """Base class for all package-specific errors."""


class InvalidScenarioError(RelayNetError):
    """Scenario violates a structural invariant (duplicate terminals,
    terminal inside an obstacle, coincident equal obstacles, ...)."""


class DegenerateGeometryError(RelayNetError):
    """A predicate hit an input configuration where its answer is
    ill-defined (e.g. a path vertex exactly on a crossing segment)."""


class NoPathError(RelayNetError):
    """Requested endpoints are not connected in the graph."""


class NoTreeError(RelayNetError):
    """No tree spanning the requested terminals exists."""


class NotATreeError(RelayNetError):
    """An edge set expected to be a tree contains a cycle or is
    disconnected."""


class BudgetExceededError(RelayNetError):
    """Problem size exceeds a configured exact-solver limit."""


class NoSolutionError(RelayNetError):
    """The requested construction has no solution for the given
    parameters."""


class OutOfClosedFormError(NoSolutionError):
    """Parameters fall outside the regime the closed-form construction
    covers; a numeric optimizer must be used instead."""
