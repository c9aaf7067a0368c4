"""Typed errors raised by wittlab operations."""
from typing import Optional

INPUT_ERROR = 2
BUDGET_ERROR = 3


class WittlabError(Exception):
    """Base class of every error wittlab raises on purpose."""

    exit_code = INPUT_ERROR

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__

    def as_dict(self):
        return {"error": self.__class__.__name__, "message": self.message}


class ZeroElement(WittlabError):
    pass


class ZeroSlot(WittlabError):
    pass


class UnsupportedField(WittlabError):
    pass


class UnsupportedPlace(WittlabError):
    pass


class UnsupportedSupport(WittlabError):
    pass


class FieldMismatch(WittlabError):
    pass


class ModulusMismatch(WittlabError):
    pass


class TooManyGenerators(WittlabError):
    pass


class NotQuaternionic(WittlabError):
    pass


class PreconditionFailed(WittlabError):
    pass


class NotInFundamentalIdealPower(WittlabError):
    """Raised with the first layer (1, 2 or 3) where membership fails."""

    def __init__(self, layer: int, message: str = ""):
        super().__init__(message or f"form is not in I^{layer}")
        self.layer = layer

    def as_dict(self):
        return {**super().as_dict(), "layer": self.layer}


class NotCorestrictible(WittlabError):
    pass


class NotSplittingField(WittlabError):
    pass


class InconsistentData(WittlabError):
    pass


class WitnessIncomplete(WittlabError):
    pass


class CliffordObstruction(WittlabError):
    pass


class ObstructedInput(WittlabError):
    pass


class ConditionEqCViolated(WittlabError):
    pass


class IndexFourUnsupported(WittlabError):
    pass


class RoleAssignmentFailed(WittlabError):
    pass


class SchemaError(WittlabError):
    """Malformed request; ``pointer`` is a JSON pointer into the payload."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer

    def as_dict(self):
        return {**super().as_dict(), "pointer": self.pointer}


class SearchExhausted(WittlabError):
    """A bounded constructive search ran out of candidates."""

    exit_code = BUDGET_ERROR

    def __init__(self, message: str, bound: Optional[int] = None, stage: str = ""):
        super().__init__(message)
        self.bound = bound
        self.stage = stage

    def as_dict(self):
        return {**super().as_dict(), "bound": self.bound, "stage": self.stage}


class DecompositionFailed(SearchExhausted):
    pass


class IndexUndecided(SearchExhausted):
    pass


class SearchCancelled(SearchExhausted):
    """A search stopped because its cancellation token was set."""


class InternalInconsistency(WittlabError):
    """Two independent decision paths disagreed."""

    exit_code = 1
