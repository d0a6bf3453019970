"""Error types shared across the engine.

Every engine-level failure derives from EngineError so the command layer can
relay it to clients with a stable ``code`` (the class name) and message.
"""


class EngineError(Exception):
    """Base class for all expected engine failures."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- dom / markup ---------------------------------------------------------

class MalformedMarkup(EngineError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ForeignNode(EngineError):
    pass


class UnboundVariable(EngineError):
    pass


class NoSuchNode(EngineError):
    pass


class NotInteractive(EngineError):
    pass


class NoControl(EngineError):
    pass


class UnknownPage(EngineError):
    pass


# --- synthesis ------------------------------------------------------------

class DifferentShape(EngineError):
    pass


class TooManyHoles(EngineError):
    pass


# --- catalog --------------------------------------------------------------

class EmptyDemonstration(EngineError):
    pass


class MultipleSemanticActs(EngineError):
    pass


class TargetNotFound(EngineError):
    pass


class StructuralDrift(EngineError):
    pass


# --- session --------------------------------------------------------------

class EmptyInput(EngineError):
    pass


class NonRectangular(EngineError):
    pass


class BadIndex(EngineError):
    pass


class WrongMode(EngineError):
    pass


class AtStart(EngineError):
    pass


class AtEnd(EngineError):
    pass


class NoPendingPrediction(EngineError):
    pass


class NothingToPredict(EngineError):
    pass


# --- service / cli --------------------------------------------------------

class UnknownCommand(EngineError):
    pass


class SessionClosed(EngineError):
    pass


class ScenarioError(EngineError):
    pass
