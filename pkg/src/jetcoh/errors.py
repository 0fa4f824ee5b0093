"""Exception hierarchy shared by all modules."""


class JetcohError(Exception):
    """Base class. ``module`` names the subsystem that raised."""

    module = "jetcoh"

    def __init__(self, message, module=None):
        if module is not None:
            self.module = module
        super().__init__(message)

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class DomainError(JetcohError, ValueError):
    pass


class ConsistencyError(JetcohError):
    """An identity that must hold by construction did not."""


class ConstructionError(ConsistencyError):
    pass


class PreconditionError(JetcohError, ValueError):
    pass
