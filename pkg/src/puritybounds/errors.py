class ContractViolation(ValueError):
    """Input violates an operation's precondition."""


class NotProductStateError(ContractViolation):
    pass


class CausticError(ContractViolation):
    """Shape transport hit a (near-)singular denominator."""


class InvariantViolation(RuntimeError):
    """A mathematical invariant failed on computed data.

    ``names`` lists the failing properties.
    """

    def __init__(self, names, detail=""):
        self.names = list(names)
        msg = "invariant violated: " + ", ".join(self.names)
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
