"""Exception types raised by qbell."""


class QbellError(ValueError):
    """Base class for domain errors; the CLI maps these to exit code 2."""

    code = "QbellError"

    def record(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DegenerateProbe(QbellError):
    """The quasi-Bell superposition has (numerically) zero norm."""

    code = "DegenerateProbe"


class OutOfRange(QbellError):
    """A parameter lies outside the supported domain."""

    code = "OutOfRange"


class NoRoot(QbellError):
    """Energy inversion found no component energy reaching the target."""

    code = "NoRoot"


class TruncationNotConverged(QbellError):
    """Fock truncation could not be made large enough for the requested state."""

    code = "TruncationNotConverged"
