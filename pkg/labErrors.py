class LabError(Exception):
    """Base class for every error raised by the laboratory modules."""


class LabDomainError(LabError, ValueError):
    """A formula was evaluated outside the set where it is defined."""


class AliasingError(LabDomainError):
    pass


class PreconditionError(LabError, ValueError):
    pass


class DepthError(PreconditionError):
    """The fluid domain has (nearly) zero depth or the bottom pokes above z = 0."""


class ConfigError(LabError):

    def __init__(self, issues):
        # issues is a list of (line or None, message)
        self.issues = list(issues)
        LabError.__init__(self, "; ".join(ConfigError.format_issue(i) for i in self.issues))

    @staticmethod
    def format_issue(issue):
        line, message = issue
        return message if line is None else f"line {line}: {message}"


class NumericalError(LabError):

    def __init__(self, message, residual = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        LabError.__init__(self, message)


class FitError(NumericalError):
    pass


class InstabilityError(NumericalError):
    pass
