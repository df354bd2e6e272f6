"""Exception hierarchy shared by every module."""


class ProbWorldsError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(ProbWorldsError):
    def __init__(self, message, position=None, token=None):
        self.position = position
        self.token = token
        if position is not None:
            message = f"{message} at position {position}"
            if token is not None:
                message += f" (token {token!r})"
        super().__init__(message)


class UnknownPredicateError(FormulaSyntaxError):
    pass


class ArityMismatchError(FormulaSyntaxError):
    pass


class NotASentenceError(ProbWorldsError):
    """A formula with free variables was used where a sentence is required."""


class EvaluationError(ProbWorldsError):
    """A formula cannot be evaluated directly in a world (quantified or non-ground)."""


class WorldSpaceTooLargeError(ProbWorldsError):
    def __init__(self, n_atoms, cap):
        self.n_atoms = n_atoms
        self.cap = cap
        super().__init__(
            f"world space too large: {n_atoms} ground atoms exceeds the cap of {cap} "
            f"(2^{n_atoms} worlds)"
        )


class DistributionError(ProbWorldsError):
    """Weights do not form a probability distribution over the world space."""


class SignatureMismatchError(ProbWorldsError):
    pass


class EmptyDomainError(ProbWorldsError):
    pass


class KnowledgeBaseError(ProbWorldsError):
    """Malformed assertion or schema."""


class InconsistentKnowledgeBaseError(ProbWorldsError):
    def __init__(self, note, clashing=()):
        self.note = note
        self.clashing = tuple(clashing)
        super().__init__(note)


class KBFileError(ProbWorldsError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
