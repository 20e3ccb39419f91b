"""Exception and warning types shared across the package."""


class DestructureError(Exception):
    """Base class for all library errors."""


class NoSections(DestructureError):
    """Sectioned input contained no '== Title ==' heading line."""


class EmptySection(DestructureError):
    """A section heading had no body sentences."""


class CorpusFormatError(DestructureError):
    """A corpus file or JSONL record could not be interpreted."""


class NoCandidates(DestructureError):
    """Every token was a stopword or a digit run; no keyword candidates."""


class TooFewSentences(DestructureError):
    """Fewer sentences than keywords; seeding cannot complete."""


class DimensionMismatch(DestructureError):
    """Vectors of different dimensions were combined."""


class RemoteUnavailable(DestructureError):
    """The embedding endpoint could not be reached or refused to serve."""


class ContractViolation(DestructureError):
    """The embedding endpoint answered outside its wire contract."""


class IdSetMismatch(DestructureError):
    """Evaluation inputs do not cover the same sentence id set."""


class AllDocumentsFailed(DestructureError):
    """Every document in an experiment corpus failed to process."""


class NotConvergedWarning(UserWarning):
    """Ranking stopped at the iteration cap before reaching tolerance."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"pagerank did not converge after {iterations} iterations "
            f"(last max delta {residual:.3e})"
        )
