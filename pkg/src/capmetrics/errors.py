"""Exception hierarchy shared by all metric modules."""


class CapMetricsError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CapMetricsError):
    """Input that violates a metric precondition (CLI exit code 1)."""


class EmptyCorpus(ValidationError):
    pass


class NoReferences(ValidationError):
    pass


class NoCandidates(ValidationError):
    pass


class BadTopK(ValidationError):
    pass


class RaggedCandidates(ValidationError):
    def __init__(self, item_id, n_candidates, top_k):
        self.item_id = item_id
        super().__init__(
            f"item {item_id!r} has {n_candidates} candidate(s), top_k={top_k} requested"
        )


class MissingLikelihood(ValidationError):
    def __init__(self, item_id, index):
        self.item_id = item_id
        super().__init__(f"item {item_id!r}: candidate {index} has no likelihood")


class DegenerateVariance(ValidationError):
    pass


class LexiconError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class DuplicateId(ParseError):
    pass


class EmptyItem(ParseError):
    pass
