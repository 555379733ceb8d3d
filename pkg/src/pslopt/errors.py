class ContractError(ValueError):
    """A caller broke a documented precondition (bad index, bad length...)."""


class ParseError(ValueError):
    """Malformed sequence text.

    ``position`` is the 1-based character offset of the first bad character,
    or ``None`` when the problem is not tied to one character.
    """

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
