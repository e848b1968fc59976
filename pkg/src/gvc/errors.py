class SoundnessError(AssertionError):
    """A proved identity failed on a concrete instance; the implementation is wrong."""


class ParseError(ValueError):
    """Rejected expression text. ``position`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at byte {position})")
        self.message = message
        self.position = position
